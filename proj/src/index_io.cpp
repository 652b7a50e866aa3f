#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <type_traits>

#include "museo/engine.hpp"

namespace museo::engine {

namespace {

constexpr char kMagic[8] = {'M', 'U', 'S', 'E', 'O', 'I', 'D', 'X'};

// Little-endian scalar I/O. The format is defined little-endian; these
// helpers byte-swap on big-endian hosts.
template <typename T>
void write_scalar(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(buf, buf + sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_scalar(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw CorruptIndex("unexpected end of index file");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(buf, buf + sizeof(T));
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

void write_string(std::ostream& out, const std::string& s) {
    write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    const auto len = read_scalar<std::uint32_t>(in);
    if (len > (1u << 20)) throw CorruptIndex("implausible string length");
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw CorruptIndex("unexpected end of index file");
    return s;
}

void write_layout(std::ostream& out, const descriptors::DescriptorLayout& l) {
    write_scalar<std::uint8_t>(out, static_cast<std::uint8_t>(l.kind));
    write_scalar<std::uint8_t>(out, static_cast<std::uint8_t>(l.space));
    write_scalar<std::int32_t>(out, l.bins);
    write_scalar<std::int32_t>(out, l.grid);
    write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(l.levels.size()));
    for (int g : l.levels) write_scalar<std::int32_t>(out, g);
    write_scalar<std::uint8_t>(out, static_cast<std::uint8_t>(l.block.type));
    write_scalar<std::uint8_t>(out, static_cast<std::uint8_t>(l.block.space));
    write_scalar<std::int32_t>(out, l.block.bins);
    write_scalar<std::int32_t>(out, l.keep);
    write_scalar<std::int32_t>(out, l.analysis_size);
    write_scalar<std::int32_t>(out, l.cell);
    write_scalar<std::int32_t>(out, l.block_cells);
}

descriptors::DescriptorLayout read_layout(std::istream& in) {
    descriptors::DescriptorLayout l;
    l.kind = static_cast<descriptors::DescriptorKind>(read_scalar<std::uint8_t>(in));
    l.space = static_cast<ColorSpace>(read_scalar<std::uint8_t>(in));
    l.bins = read_scalar<std::int32_t>(in);
    l.grid = read_scalar<std::int32_t>(in);
    const auto n_levels = read_scalar<std::uint32_t>(in);
    if (n_levels > 64) throw CorruptIndex("implausible level count");
    l.levels.resize(n_levels);
    for (auto& g : l.levels) g = read_scalar<std::int32_t>(in);
    l.block.type = static_cast<descriptors::BlockSpec::Type>(read_scalar<std::uint8_t>(in));
    l.block.space = static_cast<ColorSpace>(read_scalar<std::uint8_t>(in));
    l.block.bins = read_scalar<std::int32_t>(in);
    l.keep = read_scalar<std::int32_t>(in);
    l.analysis_size = read_scalar<std::int32_t>(in);
    l.cell = read_scalar<std::int32_t>(in);
    l.block_cells = read_scalar<std::int32_t>(in);
    return l;
}

}  // namespace

void save_index(const MuseumIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CorruptIndex("cannot write index file: " + path.string());

    out.write(kMagic, sizeof(kMagic));
    write_scalar<std::uint32_t>(out, MuseumIndex::kFormatVersion);
    write_scalar<std::uint64_t>(out, index.config_fingerprint);
    write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(index.entries.size()));

    for (const auto& entry : index.entries) {
        write_scalar<std::int32_t>(out, entry.label);
        write_string(out, entry.author);
        write_string(out, entry.title);

        write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(entry.vectors.size()));
        for (const auto& [kind, vec] : entry.vectors) {
            write_layout(out, vec.layout);
            write_scalar<std::uint64_t>(out, vec.values.size());
            for (double v : vec.values) write_scalar<double>(out, v);
        }

        // keypoint records as 32-bit floats/ints, then 32-byte descriptor rows
        write_scalar<std::uint32_t>(out, static_cast<std::uint32_t>(entry.feats.keypoints.size()));
        for (const auto& kp : entry.feats.keypoints) {
            write_scalar<float>(out, kp.x);
            write_scalar<float>(out, kp.y);
            write_scalar<float>(out, kp.score);
            write_scalar<float>(out, kp.orientation_deg);
            write_scalar<std::int32_t>(out, kp.octave);
        }
        for (const auto& d : entry.feats.descriptors)
            for (std::uint64_t word : d.bits) write_scalar<std::uint64_t>(out, word);
    }
    if (!out) throw CorruptIndex("index write failed: " + path.string());
}

MuseumIndex load_index(const std::filesystem::path& path, const RunConfig& cfg, bool force) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptIndex("cannot open index file: " + path.string());

    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw CorruptIndex("bad magic in " + path.string());

    const auto version = read_scalar<std::uint32_t>(in);
    if (version != MuseumIndex::kFormatVersion && !force)
        throw VersionMismatch("index format " + std::to_string(version) + ", expected " +
                              std::to_string(MuseumIndex::kFormatVersion));

    MuseumIndex index;
    index.config_fingerprint = read_scalar<std::uint64_t>(in);
    if (index.config_fingerprint != cfg.descriptor_fingerprint() && !force)
        throw FingerprintMismatch("index was built under a different descriptor configuration");

    const auto n_entries = read_scalar<std::uint32_t>(in);
    if (n_entries > (1u << 24)) throw CorruptIndex("implausible entry count");
    index.entries.reserve(n_entries);
    for (std::uint32_t e = 0; e < n_entries; ++e) {
        GalleryEntry entry;
        entry.label = read_scalar<std::int32_t>(in);
        entry.author = read_string(in);
        entry.title = read_string(in);

        const auto n_vectors = read_scalar<std::uint32_t>(in);
        if (n_vectors > 64) throw CorruptIndex("implausible vector count");
        for (std::uint32_t v = 0; v < n_vectors; ++v) {
            descriptors::DescriptorVector vec;
            vec.layout = read_layout(in);
            const auto len = read_scalar<std::uint64_t>(in);
            if (len != vec.layout.expected_length())
                throw CorruptIndex("vector length disagrees with its layout");
            vec.values.resize(len);
            for (auto& x : vec.values) x = read_scalar<double>(in);
            entry.vectors.emplace(vec.layout.kind, std::move(vec));
        }

        const auto n_kps = read_scalar<std::uint32_t>(in);
        if (n_kps > (1u << 22)) throw CorruptIndex("implausible keypoint count");
        entry.feats.keypoints.resize(n_kps);
        for (auto& kp : entry.feats.keypoints) {
            kp.x = read_scalar<float>(in);
            kp.y = read_scalar<float>(in);
            kp.score = read_scalar<float>(in);
            kp.orientation_deg = read_scalar<float>(in);
            kp.octave = read_scalar<std::int32_t>(in);
        }
        entry.feats.descriptors.resize(n_kps);
        for (auto& d : entry.feats.descriptors)
            for (auto& word : d.bits) word = read_scalar<std::uint64_t>(in);

        index.entries.push_back(std::move(entry));
    }
    return index;
}

}  // namespace museo::engine
