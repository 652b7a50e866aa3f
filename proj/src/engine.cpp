#include "museo/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "museo/image_io.hpp"
#include "museo/imgproc.hpp"
#include "museo/metrics.hpp"

namespace museo::engine {

namespace desc = museo::descriptors;

const GalleryEntry* MuseumIndex::find(int label) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), label,
                               [](const GalleryEntry& e, int l) { return e.label < l; });
    return (it != entries.end() && it->label == label) ? &*it : nullptr;
}

descriptors::DescriptorKind color_kind_for(const RunConfig& cfg) {
    (void)cfg;
    return desc::DescriptorKind::COLOR_BLOCK;
}

std::map<desc::DescriptorKind, desc::DescriptorVector> compute_descriptors(
    const RasterImage& img, const RunConfig& cfg, const BinaryMask* mask) {
    std::map<desc::DescriptorKind, desc::DescriptorVector> out;
    RasterImage rgb = img.space == ColorSpace::RGB ? img
                                                   : imgproc::convert_color(img, ColorSpace::RGB);
    RasterImage gray = imgproc::convert_color(rgb, ColorSpace::GRAY);
    // texture descriptors run on a fixed-size resize of the crop
    RasterImage analysis = imgproc::resize_bilinear(gray, cfg.analysis_size, cfg.analysis_size);

    for (const std::string& name : cfg.active) {
        const desc::DescriptorKind kind = desc::kind_from_string(name);
        switch (kind) {
            case desc::DescriptorKind::GRAY_1D:
                out[kind] = desc::hist_gray_1d(rgb, cfg.gray_bins, mask);
                break;
            case desc::DescriptorKind::COLOR_3D:
                out[kind] = desc::hist_3d(rgb, cfg.color3d_colorspace(), cfg.color3d_bins, mask);
                break;
            case desc::DescriptorKind::COLOR_BLOCK:
                out[kind] = desc::block_histogram(rgb, cfg.block_grid, cfg.block_spec(), mask);
                break;
            case desc::DescriptorKind::COLOR_MULTIRES:
                out[kind] =
                    desc::multires_histogram(rgb, cfg.multires_levels, cfg.block_spec(), mask);
                break;
            case desc::DescriptorKind::TEXTURE_LBP:
                out[kind] = desc::lbp_descriptor(analysis, cfg.lbp_grid);
                break;
            case desc::DescriptorKind::TEXTURE_DCT:
                out[kind] = desc::dct_descriptor(analysis, cfg.dct_keep, cfg.analysis_size);
                break;
            case desc::DescriptorKind::TEXTURE_HOG:
                out[kind] = desc::hog_descriptor(analysis, cfg.hog_params());
                break;
        }
    }
    return out;
}

descriptors::AuthorCatalog load_catalog(const std::filesystem::path& catalog_file) {
    std::ifstream in(catalog_file);
    if (!in) throw CatalogMismatch("cannot open catalog: " + catalog_file.string());
    desc::AuthorCatalog catalog;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string label_str, author, title;
        if (!std::getline(ss, label_str, '\t') || !std::getline(ss, author, '\t'))
            throw CatalogMismatch("catalog line " + std::to_string(lineno) +
                                  ": expected label<TAB>author<TAB>title");
        std::getline(ss, title, '\t');
        desc::AuthorCatalog::Entry entry;
        try {
            entry.label = std::stoi(label_str);
        } catch (const std::exception&) {
            throw CatalogMismatch("catalog line " + std::to_string(lineno) + ": bad label");
        }
        if (author.empty())
            throw CatalogMismatch("catalog line " + std::to_string(lineno) + ": empty author");
        entry.author = author;
        entry.title = title;
        for (const auto& existing : catalog.entries)
            if (existing.label == entry.label)
                throw CatalogMismatch("duplicate catalog label " + label_str);
        catalog.entries.push_back(std::move(entry));
    }
    return catalog;
}

namespace {

// Museum files are named <anything>_<label>.<ext> or <label>.<ext>.
int label_from_filename(const std::filesystem::path& path) {
    const std::string stem = path.stem().string();
    std::size_t end = stem.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(stem[end - 1]))) --end;
    if (end == stem.size()) return -1;
    try {
        return std::stoi(stem.substr(end));
    } catch (const std::exception&) {
        return -1;
    }
}

bool is_image_file(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

MuseumIndex build_index(const std::filesystem::path& museum_dir,
                        const std::filesystem::path& catalog_file, const RunConfig& cfg) {
    desc::AuthorCatalog catalog = load_catalog(catalog_file);

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(museum_dir))
        if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    MuseumIndex index;
    index.config_fingerprint = cfg.descriptor_fingerprint();
    for (const auto& file : files) {
        const int label = label_from_filename(file);
        if (label < 0) throw CatalogMismatch("cannot parse label from " + file.string());
        const desc::AuthorCatalog::Entry* row = nullptr;
        for (const auto& e : catalog.entries)
            if (e.label == label) {
                row = &e;
                break;
            }
        if (!row) throw CatalogMismatch("no catalog row for label " + std::to_string(label));

        RasterImage img;
        try {
            img = io::load_image(file);
        } catch (const UnreadableImage&) {
            if (cfg.on_unreadable == "skip") continue;
            throw;
        }

        GalleryEntry entry;
        entry.label = label;
        entry.author = row->author;
        entry.title = row->title;
        entry.vectors = compute_descriptors(img, cfg);
        if (cfg.index_features) {
            RasterImage gray = imgproc::convert_color(img, ColorSpace::GRAY);
            entry.feats = features::detect_and_describe(gray, cfg.orb);
        }
        index.entries.push_back(std::move(entry));
    }
    std::sort(index.entries.begin(), index.entries.end(),
              [](const GalleryEntry& a, const GalleryEntry& b) { return a.label < b.label; });
    return index;
}

namespace {

metrics::Histogram to_histogram(const desc::DescriptorVector& v) {
    return metrics::Histogram::normalized(v.values);
}

std::vector<RankedLabel> sort_ranked(std::vector<RankedLabel> ranked, metrics::Polarity polarity) {
    std::sort(ranked.begin(), ranked.end(), [&](const RankedLabel& a, const RankedLabel& b) {
        if (a.score != b.score)
            return polarity == metrics::Polarity::HIGHER_IS_CLOSER ? a.score > b.score
                                                                   : a.score < b.score;
        return a.label < b.label;
    });
    return ranked;
}

}  // namespace

std::vector<RankedLabel> rank_by_descriptor(const MuseumIndex& index,
                                            const descriptors::DescriptorVector& query,
                                            descriptors::DescriptorKind kind,
                                            metrics::MeasureKind metric) {
    metrics::Histogram qh = to_histogram(query);
    std::vector<RankedLabel> ranked;
    ranked.reserve(index.entries.size());
    for (const auto& entry : index.entries) {
        auto it = entry.vectors.find(kind);
        if (it == entry.vectors.end() || !it->second.comparable_with(query))
            throw LayoutMismatch("index entry lacks a comparable " +
                                 std::string(desc::to_string(kind)) + " vector");
        metrics::SimilarityScore s = metrics::histogram_measure(metric, qh, to_histogram(it->second));
        ranked.push_back({entry.label, s.value});
    }
    return sort_ranked(std::move(ranked), metrics::polarity_of(metric));
}

namespace {

// Distances on a common lower-is-closer scale in [0, 1].
std::vector<double> normalized_distances(const MuseumIndex& index,
                                         const desc::DescriptorVector& query,
                                         desc::DescriptorKind kind,
                                         metrics::MeasureKind metric) {
    metrics::Histogram qh = to_histogram(query);
    std::vector<double> raw;
    raw.reserve(index.entries.size());
    for (const auto& entry : index.entries) {
        auto it = entry.vectors.find(kind);
        if (it == entry.vectors.end() || !it->second.comparable_with(query))
            throw LayoutMismatch("index entry lacks a comparable vector");
        raw.push_back(metrics::histogram_measure(metric, qh, to_histogram(it->second)).value);
    }
    double lo = *std::min_element(raw.begin(), raw.end());
    double hi = *std::max_element(raw.begin(), raw.end());
    const double span = hi - lo;
    std::vector<double> out(raw.size(), 0.0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double unit = span > 0.0 ? (raw[i] - lo) / span : 0.0;
        out[i] = metrics::polarity_of(metric) == metrics::Polarity::HIGHER_IS_CLOSER
                     ? 1.0 - unit
                     : unit;
    }
    return out;
}

}  // namespace

std::vector<RankedLabel> combine_rankings(const MuseumIndex& index, const CropDescriptors& crop,
                                          const DescriptorWeights& weights, const RunConfig& cfg) {
    const double total = weights.color + weights.texture + weights.text;
    if (total <= 0.0) throw NoActiveDescriptor("all combination weights are zero");
    if (index.entries.empty()) return {};

    std::vector<double> combined(index.entries.size(), 0.0);
    if (weights.color > 0.0) {
        auto kind = color_kind_for(cfg);
        auto it = crop.vectors.find(kind);
        if (it == crop.vectors.end()) throw NoActiveDescriptor("color descriptor missing");
        auto d = normalized_distances(index, it->second, kind, cfg.color_measure());
        for (std::size_t i = 0; i < d.size(); ++i) combined[i] += weights.color / total * d[i];
    }
    if (weights.texture > 0.0) {
        auto it = crop.vectors.find(desc::DescriptorKind::TEXTURE_HOG);
        if (it == crop.vectors.end()) throw NoActiveDescriptor("texture descriptor missing");
        auto d = normalized_distances(index, it->second, desc::DescriptorKind::TEXTURE_HOG,
                                      cfg.texture_measure());
        for (std::size_t i = 0; i < d.size(); ++i) combined[i] += weights.texture / total * d[i];
    }
    if (weights.text > 0.0) {
        desc::AuthorCatalog catalog;
        for (const auto& entry : index.entries)
            catalog.entries.push_back({entry.label, entry.author, entry.title});
        desc::AuthorMatch match = desc::match_author(crop.ocr_text, catalog);
        for (std::size_t i = 0; i < index.entries.size(); ++i) {
            double d = match.labels.count(index.entries[i].label) ? 0.0 : 1.0;
            combined[i] += weights.text / total * d;
        }
    }

    std::vector<RankedLabel> ranked;
    ranked.reserve(index.entries.size());
    for (std::size_t i = 0; i < index.entries.size(); ++i)
        ranked.push_back({index.entries[i].label, combined[i]});
    return sort_ranked(std::move(ranked), metrics::Polarity::LOWER_IS_CLOSER);
}

std::vector<RankedLabel> rank_by_features(const MuseumIndex& index,
                                          const features::ImageFeatures& query,
                                          const RunConfig& cfg) {
    std::vector<RankedLabel> similar;
    for (const auto& entry : index.entries) {
        features::MatchResult m =
            features::match_descriptors(query.descriptors, entry.feats.descriptors, cfg.orb);
        if (m.verdict == features::Verdict::SIMILAR)
            similar.push_back({entry.label, static_cast<double>(m.pairs.size())});
    }
    if (similar.empty()) return {{metrics::kNotInMuseum, 0.0}};
    return sort_ranked(std::move(similar), metrics::Polarity::HIGHER_IS_CLOSER);
}

QueryMode mode_from_string(const std::string& name) {
    if (name == "color") return QueryMode::COLOR;
    if (name == "texture") return QueryMode::TEXTURE;
    if (name == "text") return QueryMode::TEXT;
    if (name == "combined") return QueryMode::COMBINED;
    if (name == "feature") return QueryMode::FEATURE;
    throw ConfigError("unknown query mode: " + name);
}

const char* to_string(QueryMode mode) {
    switch (mode) {
        case QueryMode::COLOR:    return "color";
        case QueryMode::TEXTURE:  return "texture";
        case QueryMode::TEXT:     return "text";
        case QueryMode::COMBINED: return "combined";
        case QueryMode::FEATURE:  return "feature";
    }
    return "?";
}

QueryOutcome query(const MuseumIndex& index, const RasterImage& img, int k, QueryMode mode,
                   const RunConfig& cfg, const descriptors::OcrPort* ocr) {
    QueryOutcome outcome;
    outcome.pipeline = preprocess::preprocess_pipeline(img, cfg);

    for (const auto& crop : outcome.pipeline.crops) {
        CropDescriptors cd;
        if (mode != QueryMode::FEATURE)
            cd.vectors = compute_descriptors(crop.image, cfg, &crop.mask);
        if (mode == QueryMode::FEATURE) {
            RasterImage gray = imgproc::convert_color(crop.image, ColorSpace::GRAY);
            cd.feats = features::detect_and_describe(gray, cfg.orb, &crop.mask);
        }
        if ((mode == QueryMode::TEXT || mode == QueryMode::COMBINED) && ocr != nullptr) {
            // read the text from the detected box when one exists, else the crop
            for (const Box& b : outcome.pipeline.report.text_boxes) {
                Box local{b.x1 - crop.origin.x, b.y1 - crop.origin.y, b.x2 - crop.origin.x,
                          b.y2 - crop.origin.y};
                if (local.x1 < 0 || local.y1 < 0 || local.x2 > crop.image.width ||
                    local.y2 > crop.image.height)
                    continue;
                RasterImage boxed(local.width(), local.height(), crop.image.space);
                boxed.channels = crop.image.channels;
                boxed.samples.assign(
                    static_cast<std::size_t>(local.width()) * local.height() * boxed.channels, 0);
                for (int y = 0; y < boxed.height; ++y)
                    for (int x = 0; x < boxed.width; ++x)
                        for (int c = 0; c < boxed.channels; ++c)
                            boxed.at(x, y, c) = crop.image.at(local.x1 + x, local.y1 + y, c);
                cd.ocr_text = desc::read_text_descriptor(boxed, *ocr);
                break;
            }
            if (cd.ocr_text.empty()) cd.ocr_text = ocr->recognize(crop.image);
        }

        std::vector<RankedLabel> ranked;
        switch (mode) {
            case QueryMode::COLOR:
                ranked = rank_by_descriptor(index, cd.vectors.at(color_kind_for(cfg)),
                                            color_kind_for(cfg), cfg.color_measure());
                break;
            case QueryMode::TEXTURE:
                ranked = rank_by_descriptor(index,
                                            cd.vectors.at(desc::DescriptorKind::TEXTURE_HOG),
                                            desc::DescriptorKind::TEXTURE_HOG,
                                            cfg.texture_measure());
                break;
            case QueryMode::TEXT:
                ranked = combine_rankings(index, cd, {0.0, 0.0, 1.0}, cfg);
                break;
            case QueryMode::COMBINED:
                ranked = combine_rankings(
                    index, cd, {cfg.weight_color, cfg.weight_texture, cfg.weight_text}, cfg);
                break;
            case QueryMode::FEATURE:
                ranked = rank_by_features(index, cd.feats, cfg);
                break;
        }
        if (k > 0 && static_cast<int>(ranked.size()) > k) ranked.resize(static_cast<std::size_t>(k));
        std::vector<int> labels;
        std::vector<double> scores;
        for (const auto& r : ranked) {
            labels.push_back(r.label);
            scores.push_back(r.score);
        }
        outcome.rankings.push_back(std::move(labels));
        outcome.scores.push_back(std::move(scores));
    }
    return outcome;
}

}  // namespace museo::engine
