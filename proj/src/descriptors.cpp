#include "museo/descriptors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "museo/imgproc.hpp"

namespace museo::descriptors {

const char* to_string(DescriptorKind kind) {
    switch (kind) {
        case DescriptorKind::GRAY_1D:        return "gray1d";
        case DescriptorKind::COLOR_3D:       return "color3d";
        case DescriptorKind::COLOR_BLOCK:    return "block";
        case DescriptorKind::COLOR_MULTIRES: return "multires";
        case DescriptorKind::TEXTURE_LBP:    return "lbp";
        case DescriptorKind::TEXTURE_DCT:    return "dct";
        case DescriptorKind::TEXTURE_HOG:    return "hog";
    }
    return "?";
}

DescriptorKind kind_from_string(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(DescriptorKind::TEXTURE_HOG); ++k) {
        auto kind = static_cast<DescriptorKind>(k);
        if (name == to_string(kind)) return kind;
    }
    throw BadBinCount("unknown descriptor kind: " + name);
}

std::size_t BlockSpec::length() const {
    if (type == Type::GRAY_1D) return static_cast<std::size_t>(bins);
    return static_cast<std::size_t>(bins) * bins * bins;
}

std::size_t DescriptorLayout::expected_length() const {
    switch (kind) {
        case DescriptorKind::GRAY_1D:
            return static_cast<std::size_t>(bins);
        case DescriptorKind::COLOR_3D:
            return static_cast<std::size_t>(bins) * bins * bins;
        case DescriptorKind::COLOR_BLOCK:
            return static_cast<std::size_t>(grid) * grid * block.length();
        case DescriptorKind::COLOR_MULTIRES: {
            std::size_t total = 0;
            for (int g : levels) total += static_cast<std::size_t>(g) * g;
            return total * block.length();
        }
        case DescriptorKind::TEXTURE_LBP:
            return static_cast<std::size_t>(grid) * grid * 256;
        case DescriptorKind::TEXTURE_DCT: {
            std::size_t tiles = static_cast<std::size_t>(analysis_size / 8) * (analysis_size / 8);
            return tiles * keep;
        }
        case DescriptorKind::TEXTURE_HOG: {
            HogParams p;
            p.cell = cell;
            p.block_cells = block_cells;
            p.bins = bins;
            p.analysis_size = analysis_size;
            return hog_length(p);
        }
    }
    return 0;
}

namespace {

void l1_normalize(std::vector<double>& v) {
    double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (total > 0.0)
        for (double& x : v) x /= total;
}

inline bool masked_out(const BinaryMask* mask, int x, int y) {
    return mask != nullptr && !mask->get(x, y);
}

// Tile bounds under the remainder-absorbed-by-last-row/column rule.
struct TileRange {
    int x0, x1, y0, y1;
};

TileRange tile_range(int width, int height, int grid, int tx, int ty) {
    const int bw = width / grid, bh = height / grid;
    TileRange r;
    r.x0 = tx * bw;
    r.x1 = (tx == grid - 1) ? width : (tx + 1) * bw;
    r.y0 = ty * bh;
    r.y1 = (ty == grid - 1) ? height : (ty + 1) * bh;
    return r;
}

void accumulate_gray(const RasterImage& gray, const BinaryMask* mask, const TileRange& r,
                     int bins, double* out) {
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) {
            if (masked_out(mask, x, y)) continue;
            out[gray.at(x, y) * bins / 256] += 1.0;
        }
}

void accumulate_3d(const RasterImage& img3, const BinaryMask* mask, const TileRange& r,
                   int bins, double* out) {
    for (int y = r.y0; y < r.y1; ++y)
        for (int x = r.x0; x < r.x1; ++x) {
            if (masked_out(mask, x, y)) continue;
            int b0 = img3.at(x, y, 0) * bins / 256;
            int b1 = img3.at(x, y, 1) * bins / 256;
            int b2 = img3.at(x, y, 2) * bins / 256;
            out[(b0 * bins + b1) * bins + b2] += 1.0;
        }
}

void check_mask(const RasterImage& img, const BinaryMask* mask) {
    if (mask && (mask->width != img.width || mask->height != img.height))
        throw DimensionMismatch("mask dimensions must match the image");
}

}  // namespace

DescriptorVector hist_gray_1d(const RasterImage& img, int bins, const BinaryMask* mask) {
    if (bins < 2 || bins > 256) throw BadBinCount("gray bins must be in [2, 256]");
    check_mask(img, mask);
    RasterImage gray = img.space == ColorSpace::GRAY ? img
                                                     : imgproc::convert_color(img, ColorSpace::GRAY);
    DescriptorVector d;
    d.layout.kind = DescriptorKind::GRAY_1D;
    d.layout.space = ColorSpace::GRAY;
    d.layout.bins = bins;
    d.values.assign(bins, 0.0);
    accumulate_gray(gray, mask, {0, gray.width, 0, gray.height}, bins, d.values.data());
    l1_normalize(d.values);
    return d;
}

DescriptorVector hist_3d(const RasterImage& img, ColorSpace space, int bins_per_channel,
                         const BinaryMask* mask) {
    if (space == ColorSpace::GRAY) throw GrayInput("hist_3d needs a 3-channel space");
    if (bins_per_channel < 2 || bins_per_channel > 32)
        throw BadBinCount("3D bins per channel must be in [2, 32]");
    if (img.space == ColorSpace::GRAY) throw GrayInput("hist_3d input must be 3-channel");
    check_mask(img, mask);
    RasterImage conv = img.space == space ? img : imgproc::convert_color(img, space);
    DescriptorVector d;
    d.layout.kind = DescriptorKind::COLOR_3D;
    d.layout.space = space;
    d.layout.bins = bins_per_channel;
    d.values.assign(static_cast<std::size_t>(bins_per_channel) * bins_per_channel *
                        bins_per_channel,
                    0.0);
    accumulate_3d(conv, mask, {0, conv.width, 0, conv.height}, bins_per_channel,
                  d.values.data());
    l1_normalize(d.values);
    return d;
}

namespace {

// Shared core: per-tile histograms, each L1-normalized, row-major tiles.
std::vector<double> block_values(const RasterImage& img, int grid, const BlockSpec& spec,
                                 const BinaryMask* mask) {
    RasterImage conv;
    if (spec.type == BlockSpec::Type::GRAY_1D)
        conv = img.space == ColorSpace::GRAY ? img : imgproc::convert_color(img, ColorSpace::GRAY);
    else
        conv = img.space == spec.space ? img : imgproc::convert_color(img, spec.space);

    const std::size_t per = spec.length();
    std::vector<double> values(static_cast<std::size_t>(grid) * grid * per, 0.0);
    std::vector<double> tile(per);
    for (int ty = 0; ty < grid; ++ty) {
        for (int tx = 0; tx < grid; ++tx) {
            std::fill(tile.begin(), tile.end(), 0.0);
            TileRange r = tile_range(img.width, img.height, grid, tx, ty);
            if (spec.type == BlockSpec::Type::GRAY_1D)
                accumulate_gray(conv, mask, r, spec.bins, tile.data());
            else
                accumulate_3d(conv, mask, r, spec.bins, tile.data());
            l1_normalize(tile);
            std::copy(tile.begin(), tile.end(),
                      values.begin() + (static_cast<std::size_t>(ty) * grid + tx) * per);
        }
    }
    return values;
}

void validate_block_args(const RasterImage& img, int grid, const BlockSpec& spec) {
    if (grid < 1) throw BadBinCount("grid must be >= 1");
    if (img.width < grid || img.height < grid)
        throw ImageTooSmall("image smaller than the tile grid");
    if (spec.type == BlockSpec::Type::GRAY_1D) {
        if (spec.bins < 2 || spec.bins > 256) throw BadBinCount("tile gray bins in [2, 256]");
    } else {
        if (spec.bins < 2 || spec.bins > 32) throw BadBinCount("tile 3D bins in [2, 32]");
        if (img.space == ColorSpace::GRAY) throw GrayInput("3D tiles need 3-channel input");
    }
}

}  // namespace

DescriptorVector block_histogram(const RasterImage& img, int grid, const BlockSpec& spec,
                                 const BinaryMask* mask) {
    validate_block_args(img, grid, spec);
    check_mask(img, mask);
    DescriptorVector d;
    d.layout.kind = DescriptorKind::COLOR_BLOCK;
    d.layout.space = spec.type == BlockSpec::Type::GRAY_1D ? ColorSpace::GRAY : spec.space;
    d.layout.grid = grid;
    d.layout.block = spec;
    d.values = block_values(img, grid, spec, mask);
    return d;
}

DescriptorVector multires_histogram(const RasterImage& img, const std::vector<int>& levels,
                                    const BlockSpec& spec, const BinaryMask* mask) {
    if (levels.empty()) throw BadBinCount("at least one pyramid level");
    for (int g : levels) validate_block_args(img, g, spec);
    check_mask(img, mask);
    DescriptorVector d;
    d.layout.kind = DescriptorKind::COLOR_MULTIRES;
    d.layout.space = spec.type == BlockSpec::Type::GRAY_1D ? ColorSpace::GRAY : spec.space;
    d.layout.levels = levels;
    d.layout.block = spec;
    for (int g : levels) {
        auto level = block_values(img, g, spec, mask);
        d.values.insert(d.values.end(), level.begin(), level.end());
    }
    return d;
}

// ---------------------------------------------------------------------------
// LBP
// ---------------------------------------------------------------------------

RasterImage lbp_codes(const RasterImage& gray) {
    if (gray.channels != 1) throw MultiChannelInput("lbp expects one channel");
    // clockwise from top-left; the first neighbor lands in the MSB
    static const int dx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
    static const int dy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
    RasterImage codes(gray.width, gray.height, ColorSpace::GRAY);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            const std::uint8_t center = gray.at(x, y);
            unsigned code = 0;
            for (int k = 0; k < 8; ++k) {
                code <<= 1;
                if (gray.at_clamped(x + dx[k], y + dy[k]) >= center) code |= 1u;
            }
            codes.at(x, y) = static_cast<std::uint8_t>(code);
        }
    }
    return codes;
}

DescriptorVector lbp_descriptor(const RasterImage& gray, int grid) {
    if (gray.channels != 1) throw MultiChannelInput("lbp expects one channel");
    if (grid < 1) throw BadBinCount("grid must be >= 1");
    if (gray.width < grid || gray.height < grid)
        throw ImageTooSmall("image smaller than the tile grid");
    RasterImage codes = lbp_codes(gray);

    DescriptorVector d;
    d.layout.kind = DescriptorKind::TEXTURE_LBP;
    d.layout.grid = grid;
    d.values.assign(static_cast<std::size_t>(grid) * grid * 256, 0.0);
    std::vector<double> tile(256);
    for (int ty = 0; ty < grid; ++ty) {
        for (int tx = 0; tx < grid; ++tx) {
            std::fill(tile.begin(), tile.end(), 0.0);
            TileRange r = tile_range(codes.width, codes.height, grid, tx, ty);
            accumulate_gray(codes, nullptr, r, 256, tile.data());
            l1_normalize(tile);
            std::copy(tile.begin(), tile.end(),
                      d.values.begin() + (static_cast<std::size_t>(ty) * grid + tx) * 256);
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// DCT
// ---------------------------------------------------------------------------

const int kZigzag8x8[64] = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

void dct8x8(const double in[64], double out[64]) {
    static double cos_table[8][8];
    static bool init = false;
    if (!init) {
        for (int u = 0; u < 8; ++u)
            for (int x = 0; x < 8; ++x)
                cos_table[u][x] = std::cos((2 * x + 1) * u * M_PI / 16.0);
        init = true;
    }
    const double a0 = std::sqrt(1.0 / 8.0), a = std::sqrt(2.0 / 8.0);
    double rows[64];
    for (int y = 0; y < 8; ++y)
        for (int u = 0; u < 8; ++u) {
            double acc = 0;
            for (int x = 0; x < 8; ++x) acc += in[y * 8 + x] * cos_table[u][x];
            rows[y * 8 + u] = acc * (u == 0 ? a0 : a);
        }
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) {
            double acc = 0;
            for (int y = 0; y < 8; ++y) acc += rows[y * 8 + u] * cos_table[v][y];
            out[v * 8 + u] = acc * (v == 0 ? a0 : a);
        }
}

DescriptorVector dct_descriptor(const RasterImage& gray, int keep, int analysis_size) {
    if (gray.channels != 1) throw MultiChannelInput("dct expects one channel");
    if (keep < 1 || keep > 64) throw BadKeepCount("keep must be in [1, 64]");
    if (analysis_size < 8 || analysis_size % 8 != 0)
        throw GeometryMismatch("analysis size must be a positive multiple of 8");

    RasterImage resized = (gray.width == analysis_size && gray.height == analysis_size)
                              ? gray
                              : imgproc::resize_bilinear(gray, analysis_size, analysis_size);
    const int tiles_per_side = analysis_size / 8;

    DescriptorVector d;
    d.layout.kind = DescriptorKind::TEXTURE_DCT;
    d.layout.keep = keep;
    d.layout.analysis_size = analysis_size;
    d.values.reserve(static_cast<std::size_t>(tiles_per_side) * tiles_per_side * keep);

    double tile[64], coeffs[64];
    for (int ty = 0; ty < tiles_per_side; ++ty)
        for (int tx = 0; tx < tiles_per_side; ++tx) {
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x)
                    tile[y * 8 + x] = resized.at(tx * 8 + x, ty * 8 + y);
            dct8x8(tile, coeffs);
            for (int k = 0; k < keep; ++k) d.values.push_back(coeffs[kZigzag8x8[k]]);
        }
    return d;
}

// ---------------------------------------------------------------------------
// HOG
// ---------------------------------------------------------------------------

std::size_t hog_length(const HogParams& p) {
    const int cells = p.analysis_size / p.cell;
    const int blocks_per_side = cells - p.block_cells + 1;
    return static_cast<std::size_t>(blocks_per_side) * blocks_per_side * p.block_cells *
           p.block_cells * p.bins;
}

DescriptorVector hog_descriptor(const RasterImage& gray, const HogParams& p) {
    if (gray.channels != 1) throw MultiChannelInput("hog expects one channel");
    if (p.cell < 1 || p.block_cells < 1 || p.bins < 1 || p.analysis_size < p.cell * p.block_cells ||
        p.analysis_size % p.cell != 0)
        throw GeometryMismatch("analysis size must fit the cell/block geometry");

    RasterImage img = (gray.width == p.analysis_size && gray.height == p.analysis_size)
                          ? gray
                          : imgproc::resize_bilinear(gray, p.analysis_size, p.analysis_size);
    const int n = p.analysis_size;
    const int cells = n / p.cell;

    // cell orientation histograms
    std::vector<double> cell_hist(static_cast<std::size_t>(cells) * cells * p.bins, 0.0);
    const double bin_width = 180.0 / p.bins;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double gx = static_cast<double>(img.at_clamped(x + 1, y)) - img.at_clamped(x - 1, y);
            double gy = static_cast<double>(img.at_clamped(x, y + 1)) - img.at_clamped(x, y - 1);
            double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            double ang = std::atan2(gy, gx) * 180.0 / M_PI;
            if (ang < 0.0) ang += 180.0;
            if (ang >= 180.0) ang -= 180.0;
            // vote split between the two nearest bin centers (centers at k*bin_width)
            double pos = ang / bin_width;
            int b0 = static_cast<int>(std::floor(pos)) % p.bins;
            int b1 = (b0 + 1) % p.bins;
            double w1 = pos - std::floor(pos);
            std::size_t base =
                (static_cast<std::size_t>(y / p.cell) * cells + (x / p.cell)) * p.bins;
            cell_hist[base + b0] += mag * (1.0 - w1);
            cell_hist[base + b1] += mag * w1;
        }
    }

    // block normalization, stride one cell
    const int blocks_per_side = cells - p.block_cells + 1;
    DescriptorVector d;
    d.layout.kind = DescriptorKind::TEXTURE_HOG;
    d.layout.cell = p.cell;
    d.layout.block_cells = p.block_cells;
    d.layout.bins = p.bins;
    d.layout.analysis_size = p.analysis_size;
    d.values.reserve(hog_length(p));
    const double eps = 1e-6;
    std::vector<double> block(static_cast<std::size_t>(p.block_cells) * p.block_cells * p.bins);
    for (int by = 0; by < blocks_per_side; ++by) {
        for (int bx = 0; bx < blocks_per_side; ++bx) {
            std::size_t k = 0;
            double sq = 0.0;
            for (int cy = 0; cy < p.block_cells; ++cy)
                for (int cx = 0; cx < p.block_cells; ++cx) {
                    std::size_t base =
                        (static_cast<std::size_t>(by + cy) * cells + (bx + cx)) * p.bins;
                    for (int b = 0; b < p.bins; ++b) {
                        block[k] = cell_hist[base + b];
                        sq += block[k] * block[k];
                        ++k;
                    }
                }
            const double norm = std::sqrt(sq + eps * eps);
            for (std::size_t i = 0; i < block.size(); ++i) d.values.push_back(block[i] / norm);
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Text descriptor
// ---------------------------------------------------------------------------

SidecarOcr::SidecarOcr(std::filesystem::path image_path) {
    sidecar_ = image_path;
    sidecar_.replace_extension(".ocr.txt");
}

std::string SidecarOcr::recognize(const RasterImage&) const {
    std::ifstream in(sidecar_);
    if (!in) return "";
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

RasterImage binarize_text_crop(const RasterImage& crop) {
    RasterImage gray = crop.space == ColorSpace::GRAY
                           ? crop
                           : imgproc::convert_color(crop, ColorSpace::GRAY);
    const int t = imgproc::otsu_threshold(gray);
    std::size_t above = 0;
    for (std::uint8_t v : gray.samples)
        if (v > t) ++above;
    const bool fg_is_above = above * 2 <= gray.samples.size();  // minority class wins
    RasterImage out(gray.width, gray.height, ColorSpace::GRAY);
    for (std::size_t i = 0; i < gray.samples.size(); ++i) {
        bool above_t = gray.samples[i] > t;
        out.samples[i] = (above_t == fg_is_above) ? 255 : 0;
    }
    return out;
}

std::string read_text_descriptor(const RasterImage& box_image, const OcrPort& ocr) {
    return ocr.recognize(binarize_text_crop(box_image));
}

std::string normalize_name(const std::string& name) {
    std::string out;
    bool last_space = true;
    for (unsigned char c : name) {
        if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
            last_space = false;
        } else if ((std::isspace(c) || c == '-' || c == '_') && !last_space) {
            out.push_back(' ');
            last_space = true;
        }
        // other punctuation is dropped entirely
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

AuthorMatch match_author(const std::string& text, const AuthorCatalog& catalog) {
    AuthorMatch result;
    const std::string query = normalize_name(text);
    if (query.empty() || catalog.entries.empty()) return result;  // (∅, 1.0)

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, const AuthorCatalog::Entry*>> scored;
    scored.reserve(catalog.entries.size());
    for (const auto& entry : catalog.entries) {
        const std::string name = normalize_name(entry.author);
        const std::size_t longer = std::max(query.size(), name.size());
        double dist = longer == 0 ? 0.0
                                  : static_cast<double>(levenshtein(query, name)) /
                                        static_cast<double>(longer);
        scored.emplace_back(dist, &entry);
        best = std::min(best, dist);
    }
    result.distance = best;
    for (const auto& [dist, entry] : scored)
        if (dist <= best + 1e-12) result.labels.insert(entry->label);
    return result;
}

}  // namespace museo::descriptors
