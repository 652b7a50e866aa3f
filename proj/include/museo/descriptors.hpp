#ifndef MUSEO_DESCRIPTORS_HPP
#define MUSEO_DESCRIPTORS_HPP

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "museo/raster.hpp"

namespace museo::descriptors {

enum class DescriptorKind : std::uint8_t {
    GRAY_1D = 0,
    COLOR_3D = 1,
    COLOR_BLOCK = 2,
    COLOR_MULTIRES = 3,
    TEXTURE_LBP = 4,
    TEXTURE_DCT = 5,
    TEXTURE_HOG = 6,
};

const char* to_string(DescriptorKind kind);
DescriptorKind kind_from_string(const std::string& name);

// Per-tile histogram recipe for the block/multiresolution descriptors.
struct BlockSpec {
    enum class Type : std::uint8_t { GRAY_1D, COLOR_3D } type = Type::COLOR_3D;
    ColorSpace space = ColorSpace::RGB;
    int bins = 4;  // per channel for COLOR_3D, total for GRAY_1D

    std::size_t length() const;
    bool operator==(const BlockSpec&) const = default;
};

// Everything needed to check two vectors are comparable and to predict
// their length.
struct DescriptorLayout {
    DescriptorKind kind = DescriptorKind::GRAY_1D;
    ColorSpace space = ColorSpace::GRAY;
    int bins = 0;                  // 1D bins or 3D bins per channel
    int grid = 0;                  // block/LBP tile grid (n x n)
    std::vector<int> levels;       // multiresolution grids
    BlockSpec block;               // per-tile spec for block/multires
    int keep = 0;                  // DCT coefficients kept per tile
    int analysis_size = 0;         // texture descriptors' resize target
    int cell = 0, block_cells = 0; // HOG geometry

    std::size_t expected_length() const;
    bool operator==(const DescriptorLayout&) const = default;
};

struct DescriptorVector {
    DescriptorLayout layout;
    std::vector<double> values;

    bool comparable_with(const DescriptorVector& other) const { return layout == other.layout; }
};

// 1D histogram of gray levels, uniform buckets, L1-normalized. Pixels where
// the mask is false are excluded.
DescriptorVector hist_gray_1d(const RasterImage& img, int bins,
                              const BinaryMask* mask = nullptr);

// Joint 3D histogram in the given 3-channel space, flattened channel-major,
// length bins^3, L1-normalized.
DescriptorVector hist_3d(const RasterImage& img, ColorSpace space, int bins_per_channel,
                         const BinaryMask* mask = nullptr);

// Concatenation of per-tile histograms over an n x n partition; remainder
// pixels are absorbed by the last tile row/column. Each tile is normalized
// on its own.
DescriptorVector block_histogram(const RasterImage& img, int grid, const BlockSpec& spec,
                                 const BinaryMask* mask = nullptr);

// Spatial pyramid: block_histogram at each level, concatenated in order.
DescriptorVector multires_histogram(const RasterImage& img, const std::vector<int>& levels,
                                    const BlockSpec& spec, const BinaryMask* mask = nullptr);

// Classic 8-neighbor LBP, radius 1; a neighbor >= center sets its bit,
// clockwise from the top-left neighbor (top-left = most significant bit).
// Per-tile 256-bin code histograms, L1-normalized, concatenated.
DescriptorVector lbp_descriptor(const RasterImage& gray, int grid);

// LBP code map (one code per pixel, replicate border).
RasterImage lbp_codes(const RasterImage& gray);

// Orthonormal type-II DCT over 8x8 tiles of the resized image; the first
// `keep` coefficients per tile in zigzag order, concatenated, unnormalized.
DescriptorVector dct_descriptor(const RasterImage& gray, int keep, int analysis_size = 256);

// Single 8x8 tile forward DCT (row-major in, row-major out).
void dct8x8(const double in[64], double out[64]);

extern const int kZigzag8x8[64];

struct HogParams {
    int cell = 8;         // pixels per cell side
    int block_cells = 2;  // cells per block side
    int bins = 9;         // unsigned orientation bins over [0, 180)
    int analysis_size = 256;
};

// Central-difference gradients, unsigned orientations with linear
// interpolation between adjacent bins, per-block L2 normalization
// (epsilon-guarded), block stride one cell.
DescriptorVector hog_descriptor(const RasterImage& gray, const HogParams& params = {});

std::size_t hog_length(const HogParams& params);

// ---------------------------------------------------------------------------
// Text descriptor
// ---------------------------------------------------------------------------

class OcrPort {
public:
    virtual ~OcrPort() = default;
    // Must be deterministic for a fixed input.
    virtual std::string recognize(const RasterImage& binarized) const = 0;
};

// Test/batch recognizer: returns the contents of `<image-stem>.ocr.txt`
// next to the configured image, or "" when the sidecar is missing.
class SidecarOcr : public OcrPort {
public:
    explicit SidecarOcr(std::filesystem::path image_path);
    std::string recognize(const RasterImage& binarized) const override;

private:
    std::filesystem::path sidecar_;
};

// Otsu binarization with the minority class as foreground (255).
RasterImage binarize_text_crop(const RasterImage& crop);

// Binarizes the crop and hands it to the recognizer.
std::string read_text_descriptor(const RasterImage& box_image, const OcrPort& ocr);

struct AuthorCatalog {
    struct Entry {
        int label = 0;
        std::string author;
        std::string title;
    };
    std::vector<Entry> entries;
};

struct AuthorMatch {
    std::set<int> labels;   // every label whose author ties the best distance
    double distance = 1.0;  // normalized Levenshtein in [0, 1]
};

// Case-folded, punctuation-stripped Levenshtein distance normalized by the
// longer string. Empty text matches nothing at distance 1.
AuthorMatch match_author(const std::string& text, const AuthorCatalog& catalog);

std::size_t levenshtein(const std::string& a, const std::string& b);
std::string normalize_name(const std::string& name);

}  // namespace museo::descriptors

#endif
