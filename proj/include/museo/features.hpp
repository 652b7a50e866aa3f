#ifndef MUSEO_FEATURES_HPP
#define MUSEO_FEATURES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "museo/raster.hpp"

namespace museo::features {

struct Keypoint {
    float x = 0.0f;  // level-0 coordinates
    float y = 0.0f;
    float score = 0.0f;
    float orientation_deg = 0.0f;  // [0, 360)
    std::int32_t octave = 0;
};

struct BinaryDescriptor {
    std::array<std::uint64_t, 4> bits{};

    bool get(int i) const { return (bits[i >> 6] >> (i & 63)) & 1u; }
    void set(int i) { bits[i >> 6] |= std::uint64_t{1} << (i & 63); }
};

int hamming_distance(const BinaryDescriptor& a, const BinaryDescriptor& b);

struct OrbParams {
    int fast_threshold = 20;
    int max_keypoints = 400;
    int pyramid_levels = 3;
    int patch_radius = 15;     // orientation patch
    int match_max_distance = 64;
    double match_ratio = 0.8;
    bool ratio_test = true;    // absolute threshold only when false
    int min_matches = 4;
};

// FAST-16: a pixel is a corner when >= 9 contiguous circle pixels are all
// brighter than p+t or all darker than p-t. Score = sum of |I - p| over the
// longest qualifying arc; 3x3 non-maximum suppression; detection runs over a
// 3-level half-scale pyramid with coordinates mapped back to level 0.
std::vector<Keypoint> fast_detect(const RasterImage& gray, int threshold, int max_keypoints,
                                  int pyramid_levels = 3);

// Single-level detection (no pyramid, no cap), coordinates in this image.
std::vector<Keypoint> fast_detect_single(const RasterImage& gray, int threshold);

// Intensity-centroid orientation over the circular patch. Zero-moment
// patches get 0 degrees.
Keypoint orient_keypoint(const RasterImage& gray, const Keypoint& kp, int patch_radius = 15);

// Steered BRIEF over a 31x31 patch of the 5x5-box-smoothed image. The image
// passed here must already be smoothed (see describe()).
BinaryDescriptor brief_describe_smoothed(const RasterImage& smoothed, const Keypoint& kp);

// Convenience: smooths, then describes. For many keypoints prefer
// detect_and_describe which smooths once.
BinaryDescriptor brief_describe(const RasterImage& gray, const Keypoint& kp);

// margin (in octave pixels) a keypoint needs for orientation + description
int descriptor_margin(int patch_radius);

struct ImageFeatures {
    std::vector<Keypoint> keypoints;
    std::vector<BinaryDescriptor> descriptors;
};

// Full extraction pipeline: pyramid FAST, orientation, steered BRIEF.
// Keypoints whose descriptor patch leaves its octave image are discarded.
// When `mask` is given, keypoints over false pixels (level-0 coords) are
// discarded too.
ImageFeatures detect_and_describe(const RasterImage& gray, const OrbParams& params,
                                  const BinaryMask* mask = nullptr);

enum class Verdict { SIMILAR, DISSIMILAR };

struct MatchResult {
    struct Pair {
        int query_index;
        int gallery_index;
        int distance;
    };
    std::vector<Pair> pairs;
    Verdict verdict = Verdict::DISSIMILAR;
};

// Brute-force mutual-nearest-neighbor Hamming matching with a Lowe-style
// ratio test and an absolute distance cutoff. SIMILAR iff >= min_matches
// surviving pairs.
MatchResult match_descriptors(const std::vector<BinaryDescriptor>& query,
                              const std::vector<BinaryDescriptor>& gallery,
                              const OrbParams& params = {});

// detect + orient + describe + match for two images.
struct SimilarityOutcome {
    int match_count = 0;
    Verdict verdict = Verdict::DISSIMILAR;
};
SimilarityOutcome image_feature_similarity(const RasterImage& a, const RasterImage& b,
                                           const OrbParams& params = {});

// The frozen 256-entry sampling-pair table (x1, y1, x2, y2).
extern const std::int8_t kBriefPattern[256][4];

}  // namespace museo::features

#endif
