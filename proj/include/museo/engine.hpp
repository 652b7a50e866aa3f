#ifndef MUSEO_ENGINE_HPP
#define MUSEO_ENGINE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "museo/config.hpp"
#include "museo/descriptors.hpp"
#include "museo/features.hpp"
#include "museo/preprocess.hpp"

namespace museo::engine {

struct GalleryEntry {
    int label = 0;
    std::string author;
    std::string title;
    std::map<descriptors::DescriptorKind, descriptors::DescriptorVector> vectors;
    features::ImageFeatures feats;
};

struct MuseumIndex {
    static constexpr std::uint32_t kFormatVersion = 1;

    std::vector<GalleryEntry> entries;  // ascending label
    std::uint64_t config_fingerprint = 0;

    const GalleryEntry* find(int label) const;
};

// Descriptor set for one query crop.
struct CropDescriptors {
    std::map<descriptors::DescriptorKind, descriptors::DescriptorVector> vectors;
    features::ImageFeatures feats;
    std::string ocr_text;
};

// Computes every active descriptor for a museum image (no mask) or a query
// crop (mask excludes background and erased text).
std::map<descriptors::DescriptorKind, descriptors::DescriptorVector> compute_descriptors(
    const RasterImage& img, const RunConfig& cfg, const BinaryMask* mask = nullptr);

// Museum images are clean catalog photos: indexed without preprocessing.
MuseumIndex build_index(const std::filesystem::path& museum_dir,
                        const std::filesystem::path& catalog_file, const RunConfig& cfg);

descriptors::AuthorCatalog load_catalog(const std::filesystem::path& catalog_file);

struct RankedLabel {
    int label = 0;
    double score = 0.0;
};

// Scores the crop descriptor against every entry and sorts best-first by the
// metric's polarity; ties break by ascending label.
std::vector<RankedLabel> rank_by_descriptor(const MuseumIndex& index,
                                            const descriptors::DescriptorVector& query,
                                            descriptors::DescriptorKind kind,
                                            metrics::MeasureKind metric);

struct DescriptorWeights {
    double color = 0.0;
    double texture = 0.0;
    double text = 0.0;
};

// Weighted sum of per-descriptor distances on a common lower-is-closer scale
// (min-max normalized over the index, higher-polarity metrics flipped). The
// text descriptor contributes 0 to the best-matching author's labels and 1
// elsewhere.
std::vector<RankedLabel> combine_rankings(const MuseumIndex& index, const CropDescriptors& crop,
                                          const DescriptorWeights& weights, const RunConfig& cfg);

// Feature ranking: SIMILAR entries by descending match count; none similar
// gives the single -1 sentinel.
std::vector<RankedLabel> rank_by_features(const MuseumIndex& index,
                                          const features::ImageFeatures& query,
                                          const RunConfig& cfg);

enum class QueryMode { COLOR, TEXTURE, TEXT, COMBINED, FEATURE };
QueryMode mode_from_string(const std::string& name);
const char* to_string(QueryMode mode);

struct QueryOutcome {
    // one ranked label list per detected painting, left to right
    std::vector<std::vector<int>> rankings;
    std::vector<std::vector<double>> scores;  // parallel to rankings
    preprocess::PipelineResult pipeline;
};

QueryOutcome query(const MuseumIndex& index, const RasterImage& img, int k, QueryMode mode,
                   const RunConfig& cfg, const descriptors::OcrPort* ocr = nullptr);

// Descriptor kinds each mode reads; build_index must have produced them.
descriptors::DescriptorKind color_kind_for(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// K-means clustering (2 brightness sets x 5 texture clusters)
// ---------------------------------------------------------------------------

struct KmeansResult {
    std::vector<int> assignments;
    std::vector<std::vector<double>> centers;
    std::vector<double> sse_history;  // within-cluster sum of squares per iteration
    int iterations = 0;
};

// Seeded k-means++ initialization, Euclidean Lloyd iterations, stop on
// stable assignments or max_iter.
KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iter = 100);

// Stage 1: k=2 on mean luminance (set 0 = darker center). Stage 2: k=5 on
// the HOG descriptor within each set. cluster id = set*5 + texture cluster.
std::map<int, int> kmeans_cluster(const MuseumIndex& index, const RunConfig& cfg,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

void save_index(const MuseumIndex& index, const std::filesystem::path& path);
MuseumIndex load_index(const std::filesystem::path& path, const RunConfig& cfg,
                       bool force = false);

}  // namespace museo::engine

#endif
