#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "museo/engine.hpp"
#include "museo/imgproc.hpp"

namespace museo::engine {

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

// k-means++ seeding: first center uniform, subsequent ones with probability
// proportional to the squared distance to the nearest chosen center.
std::vector<std::vector<double>> seed_centers(const std::vector<std::vector<double>>& points,
                                              int k, std::mt19937_64& rng) {
    std::vector<std::vector<double>> centers;
    std::uniform_int_distribution<std::size_t> first(0, points.size() - 1);
    centers.push_back(points[first(rng)]);

    std::vector<double> d2(points.size());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, sq_distance(points[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng);
            double acc = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (r <= acc) {
                    pick = i;
                    break;
                }
            }
        }
        // total == 0: every point already coincides with a center; duplicate
        // centers are harmless, the extra clusters just stay empty
        centers.push_back(points[pick]);
    }
    return centers;
}

}  // namespace

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iter) {
    if (points.empty() || k < 1) throw EmptyInput("kmeans needs points and k >= 1");
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw LengthMismatch("kmeans points must share dimensionality");

    std::mt19937_64 rng(seed);
    KmeansResult result;
    result.centers = seed_centers(points, k, rng);
    result.assignments.assign(points.size(), 0);

    for (int iter = 0; iter < max_iter; ++iter) {
        // assignment step (ties to the lowest cluster index)
        bool changed = false;
        double sse = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = sq_distance(points[i], result.centers[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.assignments[i] != best) {
                result.assignments[i] = best;
                changed = true;
            }
            sse += best_d;
        }
        result.sse_history.push_back(sse);
        result.iterations = iter + 1;
        if (!changed && iter > 0) break;

        // update step; a cluster that lost every point keeps its old center
        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto& s = sums[static_cast<std::size_t>(result.assignments[i])];
            for (std::size_t d = 0; d < dim; ++d) s[d] += points[i][d];
            counts[static_cast<std::size_t>(result.assignments[i])]++;
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) continue;
            auto& center = result.centers[static_cast<std::size_t>(c)];
            for (std::size_t d = 0; d < dim; ++d)
                center[d] = sums[static_cast<std::size_t>(c)][d] /
                            counts[static_cast<std::size_t>(c)];
        }
    }
    return result;
}

std::map<int, int> kmeans_cluster(const MuseumIndex& index, const RunConfig& cfg,
                                  std::uint64_t seed) {
    constexpr int kBrightnessClusters = 2;
    constexpr int kTextureClusters = 5;
    if (static_cast<int>(index.entries.size()) < kBrightnessClusters * kTextureClusters)
        throw FewerImagesThanClusters("need at least 10 indexed paintings");

    // stage 1 input: mean luminance, from the gray histogram when indexed,
    // otherwise approximated from the 3D color histogram's bin centers
    std::vector<std::vector<double>> luminance;
    luminance.reserve(index.entries.size());
    for (const auto& entry : index.entries) {
        double mean = 0.0;
        if (auto it = entry.vectors.find(descriptors::DescriptorKind::GRAY_1D);
            it != entry.vectors.end()) {
            const auto& h = it->second.values;
            const double bin_width = 256.0 / static_cast<double>(h.size());
            for (std::size_t b = 0; b < h.size(); ++b)
                mean += h[b] * ((static_cast<double>(b) + 0.5) * bin_width);
        } else if (auto c3 = entry.vectors.find(descriptors::DescriptorKind::COLOR_3D);
                   c3 != entry.vectors.end()) {
            const int bins = c3->second.layout.bins;
            const double w = 256.0 / bins;
            std::size_t i = 0;
            for (int r = 0; r < bins; ++r)
                for (int g = 0; g < bins; ++g)
                    for (int b = 0; b < bins; ++b, ++i) {
                        double lum = 0.299 * (r + 0.5) * w + 0.587 * (g + 0.5) * w +
                                     0.114 * (b + 0.5) * w;
                        mean += c3->second.values[i] * lum;
                    }
        } else {
            throw NoActiveDescriptor("clustering needs gray1d or color3d for brightness");
        }
        luminance.push_back({mean});
    }

    KmeansResult bright = kmeans(luminance, kBrightnessClusters, seed);
    // set 0 = darker center, regardless of seeding order
    int dark_cluster = bright.centers[0][0] <= bright.centers[1][0] ? 0 : 1;

    std::map<int, int> out;
    for (int set = 0; set < kBrightnessClusters; ++set) {
        std::vector<std::vector<double>> hogs;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < index.entries.size(); ++i) {
            int cluster = bright.assignments[i] == dark_cluster ? 0 : 1;
            if (cluster != set) continue;
            auto it = index.entries[i].vectors.find(descriptors::DescriptorKind::TEXTURE_HOG);
            if (it == index.entries[i].vectors.end())
                throw NoActiveDescriptor("clustering needs the hog descriptor");
            hogs.push_back(it->second.values);
            members.push_back(i);
        }
        if (hogs.empty()) continue;
        KmeansResult texture = kmeans(hogs, kTextureClusters, seed + 1 + static_cast<std::uint64_t>(set));
        for (std::size_t m = 0; m < members.size(); ++m)
            out[index.entries[members[m]].label] =
                set * kTextureClusters + texture.assignments[m];
    }
    (void)cfg;
    return out;
}

}  // namespace museo::engine
