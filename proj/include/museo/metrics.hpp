#ifndef MUSEO_METRICS_HPP
#define MUSEO_METRICS_HPP

#include <set>
#include <vector>

#include "museo/raster.hpp"

namespace museo::metrics {

struct Histogram {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double sum() const;
    bool is_normalized(double tol = 1e-9) const;

    // Scales to unit mass; an all-zero histogram stays zero.
    static Histogram normalized(std::vector<double> values);
};

enum class MeasureKind { HELLINGER, CHI2, INTERSECT, CORRELATION };
enum class Polarity { HIGHER_IS_CLOSER, LOWER_IS_CLOSER };

Polarity polarity_of(MeasureKind kind);
const char* to_string(MeasureKind kind);
MeasureKind measure_from_string(const std::string& name);

struct SimilarityScore {
    double value = 0.0;
    Polarity polarity = Polarity::HIGHER_IS_CLOSER;

    // true when this score ranks strictly closer than other
    bool closer_than(const SimilarityScore& other) const;
};

// Hellinger kernel, chi-squared, intersection and Pearson correlation over
// equal-length histograms. Hellinger and intersection demand unit mass.
// Degenerate 0/0 terms resolve to 0.
SimilarityScore histogram_measure(MeasureKind kind, const Histogram& h1, const Histogram& h2);

struct RankedRetrieval {
    std::vector<int> ranking;  // best first, entries distinct
    std::set<int> relevant;    // ground-truth labels
    int k = 1;
};

// AP@K = (sum_{i=1..K} P@i) / K with P@i = |relevant ∩ first i| / i.
// A ranking shorter than K contributes trailing P@i with a frozen numerator.
double ap_at_k(const RankedRetrieval& r);

// Mean AP@K. A query whose ground truth is the -1 sentinel scores 1 when the
// ranking is exactly [-1] and 0 otherwise.
double map_at_k(const std::vector<RankedRetrieval>& rs);

constexpr int kNotInMuseum = -1;

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Pixel-level precision/recall/F1; empty denominators yield 0.
PrfScores mask_prf(const BinaryMask& pred, const BinaryMask& gt);

double iou(const Box& a, const Box& b);

// Greedy pairing by descending IoU per image; unmatched ground-truth boxes
// count as 0. The mean runs over all ground-truth boxes.
struct BoxesPair {
    std::vector<Box> predicted;
    std::vector<Box> ground_truth;
};
double mean_iou(const std::vector<BoxesPair>& pairs);

// 10*log10(255^2 / MSE) over all samples; identical images give +infinity.
double psnr(const RasterImage& a, const RasterImage& b);

// Mean of min(|d|, 180 - |d|) with d the pairwise difference mod 180.
double mean_angular_error(const std::vector<double>& pred_deg,
                          const std::vector<double>& gt_deg);

double angular_distance_deg(double a, double b);

}  // namespace museo::metrics

#endif
