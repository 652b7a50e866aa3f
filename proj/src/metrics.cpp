#include "museo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace museo::metrics {

double Histogram::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

bool Histogram::is_normalized(double tol) const { return std::fabs(sum() - 1.0) <= tol; }

Histogram Histogram::normalized(std::vector<double> values) {
    double total = std::accumulate(values.begin(), values.end(), 0.0);
    if (total > 0.0)
        for (double& v : values) v /= total;
    return Histogram{std::move(values)};
}

Polarity polarity_of(MeasureKind kind) {
    return kind == MeasureKind::CHI2 ? Polarity::LOWER_IS_CLOSER : Polarity::HIGHER_IS_CLOSER;
}

const char* to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::HELLINGER:   return "hellinger";
        case MeasureKind::CHI2:        return "chi2";
        case MeasureKind::INTERSECT:   return "intersect";
        case MeasureKind::CORRELATION: return "correlation";
    }
    return "?";
}

MeasureKind measure_from_string(const std::string& name) {
    if (name == "hellinger") return MeasureKind::HELLINGER;
    if (name == "chi2") return MeasureKind::CHI2;
    if (name == "intersect") return MeasureKind::INTERSECT;
    if (name == "correlation") return MeasureKind::CORRELATION;
    throw EmptyInput("unknown measure: " + name);
}

bool SimilarityScore::closer_than(const SimilarityScore& other) const {
    return polarity == Polarity::HIGHER_IS_CLOSER ? value > other.value : value < other.value;
}

SimilarityScore histogram_measure(MeasureKind kind, const Histogram& h1, const Histogram& h2) {
    const std::size_t n = h1.size();
    if (n == 0 || n != h2.size()) throw LengthMismatch("histogram lengths differ");
    if (kind == MeasureKind::HELLINGER || kind == MeasureKind::INTERSECT) {
        // an all-zero vector (fully masked image) passes through as the
        // degenerate case and scores 0 against everything
        auto ok = [](const Histogram& h) { return h.is_normalized() || h.sum() == 0.0; };
        if (!ok(h1) || !ok(h2))
            throw NotNormalized(std::string(to_string(kind)) + " needs unit-mass histograms");
    }

    double value = 0.0;
    switch (kind) {
        case MeasureKind::HELLINGER: {
            for (std::size_t i = 0; i < n; ++i) value += std::sqrt(h1.values[i] * h2.values[i]);
            break;
        }
        case MeasureKind::CHI2: {
            for (std::size_t i = 0; i < n; ++i) {
                double d = h1.values[i] - h2.values[i];
                double s = h1.values[i] + h2.values[i];
                if (s > 0.0) value += d * d / s;
            }
            break;
        }
        case MeasureKind::INTERSECT: {
            for (std::size_t i = 0; i < n; ++i) value += std::min(h1.values[i], h2.values[i]);
            break;
        }
        case MeasureKind::CORRELATION: {
            double m1 = 0.0, m2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                m1 += h1.values[i];
                m2 += h2.values[i];
            }
            m1 /= static_cast<double>(n);
            m2 /= static_cast<double>(n);
            double num = 0.0, d1 = 0.0, d2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double a = h1.values[i] - m1;
                double b = h2.values[i] - m2;
                num += a * b;
                d1 += a * a;
                d2 += b * b;
            }
            value = (d1 > 0.0 && d2 > 0.0) ? num / std::sqrt(d1 * d2) : 0.0;
            break;
        }
    }
    return {value, polarity_of(kind)};
}

double ap_at_k(const RankedRetrieval& r) {
    if (r.relevant.empty()) throw EmptyRelevantSet();
    if (r.k < 1) throw EmptyInput("K must be >= 1");
    double sum_p = 0.0;
    int hits = 0;
    for (int i = 1; i <= r.k; ++i) {
        if (i <= static_cast<int>(r.ranking.size()) && r.relevant.count(r.ranking[i - 1]))
            ++hits;
        sum_p += static_cast<double>(hits) / i;
    }
    return sum_p / r.k;
}

double map_at_k(const std::vector<RankedRetrieval>& rs) {
    if (rs.empty()) throw EmptyInput("map_at_k over empty query set");
    double total = 0.0;
    for (const auto& r : rs) {
        if (r.relevant.size() == 1 && *r.relevant.begin() == kNotInMuseum) {
            total += (r.ranking.size() == 1 && r.ranking[0] == kNotInMuseum) ? 1.0 : 0.0;
        } else {
            total += ap_at_k(r);
        }
    }
    return total / static_cast<double>(rs.size());
}

PrfScores mask_prf(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw DimensionMismatch("mask dimensions differ");
    long long tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.bits.size(); ++i) {
        if (pred.bits[i] && gt.bits[i])
            ++tp;
        else if (pred.bits[i])
            ++fp;
        else if (gt.bits[i])
            ++fn;
    }
    PrfScores s;
    s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

double iou(const Box& a, const Box& b) {
    const long long ix = std::max(0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const long long iy = std::max(0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const long long inter = ix * iy;
    const long long uni = a.area() + b.area() - inter;
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

double mean_iou(const std::vector<BoxesPair>& pairs) {
    double total = 0.0;
    long long gt_count = 0;
    for (const auto& pair : pairs) {
        gt_count += static_cast<long long>(pair.ground_truth.size());
        std::vector<bool> pred_used(pair.predicted.size(), false);
        std::vector<bool> gt_used(pair.ground_truth.size(), false);
        // greedy pairing by descending IoU
        while (true) {
            double best = 0.0;
            std::size_t bp = 0, bg = 0;
            bool found = false;
            for (std::size_t p = 0; p < pair.predicted.size(); ++p) {
                if (pred_used[p]) continue;
                for (std::size_t g = 0; g < pair.ground_truth.size(); ++g) {
                    if (gt_used[g]) continue;
                    double v = iou(pair.predicted[p], pair.ground_truth[g]);
                    if (v > best) {
                        best = v;
                        bp = p;
                        bg = g;
                        found = true;
                    }
                }
            }
            if (!found) break;
            pred_used[bp] = true;
            gt_used[bg] = true;
            total += best;
        }
    }
    return gt_count > 0 ? total / static_cast<double>(gt_count) : 0.0;
}

double psnr(const RasterImage& a, const RasterImage& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels)
        throw DimensionMismatch("psnr inputs must share dimensions and channels");
    double se = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        double d = static_cast<double>(a.samples[i]) - static_cast<double>(b.samples[i]);
        se += d * d;
    }
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    double mse = se / static_cast<double>(a.samples.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double angular_distance_deg(double a, double b) {
    double d = std::fabs(std::fmod(a - b, 180.0));
    return std::min(d, 180.0 - d);
}

double mean_angular_error(const std::vector<double>& pred_deg, const std::vector<double>& gt_deg) {
    if (pred_deg.size() != gt_deg.size()) throw LengthMismatch("angle list lengths differ");
    if (pred_deg.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < pred_deg.size(); ++i)
        total += angular_distance_deg(pred_deg[i], gt_deg[i]);
    return total / static_cast<double>(pred_deg.size());
}

}  // namespace museo::metrics
