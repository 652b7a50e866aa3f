#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "museo/metrics.hpp"

using namespace museo;
using namespace museo::metrics;

namespace {

Histogram hist(std::initializer_list<double> values) { return Histogram{values}; }

Histogram random_normalized(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return Histogram::normalized(std::move(v));
}

// independent straightforward-summation oracle
double oracle_measure(MeasureKind kind, const Histogram& a, const Histogram& b) {
    const std::size_t n = a.size();
    switch (kind) {
        case MeasureKind::HELLINGER: {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += std::sqrt(a.values[i] * b.values[i]);
            return s;
        }
        case MeasureKind::CHI2: {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double num = (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
                double den = a.values[i] + b.values[i];
                if (den != 0.0) s += num / den;
            }
            return s;
        }
        case MeasureKind::INTERSECT: {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += std::min(a.values[i], b.values[i]);
            return s;
        }
        case MeasureKind::CORRELATION: {
            double ma = 0, mb = 0;
            for (std::size_t i = 0; i < n; ++i) {
                ma += a.values[i];
                mb += b.values[i];
            }
            ma /= n;
            mb /= n;
            double num = 0, da = 0, db = 0;
            for (std::size_t i = 0; i < n; ++i) {
                num += (a.values[i] - ma) * (b.values[i] - mb);
                da += (a.values[i] - ma) * (a.values[i] - ma);
                db += (b.values[i] - mb) * (b.values[i] - mb);
            }
            if (da == 0.0 || db == 0.0) return 0.0;
            return num / std::sqrt(da * db);
        }
    }
    return 0.0;
}

// literal AP@K oracle: (sum of P@i) / K
double oracle_ap(const std::vector<int>& ranking, const std::set<int>& relevant, int k) {
    double sum = 0.0;
    for (int i = 1; i <= k; ++i) {
        int hits = 0;
        for (int j = 0; j < std::min<int>(i, static_cast<int>(ranking.size())); ++j)
            if (relevant.count(ranking[static_cast<std::size_t>(j)])) ++hits;
        sum += static_cast<double>(hits) / i;
    }
    return sum / k;
}

}  // namespace

TEST_CASE("hellinger: identity, disjoint support, hand-computed value") {
    Histogram h = hist({0.25, 0.25, 0.5});
    CHECK(histogram_measure(MeasureKind::HELLINGER, h, h).value == doctest::Approx(1.0));

    CHECK(histogram_measure(MeasureKind::HELLINGER, hist({1, 0}), hist({0, 1})).value ==
          doctest::Approx(0.0));

    // sum of sqrt(0.5 * 1) = 0.70711
    CHECK(histogram_measure(MeasureKind::HELLINGER, hist({0.5, 0.5}), hist({1, 0})).value ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("chi2: zero at identity, polarity, 0/0 bins ignored") {
    Histogram h = hist({0.2, 0.8});
    auto s = histogram_measure(MeasureKind::CHI2, h, h);
    CHECK(s.value == doctest::Approx(0.0));
    CHECK(s.polarity == Polarity::LOWER_IS_CLOSER);

    // shared empty bin contributes nothing
    auto t = histogram_measure(MeasureKind::CHI2, hist({0.5, 0.5, 0.0}), hist({1.0, 0.0, 0.0}));
    CHECK(t.value == doctest::Approx(0.25 / 1.5 + 0.25 / 0.5));
}

TEST_CASE("correlation: affine invariance and constant-histogram convention") {
    Histogram h = hist({1, 3, 2, 5, 4});
    std::vector<double> scaled;
    for (double v : h.values) scaled.push_back(2.5 * v + 7.0);
    CHECK(histogram_measure(MeasureKind::CORRELATION, h, Histogram{scaled}).value ==
          doctest::Approx(1.0).epsilon(1e-9));

    CHECK(histogram_measure(MeasureKind::CORRELATION, h, hist({3, 3, 3, 3, 3})).value == 0.0);
}

TEST_CASE("histogram_measure validates lengths and normalization") {
    CHECK_THROWS_AS(histogram_measure(MeasureKind::CHI2, hist({1, 2}), hist({1, 2, 3})),
                    LengthMismatch);
    CHECK_THROWS_AS(histogram_measure(MeasureKind::HELLINGER, hist({2, 2}), hist({0.5, 0.5})),
                    NotNormalized);
    CHECK_THROWS_AS(histogram_measure(MeasureKind::INTERSECT, hist({0.5, 0.5}), hist({2, 0})),
                    NotNormalized);
    CHECK_NOTHROW(histogram_measure(MeasureKind::CHI2, hist({2, 2}), hist({1, 1})));
}

TEST_CASE("all four measures match the oracle and are symmetric on random pairs") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 64;
        Histogram a = random_normalized(rng, n);
        Histogram b = random_normalized(rng, n);
        for (MeasureKind kind : {MeasureKind::HELLINGER, MeasureKind::CHI2,
                                 MeasureKind::INTERSECT, MeasureKind::CORRELATION}) {
            double ab = histogram_measure(kind, a, b).value;
            double ba = histogram_measure(kind, b, a).value;
            CHECK(ab == doctest::Approx(oracle_measure(kind, a, b)).epsilon(1e-12));
            CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        }
        CHECK(histogram_measure(MeasureKind::HELLINGER, a, b).value <= 1.0 + 1e-9);
        CHECK(histogram_measure(MeasureKind::HELLINGER, a, b).value >= 0.0);
        CHECK(histogram_measure(MeasureKind::INTERSECT, a, b).value <= 1.0 + 1e-9);
        CHECK(histogram_measure(MeasureKind::CHI2, a, b).value >= 0.0);
        double corr = histogram_measure(MeasureKind::CORRELATION, a, b).value;
        CHECK(corr >= -1.0 - 1e-9);
        CHECK(corr <= 1.0 + 1e-9);
    }
}

TEST_CASE("ap_at_k: literal equation on the spec fixtures") {
    RankedRetrieval r;
    r.relevant = {7};
    r.k = 1;
    r.ranking = {7};
    CHECK(ap_at_k(r) == doctest::Approx(1.0));
    r.ranking = {3};
    CHECK(ap_at_k(r) == doctest::Approx(0.0));

    // K=3, single relevant item at rank 2: (0 + 1/2 + 1/3) / 3
    r.k = 3;
    r.ranking = {3, 7, 4};
    CHECK(ap_at_k(r) == doctest::Approx((0.0 + 0.5 + 1.0 / 3.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("ap_at_k: short rankings freeze the numerator; empty relevant set throws") {
    RankedRetrieval r;
    r.relevant = {1};
    r.k = 4;
    r.ranking = {1};  // shorter than K
    // P@1 = 1, P@2 = 1/2, P@3 = 1/3, P@4 = 1/4
    CHECK(ap_at_k(r) == doctest::Approx((1.0 + 0.5 + 1.0 / 3.0 + 0.25) / 4.0));

    r.relevant = {};
    CHECK_THROWS_AS(ap_at_k(r), EmptyRelevantSet);
}

TEST_CASE("map_at_k: means, sentinel scoring, empty input") {
    std::vector<RankedRetrieval> rs;
    for (int i = 0; i < 4; ++i) {
        RankedRetrieval r;
        r.relevant = {i};
        r.k = 1;
        r.ranking = {i < 2 ? i : 99};  // half right, half wrong
        rs.push_back(r);
    }
    CHECK(map_at_k(rs) == doctest::Approx(0.5));

    // sentinel: scored 1 only when the ranking is exactly [-1]
    RankedRetrieval unknown;
    unknown.relevant = {kNotInMuseum};
    unknown.k = 3;
    unknown.ranking = {kNotInMuseum};
    CHECK(map_at_k({unknown}) == doctest::Approx(1.0));
    unknown.ranking = {5};
    CHECK(map_at_k({unknown}) == doctest::Approx(0.0));
    unknown.ranking = {kNotInMuseum, 5};
    CHECK(map_at_k({unknown}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(map_at_k({}), EmptyInput);
}

TEST_CASE("map_at_k equals the brute-force oracle on random fixtures") {
    std::mt19937 rng(77);
    std::vector<RankedRetrieval> rs;
    double oracle_sum = 0.0;
    for (int i = 0; i < 50; ++i) {
        RankedRetrieval r;
        r.k = 1 + static_cast<int>(rng() % 5);
        int n = static_cast<int>(rng() % 6);
        for (int j = 0; j < n; ++j) r.ranking.push_back(static_cast<int>(rng() % 10));
        // distinct entries required
        std::sort(r.ranking.begin(), r.ranking.end());
        r.ranking.erase(std::unique(r.ranking.begin(), r.ranking.end()), r.ranking.end());
        r.relevant = {static_cast<int>(rng() % 10)};
        oracle_sum += oracle_ap(r.ranking, r.relevant, r.k);
        rs.push_back(r);
    }
    CHECK(map_at_k(rs) == doctest::Approx(oracle_sum / rs.size()).epsilon(1e-12));
}

TEST_CASE("mask_prf: identity, half overlap, empty predictions") {
    BinaryMask gt(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 2; ++x) gt.set(x, y, true);

    auto same = mask_prf(gt, gt);
    CHECK(same.precision == doctest::Approx(1.0));
    CHECK(same.recall == doctest::Approx(1.0));
    CHECK(same.f1 == doctest::Approx(1.0));

    BinaryMask full(4, 4, true);
    auto s = mask_prf(full, gt);
    CHECK(s.precision == doctest::Approx(0.5));
    CHECK(s.recall == doctest::Approx(1.0));
    CHECK(s.f1 == doctest::Approx(2.0 / 3.0));

    BinaryMask empty(4, 4);
    auto e = mask_prf(empty, gt);
    CHECK(e.precision == 0.0);
    CHECK(e.recall == 0.0);
    CHECK(e.f1 == 0.0);

    CHECK_THROWS_AS(mask_prf(BinaryMask(3, 3), gt), DimensionMismatch);
}

TEST_CASE("iou: identity, disjoint, integer-grid overlap, symmetry") {
    Box a{0, 0, 2, 2}, b{1, 0, 3, 2}, c{10, 10, 12, 12};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(a, c) == doctest::Approx(0.0));
    CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(iou(a, b) == doctest::Approx(iou(b, a)));
    CHECK(iou(a, b) >= 0.0);
    CHECK(iou(a, b) <= 1.0);
}

TEST_CASE("mean_iou pairs greedily and counts unmatched ground truth as zero") {
    BoxesPair pair;
    pair.ground_truth = {{0, 0, 10, 10}, {20, 0, 30, 10}};
    pair.predicted = {{0, 0, 10, 10}};  // one box missing
    CHECK(mean_iou({pair}) == doctest::Approx(0.5));

    // the greedy pairing must not double-use a prediction
    BoxesPair tricky;
    tricky.ground_truth = {{0, 0, 10, 10}, {2, 0, 12, 10}};
    tricky.predicted = {{0, 0, 10, 10}};
    double v = mean_iou({tricky});
    CHECK(v == doctest::Approx(0.5));  // exact match + unmatched gt
}

TEST_CASE("psnr: identity sentinel, maximal error, hand-computed value") {
    RasterImage a(2, 1, ColorSpace::GRAY, 0);
    CHECK(std::isinf(psnr(a, a)));

    RasterImage b(2, 1, ColorSpace::GRAY, 255);
    CHECK(psnr(a, b) == doctest::Approx(0.0));

    RasterImage c(2, 1, ColorSpace::GRAY, 0);
    c.at(0, 0) = 10;  // MSE = (100 + 0) / 2 = 50
    CHECK(psnr(a, c) == doctest::Approx(10.0 * std::log10(255.0 * 255.0 / 50.0)).epsilon(1e-9));

    CHECK_THROWS_AS(psnr(a, RasterImage(3, 1, ColorSpace::GRAY)), DimensionMismatch);
}

TEST_CASE("mean_angular_error: wraparound and 180-degree invariance") {
    CHECK(mean_angular_error({10, 20}, {10, 20}) == doctest::Approx(0.0));
    CHECK(mean_angular_error({89}, {-89}) == doctest::Approx(2.0));
    CHECK(mean_angular_error({0, 10}, {0, 11}) == doctest::Approx(0.5));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-90.0, 90.0);
    for (int i = 0; i < 50; ++i) {
        double p = u(rng), g = u(rng);
        CHECK(mean_angular_error({p}, {g}) ==
              doctest::Approx(mean_angular_error({p + 180.0}, {g})).epsilon(1e-9));
    }
    CHECK_THROWS_AS(mean_angular_error({1.0}, {1.0, 2.0}), LengthMismatch);
}
