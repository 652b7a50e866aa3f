#include "museo/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "museo/imgproc.hpp"

namespace museo::features {

namespace {

// Bresenham circle of radius 3, clockwise from 12 o'clock.
const int kCircleDx[16] = {0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3, -3, -3, -2, -1};
const int kCircleDy[16] = {-3, -3, -2, -1, 0, 1, 2, 3, 3, 3, 2, 1, 0, -1, -2, -3};

constexpr int kArcLength = 9;

// Longest circular run of `flags`; returns the run length and writes the sum
// of `weights` over the best run.
int longest_circular_run(const bool flags[16], const int weights[16], int* best_sum) {
    int best = 0;
    *best_sum = 0;
    for (int start = 0; start < 16; ++start) {
        if (!flags[start]) continue;
        if (flags[(start + 15) % 16]) continue;  // only measure from run starts
        int len = 0, sum = 0;
        while (len < 16 && flags[(start + len) % 16]) {
            sum += weights[(start + len) % 16];
            ++len;
        }
        if (len > best || (len == best && sum > *best_sum)) {
            best = len;
            *best_sum = sum;
        }
    }
    if (best == 0) {  // all 16 set
        bool all = true;
        for (int i = 0; i < 16; ++i) all = all && flags[i];
        if (all) {
            best = 16;
            *best_sum = 0;
            for (int i = 0; i < 16; ++i) *best_sum += weights[i];
        }
    }
    return best;
}

float fast_score_at(const RasterImage& img, int x, int y, int threshold) {
    const int p = img.at(x, y);
    bool brighter[16], darker[16];
    int diff[16];
    for (int k = 0; k < 16; ++k) {
        int v = img.at(x + kCircleDx[k], y + kCircleDy[k]);
        diff[k] = std::abs(v - p);
        brighter[k] = v > p + threshold;
        darker[k] = v < p - threshold;
    }
    int sum_b = 0, sum_d = 0;
    int run_b = longest_circular_run(brighter, diff, &sum_b);
    int run_d = longest_circular_run(darker, diff, &sum_d);
    float score = 0.0f;
    if (run_b >= kArcLength) score = std::max(score, static_cast<float>(sum_b));
    if (run_d >= kArcLength) score = std::max(score, static_cast<float>(sum_d));
    return score;
}

}  // namespace

std::vector<Keypoint> fast_detect_single(const RasterImage& gray, int threshold) {
    if (gray.channels != 1) throw MultiChannelInput("fast expects one channel");
    if (threshold < 1) throw InvalidThresholds("FAST threshold must be >= 1");
    const int w = gray.width, h = gray.height;
    if (w < 7 || h < 7) return {};

    std::vector<float> score(static_cast<std::size_t>(w) * h, 0.0f);
    for (int y = 3; y < h - 3; ++y)
        for (int x = 3; x < w - 3; ++x)
            score[static_cast<std::size_t>(y) * w + x] = fast_score_at(gray, x, y, threshold);

    auto s = [&](int x, int y) -> float {
        if (x < 0 || x >= w || y < 0 || y >= h) return 0.0f;
        return score[static_cast<std::size_t>(y) * w + x];
    };

    std::vector<Keypoint> out;
    for (int y = 3; y < h - 3; ++y) {
        for (int x = 3; x < w - 3; ++x) {
            float v = s(x, y);
            if (v <= 0.0f) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (s(x + dx, y + dy) > v ||
                        (s(x + dx, y + dy) == v && (dy < 0 || (dy == 0 && dx < 0)))) {
                        is_max = false;  // plateau ties go to the first pixel in scan order
                        break;
                    }
                }
            if (is_max) out.push_back({static_cast<float>(x), static_cast<float>(y), v, 0.0f, 0});
        }
    }
    return out;
}

std::vector<Keypoint> fast_detect(const RasterImage& gray, int threshold, int max_keypoints,
                                  int pyramid_levels) {
    if (gray.channels != 1) throw MultiChannelInput("fast expects one channel");
    std::vector<Keypoint> all;
    RasterImage level = gray;
    for (int oct = 0; oct < pyramid_levels; ++oct) {
        if (oct > 0) {
            int nw = level.width / 2, nh = level.height / 2;
            if (nw < 7 || nh < 7) break;
            level = imgproc::resize_bilinear(level, nw, nh);
        }
        const float scale = static_cast<float>(1 << oct);
        for (Keypoint kp : fast_detect_single(level, threshold)) {
            kp.x *= scale;
            kp.y *= scale;
            kp.octave = oct;
            all.push_back(kp);
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Keypoint& a, const Keypoint& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.octave != b.octave) return a.octave < b.octave;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    if (max_keypoints > 0 && static_cast<int>(all.size()) > max_keypoints)
        all.resize(static_cast<std::size_t>(max_keypoints));
    return all;
}

Keypoint orient_keypoint(const RasterImage& gray, const Keypoint& kp, int patch_radius) {
    if (gray.channels != 1) throw MultiChannelInput("orientation expects one channel");
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    if (cx - patch_radius < 0 || cx + patch_radius >= gray.width || cy - patch_radius < 0 ||
        cy + patch_radius >= gray.height)
        throw PatchOutOfBounds("orientation patch leaves the image");

    const long long r2 = static_cast<long long>(patch_radius) * patch_radius;
    double m10 = 0.0, m01 = 0.0;
    for (int dy = -patch_radius; dy <= patch_radius; ++dy)
        for (int dx = -patch_radius; dx <= patch_radius; ++dx) {
            if (static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy > r2) continue;
            const double v = gray.at(cx + dx, cy + dy);
            m10 += dx * v;
            m01 += dy * v;
        }
    Keypoint out = kp;
    if (m10 == 0.0 && m01 == 0.0) {
        out.orientation_deg = 0.0f;
    } else {
        double deg = std::atan2(m01, m10) * 180.0 / M_PI;
        if (deg < 0.0) deg += 360.0;
        out.orientation_deg = static_cast<float>(deg);
    }
    return out;
}

int descriptor_margin(int patch_radius) {
    // rotated sampling points reach |p| <= 13*sqrt(2) ~ 18.4, plus 2 px of
    // box-blur support; the orientation patch needs patch_radius
    return std::max(patch_radius, 21);
}

BinaryDescriptor brief_describe_smoothed(const RasterImage& smoothed, const Keypoint& kp) {
    if (smoothed.channels != 1) throw MultiChannelInput("brief expects one channel");
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    const int margin = 19;  // 13*sqrt(2) rounded up
    if (cx - margin < 0 || cx + margin >= smoothed.width || cy - margin < 0 ||
        cy + margin >= smoothed.height)
        throw PatchOutOfBounds("descriptor patch leaves the image");

    const double rad = kp.orientation_deg * M_PI / 180.0;
    // steering: pattern offsets follow the measured orientation so that the
    // sampled content is rotation-invariant (orientation = atan2(m01, m10))
    const double c = std::cos(rad), s = std::sin(rad);
    BinaryDescriptor d;
    for (int i = 0; i < 256; ++i) {
        const auto& p = kBriefPattern[i];
        int x1 = static_cast<int>(std::lround(c * p[0] - s * p[1]));
        int y1 = static_cast<int>(std::lround(s * p[0] + c * p[1]));
        int x2 = static_cast<int>(std::lround(c * p[2] - s * p[3]));
        int y2 = static_cast<int>(std::lround(s * p[2] + c * p[3]));
        if (smoothed.at(cx + x1, cy + y1) < smoothed.at(cx + x2, cy + y2)) d.set(i);
    }
    return d;
}

BinaryDescriptor brief_describe(const RasterImage& gray, const Keypoint& kp) {
    return brief_describe_smoothed(imgproc::box_blur5(gray), kp);
}

int hamming_distance(const BinaryDescriptor& a, const BinaryDescriptor& b) {
    int d = 0;
    for (int i = 0; i < 4; ++i) d += std::popcount(a.bits[i] ^ b.bits[i]);
    return d;
}

ImageFeatures detect_and_describe(const RasterImage& gray, const OrbParams& params,
                                  const BinaryMask* mask) {
    RasterImage g = gray.space == ColorSpace::GRAY ? gray
                                                   : imgproc::convert_color(gray, ColorSpace::GRAY);
    std::vector<Keypoint> kps = fast_detect(g, params.fast_threshold, 0, params.pyramid_levels);

    // pyramid images + their smoothed copies, reproduced as in fast_detect
    std::vector<RasterImage> levels{g};
    for (int oct = 1; oct < params.pyramid_levels; ++oct) {
        const RasterImage& prev = levels.back();
        int nw = prev.width / 2, nh = prev.height / 2;
        if (nw < 7 || nh < 7) break;
        levels.push_back(imgproc::resize_bilinear(prev, nw, nh));
    }
    std::vector<RasterImage> smoothed;
    smoothed.reserve(levels.size());
    for (const auto& lvl : levels) smoothed.push_back(imgproc::box_blur5(lvl));

    const int margin = descriptor_margin(params.patch_radius);
    ImageFeatures out;
    for (const Keypoint& kp : kps) {
        if (kp.octave >= static_cast<int>(levels.size())) continue;
        if (mask) {
            int mx = std::clamp(static_cast<int>(std::lround(kp.x)), 0, mask->width - 1);
            int my = std::clamp(static_cast<int>(std::lround(kp.y)), 0, mask->height - 1);
            if (!mask->get(mx, my)) continue;
        }
        const RasterImage& lvl = levels[static_cast<std::size_t>(kp.octave)];
        const float scale = static_cast<float>(1 << kp.octave);
        Keypoint local = kp;
        local.x = kp.x / scale;
        local.y = kp.y / scale;
        const int lx = static_cast<int>(std::lround(local.x));
        const int ly = static_cast<int>(std::lround(local.y));
        if (lx - margin < 0 || lx + margin >= lvl.width || ly - margin < 0 ||
            ly + margin >= lvl.height)
            continue;
        local = orient_keypoint(lvl, local, params.patch_radius);
        BinaryDescriptor desc =
            brief_describe_smoothed(smoothed[static_cast<std::size_t>(kp.octave)], local);
        Keypoint stored = kp;
        stored.orientation_deg = local.orientation_deg;
        out.keypoints.push_back(stored);
        out.descriptors.push_back(desc);
        if (params.max_keypoints > 0 &&
            static_cast<int>(out.keypoints.size()) >= params.max_keypoints)
            break;
    }
    return out;
}

MatchResult match_descriptors(const std::vector<BinaryDescriptor>& query,
                              const std::vector<BinaryDescriptor>& gallery,
                              const OrbParams& params) {
    MatchResult result;
    if (query.empty() || gallery.empty()) return result;

    const int nq = static_cast<int>(query.size());
    const int ng = static_cast<int>(gallery.size());
    constexpr int kInf = std::numeric_limits<int>::max();

    std::vector<int> best_g(nq, -1), best_gd(nq, kInf), second_gd(nq, kInf);
    for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < ng; ++j) {
            int d = hamming_distance(query[i], gallery[j]);
            if (d < best_gd[i]) {
                second_gd[i] = best_gd[i];
                best_gd[i] = d;
                best_g[i] = j;
            } else if (d < second_gd[i]) {
                second_gd[i] = d;
            }
        }
    }
    std::vector<int> best_q(ng, -1), best_qd(ng, kInf);
    for (int j = 0; j < ng; ++j)
        for (int i = 0; i < nq; ++i) {
            int d = hamming_distance(query[i], gallery[j]);
            if (d < best_qd[j]) {
                best_qd[j] = d;
                best_q[j] = i;
            }
        }

    for (int i = 0; i < nq; ++i) {
        const int j = best_g[i];
        if (j < 0 || best_q[j] != i) continue;          // mutual nearest neighbors only
        if (best_gd[i] > params.match_max_distance) continue;
        if (params.ratio_test && second_gd[i] != kInf &&
            static_cast<double>(best_gd[i]) > params.match_ratio * second_gd[i])
            continue;
        result.pairs.push_back({i, j, best_gd[i]});
    }
    result.verdict = static_cast<int>(result.pairs.size()) >= params.min_matches
                         ? Verdict::SIMILAR
                         : Verdict::DISSIMILAR;
    return result;
}

SimilarityOutcome image_feature_similarity(const RasterImage& a, const RasterImage& b,
                                           const OrbParams& params) {
    ImageFeatures fa = detect_and_describe(a, params);
    ImageFeatures fb = detect_and_describe(b, params);
    MatchResult m = match_descriptors(fa.descriptors, fb.descriptors, params);
    return {static_cast<int>(m.pairs.size()), m.verdict};
}

}  // namespace museo::features
