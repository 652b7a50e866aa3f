#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "museo/imgproc.hpp"

using namespace museo;
namespace imp = museo::imgproc;

namespace {

RasterImage random_gray(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    RasterImage img(w, h, ColorSpace::GRAY);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

RasterImage random_rgb(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    RasterImage img(w, h, ColorSpace::RGB);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

RasterImage solid_rgb(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RasterImage img(w, h, ColorSpace::RGB);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b;
        }
    return img;
}

}  // namespace

TEST_CASE("convert_color gray fixed points and luma rounding") {
    RasterImage white = solid_rgb(2, 2, 255, 255, 255);
    CHECK(imp::convert_color(white, ColorSpace::GRAY).at(0, 0) == 255);

    RasterImage red = solid_rgb(2, 2, 255, 0, 0);
    // 0.299 * 255 = 76.245, rounded half-up
    CHECK(imp::convert_color(red, ColorSpace::GRAY).at(0, 0) == 76);

    RasterImage mid = solid_rgb(1, 1, 100, 200, 50);
    // 0.299*100 + 0.587*200 + 0.114*50 = 153.0
    CHECK(imp::convert_color(mid, ColorSpace::GRAY).at(0, 0) == 153);
}

TEST_CASE("convert_color HSV blue hue lands at the scaled 8-bit value") {
    RasterImage blue = solid_rgb(1, 1, 0, 0, 255);
    RasterImage hsv = imp::convert_color(blue, ColorSpace::HSV);
    // H = 240 degrees -> 240 * 255 / 360 = 170
    CHECK(hsv.at(0, 0, 0) == 170);
    CHECK(hsv.at(0, 0, 1) == 255);
    CHECK(hsv.at(0, 0, 2) == 255);
}

TEST_CASE("convert_color rejects GRAY as a source and undefined targets") {
    RasterImage gray(4, 4, ColorSpace::GRAY);
    CHECK_THROWS_AS(imp::convert_color(gray, ColorSpace::RGB), UnsupportedConversion);
    CHECK_NOTHROW(imp::convert_color(gray, ColorSpace::GRAY));  // identity is fine
}

TEST_CASE("convert_color preserves dimensions and routes through RGB") {
    RasterImage img = random_rgb(9, 7, 11);
    for (ColorSpace target : {ColorSpace::LAB, ColorSpace::HSV, ColorSpace::YCRCB}) {
        RasterImage out = imp::convert_color(img, target);
        CHECK(out.width == 9);
        CHECK(out.height == 7);
        CHECK(out.channels == 3);
        RasterImage gray_direct = imp::convert_color(img, ColorSpace::GRAY);
        RasterImage gray_routed = imp::convert_color(out, ColorSpace::GRAY);
        CHECK(gray_direct.width == gray_routed.width);
    }
}

TEST_CASE("morphology basics: tophat of constant is zero, dilate stamps the SE") {
    RasterImage flat(8, 8, ColorSpace::GRAY, 77);
    RasterImage th = imp::morphology(imp::MorphOp::TOPHAT, flat, imp::StructuringElement::rect(3, 3));
    CHECK(std::all_of(th.samples.begin(), th.samples.end(), [](std::uint8_t v) { return v == 0; }));

    RasterImage dot(7, 7, ColorSpace::GRAY, 0);
    dot.at(3, 3) = 255;
    RasterImage dilated = imp::morphology(imp::MorphOp::DILATE, dot, imp::StructuringElement::rect(3, 3));
    int on = 0;
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 7; ++x)
            if (dilated.at(x, y) == 255) {
                ++on;
                CHECK(std::abs(x - 3) <= 1);
                CHECK(std::abs(y - 3) <= 1);
            }
    CHECK(on == 9);
}

TEST_CASE("morphology open is idempotent on random input") {
    RasterImage img = random_gray(16, 16, 42);
    auto se = imp::StructuringElement::rect(3, 3);
    RasterImage once = imp::morphology(imp::MorphOp::OPEN, img, se);
    RasterImage twice = imp::morphology(imp::MorphOp::OPEN, once, se);
    CHECK(once.samples == twice.samples);
}

TEST_CASE("morphology ordering: open <= img <= close, and duality") {
    RasterImage img = random_gray(16, 16, 7);
    auto se = imp::StructuringElement::ellipse(5, 3);
    RasterImage opened = imp::morphology(imp::MorphOp::OPEN, img, se);
    RasterImage closed = imp::morphology(imp::MorphOp::CLOSE, img, se);
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        CHECK(opened.samples[i] <= img.samples[i]);
        CHECK(img.samples[i] <= closed.samples[i]);
    }

    // duality: dilate(complement) == complement(erode) for symmetric SEs
    RasterImage comp = img;
    for (auto& v : comp.samples) v = static_cast<std::uint8_t>(255 - v);
    RasterImage left = imp::morphology(imp::MorphOp::DILATE, comp, se);
    RasterImage right = imp::morphology(imp::MorphOp::ERODE, img, se);
    for (auto& v : right.samples) v = static_cast<std::uint8_t>(255 - v);
    CHECK(left.samples == right.samples);
}

TEST_CASE("morphology rejects multi-channel input and even SEs") {
    RasterImage rgb = random_rgb(4, 4, 1);
    CHECK_THROWS_AS(imp::morphology(imp::MorphOp::ERODE, rgb, imp::StructuringElement::rect(3, 3)),
                    MultiChannelInput);
}

TEST_CASE("canny: constant image is empty, thresholds validated") {
    RasterImage flat(32, 32, ColorSpace::GRAY, 128);
    CHECK(imp::canny(flat, 20, 60).count() == 0);
    CHECK_THROWS_AS(imp::canny(flat, 80, 20), InvalidThresholds);
}

TEST_CASE("canny: vertical step edge produces a thin vertical line") {
    RasterImage img(64, 64, ColorSpace::GRAY, 0);
    for (int y = 0; y < 64; ++y)
        for (int x = 32; x < 64; ++x) img.at(x, y) = 255;
    BinaryMask edges = imp::canny(img, 40, 100);
    // each interior row crosses the edge exactly once, near x = 32
    for (int y = 4; y < 60; ++y) {
        int on = 0;
        for (int x = 0; x < 64; ++x)
            if (edges.get(x, y)) {
                ++on;
                CHECK(std::abs(x - 32) <= 2);
            }
        CHECK(on == 1);
    }
}

TEST_CASE("canny: bright square yields a closed edge loop") {
    RasterImage img(64, 64, ColorSpace::GRAY, 10);
    for (int y = 12; y < 52; ++y)
        for (int x = 12; x < 52; ++x) img.at(x, y) = 240;
    BinaryMask edges = imp::canny(img, 40, 100);
    auto contours = imp::find_contours(edges);
    REQUIRE(!contours.empty());
    // the largest contour's bounding box should frame the square
    Box bbox = imp::contour_bbox(contours.front());
    CHECK(bbox.x1 >= 8);
    CHECK(bbox.x1 <= 14);
    CHECK(bbox.x2 >= 50);
    CHECK(bbox.x2 <= 56);
    // closed loop: every row within the box has at least 2 edge pixels
    for (int y = bbox.y1 + 2; y < bbox.y2 - 2; ++y) {
        int on = 0;
        for (int x = 0; x < 64; ++x)
            if (edges.get(x, y)) ++on;
        CHECK(on >= 2);
    }
}

TEST_CASE("median_filter matches a sort-based window oracle") {
    RasterImage img = random_gray(9, 9, 99);
    RasterImage out = imp::median_filter(img, 1);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 9; ++x) {
            std::vector<std::uint8_t> window;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    window.push_back(img.at_clamped(x + dx, y + dy));
            std::sort(window.begin(), window.end());
            CHECK(out.at(x, y) == window[4]);
        }
}

TEST_CASE("median_filter trivia: constants pass through, speckle dies") {
    RasterImage flat(6, 6, ColorSpace::GRAY, 42);
    CHECK(imp::median_filter(flat, 1).samples == flat.samples);

    RasterImage speck(7, 7, ColorSpace::GRAY, 0);
    speck.at(3, 3) = 255;
    CHECK(imp::median_filter(speck, 1).at(3, 3) == 0);
}

TEST_CASE("median_filter preserves dimensions on color images") {
    RasterImage img = random_rgb(10, 6, 5);
    RasterImage out = imp::median_filter(img, 2);
    CHECK(out.width == 10);
    CHECK(out.height == 6);
    CHECK(out.channels == 3);
}

TEST_CASE("find_contours: counts, bbox, emptiness") {
    BinaryMask empty(8, 8);
    CHECK(imp::find_contours(empty).empty());

    BinaryMask two(20, 10);
    for (int y = 1; y < 4; ++y)
        for (int x = 1; x < 4; ++x) two.set(x, y, true);
    for (int y = 5; y < 9; ++y)
        for (int x = 10; x < 16; ++x) two.set(x, y, true);
    auto contours = imp::find_contours(two);
    REQUIRE(contours.size() == 2);
    // ordered by descending area: the 6x4 block first
    CHECK(imp::contour_bbox(contours[0]) == Box{10, 5, 16, 9});
    CHECK(imp::contour_bbox(contours[1]) == Box{1, 1, 4, 4});

    BinaryMask square(10, 10);
    for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 7; ++x) square.set(x, y, true);
    auto sq = imp::find_contours(square);
    REQUIRE(sq.size() == 1);
    CHECK(imp::contour_bbox(sq[0]) == Box{2, 2, 7, 7});
    // trace is closed and 8-connected
    const auto& pts = sq[0].points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const PointI& a = pts[i];
        const PointI& b = pts[(i + 1) % pts.size()];
        CHECK(std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) <= 1);
    }
}

TEST_CASE("fill_contours inverts find_contours on convex hole-free blobs") {
    BinaryMask mask(24, 18);
    for (int y = 3; y < 15; ++y)
        for (int x = 5; x < 19; ++x)
            if ((x - 12) * (x - 12) + (y - 9) * (y - 9) <= 30) mask.set(x, y, true);
    auto contours = imp::find_contours(mask);
    BinaryMask refilled = imp::fill_contours(contours, 24, 18);
    CHECK(refilled.bits == mask.bits);

    CHECK(imp::fill_contours({}, 5, 5).count() == 0);
}

TEST_CASE("fill_contours matches a point-in-polygon oracle on an L-shape") {
    // L-shaped rectilinear polygon walked along its boundary pixels
    std::vector<PointI> boundary;
    auto walk = [&](PointI from, PointI to) {
        int dx = (to.x > from.x) - (to.x < from.x);
        int dy = (to.y > from.y) - (to.y < from.y);
        PointI p = from;
        while (!(p == to)) {
            boundary.push_back(p);
            p.x += dx;
            p.y += dy;
        }
    };
    // corners of the L (clockwise)
    const std::vector<PointI> corners = {{2, 2}, {14, 2}, {14, 8}, {9, 8}, {9, 14}, {2, 14}};
    for (std::size_t i = 0; i < corners.size(); ++i)
        walk(corners[i], corners[(i + 1) % corners.size()]);

    imp::Contour contour{boundary};
    BinaryMask filled = imp::fill_contours({contour}, 20, 20);

    // oracle: boundary-inclusive point-in-polygon by parity counting
    auto inside = [&](int px, int py) {
        for (const auto& b : boundary)
            if (b.x == px && b.y == py) return true;
        bool in = false;
        for (std::size_t i = 0; i < corners.size(); ++i) {
            PointI a = corners[i], b = corners[(i + 1) % corners.size()];
            if ((a.y <= py && py < b.y) || (b.y <= py && py < a.y)) {
                double t = static_cast<double>(py - a.y) / (b.y - a.y);
                double xc = a.x + t * (b.x - a.x);
                if (px < xc) in = !in;
            }
        }
        return in;
    };
    long long oracle_area = 0;
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x) {
            bool expect = inside(x, y);
            if (expect) ++oracle_area;
            CHECK(filled.get(x, y) == expect);
        }
    CHECK(static_cast<long long>(filled.count()) == oracle_area);
}

TEST_CASE("fill_contours rejects out-of-bounds points") {
    imp::Contour bad{{{0, 0}, {1, 0}, {25, 0}}};
    CHECK_THROWS_AS(imp::fill_contours({bad}, 5, 5), OutOfBounds);
}

TEST_CASE("min_area_rect on an axis-aligned rectangle") {
    std::vector<PointI> pts = {{10, 20}, {20, 20}, {20, 24}, {10, 24}};
    imp::OrientedRect r = imp::min_area_rect(pts);
    double w = std::max(r.width, r.height);
    double h = std::min(r.width, r.height);
    CHECK(w == doctest::Approx(10.0));
    CHECK(h == doctest::Approx(4.0));
    // axis-aligned up to the width/height swap convention
    double folded = std::fabs(std::fmod(r.angle_deg + 180.0, 90.0));
    CHECK((folded < 0.5 || folded > 89.5));
}

TEST_CASE("min_area_rect recovers a rotated rectangle") {
    const double theta = 30.0 * M_PI / 180.0;
    std::vector<PointI> pts;
    for (double sx : {-40.0, 40.0})
        for (double sy : {-15.0, 15.0}) {
            // visual CCW rotation in y-down coordinates
            double x = std::cos(theta) * sx + std::sin(theta) * sy + 100.0;
            double y = -std::sin(theta) * sx + std::cos(theta) * sy + 100.0;
            pts.push_back({static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))});
        }
    imp::OrientedRect r = imp::min_area_rect(pts);
    double w = std::max(r.width, r.height);
    double h = std::min(r.width, r.height);
    CHECK(w == doctest::Approx(80.0).epsilon(0.02));
    CHECK(h == doctest::Approx(30.0).epsilon(0.04));
    double fold = std::fabs(imp::normalize_angle_deg(r.angle_deg));
    CHECK((std::fabs(fold - 30.0) < 1.0 || std::fabs(fold - 60.0) < 1.0));
}

TEST_CASE("min_area_rect matches exhaustive hull-edge search on random points") {
    std::mt19937 rng(123);
    std::uniform_int_distribution<int> coord(0, 199);
    std::vector<PointI> pts;
    for (int i = 0; i < 200; ++i) pts.push_back({coord(rng), coord(rng)});

    imp::OrientedRect r = imp::min_area_rect(pts);

    // oracle: brute force over hull-edge-aligned rectangles
    std::vector<PointI> hull = imp::convex_hull(pts);
    double best = 1e300;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const PointI& a = hull[i];
        const PointI& b = hull[(i + 1) % hull.size()];
        double ex = b.x - a.x, ey = b.y - a.y;
        double len = std::hypot(ex, ey);
        if (len < 1e-12) continue;
        ex /= len;
        ey /= len;
        double mn_e = 1e300, mx_e = -1e300, mn_p = 1e300, mx_p = -1e300;
        for (const auto& q : pts) {
            double pe = q.x * ex + q.y * ey;
            double pp = -q.x * ey + q.y * ex;
            mn_e = std::min(mn_e, pe);
            mx_e = std::max(mx_e, pe);
            mn_p = std::min(mn_p, pp);
            mx_p = std::max(mx_p, pp);
        }
        best = std::min(best, (mx_e - mn_e) * (mx_p - mn_p));
    }
    CHECK(r.width * r.height == doctest::Approx(best).epsilon(1e-9));

    // never worse than the axis-aligned bounding box
    int mnx = 1000, mxx = -1, mny = 1000, mxy = -1;
    for (const auto& p : pts) {
        mnx = std::min(mnx, p.x);
        mxx = std::max(mxx, p.x);
        mny = std::min(mny, p.y);
        mxy = std::max(mxy, p.y);
    }
    CHECK(r.width * r.height <= static_cast<double>(mxx - mnx) * (mxy - mny) + 1e-6);
}

TEST_CASE("min_area_rect degenerate inputs") {
    imp::OrientedRect single = imp::min_area_rect({{5, 7}});
    CHECK(single.width == 0.0);
    CHECK(single.height == 0.0);
    CHECK(single.center.x == doctest::Approx(5.0));
}

TEST_CASE("hough_lines finds ideal horizontal and perpendicular lines") {
    BinaryMask empty(32, 32);
    CHECK(imp::hough_lines(empty, 1.0, M_PI / 180.0, 5).empty());

    BinaryMask row(80, 40);
    for (int x = 10; x < 60; ++x) row.set(x, 20, true);
    auto lines = imp::hough_lines(row, 1.0, M_PI / 180.0, 30);
    REQUIRE(!lines.empty());
    CHECK(lines[0].support == 50);
    CHECK(lines[0].theta == doctest::Approx(M_PI / 2).epsilon(0.02));
    CHECK(lines[0].rho == doctest::Approx(20.0).epsilon(0.05));

    BinaryMask cross(60, 60);
    for (int x = 5; x < 55; ++x) cross.set(x, 30, true);
    for (int y = 5; y < 55; ++y) cross.set(25, y, true);
    auto two = imp::hough_lines(cross, 1.0, M_PI / 180.0, 30);
    REQUIRE(two.size() >= 2);
    bool horizontal = false, vertical = false;
    for (const auto& line : two) {
        if (std::fabs(line.theta - M_PI / 2) < 0.02 && std::fabs(line.rho - 30) < 1.5)
            horizontal = true;
        if (line.theta < 0.02 && std::fabs(line.rho - 25) < 1.5) vertical = true;
    }
    CHECK(horizontal);
    CHECK(vertical);
}

TEST_CASE("hough_lines support equals a brute-force vote recount") {
    std::mt19937 rng(7);
    BinaryMask edges(48, 48);
    for (int i = 0; i < 120; ++i) edges.set(rng() % 48, rng() % 48, true);
    const double rho_step = 1.0, theta_step = M_PI / 90.0;
    auto lines = imp::hough_lines(edges, rho_step, theta_step, 4);
    const double diag = std::hypot(48.0, 48.0);
    const int n_rho = 2 * static_cast<int>(std::ceil(diag / rho_step)) + 1;
    for (const auto& line : lines) {
        int votes = 0;
        for (int y = 0; y < 48; ++y)
            for (int x = 0; x < 48; ++x) {
                if (!edges.get(x, y)) continue;
                double rho = x * std::cos(line.theta) + y * std::sin(line.theta);
                int r = n_rho / 2 + static_cast<int>(std::lround(rho / rho_step));
                int expect_r = n_rho / 2 + static_cast<int>(std::lround(line.rho / rho_step));
                if (r == expect_r) ++votes;
            }
        CHECK(votes == line.support);
    }
}

TEST_CASE("rotate_expand: identity at zero, extent formula, round trip") {
    RasterImage img = random_rgb(40, 30, 3);
    RasterImage same = imp::rotate_expand(img, 0.0);
    CHECK(same.samples == img.samples);

    for (double angle : {10.0, 33.0, -20.0, 90.0}) {
        PointI ext = imp::rotated_extent(40, 30, angle);
        RasterImage rotated = imp::rotate_expand(img, angle);
        CHECK(rotated.width == ext.x);
        CHECK(rotated.height == ext.y);
        const double rad = angle * M_PI / 180.0;
        CHECK(ext.x == static_cast<int>(std::ceil(40 * std::fabs(std::cos(rad)) +
                                                  30 * std::fabs(std::sin(rad)) - 1e-9)));
    }

    // smooth image: rotate there and back, compare interior
    RasterImage smooth(60, 60, ColorSpace::GRAY);
    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 60; ++x)
            smooth.at(x, y) = static_cast<std::uint8_t>((x * 2 + y * 3) % 256 / 2 + 60);
    RasterImage there = imp::rotate_expand(smooth, 17.0);
    RasterImage back = imp::rotate_expand(there, -17.0);
    const int ox = (back.width - 60) / 2, oy = (back.height - 60) / 2;
    double err = 0;
    int n = 0;
    for (int y = 10; y < 50; ++y)
        for (int x = 10; x < 50; ++x) {
            err += std::fabs(static_cast<double>(back.at(x + ox, y + oy)) - smooth.at(x, y));
            ++n;
        }
    CHECK(err / n <= 3.0);
}

TEST_CASE("normalize_angle_deg folds into (-90, 90]") {
    CHECK(imp::normalize_angle_deg(0.0) == doctest::Approx(0.0));
    CHECK(imp::normalize_angle_deg(95.0) == doctest::Approx(-85.0));
    CHECK(imp::normalize_angle_deg(-95.0) == doctest::Approx(85.0));
    CHECK(imp::normalize_angle_deg(90.0) == doctest::Approx(90.0));
    CHECK(imp::normalize_angle_deg(-90.0) == doctest::Approx(90.0));
    CHECK(imp::normalize_angle_deg(270.0) == doctest::Approx(90.0));
}

TEST_CASE("otsu splits a bimodal image between the modes") {
    RasterImage img(20, 20, ColorSpace::GRAY);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x) img.at(x, y) = (x < 13) ? 40 : 200;
    int t = imp::otsu_threshold(img);
    CHECK(t >= 40);
    CHECK(t < 200);
}
