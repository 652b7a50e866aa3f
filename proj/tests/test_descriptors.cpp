#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "museo/descriptors.hpp"
#include "museo/imgproc.hpp"

using namespace museo;
using namespace museo::descriptors;

namespace {

RasterImage random_rgb(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    RasterImage img(w, h, ColorSpace::RGB);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

RasterImage random_gray(int w, int h, std::uint32_t seed) {
    std::mt19937 rng(seed);
    RasterImage img(w, h, ColorSpace::GRAY);
    for (auto& s : img.samples) s = static_cast<std::uint8_t>(rng() & 0xFF);
    return img;
}

double vec_sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

TEST_CASE("hist_gray_1d: constant image, counting oracle, mask exclusion") {
    RasterImage c(10, 10, ColorSpace::GRAY, 128);
    DescriptorVector d = hist_gray_1d(c, 256);
    CHECK(d.values[128] == doctest::Approx(1.0));
    CHECK(vec_sum(d.values) == doctest::Approx(1.0));

    // counting oracle on a random image
    RasterImage img = random_gray(8, 8, 3);
    DescriptorVector h = hist_gray_1d(img, 16);
    std::vector<double> oracle(16, 0.0);
    for (auto v : img.samples) oracle[v * 16 / 256] += 1.0;
    for (auto& v : oracle) v /= 64.0;
    for (int b = 0; b < 16; ++b) CHECK(h.values[b] == doctest::Approx(oracle[b]));

    // masked pixels are excluded; their values cannot matter
    BinaryMask mask(8, 8, true);
    for (int x = 0; x < 8; ++x) mask.set(x, 0, false);
    DescriptorVector before = hist_gray_1d(img, 16, &mask);
    for (int x = 0; x < 8; ++x) img.at(x, 0) = 255;
    DescriptorVector after = hist_gray_1d(img, 16, &mask);
    CHECK(before.values == after.values);

    CHECK_THROWS_AS(hist_gray_1d(img, 1), BadBinCount);
    CHECK_THROWS_AS(hist_gray_1d(img, 300), BadBinCount);
}

TEST_CASE("hist_3d: single bin for pure color, length, triple-loop oracle") {
    RasterImage red(6, 6, ColorSpace::RGB);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) red.at(x, y, 0) = 255;
    DescriptorVector d = hist_3d(red, ColorSpace::RGB, 8);
    CHECK(d.values.size() == 512);
    int nonzero = 0;
    for (double v : d.values)
        if (v > 0) ++nonzero;
    CHECK(nonzero == 1);
    CHECK(d.values[(7 * 8 + 0) * 8 + 0] == doctest::Approx(1.0));

    RasterImage img = random_rgb(8, 8, 5);
    DescriptorVector h = hist_3d(img, ColorSpace::RGB, 4);
    std::vector<double> oracle(64, 0.0);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            int b0 = img.at(x, y, 0) * 4 / 256;
            int b1 = img.at(x, y, 1) * 4 / 256;
            int b2 = img.at(x, y, 2) * 4 / 256;
            oracle[(b0 * 4 + b1) * 4 + b2] += 1.0;
        }
    for (auto& v : oracle) v /= 64.0;
    for (int i = 0; i < 64; ++i) CHECK(h.values[i] == doctest::Approx(oracle[i]));

    CHECK_THROWS_AS(hist_3d(img, ColorSpace::GRAY, 8), GrayInput);
    CHECK_THROWS_AS(hist_3d(img, ColorSpace::RGB, 40), BadBinCount);
}

TEST_CASE("block_histogram: uniform tiles, length, quadrant oracle") {
    BlockSpec spec;
    spec.type = BlockSpec::Type::COLOR_3D;
    spec.bins = 4;

    RasterImage uniform(32, 32, ColorSpace::RGB);
    for (auto& s : uniform.samples) s = 93;
    DescriptorVector d = block_histogram(uniform, 4, spec);
    CHECK(d.values.size() == 16 * 64);
    for (int tile = 1; tile < 16; ++tile)
        for (int b = 0; b < 64; ++b)
            CHECK(d.values[tile * 64 + b] == doctest::Approx(d.values[b]));

    // grid 2 on a random image equals crop-then-hist_3d per quadrant
    RasterImage img = random_rgb(32, 32, 9);
    DescriptorVector block = block_histogram(img, 2, spec);
    for (int ty = 0; ty < 2; ++ty)
        for (int tx = 0; tx < 2; ++tx) {
            RasterImage quad(16, 16, ColorSpace::RGB);
            for (int y = 0; y < 16; ++y)
                for (int x = 0; x < 16; ++x)
                    for (int c = 0; c < 3; ++c)
                        quad.at(x, y, c) = img.at(tx * 16 + x, ty * 16 + y, c);
            DescriptorVector sub = hist_3d(quad, ColorSpace::RGB, 4);
            for (int b = 0; b < 64; ++b)
                CHECK(block.values[(ty * 2 + tx) * 64 + b] == doctest::Approx(sub.values[b]));
        }

    CHECK_THROWS_AS(block_histogram(RasterImage(3, 3, ColorSpace::RGB), 4, spec), ImageTooSmall);
}

TEST_CASE("block_histogram: per-tile normalization with remainder absorption") {
    BlockSpec spec;
    spec.type = BlockSpec::Type::GRAY_1D;
    spec.bins = 32;
    RasterImage img = random_rgb(37, 29, 17);  // not divisible by 3
    DescriptorVector d = block_histogram(img, 3, spec);
    CHECK(d.values.size() == 9 * 32);
    for (int tile = 0; tile < 9; ++tile) {
        double s = 0;
        for (int b = 0; b < 32; ++b) s += d.values[tile * 32 + b];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("multires_histogram equals concatenated block histograms") {
    BlockSpec spec;
    spec.type = BlockSpec::Type::COLOR_3D;
    spec.bins = 2;
    RasterImage img = random_rgb(40, 40, 21);
    DescriptorVector multi = multires_histogram(img, {1, 2, 4}, spec);
    CHECK(multi.values.size() == (1 + 4 + 16) * 8);

    std::vector<double> manual;
    for (int g : {1, 2, 4}) {
        DescriptorVector level = block_histogram(img, g, spec);
        manual.insert(manual.end(), level.values.begin(), level.values.end());
    }
    CHECK(multi.values == manual);

    DescriptorVector single = multires_histogram(img, {1}, spec);
    DescriptorVector global = hist_3d(img, ColorSpace::RGB, 2);
    for (std::size_t i = 0; i < global.values.size(); ++i)
        CHECK(single.values[i] == doctest::Approx(global.values[i]));
}

TEST_CASE("layouts gate comparability") {
    RasterImage img = random_rgb(32, 32, 2);
    DescriptorVector a = hist_gray_1d(img, 32);
    DescriptorVector b = hist_gray_1d(img, 64);
    DescriptorVector c = hist_3d(img, ColorSpace::RGB, 8);
    CHECK(a.comparable_with(a));
    CHECK(!a.comparable_with(b));
    CHECK(!a.comparable_with(c));
    CHECK(a.layout.expected_length() == a.values.size());
    CHECK(c.layout.expected_length() == c.values.size());
}

TEST_CASE("lbp: constant image codes 255, shift invariance, bit oracle") {
    RasterImage flat(6, 6, ColorSpace::GRAY, 100);
    RasterImage codes = lbp_codes(flat);
    for (auto v : codes.samples) CHECK(v == 255);

    RasterImage img = random_gray(6, 6, 31);
    RasterImage base = lbp_codes(img);

    // oracle: assemble bits clockwise from top-left, neighbor >= center
    static const int dx[8] = {-1, 0, 1, 1, 1, 0, -1, -1};
    static const int dy[8] = {-1, -1, -1, 0, 1, 1, 1, 0};
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) {
            unsigned expect = 0;
            for (int k = 0; k < 8; ++k) {
                expect <<= 1;
                if (img.at_clamped(x + dx[k], y + dy[k]) >= img.at(x, y)) expect |= 1;
            }
            CHECK(base.at(x, y) == expect);
        }

    // adding a constant without clipping leaves the codes unchanged
    RasterImage shifted = img;
    for (auto& v : shifted.samples) v = static_cast<std::uint8_t>(std::min(255, v / 2 + 40));
    RasterImage half = img;
    for (auto& v : half.samples) v = static_cast<std::uint8_t>(v / 2);
    RasterImage shifted_codes = lbp_codes(shifted);
    RasterImage half_codes = lbp_codes(half);
    CHECK(shifted_codes.samples == half_codes.samples);

    DescriptorVector d = lbp_descriptor(random_gray(64, 64, 8), 4);
    CHECK(d.values.size() == 16 * 256);
    CHECK(d.layout.expected_length() == d.values.size());
    CHECK_THROWS_AS(lbp_descriptor(random_rgb(8, 8, 1), 2), MultiChannelInput);
}

TEST_CASE("lbp descriptor invariant under strictly increasing remapping") {
    RasterImage img = random_gray(48, 48, 12);
    for (auto& v : img.samples) v = static_cast<std::uint8_t>(40 + (v % 150));  // headroom
    DescriptorVector before = lbp_descriptor(img, 4);
    RasterImage remapped = img;
    for (auto& v : remapped.samples)
        v = static_cast<std::uint8_t>(std::min(255.0, 1.2 * v + 10.0));
    DescriptorVector after = lbp_descriptor(remapped, 4);
    CHECK(before.values == after.values);
}

TEST_CASE("dct: constant tile DC value, Parseval, length") {
    double tile[64], coeffs[64];
    for (int i = 0; i < 64; ++i) tile[i] = 9.0;
    dct8x8(tile, coeffs);
    CHECK(coeffs[0] == doctest::Approx(72.0).epsilon(1e-12));  // 8 * 9
    for (int i = 1; i < 64; ++i) CHECK(coeffs[i] == doctest::Approx(0.0).epsilon(1e-9));

    std::mt19937 rng(4);
    for (int i = 0; i < 64; ++i) tile[i] = static_cast<double>(rng() % 256);
    dct8x8(tile, coeffs);
    double in_sq = 0, out_sq = 0;
    for (int i = 0; i < 64; ++i) {
        in_sq += tile[i] * tile[i];
        out_sq += coeffs[i] * coeffs[i];
    }
    CHECK(out_sq == doctest::Approx(in_sq).epsilon(1e-9));

    DescriptorVector d = dct_descriptor(random_gray(64, 64, 6), 10, 64);
    CHECK(d.values.size() == 64 * 10);
    CHECK(d.layout.expected_length() == d.values.size());
    CHECK_THROWS_AS(dct_descriptor(random_gray(8, 8, 1), 0), BadKeepCount);
    CHECK_THROWS_AS(dct_descriptor(random_gray(8, 8, 1), 65), BadKeepCount);
}

TEST_CASE("dct descriptor of a constant image is DC-only per tile") {
    RasterImage flat(64, 64, ColorSpace::GRAY, 50);
    DescriptorVector d = dct_descriptor(flat, 4, 64);
    for (std::size_t i = 0; i < d.values.size(); i += 4) {
        CHECK(d.values[i] == doctest::Approx(400.0).epsilon(1e-9));  // 8 * 50
        CHECK(d.values[i + 1] == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("hog: zero on constants, step edge concentrates mass in bin 0") {
    HogParams p;
    p.analysis_size = 64;  // keep the test small
    RasterImage flat(64, 64, ColorSpace::GRAY, 120);
    DescriptorVector d = hog_descriptor(flat, p);
    CHECK(d.values.size() == hog_length(p));
    for (double v : d.values) CHECK(v == 0.0);

    RasterImage step(64, 64, ColorSpace::GRAY, 0);
    for (int y = 0; y < 64; ++y)
        for (int x = 32; x < 64; ++x) step.at(x, y) = 200;
    DescriptorVector s = hog_descriptor(step, p);
    // orientation of a horizontal gradient is 0 degrees: all mass in bin 0
    double bin0 = 0, rest = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (i % p.bins == 0)
            bin0 += s.values[i];
        else
            rest += s.values[i];
    }
    CHECK(bin0 > 0.0);
    CHECK(rest == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hog length formula holds across geometries") {
    for (int cell : {8, 16})
        for (int block : {1, 2})
            for (int bins : {6, 9}) {
                HogParams p;
                p.cell = cell;
                p.block_cells = block;
                p.bins = bins;
                p.analysis_size = 128;
                DescriptorVector d = hog_descriptor(random_gray(50, 40, 77), p);
                const int cells = 128 / cell;
                const int bps = cells - block + 1;
                CHECK(d.values.size() ==
                      static_cast<std::size_t>(bps) * bps * block * block * bins);
            }
    CHECK_THROWS_AS(hog_descriptor(random_gray(8, 8, 1), HogParams{7, 2, 9, 64}),
                    GeometryMismatch);
}

TEST_CASE("descriptors are deterministic") {
    RasterImage img = random_rgb(40, 40, 55);
    CHECK(hist_3d(img, ColorSpace::RGB, 8).values == hist_3d(img, ColorSpace::RGB, 8).values);
    RasterImage gray = imgproc::convert_color(img, ColorSpace::GRAY);
    CHECK(hog_descriptor(gray).values == hog_descriptor(gray).values);
    CHECK(lbp_descriptor(gray, 4).values == lbp_descriptor(gray, 4).values);
}

TEST_CASE("binarize_text_crop keeps the minority class as foreground") {
    // 30% bright pixels: bright is the minority whichever polarity
    RasterImage crop(20, 10, ColorSpace::GRAY, 30);
    int bright = 0;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 6; ++x) {
            crop.at(x, y) = 220;
            ++bright;
        }
    RasterImage bin = binarize_text_crop(crop);
    int fg = 0;
    for (auto v : bin.samples)
        if (v == 255) ++fg;
    CHECK(fg == bright);

    // inverted polarity: dark minority becomes the foreground
    RasterImage inv(20, 10, ColorSpace::GRAY, 220);
    int dark = 0;
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 6; ++x) {
            inv.at(x, y) = 25;
            ++dark;
        }
    RasterImage bin2 = binarize_text_crop(inv);
    int fg2 = 0;
    for (auto v : bin2.samples)
        if (v == 255) ++fg2;
    CHECK(fg2 == dark);
}

TEST_CASE("sidecar OCR reads the stem file; read_text_descriptor passes through") {
    const auto dir = std::filesystem::temp_directory_path() / "museo_ocr_test";
    std::filesystem::create_directories(dir);
    const auto img_path = dir / "crop.png";
    {
        std::ofstream sidecar(dir / "crop.ocr.txt", std::ios::trunc);
        sidecar << "Claude Monet\n";
    }
    SidecarOcr ocr(img_path);
    RasterImage crop(10, 10, ColorSpace::GRAY, 100);
    CHECK(read_text_descriptor(crop, ocr) == "Claude Monet");

    SidecarOcr missing(dir / "absent.png");
    CHECK(read_text_descriptor(crop, missing) == "");
    std::filesystem::remove_all(dir);
}

TEST_CASE("levenshtein and name normalization") {
    CHECK(levenshtein("kitten", "sitting") == 3);
    CHECK(levenshtein("", "abc") == 3);
    CHECK(levenshtein("abc", "abc") == 0);
    CHECK(normalize_name("  Van  Gogh, V. ") == "van gogh v");
}

TEST_CASE("match_author: exact, fuzzy, ambiguous and empty text") {
    AuthorCatalog catalog;
    catalog.entries = {{0, "Monet", "Water"}, {1, "Degas", "Dance"}, {2, "Monet", "Lilies"}};

    AuthorMatch exact = match_author("Monet", catalog);
    CHECK(exact.distance == doctest::Approx(0.0));
    CHECK(exact.labels == std::set<int>{0, 2});

    // one substitution out of five characters
    AuthorMatch fuzzy = match_author("M0net", catalog);
    CHECK(fuzzy.distance == doctest::Approx(0.2));
    CHECK(fuzzy.labels == std::set<int>{0, 2});

    AuthorMatch empty = match_author("", catalog);
    CHECK(empty.labels.empty());
    CHECK(empty.distance == doctest::Approx(1.0));
}
