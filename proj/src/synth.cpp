#include "museo/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "museo/image_io.hpp"
#include "museo/imgproc.hpp"

namespace museo::synth {

namespace {

using Rng = std::mt19937_64;

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t h = seed ^ (salt * 0x9e3779b97f4a7c15ull);
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return h;
}

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Color {
    std::uint8_t r, g, b;
};

Color random_color(Rng& rng, int lo = 0, int hi = 255) {
    return {static_cast<std::uint8_t>(uniform_int(rng, lo, hi)),
            static_cast<std::uint8_t>(uniform_int(rng, lo, hi)),
            static_cast<std::uint8_t>(uniform_int(rng, lo, hi))};
}

void put(RasterImage& img, int x, int y, Color c) {
    if (x < 0 || x >= img.width || y < 0 || y >= img.height) return;
    img.at(x, y, 0) = c.r;
    img.at(x, y, 1) = c.g;
    img.at(x, y, 2) = c.b;
}

void fill_rect(RasterImage& img, int x1, int y1, int x2, int y2, Color c) {
    for (int y = std::max(0, y1); y < std::min(img.height, y2); ++y)
        for (int x = std::max(0, x1); x < std::min(img.width, x2); ++x) put(img, x, y, c);
}

void blend_px(RasterImage& img, int x, int y, Color c, double alpha) {
    if (x < 0 || x >= img.width || y < 0 || y >= img.height) return;
    img.at(x, y, 0) = static_cast<std::uint8_t>(std::lround((1 - alpha) * img.at(x, y, 0) + alpha * c.r));
    img.at(x, y, 1) = static_cast<std::uint8_t>(std::lround((1 - alpha) * img.at(x, y, 1) + alpha * c.g));
    img.at(x, y, 2) = static_cast<std::uint8_t>(std::lround((1 - alpha) * img.at(x, y, 2) + alpha * c.b));
}

void blend_fill_rect(RasterImage& img, int x1, int y1, int x2, int y2, Color c, double alpha) {
    for (int y = std::max(0, y1); y < std::min(img.height, y2); ++y)
        for (int x = std::max(0, x1); x < std::min(img.width, x2); ++x) blend_px(img, x, y, c, alpha);
}

void blend_fill_disc(RasterImage& img, int cx, int cy, int radius, Color c, double alpha) {
    for (int y = cy - radius; y <= cy + radius; ++y)
        for (int x = cx - radius; x <= cx + radius; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius)
                blend_px(img, x, y, c, alpha);
}

void blend_line(RasterImage& img, int x1, int y1, int x2, int y2, int thickness, Color c,
                double alpha) {
    BinaryMask stamp(img.width, img.height);
    const int steps = std::max(std::abs(x2 - x1), std::abs(y2 - y1)) + 1;
    for (int i = 0; i < steps; ++i) {
        const double t = steps > 1 ? static_cast<double>(i) / (steps - 1) : 0.0;
        const int x = static_cast<int>(std::lround(x1 + t * (x2 - x1)));
        const int y = static_cast<int>(std::lround(y1 + t * (y2 - y1)));
        const int r = thickness / 2;
        for (int yy = std::max(0, y - r); yy <= std::min(img.height - 1, y + r); ++yy)
            for (int xx = std::max(0, x - r); xx <= std::min(img.width - 1, x + r); ++xx)
                stamp.set(xx, yy, true);
    }
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (stamp.get(x, y)) blend_px(img, x, y, c, alpha);
}

void blend_rect(RasterImage& img, int x1, int y1, int x2, int y2, Color c, double alpha) {
    for (int y = std::max(0, y1); y < std::min(img.height, y2); ++y)
        for (int x = std::max(0, x1); x < std::min(img.width, x2); ++x) {
            img.at(x, y, 0) = static_cast<std::uint8_t>(
                std::lround((1 - alpha) * img.at(x, y, 0) + alpha * c.r));
            img.at(x, y, 1) = static_cast<std::uint8_t>(
                std::lround((1 - alpha) * img.at(x, y, 1) + alpha * c.g));
            img.at(x, y, 2) = static_cast<std::uint8_t>(
                std::lround((1 - alpha) * img.at(x, y, 2) + alpha * c.b));
        }
}

// Twin paintings: a cell grid painted from a shared color sequence, laid out
// under a per-variant permutation. Every cell has the identical pixel area
// and the frame never overlaps the grid, so the global color histograms of
// the two variants coincide exactly while their spatial layouts differ.
RasterImage render_twin(std::uint64_t seed, int pair_id, int variant) {
    // cells larger than the text-box hat SE, so a twin's own grid does not
    // masquerade as small bright/dark structure
    constexpr int kCells = 4;
    constexpr int kBorder = 6;
    const int cell_w = 46 + 2 * pair_id;  // interior is exactly kCells * cell
    const int cell_h = 44 + 2 * pair_id;
    const int w = kCells * cell_w + 2 * kBorder;
    const int h = kCells * cell_h + 2 * kBorder;

    Rng palette_rng(mix(seed, 0xA11CEull + pair_id));
    std::vector<Color> cells(kCells * kCells);
    for (auto& c : cells) c = random_color(palette_rng, 30, 225);

    std::vector<int> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    if (variant == 1) {
        Rng perm_rng(mix(seed, 0xBEEFull + pair_id));
        std::shuffle(order.begin(), order.end(), perm_rng);
    }

    RasterImage img(w, h, ColorSpace::RGB);
    for (int cy = 0; cy < kCells; ++cy)
        for (int cx = 0; cx < kCells; ++cx) {
            const Color c = cells[static_cast<std::size_t>(order[cy * kCells + cx])];
            fill_rect(img, kBorder + cx * cell_w, kBorder + cy * cell_h,
                      kBorder + (cx + 1) * cell_w, kBorder + (cy + 1) * cell_h, c);
        }
    const Color frame = {30, 24, 18};
    fill_rect(img, 0, 0, w, kBorder, frame);
    fill_rect(img, 0, h - kBorder, w, h, frame);
    fill_rect(img, 0, 0, kBorder, h, frame);
    fill_rect(img, w - kBorder, 0, w, h, frame);
    return img;
}

void draw_frame(RasterImage& img, Rng& rng) {
    const int border = uniform_int(rng, 5, 8);
    const Color frame = {static_cast<std::uint8_t>(uniform_int(rng, 15, 45)),
                         static_cast<std::uint8_t>(uniform_int(rng, 10, 35)),
                         static_cast<std::uint8_t>(uniform_int(rng, 5, 30))};
    fill_rect(img, 0, 0, img.width, border, frame);
    fill_rect(img, 0, img.height - border, img.width, img.height, frame);
    fill_rect(img, 0, 0, border, img.height, frame);
    fill_rect(img, img.width - border, 0, img.width, img.height, frame);
}

}  // namespace

RasterImage render_painting(std::uint64_t seed, int painting_id, int twin_pairs) {
    Rng rng(mix(seed, 0xC0FFEEull + static_cast<std::uint64_t>(painting_id)));
    const int w = uniform_int(rng, 170, 260);
    const int h = uniform_int(rng, 150, 240);

    if (painting_id < 2 * twin_pairs)
        return render_twin(seed, painting_id / 2, painting_id % 2);

    RasterImage img(w, h, ColorSpace::RGB);
    // background gradient between two colors
    const Color c0 = random_color(rng, 20, 235);
    const Color c1 = random_color(rng, 20, 235);
    const bool vertical = uniform_int(rng, 0, 1) == 1;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double t = vertical ? static_cast<double>(y) / (h - 1)
                                      : static_cast<double>(x) / (w - 1);
            put(img, x, y,
                {static_cast<std::uint8_t>(std::lround(c0.r + t * (c1.r - c0.r))),
                 static_cast<std::uint8_t>(std::lround(c0.g + t * (c1.g - c0.g))),
                 static_cast<std::uint8_t>(std::lround(c0.b + t * (c1.b - c0.b)))});
        }

    // Shapes are blended softly: the painting keeps moderate local contrast
    // (enough for corners and gradients) while superimposed text strips stay
    // the strongest small structure in the image.
    const int shapes = uniform_int(rng, 24, 44);
    const double alpha = 0.45;
    for (int i = 0; i < shapes; ++i) {
        const Color c = random_color(rng, 10, 245);
        switch (uniform_int(rng, 0, 2)) {
            case 0: {
                const int sw = uniform_int(rng, 10, w / 3);
                const int sh = uniform_int(rng, 10, h / 3);
                const int x = uniform_int(rng, 0, std::max(0, w - sw));
                const int y = uniform_int(rng, 0, std::max(0, h - sh));
                blend_fill_rect(img, x, y, x + sw, y + sh, c, alpha);
                break;
            }
            case 1: {
                const int r = uniform_int(rng, 5, std::min(w, h) / 6);
                blend_fill_disc(img, uniform_int(rng, r, w - r - 1),
                                uniform_int(rng, r, h - r - 1), r, c, alpha);
                break;
            }
            default: {
                blend_line(img, uniform_int(rng, 0, w - 1), uniform_int(rng, 0, h - 1),
                           uniform_int(rng, 0, w - 1), uniform_int(rng, 0, h - 1),
                           uniform_int(rng, 2, 5), c, alpha);
                break;
            }
        }
    }
    draw_frame(img, rng);
    return img;
}

std::string author_for_label(int label) {
    static const char* kAuthors[] = {
        "Mara Vellano",  "Jon Brack",      "Ilse Hofmann",  "Pere Duran",
        "Anna Soler",    "Tomas Riera",    "Clara Bosch",   "Hugo Lindqvist",
        "Nina Petrova",  "Oriol Camps",    "Lea Fontaine",  "Marc Vidal",
        "Rosa Ferrer",   "Ivan Kovac",     "Julia Prat",    "Albert Mas",
    };
    constexpr int kCount = static_cast<int>(sizeof(kAuthors) / sizeof(kAuthors[0]));
    if (label < 0) return "Unknown";
    return kAuthors[label % kCount];
}

void generate_museum(const std::filesystem::path& dir, const GeneratorOptions& opts) {
    std::filesystem::create_directories(dir);
    std::ofstream catalog(dir / "catalog.tsv", std::ios::trunc);
    if (!catalog) throw UnreadableImage("cannot write catalog in " + dir.string());
    char name[64];
    for (int label = 0; label < opts.museum_size; ++label) {
        RasterImage img = render_painting(opts.seed, label, opts.twin_pairs);
        std::snprintf(name, sizeof(name), "museum_%04d.png", label);
        io::save_image(img, dir / name);
        catalog << label << '\t' << author_for_label(label) << '\t' << "Composition No. " << label
                << '\n';
    }
}

void salt_and_pepper(RasterImage& img, double density, std::uint64_t seed) {
    Rng rng(mix(seed, 0x5A17ull));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u(rng);
        if (r < density * 0.5) {
            for (int c = 0; c < img.channels; ++c) img.samples[i * img.channels + c] = 0;
        } else if (r < density) {
            for (int c = 0; c < img.channels; ++c) img.samples[i * img.channels + c] = 255;
        }
    }
}

namespace {

void hue_shift(RasterImage& img, int delta8) {
    RasterImage hsv = imgproc::convert_color(img, ColorSpace::HSV);
    for (int y = 0; y < hsv.height; ++y)
        for (int x = 0; x < hsv.width; ++x)
            hsv.at(x, y, 0) = static_cast<std::uint8_t>((hsv.at(x, y, 0) + delta8) & 0xFF);
    img = imgproc::convert_color(hsv, ColorSpace::RGB);
}

struct Placement {
    int painting_id;  // render id; label -1 in truth when >= kUnknownBase
    RasterImage img;
    int x = 0, y = 0;  // top-left on the compose canvas
    std::optional<Box> strip;  // text strip in canvas coordinates
};

void draw_text_strip(RasterImage& canvas, const Placement& p, Rng& rng, Box* strip_out) {
    const int pw = p.img.width, ph = p.img.height;
    const int sw = std::min(std::max(40, (2 * pw) / 3), 144);
    const int sh = std::max(12, sw / 4);
    const int sx = p.x + (pw - sw) / 2;
    const bool top = uniform_int(rng, 0, 1) == 1;
    const int cy = p.y + (top ? ph / 5 : (4 * ph) / 5);
    const int sy = cy - sh / 2;

    const bool bright = uniform_int(rng, 0, 1) == 1;
    const Color strip_color = bright ? Color{245, 243, 238} : Color{12, 12, 16};
    const Color glyph_color = bright ? Color{20, 20, 24} : Color{240, 238, 232};
    blend_rect(canvas, sx, sy, sx + sw, sy + sh, strip_color, 0.80);

    // glyph strokes standing in for letters
    const int pad = std::max(2, sh / 6);
    int x = sx + pad;
    while (x < sx + sw - pad - 2) {
        const int stroke_w = uniform_int(rng, 2, 4);
        const int stroke_h = uniform_int(rng, (2 * (sh - 2 * pad)) / 3, sh - 2 * pad);
        const int gy = sy + sh - pad - stroke_h;
        fill_rect(canvas, x, gy, std::min(x + stroke_w, sx + sw - pad), sy + sh - pad,
                  glyph_color);
        x += stroke_w + uniform_int(rng, 2, 6);
    }
    *strip_out = {sx, sy, sx + sw, sy + sh};
}

}  // namespace

SceneRender render_scene(const GeneratorOptions& opts, int scene_index) {
    const Profile& prof = opts.profile;
    Rng rng(mix(opts.seed, 0x5CE9Eull + static_cast<std::uint64_t>(scene_index)));

    const int W = opts.scene_width, H = opts.scene_height;
    const double angle =
        prof.rotation ? uniform_real(rng, -30.0, 30.0) : 0.0;

    // compose on an extended canvas when rotating so that the final crop has
    // no fill corners (the wall continues past the frame)
    const int ext = prof.rotation
                        ? static_cast<int>(std::ceil(std::hypot(W, H))) + 8
                        : 0;
    const int CW = prof.rotation ? ext : W;
    const int CH = prof.rotation ? ext : H;

    RasterImage canvas(CW, CH, ColorSpace::RGB);
    const Color wall = {static_cast<std::uint8_t>(uniform_int(rng, 150, 205)),
                        static_cast<std::uint8_t>(uniform_int(rng, 145, 200)),
                        static_cast<std::uint8_t>(uniform_int(rng, 140, 195))};
    for (int y = 0; y < CH; ++y) {
        const int shade = (y * 14) / std::max(1, CH - 1) - 7;  // soft vertical gradient
        Color row = {static_cast<std::uint8_t>(std::clamp(wall.r + shade, 0, 255)),
                     static_cast<std::uint8_t>(std::clamp(wall.g + shade, 0, 255)),
                     static_cast<std::uint8_t>(std::clamp(wall.b + shade, 0, 255))};
        for (int x = 0; x < CW; ++x) put(canvas, x, y, row);
    }

    // choose paintings
    const int count = prof.max_paintings > 1 ? uniform_int(rng, 1, 2) : 1;
    std::vector<Placement> placements;
    std::vector<int> used_labels;
    for (int i = 0; i < count; ++i) {
        int id;
        if (prof.unknowns && uniform_real(rng, 0.0, 1.0) < 0.35) {
            id = kUnknownBase + scene_index * 4 + i;
        } else {
            do {
                id = uniform_int(rng, 0, opts.museum_size - 1);
            } while (std::find(used_labels.begin(), used_labels.end(), id) != used_labels.end());
            used_labels.push_back(id);
        }
        Placement p;
        p.painting_id = id;
        p.img = render_painting(opts.seed, id, opts.twin_pairs);
        placements.push_back(std::move(p));
    }

    // Placement: the painting center is drawn in final-frame coordinates so
    // the rotated painting always lands inside the crop, then mapped back to
    // the compose canvas through the inverse rotation. Only overlap needs
    // rejection sampling.
    const double rad = angle * M_PI / 180.0;
    const double ca = std::cos(rad), sa = std::sin(rad);
    auto overlaps = [&](const Placement& p, const std::vector<Placement>& done) {
        const int margin = 26;
        for (const auto& q : done) {
            const bool apart = p.x + p.img.width + margin <= q.x ||
                               q.x + q.img.width + margin <= p.x ||
                               p.y + p.img.height + margin <= q.y ||
                               q.y + q.img.height + margin <= p.y;
            if (!apart) return true;
        }
        return false;
    };

    std::vector<Placement> done;
    for (auto& p : placements) {
        const double half_w = (p.img.width * std::fabs(ca) + p.img.height * std::fabs(sa)) * 0.5;
        const double half_h = (p.img.width * std::fabs(sa) + p.img.height * std::fabs(ca)) * 0.5;
        const double fx_max = W * 0.5 - 12 - half_w;
        const double fy_max = H * 0.5 - 12 - half_h;
        if (fx_max <= 0 || fy_max <= 0) continue;  // cannot fit at this angle
        bool ok = false;
        for (int attempt = 0; attempt < 300 && !ok; ++attempt) {
            const double fx = uniform_real(rng, -fx_max, fx_max);
            const double fy = uniform_real(rng, -fy_max, fy_max);
            // inverse of the visual-CCW rotation F = [[c, s], [-s, c]]
            const double rx = ca * fx - sa * fy;
            const double ry = sa * fx + ca * fy;
            p.x = static_cast<int>(std::lround(rx + (CW - 1) * 0.5 - p.img.width * 0.5));
            p.y = static_cast<int>(std::lround(ry + (CH - 1) * 0.5 - p.img.height * 0.5));
            ok = !overlaps(p, done);
        }
        if (!ok) continue;  // drop a painting that cannot be placed apart
        done.push_back(std::move(p));
    }
    placements = std::move(done);

    // composite, remember per-painting masks on the canvas
    std::vector<BinaryMask> canvas_masks;
    for (auto& p : placements) {
        for (int y = 0; y < p.img.height; ++y)
            for (int x = 0; x < p.img.width; ++x)
                for (int c = 0; c < 3; ++c) canvas.at(p.x + x, p.y + y, c) = p.img.at(x, y, c);
        BinaryMask m(CW, CH);
        for (int y = 0; y < p.img.height; ++y)
            for (int x = 0; x < p.img.width; ++x) m.set(p.x + x, p.y + y, true);
        canvas_masks.push_back(std::move(m));
    }

    std::string ocr_text;
    if (prof.text_boxes) {
        for (auto& p : placements) {
            Box strip{};
            draw_text_strip(canvas, p, rng, &strip);
            p.strip = strip;
        }
        if (!placements.empty() && placements.front().painting_id < kUnknownBase)
            ocr_text = author_for_label(placements.front().painting_id);
    }

    // rotate + crop, or use the canvas directly
    SceneRender out;
    auto to_final_mask = [&](const BinaryMask& m) {
        if (!prof.rotation) return m;
        RasterImage rotated = imgproc::rotate_expand(imgproc::mask_to_gray(m), angle);
        BinaryMask full = imgproc::gray_to_mask(rotated, 127);
        BinaryMask cropped(W, H);
        const int off_x = (full.width - W) / 2, off_y = (full.height - H) / 2;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                if (full.in_bounds(x + off_x, y + off_y))
                    cropped.set(x, y, full.get(x + off_x, y + off_y));
        return cropped;
    };
    auto to_final_box = [&](const Box& b) {
        if (!prof.rotation) return b;
        const double cx = (CW - 1) * 0.5, cy = (CH - 1) * 0.5;
        double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
        const double corners[4][2] = {{double(b.x1), double(b.y1)},
                                      {double(b.x2 - 1), double(b.y1)},
                                      {double(b.x2 - 1), double(b.y2 - 1)},
                                      {double(b.x1), double(b.y2 - 1)}};
        for (const auto& corner : corners) {
            const double rx = corner[0] - cx, ry = corner[1] - cy;
            min_x = std::min(min_x, ca * rx + sa * ry);
            max_x = std::max(max_x, ca * rx + sa * ry);
            min_y = std::min(min_y, -sa * rx + ca * ry);
            max_y = std::max(max_y, -sa * rx + ca * ry);
        }
        return Box{static_cast<int>(std::floor(min_x + W * 0.5)),
                   static_cast<int>(std::floor(min_y + H * 0.5)),
                   static_cast<int>(std::ceil(max_x + W * 0.5)) + 1,
                   static_cast<int>(std::ceil(max_y + H * 0.5)) + 1};
    };

    if (prof.rotation) {
        RasterImage rotated = imgproc::rotate_expand(canvas, angle);
        out.image = RasterImage(W, H, ColorSpace::RGB);
        const int off_x = (rotated.width - W) / 2, off_y = (rotated.height - H) / 2;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                for (int c = 0; c < 3; ++c)
                    out.image.at(x, y, c) = rotated.at_clamped(x + off_x, y + off_y, c);
    } else {
        out.image = std::move(canvas);
    }

    out.truth.angle_deg = angle;
    out.truth.hue_shifted = prof.hue_shift && uniform_real(rng, 0.0, 1.0) < 0.4;
    out.truth.noisy = prof.noise && uniform_real(rng, 0.0, 1.0) < 0.5;
    if (out.truth.hue_shifted) hue_shift(out.image, uniform_int(rng, 64, 192));
    if (out.truth.noisy)
        salt_and_pepper(out.image, 0.10, mix(opts.seed, 0x70155ull + scene_index));

    out.union_mask = BinaryMask(W, H);
    for (std::size_t i = 0; i < placements.size(); ++i) {
        BinaryMask final_mask = to_final_mask(canvas_masks[i]);
        out.painting_masks.push_back(final_mask);
        for (std::size_t b = 0; b < final_mask.bits.size(); ++b)
            out.union_mask.bits[b] |= final_mask.bits[b];

        PaintingTruth truth;
        truth.label = placements[i].painting_id >= kUnknownBase ? -1 : placements[i].painting_id;
        truth.box = to_final_box({placements[i].x, placements[i].y,
                                  placements[i].x + placements[i].img.width,
                                  placements[i].y + placements[i].img.height});
        if (placements[i].strip) truth.text_box = to_final_box(*placements[i].strip);
        out.truth.paintings.push_back(truth);
    }
    // left-to-right by final box
    std::vector<std::size_t> order(out.truth.paintings.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.truth.paintings[a].box.x1 < out.truth.paintings[b].box.x1;
    });
    std::vector<PaintingTruth> sorted_truth;
    std::vector<BinaryMask> sorted_masks;
    for (std::size_t i : order) {
        sorted_truth.push_back(out.truth.paintings[i]);
        sorted_masks.push_back(out.painting_masks[i]);
    }
    out.truth.paintings = std::move(sorted_truth);
    out.painting_masks = std::move(sorted_masks);
    out.ocr_text = ocr_text;
    return out;
}

void generate_dataset(const std::filesystem::path& dir, const GeneratorOptions& opts) {
    std::filesystem::create_directories(dir);
    nlohmann::json gt;
    gt["profile"] = opts.profile.name;
    gt["queries"] = nlohmann::json::array();

    char name[64];
    for (int i = 0; i < opts.scene_count; ++i) {
        SceneRender scene = render_scene(opts, i);
        std::snprintf(name, sizeof(name), "q_%04d.png", i);
        scene.truth.image_name = name;
        io::save_image(scene.image, dir / name);

        std::snprintf(name, sizeof(name), "q_%04d_mask.png", i);
        io::save_mask(scene.union_mask, dir / name);

        if (!scene.ocr_text.empty()) {
            std::snprintf(name, sizeof(name), "q_%04d.ocr.txt", i);
            std::ofstream sidecar(dir / name, std::ios::trunc);
            sidecar << scene.ocr_text << '\n';
        }

        nlohmann::json q;
        q["image"] = scene.truth.image_name;
        q["angle"] = scene.truth.angle_deg;
        q["noisy"] = scene.truth.noisy;
        std::snprintf(name, sizeof(name), "q_%04d_mask.png", i);
        q["mask"] = name;
        q["paintings"] = nlohmann::json::array();
        for (const auto& p : scene.truth.paintings) {
            nlohmann::json pj;
            pj["label"] = p.label;
            pj["box"] = {p.box.x1, p.box.y1, p.box.x2, p.box.y2};
            if (p.text_box)
                pj["text_box"] = {p.text_box->x1, p.text_box->y1, p.text_box->x2, p.text_box->y2};
            else
                pj["text_box"] = nullptr;
            q["paintings"].push_back(pj);
        }
        gt["queries"].push_back(q);
    }
    std::ofstream out(dir / "gt.json", std::ios::trunc);
    out << gt.dump(2) << '\n';
}

Profile profile_from_string(const std::string& name) {
    Profile p;
    p.name = name;
    if (name == "ds1") {
        p.max_paintings = 1;
    } else if (name == "ds2") {
        p.max_paintings = 2;
        p.text_boxes = true;
    } else if (name == "ds3") {
        p.max_paintings = 2;
        p.text_boxes = true;
        p.noise = true;
        p.hue_shift = true;
    } else if (name == "ds4") {
        p.max_paintings = 2;
        p.text_boxes = true;
        p.noise = true;
        p.hue_shift = true;
        p.rotation = true;
        p.unknowns = true;
    } else {
        throw ConfigError("unknown profile: " + name);
    }
    return p;
}

}  // namespace museo::synth
