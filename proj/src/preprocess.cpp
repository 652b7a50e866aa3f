#include "museo/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "museo/metrics.hpp"

namespace museo::preprocess {

namespace imp = museo::imgproc;
using imp::MorphOp;

// ---------------------------------------------------------------------------
// Background removal
// ---------------------------------------------------------------------------

std::vector<PaintingCrop> remove_background(const RasterImage& img, const RunConfig& cfg,
                                            const BinaryMask* valid) {
    RasterImage gray = img.space == ColorSpace::GRAY ? img
                                                     : imp::convert_color(img, ColorSpace::GRAY);
    BinaryMask edges = imp::canny(gray, cfg.canny_low, cfg.canny_high);

    if (valid) {
        // drop edge responses on or near the valid-region boundary (the
        // derotation fill seam would otherwise dominate the contours)
        BinaryMask eroded = imp::morphology(MorphOp::ERODE, *valid,
                                            imp::StructuringElement::rect(7, 7));
        for (int y = 0; y < edges.height; ++y)
            for (int x = 0; x < edges.width; ++x)
                if (edges.get(x, y) && !eroded.get(x, y)) edges.set(x, y, false);
    }

    BinaryMask closed = imp::morphology(
        MorphOp::CLOSE, edges, imp::StructuringElement::rect(cfg.bg_close_width, cfg.bg_close_height));
    std::vector<imp::Contour> contours = imp::find_contours(closed);

    const double min_area =
        cfg.bg_min_area_frac * static_cast<double>(img.width) * img.height;
    struct Candidate {
        BinaryMask filled;
        Box bbox;
        long long area;
    };
    std::vector<Candidate> candidates;
    for (const auto& contour : contours) {
        if (static_cast<int>(candidates.size()) >= cfg.bg_max_paintings) break;
        BinaryMask filled = imp::fill_contours({contour}, img.width, img.height);
        long long area = static_cast<long long>(filled.count());
        if (static_cast<double>(area) < min_area) continue;
        candidates.push_back({std::move(filled), imp::contour_bbox(contour), area});
    }
    if (candidates.empty()) throw NoPaintingFound("no contour above the area floor");

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) { return a.bbox.x1 < b.bbox.x1; });

    std::vector<PaintingCrop> crops;
    for (const auto& cand : candidates) {
        PaintingCrop crop;
        crop.origin = {cand.bbox.x1, cand.bbox.y1};
        const int cw = cand.bbox.width(), ch = cand.bbox.height();
        crop.image = RasterImage(cw, ch, img.space);
        crop.image.channels = img.channels;
        crop.image.samples.assign(static_cast<std::size_t>(cw) * ch * img.channels, 0);
        crop.mask = BinaryMask(cw, ch);
        for (int y = 0; y < ch; ++y)
            for (int x = 0; x < cw; ++x) {
                for (int c = 0; c < img.channels; ++c)
                    crop.image.at(x, y, c) = img.at(cand.bbox.x1 + x, cand.bbox.y1 + y, c);
                crop.mask.set(x, y, cand.filled.get(cand.bbox.x1 + x, cand.bbox.y1 + y));
            }
        crops.push_back(std::move(crop));
    }
    return crops;
}

// ---------------------------------------------------------------------------
// Text boxes
// ---------------------------------------------------------------------------

double score_candidate(const Box& box, int image_width, int image_height,
                       const RunConfig& cfg) {
    const double W = image_width, H = image_height;
    const double cx = 0.5 * (box.x1 + box.x2);
    const double cy = 0.5 * (box.y1 + box.y2);
    const double img_cx = 0.5 * W;

    // (1) horizontal distance between centers
    const double ind1 = std::fabs(cx - img_cx) / W;
    // (2) vertical distance to the 1/5 or 4/5 reference line
    const double ind2 = std::min(std::fabs(cy - H / 5.0), std::fabs(cy - 4.0 * H / 5.0)) / H;
    // (3) asymmetry of the box about the image center-x line
    const double ind3 = std::fabs((box.x2 - img_cx) - (img_cx - box.x1)) / W;
    // (4) deviation of the box edges from 1/6 and 5/6 of the width
    const double ind4 =
        0.5 * (std::fabs(box.x1 - W / 6.0) + std::fabs(box.x2 - 5.0 * W / 6.0)) / W;
    // (5) aspect-ratio deviation from the 4:1 reference, scaled by 4
    const double h = std::max(1, box.height());
    const double ind5 = std::fabs(static_cast<double>(box.width()) / h - 4.0) / 4.0;

    return cfg.tb_weight_center_x * ind1 + cfg.tb_weight_center_y * ind2 +
           cfg.tb_weight_symmetry * ind3 + cfg.tb_weight_edges * ind4 +
           cfg.tb_weight_aspect * ind5;
}

std::vector<TextBoxCandidate> detect_textbox_channel(const RasterImage& channel_img,
                                                     HatKind hat, const RunConfig& cfg) {
    if (channel_img.channels != 1) throw MultiChannelInput("textbox channel must be GRAY");

    const auto hat_op = hat == HatKind::TOPHAT ? MorphOp::TOPHAT : MorphOp::BLACKHAT;
    RasterImage response = imp::morphology(
        hat_op, channel_img, imp::StructuringElement::rect(cfg.tb_hat_size, cfg.tb_hat_size));

    // a flat response carries no text; Otsu on it would split noise
    auto minmax = std::minmax_element(response.samples.begin(), response.samples.end());
    if (*minmax.second - *minmax.first < 8) return {};

    const int threshold = imp::otsu_threshold(response);
    BinaryMask binary = imp::gray_to_mask(response, static_cast<std::uint8_t>(threshold));
    binary = imp::morphology(
        MorphOp::CLOSE, binary,
        imp::StructuringElement::rect(cfg.tb_close_width, cfg.tb_close_height));

    const double image_area = static_cast<double>(channel_img.width) * channel_img.height;
    std::vector<TextBoxCandidate> candidates;
    for (const auto& contour : imp::find_contours(binary)) {
        if (static_cast<int>(candidates.size()) >= cfg.tb_max_candidates) break;
        TextBoxCandidate cand;
        cand.box = imp::contour_bbox(contour);
        // a text box never swallows half the painting
        if (static_cast<double>(cand.box.area()) > 0.45 * image_area) continue;
        cand.hat = hat;
        cand.score = score_candidate(cand.box, channel_img.width, channel_img.height, cfg);
        candidates.push_back(cand);
    }
    return candidates;
}

std::optional<TextBoxCandidate> detect_textbox(const RasterImage& img, const RunConfig& cfg) {
    RasterImage lab = imp::convert_color(img, ColorSpace::LAB);
    std::optional<TextBoxCandidate> best;
    for (int channel = 0; channel < 3; ++channel) {
        RasterImage plane = imp::extract_channel(lab, channel);
        for (HatKind hat : {HatKind::TOPHAT, HatKind::BLACKHAT}) {
            for (TextBoxCandidate cand : detect_textbox_channel(plane, hat, cfg)) {
                cand.channel = channel;
                if (!best || cand.score < best->score) best = cand;
            }
        }
    }
    if (!best || best->score > cfg.tb_score_ceiling) return std::nullopt;
    return best;
}

PaintingCrop erase_textbox(PaintingCrop crop, const Box& box) {
    if (!box.valid() || box.x1 < 0 || box.y1 < 0 || box.x2 > crop.mask.width ||
        box.y2 > crop.mask.height)
        throw BoxOutsideCrop("text box exceeds the crop");
    for (int y = box.y1; y < box.y2; ++y)
        for (int x = box.x1; x < box.x2; ++x) crop.mask.set(x, y, false);
    return crop;
}

// ---------------------------------------------------------------------------
// Noise
// ---------------------------------------------------------------------------

DenoiseOutcome detect_and_denoise(const RasterImage& img, double psnr_threshold_db,
                                  int median_radius) {
    RasterImage filtered = imp::median_filter(img, median_radius);
    const double p = metrics::psnr(img, filtered);
    DenoiseOutcome out;
    out.psnr_db = p;
    out.noise_detected = p < psnr_threshold_db;
    out.image = out.noise_detected ? std::move(filtered) : img;
    return out;
}

// ---------------------------------------------------------------------------
// Rotation
// ---------------------------------------------------------------------------

namespace {

RasterImage rotation_input(const RasterImage& img, const RunConfig& cfg) {
    RasterImage gray = img.space == ColorSpace::GRAY ? img
                                                     : imp::convert_color(img, ColorSpace::GRAY);
    if (cfg.rot_median_prefilter) gray = imp::median_filter(gray, 1);
    return gray;
}

}  // namespace

double estimate_rotation_rect(const RasterImage& img, const RunConfig& cfg) {
    RasterImage gray = rotation_input(img, cfg);
    BinaryMask edges = imp::canny(gray, cfg.canny_low, cfg.canny_high);
    BinaryMask closed = imp::morphology(
        MorphOp::CLOSE, edges, imp::StructuringElement::rect(cfg.bg_close_width, cfg.bg_close_height));
    std::vector<imp::Contour> contours = imp::find_contours(closed);
    if (contours.empty()) throw NoPaintingFound("no contour for rotation estimation");

    imp::OrientedRect rect = imp::min_area_rect(contours.front().points);
    auto corners = rect.corners();
    // two lowest corners (largest y), left to right
    std::sort(corners.begin(), corners.end(),
              [](const PointD& a, const PointD& b) { return a.y > b.y; });
    PointD p1 = corners[0], p2 = corners[1];
    if (p1.x > p2.x) std::swap(p1, p2);
    const double dx = p2.x - p1.x, dy = p2.y - p1.y;
    if (std::fabs(dx) < 1e-9 && std::fabs(dy) < 1e-9) return 0.0;
    return imp::normalize_angle_deg(std::atan2(-dy, dx) * 180.0 / M_PI);
}

double estimate_rotation_hough(const RasterImage& img, const RunConfig& cfg) {
    RasterImage gray = rotation_input(img, cfg);
    BinaryMask edges = imp::canny(gray, cfg.canny_low, cfg.canny_high);
    auto lines = imp::hough_lines(edges, cfg.hough_rho_step,
                                  cfg.hough_theta_step_deg * M_PI / 180.0,
                                  cfg.hough_vote_threshold);
    if (static_cast<int>(lines.size()) > cfg.hough_max_lines)
        lines.resize(static_cast<std::size_t>(cfg.hough_max_lines));

    // keep near-horizontal lines: normal angle within 45 degrees of pi/2
    std::vector<double> angles;
    for (const auto& line : lines) {
        if (std::fabs(line.theta - M_PI / 2.0) > M_PI / 4.0) continue;
        angles.push_back(imp::normalize_angle_deg(90.0 - line.theta * 180.0 / M_PI));
    }
    if (angles.empty()) throw NoLinesFound("no horizontal line candidates");

    // outlier rejection at cfg.mad_multiplier median absolute deviations
    std::vector<double> sorted = angles;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::vector<double> dev;
    dev.reserve(sorted.size());
    for (double a : sorted) dev.push_back(std::fabs(a - median));
    std::sort(dev.begin(), dev.end());
    const double mad = std::max(dev[dev.size() / 2], 1e-9);

    double sum = 0.0;
    int kept = 0;
    for (double a : angles) {
        if (std::fabs(a - median) <= cfg.mad_multiplier * mad) {
            sum += a;
            ++kept;
        }
    }
    return imp::normalize_angle_deg(sum / kept);
}

RasterImage derotate(const RasterImage& img, double angle_deg) {
    return imp::rotate_expand(img, -angle_deg);
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

PipelineResult preprocess_pipeline(const RasterImage& img, const RunConfig& cfg) {
    PipelineResult result;
    result.source_width = img.width;
    result.source_height = img.height;

    RasterImage work = img;
    double angle = 0.0;
    if (cfg.rotation_enabled) {
        try {
            angle = cfg.rotation_method == "hough" ? estimate_rotation_hough(work, cfg)
                                                   : estimate_rotation_rect(work, cfg);
        } catch (const Error&) {
            angle = 0.0;  // featureless image: keep it unrotated
        }
    }
    result.report.estimated_angle_deg = angle;

    BinaryMask valid(img.width, img.height, true);
    bool expanded = false;
    if (cfg.rotation_enabled && std::fabs(angle) > 0.05) {
        work = derotate(work, angle);
        RasterImage valid_gray = imp::rotate_expand(imp::mask_to_gray(valid), -angle);
        valid = imp::gray_to_mask(valid_gray, 200);
        expanded = true;
    }
    result.processed_width = work.width;
    result.processed_height = work.height;

    if (cfg.denoise_enabled) {
        DenoiseOutcome denoised = detect_and_denoise(work, cfg.psnr_threshold, cfg.noise_median_radius);
        result.report.noise_detected = denoised.noise_detected;
        result.report.psnr_gap_db = denoised.psnr_db - cfg.psnr_threshold;
        work = std::move(denoised.image);
    } else {
        result.report.psnr_gap_db = std::numeric_limits<double>::infinity();
    }

    if (cfg.background_enabled) {
        try {
            result.crops = remove_background(work, cfg, expanded ? &valid : nullptr);
        } catch (const NoPaintingFound&) {
            result.crops.clear();
        }
    } else {
        PaintingCrop whole;
        whole.image = work;
        whole.mask = BinaryMask(work.width, work.height, true);
        whole.origin = {0, 0};
        result.crops.push_back(std::move(whole));
    }
    for (auto& crop : result.crops) crop.rotation_applied_deg = angle;
    result.report.painting_count = static_cast<int>(result.crops.size());

    result.painting_union = BinaryMask(result.processed_width, result.processed_height);
    for (const auto& crop : result.crops)
        for (int y = 0; y < crop.mask.height; ++y)
            for (int x = 0; x < crop.mask.width; ++x)
                if (crop.mask.get(x, y))
                    result.painting_union.set(crop.origin.x + x, crop.origin.y + y, true);

    if (cfg.textbox_enabled) {
        for (auto& crop : result.crops) {
            std::optional<TextBoxCandidate> box = detect_textbox(crop.image, cfg);
            if (!box) continue;
            crop = erase_textbox(std::move(crop), box->box);
            Box in_image = box->box;
            in_image.x1 += crop.origin.x;
            in_image.x2 += crop.origin.x;
            in_image.y1 += crop.origin.y;
            in_image.y2 += crop.origin.y;
            result.report.text_boxes.push_back(in_image);
        }
    }
    return result;
}

namespace {

// Forward map of derotate(angle): source pixel -> processed-canvas pixel.
struct DerotateMap {
    double c, s, cx_src, cy_src, cx_dst, cy_dst;

    DerotateMap(double angle_deg, int sw, int sh, int dw, int dh) {
        const double rad = -angle_deg * M_PI / 180.0;  // derotate rotates by -angle
        c = std::cos(rad);
        s = std::sin(rad);
        cx_src = (sw - 1) * 0.5;
        cy_src = (sh - 1) * 0.5;
        cx_dst = (dw - 1) * 0.5;
        cy_dst = (dh - 1) * 0.5;
    }
    // visual-CCW forward map F = [[c, s], [-s, c]]
    PointD forward(double x, double y) const {
        const double rx = x - cx_src, ry = y - cy_src;
        return {c * rx + s * ry + cx_dst, -s * rx + c * ry + cy_dst};
    }
};

}  // namespace

BinaryMask pipeline_mask_in_source(const PipelineResult& result) {
    const BinaryMask& processed = result.painting_union;
    const double angle = result.crops.empty() ? 0.0 : result.crops.front().rotation_applied_deg;
    BinaryMask out(result.source_width, result.source_height);
    if (result.processed_width == result.source_width &&
        result.processed_height == result.source_height && std::fabs(angle) <= 0.05) {
        return processed;
    }
    DerotateMap map(angle, result.source_width, result.source_height, result.processed_width,
                    result.processed_height);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            PointD p = map.forward(x, y);
            int px = static_cast<int>(std::lround(p.x));
            int py = static_cast<int>(std::lround(p.y));
            if (processed.in_bounds(px, py) && processed.get(px, py)) out.set(x, y, true);
        }
    return out;
}

std::vector<Box> pipeline_boxes_in_source(const PipelineResult& result) {
    const double angle = result.crops.empty() ? 0.0 : result.crops.front().rotation_applied_deg;
    if (result.processed_width == result.source_width &&
        result.processed_height == result.source_height && std::fabs(angle) <= 0.05)
        return result.report.text_boxes;

    // inverse of the derotate forward map: processed -> source
    const double rad = -angle * M_PI / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const double cx_dst = (result.processed_width - 1) * 0.5;
    const double cy_dst = (result.processed_height - 1) * 0.5;
    const double cx_src = (result.source_width - 1) * 0.5;
    const double cy_src = (result.source_height - 1) * 0.5;

    std::vector<Box> out;
    for (const Box& b : result.report.text_boxes) {
        double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
        const PointD corners[4] = {{double(b.x1), double(b.y1)},
                                   {double(b.x2 - 1), double(b.y1)},
                                   {double(b.x2 - 1), double(b.y2 - 1)},
                                   {double(b.x1), double(b.y2 - 1)}};
        for (const auto& q : corners) {
            const double rx = q.x - cx_dst, ry = q.y - cy_dst;
            const double sx = c * rx - s * ry + cx_src;
            const double sy = s * rx + c * ry + cy_src;
            min_x = std::min(min_x, sx);
            max_x = std::max(max_x, sx);
            min_y = std::min(min_y, sy);
            max_y = std::max(max_y, sy);
        }
        out.push_back({static_cast<int>(std::floor(min_x)), static_cast<int>(std::floor(min_y)),
                       static_cast<int>(std::ceil(max_x)) + 1,
                       static_cast<int>(std::ceil(max_y)) + 1});
    }
    return out;
}

}  // namespace museo::preprocess
