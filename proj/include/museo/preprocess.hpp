#ifndef MUSEO_PREPROCESS_HPP
#define MUSEO_PREPROCESS_HPP

#include <optional>
#include <vector>

#include "museo/config.hpp"
#include "museo/imgproc.hpp"
#include "museo/raster.hpp"

namespace museo::preprocess {

struct PaintingCrop {
    RasterImage image;          // crop in source (derotated) coordinates
    BinaryMask mask;            // painting pixels within the crop
    PointI origin;              // crop position in the processed image
    double rotation_applied_deg = 0.0;
};

enum class HatKind { TOPHAT, BLACKHAT };

struct TextBoxCandidate {
    Box box;
    int channel = 0;  // 0 = L, 1 = A, 2 = B
    HatKind hat = HatKind::TOPHAT;
    double score = 0.0;  // lower is better
};

struct PreprocessReport {
    bool noise_detected = false;
    double psnr_gap_db = 0.0;  // measured PSNR minus threshold (+inf when clean)
    double estimated_angle_deg = 0.0;
    int painting_count = 0;
    std::vector<Box> text_boxes;  // in processed-image coordinates
};

// Gray -> Canny -> morphological CLOSE -> contours -> filled masks. Contours
// under min_area_frac of the image are dropped; the largest max_paintings
// survivors become crops ordered left to right. `valid` restricts edges to a
// region (used after derotation to ignore the canvas border).
std::vector<PaintingCrop> remove_background(const RasterImage& img, const RunConfig& cfg,
                                            const BinaryMask* valid = nullptr);

// Candidates from one LAB channel under one hat transform.
std::vector<TextBoxCandidate> detect_textbox_channel(const RasterImage& channel_img,
                                                     HatKind hat, const RunConfig& cfg);

// Weighted sum of the five geometric indicators (each normalized by the
// relevant image dimension); lower is better.
double score_candidate(const Box& box, int image_width, int image_height,
                       const RunConfig& cfg);

// Pools candidates over L/A/B x {tophat, blackhat}; the minimum-score
// candidate wins unless it exceeds the acceptance ceiling.
std::optional<TextBoxCandidate> detect_textbox(const RasterImage& img, const RunConfig& cfg);

// Marks the box pixels as excluded in the crop mask.
PaintingCrop erase_textbox(PaintingCrop crop, const Box& box);

struct DenoiseOutcome {
    RasterImage image;
    bool noise_detected = false;
    double psnr_db = 0.0;
};

// Median-filters, then keeps the filtered image only when
// PSNR(original, filtered) falls below the threshold.
DenoiseOutcome detect_and_denoise(const RasterImage& img, double psnr_threshold_db,
                                  int median_radius = 1);

// Method A: largest closed contour -> minimum-area rectangle -> angle of the
// line through its two lowest corners.
double estimate_rotation_rect(const RasterImage& img, const RunConfig& cfg);

// Method B: Hough lines, near-horizontal only, MAD outlier rejection, mean.
double estimate_rotation_hough(const RasterImage& img, const RunConfig& cfg);

// Rotation by -angle about the center, expanded canvas, zero fill.
RasterImage derotate(const RasterImage& img, double angle_deg);

struct PipelineResult {
    std::vector<PaintingCrop> crops;
    PreprocessReport report;
    // painting pixels in processed coordinates, captured before text-box
    // erasure punches descriptor-exclusion holes into the crop masks
    BinaryMask painting_union;
    // processed-frame geometry, needed to map artifacts back to the source
    int source_width = 0;
    int source_height = 0;
    int processed_width = 0;
    int processed_height = 0;
};

// estimate rotation -> derotate -> denoise -> remove background ->
// per-crop text-box detection and erasure. Every stage honors its config
// toggle; with everything off the input becomes a single full-frame crop.
PipelineResult preprocess_pipeline(const RasterImage& img, const RunConfig& cfg);

// Union of the crop masks, rendered in source-image coordinates (undoing the
// derotation canvas expansion).
BinaryMask pipeline_mask_in_source(const PipelineResult& result);

// Detected text boxes mapped to source-image coordinates (bounding box of
// the rotated rectangle when a derotation was applied).
std::vector<Box> pipeline_boxes_in_source(const PipelineResult& result);

}  // namespace museo::preprocess

#endif
