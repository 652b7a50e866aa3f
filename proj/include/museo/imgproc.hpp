#ifndef MUSEO_IMGPROC_HPP
#define MUSEO_IMGPROC_HPP

#include <array>
#include <vector>

#include "museo/raster.hpp"

namespace museo::imgproc {

// ---------------------------------------------------------------------------
// Color conversion. RGB is the hub: every non-identity conversion routes
// through it. GRAY is a sink only (GRAY -> anything else is undefined).
// 8-bit storage conventions:
//   GRAY  luma 0.299 R + 0.587 G + 0.114 B, rounded half-up
//   HSV   H in [0,360) scaled by 255/360, S and V in [0,255]
//   LAB   L in [0,100] scaled by 255/100, a and b offset by 128
//   YCRCB BT.601, Cr and Cb offset by 128
// ---------------------------------------------------------------------------
RasterImage convert_color(const RasterImage& img, ColorSpace target);

// Extract one channel as a GRAY image (no colorimetric meaning, raw samples).
RasterImage extract_channel(const RasterImage& img, int channel);

enum class SEShape { RECT, ELLIPSE };

struct StructuringElement {
    SEShape shape = SEShape::RECT;
    int width = 3;   // odd
    int height = 3;  // odd

    static StructuringElement rect(int w, int h) { return {SEShape::RECT, w, h}; }
    static StructuringElement ellipse(int w, int h) { return {SEShape::ELLIPSE, w, h}; }

    // Offsets of the active cells relative to the center anchor.
    std::vector<PointI> offsets() const;
};

enum class MorphOp { ERODE, DILATE, OPEN, CLOSE, TOPHAT, BLACKHAT };

// Flat grayscale morphology with edge replication at the borders.
RasterImage morphology(MorphOp op, const RasterImage& img, const StructuringElement& se);

// Convenience wrappers for masks (foreground = 255 internally).
BinaryMask morphology(MorphOp op, const BinaryMask& mask, const StructuringElement& se);
RasterImage mask_to_gray(const BinaryMask& mask);
BinaryMask gray_to_mask(const RasterImage& img, std::uint8_t threshold = 127);

// 5x5 Gaussian (sigma 1.4) -> Sobel 3x3 -> 4-direction NMS -> hysteresis.
BinaryMask canny(const RasterImage& img, double low, double high);

// Per-channel median over the (2r+1)^2 replicate-padded window.
RasterImage median_filter(const RasterImage& img, int radius);

// 5x5 box blur, replicate border (single channel).
RasterImage box_blur5(const RasterImage& img);

struct Contour {
    std::vector<PointI> points;  // closed 8-connected outer boundary
};

// Outer boundaries of 8-connected foreground components, descending
// filled area. Holes are ignored.
std::vector<Contour> find_contours(const BinaryMask& mask);

// Scanline fill of each contour interior, boundary included.
BinaryMask fill_contours(const std::vector<Contour>& contours, int width, int height);

long long contour_area(const Contour& contour, int width, int height);
Box contour_bbox(const Contour& contour);

struct OrientedRect {
    PointD center;
    double width = 0.0;
    double height = 0.0;
    double angle_deg = 0.0;  // in (-90, 90], counterclockwise positive

    std::array<PointD, 4> corners() const;
};

// Minimum-area enclosing rectangle (convex hull + rotating calipers).
OrientedRect min_area_rect(const std::vector<PointI>& points);

std::vector<PointI> convex_hull(const std::vector<PointI>& points);

struct LineSegment {
    double rho = 0.0;    // signed distance from origin, pixels
    double theta = 0.0;  // radians in [0, pi)
    int support = 0;     // accumulator votes
};

// Standard (rho, theta) Hough accumulator; returns local maxima with
// support >= vote_threshold, sorted by descending support.
std::vector<LineSegment> hough_lines(const BinaryMask& edges, double rho_step,
                                     double theta_step, int vote_threshold);

// Bilinear resize (any channel count).
RasterImage resize_bilinear(const RasterImage& img, int out_width, int out_height);

// Rotate content counterclockwise by angle_deg about the image center.
// The canvas expands to hold the rotated extent; uncovered pixels are 0.
RasterImage rotate_expand(const RasterImage& img, double angle_deg);

// Canvas dimensions produced by rotate_expand.
PointI rotated_extent(int width, int height, double angle_deg);

// Fold an angle in degrees into (-90, 90].
double normalize_angle_deg(double deg);

// Otsu threshold over the 256-bin histogram of a GRAY image.
int otsu_threshold(const RasterImage& gray);

}  // namespace museo::imgproc

#endif
