#include <algorithm>
#include <cmath>
#include <cstring>

#include "museo/imgproc.hpp"

namespace museo::imgproc {

const char* cs_name(ColorSpace cs) { return to_string(cs); }

namespace {

inline std::uint8_t clamp_u8(double v) {
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(v + 0.5);  // round half-up for non-negatives
}

inline std::uint8_t clamp_u8_signed(double v) {
    double r = std::floor(v + 0.5);
    if (r <= 0.0) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

void rgb_to_gray_px(const std::uint8_t* in, std::uint8_t* out) {
    out[0] = clamp_u8(0.299 * in[0] + 0.587 * in[1] + 0.114 * in[2]);
}

void rgb_to_hsv_px(const std::uint8_t* in, std::uint8_t* out) {
    double r = in[0] / 255.0, g = in[1] / 255.0, b = in[2] / 255.0;
    double mx = std::max({r, g, b});
    double mn = std::min({r, g, b});
    double d = mx - mn;
    double h = 0.0;
    if (d > 0.0) {
        if (mx == r)
            h = 60.0 * std::fmod((g - b) / d, 6.0);
        else if (mx == g)
            h = 60.0 * ((b - r) / d + 2.0);
        else
            h = 60.0 * ((r - g) / d + 4.0);
        if (h < 0.0) h += 360.0;
    }
    double s = mx > 0.0 ? d / mx : 0.0;
    out[0] = clamp_u8(h * 255.0 / 360.0);
    out[1] = clamp_u8(s * 255.0);
    out[2] = clamp_u8(mx * 255.0);
}

void hsv_to_rgb_px(const std::uint8_t* in, std::uint8_t* out) {
    double h = in[0] * 360.0 / 255.0;
    double s = in[1] / 255.0;
    double v = in[2] / 255.0;
    double c = v * s;
    double hp = h / 60.0;
    double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1)      { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else             { r = c; b = x; }
    double m = v - c;
    out[0] = clamp_u8((r + m) * 255.0);
    out[1] = clamp_u8((g + m) * 255.0);
    out[2] = clamp_u8((b + m) * 255.0);
}

inline double srgb_inv_gamma(double u) {
    return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4);
}

inline double srgb_gamma(double u) {
    return u <= 0.0031308 ? 12.92 * u : 1.055 * std::pow(u, 1.0 / 2.4) - 0.055;
}

inline double lab_f(double t) {
    constexpr double kDelta3 = 0.008856451679;  // (6/29)^3
    return t > kDelta3 ? std::cbrt(t) : t * 7.787037037 + 16.0 / 116.0;
}

inline double lab_f_inv(double t) {
    constexpr double kDelta = 6.0 / 29.0;
    return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

// D65 white point
constexpr double kXn = 0.950456, kYn = 1.0, kZn = 1.088754;

void rgb_to_lab_px(const std::uint8_t* in, std::uint8_t* out) {
    double r = srgb_inv_gamma(in[0] / 255.0);
    double g = srgb_inv_gamma(in[1] / 255.0);
    double b = srgb_inv_gamma(in[2] / 255.0);
    double x = 0.412453 * r + 0.357580 * g + 0.180423 * b;
    double y = 0.212671 * r + 0.715160 * g + 0.072169 * b;
    double z = 0.019334 * r + 0.119193 * g + 0.950227 * b;
    double fx = lab_f(x / kXn), fy = lab_f(y / kYn), fz = lab_f(z / kZn);
    double L = 116.0 * fy - 16.0;
    double a = 500.0 * (fx - fy);
    double bb = 200.0 * (fy - fz);
    out[0] = clamp_u8(L * 255.0 / 100.0);
    out[1] = clamp_u8_signed(a + 128.0);
    out[2] = clamp_u8_signed(bb + 128.0);
}

void lab_to_rgb_px(const std::uint8_t* in, std::uint8_t* out) {
    double L = in[0] * 100.0 / 255.0;
    double a = in[1] - 128.0;
    double b = in[2] - 128.0;
    double fy = (L + 16.0) / 116.0;
    double fx = fy + a / 500.0;
    double fz = fy - b / 200.0;
    double x = kXn * lab_f_inv(fx);
    double y = kYn * lab_f_inv(fy);
    double z = kZn * lab_f_inv(fz);
    double r = 3.240479 * x - 1.537150 * y - 0.498535 * z;
    double g = -0.969256 * x + 1.875992 * y + 0.041556 * z;
    double bb = 0.055648 * x - 0.204043 * y + 1.057311 * z;
    out[0] = clamp_u8(srgb_gamma(std::clamp(r, 0.0, 1.0)) * 255.0);
    out[1] = clamp_u8(srgb_gamma(std::clamp(g, 0.0, 1.0)) * 255.0);
    out[2] = clamp_u8(srgb_gamma(std::clamp(bb, 0.0, 1.0)) * 255.0);
}

void rgb_to_ycrcb_px(const std::uint8_t* in, std::uint8_t* out) {
    double r = in[0], g = in[1], b = in[2];
    double y = 0.299 * r + 0.587 * g + 0.114 * b;
    double cr = (r - y) * 0.713 + 128.0;
    double cb = (b - y) * 0.564 + 128.0;
    out[0] = clamp_u8(y);
    out[1] = clamp_u8_signed(cr);
    out[2] = clamp_u8_signed(cb);
}

void ycrcb_to_rgb_px(const std::uint8_t* in, std::uint8_t* out) {
    double y = in[0];
    double cr = in[1] - 128.0;
    double cb = in[2] - 128.0;
    out[0] = clamp_u8_signed(y + 1.403 * cr);
    out[1] = clamp_u8_signed(y - 0.714 * cr - 0.344 * cb);
    out[2] = clamp_u8_signed(y + 1.773 * cb);
}

using PixelFn = void (*)(const std::uint8_t*, std::uint8_t*);

RasterImage apply_pixelwise(const RasterImage& img, ColorSpace target, PixelFn fn) {
    RasterImage out(img.width, img.height, target);
    const int ic = img.channels, oc = out.channels;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) fn(&img.samples[i * ic], &out.samples[i * oc]);
    return out;
}

RasterImage to_rgb(const RasterImage& img) {
    switch (img.space) {
        case ColorSpace::RGB:   return img;
        case ColorSpace::HSV:   return apply_pixelwise(img, ColorSpace::RGB, hsv_to_rgb_px);
        case ColorSpace::LAB:   return apply_pixelwise(img, ColorSpace::RGB, lab_to_rgb_px);
        case ColorSpace::YCRCB: return apply_pixelwise(img, ColorSpace::RGB, ycrcb_to_rgb_px);
        case ColorSpace::GRAY:
            throw UnsupportedConversion("GRAY is a conversion sink, not a source");
    }
    throw UnsupportedConversion();
}

}  // namespace

RasterImage convert_color(const RasterImage& img, ColorSpace target) {
    if (!img.valid()) throw UnsupportedConversion("invalid input image");
    if (img.space == target) return img;
    RasterImage rgb = to_rgb(img);
    switch (target) {
        case ColorSpace::RGB:   return rgb;
        case ColorSpace::GRAY:  return apply_pixelwise(rgb, ColorSpace::GRAY, rgb_to_gray_px);
        case ColorSpace::HSV:   return apply_pixelwise(rgb, ColorSpace::HSV, rgb_to_hsv_px);
        case ColorSpace::LAB:   return apply_pixelwise(rgb, ColorSpace::LAB, rgb_to_lab_px);
        case ColorSpace::YCRCB: return apply_pixelwise(rgb, ColorSpace::YCRCB, rgb_to_ycrcb_px);
    }
    throw UnsupportedConversion();
}

RasterImage extract_channel(const RasterImage& img, int channel) {
    if (channel < 0 || channel >= img.channels) throw OutOfBounds("channel index");
    RasterImage out(img.width, img.height, ColorSpace::GRAY);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = img.samples[i * img.channels + channel];
    return out;
}

RasterImage median_filter(const RasterImage& img, int radius) {
    if (radius < 1) throw OutOfBounds("median radius must be >= 1");
    RasterImage out = img;
    const int win = 2 * radius + 1;
    std::vector<std::uint8_t> window(static_cast<std::size_t>(win) * win);
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                std::size_t k = 0;
                for (int dy = -radius; dy <= radius; ++dy)
                    for (int dx = -radius; dx <= radius; ++dx)
                        window[k++] = img.at_clamped(x + dx, y + dy, c);
                auto mid = window.begin() + (window.size() - 1) / 2;  // lower median
                std::nth_element(window.begin(), mid, window.end());
                out.at(x, y, c) = *mid;
            }
        }
    }
    return out;
}

RasterImage box_blur5(const RasterImage& img) {
    if (img.channels != 1) throw MultiChannelInput("box_blur5 expects one channel");
    RasterImage out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            int sum = 0;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) sum += img.at_clamped(x + dx, y + dy);
            out.at(x, y) = static_cast<std::uint8_t>((sum + 12) / 25);
        }
    }
    return out;
}

int otsu_threshold(const RasterImage& gray) {
    if (gray.channels != 1) throw MultiChannelInput("otsu expects one channel");
    std::array<std::int64_t, 256> hist{};
    for (std::uint8_t v : gray.samples) hist[v]++;
    const double total = static_cast<double>(gray.samples.size());
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) sum_all += i * static_cast<double>(hist[i]);

    double w0 = 0.0, sum0 = 0.0, best_var = -1.0;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += static_cast<double>(hist[t]);
        if (w0 == 0.0) continue;
        double w1 = total - w0;
        if (w1 == 0.0) break;
        sum0 += t * static_cast<double>(hist[t]);
        double mu0 = sum0 / w0;
        double mu1 = (sum_all - sum0) / w1;
        double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    return best_t;
}

RasterImage resize_bilinear(const RasterImage& img, int out_width, int out_height) {
    if (out_width < 1 || out_height < 1) throw OutOfBounds("resize target");
    RasterImage out(out_width, out_height, img.space);
    out.channels = img.channels;
    out.samples.assign(static_cast<std::size_t>(out_width) * out_height * img.channels, 0);
    const double sx = static_cast<double>(img.width) / out_width;
    const double sy = static_cast<double>(img.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(fy));
        double wy = fy - y0;
        for (int x = 0; x < out_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            double wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                double v00 = img.at_clamped(x0, y0, c);
                double v10 = img.at_clamped(x0 + 1, y0, c);
                double v01 = img.at_clamped(x0, y0 + 1, c);
                double v11 = img.at_clamped(x0 + 1, y0 + 1, c);
                double v = (1 - wy) * ((1 - wx) * v00 + wx * v10) +
                           wy * ((1 - wx) * v01 + wx * v11);
                out.at(x, y, c) = clamp_u8(v);
            }
        }
    }
    return out;
}

PointI rotated_extent(int width, int height, double angle_deg) {
    const double rad = angle_deg * M_PI / 180.0;
    const double c = std::fabs(std::cos(rad)), s = std::fabs(std::sin(rad));
    int w = static_cast<int>(std::ceil(width * c + height * s - 1e-9));
    int h = static_cast<int>(std::ceil(width * s + height * c - 1e-9));
    return {w, h};
}

RasterImage rotate_expand(const RasterImage& img, double angle_deg) {
    // Visual counterclockwise rotation in pixel coordinates (y pointing down):
    // forward map F = [[c, s], [-s, c]]; here we iterate output pixels and
    // sample the source through F^-1 = [[c, -s], [s, c]].
    const PointI ext = rotated_extent(img.width, img.height, angle_deg);
    RasterImage out(ext.x, ext.y, img.space);
    out.channels = img.channels;
    out.samples.assign(static_cast<std::size_t>(ext.x) * ext.y * img.channels, 0);
    const double rad = angle_deg * M_PI / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const double cx_in = (img.width - 1) * 0.5, cy_in = (img.height - 1) * 0.5;
    const double cx_out = (ext.x - 1) * 0.5, cy_out = (ext.y - 1) * 0.5;
    for (int y = 0; y < ext.y; ++y) {
        const double ry = y - cy_out;
        for (int x = 0; x < ext.x; ++x) {
            const double rx = x - cx_out;
            const double sx = c * rx - s * ry + cx_in;
            const double sy = s * rx + c * ry + cy_in;
            if (sx < -0.5 || sx > img.width - 0.5 || sy < -0.5 || sy > img.height - 0.5)
                continue;  // keep fill value 0
            int x0 = static_cast<int>(std::floor(sx));
            int y0 = static_cast<int>(std::floor(sy));
            double wx = sx - x0, wy = sy - y0;
            for (int ch = 0; ch < img.channels; ++ch) {
                double v00 = img.at_clamped(x0, y0, ch);
                double v10 = img.at_clamped(x0 + 1, y0, ch);
                double v01 = img.at_clamped(x0, y0 + 1, ch);
                double v11 = img.at_clamped(x0 + 1, y0 + 1, ch);
                double v = (1 - wy) * ((1 - wx) * v00 + wx * v10) +
                           wy * ((1 - wx) * v01 + wx * v11);
                out.at(x, y, ch) = clamp_u8(v);
            }
        }
    }
    return out;
}

double normalize_angle_deg(double deg) {
    deg = std::fmod(deg, 180.0);
    if (deg > 90.0) deg -= 180.0;
    if (deg <= -90.0) deg += 180.0;
    return deg;
}

}  // namespace museo::imgproc

namespace museo {

const char* to_string(ColorSpace cs) {
    switch (cs) {
        case ColorSpace::GRAY:  return "GRAY";
        case ColorSpace::RGB:   return "RGB";
        case ColorSpace::LAB:   return "LAB";
        case ColorSpace::HSV:   return "HSV";
        case ColorSpace::YCRCB: return "YCRCB";
    }
    return "?";
}

}  // namespace museo
