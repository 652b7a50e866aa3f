#ifndef MUSEO_RASTER_HPP
#define MUSEO_RASTER_HPP

#include <cstdint>
#include <vector>

#include "museo/errors.hpp"

namespace museo {

enum class ColorSpace { GRAY, RGB, LAB, HSV, YCRCB };

const char* to_string(ColorSpace cs);

// 8-bit raster image, row-major, interleaved channels.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    ColorSpace space = ColorSpace::GRAY;
    std::vector<std::uint8_t> samples;

    RasterImage() = default;
    RasterImage(int w, int h, ColorSpace cs, std::uint8_t fill = 0)
        : width(w),
          height(h),
          channels(cs == ColorSpace::GRAY ? 1 : 3),
          space(cs),
          samples(static_cast<std::size_t>(w) * h * (cs == ColorSpace::GRAY ? 1 : 3), fill) {}

    bool valid() const {
        return width >= 1 && height >= 1 && (channels == 1 || channels == 3) &&
               (channels == 1) == (space == ColorSpace::GRAY) &&
               samples.size() == static_cast<std::size_t>(width) * height * channels;
    }

    std::uint8_t& at(int x, int y, int c = 0) {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    // Clamped access, replicating edge pixels.
    std::uint8_t at_clamped(int x, int y, int c = 0) const {
        if (x < 0) x = 0;
        if (x >= width) x = width - 1;
        if (y < 0) y = 0;
        if (y >= height) y = height - 1;
        return at(x, y, c);
    }

    bool operator==(const RasterImage&) const = default;
};

// One boolean per pixel, row-major.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    std::size_t count() const {
        std::size_t n = 0;
        for (std::uint8_t b : bits) n += b;
        return n;
    }

    bool operator==(const BinaryMask&) const = default;
};

struct PointI {
    int x = 0;
    int y = 0;
    bool operator==(const PointI&) const = default;
};

struct PointD {
    double x = 0.0;
    double y = 0.0;
};

// Axis-aligned box, inclusive-exclusive: x in [x1, x2), y in [y1, y2).
struct Box {
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;

    int width() const { return x2 - x1; }
    int height() const { return y2 - y1; }
    long long area() const { return static_cast<long long>(width()) * height(); }
    bool valid() const { return x1 < x2 && y1 < y2; }
    bool contains(int x, int y) const { return x >= x1 && x < x2 && y >= y1 && y < y2; }

    bool operator==(const Box&) const = default;
};

}  // namespace museo

#endif
