#ifndef MUSEO_IMAGE_IO_HPP
#define MUSEO_IMAGE_IO_HPP

#include <filesystem>

#include "museo/raster.hpp"

namespace museo::io {

// Reads an 8-bit PNG or JPEG as RGB (or GRAY for single-channel PNGs).
// Throws UnreadableImage on failure.
RasterImage load_image(const std::filesystem::path& path);

// Format chosen by extension (.png / .jpg / .jpeg). JPEG quality 90.
void save_image(const RasterImage& img, const std::filesystem::path& path);

// Masks persist as single-channel PNGs with 0/255 values.
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask load_mask(const std::filesystem::path& path);

}  // namespace museo::io

#endif
