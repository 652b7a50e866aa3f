#include "museo/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <csetjmp>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include <jpeglib.h>

namespace museo::io {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string lower_ext(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

RasterImage load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw UnreadableImage("cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw UnreadableImage("png init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw UnreadableImage("png init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnreadableImage("corrupt PNG: " + path.string());
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnreadableImage("unsupported PNG channel count");
    }

    RasterImage img(static_cast<int>(w), static_cast<int>(h),
                    channels == 1 ? ColorSpace::GRAY : ColorSpace::RGB);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = img.samples.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const RasterImage& img, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw UnreadableImage("cannot write " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw UnreadableImage("png init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw UnreadableImage("png init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw UnreadableImage("PNG write failed: " + path.string());
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.samples.data() +
                                        static_cast<std::size_t>(y) * img.width * img.channels);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

RasterImage load_jpeg(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw UnreadableImage("cannot open " + path.string());

    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw UnreadableImage("corrupt JPEG: " + path.string());
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    RasterImage img(static_cast<int>(cinfo.output_width),
                    static_cast<int>(cinfo.output_height), ColorSpace::RGB);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = img.samples.data() +
                       static_cast<std::size_t>(cinfo.output_scanline) * img.width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

void save_jpeg(const RasterImage& img, const std::filesystem::path& path, int quality = 90) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw UnreadableImage("cannot write " + path.string());

    RasterImage rgb = img;
    if (img.channels == 1) {
        rgb = RasterImage(img.width, img.height, ColorSpace::RGB);
        for (std::size_t i = 0; i < img.samples.size(); ++i) {
            rgb.samples[i * 3] = rgb.samples[i * 3 + 1] = rgb.samples[i * 3 + 2] = img.samples[i];
        }
    }

    jpeg_compress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_compress(&cinfo);
        throw UnreadableImage("JPEG write failed: " + path.string());
    }
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, fp.get());
    cinfo.image_width = static_cast<JDIMENSION>(rgb.width);
    cinfo.image_height = static_cast<JDIMENSION>(rgb.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = rgb.samples.data() +
                       static_cast<std::size_t>(cinfo.next_scanline) * rgb.width * 3;
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".png") return load_png(path);
    if (ext == ".jpg" || ext == ".jpeg") return load_jpeg(path);
    throw UnreadableImage("unsupported image format: " + path.string());
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
    if (!img.valid()) throw UnreadableImage("refusing to save invalid image");
    const std::string ext = lower_ext(path);
    if (ext == ".png")
        save_png(img, path);
    else if (ext == ".jpg" || ext == ".jpeg")
        save_jpeg(img, path);
    else
        throw UnreadableImage("unsupported image format: " + path.string());
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    RasterImage img(mask.width, mask.height, ColorSpace::GRAY);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) img.samples[i] = mask.bits[i] ? 255 : 0;
    save_png(img, path);
}

BinaryMask load_mask(const std::filesystem::path& path) {
    RasterImage img = load_image(path);
    if (img.channels != 1) {
        RasterImage gray(img.width, img.height, ColorSpace::GRAY);
        for (std::size_t i = 0; i < gray.samples.size(); ++i) gray.samples[i] = img.samples[i * 3];
        img = gray;
    }
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i) mask.bits[i] = img.samples[i] >= 128;
    return mask;
}

}  // namespace museo::io
