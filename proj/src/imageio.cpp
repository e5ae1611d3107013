#include "gcb/imageio.hpp"

#include <png.h>

#include <cstring>

namespace gcb {
namespace {

std::vector<std::uint8_t> read_png(const std::filesystem::path& path, png_uint_32 format, int& w, int& h)
{
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str())) {
        throw ImageIoError("cannot read PNG " + path.string() + ": " + img.message);
    }
    img.format = format;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr)) {
        const std::string msg = img.message;
        png_image_free(&img);
        throw ImageIoError("cannot decode PNG " + path.string() + ": " + msg);
    }
    w = static_cast<int>(img.width);
    h = static_cast<int>(img.height);
    return buf;
}

void write_png(const std::filesystem::path& path, png_uint_32 format, int w, int h, const std::uint8_t* data)
{
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(w);
    img.height = static_cast<png_uint_32>(h);
    img.format = format;
    if (!png_image_write_to_file(&img, path.c_str(), 0, data, 0, nullptr)) {
        throw ImageIoError("cannot write PNG " + path.string() + ": " + img.message);
    }
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path)
{
    RgbImage out;
    out.data = read_png(path, PNG_FORMAT_RGB, out.width, out.height);
    return out;
}

Mask read_png_mask(const std::filesystem::path& path)
{
    int w = 0;
    int h = 0;
    const auto gray = read_png(path, PNG_FORMAT_GRAY, w, h);
    Mask m(w, h);
    for (std::size_t i = 0; i < gray.size(); ++i) m.bits[i] = gray[i] >= 128 ? 1 : 0;
    return m;
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image)
{
    write_png(path, PNG_FORMAT_RGB, image.width, image.height, image.data.data());
}

void write_png_mask(const std::filesystem::path& path, const Mask& mask)
{
    std::vector<std::uint8_t> gray(mask.bits.size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits[i] ? 255 : 0;
    write_png(path, PNG_FORMAT_GRAY, mask.width, mask.height, gray.data());
}

}  // namespace gcb
