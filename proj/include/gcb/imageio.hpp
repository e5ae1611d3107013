#pragma once

#include "gcb/masks.hpp"

#include <filesystem>
#include <stdexcept>

namespace gcb {

class ImageIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RgbImage read_png_rgb(const std::filesystem::path& path);
/// 8-bit single channel; values >= 128 are occupied.
Mask read_png_mask(const std::filesystem::path& path);

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image);
void write_png_mask(const std::filesystem::path& path, const Mask& mask);

}  // namespace gcb
