#pragma once

#include "gcb/colorspace.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gcb {

class MaskError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major RGB, 3 bytes per pixel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    RgbImage() = default;
    RgbImage(int w, int h, Rgb8 fill = {});

    Rgb8 at(int x, int y) const;
    void set(int x, int y, Rgb8 c);
};

struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // 0 or 1

    Mask() = default;
    Mask(int w, int h, bool fill = false);

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v = true) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t count() const;
    bool same_shape(const Mask& o) const { return width == o.width && height == o.height; }

    friend bool operator==(const Mask&, const Mask&) = default;
};

struct MaskBundle {
    Mask positive;
    std::vector<std::pair<std::string, Mask>> negatives;  // (label, mask)
};

struct RefineParams {
    double tau_ignore = 0.9;
    std::size_t min_pixels = 256;
    double min_fraction = 0.02;
};

struct RefineResult {
    Mask mask;
    bool valid = false;
    std::vector<std::string> ignored;  // labels of negatives judged to be the whole object
};

/// |A ∩ B| / |A ∪ B|; zero when both are empty.
double iou(const Mask& a, const Mask& b);

/// Removes negative-label parts from the positive mask. A negative that
/// overlaps the object almost entirely (IoU > tau_ignore) is a segmentation
/// confusion and is skipped.
RefineResult refine_mask(const MaskBundle& bundle, const RefineParams& params = {});

struct PixelSet {
    std::vector<Lab> samples;
    std::size_t source_count = 0;
};

inline constexpr std::size_t kDefaultSampleCap = 100000;

/// Masked pixels in Lab, scan order. Above `cap` a seeded uniform subset is kept.
PixelSet extract_pixels(const RgbImage& image, const Mask& mask, std::size_t cap = kDefaultSampleCap,
                        std::uint64_t seed = 0);

std::string mask_filename(std::string_view image_stem, std::string_view object);
std::string negative_mask_filename(std::string_view image_stem, std::string_view object, std::string_view label);

}  // namespace gcb
