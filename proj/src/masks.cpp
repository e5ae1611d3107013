#include "gcb/masks.hpp"

#include "gcb/rng.hpp"
#include "gcb/text.hpp"

#include <algorithm>
#include <cmath>

namespace gcb {

RgbImage::RgbImage(int w, int h, Rgb8 fill) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3)
{
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = fill.r;
        data[i + 1] = fill.g;
        data[i + 2] = fill.b;
    }
}

Rgb8 RgbImage::at(int x, int y) const
{
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {data[i], data[i + 1], data[i + 2]};
}

void RgbImage::set(int x, int y, Rgb8 c)
{
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    data[i] = c.r;
    data[i + 1] = c.g;
    data[i + 2] = c.b;
}

Mask::Mask(int w, int h, bool fill) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

std::size_t Mask::count() const
{
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

double iou(const Mask& a, const Mask& b)
{
    if (!a.same_shape(b)) throw MaskError("IoU of masks with different dimensions");
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        inter += a.bits[i] & b.bits[i];
        uni += a.bits[i] | b.bits[i];
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

RefineResult refine_mask(const MaskBundle& bundle, const RefineParams& params)
{
    const auto& pos = bundle.positive;
    for (const auto& [label, m] : bundle.negatives) {
        if (!m.same_shape(pos)) {
            throw MaskError("negative mask '" + label + "' is " + std::to_string(m.width) + "x" + std::to_string(m.height)
                            + ", positive is " + std::to_string(pos.width) + "x" + std::to_string(pos.height));
        }
    }

    RefineResult out;
    out.mask = pos;
    const std::size_t n = pos.bits.size();
    // Coverage count lets each negative see the union of the others cheaply.
    std::vector<std::uint16_t> cover(n, 0);
    for (const auto& neg : bundle.negatives) {
        for (std::size_t i = 0; i < n; ++i) cover[i] += neg.second.bits[i];
    }

    // The ignore test runs outside the other negatives so that removing them
    // does not change the verdict; this keeps refinement idempotent.
    for (const auto& [label, m] : bundle.negatives) {
        std::size_t inter = 0;
        std::size_t uni = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (cover[i] - m.bits[i] > 0) continue;
            inter += m.bits[i] & pos.bits[i];
            uni += m.bits[i] | pos.bits[i];
        }
        const double v = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
        if (v > params.tau_ignore) {
            out.ignored.push_back(label);
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (m.bits[i]) out.mask.bits[i] = 0;
        }
    }

    const auto remaining = static_cast<double>(out.mask.count());
    const double need = std::max(static_cast<double>(params.min_pixels), params.min_fraction * static_cast<double>(pos.count()));
    out.valid = remaining > 0 && remaining >= need;
    return out;
}

PixelSet extract_pixels(const RgbImage& image, const Mask& mask, std::size_t cap, std::uint64_t seed)
{
    if (image.width != mask.width || image.height != mask.height) {
        throw MaskError("mask dimensions do not match the image");
    }
    if (cap == 0) throw MaskError("sample cap must be at least 1");

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (mask.bits[i]) idx.push_back(i);
    }
    if (idx.empty()) throw MaskError("cannot extract pixels from an empty mask");

    PixelSet out;
    out.source_count = idx.size();
    if (idx.size() > cap) {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < cap; ++i) {
            const auto j = i + static_cast<std::size_t>(uniform_below(rng, idx.size() - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(cap);
        std::sort(idx.begin(), idx.end());
    }
    out.samples.reserve(idx.size());
    for (auto i : idx) {
        const auto* p = &image.data[i * 3];
        out.samples.push_back(srgb_to_lab({p[0], p[1], p[2]}));
    }
    return out;
}

std::string mask_filename(std::string_view image_stem, std::string_view object)
{
    return std::string(image_stem) + "." + slugify(object) + ".mask.png";
}

std::string negative_mask_filename(std::string_view image_stem, std::string_view object, std::string_view label)
{
    return std::string(image_stem) + "." + slugify(object) + ".neg." + slugify(label) + ".mask.png";
}

}  // namespace gcb
