#pragma once

#include "gcb/colorspace.hpp"
#include "gcb/masks.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gcb {

class DominantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Centering {
    Uncentered,  // second moment about the neutral axis (default)
    Centered,    // covariance; the projected mean then equals the plain mean
};

struct DominantOptions {
    Centering centering = Centering::Uncentered;
    double neutral_chroma = 0.5;  // below this mean chroma, skip the projection
};

struct DominantColor {
    Lab lab;
    std::size_t pixel_count = 0;
    double mean_chroma = 0.0;
    std::array<double, 2> hue_axis{1.0, 0.0};
};

/// Principal eigenvector of a symmetric 2x2 matrix [[p, q], [q, r]], closed form.
/// Returns nothing useful when the eigenvalues coincide; `degenerate` is set then.
std::array<double, 2> principal_axis_2x2(double p, double q, double r, bool& degenerate);

std::array<double, 2> dominant_hue_axis(const std::vector<Lab>& samples, const DominantOptions& opt = {});
DominantColor dominant_color(const std::vector<Lab>& samples, const DominantOptions& opt = {});
inline DominantColor dominant_color(const PixelSet& pixels, const DominantOptions& opt = {})
{
    return dominant_color(pixels.samples, opt);
}

}  // namespace gcb
