#pragma once

#include <cstdint>
#include <optional>

namespace gcb {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

/// CIELAB coordinates (D65 white).
struct Lab {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const Lab&, const Lab&) = default;
};

/// Polar form of Lab. Hue is in degrees, [0, 360); zero when chroma is zero.
struct LCh {
    double L = 0.0;
    double C = 0.0;
    double h = 0.0;
};

Lab srgb_to_lab(Rgb8 c);

/// Inverse of srgb_to_lab with per-channel clipping to the sRGB gamut and
/// rounding to the nearest 8-bit value. Used to synthesize test imagery.
Rgb8 lab_to_srgb(const Lab& lab);

LCh lab_to_lch(const Lab& lab);
Lab lch_to_lab(const LCh& lch);

double chroma(const Lab& lab);

/// Euclidean distance in the a*b* plane; lightness is ignored.
double delta_chroma(const Lab& x, const Lab& y);

/// CIEDE2000 colour difference with kL = kC = kH = 1.
double ciede2000(const Lab& x, const Lab& y);

/// Angular hue difference in degrees, in [0, 180].
/// Returns std::nullopt ("gated") when either chroma is below chroma_gate,
/// since hue is unreliable near the neutral axis.
std::optional<double> hue_diff_deg(const Lab& x, const Lab& y, double chroma_gate);

}  // namespace gcb
