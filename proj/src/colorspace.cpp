#include "gcb/colorspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace gcb {
namespace {

// sRGB primaries, D65 (Lindbloom).
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};

// Reference white is the image of RGB (1,1,1) so that white maps to L*=100, a*=b*=0.
constexpr double kWhiteX = kRgbToXyz[0][0] + kRgbToXyz[0][1] + kRgbToXyz[0][2];
constexpr double kWhiteY = kRgbToXyz[1][0] + kRgbToXyz[1][1] + kRgbToXyz[1][2];
constexpr double kWhiteZ = kRgbToXyz[2][0] + kRgbToXyz[2][1] + kRgbToXyz[2][2];

constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kRadPerDeg = std::numbers::pi / 180.0;

double decode_channel(int c8)
{
    const double v = c8 / 255.0;
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

const std::array<double, 256>& decode_table()
{
    static const std::array<double, 256> table = [] {
        std::array<double, 256> t{};
        for (int i = 0; i < 256; ++i) {
            t[i] = decode_channel(i);
        }
        return t;
    }();
    return table;
}

double encode_channel(double linear)
{
    const double v = linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
    return std::clamp(v, 0.0, 1.0);
}

double lab_f(double t)
{
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f)
{
    const double f3 = f * f * f;
    return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

double hue_angle_deg(double a, double b)
{
    if (a == 0.0 && b == 0.0) {
        return 0.0;
    }
    double h = std::atan2(b, a) * kDegPerRad;
    if (h < 0.0) {
        h += 360.0;
    }
    return h >= 360.0 ? 0.0 : h;
}

double pow7(double x)
{
    const double x2 = x * x;
    const double x3 = x2 * x;
    return x3 * x3 * x;
}

}  // namespace

Lab srgb_to_lab(Rgb8 c)
{
    const auto& lut = decode_table();
    const double r = lut[c.r];
    const double g = lut[c.g];
    const double b = lut[c.b];

    const double x = kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b;
    const double y = kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b;
    const double z = kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b;

    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

Rgb8 lab_to_srgb(const Lab& lab)
{
    const double fy = (lab.L + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const double y = lab.L > kKappa * kEpsilon ? fy * fy * fy : lab.L / kKappa;
    const double x = lab_f_inv(fx) * kWhiteX;
    const double z = lab_f_inv(fz) * kWhiteZ;
    const double yw = y * kWhiteY;

    auto channel = [&](int row) {
        const double linear = kXyzToRgb[row][0] * x + kXyzToRgb[row][1] * yw + kXyzToRgb[row][2] * z;
        return static_cast<std::uint8_t>(std::lround(encode_channel(linear) * 255.0));
    };
    return {channel(0), channel(1), channel(2)};
}

LCh lab_to_lch(const Lab& lab)
{
    const double c = std::hypot(lab.a, lab.b);
    return {lab.L, c, c == 0.0 ? 0.0 : hue_angle_deg(lab.a, lab.b)};
}

Lab lch_to_lab(const LCh& lch)
{
    const double h = lch.h * kRadPerDeg;
    return {lch.L, lch.C * std::cos(h), lch.C * std::sin(h)};
}

double chroma(const Lab& lab)
{
    return std::hypot(lab.a, lab.b);
}

double delta_chroma(const Lab& x, const Lab& y)
{
    return std::hypot(x.a - y.a, x.b - y.b);
}

double ciede2000(const Lab& x, const Lab& y)
{
    constexpr double k25Pow7 = 6103515625.0;

    const double c1 = std::hypot(x.a, x.b);
    const double c2 = std::hypot(y.a, y.b);
    const double c_mean7 = pow7(0.5 * (c1 + c2));
    const double g = 0.5 * (1.0 - std::sqrt(c_mean7 / (c_mean7 + k25Pow7)));

    const double a1p = (1.0 + g) * x.a;
    const double a2p = (1.0 + g) * y.a;
    const double c1p = std::hypot(a1p, x.b);
    const double c2p = std::hypot(a2p, y.b);
    const double h1p = hue_angle_deg(a1p, x.b);
    const double h2p = hue_angle_deg(a2p, y.b);

    const double dl = y.L - x.L;
    const double dc = c2p - c1p;
    const double c_product = c1p * c2p;

    double dh = 0.0;
    if (c_product != 0.0) {
        dh = h2p - h1p;
        if (dh > 180.0) {
            dh -= 360.0;
        } else if (dh < -180.0) {
            dh += 360.0;
        }
    }
    const double d_big_h = 2.0 * std::sqrt(c_product) * std::sin(0.5 * dh * kRadPerDeg);

    const double l_mean = 0.5 * (x.L + y.L);
    const double cp_mean = 0.5 * (c1p + c2p);

    double h_mean = h1p + h2p;
    if (c_product != 0.0) {
        if (std::abs(h1p - h2p) <= 180.0) {
            h_mean *= 0.5;
        } else if (h_mean < 360.0) {
            h_mean = 0.5 * (h_mean + 360.0);
        } else {
            h_mean = 0.5 * (h_mean - 360.0);
        }
    }

    const double t = 1.0 - 0.17 * std::cos((h_mean - 30.0) * kRadPerDeg)
                     + 0.24 * std::cos(2.0 * h_mean * kRadPerDeg)
                     + 0.32 * std::cos((3.0 * h_mean + 6.0) * kRadPerDeg)
                     - 0.20 * std::cos((4.0 * h_mean - 63.0) * kRadPerDeg);
    const double h_off = (h_mean - 275.0) / 25.0;
    const double d_theta = 30.0 * std::exp(-h_off * h_off);
    const double cp_mean7 = pow7(cp_mean);
    const double r_c = 2.0 * std::sqrt(cp_mean7 / (cp_mean7 + k25Pow7));
    const double l50 = (l_mean - 50.0) * (l_mean - 50.0);
    const double s_l = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
    const double s_c = 1.0 + 0.045 * cp_mean;
    const double s_h = 1.0 + 0.015 * cp_mean * t;
    const double r_t = -std::sin(2.0 * d_theta * kRadPerDeg) * r_c;

    const double tl = dl / s_l;
    const double tc = dc / s_c;
    const double th = d_big_h / s_h;
    return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + r_t * tc * th));
}

std::optional<double> hue_diff_deg(const Lab& x, const Lab& y, double chroma_gate)
{
    const LCh px = lab_to_lch(x);
    const LCh py = lab_to_lch(y);
    if (px.C < chroma_gate || py.C < chroma_gate) {
        return std::nullopt;
    }
    const double d = std::abs(px.h - py.h);
    return std::min(d, 360.0 - d);
}

}  // namespace gcb
