#include "gcb/dominant.hpp"

#include <algorithm>
#include <cmath>

namespace gcb {
namespace {

struct Moments {
    double mean_l = 0, mean_a = 0, mean_b = 0;
    double saa = 0, sab = 0, sbb = 0;  // second moments, about the origin or the mean
    double mean_chroma = 0;
};

Moments moments(const std::vector<Lab>& s, Centering centering)
{
    if (s.empty()) throw DominantError("dominant color of an empty pixel set");
    Moments m;
    for (const auto& x : s) {
        m.mean_l += x.L;
        m.mean_a += x.a;
        m.mean_b += x.b;
        m.mean_chroma += std::hypot(x.a, x.b);
    }
    const double n = static_cast<double>(s.size());
    m.mean_l /= n;
    m.mean_a /= n;
    m.mean_b /= n;
    m.mean_chroma /= n;

    const double ca = centering == Centering::Centered ? m.mean_a : 0.0;
    const double cb = centering == Centering::Centered ? m.mean_b : 0.0;
    for (const auto& x : s) {
        const double a = x.a - ca;
        const double b = x.b - cb;
        m.saa += a * a;
        m.sab += a * b;
        m.sbb += b * b;
    }
    m.saa /= n;
    m.sab /= n;
    m.sbb /= n;
    return m;
}

std::array<double, 2> canonical_axis(const Moments& m)
{
    bool degenerate = false;
    auto v = principal_axis_2x2(m.saa, m.sab, m.sbb, degenerate);
    const double mean_norm = std::hypot(m.mean_a, m.mean_b);
    if (degenerate) {
        if (mean_norm == 0.0) return {1.0, 0.0};
        return {m.mean_a / mean_norm, m.mean_b / mean_norm};
    }
    const double dot = v[0] * m.mean_a + v[1] * m.mean_b;
    // With the mean orthogonal to the axis the sign is still fixed, by the first nonzero component.
    if (dot < 0.0 || (dot == 0.0 && (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0)))) {
        v = {-v[0], -v[1]};
    }
    return v;
}

}  // namespace

std::array<double, 2> principal_axis_2x2(double p, double q, double r, bool& degenerate)
{
    degenerate = false;
    if (q == 0.0) {
        if (p > r) return {1.0, 0.0};
        if (r > p) return {0.0, 1.0};
        degenerate = true;
        return {1.0, 0.0};
    }
    const double half_diff = 0.5 * (p - r);
    const double lambda1 = 0.5 * (p + r) + std::hypot(half_diff, q);
    // Two algebraically equivalent eigenvectors; the longer one is better conditioned.
    const std::array<double, 2> u{lambda1 - r, q};
    const std::array<double, 2> w{q, lambda1 - p};
    const double nu = std::hypot(u[0], u[1]);
    const double nw = std::hypot(w[0], w[1]);
    if (nu >= nw) return {u[0] / nu, u[1] / nu};
    return {w[0] / nw, w[1] / nw};
}

std::array<double, 2> dominant_hue_axis(const std::vector<Lab>& samples, const DominantOptions& opt)
{
    return canonical_axis(moments(samples, opt.centering));
}

DominantColor dominant_color(const std::vector<Lab>& samples, const DominantOptions& opt)
{
    const auto m = moments(samples, opt.centering);
    DominantColor out;
    out.pixel_count = samples.size();
    out.mean_chroma = m.mean_chroma;
    out.hue_axis = canonical_axis(m);

    const bool constant = std::all_of(samples.begin(), samples.end(), [&](const Lab& x) { return x == samples.front(); });
    if (constant) {
        out.lab = samples.front();
        return out;
    }

    out.lab.L = m.mean_l;
    if (m.mean_chroma < opt.neutral_chroma || opt.centering == Centering::Centered) {
        out.lab.a = m.mean_a;
        out.lab.b = m.mean_b;
        return out;
    }
    // Mean of the projections onto span(v1) is the projection of the mean.
    const double t = m.mean_a * out.hue_axis[0] + m.mean_b * out.hue_axis[1];
    out.lab.a = t * out.hue_axis[0];
    out.lab.b = t * out.hue_axis[1];
    return out;
}

}  // namespace gcb
