#include "support.hpp"

#include "gcb/imageio.hpp"
#include "gcb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gcb::fixtures {
namespace {

constexpr double kTol = 1e-9;

bool near(double x, double y, double tol = kTol)
{
    return std::abs(x - y) <= tol * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

std::string describe(const DominantColor& d)
{
    std::ostringstream os;
    os.precision(17);
    os << "lab=(" << d.lab.L << "," << d.lab.a << "," << d.lab.b << ") axis=(" << d.hue_axis[0] << "," << d.hue_axis[1]
       << ") mc=" << d.mean_chroma;
    return os.str();
}

bool same_dominant(const DominantColor& x, const DominantColor& y)
{
    return near(x.lab.L, y.lab.L) && near(x.lab.a, y.lab.a) && near(x.lab.b, y.lab.b) && near(x.hue_axis[0], y.hue_axis[0])
           && near(x.hue_axis[1], y.hue_axis[1]) && near(x.mean_chroma, y.mean_chroma);
}

}  // namespace

const char* name_of(DominantProperty p)
{
    switch (p) {
    case DominantProperty::FixedPoint: return "fixed point";
    case DominantProperty::PermutationDuplication: return "permutation/duplication invariance";
    case DominantProperty::AxisSign: return "axis sign canonicalization";
    case DominantProperty::Contraction: return "projection contraction";
    case DominantProperty::LightnessDecoupling: return "lightness decoupling";
    }
    return "?";
}

std::vector<Lab> random_cloud(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> n(0.0, 1.0);
    const std::size_t count = 1 + rng() % 300;
    const double hue = u(rng) * 2.0 * std::numbers::pi;
    const bool neutral = rng() % 8 == 0;
    const double c0 = neutral ? u(rng) * 0.6 : u(rng) * 90.0;
    const double along = neutral ? 0.2 : u(rng) * 15.0;
    const double across = neutral ? 0.2 : u(rng) * 10.0;
    std::vector<Lab> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double r = c0 + along * n(rng);
        const double t = across * n(rng);
        out.push_back({std::clamp(50.0 + 20.0 * n(rng), 0.0, 100.0), r * std::cos(hue) - t * std::sin(hue),
                       r * std::sin(hue) + t * std::cos(hue)});
    }
    return out;
}

std::size_t dominant_violations(DominantProperty p, std::size_t cases, std::uint64_t seed, std::string* first)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t bad = 0;
    auto fail = [&](const std::string& what) {
        if (bad++ == 0 && first) *first = what;
    };
    for (std::size_t c = 0; c < cases; ++c) {
        switch (p) {
        case DominantProperty::FixedPoint: {
            const Lab x{u(rng) * 100.0, (u(rng) - 0.5) * 200.0, (u(rng) - 0.5) * 200.0};
            const std::vector<Lab> s(1 + rng() % 500, x);
            const auto d = dominant_color(s);
            if (!(d.lab == x)) fail("constant set moved: " + describe(d));
            break;
        }
        case DominantProperty::PermutationDuplication: {
            auto s = random_cloud(rng);
            const auto base = dominant_color(s);
            shuffle(s, rng);
            const auto permuted = dominant_color(s);
            std::vector<Lab> dup;
            const std::size_t m = 2 + rng() % 3;
            for (std::size_t k = 0; k < m; ++k) dup.insert(dup.end(), s.begin(), s.end());
            const auto duplicated = dominant_color(dup);
            if (!same_dominant(base, permuted)) fail("permutation: " + describe(base) + " vs " + describe(permuted));
            else if (!same_dominant(base, duplicated)) fail("duplication: " + describe(base) + " vs " + describe(duplicated));
            break;
        }
        case DominantProperty::AxisSign: {
            const auto s = random_cloud(rng);
            const auto d = dominant_color(s);
            double ma = 0, mb = 0;
            for (const auto& x : s) {
                ma += x.a;
                mb += x.b;
            }
            const double dot = d.hue_axis[0] * ma + d.hue_axis[1] * mb;
            if (dot < 0.0 || std::abs(std::hypot(d.hue_axis[0], d.hue_axis[1]) - 1.0) > 1e-12) fail("axis: " + describe(d));
            break;
        }
        case DominantProperty::Contraction: {
            const auto s = random_cloud(rng);
            const auto d = dominant_color(s);
            double ma = 0, mb = 0, cmax = 0;
            for (const auto& x : s) {
                ma += x.a;
                mb += x.b;
                cmax = std::max(cmax, std::hypot(x.a, x.b));
            }
            const double n = static_cast<double>(s.size());
            const double cmean = std::hypot(ma / n, mb / n);
            const double cdom = std::hypot(d.lab.a, d.lab.b);
            if (cdom > cmean + 1e-12 || cmean > cmax + 1e-12) fail("contraction: " + describe(d));
            break;
        }
        case DominantProperty::LightnessDecoupling: {
            auto s = random_cloud(rng);
            const auto d = dominant_color(s);
            const double k = 0.05 + 0.95 * u(rng);
            for (auto& x : s) x.L *= k;
            const auto e = dominant_color(s);
            if (!(d.lab.a == e.lab.a && d.lab.b == e.lab.b)) fail("lightness: " + describe(d) + " vs " + describe(e));
            break;
        }
        }
    }
    return bad;
}

std::size_t monotonicity_violations(std::size_t cases, std::uint64_t seed, std::string* first)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ColorSystemId systems[] = {ColorSystemId::IsccL2, ColorSystemId::IsccL3, ColorSystemId::Css3X11};
    std::size_t bad = 0;
    for (std::size_t c = 0; c < cases; ++c) {
        ColorSpec spec;
        if (rng() % 4 == 0) {
            spec = make_numeric_spec(ColorSpec::Kind::Hex,
                                     {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                                      static_cast<std::uint8_t>(rng())});
        } else {
            const auto& sys = load_system(systems[rng() % 3]);
            spec = make_named_spec(sys[rng() % sys.size()]);
        }
        DominantColor dom;
        const double spread = 2.0 + 10.0 * u(rng);
        dom.lab = {std::clamp(spec.target_lab.L + (u(rng) - 0.5) * spread, 0.0, 100.0),
                   spec.target_lab.a + (u(rng) - 0.5) * spread, spec.target_lab.b + (u(rng) - 0.5) * spread};
        dom.pixel_count = 1;

        Thresholds th;
        th.jnd_delta_chroma = 1.0 + 8.0 * u(rng);
        th.jnd_ciede2000 = 1.0 + 8.0 * u(rng);
        th.jnd_hue_deg = 1.0 + 8.0 * u(rng);
        th.chroma_gate = 8.0 * u(rng);
        th.k_neighbors = rng() % 5;
        const bool before = evaluate_target(dom, spec, th).correct;

        for (int which = 0; which < 6; ++which) {
            Thresholds t2 = th;
            const double bump = 0.01 + 5.0 * u(rng);
            switch (which) {
            case 0: t2.jnd_delta_chroma += bump; break;
            case 1: t2.jnd_ciede2000 += bump; break;
            case 2: t2.jnd_hue_deg += bump; break;
            case 3: t2.chroma_gate += bump; break;
            case 4: t2.k_neighbors += 1 + rng() % 5; break;
            case 5:
                t2.jnd_delta_chroma += bump;
                t2.jnd_ciede2000 += bump;
                t2.jnd_hue_deg += bump;
                t2.k_neighbors += 1;
                break;
            }
            if (before && !evaluate_target(dom, spec, t2).correct) {
                if (bad++ == 0 && first) *first = "case " + std::to_string(c) + " knob " + std::to_string(which);
            }
        }
    }
    return bad;
}

ImageInputs flat_patch_inputs(Rgb8 c, int size)
{
    ImageInputs in;
    in.image = RgbImage(size, size, c);
    in.bundles.push_back(MaskBundle{Mask(size, size, true), {}});
    return in;
}

RgbImage shaded_patch(const Lab& target, int size, double noise_fraction, std::mt19937_64& rng)
{
    RgbImage img(size, size);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double t = size == 1 ? 0.0 : static_cast<double>(x) / (size - 1);
            Lab p = target;
            p.L = std::clamp(target.L - 10.0 + 20.0 * t, 0.0, 100.0);
            Rgb8 c = lab_to_srgb(p);
            if (u(rng) < noise_fraction) {
                c = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng())};
            }
            img.set(x, y, c);
        }
    }
    return img;
}

Rgb8 wrong_color_for(Rgb8 c)
{
    // Far away in Lab for every input: pick whichever of two saturated
    // primaries is further from c.
    const Rgb8 a{0, 160, 255}, b{255, 80, 0};
    const Lab lc = srgb_to_lab(c);
    return ciede2000(lc, srgb_to_lab(a)) > ciede2000(lc, srgb_to_lab(b)) ? a : b;
}

void write_fixture(const std::filesystem::path& dir, const std::vector<PromptSpec>& prompts, const FixtureOptions& opt)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir / "images");
    write_corpus(prompts, dir / "corpus.jsonl");

    std::vector<ImageRecord> rows;
    const int s = opt.stripe;
    for (std::size_t pi = 0; pi < prompts.size(); ++pi) {
        const auto& p = prompts[pi];
        const int n = static_cast<int>(p.objects.size());
        const fs::path sub = fs::path("images") / p.id;
        fs::create_directories(dir / sub);
        for (int ii = 0; ii < opt.images_per_prompt; ++ii) {
            if (opt.skip_image && opt.skip_image(pi, ii)) continue;
            RgbImage img(s * n, s, Rgb8{128, 128, 128});
            ImageRecord rec;
            rec.prompt_id = p.id;
            rec.image_index = ii;
            const std::string stem = std::to_string(ii);
            rec.image_path = (sub / (stem + ".png")).string();
            for (int oi = 0; oi < n; ++oi) {
                const auto& color = p.colors[std::min<std::size_t>(oi, p.colors.size() - 1)].value;
                const Rgb8 paint = (oi == 0 && opt.wrong_color && opt.wrong_color(pi, ii)) ? wrong_color_for(color) : color;
                Mask pos(img.width, img.height);
                for (int y = 0; y < s; ++y)
                    for (int x = oi * s; x < (oi + 1) * s; ++x) {
                        img.set(x, y, paint);
                        pos.set(x, y);
                    }
                ObjectObservation obs;
                obs.name = p.objects[oi];
                obs.present = !(opt.absent && opt.absent(pi, ii) && oi == 0);
                if (!obs.present) {
                    // Nothing is segmented for an absent object.
                    rec.objects.push_back(std::move(obs));
                    continue;
                }
                const auto mask_rel = sub / mask_filename(stem, obs.name);
                write_png_mask(dir / mask_rel, pos);
                obs.mask_path = mask_rel.string();
                if (opt.with_negatives) {
                    // A black part in the corner, included in the positive mask.
                    Mask neg(img.width, img.height);
                    for (int y = 0; y < s / 4; ++y)
                        for (int x = oi * s; x < oi * s + s / 4; ++x) {
                            img.set(x, y, Rgb8{0, 0, 0});
                            neg.set(x, y);
                        }
                    const auto* obj = find_object(obs.name);
                    const std::string label = obj ? obj->negative_labels.front() : "part";
                    const auto neg_rel = sub / negative_mask_filename(stem, obs.name, label);
                    write_png_mask(dir / neg_rel, neg);
                    obs.neg_mask_paths.push_back(neg_rel.string());
                }
                rec.objects.push_back(std::move(obs));
            }
            write_png_rgb(dir / rec.image_path, img);
            rows.push_back(std::move(rec));
        }
    }
    write_manifest(rows, dir / "manifest.jsonl");
}


SyntheticRun synthetic_task_run(const std::string& model, const std::array<std::size_t, 5>& hits,
                                std::size_t prompts_per_task)
{
    SyntheticRun run;
    const auto& red = load_system(ColorSystemId::IsccL2)[0];
    for (std::size_t t = 0; t < kAllTasks.size(); ++t) {
        const Task task = kAllTasks[t];
        for (std::size_t i = 0; i < prompts_per_task; ++i) {
            PromptSpec p;
            std::ostringstream id;
            id << to_string(task) << '-' << i;
            p.id = id.str();
            p.task = task;
            p.category = "vehicles";
            p.objects = {"car"};
            p.colors = {make_named_spec(red)};
            p.system = task == Task::NCU ? "numeric-hex" : "ISCC_L2";
            run.corpus.push_back(p);
            for (int j = 0; j < 4; ++j) {
                ImageResult r;
                r.prompt_id = p.id;
                r.image_index = j;
                r.correct = i * 4 + static_cast<std::size_t>(j) < hits[t];
                if (!r.correct) r.failure_reason = FailureReason::MetricFail;
                run.results.push_back({model, std::move(r)});
            }
        }
    }
    return run;
}

}  // namespace gcb::fixtures
