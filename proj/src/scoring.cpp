#include "gcb/scoring.hpp"

#include "gcb/imageio.hpp"
#include "gcb/rng.hpp"

#include <algorithm>
#include <filesystem>
#include <limits>

namespace gcb {

std::string_view to_string(FailureReason r)
{
    switch (r) {
    case FailureReason::ObjectAbsent: return "object_absent";
    case FailureReason::MaskInvalid: return "mask_invalid";
    case FailureReason::MetricFail: return "metric_fail";
    }
    return "?";
}

std::optional<FailureReason> parse_failure_reason(std::string_view s)
{
    for (auto r : {FailureReason::ObjectAbsent, FailureReason::MaskInvalid, FailureReason::MetricFail}) {
        if (s == to_string(r)) return r;
    }
    return std::nullopt;
}

MetricReport evaluate_target(const DominantColor& dom, const ColorSpec& spec, const Thresholds& th)
{
    const auto candidates = candidate_set(spec, th.k_neighbors);
    MetricReport rep;
    rep.delta_chroma = std::numeric_limits<double>::infinity();
    rep.ciede2000 = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        rep.delta_chroma = std::min(rep.delta_chroma, delta_chroma(dom.lab, c.lab));
        rep.ciede2000 = std::min(rep.ciede2000, gcb::ciede2000(dom.lab, c.lab));
        const auto h = hue_diff_deg(dom.lab, c.lab, th.chroma_gate);
        if (!h) {
            rep.hue_gated = true;
        } else if (!rep.hue_deg || *h < *rep.hue_deg) {
            rep.hue_deg = h;
        }
    }
    rep.pass_delta_chroma = rep.delta_chroma < th.jnd_delta_chroma;
    rep.pass_ciede2000 = rep.ciede2000 < th.jnd_ciede2000;
    rep.pass_hue = rep.hue_gated || (rep.hue_deg && *rep.hue_deg < th.jnd_hue_deg);
    rep.correct = rep.pass_delta_chroma && rep.pass_ciede2000 && rep.pass_hue;
    if (!rep.correct) rep.failure_reason = FailureReason::MetricFail;
    return rep;
}

std::vector<std::pair<std::size_t, std::size_t>> scoring_pairs(const PromptSpec& prompt, bool ica_referenced_only)
{
    switch (prompt.task) {
    case Task::MCC: {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < std::min(prompt.objects.size(), prompt.colors.size()); ++i) out.emplace_back(i, i);
        return out;
    }
    case Task::ICA:
        if (ica_referenced_only) return {{1, 0}};
        return {{0, 0}, {1, 0}};
    default:
        return {{0, 0}};
    }
}

std::uint64_t image_seed(std::uint64_t base, std::string_view prompt_id, int image_index, std::size_t pair)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : prompt_id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix_seed(base ^ h, static_cast<std::uint64_t>(image_index), pair);
}

ImageResult evaluate_image(const ImageRecord& rec, const PromptSpec& prompt, const ImageInputs& inputs,
                           const EvalOptions& opt)
{
    ImageResult out;
    out.prompt_id = rec.prompt_id;
    out.image_index = rec.image_index;

    const bool all_present = std::all_of(rec.objects.begin(), rec.objects.end(), [](const auto& o) { return o.present; });
    if (!all_present) {
        out.failure_reason = FailureReason::ObjectAbsent;
        return out;
    }

    out.correct = true;
    for (const auto& [oi, ci] : scoring_pairs(prompt, opt.ica_referenced_only)) {
        PairResult pr;
        pr.object = prompt.objects.at(oi);
        pr.color_index = ci;
        const auto& bundle = oi < inputs.bundles.size() ? inputs.bundles[oi] : std::nullopt;
        std::optional<RefineResult> refined;
        if (bundle) refined = refine_mask(*bundle, opt.refine);
        if (!refined || !refined->valid) {
            pr.metrics.failure_reason = FailureReason::MaskInvalid;
        } else {
            const auto pixels = extract_pixels(inputs.image, refined->mask, opt.sample_cap,
                                               image_seed(opt.seed, rec.prompt_id, rec.image_index, oi));
            pr.dominant = dominant_color(pixels, opt.dominant);
            pr.metrics = evaluate_target(*pr.dominant, prompt.colors.at(ci), opt.thresholds);
        }
        if (!pr.metrics.correct) {
            out.correct = false;
            // Mask problems take precedence over metric failures in the summary.
            if (!out.failure_reason || pr.metrics.failure_reason == FailureReason::MaskInvalid) {
                out.failure_reason = pr.metrics.failure_reason;
            }
        }
        out.pairs.push_back(std::move(pr));
    }
    return out;
}

ImageResult evaluate_image_files(const ImageRecord& rec, const PromptSpec& prompt, const std::string& root,
                                 const EvalOptions& opt)
{
    namespace fs = std::filesystem;
    auto resolve = [&](const std::string& p) {
        const fs::path path(p);
        return path.is_absolute() || root.empty() ? path : fs::path(root) / path;
    };

    ImageInputs in;
    const bool all_present = std::all_of(rec.objects.begin(), rec.objects.end(), [](const auto& o) { return o.present; });
    if (all_present) {
        in.image = read_png_rgb(resolve(rec.image_path));
        for (const auto& obj : rec.objects) {
            std::optional<MaskBundle> bundle;
            try {
                if (obj.mask_path) {
                    MaskBundle b;
                    b.positive = read_png_mask(resolve(*obj.mask_path));
                    for (const auto& np : obj.neg_mask_paths) {
                        b.negatives.emplace_back(fs::path(np).filename().string(), read_png_mask(resolve(np)));
                    }
                    if (b.positive.width == in.image.width && b.positive.height == in.image.height) {
                        bundle = std::move(b);
                    }
                }
            } catch (const ImageIoError&) {
                bundle.reset();
            }
            in.bundles.push_back(std::move(bundle));
        }
    }
    try {
        return evaluate_image(rec, prompt, in, opt);
    } catch (const MaskError&) {
        // Negative masks of the wrong size make the bundle unusable.
        ImageResult r;
        r.prompt_id = rec.prompt_id;
        r.image_index = rec.image_index;
        r.failure_reason = FailureReason::MaskInvalid;
        return r;
    }
}

PromptScore score_prompt(const std::vector<ImageResult>& images, std::size_t images_per_prompt, bool exclude_absent)
{
    PromptScore s;
    std::size_t correct = 0;
    for (const auto& im : images) {
        if (exclude_absent && im.failure_reason == FailureReason::ObjectAbsent) continue;
        ++s.n_images;
        correct += im.correct ? 1 : 0;
    }
    s.score = s.n_images == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(s.n_images);
    s.short_of_images = s.n_images < images_per_prompt;
    return s;
}

}  // namespace gcb
