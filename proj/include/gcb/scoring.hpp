#pragma once

#include "gcb/corpus.hpp"
#include "gcb/dominant.hpp"
#include "gcb/masks.hpp"
#include "gcb/taxonomy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gcb {

struct Thresholds {
    double jnd_delta_chroma = 5.0;
    double jnd_ciede2000 = 5.0;
    double jnd_hue_deg = 5.0;
    double chroma_gate = 5.0;
    std::size_t k_neighbors = 3;
};

enum class FailureReason { ObjectAbsent, MaskInvalid, MetricFail };

std::string_view to_string(FailureReason r);
std::optional<FailureReason> parse_failure_reason(std::string_view s);

struct MetricReport {
    double delta_chroma = 0.0;  // minimum over the candidate set
    double ciede2000 = 0.0;
    std::optional<double> hue_deg;  // minimum over ungated comparisons
    bool pass_delta_chroma = false;
    bool pass_ciede2000 = false;
    bool pass_hue = false;
    bool hue_gated = false;
    bool correct = false;
    std::optional<FailureReason> failure_reason;
};

/// JND comparisons are strict: a distance equal to the threshold fails.
/// The hue metric passes automatically when any candidate comparison is
/// chroma-gated, which keeps the verdict monotone in k and in the gate.
MetricReport evaluate_target(const DominantColor& dom, const ColorSpec& spec, const Thresholds& th);

struct ObjectObservation {
    std::string name;
    bool present = false;
    std::optional<std::string> mask_path;
    std::vector<std::string> neg_mask_paths;
};

struct ImageRecord {
    std::string prompt_id;
    int image_index = 0;
    std::string image_path;
    std::vector<ObjectObservation> objects;
};

struct EvalOptions {
    Thresholds thresholds;
    RefineParams refine;
    DominantOptions dominant;
    std::size_t sample_cap = kDefaultSampleCap;
    std::uint64_t seed = 0;
    bool ica_referenced_only = false;
};

struct PairResult {
    std::string object;
    std::size_t color_index = 0;
    MetricReport metrics;
    std::optional<DominantColor> dominant;
};

struct ImageResult {
    std::string prompt_id;
    int image_index = 0;
    bool correct = false;
    std::optional<FailureReason> failure_reason;
    std::vector<PairResult> pairs;
};

/// (object index, color index) pairs scored for a prompt, by task.
std::vector<std::pair<std::size_t, std::size_t>> scoring_pairs(const PromptSpec& prompt, bool ica_referenced_only);

/// Decoded inputs for one image: the picture and, per prompt object, its mask
/// bundle (nullopt when the mask is missing).
struct ImageInputs {
    RgbImage image;
    std::vector<std::optional<MaskBundle>> bundles;
};

ImageResult evaluate_image(const ImageRecord& rec, const PromptSpec& prompt, const ImageInputs& inputs,
                           const EvalOptions& opt);

/// Loads the image and masks named in `rec` (relative paths resolve against
/// `root`) and scores it. Missing or unreadable masks yield mask_invalid.
ImageResult evaluate_image_files(const ImageRecord& rec, const PromptSpec& prompt, const std::string& root,
                                 const EvalOptions& opt);

struct PromptScore {
    double score = 0.0;
    std::size_t n_images = 0;
    bool short_of_images = false;  // fewer than images_per_prompt were scored
};

/// Mean of the image-level correct flags. Images whose objects are absent are
/// scored 0 unless `exclude_absent` is set.
PromptScore score_prompt(const std::vector<ImageResult>& images, std::size_t images_per_prompt = 4,
                         bool exclude_absent = false);

/// Stable per-image sampling seed.
std::uint64_t image_seed(std::uint64_t base, std::string_view prompt_id, int image_index, std::size_t pair);

}  // namespace gcb
