#pragma once

#include "gcb/corpus.hpp"
#include "gcb/dominant.hpp"
#include "gcb/evaluate.hpp"
#include "gcb/scoring.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace gcb::fixtures {

// ---- dominant-color properties -------------------------------------------

enum class DominantProperty { FixedPoint, PermutationDuplication, AxisSign, Contraction, LightnessDecoupling };

const char* name_of(DominantProperty p);

/// Random Lab cloud: mostly a hue lobe with spread, sometimes near-neutral.
std::vector<Lab> random_cloud(std::mt19937_64& rng);

/// Runs `cases` randomized checks; returns the number of violations and
/// stores a description of the first one in `first`.
std::size_t dominant_violations(DominantProperty p, std::size_t cases, std::uint64_t seed, std::string* first = nullptr);

// ---- scoring monotonicity -------------------------------------------------

/// Random (dominant, spec) cases; every threshold and k is raised in turn.
std::size_t monotonicity_violations(std::size_t cases, std::uint64_t seed, std::string* first = nullptr);

// ---- synthetic images -------------------------------------------------------

/// Flat patch of `c`, whole frame masked.
ImageInputs flat_patch_inputs(Rgb8 c, int size = 32);

/// ±10 L* linear gradient across the patch plus `noise_fraction` of pixels
/// replaced with random RGB values.
RgbImage shaded_patch(const Lab& target, int size, double noise_fraction, std::mt19937_64& rng);

struct FixtureOptions {
    int images_per_prompt = 4;
    int stripe = 32;  // side of each object's square
    bool with_negatives = true;
    // Per (prompt index, image index): paint the first object the wrong color / mark it absent.
    std::function<bool(std::size_t, int)> wrong_color;
    std::function<bool(std::size_t, int)> absent;
    std::function<bool(std::size_t, int)> skip_image;  // leave the image out of the manifest
};

/// Writes corpus.jsonl, manifest.jsonl and images/masks under `dir`. Each
/// object occupies its own square painted in its target color; a negative
/// part painted black sits in one corner and must be subtracted.
void write_fixture(const std::filesystem::path& dir, const std::vector<PromptSpec>& prompts,
                   const FixtureOptions& opt = {});

/// Complementary color that fails every metric against `c`.
Rgb8 wrong_color_for(Rgb8 c);

struct SyntheticRun {
    std::vector<PromptSpec> corpus;
    std::vector<ResultRow> results;
};

/// One model with `prompts_per_task` prompts per task, four images each.
/// Task t gets exactly hits[t] correct images, so its score is
/// hits[t] / (4 * prompts_per_task) * 100.
SyntheticRun synthetic_task_run(const std::string& model, const std::array<std::size_t, 5>& hits,
                                std::size_t prompts_per_task);

}  // namespace gcb::fixtures
