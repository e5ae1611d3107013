#pragma once

#include "gcb/corpus.hpp"
#include "gcb/evaluate.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gcb {

struct SliceScore {
    std::string key;
    std::optional<double> score;  // percent; null when the slice has no prompts
    std::size_t n_prompts = 0;

    friend bool operator==(const SliceScore&, const SliceScore&) = default;
};

struct BiasEntry {
    std::string name;
    std::size_t count = 0;

    friend bool operator==(const BiasEntry&, const BiasEntry&) = default;
};

struct CategoryBias {
    std::string category;
    std::vector<BiasEntry> top;

    friend bool operator==(const CategoryBias&, const CategoryBias&) = default;
};

struct ModelReport {
    std::string model;
    std::vector<SliceScore> tasks;  // CNA, COA, MCC, ICA, NCU
    std::optional<double> avg;      // unweighted mean of the five tasks
    std::vector<SliceScore> categories;  // CNA prompts only
    std::vector<SliceScore> systems;     // "<task>:<system>"
    std::vector<SliceScore> basic;       // CNA prompts with an L2 color
    std::vector<SliceScore> modifiers;   // CNA prompts with an L3 color
    std::vector<CategoryBias> bias;
    std::size_t prompts_short_of_images = 0;

    friend bool operator==(const ModelReport&, const ModelReport&) = default;
};

struct AggregateReport {
    std::vector<ModelReport> models;  // sorted by tag

    friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

struct AggregateOptions {
    std::size_t images_per_prompt = 4;
    bool exclude_absent = false;
    std::size_t bias_top = 10;
};

/// Throws DataError listing result rows whose prompt_id is not in the corpus.
AggregateReport aggregate(const std::vector<ResultRow>& results, const std::vector<PromptSpec>& corpus,
                          const AggregateOptions& opt = {});

/// Mean of the five task scores, or nullopt if any is missing.
std::optional<double> table_average(const std::vector<SliceScore>& tasks);

/// Nearest L2 name per dominant color, ranked by count then table order.
std::vector<BiasEntry> bias_histogram(const std::vector<Lab>& dominants, std::size_t top = 10);

enum class Slice { Tasks, Categories, Systems, Basic, Modifiers, Bias };

std::string_view to_string(Slice s);
std::optional<Slice> parse_slice(std::string_view s);

void export_csv(const AggregateReport& report, Slice slice, std::ostream& out);
std::string report_to_json(const AggregateReport& report);
AggregateReport report_from_json(std::string_view text);

}  // namespace gcb
