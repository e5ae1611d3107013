#pragma once

#include "gcb/corpus.hpp"
#include "gcb/scoring.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcb {

/// Inconsistent inputs (manifest vs corpus, orphan results, bad rows).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string manifest_record_to_json(const ImageRecord& rec);
ImageRecord manifest_record_from_json(std::string_view line);
std::vector<ImageRecord> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ImageRecord>& rows, const std::filesystem::path& path);

struct ResultRow {
    std::string model;
    ImageResult result;
};

std::string result_to_json_line(const ImageResult& r, std::string_view model);
ResultRow result_from_json_line(std::string_view line);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

/// Throws DataError naming up to 10 manifest rows that do not match the corpus.
void check_manifest(const std::vector<ImageRecord>& rows, const std::vector<PromptSpec>& corpus,
                    std::size_t images_per_prompt = 4);

struct EvaluateRequest {
    std::filesystem::path corpus;
    std::filesystem::path manifest;
    std::filesystem::path images;  // root for relative image and mask paths
    std::filesystem::path out;
    EvalOptions options;
    unsigned jobs = 1;
    std::string model_tag = "model";
};

struct EvaluateSummary {
    std::size_t total = 0;
    std::size_t skipped = 0;  // already present in the output
    std::size_t evaluated = 0;
    std::size_t correct = 0;
};

/// Scores every manifest row not already in `out` and appends the results
/// sorted by (prompt_id, image_index). Output order does not depend on `jobs`.
EvaluateSummary run_evaluation(const EvaluateRequest& req);

}  // namespace gcb
