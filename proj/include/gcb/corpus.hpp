#pragma once

#include "gcb/taxonomy.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcb {

enum class Task { CNA, COA, MCC, ICA, NCU };

inline constexpr std::array<Task, 5> kAllTasks = {Task::CNA, Task::COA, Task::MCC, Task::ICA, Task::NCU};

std::string_view to_string(Task t);
Task parse_task(std::string_view s);

class CorpusError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ObjectEntry {
    std::string name;
    std::string category;
    std::string source;  // COCO or ImageNet
    std::vector<std::string> negative_labels;
};

inline constexpr std::array<std::string_view, 7> kCategories = {
    "vehicles",
    "fruits and vegetables",
    "furniture and household",
    "animals",
    "clothing and accessories",
    "sports and toys",
    "tools and miscellaneous",
};

const std::vector<ObjectEntry>& object_catalog();
/// First catalog row with this name (a few names appear in two categories).
const ObjectEntry* find_object(std::string_view name);

enum class TemplateKind { Named, Hex, Rgb, Contextual, Scene, Implicit };

struct Template {
    std::string id;
    int level = 1;
    TemplateKind kind = TemplateKind::Named;
    std::vector<std::string> objects;  // fixed objects; empty when {object} is a slot
    std::string text;
};

const std::vector<Template>& template_catalog();
const Template* find_template(std::string_view id);

struct PromptSpec {
    std::string id;
    Task task = Task::CNA;
    int level = 1;
    std::string template_id;
    std::vector<std::string> objects;
    std::vector<ColorSpec> colors;
    std::string system;  // ISCC_L2 / ISCC_L3 / CSS3X11 / numeric-hex / numeric-rgb
    std::string category;
    std::string text;

    friend bool operator==(const PromptSpec&, const PromptSpec&);
};

/// Fills the template. Color names are lowercased; a slot at the start of the
/// sentence is capitalized; "a" before a vowel-initial slot becomes "an".
std::string render_prompt(const Template& t, const std::vector<std::string>& objects, const std::vector<ColorSpec>& colors);

struct CorpusConfig {
    std::uint64_t seed = 7;
    std::map<Task, std::size_t> quotas;
    std::map<Task, std::vector<ColorSystemId>> systems;  // named tasks only
    std::vector<std::string> categories;                // empty: all
    std::map<Task, std::vector<std::string>> templates; // empty: every template of the task's kind
    std::size_t mini_budget = 9000;

    static CorpusConfig defaults();
    static CorpusConfig from_json(std::string_view json_text);
    std::string to_json() const;
};

std::vector<PromptSpec> generate_corpus(const CorpusConfig& config);

/// Stratified sample over (task, category, system); output keeps corpus order.
std::vector<PromptSpec> stratified_sample(const std::vector<PromptSpec>& corpus, std::size_t budget, std::uint64_t seed);
std::vector<PromptSpec> generate_mini(const CorpusConfig& config);

std::string prompt_to_json_line(const PromptSpec& p);
PromptSpec prompt_from_json_line(std::string_view line);

void write_corpus(const std::vector<PromptSpec>& prompts, std::ostream& out);
void write_corpus(const std::vector<PromptSpec>& prompts, const std::filesystem::path& path);
std::vector<PromptSpec> read_corpus(std::istream& in);
std::vector<PromptSpec> read_corpus(const std::filesystem::path& path);

}  // namespace gcb
