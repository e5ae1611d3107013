#include "gcb/cli.hpp"

#include "gcb/corpus.hpp"
#include "gcb/evaluate.hpp"
#include "gcb/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace gcb {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content)
{
    std::ofstream out(p, std::ios::binary);
    if (!out || !(out << content)) throw DataError("cannot write " + p.string());
}

struct GenArgs {
    bool full = false;
    std::size_t mini = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string config;
};

struct EvalArgs {
    std::string corpus, manifest, images, out;
    std::string model_tag = "model";
    EvalOptions opt;
    unsigned jobs = 1;
};

struct ReportArgs {
    std::string corpus, results, out;
    std::string slice = "tasks";
    bool exclude_absent = false;
};

int cmd_gen_prompts(const GenArgs& a, std::ostream& out)
{
    CorpusConfig cfg = a.config.empty() ? CorpusConfig::defaults() : CorpusConfig::from_json(read_file(a.config));
    if (a.seed) cfg.seed = *a.seed;
    std::vector<PromptSpec> prompts;
    if (a.full) {
        prompts = generate_corpus(cfg);
    } else {
        cfg.mini_budget = a.mini;
        prompts = generate_mini(cfg);
    }
    write_corpus(prompts, fs::path(a.out));

    std::map<Task, std::size_t> per_task;
    for (const auto& p : prompts) ++per_task[p.task];
    out << "wrote " << prompts.size() << " prompts to " << a.out << " (seed " << cfg.seed << ")\n";
    for (auto t : kAllTasks) out << "  " << to_string(t) << ' ' << per_task[t] << '\n';
    return kExitOk;
}

int cmd_evaluate(const EvalArgs& a, std::ostream& out)
{
    EvaluateRequest req;
    req.corpus = a.corpus;
    req.manifest = a.manifest;
    req.images = a.images.empty() ? fs::path(a.manifest).parent_path() : fs::path(a.images);
    req.out = a.out;
    req.options = a.opt;
    req.jobs = a.jobs;
    req.model_tag = a.model_tag;
    const auto s = run_evaluation(req);
    out << "evaluated " << s.evaluated << " images (" << s.correct << " correct), skipped " << s.skipped
        << " already done, " << s.total << " in manifest\n";
    return kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err)
{
    const auto slice = parse_slice(a.slice);
    const auto corpus = read_corpus(fs::path(a.corpus));
    const auto results = read_results(a.results);
    AggregateOptions opt;
    opt.exclude_absent = a.exclude_absent;
    const auto report = aggregate(results, corpus, opt);

    fs::create_directories(a.out);
    write_file(fs::path(a.out) / "report.json", report_to_json(report) + "\n");
    std::ostringstream csv;
    export_csv(report, *slice, csv);
    write_file(fs::path(a.out) / "report.csv", csv.str());
    if (*slice == Slice::Bias) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (const auto& m : report.models) {
            auto& jm = j[m.model] = nlohmann::ordered_json::object();
            for (const auto& cb : m.bias) {
                auto& arr = jm[cb.category] = nlohmann::ordered_json::array();
                for (const auto& e : cb.top) arr.push_back({{"name", e.name}, {"count", e.count}});
            }
        }
        write_file(fs::path(a.out) / "bias.json", j.dump(2) + "\n");
    }
    for (const auto& m : report.models) {
        if (m.prompts_short_of_images > 0) {
            err << "warning: " << m.model << ": " << m.prompts_short_of_images
                << " prompts scored with fewer than " << opt.images_per_prompt << " images\n";
        }
    }
    out << csv.str();
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Prompt corpus generation and color-fidelity scoring for text-to-image models", "gencolorbench"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen-prompts", "Generate the prompt corpus (full or mini)");
    auto* full = g->add_flag("--full", gen.full, "Generate the full corpus");
    auto* mini = g->add_option("--mini", gen.mini, "Stratified subset of N prompts (N < 10000)")->check(CLI::Range(1, 9999));
    full->excludes(mini);
    g->add_option("--seed", gen.seed, "Random seed (overrides the config)");
    g->add_option("--out", gen.out, "Output corpus JSONL")->required();
    g->add_option("--config", gen.config, "Corpus config JSON")->check(CLI::ExistingFile);

    EvalArgs ev;
    auto* e = app.add_subcommand("evaluate", "Score generated images listed in a manifest");
    e->add_option("--corpus", ev.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    e->add_option("--manifest", ev.manifest, "Evaluation manifest JSONL")->required()->check(CLI::ExistingFile);
    e->add_option("--images", ev.images, "Root for relative image and mask paths (default: manifest dir)")
        ->check(CLI::ExistingDirectory);
    e->add_option("--out", ev.out, "Per-image results JSONL (appended; existing rows are skipped)")->required();
    e->add_option("--k", ev.opt.thresholds.k_neighbors, "Candidate neighbors per target")->capture_default_str();
    e->add_option("--jnd-chroma", ev.opt.thresholds.jnd_delta_chroma, "JND for delta chroma")
        ->check(CLI::PositiveNumber)->capture_default_str();
    e->add_option("--jnd-de2000", ev.opt.thresholds.jnd_ciede2000, "JND for CIEDE2000")
        ->check(CLI::PositiveNumber)->capture_default_str();
    e->add_option("--jnd-hue", ev.opt.thresholds.jnd_hue_deg, "JND for hue angle (degrees)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    e->add_option("--chroma-gate", ev.opt.thresholds.chroma_gate, "Chroma below which hue is not compared")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    e->add_option("--seed", ev.opt.seed, "Pixel sampling seed")->capture_default_str();
    e->add_option("--sample-cap", ev.opt.sample_cap, "Max pixels per mask")->check(CLI::PositiveNumber)->capture_default_str();
    e->add_option("--jobs", ev.jobs, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
    e->add_option("--model-tag", ev.model_tag, "Model tag stored with each result")->capture_default_str();
    e->add_flag("--ica-referenced-only", ev.opt.ica_referenced_only, "Score only the referenced object in ICA prompts");

    ReportArgs rp;
    auto* r = app.add_subcommand("report", "Aggregate results into report files");
    r->add_option("--corpus", rp.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    r->add_option("--results", rp.results, "Results JSONL")->required()->check(CLI::ExistingFile);
    r->add_option("--out", rp.out, "Output directory")->required();
    r->add_option("--slice", rp.slice, "CSV slice")
        ->check(CLI::IsMember({"tasks", "categories", "systems", "basic", "modifiers", "bias"}))
        ->capture_default_str();
    r->add_flag("--exclude-absent", rp.exclude_absent, "Drop images with absent objects instead of scoring them 0");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (g->parsed() && !gen.full && gen.mini == 0) {
            throw CLI::ValidationError("gen-prompts", "one of --full or --mini N is required");
        }
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (g->parsed()) return cmd_gen_prompts(gen, out);
        if (e->parsed()) return cmd_evaluate(ev, out);
        return cmd_report(rp, out, err);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitData;
    }
}

}  // namespace gcb
