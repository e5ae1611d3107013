#include "gcb/evaluate.hpp"

#include "gcb/imageio.hpp"
#include "gcb/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

namespace gcb {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json opt_number(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

json reason_json(const std::optional<FailureReason>& r)
{
    return r ? json(std::string(to_string(*r))) : json(nullptr);
}

std::optional<FailureReason> reason_from(const json& j)
{
    if (j.is_null()) return std::nullopt;
    const auto r = parse_failure_reason(j.get<std::string>());
    if (!r) throw DataError("unknown failure_reason '" + j.get<std::string>() + "'");
    return r;
}

template <typename F>
auto read_lines(const fs::path& path, std::string_view what, F parse)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + std::string(what) + " " + path.string());
    std::vector<decltype(parse(std::string_view{}))> out;
    std::string line;
    for (std::size_t ln = 1; std::getline(in, line); ++ln) {
        if (trim(line).empty()) continue;
        try {
            out.push_back(parse(line));
        } catch (const std::exception& e) {
            throw DataError(std::string(what) + " " + path.string() + " line " + std::to_string(ln) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

std::string manifest_record_to_json(const ImageRecord& rec)
{
    json j;
    j["prompt_id"] = rec.prompt_id;
    j["image_index"] = rec.image_index;
    j["image_path"] = rec.image_path;
    j["objects"] = json::array();
    for (const auto& o : rec.objects) {
        json jo;
        jo["name"] = o.name;
        jo["present"] = o.present;
        jo["mask_path"] = o.mask_path ? json(*o.mask_path) : json(nullptr);
        jo["neg_mask_paths"] = o.neg_mask_paths;
        j["objects"].push_back(std::move(jo));
    }
    return j.dump();
}

ImageRecord manifest_record_from_json(std::string_view line)
{
    try {
        const auto j = json::parse(line);
        ImageRecord r;
        r.prompt_id = j.at("prompt_id").get<std::string>();
        r.image_index = j.at("image_index").get<int>();
        r.image_path = j.at("image_path").get<std::string>();
        for (const auto& jo : j.at("objects")) {
            ObjectObservation o;
            o.name = jo.at("name").get<std::string>();
            o.present = jo.at("present").get<bool>();
            if (jo.contains("mask_path") && !jo["mask_path"].is_null()) o.mask_path = jo["mask_path"].get<std::string>();
            if (jo.contains("neg_mask_paths")) o.neg_mask_paths = jo["neg_mask_paths"].get<std::vector<std::string>>();
            r.objects.push_back(std::move(o));
        }
        return r;
    } catch (const json::exception& e) {
        throw DataError(e.what());
    }
}

std::vector<ImageRecord> read_manifest(const fs::path& path)
{
    return read_lines(path, "manifest", manifest_record_from_json);
}

void write_manifest(const std::vector<ImageRecord>& rows, const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& r : rows) out << manifest_record_to_json(r) << '\n';
}

std::string result_to_json_line(const ImageResult& r, std::string_view model)
{
    json j;
    j["prompt_id"] = r.prompt_id;
    j["image_index"] = r.image_index;
    j["model"] = model;
    j["correct"] = r.correct;
    j["failure_reason"] = reason_json(r.failure_reason);
    j["pairs"] = json::array();
    for (const auto& p : r.pairs) {
        json jp;
        jp["object"] = p.object;
        jp["color_index"] = p.color_index;
        const bool scored = p.dominant.has_value();
        const auto& m = p.metrics;
        jp["delta_chroma"] = scored ? json(m.delta_chroma) : json(nullptr);
        jp["ciede2000"] = scored ? json(m.ciede2000) : json(nullptr);
        jp["hue_deg"] = opt_number(m.hue_deg);
        jp["pass_delta_chroma"] = m.pass_delta_chroma;
        jp["pass_ciede2000"] = m.pass_ciede2000;
        jp["pass_hue"] = m.pass_hue;
        jp["hue_gated"] = m.hue_gated;
        jp["correct"] = m.correct;
        jp["failure_reason"] = reason_json(m.failure_reason);
        if (scored) {
            const auto& d = *p.dominant;
            jp["dominant"] = {{"L", d.lab.L},
                              {"a", d.lab.a},
                              {"b", d.lab.b},
                              {"pixel_count", d.pixel_count},
                              {"mean_chroma", d.mean_chroma},
                              {"hue_axis", {d.hue_axis[0], d.hue_axis[1]}}};
        } else {
            jp["dominant"] = nullptr;
        }
        j["pairs"].push_back(std::move(jp));
    }
    return j.dump();
}

ResultRow result_from_json_line(std::string_view line)
{
    try {
        const auto j = json::parse(line);
        ResultRow row;
        row.model = j.at("model").get<std::string>();
        auto& r = row.result;
        r.prompt_id = j.at("prompt_id").get<std::string>();
        r.image_index = j.at("image_index").get<int>();
        r.correct = j.at("correct").get<bool>();
        r.failure_reason = reason_from(j.at("failure_reason"));
        for (const auto& jp : j.at("pairs")) {
            PairResult p;
            p.object = jp.at("object").get<std::string>();
            p.color_index = jp.at("color_index").get<std::size_t>();
            auto& m = p.metrics;
            if (!jp.at("delta_chroma").is_null()) m.delta_chroma = jp["delta_chroma"].get<double>();
            if (!jp.at("ciede2000").is_null()) m.ciede2000 = jp["ciede2000"].get<double>();
            if (!jp.at("hue_deg").is_null()) m.hue_deg = jp["hue_deg"].get<double>();
            m.pass_delta_chroma = jp.at("pass_delta_chroma").get<bool>();
            m.pass_ciede2000 = jp.at("pass_ciede2000").get<bool>();
            m.pass_hue = jp.at("pass_hue").get<bool>();
            m.hue_gated = jp.at("hue_gated").get<bool>();
            m.correct = jp.at("correct").get<bool>();
            m.failure_reason = reason_from(jp.at("failure_reason"));
            if (!jp.at("dominant").is_null()) {
                const auto& jd = jp["dominant"];
                DominantColor d;
                d.lab = {jd.at("L").get<double>(), jd.at("a").get<double>(), jd.at("b").get<double>()};
                d.pixel_count = jd.at("pixel_count").get<std::size_t>();
                d.mean_chroma = jd.at("mean_chroma").get<double>();
                d.hue_axis = {jd.at("hue_axis").at(0).get<double>(), jd.at("hue_axis").at(1).get<double>()};
                p.dominant = d;
            }
            r.pairs.push_back(std::move(p));
        }
        return row;
    } catch (const json::exception& e) {
        throw DataError(e.what());
    }
}

std::vector<ResultRow> read_results(const fs::path& path)
{
    return read_lines(path, "results", result_from_json_line);
}

void check_manifest(const std::vector<ImageRecord>& rows, const std::vector<PromptSpec>& corpus,
                    std::size_t images_per_prompt)
{
    std::unordered_map<std::string_view, const PromptSpec*> by_id;
    for (const auto& p : corpus) by_id.emplace(p.id, &p);

    std::vector<std::string> bad;
    std::size_t n_bad = 0;
    std::set<std::pair<std::string, int>> keys;
    for (const auto& r : rows) {
        const auto it = by_id.find(r.prompt_id);
        bool ok = it != by_id.end() && r.image_index >= 0
                  && static_cast<std::size_t>(r.image_index) < images_per_prompt
                  && keys.emplace(r.prompt_id, r.image_index).second;
        if (ok) {
            const auto& objs = it->second->objects;
            ok = r.objects.size() == objs.size()
                 && std::equal(objs.begin(), objs.end(), r.objects.begin(),
                               [](const std::string& n, const ObjectObservation& o) { return n == o.name; });
        }
        if (!ok) {
            ++n_bad;
            if (bad.size() < 10) bad.push_back(r.prompt_id + "#" + std::to_string(r.image_index));
        }
    }
    if (n_bad > 0) {
        std::string msg = std::to_string(n_bad) + " manifest rows do not match the corpus (unknown prompt, bad image index, "
                          "duplicate, or object list differs); first: ";
        for (std::size_t i = 0; i < bad.size(); ++i) msg += (i ? ", " : "") + bad[i];
        throw DataError(msg);
    }
}

EvaluateSummary run_evaluation(const EvaluateRequest& req)
{
    const auto corpus = read_corpus(req.corpus);
    auto rows = read_manifest(req.manifest);
    check_manifest(rows, corpus);

    std::unordered_map<std::string_view, const PromptSpec*> by_id;
    for (const auto& p : corpus) by_id.emplace(p.id, &p);

    // Resume: drop a torn final line left by an interrupted run, then skip done keys.
    std::set<std::pair<std::string, int>> done;
    if (fs::exists(req.out)) {
        std::string content;
        {
            std::ifstream in(req.out, std::ios::binary);
            content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        }
        if (!content.empty() && content.back() != '\n') {
            const auto cut = content.rfind('\n');
            content.resize(cut == std::string::npos ? 0 : cut + 1);
            std::ofstream(req.out, std::ios::binary | std::ios::trunc) << content;
        }
        for (const auto& row : read_results(req.out)) done.emplace(row.result.prompt_id, row.result.image_index);
    }

    EvaluateSummary summary;
    summary.total = rows.size();
    std::vector<const ImageRecord*> pending;
    for (const auto& r : rows) {
        if (done.count({r.prompt_id, r.image_index})) {
            ++summary.skipped;
        } else {
            pending.push_back(&r);
        }
    }
    std::sort(pending.begin(), pending.end(), [](const ImageRecord* x, const ImageRecord* y) {
        return std::tie(x->prompt_id, x->image_index) < std::tie(y->prompt_id, y->image_index);
    });
    if (pending.empty()) return summary;

    std::ofstream out(req.out, std::ios::binary | std::ios::app);
    if (!out) throw DataError("cannot write " + req.out.string());

    const unsigned jobs = std::max(1u, req.jobs);
    constexpr std::size_t kChunk = 256;
    const std::string root = req.images.string();
    for (std::size_t begin = 0; begin < pending.size(); begin += kChunk) {
        const std::size_t end = std::min(pending.size(), begin + kChunk);
        std::vector<std::string> lines(end - begin);
        std::vector<char> correct(end - begin, 0);
        std::atomic<std::size_t> next{begin};
        std::exception_ptr failure;
        std::mutex failure_mu;

        auto worker = [&] {
            for (std::size_t i = next++; i < end; i = next++) {
                try {
                    const auto& rec = *pending[i];
                    const auto res = evaluate_image_files(rec, *by_id.at(rec.prompt_id), root, req.options);
                    lines[i - begin] = result_to_json_line(res, req.model_tag);
                    correct[i - begin] = res.correct ? 1 : 0;
                } catch (...) {
                    std::lock_guard lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);

        for (std::size_t i = 0; i < lines.size(); ++i) {
            out << lines[i] << '\n';
            summary.correct += static_cast<std::size_t>(correct[i]);
        }
        out.flush();
        summary.evaluated += lines.size();
    }
    return summary;
}

}  // namespace gcb
