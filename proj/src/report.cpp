#include "gcb/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace gcb {
namespace {

using json = nlohmann::ordered_json;

struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v)
    {
        sum += v;
        ++n;
    }
};

std::vector<SliceScore> finish(const std::vector<std::string>& keys, const std::map<std::string, Acc>& acc)
{
    std::vector<SliceScore> out;
    for (const auto& k : keys) {
        SliceScore s{k, std::nullopt, 0};
        const auto it = acc.find(k);
        if (it != acc.end() && it->second.n > 0) {
            s.score = 100.0 * it->second.sum / static_cast<double>(it->second.n);
            s.n_prompts = it->second.n;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> task_keys()
{
    std::vector<std::string> k;
    for (auto t : kAllTasks) k.emplace_back(to_string(t));
    return k;
}

std::vector<std::string> system_keys()
{
    std::vector<std::string> k;
    for (auto t : kAllTasks) {
        if (t == Task::NCU) {
            k.push_back("NCU:numeric-hex");
            k.push_back("NCU:numeric-rgb");
            continue;
        }
        for (auto id : {ColorSystemId::IsccL2, ColorSystemId::IsccL3, ColorSystemId::Css3X11}) {
            k.push_back(std::string(to_string(t)) + ":" + std::string(to_string(id)));
        }
    }
    return k;
}

const std::vector<std::string>& slice_keys(Slice s)
{
    static const auto tasks = task_keys();
    static const std::vector<std::string> categories(kCategories.begin(), kCategories.end());
    static const auto systems = system_keys();
    static const std::vector<std::string> basic = {"basic", "intermediate"};
    static const std::vector<std::string> modifiers = {"light", "dark", "ish", "none"};
    switch (s) {
    case Slice::Tasks: return tasks;
    case Slice::Categories: return categories;
    case Slice::Systems: return systems;
    case Slice::Basic: return basic;
    case Slice::Modifiers: return modifiers;
    case Slice::Bias: break;
    }
    static const std::vector<std::string> none;
    return none;
}

const std::vector<SliceScore>& slice_of(const ModelReport& m, Slice s)
{
    switch (s) {
    case Slice::Tasks: return m.tasks;
    case Slice::Categories: return m.categories;
    case Slice::Systems: return m.systems;
    case Slice::Basic: return m.basic;
    case Slice::Modifiers: return m.modifiers;
    case Slice::Bias: break;
    }
    static const std::vector<SliceScore> none;
    return none;
}

std::vector<SliceScore>& slice_of(ModelReport& m, Slice s)
{
    return const_cast<std::vector<SliceScore>&>(slice_of(static_cast<const ModelReport&>(m), s));
}

std::string fixed2(const std::optional<double>& v)
{
    if (!v) return "";
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << *v;
    return os.str();
}

std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json score_json(const std::optional<double>& v)
{
    return v ? json(*v) : json(nullptr);
}

constexpr Slice kScoreSlices[] = {Slice::Tasks, Slice::Categories, Slice::Systems, Slice::Basic, Slice::Modifiers};

}  // namespace

std::string_view to_string(Slice s)
{
    switch (s) {
    case Slice::Tasks: return "tasks";
    case Slice::Categories: return "categories";
    case Slice::Systems: return "systems";
    case Slice::Basic: return "basic";
    case Slice::Modifiers: return "modifiers";
    case Slice::Bias: return "bias";
    }
    return "?";
}

std::optional<Slice> parse_slice(std::string_view s)
{
    for (auto x : {Slice::Tasks, Slice::Categories, Slice::Systems, Slice::Basic, Slice::Modifiers, Slice::Bias}) {
        if (s == to_string(x)) return x;
    }
    return std::nullopt;
}

std::optional<double> table_average(const std::vector<SliceScore>& tasks)
{
    if (tasks.size() != kAllTasks.size()) return std::nullopt;
    double sum = 0.0;
    for (const auto& t : tasks) {
        if (!t.score) return std::nullopt;
        sum += *t.score;
    }
    return sum / static_cast<double>(tasks.size());
}

std::vector<BiasEntry> bias_histogram(const std::vector<Lab>& dominants, std::size_t top)
{
    const auto& l2 = load_system(ColorSystemId::IsccL2);
    std::vector<std::size_t> counts(l2.size(), 0);
    for (const auto& lab : dominants) ++counts[classify_nearest(lab, l2).index];
    std::vector<std::size_t> order(l2.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return counts[x] > counts[y]; });
    std::vector<BiasEntry> out;
    for (auto i : order) {
        if (out.size() == top || counts[i] == 0) break;
        out.push_back({l2[i].name, counts[i]});
    }
    return out;
}

AggregateReport aggregate(const std::vector<ResultRow>& results, const std::vector<PromptSpec>& corpus,
                          const AggregateOptions& opt)
{
    std::unordered_map<std::string_view, const PromptSpec*> by_id;
    for (const auto& p : corpus) by_id.emplace(p.id, &p);

    std::vector<std::string> orphans;
    std::size_t n_orphans = 0;
    // model -> prompt -> image results
    std::map<std::string, std::map<std::string, std::vector<ImageResult>>> grouped;
    for (const auto& row : results) {
        if (!by_id.count(row.result.prompt_id)) {
            ++n_orphans;
            if (orphans.size() < 10) orphans.push_back(row.result.prompt_id);
            continue;
        }
        grouped[row.model][row.result.prompt_id].push_back(row.result);
    }
    if (n_orphans > 0) {
        std::string msg = std::to_string(n_orphans) + " result rows have no prompt in the corpus: ";
        for (std::size_t i = 0; i < orphans.size(); ++i) msg += (i ? ", " : "") + orphans[i];
        throw DataError(msg);
    }

    AggregateReport report;
    for (const auto& [model, prompts] : grouped) {
        std::map<Slice, std::map<std::string, Acc>> acc;
        std::map<std::string, std::vector<Lab>> dominants;
        ModelReport m;
        m.model = model;
        for (const auto& [pid, images] : prompts) {
            const auto& p = *by_id.at(pid);
            for (const auto& im : images) {
                for (const auto& pair : im.pairs) {
                    if (!pair.dominant) continue;
                    const auto* obj = find_object(pair.object);
                    dominants[obj ? obj->category : p.category].push_back(pair.dominant->lab);
                }
            }
            const auto ps = score_prompt(images, opt.images_per_prompt, opt.exclude_absent);
            if (ps.n_images == 0) continue;
            if (ps.short_of_images) ++m.prompts_short_of_images;

            const std::string task(to_string(p.task));
            acc[Slice::Tasks][task].add(ps.score);
            acc[Slice::Systems][task + ":" + p.system].add(ps.score);
            if (p.task != Task::CNA) continue;
            acc[Slice::Categories][p.category].add(ps.score);
            const auto& c = p.colors.front();
            if (c.kind == ColorSpec::Kind::Named && c.system && c.system != ColorSystemId::Css3X11) {
                const auto* e = load_system(*c.system).find(*c.name);
                const auto slice = *c.system == ColorSystemId::IsccL2 ? Slice::Basic : Slice::Modifiers;
                acc[slice][std::string(to_string(group_of(*e)))].add(ps.score);
            }
        }
        for (auto s : kScoreSlices) slice_of(m, s) = finish(slice_keys(s), acc[s]);
        m.avg = table_average(m.tasks);
        for (auto cat : kCategories) {
            const auto it = dominants.find(std::string(cat));
            m.bias.push_back({std::string(cat), it == dominants.end() ? std::vector<BiasEntry>{}
                                                                    : bias_histogram(it->second, opt.bias_top)});
        }
        report.models.push_back(std::move(m));
    }
    return report;
}

void export_csv(const AggregateReport& report, Slice slice, std::ostream& out)
{
    if (slice == Slice::Tasks) {
        out << "model,CNA,COA,MCC,ICA,NCU,Avg\n";
        for (const auto& m : report.models) {
            out << csv_field(m.model);
            for (const auto& t : m.tasks) out << ',' << fixed2(t.score);
            out << ',' << fixed2(m.avg) << '\n';
        }
        return;
    }
    if (slice == Slice::Bias) {
        out << "model,category,rank,name,count\n";
        for (const auto& m : report.models) {
            for (const auto& cb : m.bias) {
                for (std::size_t i = 0; i < cb.top.size(); ++i) {
                    out << csv_field(m.model) << ',' << csv_field(cb.category) << ',' << i + 1 << ','
                        << csv_field(cb.top[i].name) << ',' << cb.top[i].count << '\n';
                }
            }
        }
        return;
    }
    out << "model,slice,key,score,n_prompts\n";
    for (const auto& m : report.models) {
        for (const auto& s : slice_of(m, slice)) {
            out << csv_field(m.model) << ',' << to_string(slice) << ',' << csv_field(s.key) << ',' << fixed2(s.score)
                << ',' << s.n_prompts << '\n';
        }
    }
}

std::string report_to_json(const AggregateReport& report)
{
    json j;
    j["models"] = json::array();
    for (const auto& m : report.models) {
        json jm;
        jm["model"] = m.model;
        for (auto s : kScoreSlices) {
            auto& js = jm[std::string(to_string(s))] = json::object();
            for (const auto& x : slice_of(m, s)) js[x.key] = {{"score", score_json(x.score)}, {"n_prompts", x.n_prompts}};
        }
        jm["avg"] = score_json(m.avg);
        auto& jb = jm["bias"] = json::object();
        for (const auto& cb : m.bias) {
            auto& arr = jb[cb.category] = json::array();
            for (const auto& e : cb.top) arr.push_back({{"name", e.name}, {"count", e.count}});
        }
        jm["prompts_short_of_images"] = m.prompts_short_of_images;
        j["models"].push_back(std::move(jm));
    }
    return j.dump(2);
}

AggregateReport report_from_json(std::string_view text)
{
    try {
        const auto j = json::parse(text);
        AggregateReport r;
        for (const auto& jm : j.at("models")) {
            ModelReport m;
            m.model = jm.at("model").get<std::string>();
            for (auto s : kScoreSlices) {
                for (const auto& [k, v] : jm.at(std::string(to_string(s))).items()) {
                    SliceScore x{k, std::nullopt, v.at("n_prompts").get<std::size_t>()};
                    if (!v.at("score").is_null()) x.score = v["score"].get<double>();
                    slice_of(m, s).push_back(std::move(x));
                }
            }
            if (!jm.at("avg").is_null()) m.avg = jm["avg"].get<double>();
            for (const auto& [cat, arr] : jm.at("bias").items()) {
                CategoryBias cb{cat, {}};
                for (const auto& e : arr) cb.top.push_back({e.at("name").get<std::string>(), e.at("count").get<std::size_t>()});
                m.bias.push_back(std::move(cb));
            }
            m.prompts_short_of_images = jm.at("prompts_short_of_images").get<std::size_t>();
            r.models.push_back(std::move(m));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("report JSON: ") + e.what());
    }
}

}  // namespace gcb
