#include "gcb/corpus.hpp"

#include "gcb/embedded_data.hpp"
#include "gcb/rng.hpp"
#include "gcb/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <tuple>
#include <sstream>
#include <unordered_set>

namespace gcb {
namespace {

using json = nlohmann::ordered_json;

std::vector<ObjectEntry> parse_objects(std::string_view tsv)
{
    const auto lines = split_lines(tsv);
    if (lines.empty() || lines[0] != "name\tcategory\tsource\tnegative_labels") {
        throw CorpusError("objects table: bad header");
    }
    std::vector<ObjectEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], '\t');
        if (f.size() != 4) throw CorpusError("objects table: bad row " + std::to_string(i + 1));
        ObjectEntry o{std::string(f[0]), std::string(f[1]), std::string(f[2]), {}};
        if (std::find(kCategories.begin(), kCategories.end(), o.category) == kCategories.end()) {
            throw CorpusError("objects table: unknown category '" + o.category + "'");
        }
        for (auto label : split(f[3], ';')) {
            if (!trim(label).empty()) o.negative_labels.emplace_back(trim(label));
        }
        if (o.negative_labels.empty()) throw CorpusError("objects table: no negative labels for " + o.name);
        out.push_back(std::move(o));
    }
    return out;
}

TemplateKind parse_kind(std::string_view s)
{
    if (s == "named") return TemplateKind::Named;
    if (s == "hex") return TemplateKind::Hex;
    if (s == "rgb") return TemplateKind::Rgb;
    if (s == "contextual") return TemplateKind::Contextual;
    if (s == "scene") return TemplateKind::Scene;
    if (s == "implicit") return TemplateKind::Implicit;
    throw CorpusError("templates table: unknown kind '" + std::string(s) + "'");
}

std::vector<Template> parse_templates(std::string_view tsv)
{
    const auto lines = split_lines(tsv);
    if (lines.empty() || lines[0] != "id\tlevel\tkind\tobjects\ttext") {
        throw CorpusError("templates table: bad header");
    }
    std::vector<Template> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], '\t');
        if (f.size() != 5) throw CorpusError("templates table: bad row " + std::to_string(i + 1));
        Template t;
        t.id = std::string(f[0]);
        t.level = std::stoi(std::string(f[1]));
        t.kind = parse_kind(f[2]);
        if (!f[3].empty()) {
            for (auto o : split(f[3], ';')) {
                if (!find_object(o)) throw CorpusError("template " + t.id + " names unknown object '" + std::string(o) + "'");
                t.objects.emplace_back(o);
            }
        }
        t.text = std::string(f[4]);
        out.push_back(std::move(t));
    }
    return out;
}

TemplateKind kind_for(Task task)
{
    switch (task) {
    case Task::CNA: return TemplateKind::Named;
    case Task::COA: return TemplateKind::Contextual;
    case Task::MCC: return TemplateKind::Scene;
    case Task::ICA: return TemplateKind::Implicit;
    case Task::NCU: return TemplateKind::Hex;  // plus Rgb
    }
    return TemplateKind::Named;
}

bool task_uses(Task task, TemplateKind k)
{
    if (task == Task::NCU) return k == TemplateKind::Hex || k == TemplateKind::Rgb;
    return kind_for(task) == k;
}

std::vector<const Template*> template_pool(const CorpusConfig& cfg, Task task)
{
    std::vector<const Template*> pool;
    const auto it = cfg.templates.find(task);
    if (it != cfg.templates.end() && !it->second.empty()) {
        for (const auto& id : it->second) {
            const auto* t = find_template(id);
            if (!t || !task_uses(task, t->kind)) {
                throw CorpusError(std::string(to_string(task)) + ": template '" + id + "' is not usable for this task");
            }
            pool.push_back(t);
        }
    } else {
        for (const auto& t : template_catalog()) {
            if (task_uses(task, t.kind)) pool.push_back(&t);
        }
    }
    return pool;
}

bool category_allowed(const CorpusConfig& cfg, std::string_view category)
{
    return cfg.categories.empty() || std::find(cfg.categories.begin(), cfg.categories.end(), category) != cfg.categories.end();
}

// A color may not collide with the words around it, otherwise the rendered
// prompt is ambiguous ("an orange orange", "a white apple on a white plate").
bool conflicts(std::string_view phrase, const Template& t, const std::vector<std::string>& objects)
{
    if (contains_word(t.text, phrase)) return true;
    for (const auto& o : objects) {
        if (contains_word(o, phrase) || contains_word(phrase, o)) return true;
    }
    return false;
}

std::string color_token(const ColorSpec& c)
{
    return c.name ? to_lower(*c.name) : to_hex(c.value);
}

struct Combo {
    const Template* tmpl;
    std::vector<std::string> objects;
    std::string category;
};

std::vector<Combo> combos_for(const CorpusConfig& cfg, const std::vector<const Template*>& pool)
{
    std::vector<Combo> out;
    for (const auto* t : pool) {
        if (!t->objects.empty()) {
            const auto& cat = find_object(t->objects.front())->category;
            if (category_allowed(cfg, cat)) out.push_back({t, t->objects, cat});
            continue;
        }
        for (const auto& o : object_catalog()) {
            if (category_allowed(cfg, o.category)) out.push_back({t, {o.name}, o.category});
        }
    }
    return out;
}

std::string system_label(const ColorSpec& c, const Template& t)
{
    if (c.system) return std::string(to_string(*c.system));
    return t.kind == TemplateKind::Rgb ? "numeric-rgb" : "numeric-hex";
}

std::string make_id(Task task, std::size_t n)
{
    std::ostringstream os;
    os << to_string(task) << '-';
    os.width(6);
    os.fill('0');
    os << n;
    return os.str();
}

std::vector<ColorSpec> named_colors(const CorpusConfig& cfg, Task task)
{
    std::vector<ColorSpec> out;
    const auto it = cfg.systems.find(task);
    if (it == cfg.systems.end() || it->second.empty()) {
        throw CorpusError(std::string(to_string(task)) + ": no color systems configured");
    }
    for (auto id : it->second) {
        for (const auto& e : load_system(id).entries()) out.push_back(make_named_spec(e));
    }
    return out;
}

std::vector<ColorSpec> numeric_colors()
{
    std::vector<ColorSpec> out;
    for (const auto& e : load_system(ColorSystemId::Css3X11).entries()) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](const ColorSpec& c) { return c.value == e.rgb; });
        if (!seen) out.push_back(make_numeric_spec(ColorSpec::Kind::Hex, e.rgb));
    }
    return out;
}

// One-color tasks: every color gets its own shuffled stream of (template,
// objects) combos. Colors are visited round-robin so each receives an even
// share of the quota; the leftover partial pass visits colors in seeded order.
std::vector<PromptSpec> generate_single(const CorpusConfig& cfg, Task task, std::size_t quota)
{
    const auto pool = template_pool(cfg, task);
    const auto base_combos = combos_for(cfg, pool);
    const auto units = task == Task::NCU ? numeric_colors() : named_colors(cfg, task);
    if (base_combos.empty() || units.empty()) {
        throw CorpusError(std::string(to_string(task)) + ": no templates, objects or colors available");
    }

    struct Stream {
        std::vector<std::uint32_t> order;
        std::size_t cursor = 0;
        bool built = false;
        bool exhausted = false;
    };
    std::vector<Stream> streams(units.size());
    std::unordered_set<std::string> seen;
    std::vector<PromptSpec> out;
    out.reserve(quota);

    auto next = [&](std::size_t u) -> std::optional<PromptSpec> {
        auto& s = streams[u];
        if (!s.built) {
            s.order.resize(base_combos.size());
            for (std::uint32_t i = 0; i < s.order.size(); ++i) s.order[i] = i;
            std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(task) + 1, u));
            shuffle(s.order, rng);
            s.built = true;
        }
        while (s.cursor < s.order.size()) {
            const auto& combo = base_combos[s.order[s.cursor++]];
            ColorSpec color = units[u];
            if (color.kind == ColorSpec::Kind::Named) {
                if (conflicts(color_token(color), *combo.tmpl, combo.objects)) continue;
            } else if (combo.tmpl->kind == TemplateKind::Rgb) {
                color.kind = ColorSpec::Kind::RgbTriplet;
            }
            auto text = render_prompt(*combo.tmpl, combo.objects, {color});
            if (!seen.insert(text).second) continue;

            PromptSpec p;
            p.task = task;
            p.level = combo.tmpl->level;
            p.template_id = combo.tmpl->id;
            p.objects = combo.objects;
            p.system = system_label(color, *combo.tmpl);
            p.colors = {std::move(color)};
            p.category = combo.category;
            p.text = std::move(text);
            return p;
        }
        s.exhausted = true;
        return std::nullopt;
    };

    const std::size_t full_passes = quota / units.size();
    std::vector<std::size_t> order(units.size());
    for (std::size_t pass = 0; out.size() < quota; ++pass) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (pass >= full_passes) {
            std::mt19937_64 rng(mix_seed(cfg.seed, 0x5eed0000ULL + static_cast<std::uint64_t>(task), pass));
            shuffle(order, rng);
        }
        std::size_t produced = 0;
        for (auto u : order) {
            if (streams[u].exhausted) continue;
            if (auto p = next(u)) {
                out.push_back(std::move(*p));
                ++produced;
                if (out.size() == quota) break;
            }
        }
        if (produced == 0) {
            throw CorpusError(std::string(to_string(task)) + ": quota " + std::to_string(quota)
                              + " unsatisfiable, only " + std::to_string(out.size()) + " distinct prompts possible");
        }
    }
    return out;
}

// Multi-color scenes: template and system rotate deterministically, colors
// are drawn at random (distinct by name) and redrawn on conflict or duplicate.
std::vector<PromptSpec> generate_mcc(const CorpusConfig& cfg, std::size_t quota)
{
    constexpr int kMaxAttempts = 1000;
    std::vector<const Template*> pool;
    for (const auto* t : template_pool(cfg, Task::MCC)) {
        if (category_allowed(cfg, find_object(t->objects.front())->category)) pool.push_back(t);
    }
    const auto sys_it = cfg.systems.find(Task::MCC);
    if (pool.empty() || sys_it == cfg.systems.end() || sys_it->second.empty()) {
        throw CorpusError("MCC: no templates or color systems available");
    }
    const auto& systems = sys_it->second;

    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(Task::MCC) + 1));
    std::unordered_set<std::string> seen;
    std::vector<PromptSpec> out;
    out.reserve(quota);
    for (std::size_t i = 0; i < quota; ++i) {
        const auto& t = *pool[i % pool.size()];
        const auto& sys = load_system(systems[(i / pool.size()) % systems.size()]);
        const auto slots = t.objects.size();
        if (slots > sys.size()) throw CorpusError("MCC: too few colors for template " + t.id);

        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            std::vector<ColorSpec> colors;
            std::vector<std::size_t> picked;
            bool ok = true;
            while (picked.size() < slots) {
                const auto j = static_cast<std::size_t>(uniform_below(rng, sys.size()));
                if (std::find(picked.begin(), picked.end(), j) != picked.end()) continue;
                picked.push_back(j);
                colors.push_back(make_named_spec(sys[j]));
                if (conflicts(color_token(colors.back()), t, t.objects)) ok = false;
            }
            if (!ok) continue;
            auto text = render_prompt(t, t.objects, colors);
            if (!seen.insert(text).second) continue;

            PromptSpec p;
            p.task = Task::MCC;
            p.level = t.level;
            p.template_id = t.id;
            p.objects = t.objects;
            p.colors = std::move(colors);
            p.system = std::string(to_string(sys.id()));
            p.category = find_object(t.objects.front())->category;
            p.text = std::move(text);
            out.push_back(std::move(p));
            placed = true;
        }
        if (!placed) {
            throw CorpusError("MCC: quota " + std::to_string(quota) + " unsatisfiable at prompt " + std::to_string(i));
        }
    }
    return out;
}

json color_to_json(const ColorSpec& c)
{
    json j;
    j["kind"] = to_string(c.kind);
    if (c.name) j["name"] = *c.name;
    j["hex"] = to_hex(c.value);
    j["r"] = c.value.r;
    j["g"] = c.value.g;
    j["b"] = c.value.b;
    j["system"] = c.system ? json(std::string(to_string(*c.system))) : json(nullptr);
    return j;
}

ColorSpec color_from_json(const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    const Rgb8 v = parse_hex(j.at("hex").get<std::string>());
    const Rgb8 v2{j.at("r").get<std::uint8_t>(), j.at("g").get<std::uint8_t>(), j.at("b").get<std::uint8_t>()};
    if (v != v2) throw CorpusError("color hex and r,g,b disagree");
    if (kind == "named") {
        const auto sys = parse_system_id(j.at("system").get<std::string>());
        if (!sys) throw CorpusError("unknown color system");
        const auto* e = load_system(*sys).find(j.at("name").get<std::string>());
        if (!e) throw CorpusError("unknown color name '" + j.at("name").get<std::string>() + "'");
        if (e->rgb != v) throw CorpusError("color '" + e->name + "' does not match its table value");
        return make_named_spec(*e);
    }
    if (kind == "hex") return make_numeric_spec(ColorSpec::Kind::Hex, v);
    if (kind == "rgb_triplet") return make_numeric_spec(ColorSpec::Kind::RgbTriplet, v);
    throw CorpusError("unknown color kind '" + kind + "'");
}

}  // namespace

std::string_view to_string(Task t)
{
    switch (t) {
    case Task::CNA: return "CNA";
    case Task::COA: return "COA";
    case Task::MCC: return "MCC";
    case Task::ICA: return "ICA";
    case Task::NCU: return "NCU";
    }
    return "?";
}

Task parse_task(std::string_view s)
{
    for (auto t : kAllTasks) {
        if (s == to_string(t)) return t;
    }
    throw CorpusError("unknown task '" + std::string(s) + "'");
}

const std::vector<ObjectEntry>& object_catalog()
{
    static const auto objects = parse_objects(embedded::objects_tsv);
    return objects;
}

const ObjectEntry* find_object(std::string_view name)
{
    for (const auto& o : object_catalog()) {
        if (o.name == name) return &o;
    }
    return nullptr;
}

const std::vector<Template>& template_catalog()
{
    static const auto templates = parse_templates(embedded::templates_tsv);
    return templates;
}

const Template* find_template(std::string_view id)
{
    for (const auto& t : template_catalog()) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

bool operator==(const PromptSpec& x, const PromptSpec& y)
{
    auto same_color = [](const ColorSpec& c, const ColorSpec& d) {
        return c.kind == d.kind && c.name == d.name && c.value == d.value && c.system == d.system;
    };
    return x.id == y.id && x.task == y.task && x.level == y.level && x.template_id == y.template_id
           && x.objects == y.objects && x.system == y.system && x.category == y.category && x.text == y.text
           && std::equal(x.colors.begin(), x.colors.end(), y.colors.begin(), y.colors.end(), same_color);
}

std::string render_prompt(const Template& t, const std::vector<std::string>& objects, const std::vector<ColorSpec>& colors)
{
    auto color_at = [&](std::size_t i) -> const ColorSpec& {
        if (i >= colors.size()) throw CorpusError("template " + t.id + ": missing color " + std::to_string(i + 1));
        return colors[i];
    };
    auto slot_value = [&](std::string_view key) -> std::string {
        if (key == "object") {
            if (objects.empty()) throw CorpusError("template " + t.id + ": missing object");
            return objects.front();
        }
        if (key == "color") return color_token(color_at(0));
        if (key.size() == 6 && key.starts_with("color") && key[5] >= '1' && key[5] <= '9') {
            return color_token(color_at(static_cast<std::size_t>(key[5] - '1')));
        }
        if (key == "hex") return to_hex(color_at(0).value);
        if (key == "r") return std::to_string(color_at(0).value.r);
        if (key == "g") return std::to_string(color_at(0).value.g);
        if (key == "b") return std::to_string(color_at(0).value.b);
        throw CorpusError("template " + t.id + ": unknown placeholder {" + std::string(key) + "}");
    };

    std::string out;
    const std::string_view src = t.text;
    std::size_t i = 0;
    while (i < src.size()) {
        if (src[i] != '{') {
            out.push_back(src[i++]);
            continue;
        }
        const auto close = src.find('}', i);
        if (close == std::string_view::npos) throw CorpusError("template " + t.id + ": unclosed placeholder");
        std::string value = slot_value(src.substr(i + 1, close - i - 1));
        if (out.empty() && !value.empty()) {
            value[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(value[0])));
        }
        const bool vowel = !value.empty() && std::string_view("aeiouAEIOU").find(value[0]) != std::string_view::npos;
        const auto n = out.size();
        if (vowel && n >= 2 && out[n - 1] == ' ' && (out[n - 2] == 'a' || out[n - 2] == 'A')
            && (n == 2 || !std::isalnum(static_cast<unsigned char>(out[n - 3])))) {
            out.insert(n - 1, "n");
        }
        out += value;
        i = close + 1;
    }
    return out;
}

CorpusConfig CorpusConfig::defaults()
{
    CorpusConfig c;
    c.quotas = {{Task::CNA, 17580}, {Task::COA, 8694}, {Task::MCC, 2190}, {Task::ICA, 4500}, {Task::NCU, 11500}};
    const std::vector<ColorSystemId> named = {ColorSystemId::IsccL2, ColorSystemId::IsccL3, ColorSystemId::Css3X11};
    c.systems = {{Task::CNA, named}, {Task::COA, named}, {Task::MCC, named}, {Task::ICA, named}};
    return c;
}

CorpusConfig CorpusConfig::from_json(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw CorpusError(std::string("corpus config: ") + e.what());
    }
    CorpusConfig c = defaults();
    try {
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("mini_budget")) c.mini_budget = j["mini_budget"].get<std::size_t>();
        if (j.contains("quotas")) {
            c.quotas.clear();
            for (const auto& [k, v] : j["quotas"].items()) {
                const auto q = v.get<long long>();
                if (q <= 0) throw CorpusError("corpus config: quota for " + k + " must be positive");
                c.quotas[parse_task(k)] = static_cast<std::size_t>(q);
            }
        }
        if (j.contains("systems")) {
            c.systems.clear();
            for (const auto& [k, v] : j["systems"].items()) {
                auto& list = c.systems[parse_task(k)];
                for (const auto& s : v) {
                    const auto id = parse_system_id(s.get<std::string>());
                    if (!id) throw CorpusError("corpus config: unknown system " + s.get<std::string>());
                    list.push_back(*id);
                }
            }
        }
        if (j.contains("categories")) {
            c.categories = j["categories"].get<std::vector<std::string>>();
            for (const auto& cat : c.categories) {
                if (std::find(kCategories.begin(), kCategories.end(), cat) == kCategories.end()) {
                    throw CorpusError("corpus config: unknown category '" + cat + "'");
                }
            }
        }
        if (j.contains("templates")) {
            for (const auto& [k, v] : j["templates"].items()) {
                c.templates[parse_task(k)] = v.get<std::vector<std::string>>();
            }
        }
    } catch (const json::exception& e) {
        throw CorpusError(std::string("corpus config: ") + e.what());
    }
    return c;
}

std::string CorpusConfig::to_json() const
{
    json j;
    j["seed"] = seed;
    j["mini_budget"] = mini_budget;
    j["quotas"] = json::object();
    for (const auto& [t, q] : quotas) j["quotas"][std::string(to_string(t))] = q;
    j["systems"] = json::object();
    for (const auto& [t, list] : systems) {
        auto& arr = j["systems"][std::string(to_string(t))] = json::array();
        for (auto id : list) arr.push_back(std::string(to_string(id)));
    }
    j["categories"] = categories;
    j["templates"] = json::object();
    for (const auto& [t, ids] : templates) j["templates"][std::string(to_string(t))] = ids;
    return j.dump(2);
}

std::vector<PromptSpec> generate_corpus(const CorpusConfig& config)
{
    std::vector<PromptSpec> all;
    for (auto task : kAllTasks) {
        const auto it = config.quotas.find(task);
        if (it == config.quotas.end() || it->second == 0) continue;
        auto part = task == Task::MCC ? generate_mcc(config, it->second) : generate_single(config, task, it->second);
        for (std::size_t i = 0; i < part.size(); ++i) part[i].id = make_id(task, i + 1);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
}

std::vector<PromptSpec> stratified_sample(const std::vector<PromptSpec>& corpus, std::size_t budget, std::uint64_t seed)
{
    if (budget == 0) throw CorpusError("mini budget must be positive");
    if (budget > corpus.size()) {
        throw CorpusError("mini budget " + std::to_string(budget) + " exceeds corpus size " + std::to_string(corpus.size()));
    }

    std::map<std::tuple<Task, std::string, std::string>, std::size_t> index;
    std::vector<std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto key = std::make_tuple(corpus[i].task, corpus[i].category, corpus[i].system);
        const auto [it, inserted] = index.emplace(key, strata.size());
        if (inserted) strata.emplace_back();
        strata[it->second].push_back(i);
    }
    if (budget < strata.size()) {
        throw CorpusError("mini budget " + std::to_string(budget) + " is smaller than the " + std::to_string(strata.size())
                          + " non-empty strata");
    }

    // Proportional allocation: floor, at least one per stratum, then the
    // largest remainders. Integer arithmetic keeps it exact.
    const std::size_t n = corpus.size();
    std::vector<std::size_t> alloc(strata.size());
    std::vector<std::size_t> frac(strata.size());
    std::size_t total = 0;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto num = static_cast<unsigned __int128>(budget) * strata[s].size();
        alloc[s] = static_cast<std::size_t>(num / n);
        frac[s] = static_cast<std::size_t>(num % n);
        if (alloc[s] == 0) {
            alloc[s] = 1;
            frac[s] = 0;
        }
        total += alloc[s];
    }
    std::vector<std::size_t> by_frac(strata.size());
    for (std::size_t s = 0; s < by_frac.size(); ++s) by_frac[s] = s;
    std::stable_sort(by_frac.begin(), by_frac.end(), [&](auto x, auto y) { return frac[x] > frac[y]; });
    for (std::size_t i = 0; total < budget; i = (i + 1) % by_frac.size()) {
        const auto s = by_frac[i];
        if (alloc[s] < strata[s].size()) {
            ++alloc[s];
            ++total;
        }
    }
    for (std::size_t i = by_frac.size(); total > budget; i = (i == 0 ? by_frac.size() : i) - 1) {
        if (i == by_frac.size()) continue;
        const auto s = by_frac[i];
        if (alloc[s] > 1) {
            --alloc[s];
            --total;
        }
    }

    std::vector<char> keep(n, 0);
    for (std::size_t s = 0; s < strata.size(); ++s) {
        auto members = strata[s];
        std::mt19937_64 rng(mix_seed(seed, 0x317171ULL, s));
        for (std::size_t i = 0; i < alloc[s]; ++i) {
            const auto j = i + static_cast<std::size_t>(uniform_below(rng, members.size() - i));
            std::swap(members[i], members[j]);
            keep[members[i]] = 1;
        }
    }
    std::vector<PromptSpec> out;
    out.reserve(budget);
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) out.push_back(corpus[i]);
    }
    return out;
}

std::vector<PromptSpec> generate_mini(const CorpusConfig& config)
{
    if (config.mini_budget >= 10000) throw CorpusError("mini budget must be below 10,000");
    return stratified_sample(generate_corpus(config), config.mini_budget, config.seed);
}

std::string prompt_to_json_line(const PromptSpec& p)
{
    json j;
    j["id"] = p.id;
    j["task"] = to_string(p.task);
    j["level"] = p.level;
    j["template_id"] = p.template_id;
    j["objects"] = p.objects;
    j["colors"] = json::array();
    for (const auto& c : p.colors) j["colors"].push_back(color_to_json(c));
    j["system"] = p.system;
    j["category"] = p.category;
    j["text"] = p.text;
    return j.dump();
}

PromptSpec prompt_from_json_line(std::string_view line)
{
    try {
        const auto j = json::parse(line);
        PromptSpec p;
        p.id = j.at("id").get<std::string>();
        p.task = parse_task(j.at("task").get<std::string>());
        p.level = j.at("level").get<int>();
        p.template_id = j.at("template_id").get<std::string>();
        p.objects = j.at("objects").get<std::vector<std::string>>();
        for (const auto& c : j.at("colors")) p.colors.push_back(color_from_json(c));
        p.system = j.at("system").get<std::string>();
        p.category = j.at("category").get<std::string>();
        p.text = j.at("text").get<std::string>();
        return p;
    } catch (const json::exception& e) {
        throw CorpusError(e.what());
    } catch (const TaxonomyError& e) {
        throw CorpusError(e.what());
    }
}

void write_corpus(const std::vector<PromptSpec>& prompts, std::ostream& out)
{
    for (const auto& p : prompts) out << prompt_to_json_line(p) << '\n';
}

void write_corpus(const std::vector<PromptSpec>& prompts, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorpusError("cannot write " + path.string());
    write_corpus(prompts, out);
    if (!out) throw CorpusError("write failed for " + path.string());
}

std::vector<PromptSpec> read_corpus(std::istream& in)
{
    std::vector<PromptSpec> out;
    std::string line;
    for (std::size_t ln = 1; std::getline(in, line); ++ln) {
        if (trim(line).empty()) continue;
        try {
            out.push_back(prompt_from_json_line(line));
        } catch (const CorpusError& e) {
            throw CorpusError("corpus line " + std::to_string(ln) + ": " + e.what());
        }
    }
    return out;
}

std::vector<PromptSpec> read_corpus(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot read " + path.string());
    return read_corpus(in);
}

}  // namespace gcb
