#include "gcb/taxonomy.hpp"

#include "gcb/embedded_data.hpp"
#include "gcb/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <mutex>

namespace gcb {
namespace {

using Kind = TaxonomyError::Kind;

int parse_channel(std::string_view text)
{
    text = trim(text);
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw TaxonomyError(Kind::MalformedSpec, "not an integer channel: '" + std::string(text) + "'");
    }
    if (v < 0 || v > 255) {
        throw TaxonomyError(Kind::ChannelOutOfRange, "channel out of range [0,255]: " + std::to_string(v));
    }
    return v;
}

int hex_digit(char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::vector<std::string> tokens_of(std::string_view name)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : name) {
        if (c == ' ' || c == '-') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

}  // namespace

std::string_view to_string(ColorSystemId id)
{
    switch (id) {
    case ColorSystemId::IsccL2: return "ISCC_L2";
    case ColorSystemId::IsccL3: return "ISCC_L3";
    case ColorSystemId::Css3X11: return "CSS3X11";
    }
    return "?";
}

std::optional<ColorSystemId> parse_system_id(std::string_view text)
{
    for (auto id : {ColorSystemId::IsccL2, ColorSystemId::IsccL3, ColorSystemId::Css3X11}) {
        if (text == to_string(id)) return id;
    }
    return std::nullopt;
}

std::string_view to_string(ColorGroup g)
{
    switch (g) {
    case ColorGroup::Basic: return "basic";
    case ColorGroup::Intermediate: return "intermediate";
    case ColorGroup::Light: return "light";
    case ColorGroup::Dark: return "dark";
    case ColorGroup::Ish: return "ish";
    case ColorGroup::None: return "none";
    }
    return "?";
}

std::string_view to_string(ColorSpec::Kind k)
{
    switch (k) {
    case ColorSpec::Kind::Named: return "named";
    case ColorSpec::Kind::Hex: return "hex";
    case ColorSpec::Kind::RgbTriplet: return "rgb_triplet";
    }
    return "?";
}

std::string normalize_name(std::string_view name)
{
    std::string out;
    bool pending_space = false;
    for (char c : trim(name)) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = true;
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string to_hex(Rgb8 c)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s = "#";
    for (int v : {c.r, c.g, c.b}) {
        s.push_back(digits[v >> 4]);
        s.push_back(digits[v & 15]);
    }
    return s;
}

Rgb8 parse_hex(std::string_view text)
{
    text = trim(text);
    if (text.size() != 7 || text[0] != '#') {
        throw TaxonomyError(Kind::MalformedHex, "expected #rrggbb, got '" + std::string(text) + "'");
    }
    int ch[3];
    for (int i = 0; i < 3; ++i) {
        const int hi = hex_digit(text[1 + 2 * i]);
        const int lo = hex_digit(text[2 + 2 * i]);
        if (hi < 0 || lo < 0) {
            throw TaxonomyError(Kind::MalformedHex, "bad hex digit in '" + std::string(text) + "'");
        }
        ch[i] = hi * 16 + lo;
    }
    return {static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]), static_cast<std::uint8_t>(ch[2])};
}

ColorSystem::ColorSystem(ColorSystemId id, std::vector<ColorEntry> entries)
    : id_(id), entries_(std::move(entries))
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i].index = i;
        entries_[i].system = id;
        const auto [it, inserted] = by_name_.emplace(normalize_name(entries_[i].name), i);
        if (!inserted) {
            throw TaxonomyError(Kind::BadTable, "duplicate name '" + entries_[i].name + "' in " + std::string(to_string(id)));
        }
    }
}

const ColorEntry* ColorSystem::find(std::string_view name) const
{
    const auto it = by_name_.find(normalize_name(name));
    return it == by_name_.end() ? nullptr : &entries_[it->second];
}

std::size_t expected_size(ColorSystemId id)
{
    switch (id) {
    case ColorSystemId::IsccL2: return 29;
    // The transcribed appendix table has 260 rows; see README.
    case ColorSystemId::IsccL3: return 260;
    case ColorSystemId::Css3X11: return 147;
    }
    return 0;
}

ColorSystem parse_system_csv(ColorSystemId id, std::string_view csv)
{
    const auto lines = split_lines(csv);
    if (lines.empty() || trim(lines[0]) != "system,name,hex,r,g,b") {
        throw TaxonomyError(Kind::BadTable, "missing or wrong header in color table");
    }
    std::vector<ColorEntry> entries;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const auto where = " (line " + std::to_string(ln + 1) + ")";
        const auto f = split(lines[ln], ',');
        if (f.size() != 6) {
            throw TaxonomyError(Kind::BadTable, "expected 6 fields" + where);
        }
        if (trim(f[0]) != to_string(id)) {
            throw TaxonomyError(Kind::BadTable, "system column mismatch" + where);
        }
        ColorEntry e;
        e.name = std::string(trim(f[1]));
        e.rgb = {static_cast<std::uint8_t>(parse_channel(f[3])), static_cast<std::uint8_t>(parse_channel(f[4])),
                 static_cast<std::uint8_t>(parse_channel(f[5]))};
        e.hex = std::string(trim(f[2]));
        if (parse_hex(e.hex) != e.rgb || e.hex != to_hex(e.rgb)) {
            throw TaxonomyError(Kind::BadTable, "hex and rgb disagree for '" + e.name + "'" + where);
        }
        e.lab = srgb_to_lab(e.rgb);
        entries.push_back(std::move(e));
    }
    if (entries.size() != expected_size(id)) {
        throw TaxonomyError(Kind::BadTable, std::string(to_string(id)) + " has " + std::to_string(entries.size())
                                                + " entries, expected " + std::to_string(expected_size(id)));
    }
    return ColorSystem(id, std::move(entries));
}

const ColorSystem& load_system(ColorSystemId id)
{
    // Function-local statics give thread-safe one-time construction.
    switch (id) {
    case ColorSystemId::IsccL2: {
        static const ColorSystem s = parse_system_csv(id, embedded::iscc_l2_csv);
        return s;
    }
    case ColorSystemId::IsccL3: {
        static const ColorSystem s = parse_system_csv(id, embedded::iscc_l3_csv);
        return s;
    }
    case ColorSystemId::Css3X11: {
        static const ColorSystem s = parse_system_csv(id, embedded::css3x11_csv);
        return s;
    }
    }
    throw TaxonomyError(Kind::UnknownSystem, "unknown color system");
}

const ColorSystem& load_system(std::string_view id)
{
    const auto parsed = parse_system_id(id);
    if (!parsed) {
        throw TaxonomyError(Kind::UnknownSystem, "unknown color system '" + std::string(id) + "'");
    }
    return load_system(*parsed);
}

ColorSpec make_named_spec(const ColorEntry& e)
{
    ColorSpec s;
    s.kind = ColorSpec::Kind::Named;
    s.name = e.name;
    s.value = e.rgb;
    s.system = e.system;
    s.target_lab = e.lab;
    return s;
}

ColorSpec make_numeric_spec(ColorSpec::Kind kind, Rgb8 value)
{
    ColorSpec s;
    s.kind = kind;
    s.value = value;
    s.target_lab = srgb_to_lab(value);
    return s;
}

ColorSpec parse_color_spec(std::string_view text, std::optional<ColorSystemId> hint)
{
    const auto t = trim(text);
    if (!t.empty() && t.front() == '#') {
        return make_numeric_spec(ColorSpec::Kind::Hex, parse_hex(t));
    }
    const std::string lower = to_lower(t);
    std::string_view body;
    if (lower.starts_with("rgb(") && lower.ends_with(")")) {
        body = t.substr(4, t.size() - 5);
    } else if (t.starts_with("(") && t.ends_with(")")) {
        body = t.substr(1, t.size() - 2);
    }
    if (!body.empty() || t == "()" || lower == "rgb()") {
        const auto parts = split(body, ',');
        if (parts.size() != 3) {
            throw TaxonomyError(Kind::MalformedSpec, "expected three channels in '" + std::string(t) + "'");
        }
        const Rgb8 v{static_cast<std::uint8_t>(parse_channel(parts[0])), static_cast<std::uint8_t>(parse_channel(parts[1])),
                     static_cast<std::uint8_t>(parse_channel(parts[2]))};
        return make_numeric_spec(ColorSpec::Kind::RgbTriplet, v);
    }

    if (hint) {
        if (const auto* e = load_system(*hint).find(t)) return make_named_spec(*e);
    } else {
        for (auto id : {ColorSystemId::IsccL2, ColorSystemId::IsccL3, ColorSystemId::Css3X11}) {
            if (const auto* e = load_system(id).find(t)) return make_named_spec(*e);
        }
    }
    throw TaxonomyError(Kind::UnknownName, "unknown color name '" + std::string(t) + "'");
}

std::vector<Candidate> candidate_set(const ColorSpec& spec, std::size_t k)
{
    const auto& sys = load_system(spec.system.value_or(ColorSystemId::Css3X11));
    const ColorEntry* nominal = nullptr;
    if (spec.kind == ColorSpec::Kind::Named && spec.name) {
        nominal = sys.find(*spec.name);
    }

    std::vector<Candidate> others;
    others.reserve(sys.size());
    for (const auto& e : sys.entries()) {
        if (&e == nominal || (!nominal && e.rgb == spec.value)) continue;
        others.push_back({&e, e.lab, ciede2000(spec.target_lab, e.lab)});
    }
    if (k > others.size()) {
        throw TaxonomyError(Kind::KTooLarge, "k=" + std::to_string(k) + " exceeds the " + std::to_string(others.size())
                                                 + " available neighbours in " + std::string(to_string(sys.id())));
    }
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k), others.end(),
                      [](const Candidate& x, const Candidate& y) {
                          return x.distance != y.distance ? x.distance < y.distance : x.entry->index < y.entry->index;
                      });

    std::vector<Candidate> out;
    out.reserve(k + 1);
    out.push_back({nominal, spec.target_lab, 0.0});
    out.insert(out.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

const ColorEntry& classify_nearest(const Lab& lab, const ColorSystem& system)
{
    const ColorEntry* best = &system[0];
    double best_d = ciede2000(lab, best->lab);
    for (std::size_t i = 1; i < system.size(); ++i) {
        const double d = ciede2000(lab, system[i].lab);
        if (d < best_d) {
            best_d = d;
            best = &system[i];
        }
    }
    return *best;
}

ColorGroup group_of(const ColorEntry& entry)
{
    switch (entry.system) {
    case ColorSystemId::IsccL2:
        return tokens_of(entry.name).size() == 1 ? ColorGroup::Basic : ColorGroup::Intermediate;
    case ColorSystemId::IsccL3: {
        const auto toks = tokens_of(entry.name);
        auto has = [&](auto pred) { return std::any_of(toks.begin(), toks.end(), pred); };
        if (has([](const std::string& t) { return t.ends_with("ish"); })) return ColorGroup::Ish;
        if (has([](const std::string& t) { return t == "light"; })) return ColorGroup::Light;
        if (has([](const std::string& t) { return t == "dark"; })) return ColorGroup::Dark;
        return ColorGroup::None;
    }
    case ColorSystemId::Css3X11:
        break;
    }
    throw TaxonomyError(Kind::NoGrouping, "no grouping defined for CSS3X11 entry '" + entry.name + "'");
}

}  // namespace gcb
