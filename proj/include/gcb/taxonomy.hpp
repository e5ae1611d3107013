#pragma once

#include "gcb/colorspace.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gcb {

enum class ColorSystemId { IsccL2, IsccL3, Css3X11 };

std::string_view to_string(ColorSystemId id);
std::optional<ColorSystemId> parse_system_id(std::string_view text);

enum class ColorGroup { Basic, Intermediate, Light, Dark, Ish, None };

std::string_view to_string(ColorGroup g);

class TaxonomyError : public std::runtime_error {
public:
    enum class Kind {
        UnknownSystem,
        UnknownName,
        MalformedHex,
        ChannelOutOfRange,
        MalformedSpec,
        BadTable,
        KTooLarge,
        NoGrouping,
    };

    TaxonomyError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct ColorEntry {
    std::string name;
    Rgb8 rgb;
    std::string hex;  // "#rrggbb", lowercase
    Lab lab;
    ColorSystemId system = ColorSystemId::IsccL2;
    std::size_t index = 0;  // position in the table
};

class ColorSystem {
public:
    ColorSystem(ColorSystemId id, std::vector<ColorEntry> entries);

    ColorSystemId id() const { return id_; }
    const std::vector<ColorEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const ColorEntry& operator[](std::size_t i) const { return entries_[i]; }

    // Case-insensitive, whitespace-normalized lookup.
    const ColorEntry* find(std::string_view name) const;

private:
    ColorSystemId id_;
    std::vector<ColorEntry> entries_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

std::size_t expected_size(ColorSystemId id);

/// Parses a `system,name,hex,r,g,b` table and validates it, including the
/// expected cardinality for `id`.
ColorSystem parse_system_csv(ColorSystemId id, std::string_view csv);

/// The embedded table for `id`; built once, immutable afterwards.
const ColorSystem& load_system(ColorSystemId id);
const ColorSystem& load_system(std::string_view id);

/// Lowercase, collapse runs of whitespace, trim.
std::string normalize_name(std::string_view name);

std::string to_hex(Rgb8 c);
Rgb8 parse_hex(std::string_view text);

struct ColorSpec {
    enum class Kind { Named, Hex, RgbTriplet };

    Kind kind = Kind::Named;
    std::optional<std::string> name;  // canonical table name for named specs
    Rgb8 value;
    std::optional<ColorSystemId> system;  // absent for numeric specs
    Lab target_lab;
};

std::string_view to_string(ColorSpec::Kind k);

ColorSpec make_named_spec(const ColorEntry& e);
ColorSpec make_numeric_spec(ColorSpec::Kind kind, Rgb8 value);

/// Accepts a color name, "#rrggbb", "rgb(r, g, b)" or "(r, g, b)".
/// Unhinted names are looked up in L2, then L3, then CSS3X11.
ColorSpec parse_color_spec(std::string_view text, std::optional<ColorSystemId> hint = std::nullopt);

struct Candidate {
    const ColorEntry* entry = nullptr;  // null for a numeric nominal target
    Lab lab;
    double distance = 0.0;  // ciede2000 to the nominal color
};

/// Nominal target followed by its k nearest other entries of the same system
/// (CSS3X11 for numeric specs), ranked by ciede2000, ties by table order.
std::vector<Candidate> candidate_set(const ColorSpec& spec, std::size_t k);

const ColorEntry& classify_nearest(const Lab& lab, const ColorSystem& system);

ColorGroup group_of(const ColorEntry& entry);

}  // namespace gcb
