#pragma once

// Physical constants, SI quantities with a closed set of unit tags, and the
// registry of trappable ion species.
//
// All formulas in the library take and return plain doubles in base SI units.
// `Quantity` exists only at the I/O boundary (config files, CLI arguments,
// report headers).

#include "hybridsim/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <system_error>

namespace hybridsim {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace constants {

// CODATA 2018.
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double planck = 6.62607015e-34;              // J s (exact)
inline constexpr double hbar = planck / two_pi;               // J s
inline constexpr double boltzmann = 1.380649e-23;             // J/K (exact)
inline constexpr double bohr_magneton = 9.2740100783e-24;     // J/T
inline constexpr double nuclear_magneton = 5.0507837461e-27;  // J/T
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double electron_mass_u = 5.48579909065e-4;   // u
inline constexpr double coulomb_constant = 1.0 / (4.0 * pi * vacuum_permittivity);

} // namespace constants

// ---------------------------------------------------------------------------
// Dimensions and quantities
// ---------------------------------------------------------------------------

enum class Dimension : std::uint8_t {
    dimensionless,
    metre,
    kilogram,
    second,
    ampere,
    kelvin,
    hertz,
    farad,
    henry,
    ohm,
    coulomb,
    weber,
    tesla,
    joule,
    watt,
    volt,
    decibel,
};

inline constexpr std::array all_dimensions{
    Dimension::dimensionless, Dimension::metre,  Dimension::kilogram, Dimension::second,
    Dimension::ampere,        Dimension::kelvin, Dimension::hertz,    Dimension::farad,
    Dimension::henry,         Dimension::ohm,    Dimension::coulomb,  Dimension::weber,
    Dimension::tesla,         Dimension::joule,  Dimension::watt,     Dimension::volt,
    Dimension::decibel,
};

namespace detail {

struct UnitSymbol {
    std::string_view text;
    Dimension dim;
    bool prefixable;
};

// First entry per dimension is the canonical output symbol.
inline constexpr std::array<UnitSymbol, 19> unit_symbols{{
    {"", Dimension::dimensionless, false},
    {"m", Dimension::metre, true},
    {"kg", Dimension::kilogram, false},
    {"s", Dimension::second, true},
    {"A", Dimension::ampere, true},
    {"K", Dimension::kelvin, true},
    {"Hz", Dimension::hertz, true},
    {"F", Dimension::farad, true},
    {"H", Dimension::henry, true},
    {"\xCE\xA9", Dimension::ohm, true},     // U+03A9 GREEK CAPITAL LETTER OMEGA
    {"\xE2\x84\xA6", Dimension::ohm, true}, // U+2126 OHM SIGN
    {"Ohm", Dimension::ohm, true},
    {"C", Dimension::coulomb, true},
    {"Wb", Dimension::weber, true},
    {"T", Dimension::tesla, true},
    {"J", Dimension::joule, true},
    {"W", Dimension::watt, true},
    {"V", Dimension::volt, true},
    {"dB", Dimension::decibel, false},
}};

struct Prefix {
    std::string_view text;
    int exponent;
};

// First entry per exponent is the canonical output prefix.
inline constexpr std::array<Prefix, 10> prefixes{{
    {"f", -15},
    {"p", -12},
    {"n", -9},
    {"\xC2\xB5", -6}, // U+00B5 MICRO SIGN
    {"\xCE\xBC", -6}, // U+03BC GREEK SMALL LETTER MU
    {"u", -6},
    {"m", -3},
    {"k", 3},
    {"M", 6},
    {"G", 9},
}};

inline const UnitSymbol& canonical_symbol(Dimension d) {
    for (const auto& u : unit_symbols) {
        if (u.dim == d) return u;
    }
    throw DomainError("no symbol for dimension");
}

inline std::string_view canonical_prefix(int exponent) {
    for (const auto& p : prefixes) {
        if (p.exponent == exponent) return p.text;
    }
    return {};
}

} // namespace detail

/// Canonical unit symbol ("m", "F", "Ω", ...; empty for dimensionless).
inline std::string_view unit_symbol(Dimension d) { return detail::canonical_symbol(d).text; }

/// ASCII-safe unit suffix for column names ("m", "F", "ohm", "dB", ...).
inline std::string_view unit_suffix(Dimension d) {
    if (d == Dimension::ohm) return "ohm";
    return unit_symbol(d);
}

/// A double in base SI plus its dimension tag.
class Quantity {
public:
    constexpr Quantity() = default;
    constexpr Quantity(double value, Dimension dim) : value_(value), dim_(dim) {}

    constexpr double value() const noexcept { return value_; }
    constexpr Dimension dimension() const noexcept { return dim_; }

    /// Value checked against an expected dimension.
    double as(Dimension expected) const {
        if (dim_ != expected) {
            throw DimensionError("expected [" + std::string(unit_symbol(expected)) + "], got [" +
                                 std::string(unit_symbol(dim_)) + "]");
        }
        return value_;
    }

    friend Quantity operator+(const Quantity& a, const Quantity& b) {
        check_same(a, b, "+");
        return {a.value_ + b.value_, a.dim_};
    }
    friend Quantity operator-(const Quantity& a, const Quantity& b) {
        check_same(a, b, "-");
        return {a.value_ - b.value_, a.dim_};
    }
    friend constexpr Quantity operator*(const Quantity& a, double k) { return {a.value_ * k, a.dim_}; }
    friend constexpr Quantity operator*(double k, const Quantity& a) { return {a.value_ * k, a.dim_}; }
    friend constexpr Quantity operator/(const Quantity& a, double k) { return {a.value_ / k, a.dim_}; }
    constexpr Quantity operator-() const { return {-value_, dim_}; }

    friend bool operator==(const Quantity&, const Quantity&) = default;
    friend bool operator<(const Quantity& a, const Quantity& b) {
        check_same(a, b, "<");
        return a.value_ < b.value_;
    }

private:
    static void check_same(const Quantity& a, const Quantity& b, const char* op) {
        if (a.dim_ != b.dim_) {
            throw DimensionError(std::string("incompatible dimensions for '") + op + "': [" +
                                 std::string(unit_symbol(a.dim_)) + "] and [" +
                                 std::string(unit_symbol(b.dim_)) + "]");
        }
    }

    double value_ = 0.0;
    Dimension dim_ = Dimension::dimensionless;
};

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline std::optional<UnitSymbol> match_unit(std::string_view s) {
    for (const auto& u : unit_symbols) {
        if (u.text == s) return u;
    }
    return std::nullopt;
}

// Exact decimal -> double: the significand text is re-assembled with the
// combined exponent and handed to from_chars, so scaling by a prefix never
// introduces a second rounding.
inline double decimal_to_double(std::string_view significand, long exponent, std::size_t pos) {
    std::string text(significand);
    text += 'e';
    text += std::to_string(exponent);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec == std::errc::result_out_of_range) throw ParseError("number out of range", pos);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw ParseError("malformed number", pos);
    return out;
}

} // namespace detail

/// Parses `<number><optional prefix><unit>`, e.g. "46fF", "25µm", "1.4e-19C", "60dB", "0.3".
/// Whitespace is allowed around the number and between number and unit.
inline Quantity parse_quantity(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto skip_ws = [&] {
        while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip_ws();
    const std::size_t num_begin = i;
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < n && detail::is_digit(text[i])) { ++i; ++digits; }
    if (i < n && text[i] == '.') {
        ++i;
        while (i < n && detail::is_digit(text[i])) { ++i; ++digits; }
    }
    if (digits == 0) throw ParseError("expected a number", num_begin);
    const std::size_t sig_end = i;
    long exponent = 0;
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        bool neg = false;
        if (j < n && (text[j] == '+' || text[j] == '-')) { neg = text[j] == '-'; ++j; }
        if (j < n && detail::is_digit(text[j])) {
            long e = 0;
            while (j < n && detail::is_digit(text[j])) {
                e = e * 10 + (text[j] - '0');
                if (e > 100000) throw ParseError("exponent too large", i);
                ++j;
            }
            exponent = neg ? -e : e;
            i = j;
        }
    }
    std::string_view significand = text.substr(num_begin, sig_end - num_begin);
    if (!significand.empty() && significand.front() == '+') significand.remove_prefix(1);
    skip_ws();
    const std::size_t unit_begin = i;
    std::size_t unit_end = n;
    while (unit_end > unit_begin && (text[unit_end - 1] == ' ' || text[unit_end - 1] == '\t')) --unit_end;
    const std::string_view unit = text.substr(unit_begin, unit_end - unit_begin);

    if (auto u = detail::match_unit(unit)) {
        return {detail::decimal_to_double(significand, exponent, num_begin), u->dim};
    }
    for (const auto& p : detail::prefixes) {
        if (unit.size() > p.text.size() && unit.substr(0, p.text.size()) == p.text) {
            auto u = detail::match_unit(unit.substr(p.text.size()));
            if (u && u->prefixable) {
                return {detail::decimal_to_double(significand, exponent + p.exponent, num_begin), u->dim};
            }
        }
    }
    throw ParseError("unknown unit '" + std::string(unit) + "'", unit_begin);
}

/// Shortest text that parses back to exactly the same Quantity. Prefixable
/// units get an engineering prefix so the mantissa lies in [1, 1000) when the
/// prefix range allows it.
inline std::string format_quantity(const Quantity& q) {
    const auto& sym = detail::canonical_symbol(q.dimension());
    const double v = q.value();
    char buf[64];
    if (!std::isfinite(v) || v == 0.0 || !sym.prefixable) {
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr) + std::string(sym.text);
    }
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific);
    std::string_view sci(buf, static_cast<std::size_t>(r.ptr - buf));
    const auto epos = sci.find('e');
    std::string_view mant = sci.substr(0, epos);
    int exp10 = 0;
    std::from_chars(sci.data() + epos + 1 + (sci[epos + 1] == '+'), sci.data() + sci.size(), exp10);

    std::string sign;
    if (mant.front() == '-') { sign = "-"; mant.remove_prefix(1); }
    std::string digits;
    for (char c : mant) {
        if (c != '.') digits += c;
    }

    int prefix_exp = static_cast<int>(std::floor(exp10 / 3.0)) * 3;
    prefix_exp = std::clamp(prefix_exp, -15, 9);
    // Decimal point goes after (1 + shift) digits.
    const int shift = exp10 - prefix_exp;
    std::string body;
    if (shift >= 0) {
        const auto int_len = static_cast<std::size_t>(shift + 1);
        if (digits.size() <= int_len) {
            body = digits + std::string(int_len - digits.size(), '0');
        } else {
            body = digits.substr(0, int_len) + "." + digits.substr(int_len);
        }
    } else {
        body = "0." + std::string(static_cast<std::size_t>(-shift - 1), '0') + digits;
    }
    return sign + body + std::string(detail::canonical_prefix(prefix_exp)) + std::string(sym.text);
}

// ---------------------------------------------------------------------------
// Ion species
// ---------------------------------------------------------------------------

struct IonSpecies {
    std::string symbol;
    int mass_number = 0;
    double mass = 0.0;   // kg, singly-charged ion
    double charge = 0.0; // C
    std::optional<double> qubit_frequency; // Hz, ground-state hyperfine splitting
};

namespace detail {

struct SpeciesRecord {
    std::string_view symbol;
    int mass_number;
    double atomic_mass_u; // neutral atom
    double qubit_frequency_hz; // 0 when not applicable
};

// Neutral-atom masses from the 2016 atomic mass evaluation. Magnesium is
// registered as Mg-24; "12Mg" as printed in some sources is not an isotope.
inline constexpr std::array<SpeciesRecord, 6> species_table{{
    {"Be-9", 9, 9.0121831, 0.0},
    {"Mg-24", 24, 23.985041697, 0.0},
    {"Ca-40", 40, 39.962590863, 0.0},
    {"Sr-87", 87, 86.9088775, 0.0},
    {"Ba-138", 138, 137.905247, 0.0},
    {"Yb-171", 171, 170.9363258, 12.6e9},
}};

inline IonSpecies make_species(const SpeciesRecord& r) {
    IonSpecies s;
    s.symbol = std::string(r.symbol);
    s.mass_number = r.mass_number;
    s.mass = (r.atomic_mass_u - constants::electron_mass_u) * constants::atomic_mass_unit;
    s.charge = constants::elementary_charge;
    if (r.qubit_frequency_hz > 0.0) s.qubit_frequency = r.qubit_frequency_hz;
    return s;
}

} // namespace detail

/// Symbols of all registered species, lightest first.
inline std::array<std::string_view, detail::species_table.size()> registered_species() {
    std::array<std::string_view, detail::species_table.size()> out{};
    std::transform(detail::species_table.begin(), detail::species_table.end(), out.begin(),
                   [](const auto& r) { return r.symbol; });
    return out;
}

/// Looks up a singly-charged ion by symbol ("Be-9", "Yb-171", ...).
inline IonSpecies lookup_ion(std::string_view symbol) {
    for (const auto& r : detail::species_table) {
        if (r.symbol == symbol) return detail::make_species(r);
    }
    std::string known;
    for (const auto& r : detail::species_table) {
        if (!known.empty()) known += ", ";
        known += r.symbol;
    }
    throw NotFoundError("unknown ion species '" + std::string(symbol) + "'; registered: " + known);
}

} // namespace hybridsim
