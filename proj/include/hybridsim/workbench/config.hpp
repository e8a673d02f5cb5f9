#pragma once

// Run configuration: TOML-syntax text with unit-suffixed string values,
// checked against a per-scenario parameter schema.
//
// Parameters may sit at the top level or inside a [parameters] table. The
// reserved top-level keys are `scenario`, `outputs` and the [sweep] table.

#include "hybridsim/error.hpp"
#include "hybridsim/quantities.hpp"
#include "hybridsim/workbench/report.hpp"
#include "hybridsim/workbench/toml_lite.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hybridsim::workbench {

inline constexpr std::array<std::string_view, 8> scenario_names{
    "geometry", "circuit", "plates", "modulation", "coupling", "dynamics", "budget", "sweep"};

enum class ParamKind {
    quantity, // unit-suffixed string, dimension checked
    number,   // bare number (or a unitless numeric string)
    integer,
    boolean,
    string,
    strings,  // one string or an array of strings
    records,  // array of tables, fields checked against `fields`
};

struct ParamSpec {
    std::string key;
    ParamKind kind = ParamKind::number;
    Dimension dim = Dimension::dimensionless;
    bool required = false;
    std::vector<ParamSpec> fields;
};

using Schema = std::vector<ParamSpec>;

namespace detail {

inline ParamSpec q(std::string key, Dimension d, bool required = false) {
    return {std::move(key), ParamKind::quantity, d, required, {}};
}
inline ParamSpec num(std::string key) { return {std::move(key), ParamKind::number, Dimension::dimensionless, false, {}}; }
inline ParamSpec integer(std::string key) {
    return {std::move(key), ParamKind::integer, Dimension::dimensionless, false, {}};
}
inline ParamSpec flag(std::string key) { return {std::move(key), ParamKind::boolean, Dimension::dimensionless, false, {}}; }
inline ParamSpec str(std::string key, bool required = false) {
    return {std::move(key), ParamKind::string, Dimension::dimensionless, required, {}};
}
inline ParamSpec strs(std::string key) { return {std::move(key), ParamKind::strings, Dimension::dimensionless, false, {}}; }
inline ParamSpec records(std::string key, Schema fields) {
    return {std::move(key), ParamKind::records, Dimension::dimensionless, false, std::move(fields)};
}

inline Schema build_schema(std::string_view scenario) {
    using D = Dimension;
    if (scenario == "geometry") {
        return {q("a", D::metre, true), q("b", D::metre), q("c", D::metre), q("w_outer", D::metre),
                num("gamma"), num("beta_quartic"), q("z", D::metre), q("rate0", D::hertz),
                q("r0", D::metre), q("r1", D::metre), num("heating_exponent")};
    }
    if (scenario == "circuit") {
        return {q("C0", D::farad, true), q("L0", D::henry, true), q("Z", D::ohm),
                q("stub_Z0", D::ohm), q("stub_length", D::metre), q("stub_wavelength", D::metre),
                str("stub_termination"), flag("idc"), integer("idc_fingers"), q("idc_finger_length", D::metre),
                q("idc_finger_width", D::metre), q("idc_thickness", D::metre), q("idc_gap", D::metre),
                num("idc_eps_eff"), integer("idc_parallel")};
    }
    if (scenario == "plates") {
        return {q("plate_length", D::metre), q("plate_width", D::metre), q("charge", D::coulomb),
                integer("grid_resolution"), q("ion_height", D::metre), str("table"),
                q("sep_min", D::metre), q("sep_max", D::metre), integer("n_points"),
                q("center_separation", D::metre), q("length_min", D::metre), q("length_max", D::metre),
                integer("n_lengths")};
    }
    if (scenario == "modulation") {
        return {q("C0", D::farad), q("alpha", D::metre), q("beta_amp", D::metre), num("eta"),
                q("f_mod", D::hertz), str("scheme"), str("table"), integer("n_samples"), integer("n_waveform"),
                integer("n_harmonics"), num("fm_index"), integer("n_sidebands"), num("power_threshold"),
                q("f_carrier", D::hertz), q("beam_length", D::metre), q("beam_width", D::metre),
                q("beam_thickness", D::metre), num("youngs_modulus"), num("density"), str("boundary"),
                integer("mode_number"), integer("ratio_max_den"), num("ratio_tol")};
    }
    if (scenario == "coupling") {
        return {strs("species"), num("zeta"), q("ion_height", D::metre), q("C0", D::farad), q("f_i", D::hertz),
                num("eta"), q("z0", D::metre), q("dq0", D::coulomb), q("Z", D::ohm), q("L0", D::henry),
                q("f_lc", D::hertz), q("kappa_rate", D::hertz), q("f_cavity", D::hertz), num("Q"),
                q("decoherence_rate", D::hertz), q("B_trans", D::tesla), num("matrix_element"), num("g_s"),
                flag("include_nuclear"), num("g_I"), num("nuclear_matrix_element"), integer("n_ensemble"),
                num("beta_cg"), q("f_r", D::hertz), num("c_per_len"), q("line_len", D::metre), str("table"),
                q("C_min", D::farad), q("C_max", D::farad), integer("n_points"), str("scale")};
    }
    if (scenario == "dynamics") {
        return {q("G_over_2pi", D::hertz), q("g0_over_2pi", D::hertz), num("eta"), str("convention"),
                q("delta_over_2pi", D::hertz), q("kappa_rate", D::hertz), q("gamma_ion_rate", D::hertz),
                q("dt", D::second), q("t_end", D::second), integer("n_trunc"), str("representation"),
                integer("record_every"), str("initial")};
    }
    if (scenario == "budget") {
        return {records("stages", {str("name", true), q("temperature", D::kelvin, true), q("cooling_power", D::watt)}),
                records("items", {str("source", true), str("sink", true), q("load", D::watt), num("lambda"),
                                  num("area"), q("length", D::metre), q("delta_T", D::kelvin)}),
                records("attenuators", {str("stage", true), q("attenuation", D::decibel, true)}),
                q("input_noise_temperature", D::kelvin), q("signal_power", D::watt), num("diffusion"),
                q("tau_qp", D::second)};
    }
    throw ConfigError("unknown scenario '" + std::string(scenario) +
                      "' (expected geometry, circuit, plates, modulation, coupling, dynamics, budget or sweep)");
}

} // namespace detail

/// Parameter schema of a concrete (non-sweep) scenario.
inline const Schema& scenario_schema(std::string_view scenario) {
    static const std::array<Schema, 7> schemas{
        detail::build_schema("geometry"), detail::build_schema("circuit"),  detail::build_schema("plates"),
        detail::build_schema("modulation"), detail::build_schema("coupling"), detail::build_schema("dynamics"),
        detail::build_schema("budget")};
    for (std::size_t i = 0; i < schemas.size(); ++i) {
        if (scenario_names[i] == scenario) return schemas[i];
    }
    detail::build_schema(scenario); // throws for unknown names
    throw ConfigError("scenario '" + std::string(scenario) + "' has no parameter schema");
}

inline const ParamSpec* find_spec(const Schema& schema, std::string_view key) {
    for (const auto& s : schema) {
        if (s.key == key) return &s;
    }
    return nullptr;
}

namespace detail {

inline std::string dim_label(Dimension d) { return "[" + std::string(unit_symbol(d)) + "]"; }

inline Quantity to_quantity(const toml::Value& v, const std::string& path) {
    if (!v.is_string()) {
        if (v.is_number()) return {v.as_number(), Dimension::dimensionless};
        throw ConfigError("key '" + path + "': expected a quantity string, got " + v.type_name());
    }
    try {
        return parse_quantity(v.as_string());
    } catch (const ParseError& e) {
        throw ConfigError("key '" + path + "': " + e.what());
    }
}

inline double checked_quantity(const toml::Value& v, Dimension d, const std::string& path) {
    if (!v.is_string()) {
        throw ConfigError("key '" + path + "': expected a quantity string with unit " + dim_label(d) + ", got " +
                          v.type_name());
    }
    const Quantity qv = to_quantity(v, path);
    if (qv.dimension() != d) {
        throw ConfigError("key '" + path + "': unit mismatch, expected " + dim_label(d) + ", got " +
                          dim_label(qv.dimension()));
    }
    return qv.value();
}

inline double checked_number(const toml::Value& v, const std::string& path) {
    if (v.is_number()) return v.as_number();
    if (v.is_string()) {
        const Quantity qv = to_quantity(v, path);
        if (qv.dimension() == Dimension::dimensionless) return qv.value();
        throw ConfigError("key '" + path + "': expected a plain number, got " + dim_label(qv.dimension()));
    }
    throw ConfigError("key '" + path + "': expected a number, got " + v.type_name());
}

inline void validate_table(const toml::Table& t, const Schema& schema, bool strict, const std::string& prefix,
                           std::vector<std::string>& warnings, std::string_view supplied_later = {}) {
    for (const auto& [key, v] : t) {
        const std::string path = prefix + key;
        const ParamSpec* spec = find_spec(schema, key);
        if (!spec) {
            if (strict) throw ConfigError("unknown key '" + path + "'");
            warnings.push_back("ignoring unknown key '" + path + "'");
            continue;
        }
        switch (spec->kind) {
            case ParamKind::quantity: checked_quantity(v, spec->dim, path); break;
            case ParamKind::number: checked_number(v, path); break;
            case ParamKind::integer:
                if (!v.is_integer()) throw ConfigError("key '" + path + "': expected an integer, got " + v.type_name());
                break;
            case ParamKind::boolean:
                if (!v.is_bool()) throw ConfigError("key '" + path + "': expected a boolean, got " + v.type_name());
                break;
            case ParamKind::string:
                if (!v.is_string()) throw ConfigError("key '" + path + "': expected a string, got " + v.type_name());
                break;
            case ParamKind::strings:
                if (v.is_string()) break;
                if (!v.is_array()) throw ConfigError("key '" + path + "': expected a string or array of strings");
                for (const auto& e : v.as_array()) {
                    if (!e.is_string()) throw ConfigError("key '" + path + "': array elements must be strings");
                }
                break;
            case ParamKind::records: {
                if (!v.is_array()) throw ConfigError("key '" + path + "': expected an array of tables");
                std::size_t i = 0;
                for (const auto& e : v.as_array()) {
                    const std::string ep = path + "[" + std::to_string(i++) + "].";
                    if (!e.is_table()) throw ConfigError("key '" + path + "': elements must be tables");
                    validate_table(e.as_table(), spec->fields, strict, ep, warnings);
                    for (const auto& f : spec->fields) {
                        if (f.required && !toml::find(e.as_table(), f.key)) {
                            throw ConfigError("missing required key '" + ep + f.key + "'");
                        }
                    }
                }
                break;
            }
        }
    }
    if (prefix.empty()) {
        for (const auto& s : schema) {
            if (s.required && s.key != supplied_later && !toml::find(t, s.key)) {
                throw ConfigError("missing required key '" + s.key + "'");
            }
        }
    }
}

} // namespace detail

/// Typed read access to validated parameters. Getters return SI values.
class Params {
public:
    Params() = default;
    explicit Params(const toml::Table* t, std::string prefix = {}) : t_(t), prefix_(std::move(prefix)) {}

    bool has(std::string_view key) const { return t_ && toml::find(*t_, key); }

    std::optional<double> quantity(std::string_view key, Dimension d) const {
        const auto* v = get(key);
        if (!v) return std::nullopt;
        return detail::checked_quantity(*v, d, path(key));
    }
    double quantity(std::string_view key, Dimension d, double fallback) const {
        return quantity(key, d).value_or(fallback);
    }
    double require_quantity(std::string_view key, Dimension d) const {
        if (auto v = quantity(key, d)) return *v;
        throw ConfigError("missing required key '" + path(key) + "'");
    }

    std::optional<double> number(std::string_view key) const {
        const auto* v = get(key);
        if (!v) return std::nullopt;
        return detail::checked_number(*v, path(key));
    }
    double number(std::string_view key, double fallback) const { return number(key).value_or(fallback); }

    std::optional<long long> integer(std::string_view key) const {
        const auto* v = get(key);
        if (!v) return std::nullopt;
        if (!v->is_integer()) throw ConfigError("key '" + path(key) + "': expected an integer");
        return static_cast<long long>(v->as_integer());
    }
    long long integer(std::string_view key, long long fallback) const { return integer(key).value_or(fallback); }
    int small_integer(std::string_view key, int fallback) const {
        const long long v = integer(key, fallback);
        if (v < -1000000000LL || v > 1000000000LL) throw ConfigError("key '" + path(key) + "': integer out of range");
        return static_cast<int>(v);
    }

    std::optional<bool> boolean(std::string_view key) const {
        const auto* v = get(key);
        if (!v) return std::nullopt;
        if (!v->is_bool()) throw ConfigError("key '" + path(key) + "': expected a boolean");
        return v->as_bool();
    }
    bool boolean(std::string_view key, bool fallback) const { return boolean(key).value_or(fallback); }

    std::optional<std::string> string(std::string_view key) const {
        const auto* v = get(key);
        if (!v) return std::nullopt;
        if (!v->is_string()) throw ConfigError("key '" + path(key) + "': expected a string");
        return v->as_string();
    }
    std::string string(std::string_view key, std::string fallback) const {
        return string(key).value_or(std::move(fallback));
    }

    std::vector<std::string> strings(std::string_view key, std::vector<std::string> fallback) const {
        const auto* v = get(key);
        if (!v) return fallback;
        if (v->is_string()) return {v->as_string()};
        std::vector<std::string> out;
        for (const auto& e : v->as_array()) out.push_back(e.as_string());
        return out;
    }

    std::vector<Params> records(std::string_view key) const {
        std::vector<Params> out;
        const auto* v = get(key);
        if (!v) return out;
        std::size_t i = 0;
        for (const auto& e : v->as_array()) {
            out.emplace_back(&e.as_table(), path(key) + "[" + std::to_string(i++) + "].");
        }
        return out;
    }

    /// Rejects a string value outside `allowed`.
    std::string choice(std::string_view key, std::initializer_list<std::string_view> allowed,
                       std::string fallback) const {
        std::string v = string(key, std::move(fallback));
        for (auto a : allowed) {
            if (a == v) return v;
        }
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        throw ConfigError("key '" + path(key) + "': '" + v + "' is not one of " + list);
    }

private:
    const toml::Value* get(std::string_view key) const { return t_ ? toml::find(*t_, key) : nullptr; }
    std::string path(std::string_view key) const { return prefix_ + std::string(key); }

    const toml::Table* t_ = nullptr;
    std::string prefix_;
};

struct SweepSpec {
    std::string scenario;  // base scenario evaluated at each point
    std::string parameter; // key in the base scenario's schema
    double start = 0.0;    // SI
    double stop = 0.0;
    int n_points = 1;
    bool log_scale = false;
    Dimension dimension = Dimension::dimensionless;
    ParamKind kind = ParamKind::quantity;

    /// Sweep values in index order; log scale uses geometric spacing.
    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n_points));
        for (int i = 0; i < n_points; ++i) {
            const double f = n_points == 1 ? 0.0 : static_cast<double>(i) / (n_points - 1);
            double v = log_scale ? start * std::pow(stop / start, f) : start + (stop - start) * f;
            if (i == n_points - 1 && n_points > 1) v = stop;
            if (kind == ParamKind::integer) v = std::round(v);
            out.push_back(v);
        }
        return out;
    }
};

struct RunConfig {
    std::string scenario;
    toml::Table parameters;
    std::optional<SweepSpec> sweep;
    std::vector<Format> outputs;
    std::vector<std::string> warnings;
    std::string input_hash;

    /// Scenario whose schema the parameters follow.
    const std::string& target_scenario() const { return sweep ? sweep->scenario : scenario; }
    Params params() const { return Params(&parameters); }
};

struct LoadOptions {
    bool strict = false;
    /// Scenario implied by the caller (CLI subcommand); must agree with the file.
    std::string scenario;
    /// "key=value" overrides; value uses TOML value syntax, falling back to a bare string.
    std::vector<std::string> overrides;
};

namespace detail {

inline toml::Value override_value(std::string_view text) {
    try {
        return toml::parse_value(text);
    } catch (const toml::TomlError&) {
        toml::Value v;
        v.data = std::string(text);
        return v;
    }
}

inline SweepSpec parse_sweep(const toml::Table& t, bool strict, std::vector<std::string>& warnings) {
    static const Schema sweep_keys{str("scenario", true), str("parameter", true), {"start", ParamKind::string, Dimension::dimensionless, true, {}},
                                   {"stop", ParamKind::string, Dimension::dimensionless, true, {}},
                                   integer("n_points"), str("scale")};
    for (const auto& [key, v] : t) {
        if (!find_spec(sweep_keys, key)) {
            if (strict) throw ConfigError("unknown key 'sweep." + key + "'");
            warnings.push_back("ignoring unknown key 'sweep." + key + "'");
        }
    }
    const Params p(&t, "sweep.");
    SweepSpec s;
    s.scenario = p.string("scenario").value_or("");
    if (s.scenario.empty()) throw ConfigError("missing required key 'sweep.scenario'");
    if (s.scenario == "sweep") throw ConfigError("key 'sweep.scenario': a sweep cannot sweep a sweep");
    const Schema& base = scenario_schema(s.scenario);
    s.parameter = p.string("parameter").value_or("");
    const ParamSpec* spec = find_spec(base, s.parameter);
    if (!spec) {
        throw ConfigError("key 'sweep.parameter': '" + s.parameter + "' is not a parameter of scenario '" +
                          s.scenario + "'");
    }
    if (spec->kind != ParamKind::quantity && spec->kind != ParamKind::number && spec->kind != ParamKind::integer) {
        throw ConfigError("key 'sweep.parameter': '" + s.parameter + "' is not numeric");
    }
    s.kind = spec->kind;
    s.dimension = spec->dim;
    for (const char* bound : {"start", "stop"}) {
        const toml::Value* v = toml::find(t, bound);
        if (!v) throw ConfigError(std::string("missing required key 'sweep.") + bound + "'");
        const std::string path = std::string("sweep.") + bound;
        const double x = spec->kind == ParamKind::quantity ? checked_quantity(*v, spec->dim, path)
                                                            : checked_number(*v, path);
        (std::string_view(bound) == "start" ? s.start : s.stop) = x;
    }
    const long long n = p.integer("n_points", 2);
    if (n < 1 || n > 100000) throw ConfigError("key 'sweep.n_points': must be in [1, 100000]");
    s.n_points = static_cast<int>(n);
    s.log_scale = p.choice("scale", {"linear", "log"}, "linear") == "log";
    if (s.log_scale && !(s.start > 0.0 && s.stop > 0.0)) {
        throw ConfigError("key 'sweep.scale': log scale needs positive start and stop");
    }
    return s;
}

} // namespace detail

/// Parses and validates config text.
inline RunConfig load_config_text(std::string_view text, const LoadOptions& opt = {}) {
    toml::Table doc = toml::parse(text);
    for (const auto& o : opt.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' is not key=value");
        std::string key = o.substr(0, eq);
        toml::Value v = detail::override_value(std::string_view(o).substr(eq + 1));
        if (key.rfind("sweep.", 0) == 0) {
            toml::Value* sw = toml::find(doc, "sweep");
            if (!sw) {
                toml::Value nv;
                nv.data = toml::Table{};
                doc.emplace_back("sweep", std::move(nv));
                sw = &doc.back().second;
            }
            if (!sw->is_table()) throw ConfigError("key 'sweep' must be a table");
            toml::set(sw->as_table(), key.substr(6), std::move(v));
        } else if (key == "scenario") {
            toml::set(doc, key, std::move(v));
        } else {
            toml::Value* params = toml::find(doc, "parameters");
            if (params && params->is_table()) {
                toml::set(params->as_table(), key, std::move(v));
            } else {
                toml::set(doc, key, std::move(v));
            }
        }
    }

    RunConfig cfg;
    std::string hash_input(text);
    for (const auto& o : opt.overrides) hash_input += "\n" + o;
    cfg.input_hash = fnv1a_hex(hash_input);

    const toml::Table* sweep_table = nullptr;
    for (const auto& [key, v] : doc) {
        if (key == "scenario") {
            if (!v.is_string()) throw ConfigError("key 'scenario': expected a string");
            cfg.scenario = v.as_string();
        } else if (key == "outputs") {
            if (!v.is_array()) throw ConfigError("key 'outputs': expected an array of strings");
            for (const auto& e : v.as_array()) {
                if (!e.is_string()) throw ConfigError("key 'outputs': expected an array of strings");
                cfg.outputs.push_back(parse_format(e.as_string()));
            }
        } else if (key == "sweep") {
            if (!v.is_table()) throw ConfigError("key 'sweep': expected a table");
            sweep_table = &v.as_table();
        } else if (key == "parameters") {
            if (!v.is_table()) throw ConfigError("key 'parameters': expected a table");
            for (const auto& [pk, pv] : v.as_table()) {
                if (toml::find(cfg.parameters, pk)) throw ConfigError("duplicate key '" + pk + "'");
                cfg.parameters.emplace_back(pk, pv);
            }
        } else {
            if (toml::find(cfg.parameters, key)) throw ConfigError("duplicate key '" + key + "'");
            cfg.parameters.emplace_back(key, v);
        }
    }
    if (cfg.scenario.empty()) cfg.scenario = opt.scenario;
    if (cfg.scenario.empty()) throw ConfigError("missing required key 'scenario'");
    if (!opt.scenario.empty() && opt.scenario != cfg.scenario) {
        throw ConfigError("config is for scenario '" + cfg.scenario + "', not '" + opt.scenario + "'");
    }
    if (cfg.scenario == "sweep") {
        if (!sweep_table) throw ConfigError("scenario 'sweep' needs a [sweep] table");
        cfg.sweep = detail::parse_sweep(*sweep_table, opt.strict, cfg.warnings);
    } else {
        scenario_schema(cfg.scenario); // rejects unknown scenario names
        if (sweep_table) {
            if (opt.strict) throw ConfigError("unknown key 'sweep' for scenario '" + cfg.scenario + "'");
            cfg.warnings.push_back("ignoring [sweep] table for scenario '" + cfg.scenario + "'");
        }
    }
    const Schema& schema = scenario_schema(cfg.target_scenario());
    detail::validate_table(cfg.parameters, schema, opt.strict, "", cfg.warnings,
                           cfg.sweep ? std::string_view(cfg.sweep->parameter) : std::string_view{});
    return cfg;
}

inline RunConfig load_config(const std::string& path, const LoadOptions& opt = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str(), opt);
}

} // namespace hybridsim::workbench
