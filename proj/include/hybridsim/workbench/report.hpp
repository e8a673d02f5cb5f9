#pragma once

// Tabular run output with metadata and per-column provenance, plus the
// CSV / JSON / SVG / plain-table emitters.

#include "hybridsim/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace hybridsim::workbench {

inline constexpr const char* tool_version = "hybridsim 1.0.0";
/// Provenance tag for bookkeeping columns (indices, labels, sweep values).
inline constexpr const char* plumbing = "plumbing";

using Cell = std::variant<double, std::string>;

struct Column {
    std::string name; // unit-suffixed, e.g. "C0_F"
    std::string provenance;
};

struct PlotHints {
    std::string x;
    std::string y;
    std::string series; // column whose value splits rows into polylines
    bool log_x = false;
    bool log_y = false;
};

struct Report {
    std::string scenario;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::pair<std::string, Cell>> summary;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
    PlotHints plot;
    /// Set when the run completed but an engineering check failed.
    bool check_failed = false;

    void add_column(std::string name, std::string provenance) {
        columns.push_back({std::move(name), std::move(provenance)});
    }

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) {
            throw Error("row has " + std::to_string(row.size()) + " cells, report has " +
                        std::to_string(columns.size()) + " columns");
        }
        rows.push_back(std::move(row));
    }

    std::ptrdiff_t column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i].name == name) return static_cast<std::ptrdiff_t>(i);
        }
        return -1;
    }

    const Cell* summary_value(std::string_view key) const {
        for (const auto& [k, v] : summary) {
            if (k == key) return &v;
        }
        return nullptr;
    }

    void set_metadata(const std::string& key, std::string value) {
        for (auto& [k, v] : metadata) {
            if (k == key) {
                v = std::move(value);
                return;
            }
        }
        metadata.emplace_back(key, std::move(value));
    }
};

/// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// 12 significant digits, '.' decimal separator.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return std::get<std::string>(c);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) return *d;
        return format_number(*d); // JSON has no inf/nan literals
    }
    return std::get<std::string>(c);
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace detail

inline std::string emit_csv(const Report& r) {
    std::string out;
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (i) out += ',';
        out += detail::csv_field(r.columns[i].name);
    }
    out += '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += detail::csv_field(cell_text(row[i]));
        }
        out += '\n';
    }
    return out;
}

inline std::string emit_json(const Report& r) {
    nlohmann::ordered_json j;
    auto& meta = j["metadata"] = nlohmann::ordered_json::object();
    meta["scenario"] = r.scenario;
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    auto& summary = meta["summary"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.summary) summary[k] = detail::cell_json(v);
    auto& rows = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) o[r.columns[i].name] = detail::cell_json(row[i]);
        rows.push_back(std::move(o));
    }
    auto& prov = j["provenance"] = nlohmann::ordered_json::object();
    for (const auto& c : r.columns) prov[c.name] = c.provenance;
    return j.dump(2) + "\n";
}

/// Fixed-width text table preceded by the summary block.
inline std::string emit_table(const Report& r) {
    std::ostringstream os;
    os << "# " << r.scenario << '\n';
    std::size_t key_w = 0;
    for (const auto& [k, v] : r.summary) key_w = std::max(key_w, k.size());
    for (const auto& [k, v] : r.summary) {
        os << "  " << k << std::string(key_w - k.size(), ' ') << "  " << cell_text(v) << '\n';
    }
    if (!r.summary.empty() && !r.columns.empty()) os << '\n';
    if (r.columns.empty()) return os.str();
    std::vector<std::size_t> w(r.columns.size());
    for (std::size_t i = 0; i < r.columns.size(); ++i) w[i] = r.columns[i].name.size();
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], cell_text(row[i]).size());
    }
    auto line = [&](auto&& text_of) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            const std::string t = text_of(i);
            os << (i ? "  " : "") << t << std::string(w[i] - t.size(), ' ');
        }
        os << '\n';
    };
    line([&](std::size_t i) { return r.columns[i].name; });
    line([&](std::size_t i) { return std::string(w[i], '-'); });
    for (const auto& row : r.rows) line([&](std::size_t i) { return cell_text(row[i]); });
    return os.str();
}

/// Line chart of plot.y against plot.x, one polyline per distinct value of
/// plot.series (in first-appearance order).
inline std::string emit_svg(const Report& r) {
    if (r.rows.empty()) throw Error("cannot plot an empty report");
    auto numeric_column = [&](std::size_t skip) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < r.columns.size(); ++i) {
            if (i != skip && std::holds_alternative<double>(r.rows.front()[i])) return static_cast<std::ptrdiff_t>(i);
        }
        return -1;
    };
    std::ptrdiff_t xi = r.plot.x.empty() ? numeric_column(static_cast<std::size_t>(-1)) : r.column_index(r.plot.x);
    if (xi < 0) throw Error("no numeric x column to plot");
    std::ptrdiff_t yi = r.plot.y.empty() ? numeric_column(static_cast<std::size_t>(xi)) : r.column_index(r.plot.y);
    if (yi < 0) throw Error("no numeric y column to plot");
    const std::ptrdiff_t si = r.plot.series.empty() ? -1 : r.column_index(r.plot.series);

    std::vector<std::string> names;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const auto& row : r.rows) {
        const auto* x = std::get_if<double>(&row[static_cast<std::size_t>(xi)]);
        const auto* y = std::get_if<double>(&row[static_cast<std::size_t>(yi)]);
        if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) continue;
        if ((r.plot.log_x && *x <= 0) || (r.plot.log_y && *y <= 0)) continue;
        const std::string key = si >= 0 ? cell_text(row[static_cast<std::size_t>(si)]) : r.columns[static_cast<std::size_t>(yi)].name;
        if (!series.count(key)) names.push_back(key);
        series[key].emplace_back(r.plot.log_x ? std::log10(*x) : *x, r.plot.log_y ? std::log10(*y) : *y);
    }
    if (names.empty()) throw Error("no plottable points");

    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& [k, pts] : series) {
        for (const auto& [x, y] : pts) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (x1 == x0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 == y0) { y0 -= 0.5; y1 += 0.5; }

    constexpr double W = 720, H = 460, ml = 90, mr = 150, mt = 30, mb = 60;
    const double pw = W - ml - mr, ph = H - mt - mb;
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y0) / (y1 - y0) * ph; };
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

    const std::string& xname = r.columns[static_cast<std::size_t>(xi)].name;
    const std::string& yname = r.columns[static_cast<std::size_t>(yi)].name;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<g class=\"axis\" data-axis=\"x\" data-scale=\"" << (r.plot.log_x ? "log" : "linear") << "\">\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph
       << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = x0 + (x1 - x0) * k / 4.0;
        os << "<text x=\"" << detail::fixed2(px(v)) << "\" y=\"" << mt + ph + 16 << "\" text-anchor=\"middle\">"
           << format_number(r.plot.log_x ? std::pow(10.0, v) : v).substr(0, 10) << "</text>\n";
    }
    os << "<text class=\"axis-label\" x=\"" << ml + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
       << detail::xml_escape(xname) << (r.plot.log_x ? " (log)" : "") << "</text>\n</g>\n";
    os << "<g class=\"axis\" data-axis=\"y\" data-scale=\"" << (r.plot.log_y ? "log" : "linear") << "\">\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double v = y0 + (y1 - y0) * k / 4.0;
        os << "<text x=\"" << ml - 6 << "\" y=\"" << detail::fixed2(py(v) + 4) << "\" text-anchor=\"end\">"
           << format_number(r.plot.log_y ? std::pow(10.0, v) : v).substr(0, 10) << "</text>\n";
    }
    os << "<text class=\"axis-label\" x=\"20\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << mt + ph / 2 << ")\">" << detail::xml_escape(yname) << (r.plot.log_y ? " (log)" : "") << "</text>\n</g>\n";
    for (std::size_t s = 0; s < names.size(); ++s) {
        const auto& pts = series[names[s]];
        const char* color = palette[s % (sizeof palette / sizeof *palette)];
        os << "<polyline data-series=\"" << detail::xml_escape(names[s]) << "\" fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            os << (i ? " " : "") << detail::fixed2(px(pts[i].first)) << ',' << detail::fixed2(py(pts[i].second));
        }
        os << "\"/>\n";
        const double ly = mt + 14 + 18.0 * static_cast<double>(s);
        os << "<text class=\"legend\" x=\"" << ml + pw + 12 << "\" y=\"" << ly << "\" fill=\"" << color << "\">"
           << detail::xml_escape(names[s]) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

enum class Format { table, csv, json, svg };

inline Format parse_format(std::string_view s) {
    if (s == "table") return Format::table;
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    if (s == "svg") return Format::svg;
    throw ConfigError("unknown output format '" + std::string(s) + "' (expected table, csv, json or svg)");
}

inline std::string_view extension(Format f) {
    switch (f) {
        case Format::table: return "txt";
        case Format::csv: return "csv";
        case Format::json: return "json";
        case Format::svg: return "svg";
    }
    return "txt";
}

inline std::string emit(const Report& r, Format f) {
    switch (f) {
        case Format::table: return emit_table(r);
        case Format::csv: return emit_csv(r);
        case Format::json: return emit_json(r);
        case Format::svg: return emit_svg(r);
    }
    return {};
}

} // namespace hybridsim::workbench
