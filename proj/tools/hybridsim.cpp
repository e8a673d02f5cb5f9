// hybridsim: batch front end for the scenario runners.
//
//   hybridsim <scenario> [--config file.toml] [--out path] [--format csv|json|svg|table]
//             [--strict] [--timestamp] [key=value ...]
//
// Exit status: 0 success, 1 computation/domain error or failed budget check,
// 2 configuration error.

#include "hybridsim/hybridsim.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

namespace wb = hybridsim::workbench;

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hybridsim::ConfigError("cannot write '" + path + "'");
    out << data;
}

std::string stem_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
    return path;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ion-trap / superconducting-circuit design workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", wb::tool_version);

    std::string config_path;
    std::string out_path;
    std::string format;
    bool strict = false;
    bool timestamp = false;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "TOML run configuration");
    app.add_option("--out", out_path, "output file (default: stdout)");
    app.add_option("--format", format, "csv, json, svg or table")->check(CLI::IsMember({"csv", "json", "svg", "table"}));
    app.add_flag("--strict", strict, "reject unknown configuration keys");
    app.add_flag("--timestamp", timestamp, "record the UTC run time in the report metadata");

    const std::vector<std::pair<const char*, const char*>> commands{
        {"geometry", "surface-trap ion height, optimum widths, axial potential, heating scaling"},
        {"circuit", "LC resonance, impedance, zero-point fluctuations, stubs, IDC estimate"},
        {"plates", "field at the ion from a coupling plate pair"},
        {"modulation", "capacitance waveform, harmonics, FM sidebands, BAW flexural modes"},
        {"coupling", "ion-circuit coupling strengths and regime"},
        {"dynamics", "two-mode swap dynamics"},
        {"budget", "cryostat heat and noise budget (exit 1 on a failed stage)"},
        {"sweep", "evaluate a scenario over a parameter range"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("overrides", overrides, "parameter overrides as key=value");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string scenario = app.get_subcommands().front()->get_name();

    try {
        wb::LoadOptions opt;
        opt.strict = strict;
        opt.scenario = scenario;
        opt.overrides = overrides;
        const wb::RunConfig cfg = config_path.empty() ? wb::load_config_text("", opt) : wb::load_config(config_path, opt);
        for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';

        const wb::Report report = wb::run(cfg, timestamp ? utc_timestamp() : std::string{});

        std::vector<wb::Format> formats;
        if (!format.empty()) {
            formats.push_back(wb::parse_format(format));
        } else if (!cfg.outputs.empty()) {
            formats = cfg.outputs;
        } else {
            formats.push_back(wb::Format::table);
        }
        for (const auto f : formats) {
            const std::string data = wb::emit(report, f);
            if (out_path.empty()) {
                std::cout << data;
            } else if (formats.size() == 1) {
                write_file(out_path, data);
            } else {
                write_file(stem_of(out_path) + "." + std::string(wb::extension(f)), data);
            }
        }
        if (report.check_failed) {
            std::cerr << "check failed: see report status columns\n";
            return 1;
        }
        return 0;
    } catch (const hybridsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const hybridsim::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const hybridsim::NotFoundError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
