#include "hybridsim/workbench/scenarios.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

using namespace hybridsim;
using namespace hybridsim::workbench;

namespace {

std::vector<std::filesystem::path> shipped_configs() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(HYBRIDSIM_CONFIG_DIR)) {
        if (e.path().extension() == ".toml") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Report run_file(const std::string& name) { return run(load_config(std::string(HYBRIDSIM_CONFIG_DIR) + "/" + name)); }

double summary_number(const Report& r, std::string_view key) {
    const Cell* c = r.summary_value(key);
    if (!c) throw std::runtime_error("missing summary key " + std::string(key));
    return std::get<double>(*c);
}

double cell(const Report& r, std::size_t row, std::string_view col) {
    return std::get<double>(r.rows.at(row).at(static_cast<std::size_t>(r.column_index(col))));
}

} // namespace

TEST(ShippedConfigs, AllRunWithCompleteProvenance) {
    const auto files = shipped_configs();
    ASSERT_GE(files.size(), 10u);
    for (const auto& f : files) {
        SCOPED_TRACE(f.filename().string());
        LoadOptions strict;
        strict.strict = true;
        const auto cfg = load_config(f.string(), strict);
        const Report r = run(cfg);
        EXPECT_FALSE(r.columns.empty());
        EXPECT_FALSE(r.rows.empty());
        for (const auto& c : r.columns) EXPECT_FALSE(c.provenance.empty()) << c.name;
        EXPECT_EQ(r.check_failed, f.filename() == "budget_overloaded.toml");
    }
}

TEST(ShippedConfigs, ReferenceNumbers) {
    EXPECT_NEAR(summary_number(run_file("geometry_trap.toml"), "ion_height_m"), 24.73863375370596e-6, 1e-15);
    const Report circuit = run_file("circuit_lc.toml");
    EXPECT_NEAR(oracle::rel(summary_number(circuit, "dq0_C"), 1.3974658398e-19), 0.0, 1e-8);
    EXPECT_NEAR(oracle::rel(summary_number(circuit, "dphi0_Wb"), 3.77315776747e-16), 0.0, 1e-8);
    const Report coupling = run_file("coupling_motional.toml");
    EXPECT_NEAR(cell(coupling, 0, "g0_over_2pi_Hz"), 176618.34, 0.01);
    const Report cpw = run_file("coupling_cpw.toml");
    EXPECT_NEAR(summary_number(cpw, "kappa_over_2pi_Hz"), 126000.0, 1e-6);
    EXPECT_NEAR(summary_number(cpw, "g_ensemble_over_2pi_Hz") / summary_number(cpw, "g_magnetic_over_2pi_Hz"), 1000.0, 1e-9);
    const Report budget = run_file("budget_fridge.toml");
    EXPECT_NEAR(summary_number(budget, "load_at_100mK_W"), 5e-3, 1e-15);
    EXPECT_EQ(std::get<std::string>(*budget.summary_value("budget")), "pass");
    const Report swap = run_file("dynamics_swap.toml");
    EXPECT_GE(summary_number(swap, "swap_fidelity"), 0.99);
}

TEST(Sweep, CapacitanceCurvesInIndexOrder) {
    const Report r = run_file("sweep_capacitance.toml");
    ASSERT_EQ(r.rows.size(), 180u);
    EXPECT_EQ(r.column_index("C0_F"), 1); // reused from the base report, not prepended
    EXPECT_EQ(r.plot.x, "C0_F");
    EXPECT_TRUE(r.plot.log_x);
    EXPECT_TRUE(r.plot.log_y);
    std::vector<double> yb;
    double prev_c = 0.0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const double c = cell(r, i, "C0_F");
        if (i % 6 == 0) {
            EXPECT_GT(c, prev_c);
            prev_c = c;
        } else {
            EXPECT_EQ(c, prev_c);
        }
        if (std::get<std::string>(r.rows[i][0]) == "Yb-171") yb.push_back(cell(r, i, "g0_over_2pi_Hz"));
    }
    ASSERT_EQ(yb.size(), 30u);
    for (std::size_t i = 1; i < yb.size(); ++i) EXPECT_LT(yb[i], yb[i - 1]);
}

TEST(Sweep, SinglePointMatchesDirectRun) {
    const auto swept = load_config_text(R"(
scenario = "sweep"
[sweep]
scenario = "geometry"
parameter = "a"
start = "18um"
stop = "18um"
n_points = 1
[parameters]
b = "90um"
c = "45um"
)");
    const auto direct = load_config_text("scenario = \"geometry\"\na = \"18um\"\nb = \"90um\"\nc = \"45um\"\n");
    const Report rs = run_sweep(swept);
    const Report rd = run_scenario("geometry", direct.params());
    ASSERT_EQ(rs.rows.size(), rd.rows.size());
    EXPECT_EQ(rs.columns.size(), rd.columns.size());
    for (std::size_t i = 0; i < rd.rows.size(); ++i) EXPECT_EQ(rs.rows[i], rd.rows[i]);
}

TEST(Sweep, PrependsColumnWhenBaseLacksIt) {
    const auto cfg = load_config_text(R"(
scenario = "sweep"
[sweep]
scenario = "dynamics"
parameter = "delta_over_2pi"
start = "0Hz"
stop = "70kHz"
n_points = 3
[parameters]
G_over_2pi = "35kHz"
t_end = "5us"
record_every = 1000000
)");
    const Report r = run_sweep(cfg);
    EXPECT_EQ(r.columns.front().name, "delta_over_2pi_Hz");
    EXPECT_EQ(r.columns.front().provenance, plumbing);
    EXPECT_DOUBLE_EQ(std::get<double>(r.rows.front()[0]), 0.0);
    EXPECT_DOUBLE_EQ(std::get<double>(r.rows.back()[0]), 70e3);
}

TEST(Run, MetadataStamps) {
    const auto cfg = load_config_text("scenario = \"geometry\"\na = \"18um\"\n");
    const Report r = run(cfg);
    ASSERT_EQ(r.metadata.size(), 2u);
    EXPECT_EQ(r.metadata[0].second, tool_version);
    EXPECT_EQ(r.metadata[1].second, "fnv1a64:" + cfg.input_hash);
    EXPECT_EQ(run(cfg, "2026-01-01T00:00:00Z").metadata.size(), 3u);
}

TEST(Run, DomainErrorsPropagate) {
    EXPECT_THROW(run(load_config_text("scenario = \"geometry\"\na = \"-18um\"\n")), DomainError);
    EXPECT_THROW(run(load_config_text("scenario = \"coupling\"\nspecies = \"Xe-131\"\n")), NotFoundError);
    EXPECT_THROW(run(load_config_text("scenario = \"dynamics\"\nG_over_2pi = \"35kHz\"\ngamma_ion_rate = \"1kHz\"\n"
                                      "representation = \"pure\"\n")),
                 ConfigError);
}
