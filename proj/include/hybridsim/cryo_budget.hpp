#pragma once

// Dilution-refrigerator engineering numbers: wire conduction, Johnson-Nyquist
// noise density, attenuator cascades, stage-by-stage heat budgets, and the
// quasiparticle diffusion length of a KID absorber.

#include "hybridsim/error.hpp"
#include "hybridsim/quantities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hybridsim::cryo {

/// Mixing-chamber rule: total in-fridge load on the 100 mK stage below 10 mW.
inline constexpr double mixing_chamber_limit_w = 10e-3;
inline constexpr double mixing_chamber_rule_temperature = 100e-3;
/// Sink name for loads dumped outside the fridge (excluded from stage totals).
inline constexpr const char* outside_sink = "outside";

/// P = lambda dT A / L.
inline double conduction_load(double lambda_mean, double area, double length, double delta_T) {
    detail::require_positive(lambda_mean, "thermal conductivity");
    detail::require_positive(area, "cross-section area");
    detail::require_positive(length, "length");
    detail::require_non_negative(delta_T, "temperature difference");
    return lambda_mean * delta_T * area / length;
}

/// Johnson-Nyquist available noise power per unit bandwidth k_B T (J/Hz).
inline double thermal_noise_density(double T) {
    detail::require_non_negative(T, "temperature");
    return constants::boltzmann * T;
}

inline double db_to_factor(double db) { return std::pow(10.0, db / 10.0); }

struct Stage {
    std::string name;
    double temperature = 0.0;                                       // K
    double cooling_power = std::numeric_limits<double>::infinity(); // W
};

/// 300 K, 40 K, 4 K, still, cold plate and mixing chamber. Cooling powers are
/// typical pulse-tube dilution-fridge figures; only the 100 mK value is a
/// hard rule used by the budget check.
inline std::vector<Stage> default_stages() {
    return {
        {"300K", 300.0, std::numeric_limits<double>::infinity()},
        {"40K", 40.0, 40.0},
        {"4K", 4.0, 1.5},
        {"1K", 1.0, 30e-3},
        {"100mK", 0.1, mixing_chamber_limit_w},
        {"10mK", 0.01, 20e-6},
    };
}

struct Attenuator {
    double stage_temperature; // K
    double attenuation_db;
};

struct AttenuationResult {
    double output_noise_temperature; // K
    double total_factor;             // product of linear attenuations
    std::vector<double> dissipated;  // W per attenuator for the given input signal
};

/// Cascade of matched resistive attenuators, each thermalized at its stage:
/// T_i = T_{i-1}/A_i + T_stage_i (1 - 1/A_i).
inline AttenuationResult attenuation_chain(double input_noise_temperature, const std::vector<Attenuator>& chain,
                                           double input_signal_power = 0.0) {
    detail::require_non_negative(input_noise_temperature, "input noise temperature");
    detail::require_non_negative(input_signal_power, "input signal power");
    AttenuationResult r{input_noise_temperature, 1.0, {}};
    double signal = input_signal_power;
    for (const auto& a : chain) {
        detail::require_non_negative(a.attenuation_db, "attenuation");
        detail::require_non_negative(a.stage_temperature, "stage temperature");
        const double A = db_to_factor(a.attenuation_db);
        const double loss = 1.0 - 1.0 / A;
        r.output_noise_temperature = r.output_noise_temperature / A + a.stage_temperature * loss;
        r.total_factor *= A;
        r.dissipated.push_back(signal * loss);
        signal /= A;
    }
    return r;
}

struct BudgetItem {
    std::string source;
    double load = 0.0; // W
    std::string sink_stage;
};

struct StageTotal {
    Stage stage;
    double load = 0.0;
    double margin() const { return stage.cooling_power - load; }
    bool pass() const { return load < stage.cooling_power; }
};

struct BudgetReport {
    std::vector<StageTotal> stages; // in input order
    double outside_load = 0.0;      // W, not charged to any stage
    /// Total on the 100 mK stage (nullopt when no stage sits at 100 mK).
    std::optional<double> mixing_chamber_load;

    bool mixing_chamber_rule_pass() const {
        return !mixing_chamber_load || *mixing_chamber_load < mixing_chamber_limit_w;
    }
    bool pass() const {
        for (const auto& s : stages) {
            if (!s.pass()) return false;
        }
        return mixing_chamber_rule_pass();
    }
};

/// Sums item loads per sink stage. Temperatures must strictly decrease along
/// `stages`; every sink must name a stage or "outside".
inline BudgetReport aggregate_budget(const std::vector<BudgetItem>& items, const std::vector<Stage>& stages) {
    for (std::size_t i = 1; i < stages.size(); ++i) {
        if (!(stages[i].temperature < stages[i - 1].temperature)) {
            throw ConfigError("stage temperatures must strictly decrease (" + stages[i].name + ")");
        }
    }
    BudgetReport rep;
    std::map<std::string, std::size_t> index;
    for (const auto& s : stages) {
        if (!index.emplace(s.name, rep.stages.size()).second) {
            throw ConfigError("duplicate stage name '" + s.name + "'");
        }
        rep.stages.push_back({s, 0.0});
    }
    // Loads are summed in sorted order so totals do not depend on item order.
    std::vector<std::vector<double>> per_stage(stages.size());
    std::vector<double> outside;
    for (const auto& it : items) {
        if (!(it.load >= 0.0)) throw DomainError("negative load for '" + it.source + "'");
        if (it.sink_stage == outside_sink) {
            outside.push_back(it.load);
            continue;
        }
        auto f = index.find(it.sink_stage);
        if (f == index.end()) {
            throw ConfigError("budget item '" + it.source + "' sinks to unknown stage '" + it.sink_stage + "'");
        }
        per_stage[f->second].push_back(it.load);
    }
    auto sorted_sum = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        return std::accumulate(v.begin(), v.end(), 0.0);
    };
    for (std::size_t i = 0; i < stages.size(); ++i) rep.stages[i].load = sorted_sum(per_stage[i]);
    rep.outside_load = sorted_sum(outside);
    for (const auto& s : rep.stages) {
        if (std::abs(s.stage.temperature - mixing_chamber_rule_temperature) < 1e-9) {
            rep.mixing_chamber_load = s.load;
        }
    }
    return rep;
}

/// l = sqrt(D tau).
inline double quasiparticle_diffusion_length(double diffusion, double tau_qp) {
    detail::require_positive(diffusion, "diffusion constant");
    detail::require_non_negative(tau_qp, "quasiparticle lifetime");
    return std::sqrt(diffusion * tau_qp);
}

} // namespace hybridsim::cryo
