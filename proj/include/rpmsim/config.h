#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpmsim/domain.h"

namespace rpm {

inline constexpr int kConfigVersion = 1;

struct SpikeParams {
    double rate_per_30_days = 0;
    /// Spike height in multiples of the affected vital's abrupt delta.
    double magnitude_min = 0;
    double magnitude_max = 0;
    int duration_min = 1;
    int duration_max = 1;

    bool operator==(const SpikeParams&) const = default;
};

struct AdmissionPolicy {
    int trigger_high_alerts = 3;
    int window_days = 7;
    int stay_min = 3;
    int stay_max = 10;

    bool operator==(const AdmissionPolicy&) const = default;
};

struct MessinessParams {
    double p_duplicate = 0;
    double p_irrelevant_comment = 0;
    double p_situated_comment = 0;

    bool operator==(const MessinessParams&) const = default;
};

/// Everything a simulation run depends on. `default_config()` carries the
/// calibrated values; `config/default.conf` documents every key.
struct SimulationConfig {
    int config_version = kConfigVersion;
    int n_patients = 10;
    int n_hcps = 6;
    int duration_days = 180;
    std::uint64_t seed = 42;
    Mode mode = Mode::batch;
    Date start_date = make_date(2024, 1, 1);
    std::array<PerVital<double>, 3> noise_amplitude{};  // indexed by StabilityClass
    SpikeParams spike;
    PerVital<double> abrupt_delta;
    int abrupt_window_days = 3;
    PerVital<double> escalation_margin;
    AdmissionPolicy admission_policy;
    double admission_adherence_multiplier = 0.1;
    MessinessParams messiness;

    const PerVital<double>& noise_for(StabilityClass c) const { return noise_amplitude[static_cast<std::size_t>(c)]; }
    PerVital<double>& noise_for(StabilityClass c) { return noise_amplitude[static_cast<std::size_t>(c)]; }

    bool operator==(const SimulationConfig&) const = default;
};

SimulationConfig default_config();

/// Field-level problems, each prefixed with the offending key. Empty if valid.
std::vector<std::string> config_problems(const SimulationConfig& config);

nlohmann::json config_to_json(const SimulationConfig& config);

/// Overlays `overrides` (any subset of the keys produced by config_to_json)
/// onto `base`. Throws ValidationError naming every bad field.
SimulationConfig config_from_json(const nlohmann::json& overrides, const SimulationConfig& base = default_config());

/// Parses the plain-text `key = value` format (dotted keys address nested
/// fields, `#` starts a comment). `config_version` is mandatory.
SimulationConfig parse_config_text(const std::string& text, const SimulationConfig& base = default_config());
SimulationConfig load_config_file(const std::filesystem::path& path, const SimulationConfig& base = default_config());

} // namespace rpm
