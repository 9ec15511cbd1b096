#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "rpmsim/cohort.h"

namespace rpm::testing {

/// Scratch directory removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "t") {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("rpmsim-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Small config that still produces alerts, responses and medication changes quickly.
inline SimulationConfig small_config(std::uint64_t seed = 7, int days = 60) {
    SimulationConfig c = default_config();
    c.n_patients = 4;
    c.n_hcps = 3;
    c.duration_days = days;
    c.seed = seed;
    return c;
}

/// One patient, one HCP on duty every weekday, nothing random left in the values.
inline Cohort hand_cohort() {
    Cohort c;
    c.config = default_config();
    c.config.n_patients = 1;
    c.config.n_hcps = 1;
    PatientProfile p;
    p.id = PatientId::make(1);
    p.display_name = "Anna Visser";
    p.age = 74;
    p.enrollment_date = c.config.start_date;
    p.baselines[Vital::weight] = 80.0;
    p.baselines[Vital::systolic_bp] = 125;
    p.baselines[Vital::diastolic_bp] = 75;
    p.baselines[Vital::heart_rate] = 70;
    p.thresholds[Vital::weight] = {60.0, 85.0};
    p.thresholds[Vital::systolic_bp] = {100, 150};
    p.thresholds[Vital::diastolic_bp] = {55, 95};
    p.thresholds[Vital::heart_rate] = {50, 95};
    c.patients.push_back(p);
    HcpProfile h;
    h.id = HcpId::make(1);
    h.display_name = "Eva Jacobs";
    h.experience = Experience::experienced;
    h.confidence = 0.8;
    h.doc_style = DocStyle::terse;
    h.duty_days = {Weekday::monday, Weekday::tuesday, Weekday::wednesday, Weekday::thursday, Weekday::friday};
    c.hcps.push_back(h);
    return c;
}

inline Measurement make_measurement(std::uint64_t seq, DateTime ts, Vital v, double value,
                                    PatientId patient = PatientId::make(1)) {
    return Measurement{MeasurementId::make(seq), std::move(patient), ts, v, value, std::nullopt};
}

} // namespace rpm::testing
