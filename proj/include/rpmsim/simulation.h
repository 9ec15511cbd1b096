#pragma once

#include <set>
#include <utility>
#include <vector>

#include "rpmsim/cohort.h"

namespace rpm {

struct Roster {
    std::vector<PatientProfile> patients;
    std::vector<HcpProfile> hcps;
};

/// Persona draws. Patients cycle through the three stability classes from
/// a seeded offset; HCP 0 is always experienced and every weekday is
/// covered by at least one experienced HCP.
Roster generate_profiles(const SimulationConfig& config);

/// A medication effect ramping linearly from 0 to its magnitude over
/// onset_days starting at `start`, then held.
struct ActiveEffect {
    MedicationEffect effect;
    Date start{};
};

/// A plateau of `magnitude` (vital units) on the days [start, start + duration_days).
struct Spike {
    Vital vital = Vital::weight;
    double magnitude = 0;
    Date start{};
    int duration_days = 1;

    bool covers(Date d) const { return start <= d && d < start + std::chrono::days(duration_days); }
    bool operator==(const Spike&) const = default;
};

struct PatientState {
    PatientProfile profile;
    PerVital<double> noise_scale;
    std::vector<ActiveEffect> effects;
    std::vector<Spike> spikes;
    bool admitted = false;
};

double effect_contribution(const ActiveEffect& e, Vital vital, Date date);

/// baseline + ramped medication effects + active spikes + noise, floored
/// at a physiologic minimum. Unrounded.
double next_value(const PatientState& state, Vital vital, Date date, double noise_draw);

/// Full spike schedule of one patient over the configured duration; a pure
/// function of (seed, patient index). Empty for non-spiky personas.
std::vector<Spike> spike_schedule(const SimulationConfig& config, const PatientProfile& profile,
                                  std::size_t patient_index);

/// Reconstructs the state that drives values on `date` from the cohort's
/// event history and seed.
PatientState patient_state(const Cohort& cohort, const PatientId& id, Date date);

struct SimulateOptions {
    /// adjust_medication responses to these alerts record no MedicationChange
    /// (paired counterfactual runs).
    std::set<AlertId> suppress_medication_for;
};

/// Runs the day loop. Batch mode runs to completion; interactive mode halts
/// at the end of the first day that leaves open alerts.
Cohort simulate(const SimulationConfig& config, const SimulateOptions& options = {});
Cohort simulate(const SimulationConfig& config, Roster roster, const SimulateOptions& options = {});

struct DayReport {
    int days_run = 0;
    std::size_t new_measurements = 0;
    std::size_t new_alerts = 0;
    bool halted = false;
    bool complete = false;
    int clock_day = 0;
};

/// Interactive continuation: simulates up to `days` more days, stopping
/// early at the first day that leaves open alerts or at the end of the run.
/// Throws InvalidModeError for batch cohorts and ConflictError while
/// alerts are still open.
DayReport advance(Cohort& cohort, int days, const SimulateOptions& options = {});

/// Timestamp used for a human response recorded now in an interactive cohort.
DateTime interactive_response_time(const Cohort& cohort);

} // namespace rpm
