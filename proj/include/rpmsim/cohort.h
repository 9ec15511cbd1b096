#pragma once

#include <vector>

#include "rpmsim/config.h"
#include "rpmsim/domain.h"

namespace rpm {

/// One complete simulated world. Collections are kept in canonical order
/// (see canonicalize) so that equal worlds compare equal.
struct Cohort {
    SimulationConfig config;
    std::vector<PatientProfile> patients;
    std::vector<HcpProfile> hcps;
    std::vector<Measurement> measurements;
    std::vector<Alert> alerts;
    std::vector<AlertResponse> responses;
    std::vector<MedicationChange> medication_changes;
    std::vector<Admission> admissions;
    std::vector<Consultation> consultations;
    std::vector<TruthLedgerEntry> truth_ledger;
    /// Number of simulated days; the last simulated date is start_date + clock_day - 1.
    int clock_day = 0;

    bool operator==(const Cohort&) const = default;
};

/// Sorts profiles by id and event collections by (timestamp, id).
void canonicalize(Cohort& cohort);

bool is_complete(const Cohort& cohort);
std::size_t open_alert_count(const Cohort& cohort);

const PatientProfile* find_patient(const Cohort& cohort, const PatientId& id);
const HcpProfile* find_hcp(const Cohort& cohort, const HcpId& id);
const Measurement* find_measurement(const Cohort& cohort, const MeasurementId& id);
Alert* find_alert(Cohort& cohort, const AlertId& id);
const Alert* find_alert(const Cohort& cohort, const AlertId& id);

/// Ids of measurements injected as duplicates by the messiness pass.
std::set<MeasurementId> injected_duplicate_ids(const Cohort& cohort);

} // namespace rpm
