#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "rpmsim/cohort.h"
#include "rpmsim/simulation.h"

namespace rpm {

struct CohortHandle {
    std::string cohort_id;
    Mode mode = Mode::batch;
    int clock_day = 0;
    bool complete = false;
    std::size_t open_alert_count = 0;
};

nlohmann::json to_json(const CohortHandle& handle);
nlohmann::json to_json(const DayReport& report);

/// In-memory cohort store behind the HTTP API. Reads of one cohort run
/// concurrently; mutations of one cohort are serialized. Projection
/// results are plain JSON values.
class CohortService {
public:
    CohortHandle create_cohort(const nlohmann::json& config_overrides);
    CohortHandle create_cohort(const SimulationConfig& config);
    CohortHandle add_cohort(Cohort cohort);

    CohortHandle handle(const std::string& cohort_id) const;
    DayReport advance(const std::string& cohort_id, int days);
    /// status: "open", "resolved" or empty for all.
    nlohmann::json list_alerts(const std::string& cohort_id, const std::string& status) const;
    nlohmann::json submit_response(const std::string& cohort_id, const std::string& alert_id,
                                   const std::string& hcp_id, const std::string& action, const std::string& note);
    nlohmann::json patients(const std::string& cohort_id) const;
    nlohmann::json timeline(const std::string& cohort_id, const std::string& patient_id) const;
    nlohmann::json summary(const std::string& cohort_id, const std::string& patient_id) const;
    nlohmann::json stats(const std::string& cohort_id) const;
    /// Bundle (with export-time messiness) as a tar archive.
    std::string export_archive(const std::string& cohort_id) const;

    Cohort snapshot(const std::string& cohort_id) const;

private:
    struct Entry {
        mutable std::shared_mutex mutex;
        Cohort cohort;
    };

    std::shared_ptr<Entry> find(const std::string& cohort_id) const;
    CohortHandle make_handle(const std::string& id, const Cohort& cohort) const;

    mutable std::shared_mutex store_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> cohorts_;
    std::uint64_t next_id_ = 1;
};


} // namespace rpm
