#include <doctest.h>

#include <atomic>
#include <thread>

#include "rpmsim/service.h"
#include "rpmsim/stats.h"
#include "rpmsim/timeline.h"
#include "support.h"

using namespace rpm;
using nlohmann::json;

namespace {

json interactive_overrides(std::uint64_t seed = 5) {
    return {{"n_patients", 4}, {"n_hcps", 3}, {"duration_days", 40}, {"seed", seed}, {"mode", "interactive"}};
}

void dismiss_all(CohortService& svc, const std::string& id) {
    for (const auto& a : svc.list_alerts(id, "open")) {
        std::string hcp = a["assigned_hcp_id"].is_null() ? "H01" : a["assigned_hcp_id"].get<std::string>();
        svc.submit_response(id, a["id"], hcp, "dismiss", "");
    }
}

} // namespace

TEST_SUITE("service") {

TEST_CASE("batch cohort runs to completion") {
    CohortService svc;
    auto h = svc.create_cohort(json::object());
    CHECK(h.cohort_id == "c1");
    CHECK(h.mode == Mode::batch);
    CHECK(h.clock_day == 180);
    CHECK(h.complete);
    Cohort c = svc.snapshot("c1");
    CHECK(h.open_alert_count == open_alert_count(c));
    // only stragglers from the last days stay open
    for (const auto& a : c.alerts)
        if (a.status == AlertStatus::open) CHECK(date_of(a.created_at) >= c.config.start_date + std::chrono::days(173));
    CHECK(svc.create_cohort(json::object()).cohort_id == "c2");
}

TEST_CASE("interactive cohort halts at the first day with an open alert") {
    CohortService svc;
    auto h = svc.create_cohort(interactive_overrides());
    CHECK(h.mode == Mode::interactive);
    CHECK(h.clock_day <= 40);
    CHECK(h.open_alert_count > 0);
    CHECK_FALSE(h.complete);
    CHECK_THROWS_AS(svc.advance(h.cohort_id, 1), ConflictError);
}

TEST_CASE("invalid config and unknown ids") {
    CohortService svc;
    try {
        svc.create_cohort(json{{"n_patients", -1}});
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.details().at(0).find("n_patients") == 0);
    }
    CHECK_THROWS_AS(svc.handle("c9"), NotFoundError);
    auto h = svc.create_cohort(interactive_overrides());
    CHECK_THROWS_AS(svc.timeline(h.cohort_id, "P999"), NotFoundError);
    CHECK_THROWS_AS(svc.submit_response(h.cohort_id, "A99999", "H01", "dismiss", ""), NotFoundError);
    CHECK_THROWS_AS(svc.submit_response(h.cohort_id, "A00001", "H01", "escalate", ""), ValidationError);
    CHECK_THROWS_AS(svc.list_alerts(h.cohort_id, "pending"), ValidationError);
    CHECK_THROWS_AS(svc.advance(h.cohort_id, 0), ValidationError);
}

TEST_CASE("advance is refused in batch mode") {
    CohortService svc;
    auto h = svc.create_cohort(json{{"duration_days", 10}});
    CHECK_THROWS_AS(svc.advance(h.cohort_id, 1), InvalidModeError);
}

TEST_CASE("respond, advance, clamp at the end") {
    CohortService svc;
    auto h = svc.create_cohort(interactive_overrides());
    const std::string id = h.cohort_id;

    auto open = svc.list_alerts(id, "open");
    REQUIRE_FALSE(open.empty());
    auto first = open[0];
    CHECK(first.contains("patient"));
    CHECK(first["measurement"].contains("thresholds"));
    auto r = svc.submit_response(id, first["id"], "H01", "dismiss", "looks fine");
    CHECK(r["action"] == "dismiss");
    CHECK(r["note"] == "looks fine");
    CHECK(r["alert"]["status"] == "resolved");
    CHECK_THROWS_AS(svc.submit_response(id, first["id"], "H01", "dismiss", ""), ConflictError);

    auto resolved = svc.list_alerts(id, "resolved");
    CHECK(resolved.size() == 1);
    for (const auto& a : svc.list_alerts(id, "open")) CHECK(a["status"] == "open");

    int guard = 0;
    while (!svc.handle(id).complete && guard++ < 200) {
        dismiss_all(svc, id);
        int before = svc.handle(id).clock_day;
        auto report = svc.advance(id, 500);
        CHECK(report.clock_day == before + report.days_run);
        CHECK(report.clock_day <= 40);
    }
    CHECK(svc.handle(id).clock_day == 40);
    CHECK(svc.handle(id).complete);
}

TEST_CASE("adjust_medication through the service shows up downstream") {
    CohortService svc;
    auto h = svc.create_cohort(interactive_overrides(9));
    auto open = svc.list_alerts(h.cohort_id, "open");
    REQUIRE_FALSE(open.empty());
    svc.submit_response(h.cohort_id, open[0]["id"], "H01", "adjust_medication", "");
    Cohort c = svc.snapshot(h.cohort_id);
    REQUIRE(c.medication_changes.size() == 1);
    auto pid = open[0]["patient_id"].get<std::string>();
    CHECK(svc.summary(h.cohort_id, pid)["medication_changes"] == 1);
    bool in_timeline = false;
    for (const auto& ev : svc.timeline(h.cohort_id, pid)) in_timeline |= ev["kind"] == "medication_change";
    CHECK(in_timeline);
}

TEST_CASE("projections are pure and delegate to the library") {
    CohortService svc;
    auto h = svc.create_cohort(json{{"n_patients", 3}, {"duration_days", 60}, {"seed", 3}});
    const auto& id = h.cohort_id;
    CHECK(svc.list_alerts(id, "").dump() == svc.list_alerts(id, "").dump());
    CHECK(svc.patients(id).dump() == svc.patients(id).dump());
    CHECK(svc.stats(id).dump() == svc.stats(id).dump());
    CHECK(svc.export_archive(id) == svc.export_archive(id));

    Cohort c = svc.snapshot(id);
    CHECK(svc.stats(id) == to_json(compute_stats(c)));
    CHECK(svc.summary(id, "P001") == to_json(summarize_patient(c, PatientId("P001"))));
    auto tl = svc.timeline(id, "P002");
    auto events = patient_timeline(c, PatientId("P002"));
    REQUIRE(tl.size() == events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(tl[i]["id"] == events[i].id);
        CHECK(tl[i]["kind"] == std::string(to_string(events[i].kind)));
        CHECK(tl[i]["timestamp"] == format_datetime(events[i].timestamp));
    }
    auto patients = svc.patients(id);
    CHECK(patients.size() == 3);
    CHECK(patients[0]["summary"]["patient_id"] == "P001");

    auto alerts = svc.list_alerts(id, "");
    for (std::size_t i = 1; i < alerts.size(); ++i)
        CHECK(alerts[i - 1]["created_at"].get<std::string>() <= alerts[i]["created_at"].get<std::string>());
}

TEST_CASE("empty cohort lists nothing") {
    CohortService svc;
    auto h = svc.create_cohort(json{{"duration_days", 0}});
    CHECK(svc.list_alerts(h.cohort_id, "").empty());
    CHECK(svc.stats(h.cohort_id)["alert_count"] == 0);
}

TEST_CASE("concurrent responses to one alert: first wins") {
    CohortService svc;
    auto h = svc.create_cohort(interactive_overrides());
    auto alert_id = svc.list_alerts(h.cohort_id, "open")[0]["id"].get<std::string>();
    std::atomic<int> ok{0}, conflicts{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&] {
            try {
                svc.submit_response(h.cohort_id, alert_id, "H01", "dismiss", "");
                ++ok;
            } catch (const ConflictError&) {
                ++conflicts;
            }
        });
    for (int i = 0; i < 4; ++i)
        threads.emplace_back([&] {
            for (int k = 0; k < 20; ++k) (void)svc.list_alerts(h.cohort_id, "");
        });
    for (auto& t : threads) t.join();
    CHECK(ok == 1);
    CHECK(conflicts == 7);
    Cohort c = svc.snapshot(h.cohort_id);
    CHECK(c.responses.size() == 1);
}

}
