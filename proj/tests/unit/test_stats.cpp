#include <doctest.h>

#include <numeric>

#include "rpmsim/messiness.h"
#include "rpmsim/simulation.h"
#include "rpmsim/stats.h"
#include "support.h"

using namespace rpm;
using rpm::testing::hand_cohort;
using rpm::testing::make_measurement;

TEST_SUITE("stats") {

TEST_CASE("default cohort alert rate sits in the reference band") {
    Cohort c = simulate(default_config());
    auto s = compute_stats(c);
    CHECK(s.alert_rate >= 0.10);
    CHECK(s.alert_rate <= 0.16);
    CHECK(s.alert_rate == doctest::Approx(static_cast<double>(c.alerts.size()) / c.measurements.size()));
}

TEST_CASE("injected duplicates are not counted") {
    SimulationConfig cfg = rpm::testing::small_config(2, 60);
    cfg.messiness.p_duplicate = 0.5;
    Cohort c = simulate(cfg);
    Cohort messy = inject_messiness(c);
    REQUIRE(messy.measurements.size() > c.measurements.size());
    auto a = compute_stats(c);
    auto b = compute_stats(messy);
    CHECK(a.measurement_count == b.measurement_count);
    CHECK(a.alert_rate == b.alert_rate);
}

TEST_CASE("empty cohort has zero counts for every actor") {
    Cohort c = hand_cohort();
    auto s = compute_stats(c);
    CHECK(s.measurement_count == 0);
    CHECK(s.alert_count == 0);
    CHECK(s.response_count == 0);
    CHECK(s.alert_rate == 0);
    CHECK(s.responses_per_hcp.at("H01") == 0);
    CHECK(s.alerts_per_patient.at("P001") == 0);
    CHECK(s.admission_days_per_patient.at("P001") == 0);
    CHECK(render_table(s).find("alert_rate    0.0000") != std::string::npos);
}

TEST_CASE("per-actor counts add up") {
    Cohort c = simulate(default_config());
    auto s = compute_stats(c);
    auto sum = [](const auto& m) {
        return std::accumulate(m.begin(), m.end(), std::size_t{0}, [](std::size_t a, const auto& kv) {
            return a + static_cast<std::size_t>(kv.second);
        });
    };
    CHECK(sum(s.responses_per_hcp) == s.response_count);
    CHECK(sum(s.alerts_per_patient) == s.alert_count);
    auto j = to_json(s);
    CHECK(j["alert_count"] == s.alert_count);
    CHECK(j["responses_per_hcp"].size() == c.hcps.size());
}

TEST_CASE("summary of a patient without events") {
    Cohort c = hand_cohort();
    auto s = summarize_patient(c, PatientId::make(1));
    CHECK(s.open_alerts == 0);
    CHECK(s.admissions == 0);
    CHECK(s.medication_changes == 0);
    CHECK_FALSE(s.last_contact);
    for (auto v : kAllVitals) {
        CHECK_FALSE(s.vitals[v].latest);
        CHECK_FALSE(s.vitals[v].trend_7d);
    }
    auto j = to_json(s);
    CHECK(j["vitals"]["weight"]["trend_7d"].is_null());
    CHECK_THROWS_AS(summarize_patient(c, PatientId::make(5)), NotFoundError);
}

TEST_CASE("summary trend compares against the start of the 7-day window") {
    Cohort c = hand_cohort();
    Date d0 = c.config.start_date;
    double delta = c.config.abrupt_delta[Vital::weight];
    std::uint64_t seq = 1;
    for (int day = 0; day < 10; ++day)
        c.measurements.push_back(make_measurement(seq++, at(d0 + std::chrono::days(day), 7), Vital::weight, 80.0 + day * 0.2));
    c.measurements.push_back(make_measurement(seq++, at(d0, 7), Vital::heart_rate, 70));
    c.consultations.push_back(Consultation{ConsultationId::make(1), PatientId::make(1), HcpId::make(1),
                                           at(d0 + std::chrono::days(4), 13), Channel::phone, "call"});
    auto s = summarize_patient(c, PatientId::make(1));
    CHECK(*s.vitals[Vital::weight].latest == doctest::Approx(81.8));
    // days 3..9: 80.6 -> 81.8
    CHECK(*s.vitals[Vital::weight].trend_7d == (1.2 < 0.5 * delta ? Trend::flat : Trend::up));
    CHECK(s.vitals[Vital::heart_rate].latest);
    CHECK_FALSE(s.vitals[Vital::heart_rate].trend_7d);
    CHECK(s.last_contact == d0 + std::chrono::days(4));
    CHECK(s.last_contact_channel == Channel::phone);

    c.measurements.push_back(make_measurement(seq++, at(d0 + std::chrono::days(10), 7), Vital::weight, 81.0));
    s = summarize_patient(c, PatientId::make(1));
    // days 4..10: 80.8 -> 81.0
    CHECK(*s.vitals[Vital::weight].trend_7d == Trend::flat);
}

}
