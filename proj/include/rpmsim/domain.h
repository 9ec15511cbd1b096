#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rpmsim/errors.h"
#include "rpmsim/ids.h"
#include "rpmsim/time.h"

namespace rpm {

enum class Vital { weight, systolic_bp, diastolic_bp, heart_rate };
enum class StabilityClass { stable, fluctuating, spiky };
enum class HomeSupport { high, low };
enum class Role { nurse, physician };
enum class Experience { novice, experienced };
enum class DocStyle { terse, verbose };
enum class AlertRule { threshold_low, threshold_high, abrupt_change };
enum class Severity { mild, high };
enum class AlertStatus { open, resolved };
enum class Action { call_patient, adjust_medication, contact_colleague, dismiss };
enum class ChangeKind { start, stop, increase, decrease };
enum class Direction { up, down };
enum class Channel { phone, in_person };
enum class Mode { batch, interactive };

template <class E>
struct EnumNames;

#define RPM_ENUM_NAMES(E, ...)                                                    \
    template <>                                                                   \
    struct EnumNames<E> {                                                         \
        static constexpr auto names = std::to_array<std::string_view>({__VA_ARGS__}); \
    }

RPM_ENUM_NAMES(Vital, "weight", "systolic_bp", "diastolic_bp", "heart_rate");
RPM_ENUM_NAMES(StabilityClass, "stable", "fluctuating", "spiky");
RPM_ENUM_NAMES(HomeSupport, "high", "low");
RPM_ENUM_NAMES(Role, "nurse", "physician");
RPM_ENUM_NAMES(Experience, "novice", "experienced");
RPM_ENUM_NAMES(DocStyle, "terse", "verbose");
RPM_ENUM_NAMES(AlertRule, "threshold_low", "threshold_high", "abrupt_change");
RPM_ENUM_NAMES(Severity, "mild", "high");
RPM_ENUM_NAMES(AlertStatus, "open", "resolved");
RPM_ENUM_NAMES(Action, "call_patient", "adjust_medication", "contact_colleague", "dismiss");
RPM_ENUM_NAMES(ChangeKind, "start", "stop", "increase", "decrease");
RPM_ENUM_NAMES(Direction, "up", "down");
RPM_ENUM_NAMES(Channel, "phone", "in_person");
RPM_ENUM_NAMES(Mode, "batch", "interactive");
RPM_ENUM_NAMES(Weekday, "mon", "tue", "wed", "thu", "fri", "sat", "sun");

#undef RPM_ENUM_NAMES

template <class E>
constexpr std::string_view to_string(E e) {
    return EnumNames<E>::names[static_cast<std::size_t>(e)];
}

template <class E>
std::optional<E> try_parse_enum(std::string_view text) {
    const auto& names = EnumNames<E>::names;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == text) return static_cast<E>(i);
    return std::nullopt;
}

template <class E>
E parse_enum(std::string_view text) {
    if (auto e = try_parse_enum<E>(text)) return *e;
    throw FormatError("unknown value '" + std::string(text) + "'");
}

inline constexpr std::array<Vital, 4> kAllVitals{Vital::weight, Vital::systolic_bp, Vital::diastolic_bp,
                                                 Vital::heart_rate};

std::string_view unit_of(Vital v);
/// Decimal places used for values of this vital everywhere (1 for kg, 0 otherwise).
int precision_of(Vital v);
double round_to(double value, int decimals);
double round_for(Vital v, double value);
std::string format_value(Vital v, double value);

/// Fixed-size table indexed by vital.
template <class T>
struct PerVital {
    std::array<T, 4> values{};

    T& operator[](Vital v) { return values[static_cast<std::size_t>(v)]; }
    const T& operator[](Vital v) const { return values[static_cast<std::size_t>(v)]; }
    bool operator==(const PerVital&) const = default;
};

struct Range {
    double low = 0;
    double high = 0;
    bool operator==(const Range&) const = default;
};

struct PatientProfile {
    PatientId id;
    std::string display_name;
    int age = 0;
    std::set<std::string> comorbidities;
    StabilityClass stability_class = StabilityClass::stable;
    double adherence = 1.0;
    HomeSupport home_support = HomeSupport::high;
    Date enrollment_date{};
    PerVital<double> baselines;
    PerVital<Range> thresholds;

    bool operator==(const PatientProfile&) const = default;
};

struct HcpProfile {
    HcpId id;
    std::string display_name;
    Role role = Role::nurse;
    Experience experience = Experience::experienced;
    double confidence = 1.0;
    DocStyle doc_style = DocStyle::terse;
    std::set<Weekday> duty_days;

    bool on_duty(Weekday day) const { return duty_days.contains(day); }
    bool operator==(const HcpProfile&) const = default;
};

struct Measurement {
    MeasurementId id;
    PatientId patient_id;
    DateTime timestamp{};
    Vital vital = Vital::weight;
    double value = 0;
    std::optional<std::string> comment;

    bool operator==(const Measurement&) const = default;
};

struct Alert {
    AlertId id;
    PatientId patient_id;
    MeasurementId measurement_id;
    std::set<AlertRule> rules;
    Severity severity = Severity::mild;
    DateTime created_at{};
    AlertStatus status = AlertStatus::open;
    std::optional<HcpId> assigned_hcp_id;

    bool operator==(const Alert&) const = default;
};

struct AlertResponse {
    ResponseId id;
    AlertId alert_id;
    HcpId hcp_id;
    Action action = Action::dismiss;
    std::string note;
    DateTime timestamp{};

    bool operator==(const AlertResponse&) const = default;
};

inline bool is_terminal(Action a) { return a != Action::contact_colleague; }

struct MedicationEffect {
    Vital vital = Vital::weight;
    Direction direction = Direction::down;
    double magnitude = 0;
    int onset_days = 1;

    bool operator==(const MedicationEffect&) const = default;
};

struct MedicationChange {
    MedicationChangeId id;
    PatientId patient_id;
    std::string drug;
    ChangeKind change = ChangeKind::increase;
    DateTime timestamp{};
    MedicationEffect effect;

    bool operator==(const MedicationChange&) const = default;
};

/// Hospital stay covering the days [start, end).
struct Admission {
    AdmissionId id;
    PatientId patient_id;
    Date start{};
    Date end{};
    std::string reason;

    bool covers(Date d) const { return start <= d && d < end; }
    bool operator==(const Admission&) const = default;
};

struct Consultation {
    ConsultationId id;
    PatientId patient_id;
    HcpId hcp_id;
    DateTime timestamp{};
    Channel channel = Channel::phone;
    std::string text;

    bool operator==(const Consultation&) const = default;
};

enum class LedgerKind { injected_duplicate, injected_irrelevant_comment };
template <>
struct EnumNames<LedgerKind> {
    static constexpr auto names = std::to_array<std::string_view>({"injected_duplicate", "injected_irrelevant_comment"});
};

/// Provenance of one messiness injection. Not part of the simulated world.
struct TruthLedgerEntry {
    LedgerKind kind = LedgerKind::injected_duplicate;
    std::optional<MeasurementId> original_id;
    MeasurementId injected_id;

    bool operator==(const TruthLedgerEntry&) const = default;
};

} // namespace rpm
