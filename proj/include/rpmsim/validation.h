#pragma once

#include <string>
#include <vector>

#include "rpmsim/cohort.h"

namespace rpm {

enum class EntityKind { patient, hcp, measurement, alert, response, medication_change, admission, consultation };
template <>
struct EnumNames<EntityKind> {
    static constexpr auto names = std::to_array<std::string_view>(
        {"patient", "hcp", "measurement", "alert", "response", "medication_change", "admission", "consultation"});
};

enum class ViolationKind { invariant, duplicate_id, dangling_reference, causal_order, response_state, overlap, channel };
template <>
struct EnumNames<ViolationKind> {
    static constexpr auto names = std::to_array<std::string_view>(
        {"invariant", "duplicate id", "dangling reference", "causal order", "response state", "overlap", "channel"});
};

struct Violation {
    ViolationKind kind;
    EntityKind entity;
    /// Offending entity first, then any ids it refers to.
    std::vector<std::string> ids;
    std::string message;

    bool operator==(const Violation&) const = default;
};

std::string describe(const Violation& v);

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::size_t count(ViolationKind kind) const;
    std::vector<std::string> lines() const;
};

/// Checks every type invariant and cross-entity rule. Ordered by
/// (entity kind, id); never throws.
ValidationReport validate_cohort(const Cohort& cohort);

} // namespace rpm
