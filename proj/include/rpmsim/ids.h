#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

#include <fmt/format.h>

namespace rpm {

/// Opaque entity identifier. Values look like `P003` or `M0001234`: a
/// kind prefix followed by a zero-padded sequence number. Ordering is
/// numeric-aware (shorter strings first) so sorting by id matches creation
/// order even once the padding overflows.
template <class Tag>
struct Id {
    std::string value;

    Id() = default;
    explicit Id(std::string v) : value(std::move(v)) {}

    static Id make(std::uint64_t seq) { return Id(fmt::format("{}{:0{}}", Tag::prefix, seq, Tag::width)); }

    bool empty() const { return value.empty(); }

    /// Trailing decimal digits of the id, 0 if none.
    std::uint64_t sequence() const {
        std::uint64_t n = 0;
        std::size_t i = value.size();
        while (i > 0 && value[i - 1] >= '0' && value[i - 1] <= '9') --i;
        for (; i < value.size(); ++i) n = n * 10 + static_cast<std::uint64_t>(value[i] - '0');
        return n;
    }

    friend bool operator==(const Id&, const Id&) = default;
    friend std::strong_ordering operator<=>(const Id& a, const Id& b) {
        if (auto c = a.value.size() <=> b.value.size(); c != 0) return c;
        int c = a.value.compare(b.value);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
};

struct PatientTag { static constexpr const char* prefix = "P"; static constexpr int width = 3; };
struct HcpTag { static constexpr const char* prefix = "H"; static constexpr int width = 2; };
struct MeasurementTag { static constexpr const char* prefix = "M"; static constexpr int width = 6; };
struct AlertTag { static constexpr const char* prefix = "A"; static constexpr int width = 5; };
struct ResponseTag { static constexpr const char* prefix = "R"; static constexpr int width = 5; };
struct MedicationTag { static constexpr const char* prefix = "MC"; static constexpr int width = 4; };
struct AdmissionTag { static constexpr const char* prefix = "AD"; static constexpr int width = 4; };
struct ConsultationTag { static constexpr const char* prefix = "C"; static constexpr int width = 5; };

using PatientId = Id<PatientTag>;
using HcpId = Id<HcpTag>;
using MeasurementId = Id<MeasurementTag>;
using AlertId = Id<AlertTag>;
using ResponseId = Id<ResponseTag>;
using MedicationChangeId = Id<MedicationTag>;
using AdmissionId = Id<AdmissionTag>;
using ConsultationId = Id<ConsultationTag>;

} // namespace rpm

template <class Tag>
struct std::hash<rpm::Id<Tag>> {
    std::size_t operator()(const rpm::Id<Tag>& id) const noexcept { return std::hash<std::string>{}(id.value); }
};
