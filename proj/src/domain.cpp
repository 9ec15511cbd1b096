#include "rpmsim/domain.h"

#include <cmath>

#include <fmt/format.h>

namespace rpm {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::validation: return "validation";
    case ErrorKind::format: return "format";
    case ErrorKind::version: return "version";
    case ErrorKind::io: return "io";
    case ErrorKind::invalid_mode: return "invalid_mode";
    }
    return "unknown";
}

std::string_view unit_of(Vital v) {
    switch (v) {
    case Vital::weight: return "kg";
    case Vital::systolic_bp:
    case Vital::diastolic_bp: return "mmHg";
    case Vital::heart_rate: return "bpm";
    }
    return "";
}

int precision_of(Vital v) { return v == Vital::weight ? 1 : 0; }

double round_to(double value, int decimals) {
    // Integer-over-power-of-ten keeps the result identical to what strtod
    // produces for the printed decimal.
    double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

double round_for(Vital v, double value) { return round_to(value, precision_of(v)); }

std::string format_value(Vital v, double value) { return fmt::format("{:.{}f}", value, precision_of(v)); }

} // namespace rpm
