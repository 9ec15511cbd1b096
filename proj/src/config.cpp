#include "rpmsim/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace rpm {

using nlohmann::json;

SimulationConfig default_config() {
    SimulationConfig c;
    // Calibration constants; together they put the alert rate near 13% of
    // measurements for the default 10-patient, 180-day cohort.
    c.noise_for(StabilityClass::stable) = {{0.45, 5.0, 3.5, 3.5}};
    c.noise_for(StabilityClass::fluctuating) = {{0.9, 10.0, 6.5, 7.0}};
    c.noise_for(StabilityClass::spiky) = {{0.6, 6.5, 4.5, 4.5}};
    c.spike = SpikeParams{1.5, 1.2, 2.2, 2, 5};
    c.abrupt_delta = {{1.2, 13.0, 9.0, 10.0}};
    c.abrupt_window_days = 3;
    c.escalation_margin = {{1.5, 12.0, 8.0, 10.0}};
    c.admission_policy = AdmissionPolicy{3, 7, 3, 10};
    c.admission_adherence_multiplier = 0.1;
    c.messiness = MessinessParams{0.03, 0.02, 0.05};
    return c;
}

std::vector<std::string> config_problems(const SimulationConfig& c) {
    std::vector<std::string> out;
    auto prob = [&](std::string_view key, double p) {
        if (!(p >= 0.0 && p <= 1.0)) out.push_back(fmt::format("{}: must be a probability in [0, 1]", key));
    };
    auto nonneg = [&](std::string_view key, double v) {
        if (!(v >= 0.0)) out.push_back(fmt::format("{}: must be >= 0", key));
    };
    if (c.config_version != kConfigVersion)
        out.push_back(fmt::format("config_version: unsupported version {}", c.config_version));
    nonneg("n_patients", c.n_patients);
    nonneg("n_hcps", c.n_hcps);
    nonneg("duration_days", c.duration_days);
    if (c.n_patients > 0 && c.n_hcps == 0 && c.duration_days > 0)
        out.push_back("n_hcps: at least one HCP is needed to simulate patients");
    for (auto cls : {StabilityClass::stable, StabilityClass::fluctuating, StabilityClass::spiky})
        for (auto v : kAllVitals)
            nonneg(fmt::format("noise.{}.{}", to_string(cls), to_string(v)), c.noise_for(cls)[v]);
    nonneg("spike.rate_per_30_days", c.spike.rate_per_30_days);
    if (c.spike.rate_per_30_days > 30.0) out.push_back("spike.rate_per_30_days: must be <= 30");
    nonneg("spike.magnitude_min", c.spike.magnitude_min);
    if (c.spike.magnitude_max < c.spike.magnitude_min) out.push_back("spike.magnitude_max: must be >= magnitude_min");
    if (c.spike.duration_min < 1) out.push_back("spike.duration_min: must be >= 1");
    if (c.spike.duration_max < c.spike.duration_min) out.push_back("spike.duration_max: must be >= duration_min");
    for (auto v : kAllVitals) {
        if (!(c.abrupt_delta[v] > 0)) out.push_back(fmt::format("abrupt_delta.{}: must be > 0", to_string(v)));
        nonneg(fmt::format("escalation_margin.{}", to_string(v)), c.escalation_margin[v]);
    }
    if (c.abrupt_window_days < 1) out.push_back("abrupt_window_days: must be >= 1");
    const auto& ap = c.admission_policy;
    if (ap.trigger_high_alerts < 1) out.push_back("admission_policy.trigger_high_alerts: must be >= 1");
    if (ap.window_days < 1) out.push_back("admission_policy.window_days: must be >= 1");
    if (ap.stay_min < 1) out.push_back("admission_policy.stay_min: must be >= 1");
    if (ap.stay_max < ap.stay_min) out.push_back("admission_policy.stay_max: must be >= stay_min");
    prob("admission_adherence_multiplier", c.admission_adherence_multiplier);
    prob("messiness.p_duplicate", c.messiness.p_duplicate);
    prob("messiness.p_irrelevant_comment", c.messiness.p_irrelevant_comment);
    prob("messiness.p_situated_comment", c.messiness.p_situated_comment);
    return out;
}

namespace {

json vitals_json(const PerVital<double>& values) {
    json j = json::object();
    for (auto v : kAllVitals) j[std::string(to_string(v))] = values[v];
    return j;
}

/// Reads fields out of a merged JSON document, collecting every problem.
class Reader {
public:
    explicit Reader(const json& root) : root_(root) {}

    const json* at(const std::string& path) {
        const json* node = &root_;
        std::size_t pos = 0;
        while (pos <= path.size()) {
            auto dot = path.find('.', pos);
            auto key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
            if (!node->is_object() || !node->contains(key)) {
                problems.push_back(path + ": missing");
                return nullptr;
            }
            node = &(*node)[key];
            if (dot == std::string::npos) break;
            pos = dot + 1;
        }
        return node;
    }

    void count(const std::string& path, int& out) {
        if (auto* n = at(path)) {
            if (n->is_number_integer() && n->get<std::int64_t>() >= 0 && n->get<std::int64_t>() <= 1'000'000'000)
                out = static_cast<int>(n->get<std::int64_t>());
            else
                problems.push_back(path + ": expected a non-negative integer count");
        }
    }

    void integer(const std::string& path, int& out) {
        if (auto* n = at(path)) {
            if (n->is_number_integer() && n->get<std::int64_t>() >= -1'000'000'000 &&
                n->get<std::int64_t>() <= 1'000'000'000)
                out = static_cast<int>(n->get<std::int64_t>());
            else
                problems.push_back(path + ": expected an integer");
        }
    }

    void number(const std::string& path, double& out) {
        if (auto* n = at(path)) {
            if (n->is_number())
                out = n->get<double>();
            else
                problems.push_back(path + ": expected a number");
        }
    }

    void seed(const std::string& path, std::uint64_t& out) {
        if (auto* n = at(path)) {
            if (n->is_number_unsigned())
                out = n->get<std::uint64_t>();
            else if (n->is_number_integer() && n->get<std::int64_t>() >= 0)
                out = static_cast<std::uint64_t>(n->get<std::int64_t>());
            else
                problems.push_back(path + ": expected an unsigned 64-bit integer");
        }
    }

    template <class E>
    void enumeration(const std::string& path, E& out) {
        if (auto* n = at(path)) {
            std::optional<E> e;
            if (n->is_string()) e = try_parse_enum<E>(n->get<std::string>());
            if (e)
                out = *e;
            else
                problems.push_back(path + ": unknown value");
        }
    }

    void date(const std::string& path, Date& out) {
        if (auto* n = at(path)) {
            try {
                if (!n->is_string()) throw FormatError("");
                out = parse_date(n->get<std::string>());
            } catch (const FormatError&) {
                problems.push_back(path + ": expected a YYYY-MM-DD date");
            }
        }
    }

    void vitals(const std::string& path, PerVital<double>& out) {
        for (auto v : kAllVitals) number(path + "." + std::string(to_string(v)), out[v]);
    }

    std::vector<std::string> problems;

private:
    const json& root_;
};

void check_known_keys(const json& overrides, const json& schema, const std::string& prefix,
                      std::vector<std::string>& problems) {
    if (!overrides.is_object()) {
        problems.push_back((prefix.empty() ? std::string("config") : prefix) + ": expected an object");
        return;
    }
    for (const auto& [key, value] : overrides.items()) {
        std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!schema.contains(key)) {
            problems.push_back(path + ": unknown key");
        } else if (schema[key].is_object()) {
            check_known_keys(value, schema[key], path, problems);
        }
    }
}

} // namespace

json config_to_json(const SimulationConfig& c) {
    json j;
    j["config_version"] = c.config_version;
    j["n_patients"] = c.n_patients;
    j["n_hcps"] = c.n_hcps;
    j["duration_days"] = c.duration_days;
    j["seed"] = c.seed;
    j["mode"] = std::string(to_string(c.mode));
    j["start_date"] = format_date(c.start_date);
    for (auto cls : {StabilityClass::stable, StabilityClass::fluctuating, StabilityClass::spiky})
        j["noise"][std::string(to_string(cls))] = vitals_json(c.noise_for(cls));
    j["spike"] = {{"rate_per_30_days", c.spike.rate_per_30_days},
                  {"magnitude_min", c.spike.magnitude_min},
                  {"magnitude_max", c.spike.magnitude_max},
                  {"duration_min", c.spike.duration_min},
                  {"duration_max", c.spike.duration_max}};
    j["abrupt_delta"] = vitals_json(c.abrupt_delta);
    j["abrupt_window_days"] = c.abrupt_window_days;
    j["escalation_margin"] = vitals_json(c.escalation_margin);
    j["admission_policy"] = {{"trigger_high_alerts", c.admission_policy.trigger_high_alerts},
                             {"window_days", c.admission_policy.window_days},
                             {"stay_min", c.admission_policy.stay_min},
                             {"stay_max", c.admission_policy.stay_max}};
    j["admission_adherence_multiplier"] = c.admission_adherence_multiplier;
    j["messiness"] = {{"p_duplicate", c.messiness.p_duplicate},
                      {"p_irrelevant_comment", c.messiness.p_irrelevant_comment},
                      {"p_situated_comment", c.messiness.p_situated_comment}};
    return j;
}

SimulationConfig config_from_json(const json& overrides, const SimulationConfig& base) {
    json merged = config_to_json(base);
    std::vector<std::string> problems;
    check_known_keys(overrides, merged, "", problems);
    if (!problems.empty()) throw ValidationError("invalid configuration", problems);
    merged.merge_patch(overrides);

    SimulationConfig c = base;
    Reader r(merged);
    r.integer("config_version", c.config_version);
    r.count("n_patients", c.n_patients);
    r.count("n_hcps", c.n_hcps);
    r.count("duration_days", c.duration_days);
    r.seed("seed", c.seed);
    r.enumeration("mode", c.mode);
    r.date("start_date", c.start_date);
    for (auto cls : {StabilityClass::stable, StabilityClass::fluctuating, StabilityClass::spiky})
        r.vitals("noise." + std::string(to_string(cls)), c.noise_for(cls));
    r.number("spike.rate_per_30_days", c.spike.rate_per_30_days);
    r.number("spike.magnitude_min", c.spike.magnitude_min);
    r.number("spike.magnitude_max", c.spike.magnitude_max);
    r.count("spike.duration_min", c.spike.duration_min);
    r.count("spike.duration_max", c.spike.duration_max);
    r.vitals("abrupt_delta", c.abrupt_delta);
    r.count("abrupt_window_days", c.abrupt_window_days);
    r.vitals("escalation_margin", c.escalation_margin);
    r.count("admission_policy.trigger_high_alerts", c.admission_policy.trigger_high_alerts);
    r.count("admission_policy.window_days", c.admission_policy.window_days);
    r.count("admission_policy.stay_min", c.admission_policy.stay_min);
    r.count("admission_policy.stay_max", c.admission_policy.stay_max);
    r.number("admission_adherence_multiplier", c.admission_adherence_multiplier);
    r.number("messiness.p_duplicate", c.messiness.p_duplicate);
    r.number("messiness.p_irrelevant_comment", c.messiness.p_irrelevant_comment);
    r.number("messiness.p_situated_comment", c.messiness.p_situated_comment);

    problems = std::move(r.problems);
    if (problems.empty()) problems = config_problems(c);
    if (!problems.empty()) throw ValidationError("invalid configuration", problems);
    return c;
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

json scalar_value(const std::string& text) {
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') return text.substr(1, text.size() - 2);
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text[0] != '-') {
        std::uint64_t u = 0;
        if (auto [p, ec] = std::from_chars(first, last, u); ec == std::errc() && p == last) return u;
    }
    std::int64_t i = 0;
    if (auto [p, ec] = std::from_chars(first, last, i); ec == std::errc() && p == last) return i;
    double d = 0;
    if (auto [p, ec] = std::from_chars(first, last, d); ec == std::errc() && p == last) return d;
    return text;
}

} // namespace

SimulationConfig parse_config_text(const std::string& text, const SimulationConfig& base) {
    json overrides = json::object();
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::vector<std::string> problems;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            problems.push_back(fmt::format("line {}: expected 'key = value'", line_no));
            continue;
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) {
            problems.push_back(fmt::format("line {}: empty key", line_no));
            continue;
        }
        json* node = &overrides;
        std::size_t pos = 0;
        for (auto dot = key.find('.'); dot != std::string::npos; dot = key.find('.', pos)) {
            node = &(*node)[key.substr(pos, dot - pos)];
            pos = dot + 1;
        }
        (*node)[key.substr(pos)] = scalar_value(value);
    }
    if (!problems.empty()) throw FormatError("malformed config file: " + problems.front());
    if (!overrides.contains("config_version")) throw FormatError("config file lacks config_version");
    const auto& version = overrides["config_version"];
    if (!version.is_number_integer() || version.get<std::int64_t>() != kConfigVersion)
        throw VersionError(fmt::format("unsupported config_version {}", version.dump()));
    return config_from_json(overrides, base);
}

SimulationConfig load_config_file(const std::filesystem::path& path, const SimulationConfig& base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), base);
}

} // namespace rpm
