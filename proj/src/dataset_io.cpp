#include "rpmsim/dataset_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "rpmsim/csv.h"
#include "rpmsim/validation.h"

namespace rpm {

using nlohmann::json;

namespace {

const std::vector<std::string> kPatientColumns{
    "id", "display_name", "age", "comorbidities", "stability_class", "adherence", "home_support", "enrollment_date",
    "baseline_weight", "baseline_systolic_bp", "baseline_diastolic_bp", "baseline_heart_rate", "weight_low",
    "weight_high", "systolic_bp_low", "systolic_bp_high", "diastolic_bp_low", "diastolic_bp_high", "heart_rate_low",
    "heart_rate_high"};
const std::vector<std::string> kHcpColumns{"id", "display_name", "role", "experience", "confidence", "doc_style",
                                           "duty_days"};
const std::vector<std::string> kMeasurementColumns{"id", "patient_id", "timestamp", "vital", "value", "unit", "comment"};
const std::vector<std::string> kAlertColumns{"id",         "patient_id", "measurement_id", "rules",
                                             "severity",   "created_at", "status",         "assigned_hcp_id"};
const std::vector<std::string> kResponseColumns{"id", "alert_id", "hcp_id", "action", "timestamp", "note"};
const std::vector<std::string> kMedicationColumns{"id",          "patient_id",       "timestamp",
                                                  "drug",        "change",           "effect_vital",
                                                  "effect_direction", "effect_magnitude", "effect_onset_days"};
const std::vector<std::string> kAdmissionColumns{"id", "patient_id", "start", "end", "reason"};
const std::vector<std::string> kConsultationColumns{"id", "patient_id", "hcp_id", "timestamp", "channel", "text"};

std::string fixed(double v, int decimals) { return fmt::format("{:.{}f}", v, decimals); }

template <class Set, class F>
std::string join_set(const Set& items, F&& name) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ';';
        out += name(item);
    }
    return out;
}

std::string header(const std::vector<std::string>& columns) { return csv::join(columns); }

std::string render_patients(const Cohort& c) {
    std::string out = header(kPatientColumns);
    for (const auto& p : c.patients) {
        std::vector<std::string> f{p.id.value,
                                   csv::quote(p.display_name),
                                   std::to_string(p.age),
                                   csv::escape(join_set(p.comorbidities, [](const std::string& s) { return s; })),
                                   std::string(to_string(p.stability_class)),
                                   fixed(p.adherence, 3),
                                   std::string(to_string(p.home_support)),
                                   format_date(p.enrollment_date)};
        for (auto v : kAllVitals) f.push_back(format_value(v, p.baselines[v]));
        for (auto v : kAllVitals) {
            f.push_back(format_value(v, p.thresholds[v].low));
            f.push_back(format_value(v, p.thresholds[v].high));
        }
        out += csv::join(f);
    }
    return out;
}

std::string render_hcps(const Cohort& c) {
    std::string out = header(kHcpColumns);
    for (const auto& h : c.hcps)
        out += csv::join({h.id.value, csv::quote(h.display_name), std::string(to_string(h.role)),
                          std::string(to_string(h.experience)), fixed(h.confidence, 2),
                          std::string(to_string(h.doc_style)),
                          join_set(h.duty_days, [](Weekday d) { return std::string(to_string(d)); })});
    return out;
}

std::string render_measurements(const Cohort& c) {
    std::string out = header(kMeasurementColumns);
    for (const auto& m : c.measurements)
        out += csv::join({m.id.value, m.patient_id.value, format_datetime(m.timestamp), std::string(to_string(m.vital)),
                          format_value(m.vital, m.value), std::string(unit_of(m.vital)),
                          m.comment ? csv::quote(*m.comment) : std::string()});
    return out;
}

std::string render_alerts(const Cohort& c) {
    std::string out = header(kAlertColumns);
    for (const auto& a : c.alerts)
        out += csv::join({a.id.value, a.patient_id.value, a.measurement_id.value,
                          join_set(a.rules, [](AlertRule r) { return std::string(to_string(r)); }),
                          std::string(to_string(a.severity)), format_datetime(a.created_at),
                          std::string(to_string(a.status)), a.assigned_hcp_id ? a.assigned_hcp_id->value : ""});
    return out;
}

std::string render_responses(const Cohort& c) {
    std::string out = header(kResponseColumns);
    for (const auto& r : c.responses)
        out += csv::join({r.id.value, r.alert_id.value, r.hcp_id.value, std::string(to_string(r.action)),
                          format_datetime(r.timestamp), csv::quote(r.note)});
    return out;
}

std::string render_medication_changes(const Cohort& c) {
    std::string out = header(kMedicationColumns);
    for (const auto& mc : c.medication_changes)
        out += csv::join({mc.id.value, mc.patient_id.value, format_datetime(mc.timestamp), csv::quote(mc.drug),
                          std::string(to_string(mc.change)), std::string(to_string(mc.effect.vital)),
                          std::string(to_string(mc.effect.direction)),
                          format_value(mc.effect.vital, mc.effect.magnitude), std::to_string(mc.effect.onset_days)});
    return out;
}

std::string render_admissions(const Cohort& c) {
    std::string out = header(kAdmissionColumns);
    for (const auto& ad : c.admissions)
        out += csv::join({ad.id.value, ad.patient_id.value, format_date(ad.start), format_date(ad.end),
                          csv::quote(ad.reason)});
    return out;
}

std::string render_consultations(const Cohort& c) {
    std::string out = header(kConsultationColumns);
    for (const auto& con : c.consultations)
        out += csv::join({con.id.value, con.patient_id.value, con.hcp_id.value, format_datetime(con.timestamp),
                          std::string(to_string(con.channel)), csv::quote(con.text)});
    return out;
}

json render_ledger(const Cohort& c) {
    json entries = json::array();
    for (const auto& e : c.truth_ledger)
        entries.push_back({{"kind", std::string(to_string(e.kind))},
                           {"original_id", e.original_id ? json(e.original_id->value) : json(nullptr)},
                           {"injected_id", e.injected_id.value}});
    return {{"description", "Provenance of injected duplicates and irrelevant comments. Not part of the simulated "
                            "world; filter measurements by these ids to recover the truth stream."},
            {"entries", entries}};
}

// ---------------------------------------------------------------- import

struct Table {
    std::string name;
    std::vector<csv::Row> rows;  // without header
};

Table read_table(const BundleFiles& files, std::string_view name, const std::vector<std::string>& columns) {
    std::string file = std::string(name) + ".csv";
    auto it = files.find(file);
    if (it == files.end()) throw FormatError(fmt::format("bundle is missing the {} file ({})", name, file));
    auto rows = csv::parse(it->second);
    if (rows.empty() || rows.front() != columns)
        throw FormatError(fmt::format("{}: unexpected header", file));
    Table t{file, {}};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != columns.size())
            throw FormatError(fmt::format("{} line {}: expected {} columns, found {}", file, i + 1, columns.size(),
                                          rows[i].size()));
        t.rows.push_back(std::move(rows[i]));
    }
    return t;
}

/// Field accessors that report the file and line on bad input.
class Cursor {
public:
    Cursor(const Table& t, std::size_t row) : table_(t), row_(row) {}

    const std::string& text(std::size_t col) const { return table_.rows[row_][col]; }

    template <class E>
    E enumeration(std::size_t col) const {
        if (auto e = try_parse_enum<E>(text(col))) return *e;
        fail(col, "unknown value");
    }

    double number(std::size_t col) const {
        double v = 0;
        const auto& s = text(col);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty()) fail(col, "expected a number");
        return v;
    }

    int integer(std::size_t col) const {
        int v = 0;
        const auto& s = text(col);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || s.empty()) fail(col, "expected an integer");
        return v;
    }

    Date date(std::size_t col) const {
        try {
            return parse_date(text(col));
        } catch (const FormatError&) {
            fail(col, "expected a YYYY-MM-DD date");
        }
    }

    DateTime timestamp(std::size_t col) const {
        try {
            return parse_datetime(text(col));
        } catch (const FormatError&) {
            fail(col, "expected an ISO-8601 UTC timestamp");
        }
    }

    template <class E>
    std::set<E> enum_set(std::size_t col) const {
        std::set<E> out;
        for (const auto& part : split(text(col))) {
            auto e = try_parse_enum<E>(part);
            if (!e) fail(col, "unknown value '" + part + "'");
            out.insert(*e);
        }
        return out;
    }

    static std::vector<std::string> split(const std::string& s) {
        std::vector<std::string> out;
        if (s.empty()) return out;
        std::size_t pos = 0;
        while (true) {
            auto semi = s.find(';', pos);
            out.push_back(s.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
            if (semi == std::string::npos) break;
            pos = semi + 1;
        }
        return out;
    }

    [[noreturn]] void fail(std::size_t col, const std::string& why) const {
        throw FormatError(fmt::format("{} line {} column {}: {}", table_.name, row_ + 2, col + 1, why));
    }

private:
    const Table& table_;
    std::size_t row_;
};

json parse_json_file(const BundleFiles& files, const std::string& name) {
    auto it = files.find(name);
    if (it == files.end()) throw FormatError("bundle is missing the " + name + " file");
    try {
        return json::parse(it->second);
    } catch (const json::exception& e) {
        throw FormatError(name + ": " + e.what());
    }
}

std::size_t data_rows(const std::string& contents) {
    // Free text may contain line breaks, so count parsed records.
    auto rows = csv::parse(contents);
    return rows.empty() ? 0 : rows.size() - 1;
}

} // namespace

BundleFiles render_bundle(const Cohort& input) {
    Cohort c = input;
    canonicalize(c);
    BundleFiles files;
    files["patients.csv"] = render_patients(c);
    files["hcps.csv"] = render_hcps(c);
    files["measurements.csv"] = render_measurements(c);
    files["alerts.csv"] = render_alerts(c);
    files["responses.csv"] = render_responses(c);
    files["medication_changes.csv"] = render_medication_changes(c);
    files["admissions.csv"] = render_admissions(c);
    files["consultations.csv"] = render_consultations(c);
    files["truth_ledger.json"] = render_ledger(c).dump(2) + "\n";

    json counts = {{"patients", c.patients.size()},
                   {"hcps", c.hcps.size()},
                   {"measurements", c.measurements.size()},
                   {"alerts", c.alerts.size()},
                   {"responses", c.responses.size()},
                   {"medication_changes", c.medication_changes.size()},
                   {"admissions", c.admissions.size()},
                   {"consultations", c.consultations.size()},
                   {"truth_ledger", c.truth_ledger.size()}};
    json manifest = {{"format_version", kFormatVersion}, {"seed", c.config.seed},        {"clock_day", c.clock_day},
                     {"config", config_to_json(c.config)}, {"row_counts", counts}};
    files["manifest.json"] = manifest.dump(2) + "\n";
    return files;
}

BundleFiles export_bundle(const Cohort& cohort, const std::filesystem::path& destination) {
    if (auto report = validate_cohort(cohort); !report.ok())
        throw ValidationError("refusing to export an invalid cohort", report.lines());
    auto files = render_bundle(cohort);

    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(destination, ec)) {
        auto parent = destination.parent_path();
        if (!parent.empty() && !fs::is_directory(parent, ec))
            throw IoError("output directory does not exist: " + destination.string());
        if (!fs::create_directory(destination, ec) && !fs::is_directory(destination))
            throw IoError("cannot create output directory " + destination.string() + ": " + ec.message());
    }
    for (const auto& [name, contents] : files) {
        auto path = destination / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << contents;
        if (!out) throw IoError("cannot write " + path.string());
    }
    return files;
}

BundleFiles read_bundle_files(const std::filesystem::path& source) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(source)) throw IoError("bundle directory does not exist: " + source.string());
    BundleFiles files;
    std::vector<std::string> names{"manifest.json", "truth_ledger.json"};
    for (auto n : kEntityFiles) names.push_back(std::string(n) + ".csv");
    for (const auto& name : names) {
        std::ifstream in(source / name, std::ios::binary);
        if (!in) continue;  // reported by parse_bundle with the entity name
        std::stringstream buffer;
        buffer << in.rdbuf();
        files[name] = buffer.str();
    }
    return files;
}

std::vector<std::string> row_count_mismatches(const BundleFiles& files) {
    std::vector<std::string> out;
    json manifest = parse_json_file(files, "manifest.json");
    const json& counts = manifest.value("row_counts", json::object());
    for (auto name : kEntityFiles) {
        std::string key(name);
        auto it = files.find(key + ".csv");
        if (it == files.end() || !counts.contains(key)) continue;
        auto actual = data_rows(it->second);
        auto expected = counts[key].get<std::size_t>();
        if (actual != expected)
            out.push_back(fmt::format("{}.csv has {} rows, manifest says {}", key, actual, expected));
    }
    if (auto it = files.find("truth_ledger.json"); it != files.end() && counts.contains("truth_ledger")) {
        auto actual = parse_json_file(files, "truth_ledger.json").value("entries", json::array()).size();
        if (actual != counts["truth_ledger"].get<std::size_t>())
            out.push_back(fmt::format("truth_ledger.json has {} entries, manifest says {}", actual,
                                      counts["truth_ledger"].get<std::size_t>()));
    }
    return out;
}

Cohort parse_bundle(const BundleFiles& files, const ImportOptions& options) {
    json manifest = parse_json_file(files, "manifest.json");
    if (!manifest.contains("format_version") || !manifest["format_version"].is_number_integer())
        throw FormatError("manifest.json lacks format_version");
    if (manifest["format_version"].get<int>() != kFormatVersion)
        throw VersionError(fmt::format("unsupported bundle format_version {}", manifest["format_version"].dump()));

    Cohort c;
    try {
        c.config = config_from_json(manifest.at("config"));
        c.clock_day = manifest.at("clock_day").get<int>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("manifest.json: ") + e.what());
    }

    // Check presence of every file first so the error names the first missing entity.
    for (auto name : kEntityFiles)
        if (!files.contains(std::string(name) + ".csv"))
            throw FormatError(fmt::format("bundle is missing the {} file ({}.csv)", name, name));

    {
        auto t = read_table(files, "patients", kPatientColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            PatientProfile p;
            p.id = PatientId(r.text(0));
            p.display_name = r.text(1);
            p.age = r.integer(2);
            for (auto& s : Cursor::split(r.text(3))) p.comorbidities.insert(s);
            p.stability_class = r.enumeration<StabilityClass>(4);
            p.adherence = r.number(5);
            p.home_support = r.enumeration<HomeSupport>(6);
            p.enrollment_date = r.date(7);
            for (std::size_t k = 0; k < 4; ++k) {
                auto v = kAllVitals[k];
                p.baselines[v] = r.number(8 + k);
                p.thresholds[v] = Range{r.number(12 + 2 * k), r.number(13 + 2 * k)};
            }
            c.patients.push_back(std::move(p));
        }
    }
    {
        auto t = read_table(files, "hcps", kHcpColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            c.hcps.push_back(HcpProfile{HcpId(r.text(0)), r.text(1), r.enumeration<Role>(2),
                                        r.enumeration<Experience>(3), r.number(4), r.enumeration<DocStyle>(5),
                                        r.enum_set<Weekday>(6)});
        }
    }
    {
        auto t = read_table(files, "measurements", kMeasurementColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            Measurement m{MeasurementId(r.text(0)), PatientId(r.text(1)), r.timestamp(2), r.enumeration<Vital>(3),
                          r.number(4), std::nullopt};
            if (r.text(5) != unit_of(m.vital)) r.fail(5, "unit does not match vital");
            if (!r.text(6).empty()) m.comment = r.text(6);
            c.measurements.push_back(std::move(m));
        }
    }
    {
        auto t = read_table(files, "alerts", kAlertColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            Alert a{AlertId(r.text(0)),        PatientId(r.text(1)),           MeasurementId(r.text(2)),
                    r.enum_set<AlertRule>(3), r.enumeration<Severity>(4),     r.timestamp(5),
                    r.enumeration<AlertStatus>(6), std::nullopt};
            if (!r.text(7).empty()) a.assigned_hcp_id = HcpId(r.text(7));
            c.alerts.push_back(std::move(a));
        }
    }
    {
        auto t = read_table(files, "responses", kResponseColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            c.responses.push_back(AlertResponse{ResponseId(r.text(0)), AlertId(r.text(1)), HcpId(r.text(2)),
                                                r.enumeration<Action>(3), r.text(5), r.timestamp(4)});
        }
    }
    {
        auto t = read_table(files, "medication_changes", kMedicationColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            c.medication_changes.push_back(MedicationChange{
                MedicationChangeId(r.text(0)), PatientId(r.text(1)), r.text(3), r.enumeration<ChangeKind>(4),
                r.timestamp(2),
                MedicationEffect{r.enumeration<Vital>(5), r.enumeration<Direction>(6), r.number(7), r.integer(8)}});
        }
    }
    {
        auto t = read_table(files, "admissions", kAdmissionColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            c.admissions.push_back(
                Admission{AdmissionId(r.text(0)), PatientId(r.text(1)), r.date(2), r.date(3), r.text(4)});
        }
    }
    {
        auto t = read_table(files, "consultations", kConsultationColumns);
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            Cursor r(t, i);
            c.consultations.push_back(Consultation{ConsultationId(r.text(0)), PatientId(r.text(1)), HcpId(r.text(2)),
                                                   r.timestamp(3), r.enumeration<Channel>(4), r.text(5)});
        }
    }
    {
        json ledger = parse_json_file(files, "truth_ledger.json");
        try {
            for (const auto& e : ledger.at("entries")) {
                auto kind = try_parse_enum<LedgerKind>(e.at("kind").get<std::string>());
                if (!kind) throw FormatError("truth_ledger.json: unknown entry kind");
                TruthLedgerEntry entry{*kind, std::nullopt, MeasurementId(e.at("injected_id").get<std::string>())};
                if (!e.at("original_id").is_null()) entry.original_id = MeasurementId(e["original_id"].get<std::string>());
                c.truth_ledger.push_back(std::move(entry));
            }
        } catch (const json::exception& e) {
            throw FormatError(std::string("truth_ledger.json: ") + e.what());
        }
    }
    canonicalize(c);

    if (options.check_row_counts)
        if (auto mismatches = row_count_mismatches(files); !mismatches.empty())
            throw FormatError("manifest row counts disagree with the bundle: " + mismatches.front());
    if (options.validate)
        if (auto report = validate_cohort(c); !report.ok())
            throw ValidationError(fmt::format("bundle fails validation with {} violation(s)", report.violations.size()),
                                  report.lines());
    return c;
}

Cohort import_bundle(const std::filesystem::path& source, const ImportOptions& options) {
    return parse_bundle(read_bundle_files(source), options);
}

std::string tar_archive(const BundleFiles& files, const std::string& prefix) {
    std::string out;
    auto octal = [](char* dst, std::size_t width, std::uint64_t value) {
        auto s = fmt::format("{:0{}o}", value, width - 1);
        std::copy(s.begin(), s.end(), dst);
        dst[width - 1] = '\0';
    };
    for (const auto& [name, contents] : files) {
        std::array<char, 512> h{};
        std::string path = prefix.empty() ? name : prefix + "/" + name;
        if (path.size() >= 100) throw FormatError("archive path too long: " + path);
        std::copy(path.begin(), path.end(), h.data());
        octal(h.data() + 100, 8, 0644);
        octal(h.data() + 108, 8, 0);
        octal(h.data() + 116, 8, 0);
        octal(h.data() + 124, 12, contents.size());
        octal(h.data() + 136, 12, 0);
        std::fill(h.begin() + 148, h.begin() + 156, ' ');
        h[156] = '0';
        std::string magic = "ustar";
        std::copy(magic.begin(), magic.end(), h.data() + 257);
        h[262] = '\0';
        h[263] = '0';
        h[264] = '0';
        unsigned sum = 0;
        for (char ch : h) sum += static_cast<unsigned char>(ch);
        octal(h.data() + 148, 7, sum);
        h[155] = ' ';
        out.append(h.data(), h.size());
        out += contents;
        out.append((512 - contents.size() % 512) % 512, '\0');
    }
    out.append(1024, '\0');
    return out;
}

} // namespace rpm
