#include "rpmsim/cli.h"

#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <httplib.h>

#include "rpmsim/alert_engine.h"
#include "rpmsim/dataset_io.h"
#include "rpmsim/http_api.h"
#include "rpmsim/messiness.h"
#include "rpmsim/service.h"
#include "rpmsim/simulation.h"
#include "rpmsim/stats.h"
#include "rpmsim/validation.h"

namespace rpm::cli {

namespace {

struct ConfigFlags {
    std::string config_path;
    std::optional<int> patients;
    std::optional<int> hcps;
    std::optional<int> days;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;

    void add_to(CLI::App& app) {
        app.add_option("--config", config_path, "key = value configuration file");
        app.add_option("--patients", patients, "number of patients");
        app.add_option("--hcps", hcps, "number of HCPs");
        app.add_option("--days", days, "simulated days");
        app.add_option("--seed", seed, "64-bit seed");
        app.add_option("--mode", mode, "batch or interactive");
    }

    // flags > file > defaults
    SimulationConfig resolve() const {
        SimulationConfig base = config_path.empty() ? default_config() : load_config_file(config_path);
        nlohmann::json overrides = nlohmann::json::object();
        if (patients) overrides["n_patients"] = *patients;
        if (hcps) overrides["n_hcps"] = *hcps;
        if (days) overrides["duration_days"] = *days;
        if (seed) overrides["seed"] = *seed;
        if (mode) overrides["mode"] = *mode;
        return config_from_json(overrides, base);
    }
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::conflict:
    case ErrorKind::invalid_mode: return kValidation;
    case ErrorKind::io:
    case ErrorKind::not_found: return kIo;
    case ErrorKind::format:
    case ErrorKind::version: return kFormat;
    }
    return kValidation;
}

int cmd_generate(const ConfigFlags& flags, const std::string& out_dir, std::ostream& out) {
    SimulationConfig config = flags.resolve();
    Cohort cohort = inject_messiness(simulate(config));
    export_bundle(cohort, out_dir);
    auto s = compute_stats(cohort);
    out << fmt::format("wrote {} ({} patients, {} HCPs, {} days, seed {}): {} measurements, {} alerts\n", out_dir,
                       config.n_patients, config.n_hcps, config.duration_days, config.seed, s.measurement_count,
                       s.alert_count);
    return kOk;
}

int cmd_verify(const std::string& dir, std::ostream& out) {
    BundleFiles files = read_bundle_files(dir);
    Cohort cohort = parse_bundle(files, ImportOptions{false, false});
    bool ok = true;
    auto check = [&](const std::string& name, const std::vector<std::string>& problems) {
        out << (problems.empty() ? "PASS " : "FAIL ") << name << "\n";
        for (const auto& p : problems) out << "  " << p << "\n";
        ok &= problems.empty();
    };

    check("row counts", row_count_mismatches(files));
    check("cohort invariants", validate_cohort(cohort).lines());

    std::vector<std::string> oracle;
    auto rescanned = alert_keys(scan(cohort.measurements, cohort.patients, rule_params(cohort.config),
                                     injected_duplicate_ids(cohort)));
    auto recorded = alert_keys(cohort.alerts);
    auto describe = [](const AlertKey& k) {
        std::string rules;
        for (auto r : k.rules) rules += (rules.empty() ? "" : ";") + std::string(to_string(r));
        return fmt::format("{} {} [{}]", k.patient_id.value, k.measurement_id.value, rules);
    };
    for (const auto& k : recorded)
        if (!rescanned.contains(k)) oracle.push_back("oracle mismatch: recorded alert not reproduced: " + describe(k));
    for (const auto& k : rescanned)
        if (!recorded.contains(k)) oracle.push_back("oracle mismatch: rescan finds unrecorded alert: " + describe(k));
    check("alert oracle rescan", oracle);

    std::vector<std::string> round_trip;
    BundleFiles again = render_bundle(cohort);
    for (const auto& [name, contents] : again) {
        auto it = files.find(name);
        if (it == files.end() || it->second != contents) round_trip.push_back(name + " does not re-export identically");
    }
    if (!(parse_bundle(again, ImportOptions{false, false}) == cohort)) round_trip.push_back("re-import differs");
    check("round trip", round_trip);

    out << (ok ? "bundle OK\n" : "bundle FAILED verification\n");
    return ok ? kOk : kValidation;
}

int cmd_stats(const std::string& dir, bool as_json, std::ostream& out) {
    Cohort cohort = import_bundle(dir);
    auto s = compute_stats(cohort);
    if (as_json)
        out << to_json(s).dump(2) << "\n";
    else
        out << render_table(s);
    return kOk;
}

int cmd_serve(const ConfigFlags& flags, const std::string& bundle, const std::string& host, int port,
              std::ostream& out) {
    CohortService service;
    CohortHandle handle = bundle.empty() ? service.create_cohort(flags.resolve()) : service.add_cohort(import_bundle(bundle));
    httplib::Server server;
    register_routes(server, service);
    if (!server.bind_to_port(host, port)) throw IoError(fmt::format("cannot listen on {}:{}", host, port));
    out << fmt::format("cohort {} ready (mode {}, clock day {}, {} open alerts)\n", handle.cohort_id,
                       to_string(handle.mode), handle.clock_day, handle.open_alert_count);
    out << fmt::format("listening on http://{}:{}\n", host, port) << std::flush;
    server.listen_after_bind();
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic remote patient monitoring cohort simulator", "rpmsim"};
    app.require_subcommand(1);

    ConfigFlags gen_flags;
    std::string out_dir;
    auto* generate = app.add_subcommand("generate", "simulate a cohort and write a dataset bundle");
    gen_flags.add_to(*generate);
    generate->add_option("--out", out_dir, "output bundle directory")->required();

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "check a bundle: invariants, alert rescan, round trip");
    verify->add_option("bundle", verify_dir, "bundle directory")->required();

    std::string stats_dir;
    bool stats_json = false;
    auto* stats = app.add_subcommand("stats", "alert rate and workload statistics of a bundle");
    stats->add_option("bundle", stats_dir, "bundle directory")->required();
    stats->add_flag("--json", stats_json, "print JSON instead of a table");

    ConfigFlags serve_flags;
    std::string serve_bundle;
    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "serve the HTTP API for one cohort");
    serve_flags.add_to(*serve);
    serve->add_option("--bundle", serve_bundle, "load this bundle instead of simulating");
    serve->add_option("--host", host, "listen address");
    serve->add_option("--port", port, "listen port")->check(CLI::Range(1, 65535));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*generate) return cmd_generate(gen_flags, out_dir, out);
        if (*verify) return cmd_verify(verify_dir, out);
        if (*stats) return cmd_stats(stats_dir, stats_json, out);
        if (*serve) return cmd_serve(serve_flags, serve_bundle, host, port, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        for (const auto& d : e.details()) err << "  " << d << "\n";
        return exit_code_for(e.kind());
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    return kUsage;
}

} // namespace rpm::cli
