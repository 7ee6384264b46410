// Command-line front end.  Links only the C API.
//
// Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pareto/pareto.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Owned C string from the library.
struct CString {
    char* p = nullptr;
    ~CString() { pareto_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

int report(int status) {
    if (status == PARETO_OK) return 0;
    std::cerr << "error: " << pareto_status_name(status) << ": " << pareto_last_error() << "\n";
    switch (status) {
        case PARETO_E_INVALID_ARGUMENT:
        case PARETO_E_INVALID_SPEC: return kExitUsage;
        default: return kExitFailure;
    }
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crowdsourced Pareto-optimal object finding: simulations, replays and the session server"};
    app.require_subcommand(1);
    app.set_version_flag("--version", pareto_version());
    app.footer("Environment: PARETO_DATA_DIR is searched for dataset files given by relative path.");

    // simulate
    pareto_simulate_options sim;
    pareto_simulate_defaults(&sim);
    std::string n_list = sim.objects, c_list = sim.criteria, strategies = sim.strategies, fixture, csv_path;
    std::size_t seeds = sim.replicates;
    bool verify = false, timing = false, quiet = false;
    auto* simulate = app.add_subcommand("simulate", "Run the experiment grid and print a per-strategy summary");
    simulate->add_option("--n", n_list, "Object counts, comma separated")->capture_default_str();
    simulate->add_option("--criteria,--c", c_list, "Criteria counts, comma separated")->capture_default_str();
    simulate->add_option("--strategies", strategies,
                         "Comma separated: bruteforce, randomq, randomp, frq, +cq-mo, -cq+mo, -cq-mo, "
                         "randomp-mo, frq-mo, or all")
        ->capture_default_str();
    simulate->add_option("--seeds", seeds, "Replicates per cell")->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--base-seed", sim.base_seed, "Seed of the whole grid")->capture_default_str();
    simulate->add_option("--noise", sim.noise, "Per-vote error rate")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--k", sim.k, "Votes per question when noise > 0")->capture_default_str();
    simulate->add_option("--theta", sim.theta, "Aggregation threshold")->capture_default_str();
    simulate->add_option("--jobs", sim.jobs, "Worker threads, 0 for all cores")->capture_default_str();
    simulate->add_option("--fixture", fixture, "Run on a dataset's ground truth instead of generated instances");
    simulate->add_option("--out", csv_path, "Write the CSV here; the summary then goes to stdout");
    simulate->add_flag("--verify", verify, "Cross-check incremental indexes at every iteration (slow)");
    simulate->add_flag("--timing", timing, "Fill the runtime_ms column (output is then not byte-stable)");
    simulate->add_flag("--quiet", quiet, "Omit the summary table");

    // replay
    std::string dataset, strategy = "frq", format = "table";
    std::uint64_t replay_seed = 1;
    std::uint32_t k_min = 5;
    double theta = 0.6;
    auto* replay = app.add_subcommand("replay", "Run one strategy on a dataset and print the iteration table");
    replay->add_option("dataset", dataset, "Fixture name or dataset file")->required();
    replay->add_option("--strategy", strategy, "Strategy name")->capture_default_str();
    replay->add_option("--seed", replay_seed, "Selector seed")->capture_default_str();
    replay->add_option("--k-min", k_min, "Minimum responded votes per question")->capture_default_str();
    replay->add_option("--theta", theta, "Aggregation threshold")->capture_default_str();
    replay->add_option("--format", format, "table or jsonl")->capture_default_str()->check(CLI::IsMember({"table", "jsonl"}));

    // bound
    std::uint64_t bn = 0, bc = 0, bk = 0;
    auto* bound = app.add_subcommand("bound", "Print the lower bound on questions for n objects, c criteria, k Pareto objects");
    bound->add_option("--n", bn, "Objects")->required();
    bound->add_option("--c,--criteria", bc, "Criteria")->required();
    bound->add_option("--k", bk, "Pareto-optimal objects")->required();

    // serve
    std::string host = "127.0.0.1", static_dir, persist_dir;
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Host the session HTTP API");
    serve->add_option("--host", host, "Bind address")->capture_default_str();
    serve->add_option("--port", port, "Port, 0 for any free port")->capture_default_str()->check(CLI::Range(0, 65535));
    serve->add_option("--static", static_dir, "Directory of built web UI assets served under /")->check(CLI::ExistingDirectory);
    serve->add_option("--persist", persist_dir, "Directory for session snapshots");

    // fixture
    std::string fixture_name, fixture_out;
    bool list = false;
    auto* fix = app.add_subcommand("fixture", "Print a built-in fixture as dataset JSON");
    fix->add_option("name", fixture_name, "Fixture name");
    fix->add_option("--out", fixture_out, "Write to this file instead of stdout");
    fix->add_flag("--list", list, "List fixture names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (*simulate) {
        sim.objects = n_list.c_str();
        sim.criteria = c_list.c_str();
        if (strategies == "all") strategies = "bruteforce,randomq,randomp,frq,+cq-mo,-cq+mo,-cq-mo";
        sim.strategies = strategies.c_str();
        sim.replicates = seeds;
        sim.verify = verify;
        sim.timing = timing;
        if (!fixture.empty()) {
            sim.fixture = fixture.c_str();
            // The fixture fixes the size; only explicit values are checked against it.
            if (simulate->count("--n") == 0) sim.objects = nullptr;
            if (simulate->count("--criteria") == 0) sim.criteria = nullptr;
        }
        std::ofstream csv_file;
        std::ostream* csv = &std::cout;
        std::ostream* summary_stream = &std::cerr;
        if (!csv_path.empty()) {
            csv_file.open(csv_path);
            if (!csv_file) {
                std::cerr << "error: cannot write " << csv_path << "\n";
                return kExitFailure;
            }
            csv = &csv_file;
            summary_stream = &std::cout;
        }
        CString summary;
        const int st = pareto_simulate(
            &sim, [](const char* line, void* user) { *static_cast<std::ostream*>(user) << line << "\n"; }, csv,
            &summary.p);
        csv->flush();
        if (summary.p && !quiet) *summary_stream << nlohmann::json::parse(summary.str()).at("table").get<std::string>();
        return report(st);
    }

    if (*replay) {
        CString out;
        const int st = pareto_replay(dataset.c_str(), strategy.c_str(), replay_seed, k_min, theta, format.c_str(), &out.p);
        if (st == PARETO_OK) std::cout << out.str();
        return report(st);
    }

    if (*bound) {
        std::cout << pareto_lower_bound(bn, bc, bk) << "\n";
        return 0;
    }

    if (*serve) {
        const int st = pareto_serve(
            host.c_str(), port, static_dir.empty() ? nullptr : static_dir.c_str(),
            persist_dir.empty() ? nullptr : persist_dir.c_str(),
            [](int bound_port, void* user) {
                std::cout << "listening on http://" << *static_cast<std::string*>(user) << ":" << bound_port << "\n"
                          << std::flush;
            },
            &host);
        return report(st);
    }

    if (*fix) {
        if (list || fixture_name.empty()) {
            CString names;
            const int st = pareto_fixture_names(&names.p);
            if (st == PARETO_OK) {
                std::string s = names.str();
                for (auto& ch : s)
                    if (ch == ',') ch = '\n';
                std::cout << s << "\n";
            }
            return report(st);
        }
        CString json;
        const int st = pareto_fixture_json(fixture_name.c_str(), &json.p);
        if (st != PARETO_OK) return report(st);
        if (fixture_out.empty()) {
            std::cout << json.str();
            return 0;
        }
        return write_file(fixture_out, json.str()) ? 0 : kExitFailure;
    }
    return kExitUsage;
}
