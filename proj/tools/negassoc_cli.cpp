// negassoc: command-line front end. Every subcommand builds an experiment
// config and hands it to negassoc::run, so `run <config>` replays any of them.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "negassoc/error.hpp"
#include "negassoc/harness.hpp"

namespace {

using negassoc::Json;

constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

struct Common {
    std::optional<long long> seed;
    std::optional<long long> reps;
    std::optional<double> tol;
    std::string out;
    std::string format;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--seed", c.seed, "RNG seed (default 0)")->check(CLI::NonNegativeNumber);
    app->add_option("--reps", c.reps, "Monte Carlo replications")->check(CLI::PositiveNumber);
    app->add_option("--tol", c.tol, "Tolerance for covariance, bound and Rayleigh checks")
        ->check(CLI::PositiveNumber);
    app->add_option("--out", c.out, "Directory for report.json / summary.csv (default: stdout)");
    app->add_option("--format", c.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
}

// Inline JSON when the argument looks like JSON, otherwise a file path.
Json load_input(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
        return negassoc::parse_json_text(arg, "<argument>");
    return negassoc::read_json_file(arg);
}

void apply_common(Json& cfg, const Common& c) {
    if (c.seed) cfg["seed"] = *c.seed;
    if (c.reps) cfg["replications"] = *c.reps;
    if (c.tol) {
        if (!cfg.contains("tolerances") || !cfg["tolerances"].is_object()) cfg["tolerances"] = Json::object();
        for (const char* k : {"covariance", "bound", "rayleigh"}) cfg["tolerances"][k] = *c.tol;
    }
    if (!c.out.empty() || !c.format.empty()) {
        if (!cfg.contains("output") || !cfg["output"].is_object()) cfg["output"] = Json::object();
        if (!c.out.empty()) cfg["output"]["dir"] = c.out;
        if (!c.format.empty()) cfg["output"]["format"] = c.format;
    }
}

Json base_config(const std::string& scenario) {
    return Json{{"schema", negassoc::kConfigSchema}, {"scenario", scenario}, {"seed", 0}};
}

int emit(const negassoc::ExperimentConfig& cfg) {
    const negassoc::Report report = negassoc::run(cfg);
    if (!cfg.output.dir.empty()) {
        negassoc::write_report(report, cfg.output.dir, cfg.output.format);
    } else {
        if (cfg.output.format != negassoc::OutputFormat::csv) std::cout << negassoc::report_json_text(report);
        if (cfg.output.format != negassoc::OutputFormat::json) std::cout << negassoc::report_csv_text(report);
    }
    return report.exit_status();
}

struct Subcommand {
    std::string name;
    std::string scenario;
    std::string help;
    bool takes_tau = false;
    CLI::App* app = nullptr;
    std::string input;
};

Subcommand sub(std::string name, std::string scenario, std::string help, bool takes_tau = false) {
    Subcommand s;
    s.name = std::move(name);
    s.scenario = std::move(scenario);
    s.help = std::move(help);
    s.takes_tau = takes_tau;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Negative dependence checks for finite point processes"};
    app.require_subcommand(1);

    Common common;
    std::vector<Subcommand> subs{
        sub("check-ulc", "ulc-check", "ULC and PF2 checks of a count law", true),
        sub("check-rayleigh", "rayleigh-check", "Randomized Rayleigh check of a subset measure"),
        sub("check-sr", "sr-check", "Randomized strong Rayleigh check of a subset measure"),
        sub("check-na", "na-check", "Exhaustive negative association check of a count law"),
        sub("check-sna", "sna-check", "Negative association in sequence"),
        sub("polarize", "polarize", "Symmetric multi-affine lift of a count law", true),
        sub("count-law", "count-law", "Exact joint law of the cell counts"),
        sub("dominate", "domination", "Consequences of Poisson dcx domination"),
        sub("concentrate", "concentration", "Chebyshev, Chernoff and Kolmogorov bounds"),
        sub("sample", "sample", "Seeded Monte Carlo estimates against the exact law"),
    };

    std::size_t points = 0, lines = 0;
    bool lines_set = false;
    std::vector<long long> cells;
    std::vector<double> eps, b;
    std::optional<long long> m;

    for (auto& s : subs) {
        s.app = app.add_subcommand(s.name, s.help);
        s.app->add_option("input", s.input,
                          s.takes_tau ? "tau spec: JSON text or file" : "process spec: JSON text or file")
            ->required();
        add_common(s.app, common);
        if (s.scenario == "rayleigh-check" || s.scenario == "sr-check")
            s.app->add_option("--points", points, "Grid points per coordinate pair")->check(CLI::PositiveNumber);
        if (s.scenario == "sr-check")
            s.app->add_option_function<std::size_t>("--lines", [&](std::size_t v) { lines = v; lines_set = true; },
                                                    "Random lines for the real-rootedness test");
        if (s.scenario == "concentration") {
            s.app->add_option("--cell", cells, "Cells to test (default: all); Kolmogorov order")
                ->check(CLI::NonNegativeNumber);
            s.app->add_option("--eps", eps, "Deviation thresholds")->check(CLI::PositiveNumber);
            s.app->add_option("--b", b, "Kolmogorov normalizers b_1 < ... < b_n (enables the check)");
            s.app->add_option("--m", m, "Start index of the second Kolmogorov form");
        }
    }

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment config");
    run_cmd->add_option("config", config_path, "Config file")->required();
    add_common(run_cmd, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        Json cfg;
        if (run_cmd->parsed()) {
            cfg = negassoc::read_json_file(config_path);
            if (!cfg.is_object()) negassoc::parse_fail(config_path, "expected an object");
        } else {
            for (const auto& s : subs) {
                if (!s.app->parsed()) continue;
                cfg = base_config(s.scenario);
                cfg[s.takes_tau ? "tau" : "process"] = load_input(s.input);
                if (points || lines_set) {
                    cfg["caps"] = Json::object();
                    if (points) cfg["caps"]["grid_points_per_pair"] = points;
                    if (lines_set) cfg["caps"]["lines"] = lines;
                }
                if (s.scenario == "concentration") {
                    Json conc = Json::object();
                    if (!cells.empty()) conc["cells"] = cells;
                    if (!eps.empty()) conc["epsilons"] = eps;
                    if (!b.empty()) {
                        Json k{{"b", b}};
                        if (!cells.empty()) {
                            k["cells"] = cells;
                        } else {
                            std::vector<long long> all;
                            for (std::size_t i = 0; i < b.size(); ++i) all.push_back(static_cast<long long>(i));
                            k["cells"] = all;
                        }
                        if (!eps.empty()) k["epsilon"] = eps.front();
                        if (m) k["m"] = *m;
                        conc["kolmogorov"] = k;
                    }
                    if (!conc.empty()) cfg["concentration"] = conc;
                }
            }
        }
        apply_common(cfg, common);
        return emit(negassoc::parse_config(cfg, run_cmd->parsed() ? config_path : "config"));
    } catch (const negassoc::Error& e) {
        std::cerr << "negassoc: " << negassoc::to_string(e.kind()) << ": " << e.what() << "\n";
        return e.kind() == negassoc::ErrorKind::guard_exceeded ? kExitGuard : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "negassoc: " << e.what() << "\n";
        return kExitUsage;
    }
}
