#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellshrink/commands.hpp"
#include "bellshrink/error.hpp"

using namespace bellshrink;

namespace {

constexpr int kUsageExit = 2;

struct Common {
    std::string input;
    std::string response = "y";
    std::string features;
    bool no_intercept = false;
    bool intercept = false;
    std::string estimators = "mle,lte,aulte,maulte";
    std::optional<double> k;
    std::optional<double> d;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "table";
    double tol = 1e-8;
    int max_iter = 100;
    double warn_threshold = 30.0;
    bool timestamp = false;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    for (char c : s) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else if (c != ' ') {
            item.push_back(c);
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

void add_dataset_flags(CLI::App* cmd, Common& c, bool intercept_default_on) {
    cmd->add_option("--input", c.input, "CSV file with a header row")->required();
    cmd->add_option("--response", c.response, "response column (nonnegative integer counts)")->capture_default_str();
    cmd->add_option("--features", c.features, "comma-separated feature columns (default: all others)");
    if (intercept_default_on) {
        cmd->add_flag("--no-intercept", c.no_intercept, "fit without an intercept column");
    } else {
        cmd->add_flag("--intercept", c.intercept, "prepend an intercept column");
    }
    cmd->add_option("--seed", c.seed, "seed recorded in the report");
    cmd->add_option("--out", c.out, "write the JSON report to this file");
    cmd->add_option("--format", c.format, "stdout format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    cmd->add_option("--tol", c.tol, "IRLS relative step tolerance")->capture_default_str();
    cmd->add_option("--max-iter", c.max_iter, "IRLS iteration cap")->capture_default_str();
    cmd->add_option("--warn-threshold", c.warn_threshold, "condition number warning level")->capture_default_str();
    cmd->add_flag("--timestamp", c.timestamp, "include wall-clock time in the report");
}

void add_estimator_flags(CLI::App* cmd, Common& c, bool with_list) {
    if (with_list) {
        cmd->add_option("--estimators", c.estimators, "comma-separated subset of mle,lte,aulte,maulte")
            ->capture_default_str();
    }
    cmd->add_option("--k", c.k, "fix k instead of selecting it");
    cmd->add_option("--d", c.d, "fix d instead of selecting it");
}

RunOptions to_run_options(const Common& c, bool intercept_default_on) {
    RunOptions o;
    o.data.input = c.input;
    o.data.response = c.response;
    o.data.features = split_list(c.features);
    if (intercept_default_on) {
        o.data.intercept = !c.no_intercept;
    } else {
        o.data.intercept = c.intercept;
    }
    o.estimators = parse_estimator_list(c.estimators);
    o.k = c.k;
    o.d = c.d;
    o.fit.tol = c.tol;
    o.fit.max_iter = c.max_iter;
    o.seed = c.seed;
    o.warn_threshold = c.warn_threshold;
    o.timestamp = c.timestamp;
    return o;
}

void emit(const Report& r, const Common& c) {
    const std::string json_text = r.json.dump(2) + "\n";
    if (!c.out.empty()) write_file(c.out, json_text);
    if (c.format == "json") {
        std::cout << json_text;
    } else if (c.format == "csv") {
        std::cout << r.csv;
    } else {
        std::cout << r.table;
    }
    for (const auto& w : r.json.value("warnings", nlohmann::json::array())) {
        std::cerr << "warning: " << w.get<std::string>() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell regression with Liu-type shrinkage estimators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Common fit_c, diag_c, cmp_c;
    auto* fit = app.add_subcommand("fit", "fit the model and the requested estimators");
    add_dataset_flags(fit, fit_c, true);
    add_estimator_flags(fit, fit_c, true);

    auto* diagnose = app.add_subcommand("diagnose", "eigenvalues, condition number and indices");
    add_dataset_flags(diagnose, diag_c, true);

    auto* compare = app.add_subcommand("compare", "all estimators side by side with theorem verdicts");
    add_dataset_flags(compare, cmp_c, false);
    add_estimator_flags(compare, cmp_c, false);
    std::string curve_path;
    CurveOptions curve;
    compare->add_option("--curve", curve_path, "also write the (d, MSE) grid as CSV to this file");
    compare->add_option("--curve-from", curve.from, "first d of the curve")->capture_default_str();
    compare->add_option("--curve-to", curve.to, "last d of the curve")->capture_default_str();
    compare->add_option("--curve-points", curve.points, "number of d values")->capture_default_str();

    SimulateOptions sim;
    std::string sim_config, sim_out, sim_format = "table";
    int threads = 0;
    auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo grid");
    simulate->add_option("--config", sim_config, "JSON simulation config")->required();
    simulate->add_option("--out", sim_out, "output prefix: writes PREFIX.csv and PREFIX.json")->required();
    simulate->add_option("--seed", sim.seed, "override the config seed");
    simulate->add_option("--threads", threads, "worker threads (default: BELLSHRINK_THREADS or all cores)");
    simulate->add_option("--format", sim_format, "stdout format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    simulate->add_flag("--timestamp", sim.timestamp, "include wall-clock time in the JSON");

    SampleOptions sample;
    std::string sample_out;
    auto* sample_cmd = app.add_subcommand("sample", "write a synthetic dataset");
    sample_cmd->add_option("--n", sample.n, "rows")->capture_default_str();
    sample_cmd->add_option("--p", sample.p, "features")->capture_default_str();
    sample_cmd->add_option("--rho", sample.rho, "AR(1) correlation")->capture_default_str();
    sample_cmd->add_option("--beta", sample.beta, "unit, ones, or comma-separated coefficients")
        ->capture_default_str();
    sample_cmd->add_option("--seed", sample.seed, "random seed")->capture_default_str();
    sample_cmd->add_option("--out", sample_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageExit;
    }

    try {
        if (fit->parsed()) {
            emit(cmd_fit(to_run_options(fit_c, true)), fit_c);
        } else if (diagnose->parsed()) {
            emit(cmd_diagnose(to_run_options(diag_c, true)), diag_c);
        } else if (compare->parsed()) {
            const RunOptions o = to_run_options(cmp_c, false);
            emit(cmd_compare(o), cmp_c);
            if (!curve_path.empty()) write_file(curve_path, cmd_curve(o, curve));
        } else if (simulate->parsed()) {
            sim.config = sim_config;
            sim.out_prefix = sim_out;
            sim.threads = threads;
            const SimulateOutcome out = cmd_simulate(sim);
            if (sim_format == "json") {
                std::cout << out.json.dump(2) << "\n";
            } else if (sim_format == "csv") {
                std::cout << out.csv;
            } else {
                std::cout << out.table;
            }
            if (out.failed_cells > 0) {
                std::cerr << "error: " << out.failed_cells << " simulation cell(s) failed\n";
                return exit_code(ErrorKind::cell_failure);
            }
        } else if (sample_cmd->parsed()) {
            sample.out = sample_out;
            cmd_sample(sample);
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
