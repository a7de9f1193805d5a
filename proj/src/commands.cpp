#include "bellshrink/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "bellshrink/error.hpp"
#include "bellshrink/theory.hpp"

namespace bellshrink {

using nlohmann::json;

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(std::isfinite(v(i)) ? json(v(i)) : json(nullptr));
    return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json header(const std::string& command, const RunOptions& o) {
    json h = {{"schema_version", kReportSchemaVersion},
              {"tool", {{"name", "bellshrink"}, {"version", kToolVersion}}},
              {"command", command},
              {"seed", o.seed ? json(*o.seed) : json(nullptr)}};
    if (o.timestamp) h["timestamp"] = utc_now();
    return h;
}

struct FittedInput {
    Dataset data;
    FitResult fit;
    SpectralModel spec;
    json input;
};

FittedInput load_and_fit(const RunOptions& o, bool default_intercept) {
    const bool intercept = o.data.intercept.value_or(default_intercept);
    FittedInput f;
    const std::string bytes = read_file(o.data.input);
    f.data = parse_dataset(o.data.input, o.data.response, o.data.features, intercept);
    f.fit = irls_fit(f.data, o.fit);
    if (!f.fit.converged) {
        throw Error(ErrorKind::numeric_failure, "IRLS did not converge in " + std::to_string(o.fit.max_iter) +
                                                    " iterations");
    }
    f.spec = spectral(f.data, f.fit);

    std::vector<std::string> features(f.data.names.begin() + (intercept ? 1 : 0), f.data.names.end());
    f.input = {{"path", o.data.input.generic_string()},
               {"digest", "fnv1a64:" + fnv1a64_hex(bytes)},
               {"n", f.data.x.rows()},
               {"p", f.data.x.cols()},
               {"response", o.data.response},
               {"features", features},
               {"intercept", intercept}};
    return f;
}

json fit_json(const FittedInput& f, const FitConfig& config) {
    return {{"converged", f.fit.converged},
            {"iterations", f.fit.iterations},
            {"loglik", f.fit.loglik},
            {"tol", config.tol},
            {"max_iter", config.max_iter},
            {"eta_clamped", f.fit.eta_clamped},
            {"coefficient_names", f.data.names},
            {"beta_mle", to_json(f.fit.beta_mle)}};
}

json diagnostics_json(const SpectralModel& spec, double warn_threshold, json& warnings) {
    const CollinearityDiagnostics diag = collinearity_diagnostics(spec);
    const bool warn = diag.condition_number > warn_threshold;
    if (warn) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "condition number %.4f exceeds %.4g: severe multicollinearity",
                      diag.condition_number, warn_threshold);
        warnings.push_back(buf);
    }
    return {{"eigenvalues", to_json(spec.lambda)},
            {"condition_number", number_or_null(diag.condition_number)},
            {"condition_indices", to_json(diag.condition_indices)},
            {"warn_threshold", warn_threshold},
            {"collinearity_warning", warn}};
}

json estimate_json(const ShrinkageEstimate& e) {
    const bool mle = e.kind == EstimatorKind::mle;
    return {{"name", std::string(to_string(e.kind))},
            {"k", mle ? json(nullptr) : json(e.params.k)},
            {"d", mle ? json(nullptr) : json(e.params.d)},
            {"k_source", std::string(to_string(e.k_source))},
            {"d_source", std::string(to_string(e.d_source))},
            {"coefficients", to_json(e.beta)},
            {"mse", number_or_null(e.scalar_mse)},
            {"sb", number_or_null(e.squared_bias)}};
}

json verdict_json(const TheoremVerdict& v) {
    json out = {{"id", std::string(to_string(v.id))},
                {"condition_holds", v.condition_holds},
                {"difference_value", number_or_null(v.difference_value)},
                {"consistent", v.consistent},
                {"degenerate", v.degenerate}};
    if (v.trenkler_value) out["trenkler_value"] = number_or_null(*v.trenkler_value);
    if (v.covariance_difference_pd) out["covariance_difference_pd"] = *v.covariance_difference_pd;
    if (v.trenkler_superior) out["trenkler_superior"] = *v.trenkler_superior;
    if (v.difference_min_eigenvalue) out["difference_min_eigenvalue"] = number_or_null(*v.difference_min_eigenvalue);
    if (v.stated_interval_holds) out["stated_interval_holds"] = *v.stated_interval_holds;
    if (v.interval_agrees) out["interval_agrees"] = *v.interval_agrees;
    return out;
}

std::string pad_left(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

std::string pad_right(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string cell4(const json& v) { return v.is_number() ? format_fixed4(v.get<double>()) : "-"; }
std::string cell17(const json& v) { return v.is_number() ? format_double(v.get<double>()) : ""; }

// One column per estimator; rows are coefficients, then k, d, MSE, SB.
void render_estimators(const json& report, std::string& table, std::string& csv) {
    const json& ests = report.at("estimators");
    const auto& names = report.at("fit").at("coefficient_names");
    std::size_t label_w = 8;
    for (const auto& n : names) label_w = std::max(label_w, n.get<std::string>().size() + 2);
    constexpr std::size_t w = 14;

    table += pad_right("", label_w);
    csv += "row";
    for (const auto& e : ests) {
        table += pad_left(e.at("name").get<std::string>(), w);
        csv += "," + e.at("name").get<std::string>();
    }
    table += "\n";
    csv += "\n";

    auto add_row = [&](const std::string& label, auto value_of) {
        table += pad_right(label, label_w);
        csv += csv_escape(label);
        for (const auto& e : ests) {
            const json v = value_of(e);
            table += pad_left(cell4(v), w);
            csv += "," + cell17(v);
        }
        table += "\n";
        csv += "\n";
    };
    for (std::size_t i = 0; i < names.size(); ++i) {
        add_row(names[i].get<std::string>(), [&](const json& e) { return e.at("coefficients").at(i); });
    }
    add_row("k", [](const json& e) { return e.at("k"); });
    add_row("d", [](const json& e) { return e.at("d"); });
    add_row("MSE", [](const json& e) { return e.at("mse"); });
    add_row("SB", [](const json& e) { return e.at("sb"); });
}

void render_diagnostics(const json& diag, std::string& table) {
    table += "eigenvalues of X'WX and condition indices\n";
    const auto& ev = diag.at("eigenvalues");
    const auto& ci = diag.at("condition_indices");
    for (std::size_t j = 0; j < ev.size(); ++j) {
        table += pad_left(std::to_string(j + 1), 4) + pad_left(cell4(ev[j]), 18) + pad_left(cell4(ci[j]), 14) + "\n";
    }
    table += "condition number: " + cell4(diag.at("condition_number")) + "\n";
}

std::vector<ShrinkageEstimate> run_estimators(const FittedInput& f, const std::vector<EstimatorKind>& kinds,
                                              const RunOptions& o) {
    std::vector<ShrinkageEstimate> out;
    for (EstimatorKind kind : kinds) out.push_back(shrink(kind, f.spec, f.fit.beta_mle, o.k, o.d));
    return out;
}

}  // namespace

Report cmd_fit(const RunOptions& o) {
    const FittedInput f = load_and_fit(o, true);
    json warnings = json::array();
    Report r;
    r.json = header("fit", o);
    r.json["input"] = f.input;
    r.json["fit"] = fit_json(f, o.fit);
    json ests = json::array();
    for (const auto& e : run_estimators(f, o.estimators, o)) ests.push_back(estimate_json(e));
    r.json["estimators"] = std::move(ests);
    r.json["diagnostics"] = diagnostics_json(f.spec, o.warn_threshold, warnings);
    r.json["warnings"] = warnings;

    render_estimators(r.json, r.table, r.csv);
    return r;
}

Report cmd_diagnose(const RunOptions& o) {
    const FittedInput f = load_and_fit(o, true);
    json warnings = json::array();
    Report r;
    r.json = header("diagnose", o);
    r.json["input"] = f.input;
    r.json["diagnostics"] = diagnostics_json(f.spec, o.warn_threshold, warnings);
    r.json["warnings"] = warnings;

    render_diagnostics(r.json["diagnostics"], r.table);
    r.csv = "j,eigenvalue,condition_index\n";
    const auto& diag = r.json["diagnostics"];
    for (std::size_t j = 0; j < diag["eigenvalues"].size(); ++j) {
        r.csv += std::to_string(j + 1) + "," + cell17(diag["eigenvalues"][j]) + "," +
                 cell17(diag["condition_indices"][j]) + "\n";
    }
    return r;
}

Report cmd_compare(const RunOptions& o) {
    const FittedInput f = load_and_fit(o, false);
    json warnings = json::array();
    Report r;
    r.json = header("compare", o);
    r.json["input"] = f.input;
    r.json["fit"] = fit_json(f, o.fit);

    std::vector<EstimatorKind> all(kAllEstimators, kAllEstimators + 4);
    const auto estimates = run_estimators(f, all, o);
    json ests = json::array();
    for (const auto& e : estimates) ests.push_back(estimate_json(e));
    r.json["estimators"] = std::move(ests);
    r.json["diagnostics"] = diagnostics_json(f.spec, o.warn_threshold, warnings);

    const ShrinkageEstimate& aulte = estimates[2];
    const BiasingParams tp = aulte.params;
    json theorems = json::array();
    for (const auto& v : evaluate_all_theorems(f.spec.lambda, tp, f.spec.alpha_hat)) {
        theorems.push_back(verdict_json(v));
        if (!v.consistent) {
            warnings.push_back(std::string(to_string(v.id)) + ": condition holds but the computed difference disagrees");
        }
    }
    r.json["theorem_params"] = {{"k", tp.k},
                                {"d", tp.d},
                                {"k_source", std::string(to_string(aulte.k_source))},
                                {"d_source", std::string(to_string(aulte.d_source))}};
    r.json["theorems"] = std::move(theorems);
    r.json["warnings"] = warnings;

    render_estimators(r.json, r.table, r.csv);
    char buf[160];
    std::snprintf(buf, sizeof buf, "\ntheorem conditions at k = %.4f, d = %.4f\n", tp.k, tp.d);
    r.table += buf;
    for (const auto& t : r.json["theorems"]) {
        std::string line = pad_right(t["id"].get<std::string>(), 4) +
                           pad_right(t["condition_holds"].get<bool>() ? "holds" : "fails", 7) +
                           "difference " + pad_left(format_fixed4(t["difference_value"].is_number()
                                                                      ? t["difference_value"].get<double>()
                                                                      : NAN),
                                                    12);
        if (t.contains("trenkler_value") && t["trenkler_value"].is_number()) {
            line += "  trenkler " + format_fixed4(t["trenkler_value"].get<double>());
        }
        if (t.contains("interval_agrees") && !t["interval_agrees"].get<bool>()) line += "  (stated interval disagrees)";
        if (!t["consistent"].get<bool>()) line += "  INCONSISTENT";
        r.table += line + "\n";
    }
    return r;
}

std::string mse_curve_csv(const SpectralModel& spec, double k, const CurveOptions& curve) {
    if (curve.points < 2 || !(curve.to > curve.from)) {
        throw Error(ErrorKind::invalid_input, "curve: need at least 2 points and from < to");
    }
    if (!(k > 0.0)) throw Error(ErrorKind::domain, "curve: k must be positive");
    std::string out = "d,MLE,LTE,AULTE,MAULTE\n";
    const double mle = mse_mle(spec);
    for (int i = 0; i < curve.points; ++i) {
        const double d = curve.from + (curve.to - curve.from) * i / (curve.points - 1);
        const BiasingParams p{k, d};
        out += format_double(d) + "," + format_double(mle);
        for (EstimatorKind kind : {EstimatorKind::lte, EstimatorKind::aulte, EstimatorKind::maulte}) {
            out += "," + format_double(scalar_mse(kind, spec.lambda, p, spec.alpha_hat));
        }
        out += "\n";
    }
    return out;
}

std::string cmd_curve(const RunOptions& o, const CurveOptions& curve) {
    const FittedInput f = load_and_fit(o, false);
    const double k = o.k ? *o.k : select_k(EstimatorKind::lte, f.spec.alpha_hat);
    return mse_curve_csv(f.spec, k, curve);
}

SimulateOutcome cmd_simulate(const SimulateOptions& o) {
    json doc;
    try {
        doc = json::parse(read_file(o.config));
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::schema, "config '" + o.config.string() + "' is not valid JSON: " + e.what());
    }
    if (o.seed && doc.is_object()) doc["seed"] = *o.seed;
    const SimulationPlan plan = parse_sim_config(doc);

    SimulateOutcome out;
    out.estimators = plan.cells.front().estimators;
    out.rows = run_grid(plan.cells, o.threads);
    for (const auto& row : out.rows)
        if (!row.result) ++out.failed_cells;
    out.csv = grid_to_csv(out.rows, out.estimators);
    out.json = grid_to_json(out.rows, plan);
    if (o.timestamp) out.json["timestamp"] = utc_now();
    out.table = grid_to_table(out.rows, out.estimators);

    if (!o.out_prefix.empty()) {
        std::filesystem::path csv_path = o.out_prefix;
        csv_path += ".csv";
        std::filesystem::path json_path = o.out_prefix;
        json_path += ".json";
        write_file(csv_path, out.csv);
        write_file(json_path, out.json.dump(2) + "\n");
    }
    return out;
}

namespace {

Vector parse_beta(const std::string& spec, int p) {
    if (spec == "unit") return Vector::Constant(p, 1.0 / std::sqrt(static_cast<double>(p)));
    if (spec == "ones") return Vector::Ones(p);
    std::vector<double> values;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorKind::invalid_input, "beta: cannot parse '" + item + "'");
        }
    }
    if (static_cast<int>(values.size()) != p) {
        throw Error(ErrorKind::invalid_input, "beta: expected " + std::to_string(p) + " values");
    }
    return Eigen::Map<const Vector>(values.data(), p);
}

}  // namespace

std::string cmd_sample(const SampleOptions& o) {
    SimConfig c;
    c.n = o.n;
    c.p = o.p;
    c.rho = o.rho;
    c.n_reps = 1;
    c.beta_true = parse_beta(o.beta, o.p);
    validate(c);

    Rng rng = Rng(o.seed).substream(0);
    Matrix x = gen_design(rng, o.n, o.p, o.rho);
    Vector y = gen_response(rng, x, c.beta_true);
    Dataset data;
    data.x = std::move(x);
    data.y = std::move(y);
    for (int j = 0; j < o.p; ++j) data.names.push_back("x" + std::to_string(j + 1));

    const std::string csv = dataset_to_csv(data, "y");
    if (!o.out.empty()) write_file(o.out, csv);
    return csv;
}

}  // namespace bellshrink
