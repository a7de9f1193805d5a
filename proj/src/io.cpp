#include "bellshrink/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bellshrink/error.hpp"

namespace bellshrink {

using nlohmann::json;

CsvTable parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_record = [&] {
        if (field_started || !record.empty()) {
            record.push_back(std::move(field));
            records.push_back(std::move(record));
        }
        record.clear();
        field.clear();
        field_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) {
                    throw Error(ErrorKind::schema, "CSV: stray quote on line " + std::to_string(line));
                }
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                field_started = true;
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) throw Error(ErrorKind::schema, "CSV: unterminated quoted field");
    end_record();

    if (records.empty()) throw Error(ErrorKind::schema, "CSV: missing header row");
    CsvTable table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw Error(ErrorKind::schema, "CSV: data row " + std::to_string(r) + " has " +
                                               std::to_string(records[r].size()) + " fields, header has " +
                                               std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_fixed4(double value) {
    if (std::isnan(value)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_number(std::string_view text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const char* first = t.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (trim(table.header[i]) == name) return i;
    throw Error(ErrorKind::schema, "column '" + name + "' not found");
}

}  // namespace

Dataset parse_dataset(const std::filesystem::path& path, const std::string& response,
                      const std::vector<std::string>& features, bool intercept) {
    const CsvTable table = parse_csv(read_file(path));
    const std::size_t y_col = column_index(table, response);
    std::vector<std::string> names = features;
    if (names.empty()) {
        for (std::size_t i = 0; i < table.header.size(); ++i)
            if (i != y_col) names.push_back(trim(table.header[i]));
    }
    std::vector<std::size_t> cols;
    for (const auto& name : names) {
        if (name == response) throw Error(ErrorKind::schema, "response column also listed as a feature");
        cols.push_back(column_index(table, name));
    }
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size()) {
        throw Error(ErrorKind::schema, "duplicate feature column requested");
    }
    if (table.rows.empty()) throw Error(ErrorKind::schema, "no data rows in '" + path.string() + "'");

    const auto n = static_cast<Eigen::Index>(table.rows.size());
    Matrix x(n, static_cast<Eigen::Index>(cols.size()));
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        const std::string row_label = "row " + std::to_string(i + 1);
        double v = 0.0;
        if (!parse_number(row[y_col], v)) {
            throw Error(ErrorKind::validation, row_label + ": response '" + row[y_col] + "' is not numeric");
        }
        if (!(v >= 0.0) || v != std::floor(v) || !std::isfinite(v)) {
            throw Error(ErrorKind::validation,
                        row_label + ": response '" + trim(row[y_col]) + "' is not a nonnegative integer");
        }
        y(i) = v;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (!parse_number(row[cols[j]], v) || !std::isfinite(v)) {
                throw Error(ErrorKind::validation, row_label + ": column '" + names[j] + "' value '" +
                                                       row[cols[j]] + "' is not numeric");
            }
            x(i, static_cast<Eigen::Index>(j)) = v;
        }
    }
    Dataset data = make_dataset(std::move(x), std::move(y), std::move(names), false);
    return intercept ? with_intercept(data) : data;
}

std::string dataset_to_csv(const Dataset& data, const std::string& response_name) {
    const Eigen::Index first = data.intercept ? 1 : 0;
    std::string out = csv_escape(response_name);
    for (Eigen::Index j = first; j < data.x.cols(); ++j) out += "," + csv_escape(data.names[static_cast<std::size_t>(j)]);
    out += "\n";
    for (Eigen::Index i = 0; i < data.x.rows(); ++i) {
        out += format_double(data.y(i));
        for (Eigen::Index j = first; j < data.x.cols(); ++j) out += "," + format_double(data.x(i, j));
        out += "\n";
    }
    return out;
}

namespace {

template <typename T>
std::vector<T> scalar_or_array(const json& doc, const char* key, std::vector<T> fallback) {
    if (!doc.contains(key)) return fallback;
    const json& v = doc.at(key);
    std::vector<T> out;
    try {
        if (v.is_array()) {
            for (const auto& e : v) out.push_back(e.get<T>());
        } else {
            out.push_back(v.get<T>());
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::schema, std::string("config key '") + key + "': " + e.what());
    }
    if (out.empty()) throw Error(ErrorKind::schema, std::string("config key '") + key + "' is empty");
    return out;
}

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::schema, std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

SimulationPlan parse_sim_config(const json& doc) {
    static const std::set<std::string> known{"n_reps", "n", "p", "rho", "beta_true", "beta_scheme",
                                             "seed", "estimators", "intercept", "standardize",
                                             "tol", "max_iter"};
    if (!doc.is_object()) throw Error(ErrorKind::schema, "config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!known.contains(key)) throw Error(ErrorKind::schema, "unknown config key '" + key + "'");
    }

    SimConfig base;
    base.n_reps = get_or<int>(doc, "n_reps", 1000);
    base.seed = get_or<std::uint64_t>(doc, "seed", 1);
    base.intercept = get_or<bool>(doc, "intercept", false);
    base.standardize = get_or<bool>(doc, "standardize", false);
    base.fit.tol = get_or<double>(doc, "tol", base.fit.tol);
    base.fit.max_iter = get_or<int>(doc, "max_iter", base.fit.max_iter);

    std::vector<std::string> est_names;
    for (EstimatorKind k : kAllEstimators) est_names.emplace_back(to_string(k));
    est_names = scalar_or_array<std::string>(doc, "estimators", est_names);
    base.estimators.clear();
    for (const auto& name : est_names) {
        try {
            const EstimatorKind kind = parse_estimator(name);
            if (std::find(base.estimators.begin(), base.estimators.end(), kind) == base.estimators.end()) {
                base.estimators.push_back(kind);
            }
        } catch (const Error& e) {
            throw Error(ErrorKind::schema, e.what());
        }
    }

    const std::string scheme = get_or<std::string>(doc, "beta_scheme", "unit_norm");
    if (scheme != "unit_norm" && scheme != "ones") {
        throw Error(ErrorKind::schema, "beta_scheme must be \"unit_norm\" or \"ones\"");
    }
    std::vector<double> beta_values;
    if (doc.contains("beta_true")) {
        if (doc.contains("beta_scheme")) {
            throw Error(ErrorKind::schema, "give either beta_true or beta_scheme, not both");
        }
        beta_values = scalar_or_array<double>(doc, "beta_true", {});
    }

    const auto rhos = scalar_or_array<double>(doc, "rho", {0.90, 0.95, 0.99});
    const auto ns = scalar_or_array<int>(doc, "n", {100, 200, 400});
    const auto ps = scalar_or_array<int>(doc, "p", {4, 8, 12});

    SimulationPlan plan;
    for (double rho : rhos) {
        for (int n : ns) {
            for (int p : ps) {
                SimConfig c = base;
                c.rho = rho;
                c.n = n;
                c.p = p;
                c.seed = cell_seed(base.seed, rho, n, p);
                if (!beta_values.empty()) {
                    c.beta_true = Eigen::Map<const Vector>(beta_values.data(),
                                                           static_cast<Eigen::Index>(beta_values.size()));
                } else if (scheme == "ones") {
                    c.beta_true = Vector::Ones(p + (c.intercept ? 1 : 0));
                }
                try {
                    validate(c);
                } catch (const Error& e) {
                    throw Error(ErrorKind::schema, e.what());
                }
                plan.cells.push_back(std::move(c));
            }
        }
    }

    plan.echo = {{"n_reps", base.n_reps},   {"n", ns},
                 {"p", ps},                 {"rho", rhos},
                 {"seed", base.seed},       {"estimators", est_names},
                 {"intercept", base.intercept}, {"standardize", base.standardize},
                 {"tol", base.fit.tol},     {"max_iter", base.fit.max_iter}};
    if (!beta_values.empty()) {
        plan.echo["beta_true"] = beta_values;
    } else {
        plan.echo["beta_scheme"] = scheme;
    }
    return plan;
}

SimulationPlan load_sim_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::schema, "config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_sim_config(doc);
}

namespace {

const char* kGridPrefix[] = {"rho", "n", "p", "seed", "n_reps", "n_fit_failed", "mean_mle_trace"};
const char* kEstimatorFields[] = {"mse", "se", "sb", "used", "failed"};

}  // namespace

std::string grid_to_csv(const std::vector<GridRow>& rows, const std::vector<EstimatorKind>& estimators) {
    std::string out;
    for (const char* h : kGridPrefix) out += std::string(h) + ",";
    for (EstimatorKind k : estimators)
        for (const char* f : kEstimatorFields) out += std::string(f) + "_" + std::string(to_string(k)) + ",";
    out += "error\n";

    const std::string na = "nan";
    for (const auto& row : rows) {
        out += format_double(row.rho) + "," + std::to_string(row.n) + "," + std::to_string(row.p) + "," +
               std::to_string(row.seed) + ",";
        if (row.result) {
            const auto& r = *row.result;
            out += std::to_string(r.n_reps) + "," + std::to_string(r.n_fit_failed) + "," +
                   format_double(r.mean_mle_trace) + ",";
            for (EstimatorKind k : estimators) {
                const auto& e = r.at(k);
                out += format_double(e.sim_mse) + "," + format_double(e.mse_spread) + "," +
                       format_double(e.sim_sb) + "," + std::to_string(e.n_used) + "," +
                       std::to_string(e.n_failed) + ",";
            }
        } else {
            out += "0,0," + na + ",";
            for (std::size_t i = 0; i < estimators.size(); ++i) out += na + "," + na + "," + na + ",0,0,";
        }
        out += csv_escape(row.error) + "\n";
    }
    return out;
}

std::vector<GridRow> grid_from_csv(std::string_view text) {
    const CsvTable table = parse_csv(text);
    const std::size_t prefix = std::size(kGridPrefix);
    const std::size_t per = std::size(kEstimatorFields);
    if (table.header.size() < prefix + 1 || (table.header.size() - prefix - 1) % per != 0) {
        throw Error(ErrorKind::schema, "simulation CSV: unexpected header");
    }
    std::vector<EstimatorKind> kinds;
    for (std::size_t c = prefix; c + 1 < table.header.size(); c += per) {
        const std::string& h = table.header[c];
        kinds.push_back(parse_estimator(h.substr(h.find('_') + 1)));
    }
    auto num = [](const std::string& s) {
        double v = 0.0;
        if (!parse_number(s, v)) throw Error(ErrorKind::schema, "simulation CSV: bad number '" + s + "'");
        return v;
    };
    std::vector<GridRow> rows;
    for (const auto& rec : table.rows) {
        GridRow row;
        row.rho = num(rec[0]);
        row.n = static_cast<int>(num(rec[1]));
        row.p = static_cast<int>(num(rec[2]));
        row.seed = std::stoull(rec[3]);
        row.error = rec.back();
        if (row.error.empty()) {
            SimCellResult r;
            r.n_reps = static_cast<int>(num(rec[4]));
            r.n_fit_failed = static_cast<int>(num(rec[5]));
            r.mean_mle_trace = num(rec[6]);
            for (std::size_t i = 0; i < kinds.size(); ++i) {
                const std::size_t c = prefix + i * per;
                EstimatorCellResult e;
                e.kind = kinds[i];
                e.sim_mse = num(rec[c]);
                e.mse_spread = num(rec[c + 1]);
                e.sim_sb = num(rec[c + 2]);
                e.n_used = static_cast<int>(num(rec[c + 3]));
                e.n_failed = static_cast<int>(num(rec[c + 4]));
                r.estimators.push_back(e);
            }
            row.result = std::move(r);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json grid_to_json(const std::vector<GridRow>& rows, const SimulationPlan& plan) {
    json cells = json::array();
    for (const auto& row : rows) {
        json cell = {{"rho", row.rho}, {"n", row.n}, {"p", row.p}, {"seed", row.seed}};
        if (row.result) {
            const auto& r = *row.result;
            cell["status"] = "ok";
            cell["n_reps"] = r.n_reps;
            cell["n_fit_failed"] = r.n_fit_failed;
            cell["mean_mle_trace"] = nullable(r.mean_mle_trace);
            json est = json::array();
            for (const auto& e : r.estimators) {
                est.push_back({{"estimator", std::string(to_string(e.kind))},
                               {"mse", nullable(e.sim_mse)},
                               {"se", nullable(e.mse_spread)},
                               {"sb", nullable(e.sim_sb)},
                               {"n_used", e.n_used},
                               {"n_failed", e.n_failed}});
            }
            cell["estimators"] = std::move(est);
        } else {
            cell["status"] = "failed";
            cell["error"] = row.error;
        }
        cells.push_back(std::move(cell));
    }
    return {{"schema_version", kReportSchemaVersion},
            {"tool", {{"name", "bellshrink"}, {"version", kToolVersion}}},
            {"command", "simulate"},
            {"seed", plan.echo.value("seed", std::uint64_t{0})},
            {"config", plan.echo},
            {"cells", std::move(cells)}};
}

std::string grid_to_table(const std::vector<GridRow>& rows, const std::vector<EstimatorKind>& estimators) {
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.insert(0, w - s.size(), ' ');
        return s;
    };
    constexpr std::size_t w = 10;
    std::string out = pad("rho", 6) + pad("n", 6) + pad("p", 4);
    for (const char* section : {"MSE", "SE", "SB"}) {
        for (EstimatorKind k : estimators) out += pad(std::string(section) + ":" + std::string(to_string(k)), w + 3);
    }
    out += "\n";
    for (const auto& row : rows) {
        char rho[16];
        std::snprintf(rho, sizeof rho, "%.2f", row.rho);
        out += pad(rho, 6) + pad(std::to_string(row.n), 6) + pad(std::to_string(row.p), 4);
        if (!row.result) {
            out += "  FAILED: " + row.error + "\n";
            continue;
        }
        for (int section = 0; section < 3; ++section) {
            for (EstimatorKind k : estimators) {
                const auto& e = row.result->at(k);
                const double v = section == 0 ? e.sim_mse : section == 1 ? e.mse_spread : e.sim_sb;
                out += pad(format_fixed4(v), w + 3);
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace bellshrink
