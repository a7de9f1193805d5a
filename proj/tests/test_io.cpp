#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <unistd.h>

#include "bellshrink/error.hpp"
#include "bellshrink/io.hpp"

using namespace bellshrink;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = BELLSHRINK_FIXTURE_DIR;

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::io;
}

fs::path temp_path(const std::string& name) {
    return fs::temp_directory_path() / ("bellshrink_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Csv, QuotedFieldsAndCrlf) {
    const CsvTable t = parse_csv(read_file(kFixtures / "quoted.csv"));
    ASSERT_EQ(t.header.size(), 3u);
    EXPECT_EQ(t.header[1], "note, quoted");
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[0][1], "x \"y\"");
    EXPECT_EQ(t.rows[2][2], "1.5");
}

TEST(Csv, Errors) {
    EXPECT_EQ(kind_of([] { parse_csv(""); }), ErrorKind::schema);
    EXPECT_EQ(kind_of([] { parse_csv("a,b\n1\n"); }), ErrorKind::schema);
    EXPECT_EQ(kind_of([] { parse_csv("a,b\n\"1,2\n"); }), ErrorKind::schema);
    EXPECT_EQ(kind_of([] { read_file("/nonexistent/file.csv"); }), ErrorKind::io);
}

TEST(Csv, EscapeRoundTrip) {
    const std::string field = "a,\"b\"\nc";
    const CsvTable t = parse_csv("h\n" + csv_escape(field) + "\n");
    EXPECT_EQ(t.rows[0][0], field);
    EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(Format, DoubleRoundTrip) {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
        EXPECT_EQ(std::stod(format_double(v)), v);
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_fixed4(1133.8251), "1133.8251");
    EXPECT_EQ(format_fixed4(0.53125), "0.5312");
}

TEST(Digest, Fnv1a) {
    EXPECT_EQ(fnv1a64_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a64_hex("a"), "af63dc4c8601ec8c");
}

TEST(ParseDataset, SelectsColumns) {
    const Dataset d = parse_dataset(kFixtures / "small.csv", "y", {}, false);
    EXPECT_EQ(d.x.rows(), 10);
    EXPECT_EQ(d.x.cols(), 2);
    EXPECT_EQ(d.names[0], "a");
    EXPECT_EQ(d.x(3, 0), 1.33);
    EXPECT_EQ(d.y(9), 9.0);

    const Dataset r = parse_dataset(kFixtures / "small.csv", "y", {"b", "a"}, true);
    EXPECT_EQ(r.x.cols(), 3);
    EXPECT_EQ(r.names[1], "b");
    EXPECT_EQ(r.x(0, 1), 1.5);
    EXPECT_TRUE(r.intercept);

    const Dataset q = parse_dataset(kFixtures / "quoted.csv", "y", {"a"}, false);
    EXPECT_EQ(q.x(1, 0), 1.0);
}

TEST(ParseDataset, Errors) {
    EXPECT_EQ(kind_of([] { parse_dataset(kFixtures / "small.csv", "count", {}, false); }), ErrorKind::schema);
    EXPECT_EQ(kind_of([] { parse_dataset(kFixtures / "small.csv", "y", {"c"}, false); }), ErrorKind::schema);
    EXPECT_EQ(kind_of([] { parse_dataset(kFixtures / "small.csv", "y", {"a", "a"}, false); }), ErrorKind::schema);
    EXPECT_EQ(kind_of([] { parse_dataset(kFixtures / "negative_response.csv", "y", {}, false); }),
              ErrorKind::validation);
    EXPECT_EQ(kind_of([] { parse_dataset(kFixtures / "duplicate_column.csv", "y", {}, false); }),
              ErrorKind::collinearity_failure);
    EXPECT_EQ(kind_of([] { parse_dataset(kFixtures / "missing.csv", "y", {}, false); }), ErrorKind::io);
}

TEST(ParseDataset, MessagesNameTheRow) {
    try {
        parse_dataset(kFixtures / "fractional_response.csv", "y", {}, false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation);
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("2.5"), std::string::npos);
    }
    try {
        parse_dataset(kFixtures / "nonnumeric_cell.csv", "y", {}, false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation);
        EXPECT_NE(std::string(e.what()).find("row 4"), std::string::npos) << e.what();
    }
}

TEST(DatasetCsv, RoundTripExact) {
    Rng rng(3);
    Matrix x = mvn_ar1_sample(rng, 30, 3, 0.7);
    Vector y(30);
    for (int i = 0; i < 30; ++i) y(i) = static_cast<double>(i % 5);
    const Dataset d = make_dataset(x, y, {"p", "q", "r"});
    const fs::path path = temp_path("roundtrip.csv");
    write_file(path, dataset_to_csv(d, "count"));
    const Dataset back = parse_dataset(path, "count", {}, false);
    fs::remove(path);
    EXPECT_EQ(back.x, d.x);
    EXPECT_EQ(back.y, d.y);
    EXPECT_EQ(back.names, d.names);
}

TEST(SimConfigJson, GridAndEcho) {
    const auto plan = parse_sim_config(nlohmann::json::parse(
        R"({"n_reps": 5, "n": [100, 200], "p": [4, 8], "rho": [0.9, 0.99], "seed": 3, "estimators": ["mle", "maulte"]})"));
    ASSERT_EQ(plan.cells.size(), 8u);
    EXPECT_EQ(plan.cells[0].rho, 0.9);
    EXPECT_EQ(plan.cells[1].p, 8);
    EXPECT_EQ(plan.cells[2].n, 200);
    EXPECT_EQ(plan.cells[4].rho, 0.99);
    EXPECT_EQ(plan.cells[0].estimators.size(), 2u);
    EXPECT_EQ(plan.cells[0].seed, cell_seed(3, 0.9, 100, 4));
    EXPECT_EQ(plan.echo["seed"], 3);
    EXPECT_EQ(plan.echo["beta_scheme"], "unit_norm");

    const auto ones = parse_sim_config(nlohmann::json::parse(R"({"n": 50, "p": 3, "rho": 0.5, "beta_scheme": "ones"})"));
    ASSERT_EQ(ones.cells.size(), 1u);
    EXPECT_EQ(ones.cells[0].beta_true, Vector::Ones(3));
    EXPECT_EQ(ones.cells[0].n_reps, 1000);
}

TEST(SimConfigJson, Rejections) {
    auto bad = [](const char* text) {
        return kind_of([&] { parse_sim_config(nlohmann::json::parse(text)); });
    };
    EXPECT_EQ(bad(R"({"n": 50, "p": 4, "rho": 0.9, "repetitions": 3})"), ErrorKind::schema);
    EXPECT_EQ(bad(R"({"n": "fifty"})"), ErrorKind::schema);
    EXPECT_EQ(bad(R"({"n": 3, "p": 4, "rho": 0.9})"), ErrorKind::schema);
    EXPECT_EQ(bad(R"({"n": 50, "p": 4, "rho": 0.9, "estimators": ["ridge"]})"), ErrorKind::schema);
    EXPECT_EQ(bad(R"({"n": 50, "p": 2, "rho": 0.9, "beta_true": [1, 2, 3]})"), ErrorKind::schema);
    EXPECT_EQ(bad(R"([1, 2])"), ErrorKind::schema);
    EXPECT_EQ(kind_of([] { load_sim_config(kFixtures / "sim_bad_key.json"); }), ErrorKind::schema);
}

TEST(GridCsv, RoundTrip) {
    SimConfig c;
    c.n_reps = 4;
    c.n = 40;
    c.p = 3;
    c.rho = 0.9;
    c.seed = 5;
    SimConfig bad = c;
    bad.fit.max_iter = 1;
    bad.fit.tol = 1e-300;
    const auto rows = run_grid({c, bad}, 1);
    const std::vector<EstimatorKind> kinds(kAllEstimators, kAllEstimators + 4);
    const std::string csv = grid_to_csv(rows, kinds);
    const auto back = grid_from_csv(csv);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(grid_to_csv(back, kinds), csv);
    EXPECT_EQ(back[0].result->at(EstimatorKind::aulte).sim_mse, rows[0].result->at(EstimatorKind::aulte).sim_mse);
    EXPECT_FALSE(back[1].result.has_value());
    EXPECT_EQ(back[1].error, rows[1].error);

    const std::string table = grid_to_table(rows, kinds);
    EXPECT_NE(table.find("FAILED"), std::string::npos);
    EXPECT_NE(table.find("MSE:MAULTE"), std::string::npos);
}
