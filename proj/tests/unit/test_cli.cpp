#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "bhattbayes/estimators.hpp"
#include "bhattbayes/risk.hpp"

using namespace bhattbayes;
using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bhattbayes");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("estimate examples") {
    auto r = run({"estimate", "--n", "5", "--N", "10", "--beta", "1", "--loss", "b2", "--estimator", "bayes"});
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["estimate"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(doc["estimator"] == "bayes_b2");

    r = run({"estimate", "--n", "3", "--N", "10", "--beta", "0.5", "--loss", "b2", "--estimator", "mean"});
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    CHECK(doc["estimate"][0].get<double>() == doctest::Approx(3.5 / 11).epsilon(1e-15));
    CHECK(doc["estimate"][1].get<double>() == doctest::Approx(7.5 / 11).epsilon(1e-15));
    CHECK(doc.contains("posterior_risk"));
    CHECK(doc["posterior"]["type"] == "dirichlet");

    const auto pm = temp_file("bhattbayes_pm.json", R"({"points": [[0.2, 0.8]], "weights": [1.0]})");
    r = run({"estimate", "--posterior-file", pm.string(), "--loss", "b"});
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    CHECK(doc["estimate"][0].get<double>() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(doc["estimate"][1].get<double>() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(doc["estimator"] == "bayes_b1");
  }

  TEST_CASE("metadata is always present") {
    const auto r = run({"estimate", "--n", "2", "--N", "4", "--seed", "42"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["command"] == "estimate");
    CHECK(doc["seed"] == 42);
    CHECK(doc["version"].is_string());
    CHECK(doc["parameters"]["N"] == 4);
    CHECK(doc["parameters"]["beta"] == 0.5);

    const auto t = run({"compare", "--N", "3", "--format", "json"});
    REQUIRE(t.code == 0);
    const auto tdoc = json::parse(t.out);
    CHECK(tdoc["command"] == "compare");
    CHECK(tdoc["columns"].size() == 5);
    CHECK(tdoc["rows"].size() == 4);
  }

  TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"estimate", "--n", "11", "--N", "10"}).code == 2);
    CHECK(run({"estimate", "--n", "1", "--N", "10", "--loss", "b3"}).code == 2);
    CHECK(run({"risk-curve", "--N", "10", "--estimators", "mle,oracle"}).code == 2);
    CHECK(run({"risk-curve", "--N", "10", "--grid", "1"}).code == 2);
    CHECK(run({"beta-scan", "--N", "10", "--beta-min", "2", "--beta-max", "1"}).code == 2);
    CHECK(run({"estimate", "--posterior-file", "/nonexistent/file.json"}).code == 2);
    const auto bad = temp_file("bhattbayes_bad.json", R"({"points": [[0.2, 0.8]], "weights": [0.5]})");
    const auto r = run({"estimate", "--posterior-file", bad.string()});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("numeric failures exit with 3") {
    // beta near zero and n=0 give an (almost) point-mass posterior: the ratio is undefined.
    const auto r = run({"reldiff", "--N", "10", "--beta", "1e-300"});
    CHECK(r.code == 3);
    CHECK(r.err.find("undefined ratio") != std::string::npos);
  }

  TEST_CASE("non-convergence exits with 4 and still prints the result") {
    const auto r = run({"lfp", "--N", "10", "--tol", "1e-9", "--max-iters", "2"});
    CHECK(r.code == 4);
    const auto doc = json::parse(r.out);
    CHECK(doc["converged"] == false);
    CHECK(doc["iters"] == 2);
  }

  TEST_CASE("lfp examples") {
    auto r = run({"lfp", "--N", "1"});
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["converged"] == true);
    CHECK(doc["diff"].get<double>() <= 1e-3);
    CHECK(doc["avg_risk"].get<double>() <= doc["max_risk"].get<double>() + 1e-9);
    CHECK(doc.contains("support"));
    CHECK(doc.contains("weights"));

    const auto init = temp_file("bhattbayes_init.json", R"({"support": [0.0, 0.5, 1.0], "weights": [0.25, 0.5, 0.25]})");
    r = run({"lfp", "--N", "2", "--tol", "0.5", "--init-file", init.string()});
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    CHECK(doc["iters"] == 1);
  }

  TEST_CASE("risk-curve examples") {
    auto r = run({"risk-curve", "--N", "10", "--beta", "0.5", "--estimators", "mle,mean,bayes"});
    REQUIRE(r.code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 502);
    CHECK(rows[0] == std::vector<std::string>{"p0", "mle", "mean", "bayes"});
    double mle_max = 0, bayes_max = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].size() == 4);
      mle_max = std::max(mle_max, std::stod(rows[i][1]));
      bayes_max = std::max(bayes_max, std::stod(rows[i][3]));
    }
    CHECK(bayes_max < mle_max);

    r = run({"risk-curve", "--N", "10", "--grid", "3"});
    rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(std::stod(rows[1][0]) == 0.0);
    CHECK(std::stod(rows[2][0]) == 0.5);
    CHECK(std::stod(rows[3][0]) == 1.0);

    // At beta=1 the mean and Bayes curves are close in the interior but the
    // corner risks are the n=0 hedges themselves: 1/12 against the Bayes row.
    r = run({"risk-curve", "--N", "10", "--beta", "1", "--estimators", "mean,bayes", "--grid", "101"});
    rows = parse_csv(r.out);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(1.0 / 12).epsilon(1e-14));
    CHECK(std::stod(rows[1][2]) == doctest::Approx(0.067712784608093235).epsilon(1e-12));
    for (std::size_t i = 11; i + 10 < rows.size(); ++i) {
      CHECK(std::abs(std::stod(rows[i][1]) - std::stod(rows[i][2])) < 0.01);
    }
  }

  TEST_CASE("CSV round trip recomputes to 1e-12") {
    const auto r = run({"risk-curve", "--N", "10", "--beta", "0.5", "--estimators", "mle,mean,bayes", "--grid", "101"});
    const auto rows = parse_csv(r.out);
    const auto b2 = estimator_table(EstimatorKind::BayesB2, 10, 0.5);
    const auto mean = estimator_table(EstimatorKind::PosteriorMean, 10, 0.5);
    for (std::size_t i : {2u, 37u, 80u}) {
      const double p0 = std::stod(rows[i][0]);
      CHECK(std::abs(std::stod(rows[i][2]) - pointwise_risk(p0, mean, LossKind::OneMinusBSquared)) <= 1e-12);
      CHECK(std::abs(std::stod(rows[i][3]) - pointwise_risk(p0, b2, LossKind::OneMinusBSquared)) <= 1e-12);
    }
    const auto c = parse_csv(run({"compare", "--N", "10", "--beta", "0.5"}).out);
    CHECK(std::abs(std::stod(c[4][3]) - b2[3][0]) <= 1e-12);
  }

  TEST_CASE("compare examples") {
    auto rows = parse_csv(run({"compare", "--N", "10", "--beta", "0.5"}).out);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"n", "mle", "mean", "bayes_b2", "bayes_b1"});
    for (int n = 0; n <= 10; ++n) {
      const auto& row = rows[n + 1];
      const double m = std::stod(row[1]), mean = std::stod(row[2]), b2 = std::stod(row[3]);
      if (n == 5) continue;
      CHECK(b2 > std::min(m, mean));
      CHECK(b2 < std::max(m, mean));
    }
    rows = parse_csv(run({"compare", "--N", "10", "--beta", "1"}).out);
    CHECK(std::stod(rows[6][2]) == 0.5);
    CHECK(std::stod(rows[6][3]) == 0.5);
    CHECK(std::stod(rows[6][4]) == 0.5);
    const double mle0 = std::stod(rows[1][1]), b20 = std::stod(rows[1][3]), mean0 = std::stod(rows[1][2]);
    CHECK(mle0 == 0.0);
    CHECK(mle0 < b20);
    CHECK(b20 < mean0);
    CHECK(mean0 == doctest::Approx(1.0 / 12).epsilon(1e-15));
  }

  TEST_CASE("reldiff output shape") {
    const auto rows = parse_csv(run({"reldiff", "--N", "10", "--beta", "0.5"}).out);
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == std::vector<std::string>{"n", "relative_suboptimality"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) >= -1e-12);
  }

  TEST_CASE("beta-scan writes the curve file") {
    const auto curve = std::filesystem::temp_directory_path() / "bhattbayes_curve.csv";
    std::filesystem::remove(curve);
    const auto r = run({"beta-scan", "--N", "10", "--step", "0.05", "--curve-file", curve.string()});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["beta_star"].get<double>() == doctest::Approx(0.44).epsilon(0.05));
    std::ifstream f(curve);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto rows = parse_csv(ss.str());
    CHECK(rows[0] == std::vector<std::string>{"beta", "max_risk"});
    CHECK(rows.size() > 30);
  }

  TEST_CASE("output flag and environment directory") {
    const auto dir = std::filesystem::temp_directory_path() / "bhattbayes_out";
    std::filesystem::create_directories(dir);
    const auto file = dir / "explicit.csv";
    auto r = run({"compare", "--N", "2", "-o", file.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(std::filesystem::exists(file));

    setenv(cli::kOutputDirEnv, dir.c_str(), 1);
    r = run({"compare", "--N", "2"});
    CHECK(r.out.empty());
    CHECK(std::filesystem::exists(dir / "compare.csv"));
    r = run({"compare", "--N", "2", "-o", (dir / "wins.csv").string()});
    CHECK(std::filesystem::exists(dir / "wins.csv"));
    unsetenv(cli::kOutputDirEnv);
  }

  TEST_CASE("reruns are byte-identical") {
    const std::vector<std::vector<std::string>> commands{
        {"compare", "--N", "10"},
        {"risk-curve", "--N", "10", "--grid", "201"},
        {"reldiff", "--N", "10", "--format", "json"},
        {"estimate", "--n", "4", "--N", "9"},
        {"lfp", "--N", "2", "--seed", "7"},
    };
    for (const auto& cmd : commands) {
      const auto a = run(cmd), b = run(cmd);
      CHECK(a.code == b.code);
      CHECK(a.out == b.out);
    }
  }
}
