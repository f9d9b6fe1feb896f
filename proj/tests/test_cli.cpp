#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = zfr_cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("zfr_cli_test_" + name);
}

void write_file(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("double formatting uses 17 significant digits") {
  CHECK(zfr_cli::format_double(0.1) == "0.10000000000000001");
  CHECK(zfr_cli::format_double(3.0) == "3");
  CHECK(zfr_cli::format_double(1e-20) == "9.9999999999999995e-21");
}

TEST_CASE("JSON keys come out sorted") {
  nlohmann::json j = {{"zeta", 1}, {"alpha", 0.5}, {"mid", {{"b", 2}, {"a", 1}}}};
  const auto s = zfr_cli::dump_json(j);
  CHECK(s.find("\"alpha\"") < s.find("\"mid\""));
  CHECK(s.find("\"mid\"") < s.find("\"zeta\""));
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("0.5") != std::string::npos);
}

TEST_CASE("missing --degree is a usage error naming the flag") {
  const auto r = cli({"optimize", "--half-angle-factor"});
  CHECK(r.code == zfr_cli::kExitUsage);
  CHECK(r.err.find("degree") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("parity mismatch is a usage error") {
  const auto r = cli({"optimize", "--degree", "4", "--half-angle-factor"});
  CHECK(r.code == zfr_cli::kExitUsage);
  CHECK(r.err.find("parity") != std::string::npos);
}

TEST_CASE("eval-poly reports theta, M and C with provenance") {
  const auto r = cli({"eval-poly", "--coeffs", "3,4,1", "--B", "4.45"});
  REQUIRE(r.code == zfr_cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["M"].get<double>() == doctest::Approx(0.024979964999195019).epsilon(1e-14));
  CHECK(j["result"]["C"].get<double>() == doctest::Approx(0.61253720452863009).epsilon(1e-14));
  CHECK(j["result"]["theta"].get<double>() == doctest::Approx(1.3689376527419395).epsilon(1e-14));
  CHECK(j["config"]["B"].get<double>() == 4.45);
  CHECK(j["config"]["A"].get<double>() == 76.2);
  CHECK(j["version"].is_string());
  CHECK(j["command"] == "eval-poly");
}

TEST_CASE("text output rounds M to six significant digits unless asked") {
  const auto r = cli({"eval-poly", "--roots", "0.8652559,0.1974476", "--half-angle-factor", "--format", "text"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\nM: 0.0551271\n") != std::string::npos);
  const auto full = cli({"eval-poly", "--roots", "0.8652559,0.1974476", "--half-angle-factor", "--format", "text",
                         "--full-precision"});
  CHECK(full.out.find("\nM: 0.05512708081948") != std::string::npos);
}

TEST_CASE("config file values yield to flags and unknown keys fail") {
  const auto cfg = temp_path("cfg.conf");
  write_file(cfg, "# sample\ncoeffs = [3, 4, 1]\nB = 5.0\nt = 1e20\n");
  const auto r = cli({"eval-poly", "--config", cfg.string(), "--B", "4.45"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["config"]["B"].get<double>() == 4.45);
  CHECK(j["config"]["t"].get<double>() == 1e20);
  CHECK(j["result"]["coefficients"].size() == 3);

  write_file(cfg, "coeffs = 3,4,1\nmystery = 2\n");
  const auto bad = cli({"eval-poly", "--config", cfg.string()});
  CHECK(bad.code == zfr_cli::kExitUsage);
  CHECK(bad.err.find("mystery") != std::string::npos);

  write_file(cfg, "degree = 5\nhalf_angle_factor = true\nstarts = 4\n");
  const auto opt = cli({"optimize", "--config", cfg.string()});
  REQUIRE(opt.code == 0);
  CHECK(nlohmann::json::parse(opt.out)["config"]["half-angle-factor"] == true);
  std::filesystem::remove(cfg);
}

TEST_CASE("output files are written whole or not at all") {
  const auto path = temp_path("out.json");
  std::filesystem::remove(path);
  const auto ok = cli({"eval-poly", "--coeffs", "3,4,1", "--output", path.string()});
  REQUIRE(ok.code == 0);
  CHECK(ok.out.empty());
  CHECK(std::filesystem::exists(path));
  std::filesystem::remove(path);

  const auto fail = cli({"eval-poly", "--coeffs", "1,2", "--output", path.string()});
  CHECK(fail.code == zfr_cli::kExitUsage);
  CHECK_FALSE(std::filesystem::exists(path));
  auto partial = path;
  partial += ".partial";
  CHECK_FALSE(std::filesystem::exists(partial));
}

TEST_CASE("mollifier table CSV header and rows") {
  const auto r = cli({"mollifier-table", "--theta", "0.9", "--lambda", "0.01", "--step", "0.25", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("u,g,w,f\n0,", 0) == 0);
  const auto missing = cli({"mollifier-table", "--theta", "0.9"});
  CHECK(missing.code == zfr_cli::kExitUsage);
}

TEST_CASE("verification commands") {
  const auto lemma = cli({"verify-lemma", "--sigma", "1.5", "--t", "10", "--eta", "0.25", "--tol", "1e-6"});
  CHECK(lemma.code == 0);
  CHECK(nlohmann::json::parse(lemma.out)["result"]["all_pass"] == true);
  const auto mid = cli({"verify-lemma", "--midpoint", "--sigma", "2", "--eta", "0.1", "--format", "csv"});
  CHECK(mid.code == 0);
  CHECK(mid.out.find("midpoint,2,") != std::string::npos);
  const auto trig = cli({"verify-trig", "--coeffs", "3,4,1", "--x", "2,2.5", "--y", "3,40", "--tol", "1e-3"});
  CHECK(trig.code == 0);
  const auto bad = cli({"verify-trig", "--coeffs", "3,4,1", "--x", "2,2.5", "--y", "3"});
  CHECK(bad.code == zfr_cli::kExitUsage);
}

TEST_CASE("region sweep endpoints and flags") {
  const auto r = cli({"region", "--coeffs", "3,4,1", "--t-start", "1e4", "--t-end", "1e30", "--points", "5",
                      "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,eta,lambda,beta_bound,lambda_too_large,small_ordinate\n10000,", 0) == 0);
  CHECK(r.out.find("\n1e+30,") != std::string::npos);
  CHECK(cli({"region", "--coeffs", "3,4,1", "--t", "50"}).code == zfr_cli::kExitUsage);
}

TEST_CASE("identical runs give identical bytes") {
  const std::vector<std::string> args = {"optimize", "--degree", "5", "--half-angle-factor", "--starts", "8"};
  const auto a = cli(args);
  const auto b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}
