#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "annulus/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<const char*> args) {
  args.insert(args.begin(), "annulus");
  std::ostringstream out;
  std::ostringstream err;
  const int code = annulus::cli::run(static_cast<int>(args.size()), args.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Result run_binary(const std::string& args) {
  const std::string cmd = std::string(ANNULUS_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out, {}};
}

}  // namespace

TEST(solve, critical_pair) {
  const Result r = run({"solve", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["c"].get<double>(), -0.64, 1e-9);
  EXPECT_EQ(j["classification"], "Critical");
  EXPECT_NEAR(j["critical_r"].get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(j["K_prime"].get<double>(), 2.56, 1e-9);
  EXPECT_NEAR(j["lipschitz_sup"].get<double>(), 1.6, 1e-9);
  const std::vector<std::string> keys{"c", "hopf_constant", "classification", "modulus_domain",
                                      "modulus_target", "energy", "energy_lower_bound",
                                      "lipschitz_sup", "lonorm_inf", "K", "K_prime",
                                      "critical_c", "critical_r"};
  std::vector<std::string> got;
  const auto ordered = nlohmann::ordered_json::parse(r.out);
  for (const auto& [k, v] : ordered.items()) got.push_back(k);
  EXPECT_EQ(got, keys);
}

TEST(solve, conformal_energy) {
  const Result r = run({"solve", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.8"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["c"].get<double>(), 0.0);
  EXPECT_NEAR(j["energy"].get<double>(), 2.2619467105846511, 1e-7);
}

TEST(solve, below_critical_exit_code) {
  const Result r = run({"solve", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.4"});
  EXPECT_EQ(r.code, 2);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["error"], "BelowCritical");
  EXPECT_NEAR(j["critical_r"].get<double>(), 0.5, 1e-8);
}

TEST(usage, missing_and_invalid_flags) {
  EXPECT_EQ(run({"solve", "--metric", "euclidean", "--q", "0.8", "--r", "0.5"}).code, 1);
  EXPECT_EQ(run({"solve", "--metric", "nope", "--q", "0.8", "--Q", "1", "--r", "0.5"}).code, 1);
  EXPECT_EQ(run({"solve", "--metric", "euclidean", "--q", "1.2", "--Q", "1", "--r", "0.5"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"eval", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.5",
                 "--format", "xml"})
                .code,
            1);
}

TEST(critical, values) {
  Result r = run({"critical", "--metric", "euclidean", "--q", "0.8", "--Q", "1"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["critical_c"].get<double>(), -0.64);
  EXPECT_NEAR(j["critical_r"].get<double>(), 0.5, 1e-10);

  r = run({"critical", "--metric", "inverse_r", "--q", "0.5", "--Q", "1"});
  j = nlohmann::json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["critical_c"].get<double>(), -0.5);
  EXPECT_NEAR(j["critical_r"].get<double>(), 0.1715728752538099, 1e-10);

  r = run({"critical", "--metric", "sphere", "--q", "0.5", "--Q", "1"});
  j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["critical_c"].get<double>(), -0.16, 1e-15);

  r = run({"critical", "--metric", "power:-2", "--q", "0.5", "--Q", "1"});
  j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["critical_r"].is_null());
}

TEST(critical, agrees_with_solve) {
  const auto s = nlohmann::json::parse(
      run({"solve", "--metric", "sphere", "--q", "0.5", "--Q", "1", "--r", "0.5"}).out);
  const auto c =
      nlohmann::json::parse(run({"critical", "--metric", "sphere", "--q", "0.5", "--Q", "1"}).out);
  EXPECT_NEAR(s["critical_r"].get<double>(), c["critical_r"].get<double>(), 1e-9);
}

TEST(eval, header_and_rows) {
  const Result r = run({"eval", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.5",
                        "--grid_s", "2", "--grid_t", "4"});
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0], "s,t,re_w,im_w,re_wz,im_wz,re_wzb,im_wzb,jac,opnorm,lonorm,re_hopf,im_hopf");
  for (int k = 1; k <= 4; ++k) {
    const auto cells = split(rows[k]);
    EXPECT_EQ(cells[0], "0.5");
    EXPECT_LE(std::stod(cells[10]), 1e-9);
  }
  EXPECT_EQ(split(rows[5])[0], "1");
}

TEST(eval, conformal_hopf_zero) {
  const Result r = run({"eval", "--metric", "sphere", "--q", "0.5", "--Q", "1", "--r", "0.5",
                        "--grid_s", "4", "--grid_t", "8"});
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 33u);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto cells = split(rows[k]);
    EXPECT_EQ(std::stod(cells[11]), 0.0);
    EXPECT_EQ(std::stod(cells[12]), 0.0);
  }
}

TEST(eval, seventeen_digits) {
  const Result r = run({"eval", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.5",
                        "--grid_s", "2", "--grid_t", "4"});
  EXPECT_EQ(split(lines(r.out)[1])[2], "0.80000000000000004");
}

TEST(sweep, ladder) {
  const Result r = run({"sweep", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r_min",
                        "0.5", "--r_max", "0.9", "--r_steps", "5"});
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "r,c,classification,energy,lipschitz_sup,lonorm_inf,mod_domain,mod_target");
  EXPECT_EQ(split(rows[1])[2], "Critical");
  EXPECT_NEAR(std::stod(split(rows[4])[1]), 0.0, 1e-9);
  EXPECT_GE(std::stod(split(rows[5])[5]), 0.8);
}

TEST(sweep, all_below_critical) {
  const Result r = run({"sweep", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r_min",
                        "0.3", "--r_max", "0.45", "--r_steps", "4"});
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto cells = split(rows[k]);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_EQ(cells[2], "none");
    EXPECT_EQ(cells[1], "");
    EXPECT_EQ(cells[3], "");
  }
}

TEST(sweep, invalid_range) {
  EXPECT_EQ(run({"sweep", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r_min", "0.9",
                 "--r_max", "0.5", "--r_steps", "5"})
                .code,
            1);
  EXPECT_EQ(run({"sweep", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r_min", "0.5",
                 "--r_max", "0.9", "--r_steps", "1"})
                .code,
            1);
}

TEST(verify, critical_pair_passes) {
  const Result r = run({"verify", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.5"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["all_passed"].get<bool>());
  for (const auto& c : j["checks"]) {
    EXPECT_EQ(c["passed"].get<bool>(), c["measured"].get<double>() <= c["tolerance"].get<double>());
  }
}

TEST(verify, tampered_tolerance_fails) {
  const Result r = run({"verify", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.5",
                        "--tol", "1e-30"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["all_passed"].get<bool>());
}

TEST(verify, conformal_equality_check) {
  const Result r = run({"verify", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.8"});
  EXPECT_EQ(r.code, 0);
  bool found = false;
  const auto report = nlohmann::json::parse(r.out);
  for (const auto& c : report["checks"]) {
    if (c["name"] == "energy_equals_lower_bound") {
      found = true;
      EXPECT_TRUE(c["passed"].get<bool>());
    }
  }
  EXPECT_TRUE(found);
}

TEST(verify, below_critical) {
  const Result r = run({"verify", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--r", "0.4"});
  EXPECT_EQ(r.code, 2);
}

TEST(json, round_trip_idempotent) {
  const Result r = run({"solve", "--metric", "hyperbolic", "--q", "0.3", "--Q", "0.8", "--r", "0.3"});
  const auto j = nlohmann::ordered_json::parse(r.out);
  EXPECT_EQ(j.dump(2) + "\n", r.out);
  EXPECT_EQ(nlohmann::ordered_json::parse(j.dump()), j);
}

TEST(output, out_file) {
  const std::string path = ::testing::TempDir() + "annulus_crit.json";
  const Result r = run({"critical", "--metric", "euclidean", "--q", "0.8", "--Q", "1", "--out",
                        path.c_str()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), run({"critical", "--metric", "euclidean", "--q", "0.8", "--Q", "1"}).out);
  std::remove(path.c_str());
}

TEST(binary, deterministic_output) {
  for (const std::string args :
       {"verify --metric sphere --q 0.5 --Q 1 --r 0.45 --seed 9",
        "eval --metric inverse_r --q 0.5 --Q 1 --r 0.52 --grid_s 5 --grid_t 6",
        "sweep --metric hyperbolic --q 0.3 --Q 0.8 --r_min 0.2 --r_max 0.6 --r_steps 5"}) {
    const Result a = run_binary(args);
    const Result b = run_binary(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(binary, exit_codes) {
  EXPECT_EQ(run_binary("solve --metric euclidean --q 0.8 --Q 1 --r 0.4").code, 2);
  EXPECT_EQ(run_binary("solve --metric euclidean --q 0.8").code, 1);
  EXPECT_EQ(run_binary("verify --metric euclidean --q 0.8 --Q 1 --r 0.5 --tol 1e-30").code, 3);
}
