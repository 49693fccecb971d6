#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using orlicz::cli::run;

namespace
{

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    std::random_device rd;
    dir_ = fs::temp_directory_path() / ("orlicz_cli_" + std::to_string(rd()));
    fs::create_directories(dir_);
  }

  void TearDown() override {fs::remove_all(dir_);}

  fs::path write_config(const json & config, const std::string & name = "config.json")
  {
    const fs::path p = dir_ / name;
    std::ofstream(p) << config.dump(2);
    return p;
  }

  int cli(std::vector<std::string> args)
  {
    args.insert(args.begin(), "orlicz");
    std::vector<const char *> argv;
    for (const auto & a : args) {
      argv.push_back(a.c_str());
    }
    out_.str("");
    err_.str("");
    return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  int command(const std::string & name, const json & config, const std::string & out = "out")
  {
    return cli({name, "--config", write_config(config).string(), "--out", (dir_ / out).string(),
        "--quiet"});
  }

  json read_json(const std::string & rel) const
  {
    std::ifstream in(dir_ / rel);
    return json::parse(in);
  }

  std::string read_text(const std::string & rel) const
  {
    std::ifstream in(dir_ / rel);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  static json base_config()
  {
    return {
      {"seed", 7},
      {"phi", {{"family", "power"}, {"p", 2}}},
      {"grid", {{"a", 0}, {"b", 1}, {"n_nodes", 512}}},
      {"subspace", {{"family", "monomial"}, {"n", 1}}},
      {"target", {{"family", "polynomial"}, {"coeffs", {0, 1}}}},
    };
  }

  static json witness_config()
  {
    return {
      {"phi", {{"family", "linear_then_convex"}, {"k", 1}, {"c", 1}, {"p", 2}}},
      {"grid", {{"n_nodes", 1024}, {"equality_tol", 1e-8}}},
      {"subspace", {{"family", "monomial"}, {"n", 2}}},
      {"target", {{"family", "sum"}, {"terms", {
          {{"family", "polynomial"}, {"coeffs", {0.2, 0.1}}},
          {{"family", "cosine"}, {"amplitude", 0.4}}}}}},
      {"witness", {{"p1", {0.2, 0.1}}, {"p3", {0.3, 0.0}}}},
    };
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, SolveConstantL2FitOfIdentity)
{
  EXPECT_EQ(command("solve", base_config()), 0);
  const auto doc = read_json("out/solution.json");
  EXPECT_NEAR(doc["result"]["coeffs"][0].get<double>(), 0.5, 1e-6);
  EXPECT_TRUE(doc["result"]["converged"].get<bool>());
  const auto csv = read_text("out/residual.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "node,f,P,residual");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 513);
}

TEST_F(CliTest, SolveTargetInSpanHasZeroModular)
{
  auto cfg = base_config();
  cfg["subspace"] = {{"family", "monomial"}, {"n", 3}};
  cfg["target"] = {{"family", "polynomial"}, {"coeffs", {1.0, -2.0, 0.5}}};
  EXPECT_EQ(command("solve", cfg), 0);
  EXPECT_LT(read_json("out/solution.json")["result"]["modular_value"].get<double>(), 1e-12);
}

TEST_F(CliTest, OutputEmbedsResolvedConfig)
{
  EXPECT_EQ(command("solve", base_config()), 0);
  const auto cfg = read_json("out/solution.json")["config"];
  // f(x) = x on midpoints of [0, 1]: sup norm is 1 - 1/1024
  EXPECT_NEAR(cfg["grid"]["equality_tol"].get<double>(), 1e-8 * (2.0 - 1.0 / 1024.0), 1e-20);
  EXPECT_EQ(cfg["solver"]["max_iters"].get<int>(), 4000);
  EXPECT_EQ(cfg["seed"].get<int>(), 7);
}

TEST_F(CliTest, OutputsAreDeterministic)
{
  auto cfg = base_config();
  cfg["phi"] = {{"family", "power"}, {"p", 1.5}};
  cfg["subspace"] = {{"family", "monomial"}, {"n", 2}};
  cfg["target"] = {{"family", "random"}, {"amplitude", 1.0}};
  EXPECT_EQ(command("solve", cfg, "a"), 0);
  EXPECT_EQ(command("solve", cfg, "b"), 0);
  EXPECT_EQ(read_text("a/solution.json"), read_text("b/solution.json"));
  EXPECT_EQ(read_text("a/residual.csv"), read_text("b/residual.csv"));
}

TEST_F(CliTest, SeedFlagOverridesConfig)
{
  auto cfg = base_config();
  cfg["target"] = {{"family", "random"}};
  const auto path = write_config(cfg).string();
  EXPECT_EQ(cli({"solve", "--config", path, "--out", (dir_ / "s").string(), "--seed", "11",
      "--quiet"}), 0);
  EXPECT_EQ(read_json("s/solution.json")["config"]["seed"].get<int>(), 11);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment)
{
  const auto target = dir_ / "from_env";
  ::setenv("ORLICZ_OUT_DIR", target.c_str(), 1);
  const int code = cli({"solve", "--config", write_config(base_config()).string(), "--quiet"});
  ::unsetenv("ORLICZ_OUT_DIR");
  EXPECT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(target / "solution.json"));
}

TEST_F(CliTest, MissingCsvPathIsConfigError)
{
  auto cfg = base_config();
  cfg["target"] = {{"family", "csv"}, {"path", "nowhere.csv"}};
  EXPECT_EQ(command("solve", cfg), 1);
  EXPECT_NE(err_.str().find("target.path"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out" / "solution.json"));
}

TEST_F(CliTest, UnknownFieldIsNamed)
{
  auto cfg = base_config();
  cfg["solver"] = {{"tol_objective", 1e-9}};
  EXPECT_EQ(command("solve", cfg), 1);
  EXPECT_NE(err_.str().find("solver.tol_objective"), std::string::npos);
}

TEST_F(CliTest, SeedIsMandatoryForSolve)
{
  auto cfg = base_config();
  cfg.erase("seed");
  EXPECT_EQ(command("solve", cfg), 1);
  EXPECT_NE(err_.str().find("seed"), std::string::npos);
}

TEST_F(CliTest, CsvTargetAndBasisRoundTrip)
{
  {
    std::ofstream f(dir_ / "f.csv");
    std::ofstream b(dir_ / "basis.csv");
    f << "node,value\n";
    b << "one,x\n";
    f.precision(17);
    b.precision(17);
    for (int i = 0; i < 64; ++i) {
      const double x = (i + 0.5) / 64.0;
      f << x << ',' << 3.0 - 2.0 * x << '\n';
      b << 1.0 << ',' << x << '\n';
    }
  }
  auto cfg = base_config();
  cfg["grid"]["n_nodes"] = 64;
  cfg["target"] = {{"family", "csv"}, {"path", "f.csv"}};
  cfg["subspace"] = {{"family", "csv"}, {"path", "basis.csv"}};
  EXPECT_EQ(command("solve", cfg), 0);
  const auto c = read_json("out/solution.json")["result"]["coeffs"];
  EXPECT_NEAR(c[0].get<double>(), 3.0, 1e-6);
  EXPECT_NEAR(c[1].get<double>(), -2.0, 1e-6);
}

TEST_F(CliTest, NonConvergenceExitsTwo)
{
  auto cfg = base_config();
  cfg["phi"] = {{"family", "power"}, {"p", 3}};
  cfg["subspace"] = {{"family", "monomial"}, {"n", 3}};
  cfg["target"] = {{"family", "random"}};
  cfg["solver"] = {{"max_iters", 1}, {"descent_iters", 0}, {"n_starts", 1}};
  EXPECT_EQ(command("solve", cfg), 2);
  EXPECT_FALSE(read_json("out/solution.json")["result"]["converged"].get<bool>());
}

TEST_F(CliTest, CertifySolvedMinimizer)
{
  ASSERT_EQ(command("solve", base_config()), 0);
  auto cfg = base_config();
  cfg["certify"] = {{"coeffs", read_json("out/solution.json")["result"]["coeffs"]}};
  EXPECT_EQ(command("certify", cfg, "cert"), 0);
  EXPECT_TRUE(read_json("cert/certificate.json")["result"]["verdict"].get<bool>());
}

TEST_F(CliTest, CertifyPerturbedCandidateFails)
{
  auto cfg = base_config();
  cfg["certify"] = {{"coeffs", {0.6}}};
  EXPECT_EQ(command("certify", cfg), 3);
  const auto doc = read_json("out/certificate.json")["result"];
  EXPECT_FALSE(doc["verdict"].get<bool>());
  EXPECT_FALSE(doc["directions"].empty());
  EXPECT_LT(doc["min_margin"].get<double>(), 0.0);
}

TEST_F(CliTest, CertifyExactFit)
{
  auto cfg = base_config();
  cfg["subspace"] = {{"family", "monomial"}, {"n", 2}};
  cfg["certify"] = {{"coeffs", {0.0, 1.0}}};
  EXPECT_EQ(command("certify", cfg), 0);
}

TEST_F(CliTest, CertifyWrongCoefficientCount)
{
  auto cfg = base_config();
  cfg["certify"] = {{"coeffs", {0.5, 1.0}}};
  EXPECT_EQ(command("certify", cfg), 1);
  EXPECT_NE(err_.str().find("certify.coeffs"), std::string::npos);
}

TEST_F(CliTest, UniqueStrictlyConvexIsSingleton)
{
  auto cfg = base_config();
  cfg["unique"] = {{"n_starts", 6}};
  EXPECT_EQ(command("unique", cfg), 0);
  EXPECT_EQ(read_json("out/uniqueness.json")["result"]["verdict"], "singleton");
}

TEST_F(CliTest, UniqueMedianPlateauIsMultiple)
{
  auto cfg = base_config();
  cfg["phi"] = {{"family", "power"}, {"p", 1}};
  cfg["target"] = {{"family", "step"}, {"at", 0.5}, {"lo", -1.0}, {"hi", 1.0}};
  cfg["unique"] = {{"n_starts", 16}};
  EXPECT_EQ(command("unique", cfg), 0);
  EXPECT_EQ(read_json("out/uniqueness.json")["result"]["verdict"], "multiple");
}

TEST_F(CliTest, UniqueWithUnconvergedStartsIsInconclusive)
{
  auto cfg = base_config();
  cfg["phi"] = {{"family", "power"}, {"p", 3}};
  cfg["subspace"] = {{"family", "monomial"}, {"n", 3}};
  cfg["target"] = {{"family", "random"}};
  cfg["solver"] = {{"max_iters", 1}, {"descent_iters", 0}};
  cfg["unique"] = {{"n_starts", 4}};
  EXPECT_EQ(command("unique", cfg), 2);
  EXPECT_EQ(read_json("out/uniqueness.json")["result"]["verdict"], "inconclusive");
}

TEST_F(CliTest, UniqueJumpSuiteWritesSummary)
{
  auto cfg = base_config();
  cfg["phi"] = {{"family", "staircase"}, {"jumps", {{"count", 8}}}};
  cfg["subspace"] = {{"family", "hat"}, {"knots", {0.0, 0.5, 1.0}}};
  cfg["grid"]["n_nodes"] = 257;
  cfg["unique"] = {{"mode", "jump_suite"}, {"n_instances", 2}, {"n_starts", 4}};
  EXPECT_EQ(command("unique", cfg), 0);
  const auto csv = read_text("out/suite_summary.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "instance,theorem_tag,verdict,diameter");
  EXPECT_EQ(read_json("out/uniqueness.json")["result"].size(), 2U);
}

TEST_F(CliTest, WitnessValidInstance)
{
  EXPECT_EQ(command("witness", witness_config()), 0);
  const auto doc = read_json("out/witness.json")["result"];
  EXPECT_LE(doc["modular_gap"].get<double>(), 1e-8);
  EXPECT_TRUE(doc["p1_certified"].get<bool>());
  EXPECT_EQ(doc["certificates"].size(), 9U);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "witness_h.csv"));
}

TEST_F(CliTest, WitnessRejectsLargeP3)
{
  auto cfg = witness_config();
  cfg["witness"]["p3"] = {0.6, 0.0};
  EXPECT_EQ(command("witness", cfg), 1);
  EXPECT_NE(err_.str().find("P3"), std::string::npos);
}

TEST_F(CliTest, WitnessRejectsStrictlyConvexPhi)
{
  auto cfg = witness_config();
  cfg["phi"] = {{"family", "power"}, {"p", 2}};
  EXPECT_EQ(command("witness", cfg), 1);
  EXPECT_NE(err_.str().find("affine"), std::string::npos);
}

TEST_F(CliTest, MissingSubcommandIsUsageError)
{
  EXPECT_EQ(cli({}), 1);
}

}  // namespace
