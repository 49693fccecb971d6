#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "orlicz/certify.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/io.hpp"
#include "orlicz/solver.hpp"
#include "orlicz/uniqueness.hpp"
#include "orlicz/version.hpp"

namespace orlicz::cli
{

namespace
{

using nlohmann::json;
namespace fs = std::filesystem;

struct Options
{
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool quiet{false};
};

// Files are staged in memory and written when the command finishes.
class Outputs
{
public:
  void add(std::string name, std::string content) {files_[std::move(name)] = std::move(content);}

  void add_json(std::string name, const json & doc) {add(std::move(name), doc.dump(2) + "\n");}

  void commit(const fs::path & dir) const
  {
    fs::create_directories(dir);
    for (const auto & [name, content] : files_) {
      const fs::path target = dir / name;
      const fs::path staging = dir / ("." + name + ".partial");
      {
        std::ofstream out(staging, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out.flush()) {
          throw std::runtime_error("cannot write " + staging.string());
        }
      }
      fs::rename(staging, target);
    }
  }

  std::vector<std::string> names() const
  {
    std::vector<std::string> out;
    for (const auto & entry : files_) {
      out.push_back(entry.first);
    }
    return out;
  }

private:
  std::map<std::string, std::string> files_;
};

json document(const std::string & command, const Experiment & ex, json result, int exit_code)
{
  return {
    {"command", command},
    {"build", {{"version", kVersion}}},
    {"config", ex.resolved},
    {"result", std::move(result)},
    {"exit_code", exit_code},
  };
}

template<typename T>
std::string csv_of(const T & write)
{
  std::ostringstream s;
  write(s);
  return s.str();
}

int cmd_solve(const Experiment & ex, Outputs & files, std::ostream & log)
{
  const auto sol = solve(ex.target, ex.subspace, ex.phi, ex.solver);
  const auto p = ex.subspace.evaluate(sol.coeffs);
  const int code = sol.converged ? kSuccess : kNotConverged;
  files.add_json("solution.json", document("solve", ex, to_json(sol), code));
  files.add("residual.csv", csv_of([&](std::ostream & s) {write_residual_csv(s, ex.target, p);}));
  log << "modular " << sol.modular_value << ", gap " << sol.gap <<
  (sol.converged ? ", converged\n" : ", not converged\n");
  return code;
}

int cmd_certify(Experiment & ex, Outputs & files, std::ostream & log)
{
  auto & spec = ex.resolved["certify"];
  const Coefficients c = coefficients_field(spec, "certify", "coeffs", ex.subspace.dim());
  const auto p = ex.subspace.evaluate(c);
  const double value = modular(ex.phi, ex.target - p);
  if (!spec.contains("tol")) {
    spec["tol"] = certificate_tol(value);
  } else if (!spec["tol"].is_number()) {
    throw ConfigError("certify.tol: expected a number");
  }
  CertifyOptions opts;
  opts.n_random = spec["n_random"].get<int>();
  opts.seed = ex.seed;
  const auto cert = check_characterization(
    ex.target, p, ex.subspace, ex.phi, spec["tol"].get<double>(), opts);
  const int code = cert.verdict ? kSuccess : kCertificateFailed;
  json result = to_json(cert);
  result["modular_value"] = value;
  files.add_json("certificate.json", document("certify", ex, std::move(result), code));
  log << (cert.verdict ? "certified" : "not certified") << ", min margin " << cert.min_margin() <<
    " (tol " << cert.tol << ")\n";
  return code;
}

int verdict_code(const UniquenessReport & r)
{
  if (r.verdict != UniquenessVerdict::inconclusive) {
    return kSuccess;
  }
  for (const auto & s : r.starts) {
    if (!s.converged) {
      return kNotConverged;
    }
  }
  return kCertificateFailed;
}

int cmd_unique(const Experiment & ex, Outputs & files, std::ostream & log)
{
  const auto & spec = ex.resolved["unique"];
  const int n_starts = spec["n_starts"].get<int>();
  if (spec["mode"] == "probe") {
    const auto report = uniqueness_probe(ex.target, ex.subspace, ex.phi, ex.solver, n_starts,
        spec.value("instance", std::string("instance")),
        spec.value("theorem_tag", std::string(theorem::kNone)));
    const int code = verdict_code(report);
    files.add_json("uniqueness.json", document("unique", ex, to_json(report), code));
    log << "verdict " << to_string(report.verdict) << ", " << report.clusters.size() <<
      " cluster(s), diameter " << report.diameter << "\n";
    return code;
  }
  const auto reports = jump_phi_uniqueness_suite(ex.subspace, ex.phi, ex.solver,
      spec["n_instances"].get<int>(), ex.seed, n_starts, spec["amplitude"].get<double>());
  int code = kSuccess;
  int singletons = 0;
  json list = json::array();
  for (const auto & r : reports) {
    code = std::max(code, verdict_code(r));
    singletons += r.verdict == UniquenessVerdict::singleton;
    list.push_back(to_json(r));
  }
  files.add_json("uniqueness.json", document("unique", ex, std::move(list), code));
  files.add("suite_summary.csv",
    csv_of([&](std::ostream & s) {write_suite_summary_csv(s, reports);}));
  log << singletons << "/" << reports.size() << " singleton verdicts\n";
  return code;
}

int cmd_witness(const Experiment & ex, Outputs & files, std::ostream & log)
{
  const auto & spec = ex.resolved["witness"];
  const std::size_t n = ex.subspace.dim();
  const Coefficients p1_coeffs = coefficients_field(spec, "witness", "p1", n);
  const Coefficients p3_coeffs = coefficients_field(spec, "witness", "p3", n);
  const auto epsilons = spec["epsilons"].get<std::vector<double>>();
  const double tol = spec["tol"].get<double>();
  const auto p1 = ex.subspace.evaluate(p1_coeffs);

  const auto w = build_nonuniq_witness(ex.subspace, ex.phi, p3_coeffs, ex.target, p1, epsilons);
  const bool p1_best = check_characterization(
    ex.target, p1, ex.subspace, ex.phi, certificate_tol(modular(ex.phi, ex.target - p1))).verdict;
  json per_eps = json::array();
  bool all_certified = true;
  for (const double eps : w.epsilons) {
    const auto p = ex.subspace.evaluate(p3_coeffs * eps);
    const auto cert = check_characterization(
      w.h, p, ex.subspace, ex.phi, certificate_tol(modular(ex.phi, w.h - p)));
    all_certified = all_certified && cert.verdict;
    per_eps.push_back({{"epsilon", eps}, {"certified", cert.verdict},
        {"min_margin", cert.min_margin()}});
  }
  const bool ok = p1_best && all_certified && w.modular_gap <= tol;
  const int code = ok ? kSuccess : kCertificateFailed;
  json result = to_json(w);
  result["p1_certified"] = p1_best;
  result["condition_b"] = condition_b_check(ex.target, p1, ex.phi);
  result["certificates"] = std::move(per_eps);
  files.add_json("witness.json", document("witness", ex, std::move(result), code));
  files.add("witness_h.csv", csv_of([&](std::ostream & s) {write_grid_function_csv(s, w.h);}));
  log << "modular gap " << w.modular_gap << " (tol " << tol << "), " <<
  (all_certified ? "all" : "not all") << " eps*P3 certified\n";
  return code;
}

fs::path output_dir(const Options & opts)
{
  if (!opts.out_dir.empty()) {
    return opts.out_dir;
  }
  if (const char * env = std::getenv("ORLICZ_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "orlicz_out";
}

int execute(const std::string & command, const Options & opts, std::ostream & out)
{
  const fs::path config_path = opts.config;
  const json config = load_config_file(config_path);
  Experiment ex = build_experiment(
    config, command, fs::absolute(config_path).parent_path(), opts.seed);

  Outputs files;
  std::ostringstream log;
  int code = kSuccess;
  if (command == "solve") {
    code = cmd_solve(ex, files, log);
  } else if (command == "certify") {
    code = cmd_certify(ex, files, log);
  } else if (command == "unique") {
    code = cmd_unique(ex, files, log);
  } else {
    code = cmd_witness(ex, files, log);
  }
  const fs::path dir = output_dir(opts);
  files.commit(dir);
  if (!opts.quiet) {
    out << command << ": " << log.str();
    for (const auto & name : files.names()) {
      out << "  wrote " << (dir / name).string() << "\n";
    }
  }
  return code;
}

}  // namespace

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Best approximation in Orlicz spaces: solve, certify and probe uniqueness"};
  app.require_subcommand(1);
  Options opts;
  const std::vector<std::pair<std::string, std::string>> commands{
    {"solve", "Compute a best approximation and its residual table"},
    {"certify", "Check the optimality condition for given coefficients"},
    {"unique", "Multi-start uniqueness probe or jump-generator suite"},
    {"witness", "Build a non-uniqueness witness for an affine-headed Phi"},
  };
  for (const auto & [name, help] : commands) {
    auto * sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "JSON experiment config")->required();
    sub->add_option("--out", opts.out_dir, "Output directory (default $ORLICZ_OUT_DIR or ./orlicz_out)");
    sub->add_option("--seed", opts.seed, "Seed, overrides the config seed");
    sub->add_flag("--quiet", opts.quiet, "Print nothing on success");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, opts, out);
  } catch (const ConfigError & e) {
    err << "error: " << e.what() << "\n";
  } catch (const PreconditionError & e) {
    err << "precondition failed: " << e.what() << "\n";
  } catch (const NumericalError & e) {
    err << "numerical error: " << e.what() << "\n";
  } catch (const std::exception & e) {
    err << "error: " << e.what() << "\n";
  }
  return kConfigError;
}

}  // namespace orlicz::cli
