#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "orlicz/errors.hpp"
#include "orlicz/io.hpp"
#include "orlicz/uniqueness.hpp"

namespace orlicz::cli
{

namespace
{

using nlohmann::json;

void allow_keys(const json & obj, const std::string & path, const std::set<std::string> & allowed)
{
  if (!obj.is_object()) {
    throw ConfigError(path + ": expected an object");
  }
  for (const auto & [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(path + "." + key + ": unknown field");
    }
  }
}

const json & required(const json & obj, const std::string & path, const char * key)
{
  if (!obj.contains(key)) {
    throw ConfigError(path + "." + key + ": missing required field");
  }
  return obj.at(key);
}

json & required(json & obj, const std::string & path, const char * key)
{
  if (!obj.contains(key)) {
    throw ConfigError(path + "." + key + ": missing required field");
  }
  return obj.at(key);
}

double number_field(const json & obj, const std::string & path, const char * key)
{
  const auto & v = required(obj, path, key);
  if (!v.is_number()) {
    throw ConfigError(path + "." + key + ": expected a number");
  }
  return v.get<double>();
}

double number_field(const json & obj, const std::string & path, const char * key, double fallback)
{
  return obj.contains(key) ? number_field(obj, path, key) : fallback;
}

long long integer_field(const json & obj, const std::string & path, const char * key)
{
  const auto & v = required(obj, path, key);
  if (!v.is_number_integer()) {
    throw ConfigError(path + "." + key + ": expected an integer");
  }
  return v.get<long long>();
}

long long integer_field(const json & obj, const std::string & path, const char * key, long long fallback)
{
  return obj.contains(key) ? integer_field(obj, path, key) : fallback;
}

std::string string_field(const json & obj, const std::string & path, const char * key)
{
  const auto & v = required(obj, path, key);
  if (!v.is_string()) {
    throw ConfigError(path + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

std::vector<double> number_list(const json & obj, const std::string & path, const char * key)
{
  const auto & v = required(obj, path, key);
  if (!v.is_array()) {
    throw ConfigError(path + "." + key + ": expected a list of numbers");
  }
  std::vector<double> out;
  for (const auto & x : v) {
    if (!x.is_number()) {
      throw ConfigError(path + "." + key + ": expected a list of numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

std::filesystem::path existing_file(
  const json & obj, const std::string & path, const std::filesystem::path & base_dir)
{
  std::filesystem::path file = string_field(obj, path, "path");
  if (file.is_relative()) {
    file = base_dir / file;
  }
  if (!std::filesystem::is_regular_file(file)) {
    throw ConfigError(path + ".path: file not found: " + file.string());
  }
  return std::filesystem::absolute(file).lexically_normal();
}

std::ifstream open_input(const std::filesystem::path & file, const std::string & path)
{
  std::ifstream in(file);
  if (!in) {
    throw ConfigError(path + ".path: cannot open " + file.string());
  }
  return in;
}

PhiFunction build_phi(json & spec, const std::string & path)
{
  const std::string family = string_field(spec, path, "family");
  if (family == "power") {
    allow_keys(spec, path, {"family", "p"});
    return make_power_phi(number_field(spec, path, "p"));
  }
  if (family == "linear_then_convex") {
    allow_keys(spec, path, {"family", "k", "c", "p"});
    return make_linear_then_convex_phi(
      number_field(spec, path, "k"), number_field(spec, path, "c"), number_field(spec, path, "p"));
  }
  if (family == "generator") {
    allow_keys(spec, path, {"family", "segments"});
    return PhiFunction(generator_from_json(required(spec, path, "segments")));
  }
  if (family == "staircase") {
    allow_keys(spec, path, {"family", "base", "jumps"});
    if (!spec.contains("base")) {
      spec["base"] = {{"family", "power"}, {"p", 1.0}};
    }
    const PhiFunction base = build_phi(spec["base"], path + ".base");
    auto & jumps_spec = required(spec, path, "jumps");
    std::vector<Jump> jumps;
    if (jumps_spec.is_object()) {
      const std::string jpath = path + ".jumps";
      allow_keys(jumps_spec, jpath, {"count", "size"});
      const auto count = integer_field(jumps_spec, jpath, "count");
      const double size = number_field(jumps_spec, jpath, "size", 1.0);
      jumps_spec["size"] = size;
      jumps = dyadic_jumps(static_cast<int>(count), size);
    } else if (jumps_spec.is_array()) {
      for (std::size_t i = 0; i < jumps_spec.size(); ++i) {
        const std::string jpath = path + ".jumps[" + std::to_string(i) + "]";
        allow_keys(jumps_spec[i], jpath, {"at", "size"});
        jumps.push_back({number_field(jumps_spec[i], jpath, "at"),
            number_field(jumps_spec[i], jpath, "size")});
      }
    } else {
      throw ConfigError(path + ".jumps: expected {count, size} or a list of {at, size}");
    }
    return make_staircase_phi(base, jumps);
  }
  throw ConfigError(path + ".family: unknown phi family '" + family + "'");
}

using Sampler = std::function<std::vector<double>(const GridPtr &)>;

std::vector<double> sample_values(const GridPtr & grid, const std::function<double(double)> & fn)
{
  const auto g = GridFunction::sample(grid, fn);
  return {g.values().begin(), g.values().end()};
}

Sampler build_target(
  json & spec, const std::string & path, const std::filesystem::path & base_dir,
  const std::optional<std::uint64_t> & seed)
{
  const std::string family = string_field(spec, path, "family");
  if (family == "polynomial") {
    allow_keys(spec, path, {"family", "coeffs"});
    const auto coeffs = number_list(spec, path, "coeffs");
    return [coeffs](const GridPtr & g) {
             return sample_values(g, [&](double x) {
                 double v = 0.0;
                 for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
                   v = v * x + *it;
                 }
                 return v;
               });
           };
  }
  if (family == "sine" || family == "cosine") {
    allow_keys(spec, path, {"family", "amplitude", "frequency", "phase"});
    const double amp = number_field(spec, path, "amplitude", 1.0);
    const double freq = number_field(spec, path, "frequency", 1.0);
    const double phase = number_field(spec, path, "phase", 0.0);
    spec["amplitude"] = amp;
    spec["frequency"] = freq;
    spec["phase"] = phase;
    const bool sine = family == "sine";
    return [=](const GridPtr & g) {
             return sample_values(g, [=](double x) {
                 const double t = 2.0 * std::numbers::pi * freq * x + phase;
                 return amp * (sine ? std::sin(t) : std::cos(t));
               });
           };
  }
  if (family == "step") {
    allow_keys(spec, path, {"family", "at", "lo", "hi"});
    const double at = number_field(spec, path, "at");
    const double lo = number_field(spec, path, "lo");
    const double hi = number_field(spec, path, "hi");
    return [=](const GridPtr & g) {
             return sample_values(g, [=](double x) {return x < at ? lo : hi;});
           };
  }
  if (family == "abs") {
    allow_keys(spec, path, {"family", "center"});
    const double center = number_field(spec, path, "center", 0.0);
    spec["center"] = center;
    return [=](const GridPtr & g) {
             return sample_values(g, [=](double x) {return std::abs(x - center);});
           };
  }
  if (family == "random") {
    allow_keys(spec, path, {"family", "amplitude"});
    if (!seed) {
      throw ConfigError("seed: missing required field (random target)");
    }
    const double amp = number_field(spec, path, "amplitude", 1.0);
    spec["amplitude"] = amp;
    const std::uint64_t s = *seed;
    return [=](const GridPtr & g) {
             std::mt19937_64 rng(s);
             const auto r = random_continuous_function(g, rng, amp);
             return std::vector<double>(r.values().begin(), r.values().end());
           };
  }
  if (family == "csv") {
    allow_keys(spec, path, {"family", "path"});
    const auto file = existing_file(spec, path, base_dir);
    spec["path"] = file.string();
    return [file, path](const GridPtr & g) {
             auto in = open_input(file, path);
             const auto r = read_grid_function_csv(in, g);
             return std::vector<double>(r.values().begin(), r.values().end());
           };
  }
  if (family == "sum") {
    allow_keys(spec, path, {"family", "terms"});
    auto & terms = required(spec, path, "terms");
    if (!terms.is_array() || terms.empty()) {
      throw ConfigError(path + ".terms: expected a nonempty list of targets");
    }
    std::vector<Sampler> parts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      parts.push_back(build_target(terms[i], path + ".terms[" + std::to_string(i) + "]",
        base_dir, seed));
    }
    return [parts](const GridPtr & g) {
             std::vector<double> total(g->size(), 0.0);
             for (const auto & part : parts) {
               const auto v = part(g);
               for (std::size_t i = 0; i < v.size(); ++i) {
                 total[i] += v[i];
               }
             }
             return total;
           };
  }
  throw ConfigError(path + ".family: unknown target family '" + family + "'");
}

Subspace build_subspace(
  json & spec, const std::string & path, const GridPtr & grid,
  const std::filesystem::path & base_dir)
{
  const std::string family = string_field(spec, path, "family");
  if (family == "monomial") {
    allow_keys(spec, path, {"family", "n"});
    const auto n = integer_field(spec, path, "n");
    if (n < 1) {
      throw ConfigError(path + ".n: must be at least 1");
    }
    return make_monomial_subspace(grid, static_cast<std::size_t>(n));
  }
  if (family == "hat") {
    allow_keys(spec, path, {"family", "knots"});
    return make_hat_subspace(grid, number_list(spec, path, "knots"));
  }
  if (family == "csv") {
    allow_keys(spec, path, {"family", "path"});
    const auto file = existing_file(spec, path, base_dir);
    spec["path"] = file.string();
    auto in = open_input(file, path);
    return read_basis_csv(in, grid);
  }
  throw ConfigError(path + ".family: unknown subspace family '" + family + "'");
}

SolverConfig build_solver(json & spec, std::uint64_t seed)
{
  const std::string path = "solver";
  allow_keys(spec, path, {"max_iters", "step_init", "tol_obj", "tol_coeff", "n_starts",
      "descent_iters"});
  SolverConfig cfg;
  cfg.max_iters = static_cast<int>(integer_field(spec, path, "max_iters", cfg.max_iters));
  cfg.step_init = number_field(spec, path, "step_init", cfg.step_init);
  cfg.tol_obj = number_field(spec, path, "tol_obj", cfg.tol_obj);
  cfg.tol_coeff = number_field(spec, path, "tol_coeff", cfg.tol_coeff);
  cfg.n_starts = static_cast<int>(integer_field(spec, path, "n_starts", cfg.n_starts));
  cfg.descent_iters = static_cast<int>(
    integer_field(spec, path, "descent_iters", cfg.descent_iters));
  cfg.rng_seed = seed;
  try {
    cfg.validate();
  } catch (const PreconditionError & e) {
    throw ConfigError(path + ": " + e.what());
  }
  spec = {{"max_iters", cfg.max_iters}, {"step_init", cfg.step_init}, {"tol_obj", cfg.tol_obj},
    {"tol_coeff", cfg.tol_coeff}, {"n_starts", cfg.n_starts},
    {"descent_iters", cfg.descent_iters}};
  return cfg;
}

void check_command_section(json & config, const std::string & command)
{
  if (!config.contains(command)) {
    config[command] = json::object();
  }
  auto & spec = config[command];
  if (command == "solve") {
    allow_keys(spec, command, {});
  } else if (command == "certify") {
    allow_keys(spec, command, {"coeffs", "tol", "n_random"});
    required(spec, command, "coeffs");
    spec["n_random"] = integer_field(spec, command, "n_random", 8);
  } else if (command == "unique") {
    allow_keys(spec, command, {"mode", "n_starts", "n_instances", "amplitude", "instance",
        "theorem_tag"});
    if (!spec.contains("mode")) {
      spec["mode"] = "probe";
    }
    const std::string mode = string_field(spec, command, "mode");
    if (mode != "probe" && mode != "jump_suite") {
      throw ConfigError("unique.mode: expected 'probe' or 'jump_suite'");
    }
    spec["n_starts"] = integer_field(spec, command, "n_starts", 16);
    if (mode == "jump_suite") {
      spec["n_instances"] = integer_field(spec, command, "n_instances", 20);
      spec["amplitude"] = number_field(spec, command, "amplitude", 1.0);
    }
  } else if (command == "witness") {
    allow_keys(spec, command, {"p1", "p3", "epsilons", "tol"});
    required(spec, command, "p1");
    required(spec, command, "p3");
    if (!spec.contains("epsilons")) {
      spec["epsilons"] = default_epsilons();
    }
    number_list(spec, command, "epsilons");
    spec["tol"] = number_field(spec, command, "tol", 1e-8);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
}

template<typename Fn>
auto in_section(const std::string & path, Fn && fn)
{
  try {
    return fn();
  } catch (const PreconditionError & e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const json::exception & e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

nlohmann::json load_config_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error & e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
}

Coefficients coefficients_field(
  const nlohmann::json & section, const std::string & path, const char * key, std::size_t expected)
{
  const auto values = number_list(section, path, key);
  if (values.size() != expected) {
    throw ConfigError(
            path + "." + key + ": expected " + std::to_string(expected) + " coefficients, got " +
            std::to_string(values.size()));
  }
  return Eigen::Map<const Coefficients>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Experiment build_experiment(
  const nlohmann::json & config, const std::string & command,
  const std::filesystem::path & base_dir, std::optional<std::uint64_t> seed_override)
{
  json resolved = config;
  allow_keys(resolved, "config", {"seed", "phi", "grid", "subspace", "target", "solver",
      "certify", "unique", "witness"});

  std::optional<std::uint64_t> seed = seed_override;
  if (!seed && resolved.contains("seed")) {
    const auto & v = resolved["seed"];
    if (!v.is_number_unsigned()) {
      throw ConfigError("seed: expected a nonnegative integer");
    }
    seed = v.get<std::uint64_t>();
  }
  if (!seed && command != "witness") {
    throw ConfigError("seed: missing required field");
  }
  if (seed) {
    resolved["seed"] = *seed;
  }

  check_command_section(resolved, command);

  const std::uint64_t run_seed = seed.value_or(0);
  PhiFunction phi = in_section("phi", [&] {
        return build_phi(required(resolved, "config", "phi"), "phi");
      });

  auto & grid_spec = required(resolved, "config", "grid");
  allow_keys(grid_spec, "grid", {"a", "b", "n_nodes", "equality_tol"});
  const double a = number_field(grid_spec, "grid", "a", 0.0);
  const double b = number_field(grid_spec, "grid", "b", 1.0);
  const auto n_nodes = integer_field(grid_spec, "grid", "n_nodes");
  if (n_nodes < 2) {
    throw ConfigError("grid.n_nodes: must be at least 2");
  }
  if (!(a < b)) {
    throw ConfigError("grid: need a < b");
  }
  const auto n = static_cast<std::size_t>(n_nodes);

  const Sampler target = build_target(
    required(resolved, "config", "target"), "target", base_dir, seed);
  // eta defaults to 1e-8 (1 + ||f||), so f is sampled before the final grid exists
  const auto probe_grid = make_uniform_grid(a, b, n, 1.0);
  std::vector<double> values = in_section("target", [&] {return target(probe_grid);});
  double eta = 0.0;
  if (grid_spec.contains("equality_tol") && !grid_spec["equality_tol"].is_null()) {
    eta = number_field(grid_spec, "grid", "equality_tol");
    if (!(eta >= 0.0)) {
      throw ConfigError("grid.equality_tol: must be nonnegative");
    }
  } else {
    eta = default_equality_tol(GridFunction(probe_grid, values));
  }
  grid_spec = {{"a", a}, {"b", b}, {"n_nodes", n_nodes}, {"equality_tol", eta}};

  GridPtr grid = make_uniform_grid(a, b, n, eta);
  GridFunction f = in_section("target", [&] {return GridFunction(grid, std::move(values));});
  Subspace s = in_section("subspace", [&] {
        return build_subspace(required(resolved, "config", "subspace"), "subspace", grid, base_dir);
      });
  if (!resolved.contains("solver")) {
    resolved["solver"] = json::object();
  }
  SolverConfig solver = build_solver(resolved["solver"], run_seed);
  return Experiment{std::move(phi), std::move(grid), std::move(s), std::move(f), solver, run_seed,
    std::move(resolved)};
}

}  // namespace orlicz::cli
