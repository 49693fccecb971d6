#ifndef ORLICZ_TOOLS_CONFIG_HPP_
#define ORLICZ_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "orlicz/certify.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/solver.hpp"
#include "orlicz/subspace.hpp"

namespace orlicz::cli
{

/// Bad or missing config field; the message names the field path.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Experiment
{
  PhiFunction phi;
  GridPtr grid;
  Subspace subspace;
  GridFunction target;
  SolverConfig solver;
  std::uint64_t seed{};
  /// Config with defaults filled in and paths made absolute.
  nlohmann::json resolved;
};

nlohmann::json load_config_file(const std::filesystem::path & path);

/**
 * Validates the config against the schema for `command` and builds the
 * instance. Relative csv paths are taken from base_dir. A seed given on the
 * command line replaces the config seed.
 */
Experiment build_experiment(
  const nlohmann::json & config, const std::string & command,
  const std::filesystem::path & base_dir, std::optional<std::uint64_t> seed_override);

Coefficients coefficients_field(const nlohmann::json & section, const std::string & path,
  const char * key, std::size_t expected);

}  // namespace orlicz::cli

#endif  // ORLICZ_TOOLS_CONFIG_HPP_
