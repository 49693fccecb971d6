#ifndef ORLICZ_UNIQUENESS_HPP_
#define ORLICZ_UNIQUENESS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orlicz/certify.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/solver.hpp"
#include "orlicz/subspace.hpp"

namespace orlicz
{

/// Uniqueness result that an instance exercises.
namespace theorem
{
inline constexpr const char * kStrictConvexity = "strict_convexity";
inline constexpr const char * kTchebycheff = "tchebycheff_uniqueness";
inline constexpr const char * kOneSpace = "one_space_uniqueness";
inline constexpr const char * kGammaSet = "gamma_set_characterization";
inline constexpr const char * kJumpGenerator = "jump_generator_uniqueness";
inline constexpr const char * kNone = "none";
}  // namespace theorem

enum class UniquenessVerdict { singleton, multiple, inconclusive };

const char * to_string(UniquenessVerdict v);

struct SolutionCluster
{
  /// Member with the smallest modular value.
  Coefficients representative;
  double representative_modular{};
  double radius{};
  std::vector<int> start_ids;
  bool certified{};
};

struct UniquenessReport
{
  std::string instance;
  std::string theorem_tag{theorem::kNone};
  std::vector<SolutionCluster> clusters;
  UniquenessVerdict verdict{UniquenessVerdict::inconclusive};
  /// Largest distance between two start solutions.
  double diameter{};
  std::vector<BestApproxSolution> starts;
};

/**
 * Runs the solver from n_starts seeds and clusters the solutions
 * (single linkage at 1e3 * tol_coeff, then merging until clusters are
 * separated by more than 10x the largest radius). One cluster is a
 * singleton; several clusters are reported as multiple only when every
 * representative passes check_characterization. Any unconverged start
 * makes the verdict inconclusive.
 */
UniquenessReport uniqueness_probe(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg,
  int n_starts, std::string instance = {}, std::string theorem_tag = theorem::kNone);

/// Sign changes of f - p across nodes, eta-zeros collapsed.
int residual_sign_changes(const GridFunction & f, const GridFunction & p);

struct NonUniqWitness
{
  Coefficients p3;
  GridFunction h;
  std::vector<double> epsilons;
  /// modular(h - eps P3) for each eps.
  std::vector<double> modular_values;
  double modular_h{};
  /// max over eps of |modular(h - eps P3) - modular(h)|
  double modular_gap{};
  double slope{};
  double linear_end{};
};

std::vector<double> default_epsilons();

/**
 * Builds h = |P3| sgn(f - p1) for Phi affine on [0, c]. Requires P3 != 0,
 * ||P3|| <= c/2, ||f - p1|| <= c and the eta-zero set of f - p1 inside the
 * eta-zero set of P3. Then eps P3 is a best approximation of h for every
 * 0 < eps < 1 whenever p1 is a best approximation of f.
 */
NonUniqWitness build_nonuniq_witness(
  const Subspace & s, const PhiFunction & phi, const Coefficients & p3_coeffs,
  const GridFunction & f, const GridFunction & p1,
  std::vector<double> epsilons = default_epsilons());

/// measure({|f - p1| > c}) > null_measure_tol, where [0, c] is the affine
/// head of Phi. Throws when Phi has no affine head.
bool condition_b_check(const GridFunction & f, const GridFunction & p1, const PhiFunction & phi);

/// Affine head [0, c] of Phi, if any.
std::optional<AffineSegment> affine_head(const PhiFunction & phi);

/**
 * Nonzero elements of S vanishing (within eta) on Z(f), when Z(f) is a
 * gamma-set. An empty result means 0 is the only such element for this f.
 * Returns an orthonormal basis (in coefficient space) of those elements.
 */
std::vector<Coefficients> elements_vanishing_on_gamma_set(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, double tol);

/// Random continuous target: cosine series sum_{k<=5} a_k cos(k pi t) +
/// b_k sin(k pi t), t = (x - a)/(b - a), with a_k, b_k ~ N(0, amplitude^2 / (1 + k)).
GridFunction random_continuous_function(GridPtr grid, std::mt19937_64 & rng, double amplitude);

/**
 * Uniqueness probes over seeded random continuous targets for a jump
 * generator and a 1-space. Rejects subspaces without a positivity witness
 * and generators without jumps.
 */
std::vector<UniquenessReport> jump_phi_uniqueness_suite(
  const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg, int n_instances,
  std::uint64_t rng_seed, int n_starts = 16, double amplitude = 1.0);

}  // namespace orlicz

#endif  // ORLICZ_UNIQUENESS_HPP_
