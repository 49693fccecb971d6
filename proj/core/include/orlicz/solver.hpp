#ifndef ORLICZ_SOLVER_HPP_
#define ORLICZ_SOLVER_HPP_

#include <cstdint>
#include <vector>

#include "orlicz/grid.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/subspace.hpp"

namespace orlicz
{

struct SolverConfig
{
  /// Iteration cap for each stage of a start.
  int max_iters{4000};
  /// Initial subgradient step, in units of the coefficient scale ||f|| / ||delta_j||.
  double step_init{0.5};
  /// Relative optimality gap, gap <= tol_obj * (1 + F), that declares convergence.
  double tol_obj{1e-11};
  double tol_coeff{1e-6};
  int n_starts{8};
  std::uint64_t rng_seed{0};
  /// Subgradient phase length before polishing (capped by max_iters).
  int descent_iters{300};
  /// Keep the best-so-far objective after every iteration.
  bool record_history{false};

  void validate() const;
};

struct BestApproxSolution
{
  Coefficients coeffs;
  double modular_value{};
  int iterations{};
  bool converged{};
  int start_id{};
  /// Certified upper bound on modular_value - min F (infinite when unknown).
  double gap{};
  std::vector<double> history;
};

/// F(c) = sum_i w_i Phi(|f(x_i) - (sum_j c_j delta_j)(x_i)|)
double objective(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const Coefficients & c);

/**
 * Subgradient of F at c: g_j = -sum_i w_i d_i delta_j(x_i) with
 * d_i = phi^+(|r_i|) sgn(r_i) and d_i = 0 where |r_i| <= eta.
 */
Coefficients subgradient(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const Coefficients & c);

/**
 * Minimizes F from n_starts seeded Gaussian starts and returns every start's
 * result, ordered by start id. Each start runs diminishing-step subgradient
 * descent, a coordinate-wise golden-section polish, then central-cut
 * ellipsoid refinement (bisection in one dimension) that certifies the gap.
 */
std::vector<BestApproxSolution> solve_starts(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg);

/// Best start by (modular_value, start_id).
BestApproxSolution solve(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg);

struct Interval
{
  double lo{};
  double hi{};
};

/**
 * Exhaustive search of F over a regular lattice with `resolution` points per
 * coordinate of the box. With zoom_levels > 0 the search is repeated on a box
 * of +-2 lattice cells around the incumbent. Dimension is limited to 3.
 */
BestApproxSolution brute_force_oracle(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi,
  const std::vector<Interval> & box, int resolution, int zoom_levels = 0);

}  // namespace orlicz

#endif  // ORLICZ_SOLVER_HPP_
