#ifndef ORLICZ_SUBSPACE_HPP_
#define ORLICZ_SUBSPACE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orlicz/grid.hpp"

namespace orlicz
{

using Coefficients = Eigen::VectorXd;

/**
 * n-dimensional approximation class given by basis functions sampled on a
 * grid. The basis is stored as a (nodes x n) matrix. Construction rejects
 * bases whose weighted Gram matrix is numerically singular.
 */
class Subspace
{
public:
  Subspace(GridPtr grid, Eigen::MatrixXd basis, std::vector<std::string> labels);

  std::size_t dim() const {return static_cast<std::size_t>(basis_.cols());}
  const Grid & grid() const {return *grid_;}
  const GridPtr & grid_ptr() const {return grid_;}
  const Eigen::MatrixXd & basis_matrix() const {return basis_;}
  const std::vector<std::string> & labels() const {return labels_;}

  GridFunction basis_function(std::size_t j) const;
  GridFunction evaluate(const Coefficients & coeffs) const;

  /// G_jk = sum_i w_i delta_j(x_i) delta_k(x_i)
  Eigen::MatrixXd gram() const;

  /// Weighted least-squares coefficients of f.
  Coefficients least_squares(const GridFunction & f) const;

private:
  GridPtr grid_;
  Eigen::MatrixXd basis_;
  std::vector<std::string> labels_;
};

/// 1, x, ..., x^(n-1)
Subspace make_monomial_subspace(GridPtr grid, std::size_t n);

/// Piecewise-linear interpolation basis on the knots, flat beyond the first
/// and last knot, so the hats sum to 1 everywhere on [a, b].
Subspace make_hat_subspace(GridPtr grid, std::vector<double> knots);

/// Basis from arbitrary closed-form functions.
Subspace make_function_subspace(
  GridPtr grid, const std::vector<std::function<double(double)>> & functions,
  std::vector<std::string> labels);

/// Nodewise sum c_j delta_j.
GridFunction evaluate(const Coefficients & coeffs, const Subspace & s);

/// Zero structure of sampled values, with |v| <= eta treated as zero.
struct ZeroCount
{
  /// Opposite-sign transitions between consecutive nonzero nodes.
  int sign_changes{};
  /// sign_changes plus zero runs that do not separate opposite signs.
  int zeros{};
  /// First node involved in a zero (end node of the first crossing or the
  /// first node of the first zero run); size() when there is none.
  std::size_t first_node{};
};

ZeroCount count_zeros(std::span<const double> values, double eta);

enum class Verdict { pass, fail, inconclusive };

const char * to_string(Verdict v);

/// Re-checkable evidence against a structural property.
struct StructureWitness
{
  Coefficients coeffs;
  std::size_t node{};
  /// Zeros counted (Tchebycheff) or nodes in the equality band (0-space).
  double count{};
};

struct StructureReport
{
  Verdict tchebycheff{Verdict::inconclusive};
  std::optional<StructureWitness> tchebycheff_witness;
  std::optional<Coefficients> one_space_witness;
  Verdict zero_space{Verdict::inconclusive};
  std::optional<StructureWitness> zero_space_witness;
  int trials{};
};

/**
 * Randomized structure probe. Each trial draws Gaussian coefficients and
 * counts zeros of the resulting element: n or more zeros fails the Haar
 * condition; an eta-band of measure above null_measure_tol fails the 0-space
 * condition. A pass is probabilistic. The 1-space witness is filled in as well.
 */
StructureReport tchebycheff_probe(const Subspace & s, int trials, std::uint64_t seed);

/// Searches for h in the span with min_i h(x_i) > 0 by maximizing the
/// smallest node value over the box max|c_j| <= 1 (multi-start coordinate
/// ascent). Returns the maximizer when its minimum is positive.
std::optional<Coefficients> one_space_witness(const Subspace & s, int iterations);

}  // namespace orlicz

#endif  // ORLICZ_SUBSPACE_HPP_
