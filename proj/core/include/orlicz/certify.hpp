#ifndef ORLICZ_CERTIFY_HPP_
#define ORLICZ_CERTIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/grid.hpp"
#include "orlicz/phi.hpp"
#include "orlicz/subspace.hpp"

namespace orlicz
{

/// One direction Q of the optimality test, with both sides of the inequality.
struct CertificateDirection
{
  std::string label;
  Coefficients coeffs;
  GridFunction q;
  double lhs{};
  double rhs{};
  /// rhs - lhs; for a direction Q this equals the one-sided derivative F_Q^+(0).
  double margin{};
};

struct Certificate
{
  std::vector<CertificateDirection> directions;
  bool verdict{};
  double tol{};

  double min_margin() const;
};

struct CertifyOptions
{
  /// Random span directions; each is tested together with its negative.
  int n_random{8};
  std::uint64_t seed{0};
};

/// 1e-4 * (1 + modular): certificate tolerance scaled to the objective.
double certificate_tol(double modular_value);

/**
 * Tests the optimality condition for P on the directions +-delta_j and
 * seeded random +-Q:
 *
 *   int_{Q>0,f>P} phi^-(|f-P|)|Q| + int_{Q<0,f<P} phi^-(|f-P|)|Q|
 *     - int_{Q<0,f>P} phi^+(|f-P|)|Q| - int_{Q>0,f<P} phi^+(|f-P|)|Q|
 *   <= phi^+(0) int_{f=P} |Q|
 *
 * where {f=P} is the eta-band |f-P| <= eta and the sign sets exclude it.
 * A residual within eta of a jump point t of phi is evaluated at t.
 * The verdict is true iff every margin rhs - lhs is >= -tol. With finitely
 * many directions this certifies against the tested family only.
 */
Certificate check_characterization(
  const GridFunction & f, const GridFunction & p, const Subspace & s, const PhiFunction & phi,
  double tol, const CertifyOptions & opts = {});

/**
 * Two-sided form for generators without jumps:
 * |int phi(|f-P|) sgn(f-P) Q| <= phi(0+) int_{f=P} |Q|. Directions are the
 * same +-pairs as check_characterization, listed once per pair.
 * Throws PreconditionError when the generator has a jump.
 */
Certificate check_smooth_characterization(
  const GridFunction & f, const GridFunction & p, const Subspace & s, const PhiFunction & phi,
  double tol, const CertifyOptions & opts = {});

struct DirectionalDerivative
{
  GridFunction q;
  double value{};
};

/// Right derivative at 0 of eps -> modular(f - (p + eps q)), from the
/// five-term closed form over the sign sets of q and f - p.
DirectionalDerivative directional_derivative(
  const GridFunction & f, const GridFunction & p, const GridFunction & q, const PhiFunction & phi);

struct SignConsistency
{
  double violation_measure{};
  bool verdict{};
};

/// Measure of nodes where (f - p1)(f - p2) < -eta^2; passes when that is at
/// most measure_tol (default null_measure_tol of the grid).
SignConsistency sign_consistency(
  const GridFunction & f, const GridFunction & p1, const GridFunction & p2,
  double measure_tol = -1.0);

/// True iff 0 passes check_characterization for f.
bool is_gamma_set(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, double tol,
  const CertifyOptions & opts = {});

}  // namespace orlicz

#endif  // ORLICZ_CERTIFY_HPP_
