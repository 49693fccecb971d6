#include "orlicz/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "orlicz/errors.hpp"

namespace orlicz
{

namespace
{

struct Sides
{
  double lhs{};
  double rhs{};
};

// A residual within eta of a jump of phi sits on the jump, like the
// eta-band at zero.
double snap_to_jump(double a, const std::vector<double> & jumps, double eta)
{
  for (const double at : jumps) {
    if (std::abs(a - at) <= eta) {
      return at;
    }
  }
  return a;
}

// Both sides of the characterization inequality for one direction.
Sides characterization_sides(
  const GridFunction & f, const GridFunction & p, const GridFunction & q, const PhiFunction & phi)
{
  const auto w = f.grid().weights();
  const double eta = f.grid().equality_tol();
  const auto jumps = phi.generator().jump_points();
  std::vector<double> lhs_terms(f.size(), 0.0);
  std::vector<double> rhs_terms(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f[i] - p[i];
    const double qi = q[i];
    if (std::abs(r) <= eta) {
      rhs_terms[i] = w[i] * std::abs(qi);
      continue;
    }
    if (qi == 0.0) {
      continue;
    }
    // residual shrinks along +Q where Q and f - P share a sign
    const bool shrinking = (qi > 0.0) == (r > 0.0);
    const double a = snap_to_jump(std::abs(r), jumps, eta);
    lhs_terms[i] = shrinking ? w[i] * phi.phi_left(a) * std::abs(qi) :
      -w[i] * phi.phi_right(a) * std::abs(qi);
  }
  return {pairwise_sum(lhs_terms), phi.phi_right(0.0) * pairwise_sum(rhs_terms)};
}

// Two-sided smooth form: |int phi(|r|) sgn(r) Q| vs phi(0+) int_{r=0} |Q|.
Sides smooth_sides(
  const GridFunction & f, const GridFunction & p, const GridFunction & q, const PhiFunction & phi)
{
  const auto w = f.grid().weights();
  const double eta = f.grid().equality_tol();
  std::vector<double> lhs_terms(f.size(), 0.0);
  std::vector<double> rhs_terms(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f[i] - p[i];
    if (std::abs(r) <= eta) {
      rhs_terms[i] = w[i] * std::abs(q[i]);
      continue;
    }
    lhs_terms[i] = w[i] * phi.phi_right(std::abs(r)) * (r > 0.0 ? 1.0 : -1.0) * q[i];
  }
  return {std::abs(pairwise_sum(lhs_terms)), phi.phi_right(0.0) * pairwise_sum(rhs_terms)};
}

struct NamedDirection
{
  std::string label;
  Coefficients coeffs;
};

// +-delta_j followed by +-Q_k for seeded Gaussian span coefficients.
std::vector<NamedDirection> direction_pairs(const Subspace & s, const CertifyOptions & opts)
{
  const auto n = static_cast<Eigen::Index>(s.dim());
  std::vector<NamedDirection> out;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto & label = s.labels()[static_cast<std::size_t>(j)];
    out.push_back({"+" + label, Coefficients::Unit(n, j)});
    out.push_back({"-" + label, -Coefficients::Unit(n, j)});
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < opts.n_random; ++k) {
    Coefficients c(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      c[j] = normal(rng);
    }
    out.push_back({"+rand" + std::to_string(k), c});
    out.push_back({"-rand" + std::to_string(k), -c});
  }
  return out;
}

void check_inputs(const GridFunction & f, const GridFunction & p, const Subspace & s, double tol)
{
  require_same_grid(f, p);
  require_same_grid(f.grid(), s.grid());
  if (!(tol >= 0.0)) {
    throw PreconditionError("certificate tolerance must be nonnegative");
  }
}

}  // namespace

double Certificate::min_margin() const
{
  double m = std::numeric_limits<double>::infinity();
  for (const auto & d : directions) {
    m = std::min(m, d.margin);
  }
  return m;
}

double certificate_tol(double modular_value)
{
  return 1e-4 * (1.0 + modular_value);
}

Certificate check_characterization(
  const GridFunction & f, const GridFunction & p, const Subspace & s, const PhiFunction & phi,
  double tol, const CertifyOptions & opts)
{
  check_inputs(f, p, s, tol);
  Certificate cert;
  cert.tol = tol;
  cert.verdict = true;
  for (auto & dir : direction_pairs(s, opts)) {
    GridFunction q = s.evaluate(dir.coeffs);
    const Sides sides = characterization_sides(f, p, q, phi);
    const double margin = sides.rhs - sides.lhs;
    cert.verdict = cert.verdict && margin >= -tol;
    cert.directions.push_back(
      {std::move(dir.label), std::move(dir.coeffs), std::move(q), sides.lhs, sides.rhs, margin});
  }
  return cert;
}

Certificate check_smooth_characterization(
  const GridFunction & f, const GridFunction & p, const Subspace & s, const PhiFunction & phi,
  double tol, const CertifyOptions & opts)
{
  check_inputs(f, p, s, tol);
  if (phi.generator().has_jumps()) {
    throw PreconditionError(
            "smooth characterization needs a generator without jumps; use check_characterization");
  }
  Certificate cert;
  cert.tol = tol;
  cert.verdict = true;
  const auto dirs = direction_pairs(s, opts);
  for (std::size_t k = 0; k < dirs.size(); k += 2) {
    GridFunction q = s.evaluate(dirs[k].coeffs);
    const Sides sides = smooth_sides(f, p, q, phi);
    const double margin = sides.rhs - sides.lhs;
    cert.verdict = cert.verdict && margin >= -tol;
    std::string label = dirs[k].label;
    label[0] = '~';
    cert.directions.push_back({std::move(label), dirs[k].coeffs, std::move(q), sides.lhs,
        sides.rhs, margin});
  }
  return cert;
}

DirectionalDerivative directional_derivative(
  const GridFunction & f, const GridFunction & p, const GridFunction & q, const PhiFunction & phi)
{
  require_same_grid(f, p);
  require_same_grid(f, q);
  const auto w = f.grid().weights();
  const double eta = f.grid().equality_tol();
  // - int_{Q>0,f>P} phi^- Q - int_{Q<0,f>P} phi^+ Q + int_{Q>0,f<P} phi^+ Q
  // + phi^+(0) int_{f=P} |Q| + int_{Q<0,f<P} phi^- Q
  std::vector<double> pos_above(f.size(), 0.0);
  std::vector<double> neg_above(f.size(), 0.0);
  std::vector<double> pos_below(f.size(), 0.0);
  std::vector<double> equal(f.size(), 0.0);
  std::vector<double> neg_below(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f[i] - p[i];
    const double qi = q[i];
    if (std::abs(r) <= eta) {
      equal[i] = w[i] * std::abs(qi);
    } else if (r > 0.0 && qi > 0.0) {
      pos_above[i] = w[i] * phi.phi_left(r) * qi;
    } else if (r > 0.0 && qi < 0.0) {
      neg_above[i] = w[i] * phi.phi_right(r) * qi;
    } else if (r < 0.0 && qi > 0.0) {
      pos_below[i] = w[i] * phi.phi_right(-r) * qi;
    } else if (r < 0.0 && qi < 0.0) {
      neg_below[i] = w[i] * phi.phi_left(-r) * qi;
    }
  }
  const double value = -pairwise_sum(pos_above) - pairwise_sum(neg_above) +
    pairwise_sum(pos_below) + phi.phi_right(0.0) * pairwise_sum(equal) +
    pairwise_sum(neg_below);
  return {q, value};
}

SignConsistency sign_consistency(
  const GridFunction & f, const GridFunction & p1, const GridFunction & p2, double measure_tol)
{
  require_same_grid(f, p1);
  require_same_grid(f, p2);
  const double eta = f.grid().equality_tol();
  NodeSet violating{std::vector<bool>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) {
    violating.mask[i] = (f[i] - p1[i]) * (f[i] - p2[i]) < -eta * eta;
  }
  const double tol = measure_tol >= 0.0 ? measure_tol : null_measure_tol(f.grid());
  const double m = measure(f.grid(), violating);
  return {m, m <= tol};
}

bool is_gamma_set(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, double tol,
  const CertifyOptions & opts)
{
  return check_characterization(f, GridFunction::zeros(f.grid_ptr()), s, phi, tol, opts).verdict;
}

}  // namespace orlicz
