#include "orlicz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "orlicz/errors.hpp"

namespace orlicz
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// F and its subgradient on a fixed (f, S, Phi) instance.
class Objective
{
public:
  Objective(const GridFunction & f, const Subspace & s, const PhiFunction & phi)
  : f_(f), s_(s), phi_(phi),
    target_(Eigen::Map<const Eigen::VectorXd>(
        f.values().data(), static_cast<Eigen::Index>(f.size()))),
    weights_(Eigen::Map<const Eigen::VectorXd>(
        f.grid().weights().data(), static_cast<Eigen::Index>(f.size()))),
    eta_(f.grid().equality_tol()),
    terms_(f.size())
  {
    require_same_grid(f.grid(), s.grid());
  }

  std::size_t dim() const {return s_.dim();}

  double value(const Coefficients & c)
  {
    ++evaluations_;
    residual_.noalias() = target_ - s_.basis_matrix() * c;
    for (Eigen::Index i = 0; i < residual_.size(); ++i) {
      terms_[static_cast<std::size_t>(i)] = weights_[i] * phi_(std::abs(residual_[i]));
    }
    return finish();
  }

  // With exact set, only exact zeros get d = 0; the eta-band rule is a
  // descent heuristic and does not give a valid lower model of F.
  double value_and_subgradient(const Coefficients & c, Coefficients & g, bool exact = false)
  {
    const double cutoff = exact ? 0.0 : eta_;
    ++evaluations_;
    residual_.noalias() = target_ - s_.basis_matrix() * c;
    scaled_.resize(residual_.size());
    for (Eigen::Index i = 0; i < residual_.size(); ++i) {
      const double r = residual_[i];
      const double a = std::abs(r);
      terms_[static_cast<std::size_t>(i)] = weights_[i] * phi_(a);
      if (a <= cutoff) {
        scaled_[i] = 0.0;
      } else {
        scaled_[i] = weights_[i] * phi_.phi_right(a) * (r > 0.0 ? 1.0 : -1.0);
      }
    }
    const double value = finish();
    g.noalias() = -(s_.basis_matrix().transpose() * scaled_);
    return value;
  }

  long evaluations() const {return evaluations_;}

  const Eigen::VectorXd & residual() const {return residual_;}

private:
  double finish()
  {
    const double value = pairwise_sum(terms_);
    if (!std::isfinite(value)) {
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!std::isfinite(terms_[i])) {
          throw NumericalError("non-finite objective term", i, f_.grid().nodes()[i]);
        }
      }
      throw NumericalError("non-finite objective", 0, f_.grid().nodes()[0]);
    }
    return value;
  }

  const GridFunction & f_;
  const Subspace & s_;
  const PhiFunction & phi_;
  Eigen::Map<const Eigen::VectorXd> target_;
  Eigen::Map<const Eigen::VectorXd> weights_;
  double eta_;
  std::vector<double> terms_;
  Eigen::VectorXd residual_;
  Eigen::VectorXd scaled_;
  long evaluations_{0};
};

// Best point seen by one start, with the optional best-so-far trace.
struct Incumbent
{
  Coefficients c;
  double value{kInf};
  bool record{false};
  std::vector<double> history;

  void offer(const Coefficients & x, double fx)
  {
    if (fx < value) {
      value = fx;
      c = x;
    }
  }

  void tick()
  {
    if (record) {
      history.push_back(value);
    }
  }
};

int subgradient_descent(
  Objective & obj, const Coefficients & start, double step, const SolverConfig & cfg,
  Incumbent & best)
{
  constexpr int kWindow = 50;
  const int budget = std::min(cfg.descent_iters, cfg.max_iters);
  Coefficients c = start;
  Coefficients g(c.size());
  std::vector<double> best_values;
  std::vector<Coefficients> best_points;
  int it = 0;
  for (; it < budget; ++it) {
    const double fx = obj.value_and_subgradient(c, g);
    best.offer(c, fx);
    best.tick();
    best_values.push_back(best.value);
    best_points.push_back(best.c);
    const double gnorm = g.norm();
    if (gnorm == 0.0) {
      ++it;
      break;
    }
    if (it >= kWindow) {
      const auto back = static_cast<std::size_t>(it - kWindow);
      const double decrease = best_values[back] - best.value;
      const double moved = (best_points[back] - best.c).norm();
      if (decrease < cfg.tol_obj * (1.0 + std::abs(best.value)) && moved < cfg.tol_coeff) {
        ++it;
        break;
      }
    }
    c -= (step / std::sqrt(static_cast<double>(it + 1))) * (g / gnorm);
  }
  return it;
}

// Convex 1-D minimization of t -> F(c + t e_j) by bracketing and golden section.
void golden_coordinate(
  Objective & obj, Incumbent & best, Eigen::Index j, double h0, double tol)
{
  Coefficients x = best.c;
  const double x0 = x[j];
  auto eval = [&](double t) {
      x[j] = x0 + t;
      const double v = obj.value(x);
      best.offer(x, v);
      return v;
    };
  const double f0 = best.value;
  double dir = 1.0;
  double f_step = eval(h0);
  if (!(f_step < f0)) {
    const double f_back = eval(-h0);
    if (f_back < f0) {
      dir = -1.0;
      f_step = f_back;
    } else {
      dir = 0.0;
    }
  }
  double lo = -h0;
  double hi = h0;
  if (dir != 0.0) {
    double prev = 0.0;
    double cur = h0;
    double f_cur = f_step;
    for (int k = 0; k < 60; ++k) {
      const double next = 2.0 * cur;
      const double f_next = eval(dir * next);
      if (!(f_next < f_cur)) {
        lo = prev;
        hi = next;
        break;
      }
      prev = cur;
      cur = next;
      f_cur = f_next;
      lo = prev;
      hi = 2.0 * next;
    }
    if (dir < 0.0) {
      std::swap(lo, hi);
      lo = -lo;
      hi = -hi;
    }
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double t1 = b - inv_phi * (b - a);
  double t2 = a + inv_phi * (b - a);
  double f1 = eval(t1);
  double f2 = eval(t2);
  for (int k = 0; k < 200 && (b - a) > tol; ++k) {
    if (f1 < f2) {
      b = t2;
      t2 = t1;
      f2 = f1;
      t1 = b - inv_phi * (b - a);
      f1 = eval(t1);
    } else {
      a = t1;
      t1 = t2;
      f1 = f2;
      t2 = a + inv_phi * (b - a);
      f2 = eval(t2);
    }
  }
}

void coordinate_polish(
  Objective & obj, Incumbent & best, const Coefficients & scale, const SolverConfig & cfg)
{
  constexpr int kSweeps = 2;
  for (int sweep = 0; sweep < kSweeps; ++sweep) {
    const double before = best.value;
    for (Eigen::Index j = 0; j < best.c.size(); ++j) {
      const double h0 = std::max(1e-3 * (std::abs(best.c[j]) + scale[j]), cfg.tol_coeff);
      golden_coordinate(obj, best, j, h0, cfg.tol_coeff);
    }
    best.tick();
    if (!(best.value < before)) {
      break;
    }
  }
}

struct RefineResult
{
  int iterations{};
  double lower_bound{-kInf};
  Coefficients last_center;
};

bool gap_small(double value, double lower, const SolverConfig & cfg)
{
  return value - lower <= cfg.tol_obj * (1.0 + std::abs(value));
}

// Interval bisection on the sign of the subgradient (one coefficient).
RefineResult bisect(
  Objective & obj, Incumbent & best, double center, double radius, int budget,
  const SolverConfig & cfg)
{
  RefineResult out;
  double lo = center - radius;
  double hi = center + radius;
  Coefficients x(1);
  Coefficients g(1);
  while (out.iterations < budget) {
    ++out.iterations;
    x[0] = 0.5 * (lo + hi);
    const double fx = obj.value_and_subgradient(x, g, true);
    best.offer(x, fx);
    best.tick();
    if (g[0] == 0.0) {
      out.lower_bound = std::max(out.lower_bound, fx);
    } else {
      out.lower_bound = std::max(out.lower_bound, fx - std::abs(g[0]) * 0.5 * (hi - lo));
    }
    if (g[0] == 0.0 || gap_small(best.value, out.lower_bound, cfg)) {
      break;
    }
    if (g[0] > 0.0) {
      hi = x[0];
    } else {
      lo = x[0];
    }
    if (!(hi > lo)) {
      break;
    }
  }
  out.last_center = x;
  return out;
}

// Deep-cut ellipsoid method; E = {y : (y - x)^T P^-1 (y - x) <= 1}.
RefineResult ellipsoid(
  Objective & obj, Incumbent & best, const Coefficients & center, double radius, int budget,
  const SolverConfig & cfg)
{
  RefineResult out;
  const Eigen::Index n = center.size();
  const double nd = static_cast<double>(n);
  Coefficients x = center;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) * (radius * radius);
  Coefficients g(n);
  while (out.iterations < budget) {
    ++out.iterations;
    const double fx = obj.value_and_subgradient(x, g, true);
    best.offer(x, fx);
    best.tick();
    if (g.isZero(0.0)) {
      out.lower_bound = std::max(out.lower_bound, fx);
      break;
    }
    const Coefficients Pg = P * g;
    const double gPg = g.dot(Pg);
    if (!(gPg > 0.0) || !std::isfinite(gPg)) {
      break;
    }
    const double s = std::sqrt(gPg);
    out.lower_bound = std::max(out.lower_bound, fx - s);
    if (gap_small(best.value, out.lower_bound, cfg)) {
      break;
    }
    const double alpha = (fx - best.value) / s;
    if (alpha >= 1.0) {
      break;
    }
    const Coefficients gt = Pg / s;
    x -= ((1.0 + nd * alpha) / (nd + 1.0)) * gt;
    P = (nd * nd * (1.0 - alpha * alpha) / (nd * nd - 1.0)) *
      (P - (2.0 * (1.0 + nd * alpha) / ((nd + 1.0) * (1.0 + alpha))) * (gt * gt.transpose()));
    P = 0.5 * (P + P.transpose());
  }
  out.last_center = x;
  return out;
}

// Minimizers of piecewise-linear objectives sit on faces where some
// residuals vanish exactly, or hit a jump point of phi exactly; near-optimal
// iterates miss them by ~gap/slope. Solves for the min-norm correction that
// moves those residuals onto their level and keeps it when F does not grow.
// Returns the accepted increase of F.
double snap_to_face(
  Objective & obj, Incumbent & best, const Subspace & s, const std::vector<double> & jumps,
  double fnorm, double eta)
{
  obj.value(best.c);
  const Eigen::VectorXd r = obj.residual();
  const double band = 1e-6 * (1.0 + fnorm);
  // levels where F has a kink: zero and the jump points of phi
  std::vector<double> levels{0.0};
  for (const double at : jumps) {
    levels.push_back(at);
  }
  std::vector<Eigen::Index> active;
  std::vector<double> targets;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    for (const double level : levels) {
      if (std::abs(std::abs(r[i]) - level) <= band) {
        active.push_back(i);
        targets.push_back(std::copysign(level, r[i]));
        break;
      }
    }
  }
  if (active.empty()) {
    return 0.0;
  }
  const Eigen::MatrixXd & basis = s.basis_matrix();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(active.size()), basis.cols());
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    rows.row(static_cast<Eigen::Index>(k)) = basis.row(active[k]);
    rhs[static_cast<Eigen::Index>(k)] = r[active[k]] - targets[k];
  }
  const Coefficients step = rows.completeOrthogonalDecomposition().solve(rhs);
  if (!step.allFinite() || ((rows * step - rhs).cwiseAbs().maxCoeff() > eta)) {
    return 0.0;
  }
  const Coefficients candidate = best.c + step;
  const double before = best.value;
  const double after = obj.value(candidate);
  if (after > before + 1e-15 * (1.0 + before)) {
    return 0.0;
  }
  best.c = candidate;
  best.value = after;
  best.tick();
  return std::max(0.0, after - before);
}

BestApproxSolution run_start(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg,
  int start_id)
{
  Objective obj(f, s, phi);
  const auto n = static_cast<Eigen::Index>(s.dim());
  const Eigen::MatrixXd & basis = s.basis_matrix();

  const double fnorm = f.sup_norm() > 0.0 ? f.sup_norm() : 1.0;
  Coefficients scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double bn = basis.col(j).cwiseAbs().maxCoeff();
    scale[j] = fnorm / (bn > 0.0 ? bn : 1.0);
  }

  std::seed_seq seq{
    static_cast<std::uint32_t>(cfg.rng_seed), static_cast<std::uint32_t>(cfg.rng_seed >> 32),
    static_cast<std::uint32_t>(start_id)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Coefficients start(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    start[j] = scale[j] * normal(rng);
  }

  Incumbent best;
  best.record = cfg.record_history;
  best.c = start;

  int iterations = subgradient_descent(obj, start, cfg.step_init * scale.norm(), cfg, best);
  coordinate_polish(obj, best, scale, cfg);

  // The refinement ball must contain a minimizer; grow it when the incumbent
  // ends up near its boundary.
  const Coefficients ls = s.least_squares(f);
  double radius = 2.0 * (best.c - ls).norm() + 4.0 * scale.norm();
  double lower = -kInf;
  int budget = cfg.max_iters;
  for (int round = 0; round < 4 && budget > 0; ++round) {
    const Coefficients center = best.c;
    RefineResult r = n == 1 ?
      bisect(obj, best, center[0], radius, budget, cfg) :
      ellipsoid(obj, best, center, radius, budget, cfg);
    budget -= r.iterations;
    iterations += r.iterations;
    lower = r.lower_bound;
    if ((best.c - center).norm() < 0.5 * radius) {
      break;
    }
    radius *= 4.0;
    lower = -kInf;
  }

  const double raised = snap_to_face(
    obj, best, s, phi.generator().jump_points(), fnorm, f.grid().equality_tol());
  lower -= raised;

  BestApproxSolution out;
  out.coeffs = best.c;
  out.modular_value = best.value;
  out.iterations = iterations;
  out.gap = std::isfinite(lower) ? std::max(0.0, best.value - lower) : kInf;
  out.converged = std::isfinite(lower) && gap_small(best.value, lower, cfg);
  out.start_id = start_id;
  out.history = std::move(best.history);
  return out;
}

}  // namespace

void SolverConfig::validate() const
{
  if (max_iters < 1 || descent_iters < 0 || n_starts < 1) {
    throw PreconditionError("solver iteration counts and n_starts must be positive");
  }
  if (!(step_init > 0.0) || !(tol_obj > 0.0) || !(tol_coeff > 0.0)) {
    throw PreconditionError("solver step_init, tol_obj and tol_coeff must be positive");
  }
}

double objective(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const Coefficients & c)
{
  Objective obj(f, s, phi);
  return obj.value(c);
}

Coefficients subgradient(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const Coefficients & c)
{
  Objective obj(f, s, phi);
  Coefficients g(c.size());
  obj.value_and_subgradient(c, g);
  return g;
}

std::vector<BestApproxSolution> solve_starts(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg)
{
  cfg.validate();
  require_same_grid(f.grid(), s.grid());
  std::vector<BestApproxSolution> out;
  out.reserve(static_cast<std::size_t>(cfg.n_starts));
  for (int id = 0; id < cfg.n_starts; ++id) {
    out.push_back(run_start(f, s, phi, cfg, id));
  }
  return out;
}

BestApproxSolution solve(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg)
{
  auto starts = solve_starts(f, s, phi, cfg);
  auto it = std::min_element(
    starts.begin(), starts.end(), [](const auto & lhs, const auto & rhs) {
      if (lhs.modular_value != rhs.modular_value) {
        return lhs.modular_value < rhs.modular_value;
      }
      return lhs.start_id < rhs.start_id;
    });
  return std::move(*it);
}

BestApproxSolution brute_force_oracle(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi,
  const std::vector<Interval> & box, int resolution, int zoom_levels)
{
  const std::size_t n = s.dim();
  if (n > 3) {
    throw PreconditionError("brute_force_oracle supports dimension <= 3");
  }
  if (resolution < 10) {
    throw PreconditionError("brute_force_oracle needs resolution >= 10");
  }
  if (box.size() != n) {
    throw PreconditionError("oracle box needs one interval per coefficient");
  }
  for (const auto & iv : box) {
    if (!(iv.lo <= iv.hi)) {
      throw PreconditionError("oracle box intervals need lo <= hi");
    }
  }
  require_same_grid(f.grid(), s.grid());

  BestApproxSolution best;
  best.modular_value = kInf;
  best.start_id = -1;
  best.converged = true;
  best.gap = kInf;
  std::vector<Interval> current = box;
  Coefficients c(static_cast<Eigen::Index>(n));
  for (int level = 0; level <= zoom_levels; ++level) {
    std::vector<double> cell(n);
    for (std::size_t j = 0; j < n; ++j) {
      cell[j] = (current[j].hi - current[j].lo) / static_cast<double>(resolution - 1);
    }
    std::size_t total = 1;
    for (std::size_t j = 0; j < n; ++j) {
      total *= static_cast<std::size_t>(resolution);
    }
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = rest % static_cast<std::size_t>(resolution);
        rest /= static_cast<std::size_t>(resolution);
        c[static_cast<Eigen::Index>(j)] = current[j].lo + cell[j] * static_cast<double>(k);
      }
      const double v = modular(phi, f - s.evaluate(c));
      ++best.iterations;
      if (v < best.modular_value) {
        best.modular_value = v;
        best.coeffs = c;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double mid = best.coeffs[static_cast<Eigen::Index>(j)];
      current[j] = {mid - 2.0 * cell[j], mid + 2.0 * cell[j]};
    }
  }
  return best;
}

}  // namespace orlicz
