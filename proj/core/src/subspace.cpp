#include "orlicz/subspace.hpp"

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

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> values)
{
  return {values.data(), static_cast<Eigen::Index>(values.size())};
}

// max over t in [-1, 1] of min_i (rest + t * basis.col(j))_i; the objective is concave in t
double maximize_min_along(
  const Eigen::VectorXd & rest, const Eigen::MatrixXd & basis, Eigen::Index j, double & t_out)
{
  const auto column = basis.col(j);
  auto objective = [&](double t) {
      return (rest + t * column).minCoeff();
    };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -1.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  t_out = 0.5 * (lo + hi);
  double best = objective(t_out);
  for (const double edge : {-1.0, 1.0}) {
    const double v = objective(edge);
    if (v > best) {
      best = v;
      t_out = edge;
    }
  }
  return best;
}

}  // namespace

Subspace::Subspace(GridPtr grid, Eigen::MatrixXd basis, std::vector<std::string> labels)
: grid_(std::move(grid)), basis_(std::move(basis)), labels_(std::move(labels))
{
  if (!grid_) {
    throw PreconditionError("subspace needs a grid");
  }
  if (basis_.cols() < 1) {
    throw PreconditionError("subspace needs at least one basis element");
  }
  if (static_cast<std::size_t>(basis_.rows()) != grid_->size()) {
    throw PreconditionError("basis rows must match the grid node count");
  }
  if (static_cast<std::size_t>(basis_.cols()) > grid_->size()) {
    throw PreconditionError("subspace dimension exceeds the node count");
  }
  if (!basis_.allFinite()) {
    throw PreconditionError("basis values must be finite");
  }
  if (labels_.empty()) {
    for (Eigen::Index j = 0; j < basis_.cols(); ++j) {
      labels_.push_back("b" + std::to_string(j));
    }
  }
  if (labels_.size() != dim()) {
    throw PreconditionError("one label per basis element is required");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram(), Eigen::EigenvaluesOnly);
  const auto & ev = eig.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  const double smallest = ev.cwiseAbs().minCoeff();
  if (!(largest > 0.0) || !(smallest > 1e-10 * largest)) {
    throw PreconditionError("basis is numerically linearly dependent on the grid");
  }
}

GridFunction Subspace::basis_function(std::size_t j) const
{
  if (j >= dim()) {
    throw PreconditionError("basis index out of range");
  }
  const auto col = basis_.col(static_cast<Eigen::Index>(j));
  return GridFunction(grid_, std::vector<double>(col.data(), col.data() + col.size()));
}

GridFunction Subspace::evaluate(const Coefficients & coeffs) const
{
  if (static_cast<std::size_t>(coeffs.size()) != dim()) {
    throw PreconditionError(
            "coefficient vector has length " + std::to_string(coeffs.size()) +
            ", subspace dimension is " + std::to_string(dim()));
  }
  const Eigen::VectorXd values = basis_ * coeffs;
  return GridFunction(grid_, std::vector<double>(values.data(), values.data() + values.size()));
}

Eigen::MatrixXd Subspace::gram() const
{
  const auto w = as_vector(grid_->weights());
  return basis_.transpose() * w.asDiagonal() * basis_;
}

Coefficients Subspace::least_squares(const GridFunction & f) const
{
  require_same_grid(f.grid(), *grid_);
  const auto w = as_vector(grid_->weights());
  const auto v = as_vector(f.values());
  const Eigen::VectorXd rhs = basis_.transpose() * (w.cwiseProduct(v));
  return gram().ldlt().solve(rhs);
}

Subspace make_monomial_subspace(GridPtr grid, std::size_t n)
{
  if (n < 1) {
    throw PreconditionError("monomial subspace needs n >= 1");
  }
  if (n > grid->size()) {
    throw PreconditionError("monomial degree exceeds the node count");
  }
  const auto nodes = grid->nodes();
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(n));
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < n; ++j) {
    labels.push_back(j == 0 ? "1" : (j == 1 ? "x" : "x^" + std::to_string(j)));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        std::pow(nodes[i], static_cast<double>(j));
    }
  }
  return Subspace(std::move(grid), std::move(basis), std::move(labels));
}

Subspace make_hat_subspace(GridPtr grid, std::vector<double> knots)
{
  if (knots.empty()) {
    throw PreconditionError("hat subspace needs at least one knot");
  }
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (!(knots[k] >= grid->a() && knots[k] <= grid->b())) {
      throw PreconditionError("hat knots must lie in [a, b]");
    }
    if (k > 0 && !(knots[k] > knots[k - 1])) {
      throw PreconditionError("hat knots must be strictly increasing");
    }
  }
  const auto nodes = grid->nodes();
  const std::size_t m = knots.size();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(
    static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    const auto row = static_cast<Eigen::Index>(i);
    if (x <= knots.front()) {
      basis(row, 0) = 1.0;
      continue;
    }
    if (x >= knots.back()) {
      basis(row, static_cast<Eigen::Index>(m - 1)) = 1.0;
      continue;
    }
    const auto hi = static_cast<std::size_t>(
      std::upper_bound(knots.begin(), knots.end(), x) - knots.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - knots[lo]) / (knots[hi] - knots[lo]);
    basis(row, static_cast<Eigen::Index>(lo)) = 1.0 - t;
    basis(row, static_cast<Eigen::Index>(hi)) = t;
  }
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < m; ++k) {
    labels.push_back("hat@" + std::to_string(knots[k]));
  }
  return Subspace(std::move(grid), std::move(basis), std::move(labels));
}

Subspace make_function_subspace(
  GridPtr grid, const std::vector<std::function<double(double)>> & functions,
  std::vector<std::string> labels)
{
  const auto nodes = grid->nodes();
  Eigen::MatrixXd basis(
    static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(functions.size()));
  for (std::size_t j = 0; j < functions.size(); ++j) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = functions[j](nodes[i]);
    }
  }
  return Subspace(std::move(grid), std::move(basis), std::move(labels));
}

GridFunction evaluate(const Coefficients & coeffs, const Subspace & s)
{
  return s.evaluate(coeffs);
}

ZeroCount count_zeros(std::span<const double> values, double eta)
{
  ZeroCount out;
  out.first_node = values.size();
  auto note = [&](std::size_t node) {
      if (out.first_node == values.size()) {
        out.first_node = node;
      }
    };
  int prev = 0;
  bool in_run = false;
  std::size_t run_start = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (std::abs(v) <= eta) {
      if (!in_run) {
        in_run = true;
        run_start = i;
      }
      continue;
    }
    const int sign = v > 0.0 ? 1 : -1;
    if (prev != 0 && sign != prev) {
      ++out.sign_changes;
      ++out.zeros;
      note(in_run ? run_start : i);
    } else if (in_run) {
      ++out.zeros;
      note(run_start);
    }
    in_run = false;
    prev = sign;
  }
  if (in_run) {
    ++out.zeros;
    note(run_start);
  }
  return out;
}

const char * to_string(Verdict v)
{
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

StructureReport tchebycheff_probe(const Subspace & s, int trials, std::uint64_t seed)
{
  if (trials < 1) {
    throw PreconditionError("tchebycheff_probe needs at least one trial");
  }
  StructureReport report;
  report.trials = trials;
  const auto n = static_cast<Eigen::Index>(s.dim());
  const Grid & grid = s.grid();
  const double eta = grid.equality_tol();
  const double null_tol = null_measure_tol(grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  int informative = 0;
  for (int t = 0; t < trials; ++t) {
    Coefficients c(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      c[j] = normal(rng);
    }
    const GridFunction element = s.evaluate(c);
    if (element.sup_norm() <= eta) {
      continue;
    }
    ++informative;
    const ZeroCount zc = count_zeros(element.values(), eta);
    if (!report.tchebycheff_witness && zc.zeros >= static_cast<int>(n)) {
      report.tchebycheff_witness = StructureWitness{c, zc.first_node, double(zc.zeros)};
    }
    if (!report.zero_space_witness) {
      const NodeSet band = zero_set(element);
      if (measure(grid, band) > null_tol) {
        std::size_t node = 0;
        while (!band[node]) {
          ++node;
        }
        report.zero_space_witness = StructureWitness{c, node, double(band.count())};
      }
    }
  }
  if (report.tchebycheff_witness) {
    report.tchebycheff = Verdict::fail;
  } else {
    report.tchebycheff = informative > 0 ? Verdict::pass : Verdict::inconclusive;
  }
  if (report.zero_space_witness) {
    report.zero_space = Verdict::fail;
  } else {
    report.zero_space = informative > 0 ? Verdict::pass : Verdict::inconclusive;
  }
  report.one_space_witness = one_space_witness(s, std::max(trials / 10, 8));
  return report;
}

std::optional<Coefficients> one_space_witness(const Subspace & s, int iterations)
{
  const Eigen::MatrixXd & basis = s.basis_matrix();
  const Eigen::Index n = basis.cols();

  std::vector<Coefficients> starts;
  starts.push_back(Coefficients::Ones(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    starts.push_back(Coefficients::Unit(n, j));
    starts.push_back(-Coefficients::Unit(n, j));
  }
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  for (int k = 0; k < std::max(iterations, 0); ++k) {
    Coefficients c(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      c[j] = uniform(rng);
    }
    starts.push_back(c);
  }

  Coefficients best_c;
  double best = -std::numeric_limits<double>::infinity();
  const int sweeps = std::max(iterations, 1);
  for (auto c : starts) {
    Eigen::VectorXd values = basis * c;
    double current = values.minCoeff();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      const double before = current;
      for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::VectorXd rest = values - c[j] * basis.col(j);
        double t = c[j];
        const double v = maximize_min_along(rest, basis, j, t);
        if (v > current) {
          c[j] = t;
          values = rest + t * basis.col(j);
          current = v;
        }
      }
      if (current > 0.0) {
        // positive homogeneity: rescale onto the box boundary
        const double scale = c.cwiseAbs().maxCoeff();
        if (scale > 0.0 && scale < 1.0) {
          c /= scale;
          values /= scale;
          current /= scale;
        }
      }
      if (current <= before + 1e-15) {
        break;
      }
    }
    if (current > best) {
      best = current;
      best_c = c;
    }
  }
  if (best > 0.0) {
    return best_c;
  }
  return std::nullopt;
}

}  // namespace orlicz
