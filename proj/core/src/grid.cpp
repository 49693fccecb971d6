#include "orlicz/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "orlicz/errors.hpp"

namespace orlicz
{

Grid::Grid(double a, double b, std::vector<double> nodes, std::vector<double> weights, double eta)
: a_(a), b_(b), nodes_(std::move(nodes)), weights_(std::move(weights)), eta_(eta)
{
  if (!std::isfinite(a_) || !std::isfinite(b_) || !(a_ < b_)) {
    throw PreconditionError("grid interval must satisfy a < b");
  }
  if (nodes_.empty() || nodes_.size() != weights_.size()) {
    throw PreconditionError("grid needs matching, nonempty node and weight lists");
  }
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) {
    throw PreconditionError("equality_tol must be positive");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > a_ && nodes_[i] < b_)) {
      throw PreconditionError("grid nodes must lie in (a, b)");
    }
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw PreconditionError("grid nodes must be strictly increasing");
    }
    if (!(weights_[i] > 0.0)) {
      throw PreconditionError("grid weights must be positive");
    }
  }
  const double total = pairwise_sum(weights_);
  if (std::abs(total - (b_ - a_)) > 1e-12 * std::max(1.0, b_ - a_)) {
    throw PreconditionError("grid weights must sum to b - a");
  }
}

GridPtr Grid::with_equality_tol(double eta) const
{
  return std::make_shared<const Grid>(a_, b_, nodes_, weights_, eta);
}

bool Grid::same_nodes(const Grid & other) const
{
  return this == &other ||
         (a_ == other.a_ && b_ == other.b_ && nodes_ == other.nodes_ &&
         weights_ == other.weights_);
}

GridPtr make_uniform_grid(double a, double b, std::size_t n_nodes, double equality_tol)
{
  if (!(a < b)) {
    throw PreconditionError("degenerate interval: need a < b");
  }
  if (n_nodes < 2) {
    throw PreconditionError("uniform grid needs at least 2 nodes");
  }
  const double h = (b - a) / static_cast<double>(n_nodes);
  std::vector<double> nodes(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    nodes[i] = a + (static_cast<double>(i) + 0.5) * h;
  }
  return std::make_shared<const Grid>(
    a, b, std::move(nodes), std::vector<double>(n_nodes, h), equality_tol);
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
: grid_(std::move(grid)), values_(std::move(values))
{
  if (!grid_) {
    throw PreconditionError("grid function needs a grid");
  }
  if (values_.size() != grid_->size()) {
    throw PreconditionError(
            "grid function has " + std::to_string(values_.size()) + " values for " +
            std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NumericalError("non-finite grid function value", i, grid_->nodes()[i]);
    }
  }
}

GridFunction GridFunction::zeros(GridPtr grid)
{
  const std::size_t n = grid->size();
  return GridFunction(std::move(grid), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::sample(GridPtr grid, const std::function<double(double)> & fn)
{
  std::vector<double> values;
  values.reserve(grid->size());
  for (const double x : grid->nodes()) {
    values.push_back(fn(x));
  }
  return GridFunction(std::move(grid), std::move(values));
}

double GridFunction::sup_norm() const
{
  double m = 0.0;
  for (const double v : values_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

GridFunction GridFunction::operator+(const GridFunction & other) const
{
  require_same_grid(*this, other);
  auto values = values_;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] += other.values_[i];
  }
  return GridFunction(grid_, std::move(values));
}

GridFunction GridFunction::operator-(const GridFunction & other) const
{
  require_same_grid(*this, other);
  auto values = values_;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] -= other.values_[i];
  }
  return GridFunction(grid_, std::move(values));
}

GridFunction GridFunction::operator-() const
{
  return *this * -1.0;
}

GridFunction GridFunction::operator*(double scale) const
{
  auto values = values_;
  for (auto & v : values) {
    v *= scale;
  }
  return GridFunction(grid_, std::move(values));
}

std::size_t NodeSet::count() const
{
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

void require_same_grid(const Grid & lhs, const Grid & rhs)
{
  if (!lhs.same_nodes(rhs)) {
    throw GridMismatch();
  }
}

void require_same_grid(const GridFunction & lhs, const GridFunction & rhs)
{
  require_same_grid(lhs.grid(), rhs.grid());
}

double pairwise_sum(std::span<const double> values)
{
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double sum = 0.0;
    for (const double v : values) {
      sum += v;
    }
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double modular(const PhiFunction & phi, const GridFunction & g)
{
  const auto w = g.grid().weights();
  const auto v = g.values();
  std::vector<double> terms(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    terms[i] = w[i] * phi(std::abs(v[i]));
    if (!std::isfinite(terms[i])) {
      throw NumericalError("non-finite modular term", i, g.grid().nodes()[i]);
    }
  }
  return pairwise_sum(terms);
}

double measure(const Grid & grid, const NodeSet & set)
{
  if (set.mask.size() != grid.size()) {
    throw PreconditionError("node set length does not match the grid");
  }
  const auto w = grid.weights();
  std::vector<double> terms(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (set.mask[i]) {
      terms[i] = w[i];
    }
  }
  return pairwise_sum(terms);
}

NodeSet equality_set(const GridFunction & f, const GridFunction & p)
{
  require_same_grid(f, p);
  const double eta = f.grid().equality_tol();
  NodeSet out{std::vector<bool>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.mask[i] = std::abs(f[i] - p[i]) <= eta;
  }
  return out;
}

NodeSet zero_set(const GridFunction & g)
{
  const double eta = g.grid().equality_tol();
  NodeSet out{std::vector<bool>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.mask[i] = std::abs(g[i]) <= eta;
  }
  return out;
}

double default_equality_tol(const GridFunction & f)
{
  return 1e-8 * (1.0 + f.sup_norm());
}

double null_measure_tol(const Grid & grid)
{
  return 10.0 * grid.equality_tol() * grid.length();
}

}  // namespace orlicz
