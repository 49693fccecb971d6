#ifndef ORLICZ_GRID_HPP_
#define ORLICZ_GRID_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "orlicz/phi.hpp"

namespace orlicz
{

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/**
 * Quadrature discretization of [a, b]: nodes in (a, b) with positive weights
 * summing to b - a, plus the tolerance eta that decides when a residual
 * counts as zero.
 */
class Grid
{
public:
  Grid(double a, double b, std::vector<double> nodes, std::vector<double> weights, double eta);

  double a() const {return a_;}
  double b() const {return b_;}
  double length() const {return b_ - a_;}
  std::size_t size() const {return nodes_.size();}
  std::span<const double> nodes() const {return nodes_;}
  std::span<const double> weights() const {return weights_;}
  double equality_tol() const {return eta_;}

  /// Same nodes and weights with a different eta.
  GridPtr with_equality_tol(double eta) const;

  /// Identical interval, nodes and weights (eta may differ).
  bool same_nodes(const Grid & other) const;

private:
  double a_;
  double b_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double eta_;
};

/// Composite midpoint rule: n_nodes equal cells, nodes at the cell midpoints.
GridPtr make_uniform_grid(double a, double b, std::size_t n_nodes, double equality_tol);

/// Values of a function at the nodes of a grid.
class GridFunction
{
public:
  GridFunction(GridPtr grid, std::vector<double> values);

  static GridFunction zeros(GridPtr grid);
  static GridFunction sample(GridPtr grid, const std::function<double(double)> & fn);

  const Grid & grid() const {return *grid_;}
  const GridPtr & grid_ptr() const {return grid_;}
  std::size_t size() const {return values_.size();}
  std::span<const double> values() const {return values_;}
  double operator[](std::size_t i) const {return values_[i];}

  double sup_norm() const;

  GridFunction operator+(const GridFunction & other) const;
  GridFunction operator-(const GridFunction & other) const;
  GridFunction operator-() const;
  GridFunction operator*(double scale) const;

private:
  GridPtr grid_;
  std::vector<double> values_;
};

inline GridFunction operator*(double scale, const GridFunction & g) {return g * scale;}

/// Boolean mask over grid nodes.
struct NodeSet
{
  std::vector<bool> mask;

  std::size_t count() const;
  bool operator[](std::size_t i) const {return mask[i];}
};

/// Throws GridMismatch unless both functions live on the same nodes.
void require_same_grid(const Grid & lhs, const Grid & rhs);
void require_same_grid(const GridFunction & lhs, const GridFunction & rhs);

/// Sum with a fixed pairwise (binary tree) order; reproducible for a given input.
double pairwise_sum(std::span<const double> values);

/// sum_i w_i * Phi(|g(x_i)|)
double modular(const PhiFunction & phi, const GridFunction & g);

/// Sum of the weights over masked nodes.
double measure(const Grid & grid, const NodeSet & set);

/// Nodes where |f - p| <= eta.
NodeSet equality_set(const GridFunction & f, const GridFunction & p);

/// Nodes where |g| <= eta.
NodeSet zero_set(const GridFunction & g);

/// 1e-8 * (1 + ||f||_inf)
double default_equality_tol(const GridFunction & f);

/// 10 * eta * (b - a): the measure below which a node set is treated as null.
double null_measure_tol(const Grid & grid);

}  // namespace orlicz

#endif  // ORLICZ_GRID_HPP_
