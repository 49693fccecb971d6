#ifndef ORLICZ_PHI_HPP_
#define ORLICZ_PHI_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace orlicz
{

/// One term coef * (t - origin)^exponent of a generator piece.
struct PowerTerm
{
  double coef{};
  double exponent{};
};

/**
 * A generator piece: a finite sum of power terms about a fixed origin,
 *
 *     piece(t) = sum_j coef_j * (t - origin)^exponent_j,   t >= origin.
 *
 * Polynomials are the special case of integer exponents. Antiderivatives are
 * exact, so the Young function built from pieces carries no quadrature error.
 * Coefficients are nonnegative and exponents are nonnegative, which makes
 * every piece nonnegative and nondecreasing on [origin, inf).
 */
class Piece
{
public:
  Piece() = default;
  Piece(double origin, std::vector<PowerTerm> terms);

  static Piece constant(double value);

  double value(double t) const;
  /// sum_j coef_j / (exponent_j + 1) * (t - origin)^(exponent_j + 1)
  double antiderivative(double t) const;

  /// True iff the piece does not depend on t.
  bool is_constant() const;
  /// Value of a constant piece; meaningless otherwise.
  double constant_value() const;

  Piece plus_constant(double c) const;

  double origin() const {return origin_;}
  std::span<const PowerTerm> terms() const {return terms_;}

private:
  double origin_{0.0};
  std::vector<PowerTerm> terms_;
};

struct GeneratorSegment
{
  double start{};
  Piece piece;
};

/**
 * Piecewise generator phi on [0, inf). Segment i covers [start_i, start_{i+1});
 * the last segment extends to infinity. phi is right-continuous, so at a
 * breakpoint phi_right picks the new piece and phi_left the old one.
 */
class Generator
{
public:
  Generator() = default;
  explicit Generator(std::vector<GeneratorSegment> segments);

  double right(double t) const;
  double left(double t) const;

  /// Index of the segment whose half-open range contains t (t >= 0).
  std::size_t segment_index(double t) const;

  std::span<const GeneratorSegment> segments() const {return segments_;}
  std::size_t size() const {return segments_.size();}

  /// Breakpoints where the right value strictly exceeds the left value.
  std::vector<double> jump_points() const;
  bool has_jumps() const {return !jump_points().empty();}

private:
  std::vector<GeneratorSegment> segments_;
};

/// Interval on which Phi(x) = slope * x + intercept. hi may be +inf.
struct AffineSegment
{
  double lo{};
  double hi{};
  double slope{};
  double intercept{};
};

/**
 * Young function Phi(x) = integral_0^x phi(t) dt for a piecewise generator.
 * Immutable after construction.
 */
class PhiFunction
{
public:
  PhiFunction() = default;
  explicit PhiFunction(Generator generator);

  /// Phi(x) for x >= 0.
  double operator()(double x) const;
  double value(double x) const {return (*this)(x);}

  /// Right derivative phi^+(x), x >= 0.
  double phi_right(double x) const;
  /// Left derivative phi^-(x); undefined (throws) at x = 0.
  double phi_left(double x) const;

  const Generator & generator() const {return generator_;}

private:
  Generator generator_;
  // Phi(x) = base_[i] + piece_i.antiderivative(x) on segment i
  std::vector<double> base_;
};

struct Jump
{
  double at{};
  double size{};
};

/// Phi(x) = x^p, phi(t) = p t^(p-1). Requires p >= 1.
PhiFunction make_power_phi(double p);

/// phi = k on [0, c], phi = k + (t - c)^(p - 1) beyond: Phi is affine with
/// slope k on [0, c] and strictly convex after c.
PhiFunction make_linear_then_convex_phi(double k, double c, double p);

/// Adds upward jumps to a base generator. Jump points must be positive and
/// listed in strictly decreasing order.
PhiFunction make_staircase_phi(const Generator & base, std::span<const Jump> jumps);
PhiFunction make_staircase_phi(const PhiFunction & base, std::span<const Jump> jumps);

/// Jumps at 2^-1, 2^-2, ..., 2^-count, each of the given size.
std::vector<Jump> dyadic_jumps(int count, double size = 1.0);

/// max over x_j = x_max * j / samples (j = 1..samples) of Phi(2x)/Phi(x).
/// A sampled lower bound for the Delta_2 constant.
double delta2_ratio(const PhiFunction & phi, double x_max, int samples);

/// Maximal intervals on which phi is constant (Phi affine).
std::vector<AffineSegment> find_affine_segments(const PhiFunction & phi);

}  // namespace orlicz

#endif  // ORLICZ_PHI_HPP_
