#include "orlicz/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "orlicz/errors.hpp"

namespace orlicz
{

namespace
{

double power(double base, double exponent)
{
  if (exponent == 0.0) {
    return 1.0;
  }
  if (exponent == 1.0) {
    return base;
  }
  if (exponent == 2.0) {
    return base * base;
  }
  if (exponent == 3.0) {
    return base * base * base;
  }
  return std::pow(base, exponent);
}

bool near_leq(double lhs, double rhs)
{
  return lhs <= rhs + 1e-12 * (1.0 + std::abs(rhs));
}

}  // namespace

Piece::Piece(double origin, std::vector<PowerTerm> terms)
: origin_(origin), terms_(std::move(terms))
{
  if (!std::isfinite(origin_)) {
    throw PreconditionError("piece origin must be finite");
  }
  for (const auto & term : terms_) {
    if (!std::isfinite(term.coef) || !std::isfinite(term.exponent)) {
      throw PreconditionError("piece terms must be finite");
    }
    if (term.coef < 0.0) {
      throw PreconditionError("piece coefficients must be nonnegative");
    }
    if (term.exponent < 0.0) {
      throw PreconditionError("piece exponents must be nonnegative");
    }
  }
}

Piece Piece::constant(double value)
{
  return Piece(0.0, {PowerTerm{value, 0.0}});
}

double Piece::value(double t) const
{
  const double d = t - origin_;
  double sum = 0.0;
  for (const auto & term : terms_) {
    sum += term.coef * power(d, term.exponent);
  }
  return sum;
}

double Piece::antiderivative(double t) const
{
  const double d = t - origin_;
  double sum = 0.0;
  for (const auto & term : terms_) {
    const double e1 = term.exponent + 1.0;
    sum += term.coef / e1 * power(d, e1);
  }
  return sum;
}

bool Piece::is_constant() const
{
  return std::all_of(
    terms_.begin(), terms_.end(),
    [](const PowerTerm & term) {return term.exponent == 0.0 || term.coef == 0.0;});
}

double Piece::constant_value() const
{
  double sum = 0.0;
  for (const auto & term : terms_) {
    if (term.exponent == 0.0) {
      sum += term.coef;
    }
  }
  return sum;
}

Piece Piece::plus_constant(double c) const
{
  auto terms = terms_;
  terms.push_back(PowerTerm{c, 0.0});
  return Piece(origin_, std::move(terms));
}

Generator::Generator(std::vector<GeneratorSegment> segments)
: segments_(std::move(segments))
{
  if (segments_.empty()) {
    throw PreconditionError("generator needs at least one segment");
  }
  if (segments_.front().start != 0.0) {
    throw PreconditionError("first generator segment must start at 0");
  }
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto & seg = segments_[i];
    if (!std::isfinite(seg.start)) {
      throw PreconditionError("segment start must be finite");
    }
    if (i > 0 && !(seg.start > segments_[i - 1].start)) {
      throw PreconditionError("segment starts must be strictly increasing");
    }
    if (seg.piece.origin() > seg.start) {
      throw PreconditionError(
              "segment " + std::to_string(i) + ": piece origin lies after the segment start");
    }
  }
  // phi(t) > 0 for t > 0: nonnegative terms make this equivalent to a positive coefficient
  const auto first_terms = segments_.front().piece.terms();
  const bool positive = std::any_of(
    first_terms.begin(), first_terms.end(), [](const PowerTerm & t) {return t.coef > 0.0;});
  if (!positive) {
    throw PreconditionError("generator must be positive on (0, inf)");
  }
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double at = segments_[i + 1].start;
    const double before = segments_[i].piece.value(at);
    const double after = segments_[i + 1].piece.value(at);
    if (!near_leq(before, after)) {
      throw PreconditionError(
              "generator decreases at breakpoint " + std::to_string(at));
    }
  }
}

std::size_t Generator::segment_index(double t) const
{
  if (segments_.size() == 1) {
    return 0;
  }
  const auto it = std::upper_bound(
    segments_.begin(), segments_.end(), t,
    [](double value, const GeneratorSegment & seg) {return value < seg.start;});
  return it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin()) - 1;
}

double Generator::right(double t) const
{
  return segments_[segment_index(t)].piece.value(t);
}

double Generator::left(double t) const
{
  std::size_t i = segment_index(t);
  if (i > 0 && segments_[i].start == t) {
    --i;
  }
  return segments_[i].piece.value(t);
}

std::vector<double> Generator::jump_points() const
{
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double at = segments_[i + 1].start;
    const double before = segments_[i].piece.value(at);
    const double after = segments_[i + 1].piece.value(at);
    if (after - before > 1e-12 * (1.0 + std::abs(after))) {
      out.push_back(at);
    }
  }
  return out;
}

PhiFunction::PhiFunction(Generator generator)
: generator_(std::move(generator))
{
  const auto segs = generator_.segments();
  base_.resize(segs.size());
  double phi_at_start = 0.0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i > 0) {
      const auto & prev = segs[i - 1];
      phi_at_start += prev.piece.antiderivative(segs[i].start) -
        prev.piece.antiderivative(prev.start);
    }
    base_[i] = phi_at_start - segs[i].piece.antiderivative(segs[i].start);
  }
}

double PhiFunction::operator()(double x) const
{
  if (!(x >= 0.0)) {
    throw PreconditionError("Phi is defined for x >= 0");
  }
  const std::size_t i = generator_.segment_index(x);
  return base_[i] + generator_.segments()[i].piece.antiderivative(x);
}

double PhiFunction::phi_right(double x) const
{
  if (!(x >= 0.0)) {
    throw PreconditionError("phi_right is defined for x >= 0");
  }
  return generator_.right(x);
}

double PhiFunction::phi_left(double x) const
{
  if (x == 0.0) {
    throw PreconditionError("left derivative of Phi is undefined at 0");
  }
  if (!(x > 0.0)) {
    throw PreconditionError("phi_left is defined for x > 0");
  }
  return generator_.left(x);
}

PhiFunction make_power_phi(double p)
{
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw PreconditionError("power Phi requires p >= 1");
  }
  return PhiFunction(Generator({{0.0, Piece(0.0, {PowerTerm{p, p - 1.0}})}}));
}

PhiFunction make_linear_then_convex_phi(double k, double c, double p)
{
  if (!(k > 0.0) || !(c > 0.0) || !(p > 1.0)) {
    throw PreconditionError("linear-then-convex Phi requires k > 0, c > 0, p > 1");
  }
  return PhiFunction(
    Generator(
  {
    {0.0, Piece::constant(k)},
    {c, Piece(c, {PowerTerm{k, 0.0}, PowerTerm{1.0, p - 1.0}})},
  }));
}

PhiFunction make_staircase_phi(const Generator & base, std::span<const Jump> jumps)
{
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (!(jumps[i].at > 0.0) || !std::isfinite(jumps[i].at)) {
      throw PreconditionError("jump points must be positive");
    }
    if (!(jumps[i].size > 0.0) || !std::isfinite(jumps[i].size)) {
      throw PreconditionError("jump sizes must be positive");
    }
    if (i > 0 && !(jumps[i].at < jumps[i - 1].at)) {
      throw PreconditionError("jump points must be strictly decreasing");
    }
  }
  if (jumps.empty()) {
    return PhiFunction(base);
  }

  std::vector<double> starts;
  for (const auto & seg : base.segments()) {
    starts.push_back(seg.start);
  }
  for (const auto & jump : jumps) {
    starts.push_back(jump.at);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  std::vector<GeneratorSegment> segments;
  segments.reserve(starts.size());
  for (const double start : starts) {
    double accumulated = 0.0;
    for (const auto & jump : jumps) {
      if (jump.at <= start) {
        accumulated += jump.size;
      }
    }
    const Piece & piece = base.segments()[base.segment_index(start)].piece;
    segments.push_back({start, accumulated > 0.0 ? piece.plus_constant(accumulated) : piece});
  }
  return PhiFunction(Generator(std::move(segments)));
}

PhiFunction make_staircase_phi(const PhiFunction & base, std::span<const Jump> jumps)
{
  return make_staircase_phi(base.generator(), jumps);
}

std::vector<Jump> dyadic_jumps(int count, double size)
{
  if (count < 0) {
    throw PreconditionError("jump count must be nonnegative");
  }
  std::vector<Jump> jumps;
  for (int n = 1; n <= count; ++n) {
    jumps.push_back({std::ldexp(1.0, -n), size});
  }
  return jumps;
}

double delta2_ratio(const PhiFunction & phi, double x_max, int samples)
{
  if (!(x_max > 0.0)) {
    throw PreconditionError("delta2_ratio requires x_max > 0");
  }
  if (samples < 2) {
    throw PreconditionError("delta2_ratio requires at least 2 samples");
  }
  double ratio = 0.0;
  for (int j = 1; j <= samples; ++j) {
    const double x = x_max * static_cast<double>(j) / static_cast<double>(samples);
    ratio = std::max(ratio, phi(2.0 * x) / phi(x));
  }
  return ratio;
}

std::vector<AffineSegment> find_affine_segments(const PhiFunction & phi)
{
  std::vector<AffineSegment> out;
  const auto segs = phi.generator().segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (!segs[i].piece.is_constant()) {
      continue;
    }
    const double slope = segs[i].piece.constant_value();
    const double lo = segs[i].start;
    const double hi = i + 1 < segs.size() ? segs[i + 1].start :
      std::numeric_limits<double>::infinity();
    if (!out.empty() && out.back().hi == lo && out.back().slope == slope) {
      out.back().hi = hi;
      continue;
    }
    out.push_back({lo, hi, slope, phi(lo) - slope * lo});
  }
  return out;
}

}  // namespace orlicz
