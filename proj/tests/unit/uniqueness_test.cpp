#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "orlicz/certify.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/uniqueness.hpp"
#include "reference_values.hpp"

namespace orlicz
{
namespace
{

TEST(UniquenessProbe, StrictlyConvexIsSingleton)
{
  const auto g = make_uniform_grid(0.0, 1.0, 512, 1e-8);
  const auto s = make_monomial_subspace(g, 3);
  std::mt19937_64 rng(101);
  const auto f = random_continuous_function(g, rng, 1.0);
  const auto report = uniqueness_probe(f, s, make_power_phi(2.0), {}, 16, "l2", theorem::kStrictConvexity);
  EXPECT_EQ(report.verdict, UniquenessVerdict::singleton);
  ASSERT_EQ(report.clusters.size(), 1U);
  EXPECT_LT(report.diameter, 1e-3);
  EXPECT_EQ(report.clusters[0].start_ids.size(), 16U);
  EXPECT_TRUE(report.clusters[0].certified);
  EXPECT_EQ(report.theorem_tag, "strict_convexity");
}

TEST(UniquenessProbe, MedianPlateauIsMultiple)
{
  const auto g = make_uniform_grid(0.0, 1.0, 512, 1e-8);
  const auto s = make_monomial_subspace(g, 1);
  const auto step = GridFunction::sample(g, [](double x) {return x < 0.5 ? -1.0 : 1.0;});
  const auto phi = make_power_phi(1.0);
  const auto report = uniqueness_probe(step, s, phi, {}, 16);
  ASSERT_EQ(report.verdict, UniquenessVerdict::multiple);
  EXPECT_GT(report.clusters.size(), 1U);
  for (const auto & c : report.clusters) {
    EXPECT_TRUE(c.certified);
    EXPECT_GE(c.representative[0], -1.0 - 1e-9);
    EXPECT_LE(c.representative[0], 1.0 + 1e-9);
    EXPECT_NEAR(c.representative_modular, 1.0, 1e-9);
  }
  // every start lands in exactly one cluster
  std::vector<int> seen;
  for (const auto & c : report.clusters) {
    seen.insert(seen.end(), c.start_ids.begin(), c.start_ids.end());
  }
  std::sort(seen.begin(), seen.end());
  for (int k = 0; k < 16; ++k) {
    EXPECT_EQ(seen[static_cast<std::size_t>(k)], k);
  }
  // clusters separated by more than 10x the largest radius
  double max_radius = 0.0;
  for (const auto & c : report.clusters) {
    max_radius = std::max(max_radius, c.radius);
  }
  for (const auto & a : report.starts) {
    for (const auto & b : report.starts) {
      const auto cluster_of = [&](int id) {
          for (std::size_t k = 0; k < report.clusters.size(); ++k) {
            const auto & ids = report.clusters[k].start_ids;
            if (std::find(ids.begin(), ids.end(), id) != ids.end()) {
              return k;
            }
          }
          return report.clusters.size();
        };
      if (cluster_of(a.start_id) != cluster_of(b.start_id)) {
        EXPECT_GT((a.coeffs - b.coeffs).norm(), 10.0 * max_radius);
      }
    }
  }
  // sign consistency between distinct certified minimizers
  for (std::size_t a = 0; a < report.clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < report.clusters.size(); ++b) {
      const auto sc = sign_consistency(
        step, s.evaluate(report.clusters[a].representative),
        s.evaluate(report.clusters[b].representative));
      EXPECT_LE(sc.violation_measure, null_measure_tol(*g));
    }
  }
}

TEST(UniquenessProbe, TargetInSpanIsSingleton)
{
  const auto g = make_uniform_grid(0.0, 1.0, 256, 1e-8);
  const auto s = make_hat_subspace(g, {0.0, 0.5, 1.0});
  Coefficients c(3);
  c << 0.3, -0.2, 0.9;
  const auto f = s.evaluate(c);
  for (const auto & phi : {make_power_phi(1.0), make_power_phi(2.0),
      make_staircase_phi(make_power_phi(1.0), dyadic_jumps(8))})
  {
    const auto report = uniqueness_probe(f, s, phi, {}, 8);
    EXPECT_EQ(report.verdict, UniquenessVerdict::singleton);
    EXPECT_NEAR((report.clusters.front().representative - c).norm(), 0.0, 1e-5);
  }
}

TEST(UniquenessProbe, UnconvergedStartsAreInconclusive)
{
  const auto g = make_uniform_grid(0.0, 1.0, 256, 1e-8);
  const auto s = make_monomial_subspace(g, 3);
  std::mt19937_64 rng(5);
  const auto f = random_continuous_function(g, rng, 1.0);
  SolverConfig cfg;
  cfg.max_iters = 2;
  cfg.descent_iters = 2;
  const auto report = uniqueness_probe(f, s, make_power_phi(2.0), cfg, 4);
  EXPECT_EQ(report.verdict, UniquenessVerdict::inconclusive);
}

TEST(ResidualSignChanges, Examples)
{
  const auto g = make_uniform_grid(0.0, 1.0, 2048, 1e-8);
  const auto f = GridFunction::sample(g, [](double x) {return x * x;});
  EXPECT_EQ(residual_sign_changes(f, f - GridFunction::sample(g, [](double) {return 1.0;})), 0);
  const auto s = make_monomial_subspace(g, 2);
  const auto sol = solve(f, s, make_power_phi(2.0), {});
  const auto p = s.evaluate(sol.coeffs);
  EXPECT_EQ(residual_sign_changes(f, p), reference::l2_line_x2_sign_changes);
  // crossings sit at (3 -+ sqrt 3) / 6
  const GridFunction r = f - p;
  std::vector<double> crossings;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if ((r[i - 1] > 0.0) != (r[i] > 0.0)) {
      crossings.push_back(g->nodes()[i]);
    }
  }
  ASSERT_EQ(crossings.size(), 2U);
  EXPECT_NEAR(crossings[0], reference::l2_line_x2_roots_lo, 1.0 / 2048);
  EXPECT_NEAR(crossings[1], reference::l2_line_x2_roots_hi, 1.0 / 2048);

  const auto gpi = make_uniform_grid(0.0, std::numbers::pi, 2048, 1e-8);
  const auto sine = GridFunction::sample(gpi, [](double x) {return std::sin(3.0 * x);});
  const auto quad = make_monomial_subspace(gpi, 3);
  const auto best = solve(sine, quad, make_power_phi(2.0), {});
  const int changes = residual_sign_changes(sine, quad.evaluate(best.coeffs));
  EXPECT_GE(changes, 3);
  EXPECT_EQ(changes, reference::sin3x_quad_sign_changes);
}

struct WitnessInstance
{
  GridPtr grid = make_uniform_grid(0.0, 1.0, 1024, 1e-8);
  Subspace s = make_monomial_subspace(grid, 2);
  PhiFunction phi = make_linear_then_convex_phi(1.0, 1.0, 2.0);
  GridFunction p1 = GridFunction::sample(grid, [](double x) {return 0.2 + 0.1 * x;});
  GridFunction f = p1 + GridFunction::sample(
    grid, [](double x) {return 0.4 * std::cos(2.0 * std::numbers::pi * x);});
  Coefficients p3 = (Coefficients(2) << 0.3, 0.0).finished();
};

TEST(NonUniqWitness, ModularIsConstantAlongTheSegment)
{
  const WitnessInstance in;
  // p1 is a best approximation of f
  ASSERT_TRUE(check_characterization(in.f, in.p1, in.s, in.phi, 1e-9).verdict);
  const auto w = build_nonuniq_witness(in.s, in.phi, in.p3, in.f, in.p1);
  EXPECT_EQ(w.epsilons.size(), 9U);
  EXPECT_EQ(w.slope, 1.0);
  EXPECT_EQ(w.linear_end, 1.0);
  EXPECT_NEAR(w.modular_h, reference::witness_modular_h, 1e-12);
  EXPECT_LE(w.modular_gap, 10.0 * in.grid->equality_tol());
  EXPECT_LE(w.modular_gap, reference::witness_modular_gap + 1e-14);
  for (std::size_t i = 0; i < in.f.size(); ++i) {
    const double r = in.f[i] - in.p1[i];
    EXPECT_EQ(w.h[i], 0.3 * (r > 0 ? 1.0 : -1.0));
  }
  for (const double eps : {0.25, 0.75}) {
    const auto p = in.s.evaluate(in.p3 * eps);
    EXPECT_TRUE(check_characterization(w.h, p, in.s, in.phi, 1e-9).verdict) << eps;
  }
}

TEST(NonUniqWitness, RejectsViolatedBounds)
{
  const WitnessInstance in;
  try {
    build_nonuniq_witness(in.s, in.phi, Coefficients::Zero(2), in.f, in.p1);
    FAIL();
  } catch (const PreconditionError & e) {
    EXPECT_NE(std::string(e.what()).find("nonzero"), std::string::npos);
  }
  try {
    build_nonuniq_witness(in.s, in.phi, (Coefficients(2) << 0.6, 0.0).finished(), in.f, in.p1);
    FAIL();
  } catch (const PreconditionError & e) {
    EXPECT_NE(std::string(e.what()).find("c/2"), std::string::npos);
  }
  const auto far = in.p1 + GridFunction::sample(in.grid, [](double x) {return 3.0 * x - 1.4;});
  try {
    build_nonuniq_witness(in.s, in.phi, in.p3, far, in.p1);
    FAIL();
  } catch (const PreconditionError & e) {
    EXPECT_NE(std::string(e.what()).find("exceeds c"), std::string::npos);
  }
  EXPECT_THROW(
    build_nonuniq_witness(in.s, make_power_phi(2.0), in.p3, in.f, in.p1), PreconditionError);
  // residual vanishing where P3 does not
  EXPECT_THROW(build_nonuniq_witness(in.s, in.phi, in.p3, in.p1, in.p1), PreconditionError);
  EXPECT_THROW(
    build_nonuniq_witness(in.s, in.phi, in.p3, in.f, in.p1, {0.5, 1.0}), PreconditionError);
}

TEST(ConditionB, Examples)
{
  const auto g = make_uniform_grid(0.0, 1.0, 1000, 1e-8);
  const auto phi = make_linear_then_convex_phi(1.0, 1.0, 2.0);
  const auto zero = GridFunction::zeros(g);
  EXPECT_FALSE(condition_b_check(GridFunction::sample(g, [](double x) {return 0.5 * x;}), zero, phi));
  EXPECT_TRUE(condition_b_check(GridFunction::sample(g, [](double) {return 2.0;}), zero, phi));
  const auto ramp = GridFunction::sample(g, [](double x) {return 2.0 * x;});
  EXPECT_TRUE(condition_b_check(ramp, zero, phi));
  EXPECT_THROW(condition_b_check(ramp, zero, make_power_phi(2.0)), PreconditionError);
  NodeSet above{std::vector<bool>(g->size())};
  for (std::size_t i = 0; i < g->size(); ++i) {
    above.mask[i] = std::abs(ramp[i]) > 1.0;
  }
  EXPECT_NEAR(measure(*g, above), 0.5, 2.0 / 1000);
  EXPECT_NEAR(measure(*g, above), reference::condition_b_measure, 1e-12);
}

TEST(GammaSetSearch, OnlyZeroVanishesForMonomials)
{
  const auto g = make_uniform_grid(-1.0, 1.0, 400, 1e-8);
  const auto phi = make_power_phi(2.0);
  const auto s = make_monomial_subspace(g, 1);
  // f vanishes on [-1/2, 1/2] and is odd: 0 is its best constant
  const auto f = GridFunction::sample(
    g, [](double x) {return std::abs(x) < 0.5 ? 0.0 : (x > 0 ? x - 0.5 : x + 0.5);});
  ASSERT_TRUE(is_gamma_set(f, s, phi, 1e-9));
  EXPECT_TRUE(elements_vanishing_on_gamma_set(f, s, phi, 1e-9).empty());

  // with a hat supported on (1/2, 1] the span has a nonzero element vanishing on Z(f)
  const auto with_hat = make_function_subspace(
    g, {[](double) {return 1.0;},
      [](double x) {return std::max(0.0, 1.0 - std::abs(x - 0.75) / 0.25);}}, {"1", "hat"});
  const auto odd_bump = GridFunction::sample(
    g, [](double x) {return x > 0.5 ? std::sin(4.0 * std::numbers::pi * (x - 0.75)) : 0.0;});
  ASSERT_TRUE(is_gamma_set(odd_bump, with_hat, phi, 1e-9));
  const auto found = elements_vanishing_on_gamma_set(odd_bump, with_hat, phi, 1e-9);
  ASSERT_EQ(found.size(), 1U);
  EXPECT_NEAR(std::abs(found[0][1]), 1.0, 1e-9);
  EXPECT_NEAR(found[0][0], 0.0, 1e-9);
}

TEST(JumpSuite, StaircaseOverHatsIsUnique)
{
  const auto g = make_uniform_grid(0.0, 1.0, 512, 1e-8);
  const auto s = make_hat_subspace(g, {0.0, 0.5, 1.0});
  const auto phi = make_staircase_phi(make_power_phi(1.0), dyadic_jumps(8));
  const auto reports = jump_phi_uniqueness_suite(s, phi, {}, 3, 17, 8);
  ASSERT_EQ(reports.size(), 3U);
  for (const auto & r : reports) {
    EXPECT_EQ(r.verdict, UniquenessVerdict::singleton) << r.instance;
    EXPECT_EQ(r.theorem_tag, theorem::kJumpGenerator);
  }
  EXPECT_TRUE(jump_phi_uniqueness_suite(s, phi, {}, 0, 17).empty());
}

TEST(JumpSuite, Preconditions)
{
  const auto g = make_uniform_grid(0.0, 1.0, 128, 1e-8);
  const auto phi = make_staircase_phi(make_power_phi(1.0), dyadic_jumps(8));
  const auto sine = make_function_subspace(
    g, {[](double x) {return std::sin(2.0 * std::numbers::pi * x);}}, {"sin"});
  EXPECT_THROW(jump_phi_uniqueness_suite(sine, phi, {}, 1, 0), PreconditionError);
  const auto hats = make_hat_subspace(g, {0.0, 1.0});
  EXPECT_THROW(jump_phi_uniqueness_suite(hats, make_power_phi(1.0), {}, 1, 0), PreconditionError);
}

TEST(JumpSuite, L1ControlHasPlateau)
{
  const auto g = make_uniform_grid(0.0, 1.0, 512, 1e-8);
  const auto s = make_hat_subspace(g, {0.0, 0.5, 1.0});
  // step at 1/2 leaves the middle coefficient free on a plateau
  const auto step = GridFunction::sample(g, [](double x) {return x < 0.5 ? -1.0 : 1.0;});
  const auto report = uniqueness_probe(step, s, make_power_phi(1.0), {}, 16);
  EXPECT_EQ(report.verdict, UniquenessVerdict::multiple);
}

TEST(RandomContinuousFunction, SeededAndSmooth)
{
  const auto g = make_uniform_grid(0.0, 2.0, 200, 1e-8);
  std::mt19937_64 a(9);
  std::mt19937_64 b(9);
  const auto fa = random_continuous_function(g, a, 1.0);
  const auto fb = random_continuous_function(g, b, 1.0);
  for (std::size_t i = 0; i < fa.size(); ++i) {
    EXPECT_EQ(fa[i], fb[i]);
    if (i > 0) {
      EXPECT_LT(std::abs(fa[i] - fa[i - 1]), 0.5);
    }
  }
}

}  // namespace
}  // namespace orlicz
