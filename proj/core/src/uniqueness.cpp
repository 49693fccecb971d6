#include "orlicz/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "orlicz/errors.hpp"

namespace orlicz
{

namespace
{

struct DisjointSets
{
  std::vector<std::size_t> parent;

  explicit DisjointSets(std::size_t n)
  : parent(n)
  {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::size_t find(std::size_t i)
  {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b)
  {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
};

// Groups of start indices, each ordered; groups ordered by first member.
std::vector<std::vector<std::size_t>> groups_of(DisjointSets & sets)
{
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(sets.parent.size(), -1);
  for (std::size_t i = 0; i < sets.parent.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return groups;
}

}  // namespace

const char * to_string(UniquenessVerdict v)
{
  switch (v) {
    case UniquenessVerdict::singleton: return "singleton";
    case UniquenessVerdict::multiple: return "multiple";
    case UniquenessVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

UniquenessReport uniqueness_probe(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg,
  int n_starts, std::string instance, std::string theorem_tag)
{
  if (n_starts < 1) {
    throw PreconditionError("uniqueness_probe needs at least one start");
  }
  SolverConfig run_cfg = cfg;
  run_cfg.n_starts = n_starts;

  UniquenessReport report;
  report.instance = std::move(instance);
  report.theorem_tag = std::move(theorem_tag);
  report.starts = solve_starts(f, s, phi, run_cfg);
  const auto & starts = report.starts;
  const std::size_t m = starts.size();

  auto dist = [&](std::size_t i, std::size_t j) {
      return (starts[i].coeffs - starts[j].coeffs).norm();
    };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      report.diameter = std::max(report.diameter, dist(i, j));
    }
  }

  const double link = 1e3 * cfg.tol_coeff;
  DisjointSets sets(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (dist(i, j) <= link) {
        sets.unite(i, j);
      }
    }
  }

  // merge until the separation invariant holds
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> reps;
  std::vector<double> radii;
  for (;;) {
    groups = groups_of(sets);
    reps.clear();
    radii.clear();
    for (const auto & g : groups) {
      std::size_t rep = g.front();
      for (const std::size_t i : g) {
        if (starts[i].modular_value < starts[rep].modular_value) {
          rep = i;
        }
      }
      double radius = 0.0;
      for (const std::size_t i : g) {
        radius = std::max(radius, dist(i, rep));
      }
      reps.push_back(rep);
      radii.push_back(radius);
    }
    const double max_radius = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
    bool merged = false;
    for (std::size_t a = 0; a < groups.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < groups.size() && !merged; ++b) {
        double separation = std::numeric_limits<double>::infinity();
        for (const std::size_t i : groups[a]) {
          for (const std::size_t j : groups[b]) {
            separation = std::min(separation, dist(i, j));
          }
        }
        if (separation <= 10.0 * max_radius) {
          sets.unite(groups[a].front(), groups[b].front());
          merged = true;
        }
      }
    }
    if (!merged) {
      break;
    }
  }

  for (std::size_t k = 0; k < groups.size(); ++k) {
    SolutionCluster cluster;
    cluster.representative = starts[reps[k]].coeffs;
    cluster.representative_modular = starts[reps[k]].modular_value;
    cluster.radius = radii[k];
    for (const std::size_t i : groups[k]) {
      cluster.start_ids.push_back(starts[i].start_id);
    }
    report.clusters.push_back(std::move(cluster));
  }

  const bool all_converged = std::all_of(
    starts.begin(), starts.end(), [](const auto & st) {return st.converged;});
  if (!all_converged) {
    report.verdict = UniquenessVerdict::inconclusive;
    return report;
  }
  if (report.clusters.size() == 1) {
    report.clusters.front().certified = check_characterization(
      f, s.evaluate(report.clusters.front().representative), s, phi,
      certificate_tol(report.clusters.front().representative_modular)).verdict;
    report.verdict = UniquenessVerdict::singleton;
    return report;
  }
  bool all_certified = true;
  for (auto & cluster : report.clusters) {
    cluster.certified = check_characterization(
      f, s.evaluate(cluster.representative), s, phi,
      certificate_tol(cluster.representative_modular)).verdict;
    all_certified = all_certified && cluster.certified;
  }
  report.verdict = all_certified ? UniquenessVerdict::multiple : UniquenessVerdict::inconclusive;
  return report;
}

int residual_sign_changes(const GridFunction & f, const GridFunction & p)
{
  require_same_grid(f, p);
  const GridFunction r = f - p;
  return count_zeros(r.values(), f.grid().equality_tol()).sign_changes;
}

std::vector<double> default_epsilons()
{
  std::vector<double> eps;
  for (int k = 1; k <= 9; ++k) {
    eps.push_back(0.1 * k);
  }
  return eps;
}

std::optional<AffineSegment> affine_head(const PhiFunction & phi)
{
  const auto segments = find_affine_segments(phi);
  if (!segments.empty() && segments.front().lo == 0.0) {
    return segments.front();
  }
  return std::nullopt;
}

NonUniqWitness build_nonuniq_witness(
  const Subspace & s, const PhiFunction & phi, const Coefficients & p3_coeffs,
  const GridFunction & f, const GridFunction & p1, std::vector<double> epsilons)
{
  require_same_grid(f, p1);
  require_same_grid(f.grid(), s.grid());
  const auto head = affine_head(phi);
  if (!head) {
    throw PreconditionError("Phi has no affine segment [0, c]");
  }
  const double c = head->hi;
  const double eta = f.grid().equality_tol();

  const GridFunction p3 = s.evaluate(p3_coeffs);
  const double p3_norm = p3.sup_norm();
  if (p3_norm <= eta) {
    throw PreconditionError("P3 must be nonzero");
  }
  if (p3_norm > 0.5 * c * (1.0 + 1e-12)) {
    throw PreconditionError(
            "||P3||_inf = " + std::to_string(p3_norm) + " exceeds c/2 = " +
            std::to_string(0.5 * c));
  }
  const GridFunction residual = f - p1;
  const double r_norm = residual.sup_norm();
  if (r_norm > c * (1.0 + 1e-12)) {
    throw PreconditionError(
            "||f - P1||_inf = " + std::to_string(r_norm) + " exceeds c = " + std::to_string(c));
  }
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (std::abs(residual[i]) <= eta && std::abs(p3[i]) > eta) {
      throw PreconditionError(
              "Z(f - P1) is not contained in Z(P3) at node " + std::to_string(i));
    }
  }
  for (const double eps : epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw PreconditionError("witness epsilons must lie in (0, 1)");
    }
  }

  std::vector<double> h(residual.size(), 0.0);
  for (std::size_t i = 0; i < residual.size(); ++i) {
    if (std::abs(residual[i]) > eta) {
      h[i] = std::abs(p3[i]) * (residual[i] > 0.0 ? 1.0 : -1.0);
    }
  }

  NonUniqWitness w{
    p3_coeffs, GridFunction(f.grid_ptr(), std::move(h)), std::move(epsilons), {}, 0.0, 0.0,
    head->slope, c};
  w.modular_h = modular(phi, w.h);
  for (const double eps : w.epsilons) {
    const double v = modular(phi, w.h - p3 * eps);
    w.modular_values.push_back(v);
    w.modular_gap = std::max(w.modular_gap, std::abs(v - w.modular_h));
  }
  return w;
}

bool condition_b_check(const GridFunction & f, const GridFunction & p1, const PhiFunction & phi)
{
  require_same_grid(f, p1);
  const auto head = affine_head(phi);
  if (!head) {
    throw PreconditionError("condition (b) needs Phi with an affine segment [0, c]");
  }
  NodeSet above{std::vector<bool>(f.size())};
  for (std::size_t i = 0; i < f.size(); ++i) {
    above.mask[i] = std::abs(f[i] - p1[i]) > head->hi;
  }
  return measure(f.grid(), above) > null_measure_tol(f.grid());
}

std::vector<Coefficients> elements_vanishing_on_gamma_set(
  const GridFunction & f, const Subspace & s, const PhiFunction & phi, double tol)
{
  if (!is_gamma_set(f, s, phi, tol)) {
    return {};
  }
  const NodeSet zeros = zero_set(f);
  const Eigen::MatrixXd & basis = s.basis_matrix();
  const auto n = basis.cols();
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < zeros.mask.size(); ++i) {
    if (zeros[i]) {
      rows.push_back(static_cast<Eigen::Index>(i));
    }
  }
  std::vector<Coefficients> out;
  if (rows.empty()) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out.push_back(Coefficients::Unit(n, j));
    }
    return out;
  }
  Eigen::MatrixXd restricted(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    restricted.row(static_cast<Eigen::Index>(k)) = basis.row(rows[k]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted, Eigen::ComputeFullV);
  const auto & sv = svd.singularValues();
  const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double sigma = j < sv.size() ? sv[j] : 0.0;
    if (sigma <= cutoff) {
      out.push_back(svd.matrixV().col(j));
    }
  }
  return out;
}

GridFunction random_continuous_function(GridPtr grid, std::mt19937_64 & rng, double amplitude)
{
  constexpr int kModes = 5;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> cos_coef(kModes + 1);
  std::vector<double> sin_coef(kModes + 1);
  for (int k = 0; k <= kModes; ++k) {
    const double sd = amplitude / std::sqrt(1.0 + k);
    cos_coef[static_cast<std::size_t>(k)] = sd * normal(rng);
    sin_coef[static_cast<std::size_t>(k)] = sd * normal(rng);
  }
  const double a = grid->a();
  const double len = grid->length();
  return GridFunction::sample(
    std::move(grid), [&](double x) {
      const double t = (x - a) / len;
      double v = 0.0;
      for (int k = 0; k <= kModes; ++k) {
        v += cos_coef[static_cast<std::size_t>(k)] * std::cos(k * std::numbers::pi * t) +
        sin_coef[static_cast<std::size_t>(k)] * std::sin(k * std::numbers::pi * t);
      }
      return v;
    });
}

std::vector<UniquenessReport> jump_phi_uniqueness_suite(
  const Subspace & s, const PhiFunction & phi, const SolverConfig & cfg, int n_instances,
  std::uint64_t rng_seed, int n_starts, double amplitude)
{
  if (n_instances < 0) {
    throw PreconditionError("n_instances must be nonnegative");
  }
  if (!phi.generator().has_jumps()) {
    throw PreconditionError("jump suite needs a generator with jump discontinuities");
  }
  if (!one_space_witness(s, 16)) {
    throw PreconditionError("subspace has no strictly positive element (not a 1-space)");
  }
  std::mt19937_64 rng(rng_seed);
  std::vector<UniquenessReport> reports;
  for (int k = 0; k < n_instances; ++k) {
    const GridFunction f = random_continuous_function(s.grid_ptr(), rng, amplitude);
    SolverConfig instance_cfg = cfg;
    instance_cfg.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(k);
    reports.push_back(
      uniqueness_probe(
        f, s, phi, instance_cfg, n_starts, "jump-" + std::to_string(k),
        theorem::kJumpGenerator));
  }
  return reports;
}

}  // namespace orlicz
