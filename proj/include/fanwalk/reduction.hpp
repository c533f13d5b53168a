#pragma once

// Once a row of the optimal basis is known, the optimum lies on that row's
// facet. Rotating the row onto e_1 and substituting x_1 = b_fixed leaves an
// (n-1)-dimensional LP whose rows, rescaled to unit length, keep the
// delta-distance property. The solver below recurses on that LP.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fanwalk/basis_id.hpp"
#include "fanwalk/cone_walk.hpp"
#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/simplex_core.hpp"

namespace fanwalk {

struct ReductionStep {
  Index fixed_row = 0;               ///< row of the parent LP set to equality
  double fixed_rhs = 0.0;
  Mat U;                             ///< orthonormal, a_fixed^T U = e_1^T
  std::vector<double> scale_factors; ///< per reduced row, 1 / |projected row| >= 1
  std::vector<Index> index_map;      ///< reduced row -> parent row
  std::vector<Index> dropped;        ///< parent rows parallel to a_fixed or merged duplicates

  /// Parent coordinates of a reduced point y: x = U (b_fixed, y).
  Vec lift(const Vec& y) const {
    Vec full(y.size() + 1);
    full(0) = fixed_rhs;
    full.tail(y.size()) = y;
    return U * full;
  }
};

struct Reduced {
  NormalizedLP lp;
  Vertex start;
  ReductionStep step;
};

inline Reduced reduce(const NormalizedLP& lp, Index fixed, const Vertex& v, const Tolerances& tol = {}) {
  const Index n = lp.dim();
  if (n < 2) throw Error(Errc::InvalidInput, "cannot reduce a one-dimensional LP");
  if (!v.basis.contains(fixed)) throw Error(Errc::InvalidInput, "fixed row must be tight at the start vertex");

  ReductionStep step;
  step.fixed_row = fixed;
  step.fixed_rhs = lp.b()(fixed);
  const Vec a_fixed = lp.row(fixed);
  step.U = rotation_to_e1(a_fixed, tol);

  const double feas = tol.feasibility(lp.b());
  struct Candidate {
    Index parent;
    Vec row;
    double rhs;
    double scale;
  };
  std::vector<Candidate> kept;
  for (Index i = 0; i < lp.rows(); ++i) {
    if (i == fixed) continue;
    const Vec rotated = step.U.transpose() * lp.row(i);
    const double along = rotated(0);  // = a_i^T a_fixed
    Vec projected = rotated.tail(n - 1);
    const double rhs = lp.b()(i) - along * step.fixed_rhs;
    const double len = projected.norm();
    if (len <= tol.span) {
      if (rhs < -feas) throw Error(Errc::InvalidInput, "facet of the fixed row is empty");
      step.dropped.push_back(i);
      continue;
    }
    Candidate cand{i, projected / len, rhs / len, 1.0 / len};
    // merge parallel duplicates, keeping the tighter right-hand side; a tight
    // basis row wins exact ties
    auto dup = std::find_if(kept.begin(), kept.end(),
                            [&](const Candidate& k) { return (k.row - cand.row).norm() <= 1e2 * tol.span; });
    if (dup == kept.end()) {
      kept.push_back(std::move(cand));
      continue;
    }
    const bool replace = cand.rhs < dup->rhs - feas ||
                         (std::abs(cand.rhs - dup->rhs) <= feas && v.basis.contains(i) && !v.basis.contains(dup->parent));
    if (replace) {
      step.dropped.push_back(dup->parent);
      *dup = std::move(cand);
    } else {
      step.dropped.push_back(i);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.parent < b.parent; });
  std::sort(step.dropped.begin(), step.dropped.end());

  const Index m_red = static_cast<Index>(kept.size());
  Mat A(m_red, n - 1);
  Vec b(m_red);
  std::vector<Index> labels(m_red);
  for (Index r = 0; r < m_red; ++r) {
    A.row(r) = kept[r].row.transpose();
    b(r) = kept[r].rhs;
    labels[r] = lp.labels()[kept[r].parent];
    step.index_map.push_back(kept[r].parent);
    step.scale_factors.push_back(kept[r].scale);
  }

  const Vec c_rot = step.U.transpose() * lp.c();
  const Vec c_proj = c_rot.tail(n - 1);
  if (c_proj.norm() <= tol.objective) {
    throw Error(Errc::ObjectiveVanishes, "objective is orthogonal to the fixed facet");
  }

  Reduced out;
  out.lp = NormalizedLP::from_unit_rows(lp.name(), std::move(A), std::move(b), c_proj / c_proj.norm(),
                                        std::move(labels), tol);
  std::vector<Index> start_rows;
  for (Index r : v.basis.rows) {
    if (r == fixed) continue;
    auto it = std::find(step.index_map.begin(), step.index_map.end(), r);
    if (it == step.index_map.end()) throw Error(Errc::InvalidInput, "start vertex row lost during reduction");
    start_rows.push_back(static_cast<Index>(it - step.index_map.begin()));
  }
  out.start = vertex_of_basis(out.lp, Basis(std::move(start_rows)), tol);
  out.step = std::move(step);
  return out;
}

enum class DeltaMode { Auto, BruteForce, IntegerBound, Fixed };

struct SolverConfig {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> steps;  ///< nullopt: ceil(C n^5.5 / delta^3) per level
  double step_constant = 1.0;
  std::optional<double> alpha;         ///< nullopt: 4 n^3 / delta per level
  DeltaMode delta_mode = DeltaMode::Auto;
  double delta_value = 0.0;            ///< DeltaMode::Fixed
  std::optional<std::int64_t> Delta;   ///< sub-determinant bound for DeltaMode::IntegerBound / Auto
  std::optional<double> radius;        ///< nullopt: derived from the basic feasible solutions
  int max_retries = 10;
  bool stop_in_optimal_cone = true;    ///< see WalkConfig
  std::ostream* trace = nullptr;
  Tolerances tol;
  std::uint64_t brute_force_budget = kDefaultBruteForceBudget;
  std::uint64_t vertex_budget = kDefaultVertexBudget;
  /// Called after every reduction with the parent LP, its delta and the reduced LP.
  std::function<void(const NormalizedLP&, double, const NormalizedLP&)> on_reduction;
};

struct LevelStats {
  Index dim = 0;
  Index rows = 0;
  double delta = 0.0;
  DeltaMethod delta_method = DeltaMethod::BruteForce;
  double alpha = 0.0;
  std::uint64_t step_budget = 0;
  std::uint64_t steps_taken = 0;
  std::uint64_t pivots = 0;
  int attempts = 0;
  bool stopped_with_c_in_cone = false;
  std::optional<Index> fixed_label;  ///< row fixed at this level, in caller numbering
};

/// Result of the walk-driven recursion on one (bounded) normalized LP.
struct WalkSolve {
  Basis basis;  ///< rows of the LP passed in
  std::vector<LevelStats> levels;
  std::uint64_t total_pivots = 0;
  int retries = 0;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t walk_seed(std::uint64_t seed, int level, int attempt) {
  return splitmix64(seed ^ splitmix64((static_cast<std::uint64_t>(level) << 32) | static_cast<std::uint64_t>(attempt)));
}

inline void merge_warnings(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& w : from) {
    if (std::find(into.begin(), into.end(), w) == into.end()) into.push_back(w);
  }
}

inline Basis solve_level(const NormalizedLP& lp, const Vertex& start, double delta, DeltaMethod method, int level,
                         const SolverConfig& cfg, WalkSolve& acc) {
  const Index n = lp.dim();
  LevelStats stats;
  stats.dim = n;
  stats.rows = lp.rows();
  stats.delta = delta;
  stats.delta_method = method;

  if (n == 1) {
    // rows are +-1: the optimum is the tightest bound on the side c points to
    Index best = -1;
    for (Index i = 0; i < lp.rows(); ++i) {
      if (lp.A()(i, 0) * lp.c()(0) <= 0.0) continue;
      if (best < 0 || lp.b()(i) < lp.b()(best)) best = i;
    }
    if (best < 0) throw Error(Errc::UnboundedLP, "one-dimensional LP is unbounded");
    acc.levels.push_back(stats);
    return Basis({best});
  }

  WalkConfig wcfg;
  wcfg.delta = delta;
  wcfg.alpha = cfg.alpha.value_or(default_alpha(n, delta));
  wcfg.step_constant = cfg.step_constant;
  wcfg.steps = cfg.steps.value_or(default_steps(n, delta, cfg.step_constant));
  wcfg.tol = cfg.tol;
  wcfg.trace = cfg.trace;
  wcfg.level = level;
  wcfg.stop_in_optimal_cone = cfg.stop_in_optimal_cone;
  stats.alpha = wcfg.alpha;
  stats.step_budget = wcfg.steps;

  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    if (attempt > 0) ++acc.retries;
    wcfg.seed = walk_seed(cfg.seed, level, attempt);
    ++stats.attempts;
    const WalkOutcome out = run_walk(lp, wcfg, start);
    merge_warnings(acc.warnings, out.warnings);
    stats.steps_taken += out.steps_taken;
    stats.pivots += out.pivots;
    acc.total_pivots += out.pivots;

    if (out.stopped_with_c_in_cone ||
        (cfg.stop_in_optimal_cone && cone_membership(lp, out.current_vertex.basis, lp.c(), cfg.tol).inside)) {
      stats.stopped_with_c_in_cone = true;
      acc.levels.push_back(stats);
      return out.current_vertex.basis;
    }
    if (!verify_problem1(lp, out.final.basis, out.c_prime, delta, cfg.tol)) continue;

    IdentifiedElement elem;
    try {
      elem = extract_element(lp, out.final.basis, out.c_prime, delta, cfg.tol);
    } catch (const Error& e) {
      if (e.code() == Errc::NoLargeCoefficient) continue;
      throw;
    }
    stats.fixed_label = lp.labels()[elem.row];

    Reduced red;
    try {
      red = reduce(lp, elem.row, out.current_vertex, cfg.tol);
    } catch (const Error& e) {
      if (e.code() != Errc::ObjectiveVanishes) throw;
      // c is normal to the fixed facet: every vertex of it is optimal
      acc.levels.push_back(stats);
      return out.current_vertex.basis;
    }
    acc.levels.push_back(stats);
    if (cfg.on_reduction) cfg.on_reduction(lp, delta, red.lp);

    double child_delta = delta;
    DeltaMethod child_method = method;
    if (delta_bruteforce_cost(red.lp.rows(), red.lp.dim()) <= cfg.brute_force_budget) {
      child_delta = delta_bruteforce(red.lp, cfg.tol, cfg.brute_force_budget).delta;
      child_method = DeltaMethod::BruteForce;
    }
    const Basis child = solve_level(red.lp, red.start, child_delta, child_method, level + 1, cfg, acc);
    std::vector<Index> rows{elem.row};
    for (Index r : child.rows) rows.push_back(red.step.index_map[r]);
    return Basis(std::move(rows));
  }
  acc.levels.push_back(stats);
  throw Error(Errc::RetriesExhausted, "walk failed at level " + std::to_string(level) + " after " +
                                          std::to_string(cfg.max_retries) + " retries");
}

}  // namespace detail

/// Walk-driven solve of a bounded, non-degenerate LP from a known vertex.
/// Returns the optimal basis in the row numbering of `lp`.
inline WalkSolve solve_from_vertex(const NormalizedLP& lp, const Vertex& start, double delta, DeltaMethod method,
                                   const SolverConfig& cfg) {
  if (!(delta > 0.0) || delta > 1.0) throw Error(Errc::InvalidInput, "delta must lie in (0, 1]");
  WalkSolve acc;
  acc.basis = detail::solve_level(lp, start, delta, method, 0, cfg, acc);
  return acc;
}

}  // namespace fanwalk
