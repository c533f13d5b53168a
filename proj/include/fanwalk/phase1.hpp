#pragma once

// Initial vertex, infeasibility certificate and the boundedness reduction.
//
// n independent rows a~_t of A span a box Z = { beta_t <= a~_t^T x <= gamma_t }
// containing every basic feasible solution. Starting from a vertex of Z, the
// constraints are added one at a time: minimizing a_i over
// P_{i-1} = Z n {a_j^T x <= b_j, j < i} either certifies infeasibility
// (minimum above b_i) or yields a vertex of P_i. The walk then runs on P n Z;
// an optimum touching Z means the original LP is unbounded.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/reduction.hpp"
#include "fanwalk/simplex_core.hpp"

namespace fanwalk {

/// Greedy scan for the lexicographically first n independent rows.
inline std::vector<Index> find_independent_rows(const NormalizedLP& lp, const Tolerances& tol = {}) {
  OrthoBasis basis(lp.dim(), tol);
  std::vector<Index> rows;
  for (Index i = 0; i < lp.rows() && basis.rank() < lp.dim(); ++i) {
    const Vec a = lp.row(i);
    if (basis.distance(a) > tol.span && basis.add(a)) rows.push_back(i);
  }
  if (static_cast<Index>(rows.size()) < lp.dim()) throw Error(Errc::RankDeficient, "rows do not span R^n");
  return rows;
}

struct BoundingBox {
  std::vector<Index> direction_rows;  ///< rows of A used as slab normals
  Mat directions;                     ///< one unit direction per row
  Vec beta;
  Vec gamma;
};

/// Slabs -R <= a~_t^T x <= R around unit directions; contains the R-ball.
inline BoundingBox bounding_box(const NormalizedLP& lp, double R, const Tolerances& tol = {}) {
  if (!(R > 0.0)) throw Error(Errc::InvalidInput, "box radius must be positive");
  BoundingBox Z;
  Z.direction_rows = find_independent_rows(lp, tol);
  const Index n = lp.dim();
  Z.directions.resize(n, n);
  for (Index t = 0; t < n; ++t) Z.directions.row(t) = lp.A().row(Z.direction_rows[t]);
  Z.beta = Vec::Constant(n, -R);
  Z.gamma = Vec::Constant(n, R);
  return Z;
}

/// Largest norm of a basic feasible solution (0 when there is none).
inline double max_vertex_norm(const NormalizedLP& lp, const Tolerances& tol = {},
                              std::uint64_t budget = kDefaultVertexBudget) {
  const Index m = lp.rows();
  const Index n = lp.dim();
  if (binomial(m, n) > budget) throw Error(Errc::TooLarge, "too many bases to derive a box radius; supply one");
  double best = 0.0;
  for_each_combination(m, n, [&](const std::vector<Index>& rows) {
    const Basis B{std::vector<Index>(rows)};
    if (det_abs(basis_matrix(lp, B), tol) <= tol.singular) return true;
    try {
      best = std::max(best, vertex_of_basis(lp, B, tol).point.norm());
    } catch (const Error&) {
    }
    return true;
  });
  return best;
}

/// Default radius: e * (1 + largest vertex norm).
inline double default_radius(const NormalizedLP& lp, const Tolerances& tol = {},
                             std::uint64_t budget = kDefaultVertexBudget) {
  return std::exp(1.0) * (1.0 + max_vertex_norm(lp, tol, budget));
}

/// Rows of `lp` followed by 2n box rows: for each direction t,
/// a~_t^T x <= gamma_t then -a~_t^T x <= -beta_t. Box rows are labelled
/// m + 2t and m + 2t + 1.
inline NormalizedLP augmented_lp(const NormalizedLP& lp, const BoundingBox& Z, const Tolerances& tol = {}) {
  const Index m = lp.rows();
  const Index n = lp.dim();
  Mat A(m + 2 * n, n);
  Vec b(m + 2 * n);
  std::vector<Index> labels = lp.labels();
  A.topRows(m) = lp.A();
  b.head(m) = lp.b();
  for (Index t = 0; t < n; ++t) {
    A.row(m + 2 * t) = Z.directions.row(t);
    b(m + 2 * t) = Z.gamma(t);
    A.row(m + 2 * t + 1) = -Z.directions.row(t);
    b(m + 2 * t + 1) = -Z.beta(t);
    labels.push_back(m + 2 * t);
    labels.push_back(m + 2 * t + 1);
  }
  return NormalizedLP::from_unit_rows(lp.name(), std::move(A), std::move(b), lp.c(), std::move(labels), tol);
}

inline bool is_box_row(const NormalizedLP& original, Index augmented_row) { return augmented_row >= original.rows(); }

/// Sub-LP made of the listed rows (ascending); returns it with the row map.
inline NormalizedLP restrict_rows(const NormalizedLP& lp, const std::vector<Index>& rows, const Tolerances& tol = {}) {
  Mat A(static_cast<Index>(rows.size()), lp.dim());
  Vec b(static_cast<Index>(rows.size()));
  std::vector<Index> labels;
  for (Index k = 0; k < static_cast<Index>(rows.size()); ++k) {
    A.row(k) = lp.A().row(rows[k]);
    b(k) = lp.b()(rows[k]);
    labels.push_back(lp.labels()[rows[k]]);
  }
  return NormalizedLP::from_unit_rows(lp.name(), std::move(A), std::move(b), lp.c(), std::move(labels), tol);
}

struct Phase1Result {
  bool feasible = false;
  Vertex vertex;                 ///< vertex of P n Z, rows numbered as in augmented_lp
  Index failed_iteration = -1;   ///< 0-based row whose minimum exceeded its rhs
  double min_value = 0.0;        ///< that minimum
  double rhs = 0.0;
};

inline Phase1Result phase1_vertex(const NormalizedLP& lp, const BoundingBox& Z, const Tolerances& tol = {}) {
  const Index m = lp.rows();
  const Index n = lp.dim();
  const NormalizedLP aug = augmented_lp(lp, Z, tol);

  std::vector<Index> start_rows;
  for (Index t = 0; t < n; ++t) start_rows.push_back(m + 2 * t);
  const NormalizedLP box_only = restrict_rows(aug, [&] {
    std::vector<Index> r;
    for (Index j = m; j < m + 2 * n; ++j) r.push_back(j);
    return r;
  }());
  Vec x = solve_square(basis_matrix(aug, Basis(start_rows)), basis_rhs(aug, Basis(start_rows)), tol);
  Basis basis(start_rows);  // augmented numbering

  const double feas = tol.feasibility(lp.b());
  Phase1Result out;
  for (Index i = 0; i < m; ++i) {
    // P_{i-1}: original rows 0..i-1 and the box, in augmented order
    std::vector<Index> active;
    for (Index j = 0; j < i; ++j) active.push_back(j);
    for (Index j = m; j < m + 2 * n; ++j) active.push_back(j);
    const NormalizedLP sub = i == 0 ? box_only : restrict_rows(aug, active, tol);

    std::vector<Index> local;
    for (Index r : basis.rows) {
      local.push_back(static_cast<Index>(std::lower_bound(active.begin(), active.end(), r) - active.begin()));
    }
    const Vertex from{x, Basis(std::move(local))};
    const Vertex best = bland_simplex(sub, from, -lp.row(i), tol);
    const double value = lp.A().row(i).dot(best.point);
    if (value > lp.b()(i) + feas) {
      out.feasible = false;
      out.failed_iteration = i;
      out.min_value = value;
      out.rhs = lp.b()(i);
      return out;
    }
    std::vector<Index> global;
    for (Index r : best.basis.rows) global.push_back(active[r]);
    basis = Basis(std::move(global));
    x = best.point;
  }
  out.feasible = true;
  out.vertex = vertex_of_basis(aug, basis, tol);
  return out;
}

enum class SolveStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
  }
  return "error";
}

struct SolveReport {
  SolveStatus status = SolveStatus::Optimal;
  Basis optimal_basis;   ///< caller row numbering (0-based)
  Vec optimal_point;
  double objective_value = 0.0;
  DeltaCertificate delta;
  std::vector<LevelStats> levels;
  std::uint64_t total_pivots = 0;
  int retries = 0;
  double radius = 0.0;
  std::optional<Index> infeasible_iteration;  ///< 0-based row of the failed phase 1 LP
  std::optional<double> infeasible_min_value;
  std::vector<std::string> notes;
};

/// Solves max{c^T x : x in P n Z} from a phase 1 vertex and maps the answer
/// back to the original rows, or reports the LP unbounded when the optimum
/// needs a box row (contact with Z is treated as unboundedness even when it is
/// degenerate).
inline SolveReport solve_bounded(const NormalizedLP& lp, const BoundingBox& Z, const Vertex& start,
                                 const DeltaCertificate& delta, const SolverConfig& cfg) {
  const NormalizedLP aug = augmented_lp(lp, Z, cfg.tol);
  double walk_delta = delta.delta;
  DeltaMethod walk_method = delta.method;
  if (delta_bruteforce_cost(aug.rows(), aug.dim()) <= cfg.brute_force_budget) {
    walk_delta = delta_bruteforce(aug, cfg.tol, cfg.brute_force_budget).delta;
    walk_method = DeltaMethod::BruteForce;
  }
  WalkSolve ws = solve_from_vertex(aug, start, walk_delta, walk_method, cfg);

  SolveReport rep;
  rep.delta = delta;
  rep.levels = std::move(ws.levels);
  rep.total_pivots = ws.total_pivots;
  rep.retries = ws.retries;
  rep.notes = std::move(ws.warnings);

  const Vertex opt = vertex_of_basis(aug, ws.basis, cfg.tol);
  bool touches_box = false, box_in_basis = false;
  for (Index r : tight_rows(aug, opt.point, cfg.tol)) touches_box = touches_box || is_box_row(lp, r);
  for (Index r : ws.basis.rows) box_in_basis = box_in_basis || is_box_row(lp, r);
  if (touches_box || box_in_basis) {
    if (!box_in_basis) rep.notes.push_back("optimum touches the bounding box degenerately; reported unbounded");
    rep.status = SolveStatus::Unbounded;
    return rep;
  }

  std::vector<Index> rows;
  for (Index r : ws.basis.rows) rows.push_back(r);
  rep.optimal_basis = Basis(std::move(rows));
  rep.optimal_point = opt.point;
  rep.status = SolveStatus::Optimal;
  return rep;
}

}  // namespace fanwalk
