#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "fanwalk/combinatorics.hpp"
#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"
#include "fanwalk/lp_model.hpp"

namespace fanwalk {

/// n row indices (sorted, 0-based) whose rows are linearly independent.
struct Basis {
  std::vector<Index> rows;

  Basis() = default;
  explicit Basis(std::vector<Index> r) : rows(std::move(r)) {
    std::sort(rows.begin(), rows.end());
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
      throw Error(Errc::InvalidInput, "basis contains a repeated row");
    }
  }

  Index size() const { return static_cast<Index>(rows.size()); }
  bool contains(Index row) const { return std::binary_search(rows.begin(), rows.end(), row); }

  /// Position of `row` inside the sorted index list.
  Index position(Index row) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), row);
    if (it == rows.end() || *it != row) throw Error(Errc::InvalidInput, "row not in basis");
    return static_cast<Index>(it - rows.begin());
  }

  /// B - {leaving} + {entering}, kept sorted.
  Basis exchange(Index leaving, Index entering) const {
    std::vector<Index> next;
    next.reserve(rows.size());
    for (Index r : rows) {
      if (r != leaving) next.push_back(r);
    }
    next.push_back(entering);
    return Basis(std::move(next));
  }

  friend bool operator==(const Basis&, const Basis&) = default;
  friend auto operator<=>(const Basis&, const Basis&) = default;
};

struct Vertex {
  Vec point;
  Basis basis;
};

inline Mat basis_matrix(const NormalizedLP& lp, const Basis& B) {
  Mat AB(B.size(), lp.dim());
  for (Index k = 0; k < B.size(); ++k) AB.row(k) = lp.A().row(B.rows[k]);
  return AB;
}

inline Vec basis_rhs(const NormalizedLP& lp, const Basis& B) {
  Vec bB(B.size());
  for (Index k = 0; k < B.size(); ++k) bB(k) = lp.b()(B.rows[k]);
  return bB;
}

inline void require_basis_shape(const NormalizedLP& lp, const Basis& B) {
  if (B.size() != lp.dim()) throw Error(Errc::InvalidInput, "basis must have exactly n rows");
  for (Index r : B.rows) {
    if (r < 0 || r >= lp.rows()) throw Error(Errc::InvalidInput, "basis row out of range");
  }
}

/// Rows whose slack at x is within the feasibility tolerance.
inline std::vector<Index> tight_rows(const NormalizedLP& lp, const Vec& x, const Tolerances& tol = {}) {
  const double feas = tol.feasibility(lp.b());
  const Vec slack = lp.b() - lp.A() * x;
  std::vector<Index> tight;
  for (Index i = 0; i < lp.rows(); ++i) {
    if (std::abs(slack(i)) <= feas) tight.push_back(i);
  }
  return tight;
}

inline bool is_feasible(const NormalizedLP& lp, const Vec& x, const Tolerances& tol = {}) {
  return (lp.b() - lp.A() * x).minCoeff() >= -tol.feasibility(lp.b());
}

/// Solves A_B x = b_B and checks that x satisfies every constraint.
inline Vertex vertex_of_basis(const NormalizedLP& lp, const Basis& B, const Tolerances& tol = {}) {
  require_basis_shape(lp, B);
  Vec x = solve_square(basis_matrix(lp, B), basis_rhs(lp, B), tol);
  if (!is_feasible(lp, x, tol)) {
    throw Error(Errc::InfeasibleBasis, "basic solution violates a constraint");
  }
  return Vertex{std::move(x), B};
}

struct ConeTest {
  bool inside = false;
  Vec coeffs;  ///< conic coefficients, indexed like B.rows
};

/// Expresses w in the basis rows (A_B^T mu = w) and tests mu >= -cone_tol.
inline ConeTest cone_membership(const NormalizedLP& lp, const Basis& B, const Vec& w, const Tolerances& tol = {}) {
  require_basis_shape(lp, B);
  ConeTest t;
  t.coeffs = SquareSolver(basis_matrix(lp, B), tol).solve_transpose(w);
  t.inside = t.coeffs.minCoeff() >= -tol.cone;
  return t;
}

namespace detail {

/// Moves from v along the edge on which every basis row except `leaving`
/// stays tight. With `allow_ties`, equal ratios resolve to the smallest row
/// index (Bland); otherwise they are reported as a degenerate pivot.
inline Vertex pivot(const NormalizedLP& lp, const Vertex& v, Index leaving, bool allow_ties, const Tolerances& tol) {
  const Index n = lp.dim();
  const Index p = v.basis.position(leaving);
  const SquareSolver AB(basis_matrix(lp, v.basis), tol);
  const Vec d = AB.solve(-Vec::Unit(n, p));

  double best = std::numeric_limits<double>::infinity();
  Index entering = -1;
  bool tie = false;
  for (Index j = 0; j < lp.rows(); ++j) {
    if (v.basis.contains(j)) continue;
    const double rate = lp.A().row(j).dot(d);
    if (rate <= tol.ratio) continue;
    const double step = std::max(0.0, (lp.b()(j) - lp.A().row(j).dot(v.point)) / rate);
    const double band = tol.ratio * (1.0 + std::abs(best));
    if (entering < 0 || step < best - band) {
      best = step;
      entering = j;
      tie = false;
    } else if (std::abs(step - best) <= band) {
      tie = true;
    }
  }
  if (entering < 0) throw Error(Errc::UnboundedEdge, "edge leaving row " + std::to_string(leaving) + " is unbounded");
  if (tie && !allow_ties) throw Error(Errc::DegeneratePivot, "ratio test tie leaving row " + std::to_string(leaving));
  return vertex_of_basis(lp, v.basis.exchange(leaving, entering), tol);
}

}  // namespace detail

/// Neighboring vertex reached by relaxing the basis row `leaving`.
inline Vertex pivot_across_facet(const NormalizedLP& lp, const Vertex& v, Index leaving, const Tolerances& tol = {}) {
  return detail::pivot(lp, v, leaving, false, tol);
}

/// Primal simplex with Bland's rule: the relaxed row is the smallest index
/// with a negative conic coefficient, ratio ties go to the smallest index.
inline Vertex bland_simplex(const NormalizedLP& lp, const Vertex& start, const Vec& objective,
                            const Tolerances& tol = {}) {
  const std::uint64_t cap = std::min<std::uint64_t>(saturating_mul(10, binomial(lp.rows(), lp.dim())), 10'000'000);
  Vertex v = start;
  for (std::uint64_t it = 0; it <= cap; ++it) {
    const ConeTest cone = cone_membership(lp, v.basis, objective, tol);
    if (cone.inside) return v;
    Index leaving = -1;
    for (Index k = 0; k < v.basis.size(); ++k) {
      if (cone.coeffs(k) < -tol.cone) {
        leaving = v.basis.rows[k];
        break;
      }
    }
    try {
      v = detail::pivot(lp, v, leaving, true, tol);
    } catch (const Error& e) {
      if (e.code() == Errc::UnboundedEdge) throw Error(Errc::UnboundedLP, "objective unbounded along an edge");
      throw;
    }
  }
  throw Error(Errc::IterationLimit, "simplex iteration cap reached");
}

}  // namespace fanwalk
