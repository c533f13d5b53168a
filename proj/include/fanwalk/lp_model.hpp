#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fanwalk/combinatorics.hpp"
#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"

namespace fanwalk {

/// max c^T x subject to A x <= b.
///
/// `row_labels[i]` is the row's index in the instance the user supplied; it
/// survives normalization, augmentation and dimension reduction (0-based
/// internally).
struct LinearProgram {
  std::string name;
  Mat A;
  Vec b;
  Vec c;
  std::vector<Index> row_labels;

  Index rows() const { return A.rows(); }
  Index dim() const { return A.cols(); }
};

inline std::vector<Index> identity_labels(Index m) {
  std::vector<Index> labels(m);
  std::iota(labels.begin(), labels.end(), Index{0});
  return labels;
}

inline Index column_rank(const Mat& A, const Tolerances& tol = {}) {
  OrthoBasis basis(A.cols(), tol);
  for (Index i = 0; i < A.rows() && basis.rank() < A.cols(); ++i) {
    Vec row = A.row(i).transpose();
    const double len = row.norm();
    if (len > 0.0) basis.add(row / len);
  }
  return basis.rank();
}

/// Shape, finiteness, zero-row and rank checks for a raw instance.
inline void validate(LinearProgram& lp, const Tolerances& tol = {}) {
  const Index m = lp.rows();
  const Index n = lp.dim();
  if (n < 1 || m < n) throw Error(Errc::InvalidInput, "need m >= n >= 1");
  if (lp.b.size() != m || lp.c.size() != n) throw Error(Errc::InvalidInput, "shape mismatch in b or c");
  if (!lp.A.allFinite() || !lp.b.allFinite() || !lp.c.allFinite()) {
    throw Error(Errc::InvalidInput, "non-finite entries");
  }
  if (lp.row_labels.empty()) lp.row_labels = identity_labels(m);
  if (static_cast<Index>(lp.row_labels.size()) != m) throw Error(Errc::InvalidInput, "row_labels size mismatch");
  for (Index i = 0; i < m; ++i) {
    if (lp.A.row(i).norm() <= tol.singular) {
      throw Error(Errc::ZeroRow, "row " + std::to_string(lp.row_labels[i] + 1) + " is zero");
    }
  }
  if (column_rank(lp.A, tol) < n) throw Error(Errc::RankDeficient, "A does not have full column rank");
}

/// A linear program whose rows and objective all have unit Euclidean norm.
/// Instances can only be obtained through `normalize` or `from_unit_rows`,
/// both of which enforce that invariant.
class NormalizedLP {
 public:
  NormalizedLP() = default;

  static NormalizedLP from_unit_rows(std::string name, Mat A, Vec b, Vec c, std::vector<Index> labels,
                                     const Tolerances& tol = {}) {
    LinearProgram raw{std::move(name), std::move(A), std::move(b), std::move(c), std::move(labels)};
    validate(raw, tol);
    for (Index i = 0; i < raw.rows(); ++i) {
      if (std::abs(raw.A.row(i).norm() - 1.0) > tol.norm) {
        throw Error(Errc::NotUnitVector, "row " + std::to_string(i) + " is not normalized");
      }
    }
    if (std::abs(raw.c.norm() - 1.0) > tol.norm) throw Error(Errc::NotUnitVector, "objective is not normalized");
    NormalizedLP lp;
    lp.lp_ = std::move(raw);
    return lp;
  }

  const std::string& name() const { return lp_.name; }
  const Mat& A() const { return lp_.A; }
  const Vec& b() const { return lp_.b; }
  const Vec& c() const { return lp_.c; }
  const std::vector<Index>& labels() const { return lp_.row_labels; }
  Index rows() const { return lp_.rows(); }
  Index dim() const { return lp_.dim(); }
  Vec row(Index i) const { return lp_.A.row(i).transpose(); }
  const LinearProgram& raw() const { return lp_; }

  /// Same constraints, different unit objective.
  NormalizedLP with_objective(const Vec& c, const Tolerances& tol = {}) const {
    return from_unit_rows(lp_.name, lp_.A, lp_.b, c, lp_.row_labels, tol);
  }

 private:
  LinearProgram lp_;
};

/// Scales every row (and its right-hand side) and the objective to unit length.
inline NormalizedLP normalize(LinearProgram lp, const Tolerances& tol = {}) {
  if (lp.row_labels.empty()) lp.row_labels = identity_labels(lp.rows());
  for (Index i = 0; i < lp.rows(); ++i) {
    const double len = lp.A.row(i).norm();
    if (!(len > tol.singular)) throw Error(Errc::ZeroRow, "row " + std::to_string(lp.row_labels[i] + 1) + " is zero");
    lp.A.row(i) /= len;
    lp.b(i) /= len;
  }
  const double clen = lp.c.norm();
  if (!(clen > tol.singular)) throw Error(Errc::ZeroObjective, "objective vector is zero");
  lp.c /= clen;
  return NormalizedLP::from_unit_rows(std::move(lp.name), std::move(lp.A), std::move(lp.b), std::move(lp.c),
                                      std::move(lp.row_labels), tol);
}

enum class DeltaMethod { BruteForce, IntegerBound, UserSupplied };

inline const char* to_string(DeltaMethod method) {
  switch (method) {
    case DeltaMethod::BruteForce: return "brute_force";
    case DeltaMethod::IntegerBound: return "integer_bound";
    case DeltaMethod::UserSupplied: return "user";
  }
  return "unknown";
}

/// Row `row` is at distance `delta` from the span of rows `subset`.
struct DeltaWitness {
  Index row = 0;
  std::vector<Index> subset;
};

struct DeltaCertificate {
  double delta = 1.0;
  DeltaMethod method = DeltaMethod::BruteForce;
  std::optional<DeltaWitness> witness;   // BruteForce only
  std::optional<std::int64_t> Delta;     // IntegerBound only
};

inline constexpr std::uint64_t kDefaultBruteForceBudget = 10'000'000;

/// Work estimate for `delta_bruteforce`: C(m, n-1) * m.
inline std::uint64_t delta_bruteforce_cost(Index m, Index n) {
  return saturating_mul(binomial(m, n - 1), static_cast<std::uint64_t>(m));
}

/// Smallest distance from a row to the span of other rows that does not contain it.
///
/// The minimum over all spans is attained on a hyperplane spanned by n-1
/// independent rows (any smaller span not containing a_j extends to one), so
/// only (n-1)-subsets are enumerated. For each hyperplane with unit normal h
/// the distance of a_j is |a_j^T h|.
inline DeltaCertificate delta_bruteforce(const NormalizedLP& lp, const Tolerances& tol = {},
                                         std::uint64_t budget = kDefaultBruteForceBudget) {
  const Index m = lp.rows();
  const Index n = lp.dim();
  if (delta_bruteforce_cost(m, n) > budget) {
    throw Error(Errc::TooLarge, "delta enumeration exceeds budget");
  }

  DeltaCertificate cert;
  cert.method = DeltaMethod::BruteForce;
  if (n == 1) {
    // only the empty span; every unit row sits at distance 1 from {0}
    cert.delta = std::min(lp.row(0).norm(), 1.0);
    cert.witness = DeltaWitness{0, {}};
    return cert;
  }

  double best = std::numeric_limits<double>::infinity();
  DeltaWitness witness;
  for_each_combination(m, n - 1, [&](const std::vector<Index>& subset) {
    OrthoBasis basis(n, tol);
    for (Index i : subset) {
      if (!basis.add(lp.row(i))) return true;  // dependent subset: not a hyperplane
    }
    // unit normal: residual of the coordinate axis farthest from the span
    Vec normal;
    double normal_len = -1.0;
    for (Index k = 0; k < n; ++k) {
      Vec r = basis.residual(Vec::Unit(n, k));
      const double len = r.norm();
      if (len > normal_len) {
        normal_len = len;
        normal = std::move(r);
      }
    }
    normal /= normal_len;
    for (Index j = 0; j < m; ++j) {
      const double d = std::abs(lp.A().row(j).dot(normal));
      if (d > tol.span && d < best) {
        best = d;
        witness = DeltaWitness{j, subset};
      }
    }
    return true;
  });
  if (!std::isfinite(best)) throw Error(Errc::RankDeficient, "no hyperplane spanned by rows");
  cert.delta = std::min(best, 1.0);
  cert.witness = std::move(witness);
  return cert;
}

/// Lower bound 1/(n * Delta^2) for integral constraint matrices whose
/// sub-determinants are bounded by Delta in absolute value.
inline DeltaCertificate delta_integer_bound(const Mat& A_int, std::int64_t Delta) {
  for (Index i = 0; i < A_int.rows(); ++i) {
    for (Index j = 0; j < A_int.cols(); ++j) {
      const double x = A_int(i, j);
      if (!std::isfinite(x) || std::nearbyint(x) != x) {
        throw Error(Errc::NonIntegerEntries, "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not integral");
      }
    }
  }
  if (Delta < 1) throw Error(Errc::InvalidInput, "Delta must be >= 1");
  const double n = static_cast<double>(A_int.cols());
  const double D = static_cast<double>(Delta);
  DeltaCertificate cert;
  cert.delta = 1.0 / (n * D * D);
  cert.method = DeltaMethod::IntegerBound;
  cert.Delta = Delta;
  return cert;
}

inline constexpr std::uint64_t kDefaultVertexBudget = 1'000'000;

/// True iff every vertex of {Ax <= b} has exactly n tight rows.
inline bool check_nondegenerate(const NormalizedLP& lp, const Tolerances& tol = {},
                                std::uint64_t budget = kDefaultVertexBudget) {
  const Index m = lp.rows();
  const Index n = lp.dim();
  if (binomial(m, n) > budget) throw Error(Errc::TooLarge, "vertex enumeration exceeds budget");
  const double feas = tol.feasibility(lp.b());
  bool ok = true;
  for_each_combination(m, n, [&](const std::vector<Index>& subset) {
    Mat AB(n, n);
    Vec bB(n);
    for (Index k = 0; k < n; ++k) {
      AB.row(k) = lp.A().row(subset[k]);
      bB(k) = lp.b()(subset[k]);
    }
    if (det_abs(AB, tol) <= tol.singular) return true;
    Vec x;
    try {
      x = solve_square(AB, bB, tol);
    } catch (const Error&) {
      return true;
    }
    const Vec slack = lp.b() - lp.A() * x;
    if (slack.minCoeff() < -feas) return true;
    const auto tight = (slack.array().abs() <= feas).count();
    if (tight > n) ok = false;
    return ok;
  });
  return ok;
}

}  // namespace fanwalk
