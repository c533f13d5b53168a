#pragma once

// Dense linear algebra for small matrices (n <= ~10).

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fanwalk/error.hpp"

namespace fanwalk {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every module.
struct Tolerances {
  double singular = 1e-10;  ///< minimum acceptable LU pivot / rank threshold
  double solve = 1e-9;      ///< residual bound for linear solves, relative to 1 + |rhs|_inf
  double norm = 1e-9;       ///< allowed deviation of unit vectors from norm 1
  double span = 1e-9;       ///< distances below this count as span membership
  double cone = 1e-9;       ///< conic coefficients above -cone count as nonnegative
  double feas = 1e-7;       ///< feasibility slack, scaled by 1 + |b|_inf
  double ratio = 1e-9;      ///< ratio-test threshold for edge directions and ties
  double objective = 1e-9;  ///< projected objectives shorter than this vanish

  double feasibility(const Vec& b) const {
    return feas * (1.0 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0));
  }
};

namespace detail {

inline void require_unit(const Vec& a, const Tolerances& tol, const char* what) {
  if (std::abs(a.norm() - 1.0) > tol.norm) {
    throw Error(Errc::NotUnitVector, std::string(what) + " must have unit length");
  }
}

inline double min_abs_pivot(const Eigen::FullPivLU<Mat>& lu) {
  return lu.matrixLU().diagonal().cwiseAbs().minCoeff();
}

}  // namespace detail

/// LU factorization of a square matrix with the pivot check done once.
class SquareSolver {
 public:
  SquareSolver() = default;

  explicit SquareSolver(const Mat& m, const Tolerances& tol = {}) : m_(m), lu_(m), tol_(tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw Error(Errc::InvalidInput, "solve_square expects a nonempty square matrix");
    }
    if (detail::min_abs_pivot(lu_) <= tol_.singular) {
      throw Error(Errc::SingularMatrix, "no acceptable pivot in LU factorization");
    }
  }

  Index size() const { return m_.rows(); }
  const Mat& matrix() const { return m_; }

  /// Solves M x = rhs.
  Vec solve(const Vec& rhs) const { return refine(m_, lu_.solve(rhs), rhs, false); }

  /// Solves M^T x = rhs.
  Vec solve_transpose(const Vec& rhs) const {
    return refine(m_.transpose(), lu_.transpose().solve(rhs), rhs, true);
  }

  double abs_determinant() const { return std::abs(lu_.determinant()); }

 private:
  Vec refine(const Mat& m, Vec x, const Vec& rhs, bool transposed) const {
    const double bound = tol_.solve * (1.0 + rhs.cwiseAbs().maxCoeff());
    Vec r = rhs - m * x;
    if (r.cwiseAbs().maxCoeff() <= bound) return x;
    // one step of iterative refinement
    x += transposed ? Vec(lu_.transpose().solve(r)) : Vec(lu_.solve(r));
    r = rhs - m * x;
    if (r.cwiseAbs().maxCoeff() > bound) {
      throw Error(Errc::SingularMatrix, "residual too large; matrix is numerically singular");
    }
    return x;
  }

  Mat m_;
  Eigen::FullPivLU<Mat> lu_;
  Tolerances tol_;
};

inline Vec solve_square(const Mat& m, const Vec& rhs, const Tolerances& tol = {}) {
  return SquareSolver(m, tol).solve(rhs);
}

/// |det(M)|, or 0 when an LU pivot falls below the singular threshold.
inline double det_abs(const Mat& m, const Tolerances& tol = {}) {
  if (m.rows() != m.cols()) throw Error(Errc::InvalidInput, "det_abs expects a square matrix");
  if (m.rows() == 0) return 1.0;
  Eigen::FullPivLU<Mat> lu(m);
  if (detail::min_abs_pivot(lu) <= tol.singular) return 0.0;
  return std::abs(lu.determinant());
}

/// Incrementally grown orthonormal basis (modified Gram-Schmidt, applied twice).
class OrthoBasis {
 public:
  explicit OrthoBasis(Index dim, const Tolerances& tol = {}) : dim_(dim), tol_(tol) {}

  Index rank() const { return static_cast<Index>(q_.size()); }

  /// Component of v orthogonal to the current span.
  Vec residual(const Vec& v) const {
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& q : q_) r -= q.dot(r) * q;
    }
    return r;
  }

  double distance(const Vec& v) const { return residual(v).norm(); }

  /// Adds v if it is independent of the span; returns whether the rank grew.
  bool add(const Vec& v) {
    Vec r = residual(v);
    const double len = r.norm();
    if (len <= tol_.singular * std::max(1.0, v.norm())) return false;
    q_.push_back(r / len);
    return true;
  }

  const std::vector<Vec>& vectors() const { return q_; }

 private:
  Index dim_;
  Tolerances tol_;
  std::vector<Vec> q_;
};

/// Euclidean distance from v to the linear span of `span`.
inline double dist_to_span(const Vec& v, std::span<const Vec> span, const Tolerances& tol = {}) {
  OrthoBasis basis(v.size(), tol);
  for (const Vec& s : span) basis.add(s);
  return basis.distance(v);
}

inline double dist_to_span(const Vec& v, const std::vector<Vec>& span, const Tolerances& tol = {}) {
  return dist_to_span(v, std::span<const Vec>(span), tol);
}

/// Orthonormal U with a^T U = e_1^T, built as a single Householder reflection.
inline Mat rotation_to_e1(const Vec& a, const Tolerances& tol = {}) {
  detail::require_unit(a, tol, "rotation axis");
  const Index n = a.size();
  const Vec unit = a / a.norm();
  const double tail = n > 1 ? unit.tail(n - 1).squaredNorm() : 0.0;
  if (tail == 0.0 && unit(0) > 0.0) return Mat::Identity(n, n);

  // u = unit - e_1, with the first entry evaluated without cancellation
  Vec u = unit;
  u(0) = unit(0) > 0.0 ? -tail / (unit(0) + 1.0) : unit(0) - 1.0;
  return Mat::Identity(n, n) - (2.0 / u.squaredNorm()) * u * u.transpose();
}

/// v - (a^T v) a for unit a.
inline Vec project_out(const Vec& v, const Vec& a, const Tolerances& tol = {}) {
  detail::require_unit(a, tol, "projection axis");
  return v - a.dot(v) * a;
}

}  // namespace fanwalk
