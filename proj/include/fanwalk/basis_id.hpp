#pragma once

// Turning an objective c' close to c, together with a cone containing c',
// into a row that provably belongs to the optimal basis for c.

#include <string>
#include <vector>

#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/simplex_core.hpp"

namespace fanwalk {

struct IdentifiedElement {
  Index row = 0;                  ///< row index in the LP it was extracted from
  Vec mu;                         ///< conic coefficients of c' over B'
  Vec c_prime;
  double gap = 0.0;               ///< |c - c'|_2
  std::vector<Index> qualifying;  ///< every row clearing the coefficient threshold
};

/// Conic coefficients above this are guaranteed to belong to the optimal basis.
inline double coefficient_threshold(Index n, double delta) {
  const double nd = static_cast<double>(n);
  return (1.0 / nd) * (1.0 - delta / (2.0 * nd));
}

/// c' lies in cone(B') and |c - c'| < delta / 2n.
inline bool verify_problem1(const NormalizedLP& lp, const Basis& B_prime, const Vec& c_prime, double delta,
                            const Tolerances& tol = {}) {
  const double nd = static_cast<double>(lp.dim());
  if (!((lp.c() - c_prime).norm() < delta / (2.0 * nd))) return false;
  return cone_membership(lp, B_prime, c_prime, tol).inside;
}

/// Returns the basis row with the largest conic coefficient (ties: smallest
/// index), provided it clears (1/n)(1 - delta/2n).
inline IdentifiedElement extract_element(const NormalizedLP& lp, const Basis& B_prime, const Vec& c_prime,
                                         double delta, const Tolerances& tol = {}) {
  IdentifiedElement out;
  out.mu = cone_membership(lp, B_prime, c_prime, tol).coeffs;
  out.c_prime = c_prime;
  out.gap = (lp.c() - c_prime).norm();
  const double threshold = coefficient_threshold(lp.dim(), delta);
  Index best = -1;
  for (Index k = 0; k < B_prime.size(); ++k) {
    if (out.mu(k) > threshold) {
      out.qualifying.push_back(B_prime.rows[k]);
      if (best < 0 || out.mu(k) > out.mu(best)) best = k;
    }
  }
  if (best < 0) {
    throw Error(Errc::NoLargeCoefficient, "no conic coefficient exceeds " + std::to_string(threshold));
  }
  out.row = B_prime.rows[best];
  return out;
}

/// For every k in B' - B with mu_k > 0: |c - c'| >= delta mu_k (up to 1e-9).
inline bool check_lemma4(const NormalizedLP& lp, const Basis& B, const Basis& B_prime, const Vec& c, const Vec& c_prime,
                         double delta, const Tolerances& tol = {}) {
  const Vec mu = SquareSolver(basis_matrix(lp, B_prime), tol).solve_transpose(c_prime);
  const double gap = (c - c_prime).norm();
  for (Index k = 0; k < B_prime.size(); ++k) {
    if (B.contains(B_prime.rows[k]) || !(mu(k) > 0.0)) continue;
    if (gap < delta * mu(k) - 1e-9) return false;
  }
  return true;
}

}  // namespace fanwalk
