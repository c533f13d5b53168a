#pragma once

#include <string>

#include "fanwalk/error.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/phase1.hpp"
#include "fanwalk/reduction.hpp"
#include "fanwalk/simplex_core.hpp"

namespace fanwalk {

/// Picks the delta used to size the walk, following cfg.delta_mode. Auto
/// prefers brute force and falls back to the sub-determinant bound.
inline DeltaCertificate certify_delta(const LinearProgram& raw, const NormalizedLP& lp, const SolverConfig& cfg) {
  switch (cfg.delta_mode) {
    case DeltaMode::BruteForce:
      return delta_bruteforce(lp, cfg.tol, cfg.brute_force_budget);
    case DeltaMode::IntegerBound:
      if (!cfg.Delta) throw Error(Errc::InvalidInput, "integer bound needs a sub-determinant bound Delta");
      return delta_integer_bound(raw.A, *cfg.Delta);
    case DeltaMode::Fixed: {
      if (!(cfg.delta_value > 0.0) || cfg.delta_value > 1.0) throw Error(Errc::InvalidInput, "delta must lie in (0, 1]");
      DeltaCertificate cert;
      cert.delta = cfg.delta_value;
      cert.method = DeltaMethod::UserSupplied;
      return cert;
    }
    case DeltaMode::Auto:
      break;
  }
  if (delta_bruteforce_cost(lp.rows(), lp.dim()) <= cfg.brute_force_budget) {
    return delta_bruteforce(lp, cfg.tol, cfg.brute_force_budget);
  }
  if (cfg.Delta) return delta_integer_bound(raw.A, *cfg.Delta);
  throw Error(Errc::TooLarge, "delta enumeration too large; supply delta or an integral Delta bound");
}

/// End-to-end solve: normalize, phase 1, walk on the boxed LP, certify.
inline SolveReport solve(const LinearProgram& input, const SolverConfig& cfg = {}) {
  LinearProgram raw = input;
  validate(raw, cfg.tol);
  const NormalizedLP lp = normalize(raw, cfg.tol);
  const DeltaCertificate cert = certify_delta(raw, lp, cfg);

  const double R = cfg.radius ? *cfg.radius : default_radius(lp, cfg.tol, cfg.vertex_budget);
  const BoundingBox Z = bounding_box(lp, R, cfg.tol);
  const Phase1Result p1 = phase1_vertex(lp, Z, cfg.tol);
  if (!p1.feasible) {
    SolveReport rep;
    rep.status = SolveStatus::Infeasible;
    rep.delta = cert;
    rep.radius = R;
    rep.infeasible_iteration = p1.failed_iteration;
    rep.infeasible_min_value = p1.min_value;
    return rep;
  }

  SolveReport rep = solve_bounded(lp, Z, p1.vertex, cert, cfg);
  rep.radius = R;
  if (rep.status != SolveStatus::Optimal) return rep;

  // self-certification on the original rows
  const Vertex v = vertex_of_basis(lp, rep.optimal_basis, cfg.tol);
  if (!cone_membership(lp, rep.optimal_basis, lp.c(), cfg.tol).inside) {
    throw Error(Errc::CertificationFailed, "reported basis is not optimal for c");
  }
  rep.optimal_point = v.point;
  rep.objective_value = raw.c.dot(v.point);
  return rep;
}

}  // namespace fanwalk
