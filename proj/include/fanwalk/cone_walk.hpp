#pragma once

// Lazy Metropolis walk over the cells that tile the normal fan.
//
// Every normal cone cone{a_i : i in B} is cut into translates of
// { sum lambda_i a_i : 0 <= lambda_i <= 1/n^2 }. A cell is addressed by its
// basis and the integer offsets k_i of its lower corner, so its center is
// sum ((k_i + 1/2) / n^2) a_i. The walk targets the density proportional to
// exp(-|x - alpha c|_1) vol(cell) and keeps the vertex whose cone contains
// the current cell; crossing a cone facet is a simplex pivot.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/simplex_core.hpp"

namespace fanwalk {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits, identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Parallelepiped {
  Basis basis;
  std::vector<std::int64_t> index;  ///< lattice offset per basis row, same order as basis.rows

  friend bool operator==(const Parallelepiped&, const Parallelepiped&) = default;
};

struct WalkConfig {
  double alpha = 1.0;
  std::uint64_t steps = 1;
  std::uint64_t seed = 0;
  double step_constant = 1.0;
  double delta = 1.0;  ///< only used for the alpha sanity warning
  Tolerances tol;
  std::ostream* trace = nullptr;
  int level = 0;  ///< recursion depth, echoed in trace records
  bool stop_in_optimal_cone = true;  ///< false: always run all steps (exercises basis identification)
};

/// alpha = 4 n^3 / delta.
inline double default_alpha(Index n, double delta) {
  const double nd = static_cast<double>(n);
  return 4.0 * nd * nd * nd / delta;
}

/// ceil(C * n^5.5 / delta^3).
inline std::uint64_t default_steps(Index n, double delta, double C) {
  if (n < 1 || !(delta > 0.0) || delta > 1.0 || !(C > 0.0)) {
    throw Error(Errc::InvalidInput, "default_steps needs n >= 1, 0 < delta <= 1, C > 0");
  }
  const double raw = C * std::pow(static_cast<double>(n), 5.5) / (delta * delta * delta);
  return static_cast<std::uint64_t>(std::ceil(raw));
}

inline WalkConfig make_walk_config(Index n, double delta, std::uint64_t seed, double step_constant = 1.0) {
  WalkConfig cfg;
  cfg.delta = delta;
  cfg.alpha = default_alpha(n, delta);
  cfg.step_constant = step_constant;
  cfg.steps = default_steps(n, delta, step_constant);
  cfg.seed = seed;
  return cfg;
}

inline double cell_edge(Index n) { return 1.0 / static_cast<double>(n * n); }

/// z_P = sum ((k_i + 1/2) / n^2) a_i.
inline Vec center(const NormalizedLP& lp, const Parallelepiped& P) {
  const Index n = lp.dim();
  const double h = cell_edge(n);
  Vec z = Vec::Zero(n);
  for (Index k = 0; k < P.basis.size(); ++k) {
    z += (static_cast<double>(P.index[k]) + 0.5) * h * lp.row(P.basis.rows[k]);
  }
  return z;
}

/// log vol(P) = n log(1/n^2) + log |det A_B|.
inline double log_volume(const NormalizedLP& lp, const Basis& B, const Tolerances& tol = {}) {
  const double n = static_cast<double>(lp.dim());
  return n * std::log(1.0 / (n * n)) + std::log(det_abs(basis_matrix(lp, B), tol));
}

inline double log_weight_at(const Vec& z, const Vec& c, double alpha, double log_vol) {
  return -(z - alpha * c).lpNorm<1>() + log_vol;
}

/// log f(P) = -|z_P - alpha c|_1 + log vol(P); never underflows.
inline double log_weight(const NormalizedLP& lp, const WalkConfig& cfg, const Parallelepiped& P) {
  return log_weight_at(center(lp, P), lp.c(), cfg.alpha, log_volume(lp, P.basis, cfg.tol));
}

/// f(P); may underflow to 0 far from alpha c.
inline double weight(const NormalizedLP& lp, const WalkConfig& cfg, const Parallelepiped& P) {
  return std::exp(log_weight(lp, cfg, P));
}

/// log of (1/2n) * (1/2) min{1, f(to)/f(from)}.
inline double log_transition_probability(Index n, double log_weight_from, double log_weight_to) {
  return -std::log(4.0 * static_cast<double>(n)) + std::min(0.0, log_weight_to - log_weight_from);
}

inline double transition_probability(Index n, double log_weight_from, double log_weight_to) {
  return std::exp(log_transition_probability(n, log_weight_from, log_weight_to));
}

/// A move along basis row `axis` in direction `sign` (+1 away from the cone apex).
struct Direction {
  Index axis = 0;
  int sign = 1;
};

struct NeighborMove {
  Parallelepiped cell;
  Vertex vertex;
  bool pivoted = false;
};

namespace detail {

inline Parallelepiped cell_after_pivot(const Parallelepiped& P, const Basis& next, Index entering) {
  Parallelepiped out{next, std::vector<std::int64_t>(next.rows.size(), 0)};
  for (Index k = 0; k < next.size(); ++k) {
    const Index row = next.rows[k];
    out.index[k] = row == entering ? 0 : P.index[P.basis.position(row)];
  }
  return out;
}

inline Index entering_row(const Basis& from, const Basis& to) {
  for (Index r : to.rows) {
    if (!from.contains(r)) return r;
  }
  throw Error(Errc::InvalidInput, "bases are identical");
}

}  // namespace detail

/// The cell sharing the facet of P that lies in direction `dir`.
///
/// Stepping below k_i = 0 leaves the cone through its facet
/// cone{a_j : j in B - i}; the cell on the other side belongs to the adjacent
/// vertex (a simplex pivot). Both cones cut the shared facet with the same
/// vectors at the same spacing: shared offsets carry over, the new row starts
/// at offset 0.
inline NeighborMove neighbor(const NormalizedLP& lp, const Vertex& v, const Parallelepiped& P, Direction dir,
                             const Tolerances& tol = {}) {
  if (v.basis != P.basis) throw Error(Errc::InvalidInput, "cell does not belong to the vertex cone");
  const Index pos = P.basis.position(dir.axis);
  if (dir.sign > 0 || P.index[pos] > 0) {
    NeighborMove move{P, v, false};
    move.cell.index[pos] += dir.sign > 0 ? 1 : -1;
    return move;
  }
  Vertex next = pivot_across_facet(lp, v, dir.axis, tol);
  const Index entering = detail::entering_row(v.basis, next.basis);
  Parallelepiped cell = detail::cell_after_pivot(P, next.basis, entering);
  return NeighborMove{std::move(cell), std::move(next), true};
}

enum class StepResult { Accepted, Rejected, Lazy };

struct StepRecord {
  Direction direction;
  StepResult result = StepResult::Lazy;
  bool pivoted = false;  ///< the proposal crossed a cone facet
  double log_weight = 0.0;
  double log_weight_proposed = 0.0;
};

struct WalkOutcome {
  Parallelepiped final;
  Vec c_prime;
  Vertex current_vertex;
  bool stopped_with_c_in_cone = false;
  std::uint64_t steps_taken = 0;
  std::uint64_t pivots = 0;
  std::uint64_t accepted_moves = 0;
  std::uint64_t rejected_moves = 0;
  std::uint64_t lazy_stays = 0;
  std::vector<std::string> warnings;
};

/// Walk state with per-basis caches (volume, vertex, pivot targets, whether
/// c lies in the cone). Each basis is factored once.
class FanWalker {
 public:
  FanWalker(const NormalizedLP& lp, const WalkConfig& cfg, const Vertex& start)
      : lp_(lp), cfg_(cfg), vertex_(start), cell_{start.basis, std::vector<std::int64_t>(start.basis.rows.size(), 0)} {
    require_basis_shape(lp_, start.basis);
    current_log_weight_ = cached_log_weight(cell_);
  }

  void reset(const Vertex& v, const Parallelepiped& P) {
    if (v.basis != P.basis) throw Error(Errc::InvalidInput, "cell does not belong to the vertex cone");
    vertex_ = v;
    cell_ = P;
    current_log_weight_ = cached_log_weight(cell_);
  }

  const Parallelepiped& cell() const { return cell_; }
  const Vertex& vertex() const { return vertex_; }
  double current_log_weight() const { return current_log_weight_; }

  bool c_in_cone() { return data(vertex_.basis).c_inside; }

  /// Cached equivalent of `neighbor`.
  NeighborMove propose(Direction dir) {
    const Index pos = cell_.basis.position(dir.axis);
    if (dir.sign > 0 || cell_.index[pos] > 0) {
      NeighborMove move{cell_, vertex_, false};
      move.cell.index[pos] += dir.sign > 0 ? 1 : -1;
      return move;
    }
    BasisData& here = data(cell_.basis);
    auto it = here.pivot_to.find(dir.axis);
    if (it == here.pivot_to.end()) {
      Vertex next = pivot_across_facet(lp_, vertex_, dir.axis, cfg_.tol);
      it = here.pivot_to.emplace(dir.axis, next.basis).first;
    }
    const Basis& next = it->second;
    const Index entering = detail::entering_row(cell_.basis, next);
    Parallelepiped cell = detail::cell_after_pivot(cell_, next, entering);
    return NeighborMove{std::move(cell), data(next).vertex, true};
  }

  double cached_log_weight(const Parallelepiped& P) {
    return log_weight_at(center(lp_, P), lp_.c(), cfg_.alpha, data(P.basis).log_vol);
  }

  /// One lazy Metropolis step: uniform direction among 2n, accept with
  /// probability (1/2) min{1, f(P')/f(P)}.
  StepRecord step(Rng& rng) {
    const Index n = lp_.dim();
    const std::uint64_t pick = rng() % static_cast<std::uint64_t>(2 * n);
    StepRecord rec;
    rec.direction = Direction{cell_.basis.rows[static_cast<Index>(pick / 2)], pick % 2 == 0 ? 1 : -1};
    NeighborMove move = propose(rec.direction);
    rec.pivoted = move.pivoted;
    rec.log_weight = current_log_weight_;
    rec.log_weight_proposed = cached_log_weight(move.cell);

    const double u = uniform01(rng);
    if (u >= 0.5) {
      rec.result = StepResult::Lazy;
    } else if (std::log(2.0 * u) < std::min(0.0, rec.log_weight_proposed - rec.log_weight)) {
      rec.result = StepResult::Accepted;
      cell_ = std::move(move.cell);
      vertex_ = std::move(move.vertex);
      current_log_weight_ = rec.log_weight_proposed;
    } else {
      rec.result = StepResult::Rejected;
    }
    return rec;
  }

 private:
  struct BasisData {
    double log_vol = 0.0;
    Vertex vertex;
    bool c_inside = false;
    std::map<Index, Basis> pivot_to;
  };

  BasisData& data(const Basis& B) {
    auto it = cache_.find(B);
    if (it != cache_.end()) return it->second;
    BasisData d;
    d.log_vol = log_volume(lp_, B, cfg_.tol);
    d.vertex = B == vertex_.basis ? vertex_ : vertex_of_basis(lp_, B, cfg_.tol);
    d.c_inside = cone_membership(lp_, B, lp_.c(), cfg_.tol).inside;
    return cache_.emplace(B, std::move(d)).first->second;
  }

  const NormalizedLP& lp_;
  WalkConfig cfg_;
  Vertex vertex_;
  Parallelepiped cell_;
  double current_log_weight_ = 0.0;
  std::map<Basis, BasisData> cache_;
};

struct WalkState {
  Vertex vertex;
  Parallelepiped cell;
};

/// Single step from an explicit state (uncached convenience wrapper).
inline WalkState step(const NormalizedLP& lp, const WalkConfig& cfg, const WalkState& state, Rng& rng,
                      StepRecord* record = nullptr) {
  FanWalker walker(lp, cfg, state.vertex);
  walker.reset(state.vertex, state.cell);
  StepRecord rec = walker.step(rng);
  if (record) *record = rec;
  return WalkState{walker.vertex(), walker.cell()};
}

namespace detail {

inline void write_number(std::ostream& os, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

inline void write_trace(std::ostream& os, const NormalizedLP& lp, int level, std::uint64_t t,
                        const Parallelepiped& before, const StepRecord& rec) {
  static constexpr const char* kResult[] = {"accepted", "rejected", "lazy"};
  os << "{\"level\":" << level << ",\"step\":" << t << ",\"basis\":[";
  for (std::size_t k = 0; k < before.basis.rows.size(); ++k) {
    os << (k ? "," : "") << lp.labels()[before.basis.rows[k]] + 1;
  }
  os << "],\"k\":[";
  for (std::size_t k = 0; k < before.index.size(); ++k) os << (k ? "," : "") << before.index[k];
  os << "],\"axis\":" << lp.labels()[rec.direction.axis] + 1 << ",\"sign\":" << rec.direction.sign
     << ",\"log_weight\":";
  write_number(os, rec.log_weight);
  os << ",\"log_weight_proposed\":";
  write_number(os, rec.log_weight_proposed);
  os << ",\"result\":\"" << kResult[static_cast<int>(rec.result)] << "\",\"pivoted\":"
     << (rec.pivoted ? "true" : "false") << "}\n";
}

}  // namespace detail

/// Runs the walk from the apex cell of `start`'s cone for cfg.steps
/// iterations, stopping early once c lies in the current cone.
inline WalkOutcome run_walk(const NormalizedLP& lp, const WalkConfig& cfg, const Vertex& start) {
  const Index n = lp.dim();
  WalkOutcome out;
  if (n < 4) {
    out.warnings.push_back("dimension below 4: neighboring-cell density ratio bound does not apply");
  }
  const double nd = static_cast<double>(n);
  if (cfg.alpha < 2.0 * nd * nd * nd / cfg.delta) {
    out.warnings.push_back("alpha below 2 n^3 / delta: failure probability bound does not apply");
  }

  Rng rng(cfg.seed);
  FanWalker walker(lp, cfg, start);
  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    if (cfg.stop_in_optimal_cone && walker.c_in_cone()) {
      out.stopped_with_c_in_cone = true;
      break;
    }
    const Parallelepiped before = cfg.trace ? walker.cell() : Parallelepiped{};
    const StepRecord rec = walker.step(rng);
    ++out.steps_taken;
    switch (rec.result) {
      case StepResult::Accepted:
        ++out.accepted_moves;
        if (rec.pivoted) ++out.pivots;
        break;
      case StepResult::Rejected: ++out.rejected_moves; break;
      case StepResult::Lazy: ++out.lazy_stays; break;
    }
    if (cfg.trace) detail::write_trace(*cfg.trace, lp, cfg.level, t, before, rec);
  }
  if (cfg.stop_in_optimal_cone && !out.stopped_with_c_in_cone && walker.c_in_cone()) out.stopped_with_c_in_cone = true;
  out.final = walker.cell();
  out.current_vertex = walker.vertex();
  out.c_prime = center(lp, out.final) / cfg.alpha;
  return out;
}

}  // namespace fanwalk
