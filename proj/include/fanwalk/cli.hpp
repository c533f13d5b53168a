#pragma once

// File formats and command drivers behind the `fanwalk` executable. Commands
// return the exit code and the exact stdout text. Requires nlohmann/json (json.hpp) on the include path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fanwalk/error.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/oracle.hpp"
#include "fanwalk/solver.hpp"

namespace fanwalk::cli {

using Json = nlohmann::ordered_json;

/// Contents of an LpFileV1 document.
struct LpFile {
  LinearProgram lp;
  bool integral = false;
  std::optional<std::int64_t> Delta;
};

struct CommandResult {
  int exit_code = 0;
  std::string out;
};

inline constexpr int kExitOptimal = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitUnbounded = 3;

namespace detail {

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_json(std::ostream& os, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << Json(it.key()).dump() << ':';
        write_json(os, it.value());
      }
      os << '}';
      break;
    }
    case Json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        write_json(os, j[i]);
      }
      os << ']';
      break;
    }
    case Json::value_t::number_float: os << format_number(j.get<double>()); break;
    default: os << j.dump(); break;
  }
}

inline std::size_t expect_size(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::InvalidInput, std::string(what) + " must be an array");
  return j.size();
}

inline double expect_number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(Errc::InvalidInput, std::string(what) + " must contain numbers");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw Error(Errc::InvalidInput, std::string(what) + " must be finite");
  return x;
}

inline Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

}  // namespace detail

/// Serializes with every floating-point number printed to 17 significant digits.
inline std::string dump(const Json& j) {
  std::ostringstream os;
  detail::write_json(os, j);
  return os.str();
}

inline LpFile parse_lp(const Json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidInput, "LP file must be a JSON object");
  for (const char* key : {"n", "m", "A", "b", "c"}) {
    if (!j.contains(key)) throw Error(Errc::InvalidInput, std::string("missing field \"") + key + "\"");
  }
  if (!j["n"].is_number_integer() || !j["m"].is_number_integer()) {
    throw Error(Errc::InvalidInput, "n and m must be integers");
  }
  const std::int64_t n = j["n"].get<std::int64_t>();
  const std::int64_t m = j["m"].get<std::int64_t>();
  if (n < 1 || m < 1) throw Error(Errc::InvalidInput, "n and m must be positive");
  if (detail::expect_size(j["A"], "A") != static_cast<std::size_t>(m)) throw Error(Errc::InvalidInput, "A must have m rows");
  if (detail::expect_size(j["b"], "b") != static_cast<std::size_t>(m)) throw Error(Errc::InvalidInput, "b must have m entries");
  if (detail::expect_size(j["c"], "c") != static_cast<std::size_t>(n)) throw Error(Errc::InvalidInput, "c must have n entries");

  LpFile f;
  f.lp.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : std::string("lp");
  f.lp.A.resize(m, n);
  f.lp.b.resize(m);
  f.lp.c.resize(n);
  for (std::int64_t i = 0; i < m; ++i) {
    const Json& row = j["A"][i];
    if (detail::expect_size(row, "A rows") != static_cast<std::size_t>(n)) {
      throw Error(Errc::InvalidInput, "row " + std::to_string(i + 1) + " of A must have n entries");
    }
    for (std::int64_t k = 0; k < n; ++k) f.lp.A(i, k) = detail::expect_number(row[k], "A");
    f.lp.b(i) = detail::expect_number(j["b"][i], "b");
  }
  for (std::int64_t k = 0; k < n; ++k) f.lp.c(k) = detail::expect_number(j["c"][k], "c");
  f.lp.row_labels = identity_labels(m);

  if (j.contains("integral")) {
    if (!j["integral"].is_boolean()) throw Error(Errc::InvalidInput, "integral must be a boolean");
    f.integral = j["integral"].get<bool>();
  }
  if (j.contains("Delta")) {
    if (!j["Delta"].is_number_integer()) throw Error(Errc::InvalidInput, "Delta must be an integer");
    f.Delta = j["Delta"].get<std::int64_t>();
    if (*f.Delta < 1) throw Error(Errc::InvalidInput, "Delta must be >= 1");
  }
  return f;
}

inline LpFile parse_lp(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  return parse_lp(j);
}

inline LpFile read_lp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lp(ss.str());
}

inline Json lp_json(const LpFile& f) {
  Json j;
  j["name"] = f.lp.name;
  j["n"] = f.lp.dim();
  j["m"] = f.lp.rows();
  Json A = Json::array();
  for (Index i = 0; i < f.lp.rows(); ++i) A.push_back(detail::vec_json(f.lp.A.row(i).transpose()));
  j["A"] = std::move(A);
  j["b"] = detail::vec_json(f.lp.b);
  j["c"] = detail::vec_json(f.lp.c);
  if (f.integral) j["integral"] = true;
  if (f.Delta) j["Delta"] = *f.Delta;
  return j;
}

/// Flag values shared by `solve` and `walk-stats`; strings keep the CLI spelling.
struct SolveFlags {
  std::uint64_t seed = 0;
  std::string steps = "auto";
  double step_constant = 1.0;
  std::string alpha = "auto";
  std::string delta = "auto";
  std::string radius = "auto";
  std::string trace;
  int max_retries = 10;
};

namespace detail {

inline double parse_real(const std::string& s, const char* flag) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(x)) throw Error(Errc::InvalidInput, std::string(flag) + ": expected a number or auto");
  return x;
}

}  // namespace detail

inline SolverConfig make_config(const SolveFlags& flags, const LpFile& f) {
  SolverConfig cfg;
  cfg.seed = flags.seed;
  cfg.step_constant = flags.step_constant;
  cfg.max_retries = flags.max_retries;
  if (!(flags.step_constant > 0.0)) throw Error(Errc::InvalidInput, "--step-constant must be positive");
  if (flags.max_retries < 0) throw Error(Errc::InvalidInput, "--max-retries must be non-negative");
  if (flags.steps != "auto") {
    const double s = detail::parse_real(flags.steps, "--steps");
    if (s < 0.0 || s != std::floor(s)) throw Error(Errc::InvalidInput, "--steps must be a non-negative integer");
    cfg.steps = static_cast<std::uint64_t>(s);
  }
  if (flags.alpha != "auto") {
    cfg.alpha = detail::parse_real(flags.alpha, "--alpha");
    if (!(*cfg.alpha > 0.0)) throw Error(Errc::InvalidInput, "--alpha must be positive");
  }
  if (flags.radius != "auto") {
    cfg.radius = detail::parse_real(flags.radius, "--radius");
    if (!(*cfg.radius > 0.0)) throw Error(Errc::InvalidInput, "--radius must be positive");
  }
  cfg.Delta = f.Delta;
  if (flags.delta == "auto") {
    cfg.delta_mode = DeltaMode::Auto;
  } else if (flags.delta == "brute") {
    cfg.delta_mode = DeltaMode::BruteForce;
  } else if (flags.delta == "bound") {
    cfg.delta_mode = DeltaMode::IntegerBound;
    if (!cfg.Delta) cfg.Delta = oracle::max_subdeterminant(f.lp.A);
  } else {
    cfg.delta_mode = DeltaMode::Fixed;
    cfg.delta_value = detail::parse_real(flags.delta, "--delta");
  }
  return cfg;
}

inline Json error_json(const std::string& code, const std::string& message) {
  Json j;
  j["status"] = "error";
  j["error"] = {{"code", code}, {"message", message}};
  return j;
}

inline Json delta_json(const DeltaCertificate& cert) {
  Json j;
  j["delta"] = cert.delta;
  j["method"] = to_string(cert.method);
  if (cert.witness) {
    Json subset = Json::array();
    for (Index r : cert.witness->subset) subset.push_back(r + 1);
    j["witness"] = {{"row", cert.witness->row + 1}, {"subset", std::move(subset)}};
  }
  if (cert.Delta) j["Delta"] = *cert.Delta;
  return j;
}

inline Json report_json(const SolveReport& rep, std::uint64_t seed) {
  Json j;
  j["status"] = to_string(rep.status);
  if (rep.status == SolveStatus::Optimal) {
    Json basis = Json::array();
    for (Index r : rep.optimal_basis.rows) basis.push_back(r + 1);
    j["basis"] = std::move(basis);
    j["x"] = detail::vec_json(rep.optimal_point);
    j["value"] = rep.objective_value;
  }
  if (rep.status == SolveStatus::Infeasible && rep.infeasible_iteration) {
    j["certificate"] = {{"row", *rep.infeasible_iteration + 1}, {"min_value", *rep.infeasible_min_value}};
  }
  j["delta"] = rep.delta.delta;
  j["delta_method"] = to_string(rep.delta.method);
  Json steps = Json::array();
  for (const LevelStats& s : rep.levels) steps.push_back(s.steps_taken);
  j["walk"] = {{"alpha", rep.levels.empty() ? 0.0 : rep.levels.front().alpha},
               {"steps_per_level", std::move(steps)},
               {"pivots", rep.total_pivots},
               {"retries", rep.retries}};
  j["seed"] = seed;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  return j;
}

inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kExitOptimal;
    case SolveStatus::Infeasible: return kExitInfeasible;
    case SolveStatus::Unbounded: return kExitUnbounded;
  }
  return kExitError;
}

namespace detail {

template <class Fn>
CommandResult guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return {kExitError, dump(error_json(std::string(to_string(e.code())), e.what())) + "\n"};
  } catch (const std::exception& e) {
    return {kExitError, dump(error_json("InternalError", e.what())) + "\n"};
  }
}

}  // namespace detail

inline SolveReport solve_file(const LpFile& f, const SolveFlags& flags, std::ostream* trace = nullptr) {
  SolverConfig cfg = make_config(flags, f);
  cfg.trace = trace;
  return solve(f.lp, cfg);
}

inline CommandResult run_solve(const std::filesystem::path& input, const SolveFlags& flags) {
  return detail::guarded([&] {
    const LpFile f = read_lp(input);
    std::ofstream trace_file;
    if (!flags.trace.empty()) {
      trace_file.open(flags.trace, std::ios::trunc);
      if (!trace_file) throw Error(Errc::InvalidInput, "cannot write trace " + flags.trace);
    }
    const SolveReport rep = solve_file(f, flags, flags.trace.empty() ? nullptr : &trace_file);
    return CommandResult{exit_code(rep.status), dump(report_json(rep, flags.seed)) + "\n"};
  });
}

inline CommandResult run_verify_delta(const std::filesystem::path& input, const std::string& method) {
  return detail::guarded([&] {
    const LpFile f = read_lp(input);
    LinearProgram raw = f.lp;
    validate(raw);
    const NormalizedLP lp = normalize(raw);
    DeltaCertificate cert;
    if (method == "brute") {
      cert = delta_bruteforce(lp);
    } else if (method == "bound") {
      cert = delta_integer_bound(raw.A, f.Delta ? *f.Delta : oracle::max_subdeterminant(raw.A));
    } else {
      throw Error(Errc::InvalidInput, "--method must be brute or bound");
    }
    return CommandResult{0, dump(delta_json(cert)) + "\n"};
  });
}

namespace detail {

struct RunSummary {
  std::uint64_t seed = 0;
  std::string status;
  std::uint64_t pivots = 0;
  int retries = 0;
  std::vector<std::uint64_t> steps;
  bool success = false;  ///< finished without error on the first walk of every level
};

inline RunSummary run_once(const LpFile& f, SolveFlags flags, std::uint64_t seed) {
  flags.seed = seed;
  RunSummary s;
  s.seed = seed;
  try {
    const SolveReport rep = solve_file(f, flags);
    s.status = to_string(rep.status);
    s.pivots = rep.total_pivots;
    s.retries = rep.retries;
    for (const LevelStats& l : rep.levels) s.steps.push_back(l.steps_taken);
    s.success = rep.retries == 0;
  } catch (const Error&) {
    s.status = "error";
  }
  return s;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline Json aggregate(const std::vector<RunSummary>& runs) {
  std::vector<double> piv;
  std::size_t ok = 0;
  for (const RunSummary& r : runs) {
    piv.push_back(static_cast<double>(r.pivots));
    ok += r.success ? 1 : 0;
  }
  double mean = 0.0;
  for (double p : piv) mean += p;
  if (!piv.empty()) mean /= static_cast<double>(piv.size());
  Json j;
  j["runs"] = runs.size();
  j["mean_pivots"] = mean;
  j["median_pivots"] = median(piv);
  j["success_rate"] = runs.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(runs.size());
  return j;
}

inline Json run_json(const RunSummary& r) {
  Json j;
  j["seed"] = r.seed;
  j["status"] = r.status;
  j["pivots"] = r.pivots;
  j["retries"] = r.retries;
  j["steps_per_level"] = r.steps;
  return j;
}

}  // namespace detail

/// Runs the solve pipeline for seeds flags.seed .. flags.seed + seeds - 1. With a
/// manifest (JSON array of LP file paths, relative to the manifest), every
/// listed instance is run too and a per-m table is added.
inline CommandResult run_walk_stats(const std::filesystem::path& input, std::uint64_t seeds, const SolveFlags& flags,
                                    const std::optional<std::filesystem::path>& manifest = std::nullopt) {
  return detail::guarded([&] {
    if (seeds == 0) throw Error(Errc::InvalidInput, "--seeds must be positive");
    if (!flags.trace.empty()) throw Error(Errc::InvalidInput, "walk-stats does not write traces");
    const LpFile f = read_lp(input);
    std::vector<detail::RunSummary> runs;
    for (std::uint64_t s = 0; s < seeds; ++s) runs.push_back(detail::run_once(f, flags, flags.seed + s));

    Json out;
    out["name"] = f.lp.name;
    out["seeds"] = seeds;
    const Json agg = detail::aggregate(runs);
    for (auto it = agg.begin(); it != agg.end(); ++it) out[it.key()] = it.value();
    Json per_seed = Json::array();
    for (const auto& r : runs) per_seed.push_back(detail::run_json(r));
    out["per_seed"] = std::move(per_seed);

    if (manifest) {
      std::ifstream in(*manifest);
      if (!in) throw Error(Errc::InvalidInput, "cannot read " + manifest->string());
      Json list;
      try {
        list = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw Error(Errc::InvalidInput, std::string("malformed manifest: ") + e.what());
      }
      if (!list.is_array()) throw Error(Errc::InvalidInput, "manifest must be an array of paths");
      std::map<Index, std::vector<detail::RunSummary>> by_m;
      std::map<Index, std::size_t> instances;
      for (const Json& entry : list) {
        if (!entry.is_string()) throw Error(Errc::InvalidInput, "manifest entries must be strings");
        const LpFile g = read_lp(manifest->parent_path() / entry.get<std::string>());
        ++instances[g.lp.rows()];
        for (std::uint64_t s = 0; s < seeds; ++s) by_m[g.lp.rows()].push_back(detail::run_once(g, flags, flags.seed + s));
      }
      Json table = Json::array();
      for (const auto& [m, rs] : by_m) {
        Json row;
        row["m"] = m;
        row["instances"] = instances[m];
        const Json a = detail::aggregate(rs);
        for (auto it = a.begin(); it != a.end(); ++it) row[it.key()] = it.value();
        table.push_back(std::move(row));
      }
      out["scaling"] = std::move(table);
    }
    return CommandResult{0, dump(out) + "\n"};
  });
}

inline CommandResult run_generate(const std::string& kind, Index n, Index m, std::uint64_t seed, bool rotate) {
  return detail::guarded([&] {
    oracle::TuKind k;
    if (kind == "box") {
      k = oracle::TuKind::Box;
    } else if (kind == "interval") {
      k = oracle::TuKind::Interval;
    } else if (kind == "network") {
      k = oracle::TuKind::Network;
    } else {
      throw Error(Errc::InvalidInput, "--kind must be box, interval or network");
    }
    LpFile f;
    f.lp = oracle::tu_instance_generator(k, n, m, seed);
    if (rotate) {
      f.lp = oracle::rotated_instance(f.lp, seed);
    } else {
      f.integral = true;
      f.Delta = 1;
    }
    return CommandResult{0, dump(lp_json(f)) + "\n"};
  });
}

}  // namespace fanwalk::cli
