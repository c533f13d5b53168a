#include <gtest/gtest.h>

#include "support.hpp"

using namespace fanwalk;
using namespace fanwalk::testing;

TEST(Reduce, UnitSquareFixFirstRow) {
  const NormalizedLP lp = normalize(unit_square());
  const Vertex v = vertex_of_basis(lp, Basis({0, 1}));
  const Reduced red = reduce(lp, 0, v);
  EXPECT_LT((red.step.U - Mat::Identity(2, 2)).norm(), 1e-15);
  ASSERT_EQ(red.lp.rows(), 2);
  EXPECT_EQ(red.step.index_map, (std::vector<Index>{1, 3}));
  EXPECT_EQ(red.step.dropped, (std::vector<Index>{2}));
  EXPECT_DOUBLE_EQ(red.lp.A()(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(red.lp.b()(0), 1.0);
  EXPECT_DOUBLE_EQ(red.lp.A()(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(red.lp.b()(1), 0.0);
  EXPECT_EQ(red.start.basis, Basis({0}));
  EXPECT_DOUBLE_EQ(red.start.point(0), 1.0);
  EXPECT_LT((red.step.lift(red.start.point) - v.point).norm(), 1e-15);
}

TEST(Reduce, FixSecondAxisSwapsCoordinates) {
  const NormalizedLP lp = normalize(unit_square());
  const Vertex v = vertex_of_basis(lp, Basis({0, 1}));
  const Reduced red = reduce(lp, 1, v);
  const Mat& U = red.step.U;
  EXPECT_LT((vec({0, 1}).transpose() * U - vec({1, 0}).transpose()).norm(), 1e-15);
  EXPECT_LT((U.transpose() * U - Mat::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(red.step.index_map, (std::vector<Index>{0, 2}));
  for (Index r = 0; r < red.lp.rows(); ++r) EXPECT_NEAR(std::abs(red.lp.A()(r, 0)), 1.0, 1e-15);
  // reduced vertices are the two corners of the top edge
  std::vector<Vec> lifted;
  for (const Vertex& w : oracle::enumerate_vertices(red.lp).vertices) lifted.push_back(red.step.lift(w.point));
  ASSERT_EQ(lifted.size(), 2u);
  const bool order = lifted[0](0) > 0.5;
  EXPECT_LT((lifted[order ? 0 : 1] - vec({1, 1})).norm(), 1e-15);
  EXPECT_LT((lifted[order ? 1 : 0] - vec({0, 1})).norm(), 1e-15);
}

TEST(Reduce, TriangleHypotenuseKeepsDelta) {
  const NormalizedLP lp = normalize(triangle());
  const Vertex v = vertex_of_basis(lp, Basis({1, 2}));
  const Reduced red = reduce(lp, 2, v);
  EXPECT_EQ(red.lp.dim(), 1);
  EXPECT_GE(delta_bruteforce(red.lp).delta, delta_bruteforce(lp).delta - 1e-7);
  for (double s : red.step.scale_factors) EXPECT_GE(s, 1.0);
}

TEST(Reduce, ObjectiveVanishes) {
  const NormalizedLP lp = normalize(unit_square(vec({1, 0})));
  try {
    reduce(lp, 0, vertex_of_basis(lp, Basis({0, 1})));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ObjectiveVanishes);
  }
}

TEST(Reduce, RequiresFixedRowInBasis) {
  const NormalizedLP lp = normalize(unit_square());
  EXPECT_THROW(reduce(lp, 2, vertex_of_basis(lp, Basis({0, 1}))), Error);
}

TEST(Reduce, MergesParallelDuplicates) {
  // x <= 1, y <= 1, -x <= 0, -y <= 0, x + y <= 1.5, x - y <= 5 (projects like x + y)
  Mat A(6, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1, 1, 1, 1, -1;
  const NormalizedLP lp = normalize(make_lp(A, vec({1, 1, 0, 0, 1.5, 5}), vec({1, 3})));
  const Vertex v = vertex_of_basis(lp, Basis({2, 1}));  // (0, 1)
  const Reduced red = reduce(lp, 2, v);                   // fix x = 0: rows y, -y, y, -y remain
  EXPECT_EQ(red.lp.rows(), 2);
  for (Index r = 0; r < red.lp.rows(); ++r) {
    for (Index q = r + 1; q < red.lp.rows(); ++q) EXPECT_GT((red.lp.row(r) - red.lp.row(q)).norm(), 1e-6);
  }
  EXPECT_TRUE(std::find(red.step.index_map.begin(), red.step.index_map.end(), 1) != red.step.index_map.end());
}

TEST(Reduce, DeltaNeverShrinksAndLiftRoundTripOnGeneratedInstances) {
  int reductions = 0;
  for (std::uint64_t seed = 0; seed < 45; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 3);
    LinearProgram raw = oracle::tu_instance_generator(static_cast<oracle::TuKind>(seed % 3), n, 2 * n + 1 + seed % 6, seed);
    if (seed % 2) raw = oracle::rotated_instance(raw, seed);
    const NormalizedLP lp = normalize(raw);
    const double delta = delta_bruteforce(lp).delta;
    const auto truth = oracle::enumerate_vertices(lp);
    const Vertex opt = vertex_of_basis(lp, truth.optimal_basis);
    for (Index fixed : opt.basis.rows) {
      const Reduced red = reduce(lp, fixed, opt);
      ++reductions;
      EXPECT_GE(delta_bruteforce(red.lp).delta, delta - 1e-7) << lp.name();
      EXPECT_LT((red.step.U.transpose() * red.step.U - Mat::Identity(n, n)).norm(), 1e-12);
      for (double s : red.step.scale_factors) EXPECT_GE(s, 1.0 - 1e-12);
      const auto sub = oracle::enumerate_vertices(red.lp);
      EXPECT_NEAR(lp.row(fixed).dot(red.step.lift(sub.vertices[0].point)), lp.b()(fixed), 1e-12);
      // optimum of the facet LP lifts to the original optimum
      const Vec best = [&] {
        Vec b = sub.vertices.front().point;
        for (const Vertex& w : sub.vertices)
          if (red.lp.c().dot(w.point) > red.lp.c().dot(b)) b = w.point;
        return b;
      }();
      EXPECT_LT((red.step.lift(best) - opt.point).norm(), 1e-7) << lp.name() << " fixed " << fixed;
      EXPECT_LT((red.step.lift(red.start.point) - opt.point).norm(), 1e-9);
    }
  }
  EXPECT_GT(reductions, 100);
}

TEST(SolveFromVertex, ReductionPathReachesOptimum) {
  // early stop off: verify_problem1, extract_element and reduce
  const NormalizedLP lp = normalize(unit_square(vec({1, 0.3})));
  SolverConfig cfg;
  cfg.steps = 6000;
  cfg.stop_in_optimal_cone = false;
  int reduced = 0;
  cfg.on_reduction = [&](const NormalizedLP& parent, double d, const NormalizedLP& child) {
    ++reduced;
    EXPECT_GE(delta_bruteforce(child).delta, d - 1e-7);
    EXPECT_EQ(child.dim(), parent.dim() - 1);
  };
  const WalkSolve ws = solve_from_vertex(lp, vertex_of_basis(lp, Basis({2, 3})), 1.0, DeltaMethod::BruteForce, cfg);
  EXPECT_EQ(ws.basis, Basis({0, 1}));
  EXPECT_EQ(reduced, 1);
  EXPECT_EQ(ws.levels.size(), 2u);
  EXPECT_FALSE(ws.levels.front().stopped_with_c_in_cone);
  std::uint64_t sum = 0;
  for (const LevelStats& l : ws.levels) sum += l.pivots;
  EXPECT_EQ(sum, ws.total_pivots);
}

TEST(Solve, UnitSquare) {
  const SolveReport rep = solve(unit_square());
  ASSERT_EQ(rep.status, SolveStatus::Optimal);
  EXPECT_EQ(rep.optimal_basis, Basis({0, 1}));
  EXPECT_LT((rep.optimal_point - vec({1, 1})).norm(), 1e-12);
  EXPECT_NEAR(rep.objective_value, 2.0, 1e-12);  // c = (1,1) unnormalized
}

TEST(Solve, InfeasibleStrip) {
  Mat A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  const SolveReport rep = solve(make_lp(A, vec({0, -1, 1, 0}), vec({1, 1})));
  EXPECT_EQ(rep.status, SolveStatus::Infeasible);
  ASSERT_TRUE(rep.infeasible_iteration);
  EXPECT_EQ(*rep.infeasible_iteration, 1);
}

TEST(Solve, MatchesOraclesOnTuInstances) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const LinearProgram raw = oracle::tu_instance_generator(static_cast<oracle::TuKind>(seed % 3), 3, 8 + seed % 5, seed);
    const NormalizedLP lp = normalize(raw);
    const auto truth = oracle::enumerate_vertices(lp);
    SolverConfig cfg;
    cfg.seed = seed;
    const SolveReport rep = solve(raw, cfg);
    ASSERT_EQ(rep.status, SolveStatus::Optimal);
    EXPECT_EQ(rep.optimal_basis, truth.optimal_basis) << raw.name;
    const Vertex bland = bland_simplex(lp, truth.vertices.front(), lp.c());
    EXPECT_EQ(rep.optimal_basis, bland.basis);
    // self-certification from the report alone
    EXPECT_TRUE(cone_membership(lp, rep.optimal_basis, lp.c()).inside);
    EXPECT_TRUE(is_feasible(lp, rep.optimal_point));
    EXPECT_NEAR(rep.objective_value, raw.c.dot(vertex_of_basis(lp, truth.optimal_basis).point), 1e-9);
    std::uint64_t sum = 0;
    for (const LevelStats& l : rep.levels) sum += l.pivots;
    EXPECT_EQ(sum, rep.total_pivots);
  }
}

TEST(Solve, DeterministicForFixedSeed) {
  const LinearProgram raw = oracle::tu_instance_generator(oracle::TuKind::Interval, 4, 12, 3);
  SolverConfig cfg;
  cfg.seed = 9;
  const SolveReport a = solve(raw, cfg);
  const SolveReport b = solve(raw, cfg);
  EXPECT_EQ(a.optimal_basis, b.optimal_basis);
  EXPECT_EQ(a.total_pivots, b.total_pivots);
  EXPECT_EQ(a.retries, b.retries);
}

TEST(Solve, RetriesExhaustedWhenWalkCannotMove) {
  // phase 1 ends at (1, 1), which is not optimal for this objective
  const LinearProgram raw = unit_square(vec({-1, 1}));
  SolverConfig cfg;
  cfg.steps = 0;
  cfg.max_retries = 2;
  try {
    solve(raw, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RetriesExhausted);
  }
}
