// Solves a small LP through the library API and prints the optimum.

#include <iostream>

#include "fanwalk/fanwalk.hpp"

int main() {
  fanwalk::LinearProgram lp;
  lp.name = "house";
  lp.A.resize(5, 2);
  lp.A << 1, 0,
          -1, 0,
          0, -1,
          1, 1,
          -1, 1;
  lp.b.resize(5);
  lp.b << 2, 0, 0, 3, 1;
  lp.c.resize(2);
  lp.c << 1, 2;

  fanwalk::SolverConfig cfg;
  cfg.seed = 7;
  const fanwalk::SolveReport rep = fanwalk::solve(lp, cfg);
  std::cout << "status " << fanwalk::to_string(rep.status) << "\n";
  if (rep.status != fanwalk::SolveStatus::Optimal) return 1;
  std::cout << "basis";
  for (auto r : rep.optimal_basis.rows) std::cout << ' ' << r + 1;
  std::cout << "\nx " << rep.optimal_point.transpose() << "\nvalue " << rep.objective_value
            << "\npivots " << rep.total_pivots << " retries " << rep.retries << "\n";
  return 0;
}
