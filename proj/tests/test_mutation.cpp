#include <gtest/gtest.h>

#include "evapctl/optimize.hpp"
#include "support.hpp"

// Linked against the library built with the adjoint reaction sign flipped.
// Both the gradient check and the duality identity have to notice.

using namespace evapctl;
using namespace evapctl::test;

TEST(Mutation, GradientCheckCatchesFlippedReactionSign) {
  const ModelParams p = small_params();
  const InitData init = small_init(p.grid);
  std::mt19937_64 rng(81);
  const ControlField th = ControlField::constant(p.grid, p.nt, 0.3, 0.0, 1.0);
  const Target tgt = constant_target(Field(p.grid, 0.9), p.nt);
  std::vector<std::vector<Field>> dirs;
  for (int k = 0; k < 5; ++k) dirs.push_back(random_slices(p.grid, p.nt, rng));
  double worst = 0.0;
  for (const GradCheckRow& r : gradient_check(init, th, tgt, 1e-3, p, dirs, 1e-3)) worst = std::max(worst, r.rel_error);
  std::printf("mutated gradcheck max rel error %.3e\n", worst);
  EXPECT_GE(worst, 1e-2);
}

TEST(Mutation, DualityCatchesFlippedReactionSign) {
  const ModelParams p = small_params();
  std::mt19937_64 rng(82);
  const Trajectory t = solve_state(small_init(p.grid), ControlField::constant(p.grid, p.nt, 0.3, 0.0, 1.0), p);
  const std::vector<Field> h = random_slices(p.grid, p.nt, rng);
  const std::vector<Field> s1 = random_slices(p.grid, p.nt + 1, rng);
  const std::vector<Field> s2 = random_slices(p.grid, p.nt + 1, rng);
  const TangentTrajectory tan = solve_linearized(t, h, p);
  const AdjointTrajectory adj = solve_adjoint_transpose(t, s1, s2, p);
  const double lhs = spacetime_inner(tan.phi1, s1, p.dt, 1) + spacetime_inner(tan.phi2, s2, p.dt, 1);
  const std::vector<Field> g2(adj.gamma2.begin(), adj.gamma2.end() - 1);
  EXPECT_GT(rel_diff(lhs, spacetime_inner(h, g2, p.dt)), 1e-6);
}
