#include <gtest/gtest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "evapctl/errors.hpp"
#include "evapctl/optimize.hpp"
#include "support.hpp"

using namespace evapctl;
using namespace evapctl::test;

namespace {

Trajectory fixed_phi_trajectory(const Grid& g, int nt, double dt, double phi) {
  Trajectory t;
  for (int n = 0; n <= nt; ++n) {
    t.times.push_back(n * dt);
    t.m.emplace_back(g);
    t.phi.emplace_back(g, phi);
  }
  return t;
}

ModelParams linear_params(const Grid& g, double alpha, double T, double dt) {
  return ModelParams::make(g, 0.0, alpha, T, dt, std::make_shared<const Kernel>(build_kernel(g, 0.4)));
}

}  // namespace

TEST(Cost, WorkedExamples) {
  const Grid g(8, 8, 1.0, 1.0);
  const int nt = 10;
  const double dt = 0.1;
  const Trajectory t = fixed_phi_trajectory(g, nt, dt, 0.5);
  const ControlField zero = ControlField::constant(g, nt, 0.0, -5, 5);
  EXPECT_EQ(cost(t, zero, constant_target(Field(g, 0.5), nt), 1.0).total(), 0.0);
  EXPECT_NEAR(cost(t, zero, constant_target(Field(g, -0.5), nt), 0.0).misfit, 0.5, 1e-14);
  const CostBreakdown c = cost(t, ControlField::constant(g, nt, 1.0, -5, 5), constant_target(Field(g, 0.5), nt), 2.0);
  EXPECT_EQ(c.misfit, 0.0);
  EXPECT_NEAR(c.reg, 1.0, 1e-14);
}

TEST(Cost, ShapeMismatch) {
  const Grid g(8, 8, 1.0, 1.0);
  const Trajectory t = fixed_phi_trajectory(g, 5, 0.1, 0.5);
  try {
    (void)cost(t, ControlField::constant(g, 5, 0.0, 0, 1), constant_target(Field(g), 4), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
}

TEST(Adjoint, ZeroMisfitGivesZeroAdjoint) {
  const ModelParams p = small_params();
  const Trajectory t = solve_state(small_init(p.grid), ControlField::constant(p.grid, p.nt, 0.2, 0, 1), p);
  for (const auto& adj : {solve_adjoint_discrete(t, t.phi, p), solve_adjoint_continuous(t, t.phi, p)}) {
    for (int n = 0; n <= p.nt; ++n) {
      EXPECT_EQ(max_abs(adj.gamma1[n]), 0.0);
      EXPECT_EQ(max_abs(adj.gamma2[n]), 0.0);
    }
  }
}

// beta = 0: gamma2_n = (I - dt L)^{-1} [(1 - alpha dt) gamma2_{n+1} + dt (phi_{n+1} - phi_d)], gamma1 = 0.
TEST(Adjoint, LinearCaseMatchesDenseOracle) {
  const Grid g(8, 8, 1.0, 1.0);
  const ModelParams p = linear_params(g, 0.5, 0.2, 0.02);
  std::mt19937_64 rng(51);
  const Trajectory t = solve_state(small_init(g), ControlField(random_slices(g, p.nt, rng), -1, 1), p);
  const Field phi_d = random_field(g, rng, 0.0, 1.0);
  const AdjointTrajectory adj = solve_adjoint_discrete(t, constant_target(phi_d, p.nt), p);

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(64, 64) - p.dt * laplacian_matrix(g));
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(64);
  for (int n = p.nt - 1; n >= 0; --n) {
    gamma = lu.solve((1.0 - p.alpha * p.dt) * gamma + p.dt * (to_vec(t.phi[n + 1]) - to_vec(phi_d)));
    EXPECT_LT(max_abs(adj.gamma2[n] - to_field(g, gamma)), 1e-12 * std::max(1.0, gamma.cwiseAbs().maxCoeff()));
    EXPECT_EQ(max_abs(adj.gamma1[n]), 0.0);
  }
}

TEST(Adjoint, DualityIdentity) {
  const ModelParams p = small_params();
  std::mt19937_64 rng(52);
  const Trajectory t = solve_state(small_init(p.grid), ControlField(random_slices(p.grid, p.nt, rng, 0.5), -1, 1), p);
  const std::vector<Field> h = random_slices(p.grid, p.nt, rng);
  std::vector<Field> s1 = random_slices(p.grid, p.nt + 1, rng);
  std::vector<Field> s2 = random_slices(p.grid, p.nt + 1, rng);
  const TangentTrajectory tan = solve_linearized(t, h, p);
  const AdjointTrajectory adj = solve_adjoint_transpose(t, s1, s2, p);
  const double lhs = spacetime_inner(tan.phi1, s1, p.dt, 1) + spacetime_inner(tan.phi2, s2, p.dt, 1);
  std::vector<Field> g2(adj.gamma2.begin(), adj.gamma2.end() - 1);
  const double rhs = spacetime_inner(h, g2, p.dt);
  EXPECT_LT(rel_diff(lhs, rhs), 1e-10);
}

TEST(Adjoint, ContinuousMatchesDiscreteWithoutInteraction) {
  const Grid g(16, 16, 1.0, 1.0);
  const ModelParams p = linear_params(g, 0.8, 0.1, 0.01);
  std::mt19937_64 rng(53);
  const Trajectory t = solve_state(small_init(g), ControlField(random_slices(g, p.nt, rng), -1, 1), p);
  const Target tgt = constant_target(random_field(g, rng, 0.0, 1.0), p.nt);
  const AdjointTrajectory a = solve_adjoint_discrete(t, tgt, p);
  const AdjointTrajectory b = solve_adjoint_continuous(t, tgt, p);
  for (int n = 0; n <= p.nt; ++n) {
    EXPECT_LT(max_abs(a.gamma2[n] - b.gamma2[n]), 1e-12);
    EXPECT_LT(max_abs(a.gamma1[n] - b.gamma1[n]), 1e-12);
  }
}

TEST(Adjoint, ManufacturedTargetRoundTrip) {
  const ModelParams p = small_params();
  std::mt19937_64 rng(54);
  const Trajectory t = solve_state(small_init(p.grid), ControlField::constant(p.grid, p.nt, 0.3, 0, 1), p);
  const std::vector<Field> want = random_slices(p.grid, p.nt, rng, 1e-2);
  const Target tgt = manufacture_target(t, want, p);
  ASSERT_EQ(static_cast<int>(tgt.size()), p.nt + 1);
  const AdjointTrajectory adj = solve_adjoint_discrete(t, tgt, p);
  for (int n = 0; n < p.nt; ++n) EXPECT_LT(max_abs(adj.gamma2[n] - want[n]), 1e-13) << n;
}

TEST(Gradient, MatchedTargetGivesRegularizationOnly) {
  const ModelParams p = small_params();
  std::mt19937_64 rng(55);
  const ControlField th(random_slices(p.grid, p.nt, rng), -1, 1);
  const InitData init = small_init(p.grid);
  const Trajectory t = solve_state(init, th, p);
  const Evaluation e = evaluate(init, th, t.phi, 0.3, p);
  for (int n = 0; n < p.nt; ++n) EXPECT_LT(max_abs(e.gradient[n] - 0.3 * th.slices[n]), 1e-15);
  const Evaluation z = evaluate(init, th, t.phi, 0.0, p);
  for (int n = 0; n < p.nt; ++n) EXPECT_EQ(max_abs(z.gradient[n]), 0.0);
}

TEST(Gradient, MatchesCentralDifferences) {
  const Grid g(32, 32, 1.0, 1.0);
  const ModelParams p = ModelParams::make(g, 1.0, 1.0, 0.25, 5e-3, std::make_shared<const Kernel>(build_kernel(g, 0.15)));
  std::mt19937_64 rng(56);
  const InitData init = small_init(g);
  const ControlField th = ControlField::constant(g, p.nt, 0.3, 0.0, 1.0);
  const Target tgt = constant_target(realize_field("cosine:0.5,1,1,0.5", g, rng), p.nt);
  std::vector<std::vector<Field>> dirs;
  for (int k = 0; k < 3; ++k) dirs.push_back(random_slices(g, p.nt, rng));
  for (const GradCheckRow& r : gradient_check(init, th, tgt, 1e-3, p, dirs, 1e-3)) EXPECT_LE(r.rel_error, 1e-6);
}

TEST(Projection, ClampIdempotentNonexpansive) {
  const Grid g(8, 8, 1.0, 1.0);
  std::mt19937_64 rng(57);
  const auto one = [&](double v) { return project_admissible({Field(g, v)}, 0.0, 1.0)[0][0]; };
  EXPECT_EQ(one(-0.3), 0.0);
  EXPECT_EQ(one(0.4), 0.4);
  EXPECT_EQ(one(1.7), 1.0);
  for (int k = 0; k < 100; ++k) {
    const std::vector<Field> a = {random_field(g, rng, -2, 3)};
    const std::vector<Field> b = {random_field(g, rng, -2, 3)};
    const auto pa = project_admissible(a, 0.0, 1.0);
    const auto pb = project_admissible(b, 0.0, 1.0);
    EXPECT_EQ(max_abs(project_admissible(pa, 0.0, 1.0)[0] - pa[0]), 0.0);
    EXPECT_LE(l2_norm(pa[0] - pb[0]), l2_norm(a[0] - b[0]) * (1 + 1e-15));
  }
}

TEST(Stationarity, WorkedExamples) {
  const Grid g(8, 8, 1.0, 1.0);
  const int nt = 4;
  const double dt = 0.25;
  const ControlField mid = ControlField::constant(g, nt, 0.5, 0.0, 1.0);
  EXPECT_EQ(stationarity_residual(mid, std::vector<Field>(nt, Field(g)), dt), 0.0);
  const std::vector<Field> small(nt, Field(g, 0.1));
  EXPECT_NEAR(stationarity_residual(mid, small, dt, 2.0), 2.0 * control_l2(small, dt), 1e-15);
  const ControlField low = ControlField::constant(g, nt, 0.0, 0.0, 1.0);
  EXPECT_EQ(stationarity_residual(low, std::vector<Field>(nt, Field(g, 3.0)), dt), 0.0);
}

TEST(ProjectionCharacterization, DeltaZeroAndManufactured) {
  const ModelParams p = small_params();
  const InitData init = small_init(p.grid);
  const ControlField th = ControlField::constant(p.grid, p.nt, 0.4, 0.0, 1.0);
  const Trajectory t = solve_state(init, th, p);
  const AdjointTrajectory adj = solve_adjoint_discrete(t, t.phi, p);
  try {
    (void)projection_characterization_check(th, adj, 0.0, p.dt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DeltaZero);
  }
  // gamma2 = -delta * theta makes theta its own projection formula
  const double delta = 0.1;
  std::vector<Field> g2;
  for (const Field& s : th.slices) g2.push_back(-delta * s);
  const Evaluation e = evaluate(init, th, manufacture_target(t, g2, p), delta, p);
  EXPECT_LT(projection_characterization_check(th, e.adj, delta, p.dt), 1e-12);
  EXPECT_LT(stationarity_residual(th, e.gradient, p.dt), 1e-12);
}
