#include "support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace netrecon;

namespace {

double op_norm(const Matrix& m) { return Eigen::JacobiSVD<Matrix>(m).singularValues()(0); }

Vector eigenvalues(const Matrix& m) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

// Linear n = 2 system whose first state stays at zero: ker M = span(e_1).
Trajectory axis_trajectory(const RegressorFamily& reg) {
  Matrix a(2, 2);
  a << -1.0, 0.0, 0.5, -1.0;
  return simulate(InteractionMatrix(a), reg, zero_input(2), Vector{{0.0, 1.0}}, 10.0, 0.01);
}

}  // namespace

TEST(DeformationMap, SizesMatchDefinition) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (double delta : {1e-6, 1e-3, 0.1, 0.5}) {
      const Matrix r = deformation_map(4, {delta, DeformationKind::rotation, seed});
      EXPECT_LE((r.transpose() * r - Matrix::Identity(4, 4)).norm(), 1e-12);
      EXPECT_NEAR(op_norm(r - Matrix::Identity(4, 4)), 2.0 * std::sin(0.5 * delta), 1e-12);
      const Matrix a = deformation_map(4, {delta, DeformationKind::additive, seed});
      EXPECT_NEAR(op_norm(a - Matrix::Identity(4, 4)), delta, 1e-12 * (1.0 + delta));
    }
  }
  EXPECT_EQ(deformation_map(3, {0.0, DeformationKind::additive, 5}), Matrix::Identity(3, 3));
  EXPECT_EQ(deformation_map(1, {0.3, DeformationKind::rotation, 5}), Matrix::Identity(1, 1));
  EXPECT_THROW(deformation_map(3, {-1e-3, DeformationKind::rotation, 5}), ParameterError);
  EXPECT_THROW(deformation_map(3, {std::nan(""), DeformationKind::rotation, 5}), ParameterError);
}

TEST(DeformationMap, Deterministic) {
  const DeformationSpec spec{0.2, DeformationKind::rotation, 17};
  EXPECT_EQ(deformation_map(5, spec), deformation_map(5, spec));
  EXPECT_NE(deformation_map(5, spec), deformation_map(5, {0.2, DeformationKind::rotation, 18}));
  EXPECT_EQ(trial_seed(7, 3), trial_seed(7, 3));
  EXPECT_NE(trial_seed(7, 3), trial_seed(7, 4));
  EXPECT_NE(trial_seed(7, 3), trial_seed(8, 3));
}

TEST(Deform, ClosedFormMatchesReintegration) {
  const auto s = testkit::excited_glv(3, 21, 10.0);
  for (auto kind : {DeformationKind::rotation, DeformationKind::additive}) {
    const DeformationSpec spec{0.05, kind, 4};
    const Matrix l = deformation_map(3, spec);
    const auto deformed = deform(s.reg, 1, spec);
    const auto direct = compute_gram(s.traj, deformed, 1);
    const auto closed = gram_under_map(compute_gram(s.traj, s.reg, 1), l);
    EXPECT_LE((direct.gram - closed.gram).norm(), 1e-10 * closed.gram.norm());
    EXPECT_LE((direct.moment - closed.moment).norm(), 1e-10 * (1.0 + closed.moment.norm()));
    EXPECT_LE(deformation_size(s.traj, s.reg, deformed, 1), 0.05 + 1e-12);
  }
}

TEST(Deform, ContinuityAtTinyDelta) {
  const auto s = testkit::excited_glv(3, 22, 10.0);
  const auto resting = testkit::resting_glv(3, 23);
  for (const auto* sc : {&s, &resting}) {
    const auto g = compute_gram(sc->traj, sc->reg, 0);
    for (auto kind : {DeformationKind::rotation, DeformationKind::additive}) {
      const Matrix l = deformation_map(3, {1e-14, kind, 9});
      EXPECT_LE(op_norm(l - Matrix::Identity(3, 3)), 1e-13);
      const auto h = gram_under_map(g, l);
      EXPECT_EQ(h.rank, g.rank);
      EXPECT_LE((h.gram - g.gram).norm(), 1e-12 * g.gram.norm());
      EXPECT_NEAR(pe_check(h).margin, pe_check(g).margin, 1e-10);
    }
  }
}

TEST(Deform, RotationPreservesSpectrum) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix f = testkit::random_matrix(4, 6, rng);
    const auto g = summarize_gram(2, f * f.transpose(), Vector::Zero(4));
    const Matrix l = deformation_map(4, {0.7, DeformationKind::rotation, static_cast<std::uint64_t>(trial)});
    const auto h = gram_under_map(g, l);
    EXPECT_LE((eigenvalues(h.gram) - eigenvalues(g.gram)).cwiseAbs().maxCoeff(), 1e-9 * g.sigma_max());
  }
}

TEST(Deform, AdditiveWithinWeylBoundAndRankPreserved) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index k = 1 + trial % 4;
    const Matrix f = testkit::random_matrix(4, k, rng);
    const auto g = summarize_gram(0, f * f.transpose(), Vector::Zero(4));
    const double delta = 0.01 * (1 + trial % 5);
    const Matrix l = deformation_map(4, {delta, DeformationKind::additive, static_cast<std::uint64_t>(trial)});
    const auto h = gram_under_map(g, l);
    EXPECT_EQ(h.rank, g.rank);
    const double bound = (2.0 * delta + delta * delta) * g.sigma_max();
    EXPECT_LE((eigenvalues(h.gram) - eigenvalues(g.gram)).cwiseAbs().maxCoeff(), bound + 1e-12);
  }
}

TEST(PeSurvival, FullSurvivalBelowQuarterMargin) {
  const auto s = testkit::excited_glv(3, 26);
  const auto g = compute_gram(s.traj, s.reg, 0);
  const double margin = pe_check(g).margin;
  ASSERT_GT(margin, 1e-4);
  const std::vector<double> deltas = {0.0, margin / 16.0, margin / 4.0};
  for (auto kind : {DeformationKind::rotation, DeformationKind::additive}) {
    const auto table = probe_pe_stability(g, deltas, 100, kind, 11);
    ASSERT_EQ(table.size(), 3u);
    for (const auto& row : table) {
      EXPECT_EQ(row.trials, 100u);
      EXPECT_EQ(row.survived, 100u);
      EXPECT_DOUBLE_EQ(row.fraction, 1.0);
    }
    // Weyl oracle per trial: sigma_min(L M L^T) >= sigma_min - (2 delta + delta^2) sigma_max.
    const double delta = margin / 4.0;
    for (std::size_t t = 0; t < 100; ++t) {
      const Matrix l = deformation_map(3, {delta, kind, trial_seed(11, 2 * 100 + t)});
      const double smin = eigenvalues(l * g.gram * l.transpose())(0);
      EXPECT_GE(smin, margin * g.sigma_max() - (2.0 * delta + delta * delta) * g.sigma_max() - 1e-12);
    }
  }
  EXPECT_EQ(probe_pe_stability(g, deltas, 20, DeformationKind::rotation, 3).front().min_margin,
            margin);
}

TEST(PeSurvival, DeterministicAndValidated) {
  const auto s = testkit::excited_glv(3, 27);
  const auto g = compute_gram(s.traj, s.reg, 2);
  const std::vector<double> deltas = {0.1, 0.5, 1.0};
  const auto a = probe_pe_stability(g, deltas, 50, DeformationKind::additive, 5);
  const auto b = probe_pe_stability(g, deltas, 50, DeformationKind::additive, 5);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].survived, b[k].survived);
    EXPECT_EQ(a[k].min_margin, b[k].min_margin);
  }
  const auto resting = testkit::resting_glv(3, 28);
  EXPECT_THROW(probe_pe_stability(compute_gram(resting.traj, resting.reg, 0), deltas, 10,
                                  DeformationKind::rotation, 1),
               PreconditionError);
  EXPECT_THROW(probe_pe_stability(g, deltas, 0, DeformationKind::rotation, 1), ParameterError);
}

TEST(OrbitFlip, AxisKernelFlipsAtEverySize) {
  const auto reg = RegressorFamily::linear(2, Uncertainty::linear_group);
  const auto g = compute_gram(axis_trajectory(reg), reg, 0);
  ASSERT_EQ(g.rank, 1u);
  ASSERT_EQ(kernel_orbit_containment(g).kind, Containment::contained_in_low_dim);
  const auto table = probe_orbit_instability(g, {0.0, 1e-6, 1e-4, 1e-3, 1e-2});
  ASSERT_EQ(table.size(), 5u);
  EXPECT_FALSE(table[0].flipped);
  EXPECT_EQ(table[0].after, Containment::contained_in_low_dim);
  for (std::size_t k = 1; k < table.size(); ++k) {
    EXPECT_TRUE(table[k].flipped) << table[k].delta;
    EXPECT_EQ(table[k].after, Containment::reaches_full_dim);
    EXPECT_NEAR(table[k].size, table[k].delta, 1e-3 * table[k].delta);
  }
}

TEST(OrbitFlip, RotationIsOrthogonalAndSmall) {
  const auto reg = RegressorFamily::linear(2, Uncertainty::linear_group);
  const auto g = compute_gram(axis_trajectory(reg), reg, 0);
  for (double delta : {1e-6, 1e-2, 0.3}) {
    const Matrix l = orbit_flip_rotation(g, delta);
    EXPECT_LE((l.transpose() * l - Matrix::Identity(2, 2)).norm(), 1e-12);
    EXPECT_NEAR(op_norm(l - Matrix::Identity(2, 2)), 2.0 * std::sin(0.5 * delta), 1e-12);
  }
}

TEST(OrbitFlip, HigherDimensionalKernel) {
  // Only x_3 moves, so ker M = span(e_1, e_2).
  Matrix a = -Matrix::Identity(3, 3);
  const auto reg = RegressorFamily::linear(3, Uncertainty::linear_group);
  const auto traj = simulate(InteractionMatrix(a), reg, zero_input(3), Vector{{0.0, 0.0, 1.0}}, 5.0, 0.01);
  const auto g = compute_gram(traj, reg, 0);
  ASSERT_EQ(g.kernel_dimension(), 2u);
  const auto c = kernel_orbit_containment(g);
  if (c.kind == Containment::contained_in_low_dim) {
    for (const auto& row : probe_orbit_instability(g, {1e-6, 1e-4, 1e-2})) EXPECT_TRUE(row.flipped);
  } else {
    EXPECT_THROW(orbit_flip_rotation(g, 1e-3), PreconditionError);
  }
}

TEST(OrbitFlip, Preconditions) {
  const auto s = testkit::excited_glv(2, 29);
  const auto pe = compute_gram(s.traj, s.reg, 0);
  EXPECT_THROW(orbit_flip_rotation(pe, 1e-3), PreconditionError);
  const auto reg = RegressorFamily::linear(2, Uncertainty::linear_group);
  const auto full = compute_gram(axis_trajectory(reg), reg, 1);
  EXPECT_THROW(probe_orbit_instability(full, {1e-3}), PreconditionError);
  const auto g = compute_gram(axis_trajectory(reg), reg, 0);
  EXPECT_THROW(probe_orbit_instability(g, {-1.0}), ParameterError);
}

TEST(IndistinguishablePair, TwoSpeciesExample) {
  Matrix m(2, 2);
  m << -1.0, -0.5, -0.5, -1.0;
  const InteractionMatrix a(m);
  const GlvParameters p(Vector{{1.5, 1.5}});
  const auto pair = indistinguishable_pair(a, p, 3);
  EXPECT_LE((pair.steady_state - Vector::Ones(2)).norm(), 1e-12);
  EXPECT_LE((p.r + pair.a_prime.matrix() * pair.steady_state).norm(), 1e-12);
  EXPECT_NE(property_of(pair.a_prime, PropertyKind::sign, 0.0), property_of(a, PropertyKind::sign, 0.0));
  const auto reg = RegressorFamily::glv(2);
  const auto t1 = simulate(a, reg, glv_input(p), pair.steady_state, 10.0, 0.01);
  const auto t2 = simulate(pair.a_prime, reg, glv_input(p), pair.steady_state, 10.0, 0.01);
  EXPECT_LE(sup_distance(t1, t2), 1e-9);
  EXPECT_GT((pair.a_prime.matrix() - m).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(IndistinguishablePair, RandomSystems) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const auto a = testkit::random_stable_glv(3, rng);
    const Vector xs = testkit::random_vector(3, rng, 0.5, 1.5);
    const GlvParameters p = testkit::rates_for(a, xs);
    const auto pair = indistinguishable_pair(a, p, seed);
    EXPECT_LE((pair.steady_state - xs).norm(), 1e-10);
    EXPECT_LE((p.r + pair.a_prime.matrix() * xs).norm(), 1e-10);
    EXPECT_NE(property_of(pair.a_prime, PropertyKind::sign, 0.0), property_of(a, PropertyKind::sign, 0.0));
    const auto again = indistinguishable_pair(a, p, seed);
    EXPECT_EQ(again.a_prime.matrix(), pair.a_prime.matrix());
  }
}

TEST(IndistinguishablePair, Preconditions) {
  EXPECT_THROW(indistinguishable_pair(InteractionMatrix(Matrix::Zero(2, 2)), GlvParameters(Vector::Ones(2)), 1),
               PreconditionError);
  Matrix m(2, 2);
  m << -1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(indistinguishable_pair(InteractionMatrix(m), GlvParameters(Vector{{1.0, -1.0}}), 1),
               PreconditionError);
}
