#pragma once

// Shared fixtures for the test suites: random GLV systems with excited or
// resting trajectories, small random helpers.

#include <netrecon/netrecon.hpp>

#include <cstdint>
#include <random>

namespace netrecon::testkit {

inline Vector random_vector(Eigen::Index n, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = u(rng);
  return v;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                            double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = u(rng);
  return m;
}

/// Diagonally dominant negative interaction matrix, so the positive
/// orthant stays bounded.
inline InteractionMatrix random_stable_glv(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = i == j ? -1.0 - 0.5 * std::abs(u(rng)) : 0.3 * u(rng);
  return InteractionMatrix(a);
}

struct GlvScenario {
  InteractionMatrix a;
  GlvParameters p;
  Trajectory traj;
  RegressorFamily reg;
};

/// Positive steady state drawn first; rates follow from r = -A x*.
inline GlvParameters rates_for(const InteractionMatrix& a, const Vector& xs) {
  return GlvParameters(Vector(-(a.matrix() * xs)));
}

/// GLV with growth rates modulated at distinct frequencies: excites every
/// regressor direction.
inline GlvScenario excited_glv(Eigen::Index n, std::uint64_t seed, double horizon = 20.0,
                               double step = 0.01) {
  std::mt19937_64 rng(seed);
  InteractionMatrix a = random_stable_glv(n, rng);
  GlvParameters p = rates_for(a, random_vector(n, rng, 0.5, 1.5));
  Vector amp = Vector::Constant(n, 0.5);
  Vector freq(n), phase = random_vector(n, rng, -3.0, 3.0);
  for (Eigen::Index k = 0; k < n; ++k)
    freq(k) = 0.7 + 0.6 * static_cast<double>(k) + 0.1 * random_vector(1, rng)(0);
  RegressorFamily reg = RegressorFamily::glv(static_cast<std::size_t>(n));
  const Vector x0 = random_vector(n, rng, 0.5, 1.5);
  Trajectory traj = simulate(a, reg, modulated_glv_input(p, amp, freq, phase), x0, horizon, step);
  return GlvScenario{std::move(a), std::move(p), std::move(traj), std::move(reg)};
}

/// GLV started at its positive steady state: constant data.
inline GlvScenario resting_glv(Eigen::Index n, std::uint64_t seed, double horizon = 10.0,
                               double step = 0.01) {
  std::mt19937_64 rng(seed);
  InteractionMatrix a = random_stable_glv(n, rng);
  const Vector xs = random_vector(n, rng, 0.5, 1.5);
  GlvParameters p = rates_for(a, xs);
  RegressorFamily reg = RegressorFamily::glv(static_cast<std::size_t>(n));
  Trajectory traj = simulate(a, reg, glv_input(p), xs, horizon, step);
  return GlvScenario{std::move(a), std::move(p), std::move(traj), std::move(reg)};
}

/// Random element of the linear group of `node` with diagonal entries
/// bounded away from zero.
inline GroupElement random_group_element(std::size_t n, std::size_t node, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.3, 2.0);
  std::bernoulli_distribution flip(0.5);
  Vector d(static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = (flip(rng) ? -1.0 : 1.0) * mag(rng);
  return GroupElement(node, d, random_vector(static_cast<Eigen::Index>(n), rng));
}

// The two-species resting configuration used by the sign demos: x* = (1, 3),
// boxes with epsilon 0.1 and weights in [1, 1.2] are pairwise separable.
inline InteractionMatrix two_species_a() {
  Matrix a(2, 2);
  a << -1.1, 0.05, 1.05, -1.15;
  return InteractionMatrix(a);
}

inline GlvScenario two_species_resting() {
  InteractionMatrix a = two_species_a();
  const Vector xs = Vector{{1.0, 3.0}};
  GlvParameters p = rates_for(a, xs);
  RegressorFamily reg = RegressorFamily::glv(2);
  Trajectory traj = simulate(a, reg, glv_input(p), xs, 10.0, 0.01);
  return GlvScenario{std::move(a), std::move(p), std::move(traj), std::move(reg)};
}

}  // namespace netrecon::testkit
