#pragma once

// Regressor deformations and adversarial constructions.
//
// A deformation of node i is a near-identity linear map L acting on the
// regressor output, f_hat = L f. Then M_hat = L M L^T and w_hat = L w, so
// probes never have to re-integrate the trajectory. The size delta is the
// relative operator-norm distance: ||f_hat - f|| <= delta ||f|| pointwise.

#include <netrecon/errors.hpp>
#include <netrecon/gram.hpp>
#include <netrecon/group.hpp>
#include <netrecon/model.hpp>
#include <netrecon/property.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace netrecon {

enum class DeformationKind { rotation, additive };

inline std::string to_string(DeformationKind k) {
  return k == DeformationKind::rotation ? "rotation" : "additive";
}

inline DeformationKind parse_deformation_kind(const std::string& s) {
  if (s == "rotation") return DeformationKind::rotation;
  if (s == "additive") return DeformationKind::additive;
  throw ParameterError("unknown deformation kind '" + s + "'");
}

struct DeformationSpec {
  double delta = 0.0;
  DeformationKind kind = DeformationKind::rotation;
  std::uint64_t seed = 0;
};

/// Seed of trial `index` under `base`; independent of evaluation order.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace detail {

inline Matrix gaussian_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) m(r, c) = normal(rng);
  return m;
}

inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

}  // namespace detail

/// L = exp(delta K) with K random skew, ||K||_2 = 1 (orthogonal, so
/// ||L - I||_2 = 2 sin(delta/2) <= delta), or L = I + delta N with N random,
/// ||N||_2 = 1. For n = 1 the rotation is the identity.
inline Matrix deformation_map(std::size_t n, const DeformationSpec& spec) {
  if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta))
    throw ParameterError("deformation size must be finite and >= 0");
  const auto m = static_cast<Eigen::Index>(n);
  const Matrix id = Matrix::Identity(m, m);
  if (spec.delta == 0.0) return id;
  std::mt19937_64 rng(spec.seed);
  const Matrix r = detail::gaussian_matrix(m, rng);
  if (spec.kind == DeformationKind::rotation) {
    Matrix k = r - r.transpose();
    const double nk = detail::operator_norm(k);
    if (nk == 0.0) return id;
    k /= nk;
    return Matrix((spec.delta * k).exp());
  }
  return id + (spec.delta / detail::operator_norm(r)) * r;
}

/// Deformed family: node `node` evaluates L f_node.
inline RegressorFamily deform(const RegressorFamily& reg, std::size_t node,
                              const DeformationSpec& spec) {
  reg.check_node(node);
  return reg.left_composed(node, deformation_map(reg.size(), spec));
}

/// Realized relative size max_k ||f_hat(x_k) - f(x_k)|| / max_k ||f(x_k)||
/// over the trajectory samples.
inline double deformation_size(const Trajectory& traj, const RegressorFamily& reg,
                               const RegressorFamily& deformed, std::size_t node) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const Vector x = traj.state(k);
    const Vector f = reg(node, x);
    diff = std::max(diff, (deformed(node, x) - f).norm());
    scale = std::max(scale, f.norm());
  }
  return scale > 0.0 ? diff / scale : diff;
}

struct SurvivalRow {
  double delta = 0.0;
  std::size_t trials = 0;
  std::size_t survived = 0;
  double fraction = 0.0;
  double min_margin = 0.0;  // smallest margin seen among the trials
};

/// Fraction of random deformations of each size under which PE persists.
inline std::vector<SurvivalRow> probe_pe_stability(const GramSummary& g,
                                                   const std::vector<double>& deltas,
                                                   std::size_t trials, DeformationKind kind,
                                                   std::uint64_t seed) {
  if (!pe_check(g).holds)
    throw PreconditionError("PE survival probe needs a base regressor with PE (node " +
                            std::to_string(g.node + 1) + " has rank " +
                            std::to_string(g.rank) + ")");
  if (trials == 0) throw ParameterError("PE survival probe needs at least one trial");
  std::vector<SurvivalRow> table;
  for (std::size_t d = 0; d < deltas.size(); ++d) {
    SurvivalRow row;
    row.delta = deltas[d];
    row.trials = trials;
    row.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      const DeformationSpec spec{deltas[d], kind, trial_seed(seed, d * trials + t)};
      const GramSummary hat = gram_under_map(g, deformation_map(g.dimension(), spec));
      const PeResult pe = pe_check(hat);
      if (pe.holds) ++row.survived;
      row.min_margin = std::min(row.min_margin, pe.margin);
    }
    row.fraction = static_cast<double>(row.survived) / static_cast<double>(trials);
    table.push_back(row);
  }
  return table;
}

inline std::vector<SurvivalRow> probe_pe_stability(const Trajectory& traj,
                                                   const RegressorFamily& reg, std::size_t node,
                                                   const std::vector<double>& deltas,
                                                   std::size_t trials, DeformationKind kind,
                                                   std::uint64_t seed,
                                                   RankTolerance tol = RankTolerance()) {
  return probe_pe_stability(compute_gram(traj, reg, node, tol), deltas, trials, kind, seed);
}

struct FlipRow {
  double delta = 0.0;
  double size = 0.0;  // ||L - I||_2
  Containment before = Containment::contained_in_low_dim;
  Containment after = Containment::contained_in_low_dim;
  bool flipped = false;
};

/// Plane rotation by angle delta taking the first kernel vector z towards u,
/// the normalized sum of the coordinates z's orbit cannot reach. The
/// deformed kernel L ker M contains cos(delta) z + sin(delta) u, whose
/// support covers every off-diagonal coordinate.
inline Matrix orbit_flip_rotation(const GramSummary& g, double delta,
                                  double zero_tol = kDefaultZeroTol) {
  const ContainmentResult c = kernel_orbit_containment(g, zero_tol);
  if (g.kernel.cols() == 0 || c.kind != Containment::contained_in_low_dim)
    throw PreconditionError("orbit-flip probe needs a nontrivial kernel contained in "
                            "low-dimensional orbits");
  const auto n = static_cast<Eigen::Index>(g.dimension());
  const Vector z = g.kernel.col(0);
  Vector u = Vector::Zero(n);
  for (std::size_t j : c.identifiable_coordinates()) u(static_cast<Eigen::Index>(j)) = 1.0;
  u -= u.dot(z) * z;
  u.normalize();
  const Matrix k = u * z.transpose() - z * u.transpose();
  return Matrix::Identity(n, n) + std::sin(delta) * k + (1.0 - std::cos(delta)) * k * k;
}

inline std::vector<FlipRow> probe_orbit_instability(const GramSummary& g,
                                                    const std::vector<double>& deltas,
                                                    double zero_tol = kDefaultZeroTol) {
  std::vector<FlipRow> table;
  for (double delta : deltas) {
    if (!(delta >= 0.0) || !std::isfinite(delta))
      throw ParameterError("deformation size must be finite and >= 0");
    const Matrix l = orbit_flip_rotation(g, delta, zero_tol);
    FlipRow row;
    row.delta = delta;
    row.size = 2.0 * std::sin(0.5 * delta);
    row.before = Containment::contained_in_low_dim;
    row.after = delta == 0.0 ? row.before
                             : kernel_orbit_containment(gram_under_map(g, l), zero_tol).kind;
    row.flipped = row.after != row.before;
    table.push_back(row);
  }
  return table;
}

struct IndistinguishablePair {
  InteractionMatrix a;
  InteractionMatrix a_prime;
  Vector steady_state;
  std::size_t attempts = 0;
};

namespace detail {

inline bool hurwitz(const Matrix& j) {
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Matrix>(j, false).eigenvalues();
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    if (!(ev(k).real() < 0.0)) return false;
  return true;
}

}  // namespace detail

/// A' = A + Delta with every row of Delta orthogonal to the positive steady
/// state x*, so r + A' x* = 0 and both systems rest at x*. Resampled until
/// sign(A') differs from sign(A) and diag(x*) A' is Hurwitz, the latter so
/// that roundoff around x* decays instead of separating the trajectories.
inline IndistinguishablePair indistinguishable_pair(const InteractionMatrix& a,
                                                    const GlvParameters& p, std::uint64_t seed,
                                                    std::size_t max_attempts = 10000) {
  const auto xs = glv_steady_state(a, p);
  if (!xs) throw PreconditionError("indistinguishable_pair: A is singular");
  if ((xs->array() <= 0.0).any())
    throw PreconditionError("indistinguishable_pair: steady state is not positive");
  const Vector& x = *xs;
  const auto n = static_cast<Eigen::Index>(a.size());
  const double scale = std::max(1.0, a.matrix().cwiseAbs().maxCoeff());
  const Matrix sign_a = property_of(a, PropertyKind::sign, 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
    Matrix delta = scale * detail::gaussian_matrix(n, rng);
    for (Eigen::Index i = 0; i < n; ++i)
      delta.row(i) -= (delta.row(i).dot(x) / x.squaredNorm()) * x.transpose();
    if (delta.cwiseAbs().maxCoeff() == 0.0) continue;
    InteractionMatrix ap(a.matrix() + delta);
    if (property_of(ap, PropertyKind::sign, 0.0) == sign_a) continue;
    if (!detail::hurwitz(x.asDiagonal() * ap.matrix())) continue;
    return IndistinguishablePair{a, std::move(ap), x, attempt};
  }
  throw Error("indistinguishable_pair: no admissible perturbation found in " +
              std::to_string(max_attempts) + " attempts");
}

/// max_k max_j |x_kj - y_kj| over common samples.
inline double sup_distance(const Trajectory& a, const Trajectory& b) {
  if (a.samples() != b.samples() || a.nodes() != b.nodes())
    throw ParameterError("sup_distance: trajectories differ in shape");
  return (a.states() - b.states()).cwiseAbs().maxCoeff();
}

}  // namespace netrecon
