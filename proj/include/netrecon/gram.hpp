#pragma once

// Gram matrix M_i = int f_i f_i^T dt and moment vector w_i = int f_i (dx_i - u_i) dt
// along a trajectory, with numerical rank, kernel and row-space bases.

#include <netrecon/errors.hpp>
#include <netrecon/group_element.hpp>
#include <netrecon/model.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace netrecon {

/// Relative rank threshold: singular values <= tau * sigma_max count as zero.
class RankTolerance {
 public:
  static constexpr double kDefault = 1e-8;

  RankTolerance() = default;
  explicit RankTolerance(double tau) : tau_(tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("rank tolerance must lie in (0, 1)");
  }
  double value() const noexcept { return tau_; }

 private:
  double tau_ = kDefault;
};

struct GramSummary {
  std::size_t node = 0;
  Matrix gram;              // M_i, symmetric PSD
  Vector moment;            // w_i
  Vector singular_values;   // descending
  std::size_t rank = 0;
  Matrix kernel;            // n x (n - rank), orthonormal columns
  Matrix row_space;         // n x rank, orthonormal columns
  RankTolerance tolerance;
  Uncertainty uncertainty = Uncertainty::exact;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(gram.rows()); }
  std::size_t kernel_dimension() const noexcept { return dimension() - rank; }
  double sigma_max() const { return singular_values.size() ? singular_values(0) : 0.0; }
};

namespace detail {

// Flip so the entry of largest magnitude is positive; keeps bases stable
// across runs and platforms.
inline void canonical_sign(Eigen::Ref<Vector> v) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k)
    if (std::abs(v(k)) > std::abs(v(best)) + 1e-14) best = k;
  if (v(best) < 0.0) v = -v;
}

}  // namespace detail

/// Spectral summary of an explicit (M, w) pair.
inline GramSummary summarize_gram(std::size_t node, const Matrix& m, const Vector& w,
                                  RankTolerance tol = {},
                                  Uncertainty uncertainty = Uncertainty::exact) {
  if (m.rows() != m.cols() || m.rows() == 0 || w.size() != m.rows())
    throw ParameterError("summarize_gram: dimension mismatch");
  if (node >= static_cast<std::size_t>(m.rows()))
    throw ParameterError("summarize_gram: node index out of range");
  if (!m.allFinite() || !w.allFinite()) throw ParameterError("summarize_gram: non-finite input");

  GramSummary g;
  g.node = node;
  g.gram = 0.5 * (m + m.transpose());
  g.moment = w;
  g.tolerance = tol;
  g.uncertainty = uncertainty;

  const Eigen::Index n = m.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.gram);
  const Vector& lambda = eig.eigenvalues();
  const Matrix& vecs = eig.eigenvectors();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(lambda(a)) > std::abs(lambda(b));
  });

  g.singular_values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k)
    g.singular_values(k) = std::abs(lambda(order[static_cast<std::size_t>(k)]));

  const double cut = tol.value() * g.singular_values(0);
  Eigen::Index rank = 0;
  if (g.singular_values(0) > 0.0)
    while (rank < n && g.singular_values(rank) > cut) ++rank;
  g.rank = static_cast<std::size_t>(rank);

  g.row_space.resize(n, rank);
  g.kernel.resize(n, n - rank);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector v = vecs.col(order[static_cast<std::size_t>(k)]);
    detail::canonical_sign(v);
    if (k < rank)
      g.row_space.col(k) = v;
    else
      g.kernel.col(k - rank) = v;
  }
  return g;
}

/// M_i and w_i by composite trapezoidal quadrature over the samples.
/// Missing derivatives are estimated by finite differences first.
inline GramSummary compute_gram(const Trajectory& traj, const RegressorFamily& reg,
                                std::size_t node, RankTolerance tol = {}) {
  if (reg.size() != traj.nodes()) throw ParameterError("compute_gram: dimension mismatch");
  reg.check_node(node);
  const Trajectory data = traj.has_derivatives() ? traj : estimate_derivatives(traj);
  const auto n = static_cast<Eigen::Index>(traj.nodes());
  const auto i = static_cast<Eigen::Index>(node);
  const std::size_t samples = data.samples();
  const Matrix& dx = *data.derivatives();

  Matrix m = Matrix::Zero(n, n);
  Vector w = Vector::Zero(n);
  for (std::size_t k = 0; k < samples; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    const Vector f = reg(node, data.state(k));
    if (f.size() != n || !f.allFinite())
      throw EvaluationError(k, "regressor of node " + std::to_string(node + 1) +
                                   " is not finite at sample " + std::to_string(k));
    const double weight = (k == 0 || k + 1 == samples) ? 0.5 * data.step() : data.step();
    m.selfadjointView<Eigen::Lower>().rankUpdate(f, weight);
    w += (weight * (dx(row, i) - data.inputs()(row, i))) * f;
  }
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return summarize_gram(node, m, w, tol, reg.uncertainty());
}

struct PeResult {
  bool holds = false;
  double margin = 0.0;  // sigma_min / sigma_max
  std::size_t kernel_dimension = 0;
};

/// Persistent excitation: ker M_i = {0} at the summary's rank tolerance.
inline PeResult pe_check(const GramSummary& g) {
  PeResult r;
  r.holds = g.rank == g.dimension();
  r.kernel_dimension = g.kernel_dimension();
  const double smax = g.sigma_max();
  r.margin = smax > 0.0 ? g.singular_values(g.singular_values.size() - 1) / smax : 0.0;
  return r;
}

/// Summary of (L M L^T, L w): the Gram data of the regressor L f.
inline GramSummary gram_under_map(const GramSummary& g, const Matrix& map) {
  if (map.rows() != map.cols() || map.rows() != g.gram.rows())
    throw ParameterError("gram_under_map: dimension mismatch");
  return summarize_gram(g.node, map * g.gram * map.transpose(), map * g.moment, g.tolerance,
                        g.uncertainty);
}

/// Summary of G^T M G, the Gram matrix of the transformed regressor G^T f.
/// Kernels correspond through span(Z_bar) = span(G^-1 Z).
inline GramSummary gram_under_transform(const GramSummary& g, const GroupElement& t) {
  if (t.node() != g.node || t.size() != g.dimension())
    throw ParameterError("gram_under_transform: element belongs to another node or size");
  return gram_under_map(g, t.matrix().transpose());
}

/// Relative data-fit residual ||M v - w|| / (1 + ||w||).
inline double fit_residual(const GramSummary& g, const Vector& v) {
  return (g.gram * v - g.moment).norm() / (1.0 + g.moment.norm());
}

}  // namespace netrecon
