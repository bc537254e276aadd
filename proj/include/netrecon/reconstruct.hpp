#pragma once

// Reconstruction with certificates. The data-consistent interconnection
// vectors of node i form the solution fiber {v : M_i v = w_i} = v* + ker M_i.
// Intersecting that fiber with every piece of the prior yields the exact set
// of property values compatible with the data.

#include <netrecon/errors.hpp>
#include <netrecon/geometry.hpp>
#include <netrecon/gram.hpp>
#include <netrecon/group.hpp>
#include <netrecon/model.hpp>
#include <netrecon/property.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace netrecon {

inline constexpr double kDefaultConsistencyTol = 1e-6;

struct ReconstructOptions {
  double zero_tol = kDefaultZeroTol;  // absolute threshold for property labels
  double consistency_tol = kDefaultConsistencyTol;
  std::size_t piece_cap = kDefaultPieceCap;
};

struct SolutionFiber {
  Fiber fiber;
  double residual = 0.0;  // ||M v* - w|| / (1 + ||w||)
};

namespace detail {

inline Vector minimum_norm_solution(const GramSummary& g) {
  const Matrix& b = g.row_space;
  if (b.cols() == 0) return Vector::Zero(g.moment.size());
  const Vector coeff = b.transpose() * g.moment;
  const Vector eig = (b.transpose() * g.gram * b).diagonal();
  return b * coeff.cwiseQuotient(eig);
}

}  // namespace detail

/// Minimum-norm least-squares base point v* (only singular values above
/// tau * sigma_max are inverted) and the kernel as fiber directions.
/// Throws DataInconsistent when the residual exceeds `consistency_tol`.
inline SolutionFiber solution_fiber(const GramSummary& g,
                                    double consistency_tol = kDefaultConsistencyTol) {
  Vector base = detail::minimum_norm_solution(g);
  const double residual = fit_residual(g, base);
  if (residual > consistency_tol)
    throw DataInconsistent(residual, "node " + std::to_string(g.node + 1) +
                                         ": data cannot be explained by the model class "
                                         "(relative residual " + std::to_string(residual) + ")");
  return SolutionFiber{Fiber(std::move(base), g.kernel), residual};
}

enum class VerdictStatus { unique, ambiguous, inconsistent };

inline std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::unique: return "unique";
    case VerdictStatus::ambiguous: return "ambiguous";
    case VerdictStatus::inconsistent: return "inconsistent";
  }
  return "inconsistent";
}

struct Verdict {
  std::size_t node = 0;
  PropertyKind property = PropertyKind::identity;
  VerdictStatus status = VerdictStatus::inconsistent;
  std::optional<Vector> value;
  std::vector<Vector> witnesses;        // feasible vectors, one per distinct value
  std::vector<Vector> witness_values;   // property value of each witness
  double residual = 0.0;
  std::size_t pieces_checked = 0;
};

namespace detail {

// Candidate points on v* + ker M that between them realise every property
// change a kernel direction can cause: far along +-z (takes the sign of z on
// its support) and the points where z cancels one coordinate of v*.
inline std::vector<Vector> unconstrained_candidates(const Vector& base, const Matrix& kernel,
                                                    std::size_t node) {
  std::vector<Vector> out{base};
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    const Vector z = kernel.col(c);
    const OrbitLabel lab = orbit_label(z, node);
    std::vector<Eigen::Index> supp;
    for (std::size_t j : lab.support) supp.push_back(static_cast<Eigen::Index>(j));
    if (lab.self || !lab.support.empty()) supp.push_back(static_cast<Eigen::Index>(node));
    double t = 1.0;
    for (Eigen::Index j : supp)
      if (std::abs(z(j)) > 1e-12) t = std::max(t, 2.0 * std::abs(base(j)) / std::abs(z(j)) + 1.0);
    out.push_back(base + t * z);
    out.push_back(base - t * z);
    for (Eigen::Index j : supp)
      if (std::abs(z(j)) > 1e-12 && base(j) != 0.0) {
        Vector p = base - (base(j) / z(j)) * z;
        p(j) = 0.0;
        out.push_back(std::move(p));
      }
  }
  return out;
}

inline void add_candidate(Verdict& v, const Vector& point, const Vector& label) {
  for (const auto& seen : v.witness_values)
    if (seen == label) return;
  v.witnesses.push_back(point);
  v.witness_values.push_back(label);
}

}  // namespace detail

/// Decides the property value of node g.node: unique when exactly one value
/// is compatible with data and prior, ambiguous (with one witness per value)
/// when several are, inconsistent when none is or the data misfits.
inline Verdict reconstruct_property(const GramSummary& g, const PriorSet& prior,
                                    PropertyKind kind, const ReconstructOptions& opt = {}) {
  if (g.uncertainty != Uncertainty::exact)
    throw PreconditionError("reconstruct_property requires exactly known coupling functions");
  if (prior.dimension() != g.dimension())
    throw ParameterError("reconstruct_property: prior and Gram dimensions differ");
  if (prior.pieces().size() > opt.piece_cap)
    throw ScaleError("reconstruct_property: " + std::to_string(prior.pieces().size()) +
                     " prior pieces exceed the cap; restrict the prior");

  Verdict v;
  v.node = g.node;
  v.property = kind;
  const Vector base = detail::minimum_norm_solution(g);
  v.residual = fit_residual(g, base);
  if (v.residual > opt.consistency_tol) return v;

  const Fiber fiber(base, g.kernel);
  const double tol = opt.consistency_tol * (1.0 + base.cwiseAbs().maxCoeff());
  auto label_of = [&](const Vector& p) { return row_property(p, g.node, kind, opt.zero_tol); };

  switch (prior.kind()) {
    case PriorKind::unconstrained:
      v.pieces_checked = 1;
      for (const Vector& p : detail::unconstrained_candidates(base, g.kernel, g.node))
        detail::add_candidate(v, p, label_of(p));
      break;
    case PriorKind::discrete:
      for (const auto& piece : prior.pieces()) {
        ++v.pieces_checked;
        if (fiber_intersects(piece.point(), fiber, tol))
          detail::add_candidate(v, piece.point(), label_of(piece.point()));
      }
      break;
    case PriorKind::box_union:
      for (const auto& piece : prior.pieces()) {
        ++v.pieces_checked;
        const auto hit = fiber_intersects(piece.box(), fiber, tol);
        if (!hit) continue;
        if (kind == PropertyKind::identity) {
          if (auto pair = fiber_box_extent(piece.box(), fiber, tol)) {
            detail::add_candidate(v, pair->first, pair->first);
            detail::add_candidate(v, pair->second, pair->second);
          } else {
            detail::add_candidate(v, *hit, *hit);
          }
        } else {
          detail::add_candidate(v, *hit, label_from_sign(piece.sign_label, g.node, kind));
        }
      }
      break;
  }

  if (v.witness_values.empty()) {
    v.status = VerdictStatus::inconsistent;
  } else if (v.witness_values.size() == 1) {
    v.status = VerdictStatus::unique;
    v.value = v.witness_values.front();
  } else {
    v.status = VerdictStatus::ambiguous;
  }
  return v;
}

enum class AdjacencyState { absent, present, unknown };

inline std::string to_string(AdjacencyState s) {
  switch (s) {
    case AdjacencyState::absent: return "0";
    case AdjacencyState::present: return "1";
    case AdjacencyState::unknown: return "unknown";
  }
  return "unknown";
}

struct AdjacencyVerdict {
  std::size_t node = 0;
  Containment containment = Containment::contained_in_low_dim;
  std::vector<AdjacencyState> coordinates;  // entry `node` (self-loop) is always unknown
  // Orbit invariance rules these out whenever the couplings are uncertain.
  bool weights_reconstructable = false;
  bool sign_reconstructable = false;
  double residual = 0.0;
};

/// Adjacency of node g.node when the couplings are only known up to the
/// linear group. Coordinates outside the kernel support are read off v*;
/// the rest, and the self-loop, stay unknown. `zero_tol` is relative to
/// ||v*||_inf.
inline AdjacencyVerdict reconstruct_adjacency_under_uncertainty(
    const GramSummary& g, double zero_tol = kDefaultZeroTol) {
  if (g.uncertainty != Uncertainty::linear_group)
    throw PreconditionError("adjacency-under-uncertainty requires linear-group uncertainty");
  AdjacencyVerdict out;
  out.node = g.node;
  const ContainmentResult c = kernel_orbit_containment(g, zero_tol);
  out.containment = c.kind;
  const Vector base = detail::minimum_norm_solution(g);
  out.residual = fit_residual(g, base);
  const double scale = base.size() ? base.cwiseAbs().maxCoeff() : 0.0;
  const double thr = zero_tol * scale;
  out.coordinates.assign(g.dimension(), AdjacencyState::unknown);
  for (std::size_t j = 0; j < g.dimension(); ++j) {
    if (!c.identifiable[j]) continue;
    const double vj = base(static_cast<Eigen::Index>(j));
    out.coordinates[j] = (scale > 0.0 && std::abs(vj) > thr) ? AdjacencyState::present
                                                             : AdjacencyState::absent;
  }
  return out;
}

struct NetworkReconstruction {
  std::vector<Verdict> verdicts;
  /// Row-wise assembly of the property when every node is unique.
  std::optional<Matrix> assembled;

  bool all_unique() const {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](const Verdict& v) { return v.status == VerdictStatus::unique; });
  }
};

inline NetworkReconstruction reconstruct_network(const std::vector<GramSummary>& grams,
                                                 const PriorSet& prior, PropertyKind kind,
                                                 const ReconstructOptions& opt = {}) {
  NetworkReconstruction out;
  for (const auto& g : grams) out.verdicts.push_back(reconstruct_property(g, prior, kind, opt));
  if (!out.verdicts.empty() && out.all_unique()) {
    const auto n = static_cast<Eigen::Index>(out.verdicts.size());
    const Eigen::Index cols = out.verdicts.front().value->size();
    Matrix m(n, cols);
    for (Eigen::Index i = 0; i < n; ++i)
      m.row(i) = out.verdicts[static_cast<std::size_t>(i)].value->transpose();
    out.assembled = std::move(m);
  }
  return out;
}

/// Connectivity, adjacency and in-degree derived from a sign pattern.
struct SignDerived {
  Matrix connectivity;
  Matrix adjacency;
  Vector degree;
};

inline SignDerived derive_from_sign(const Matrix& sign) {
  SignDerived d;
  d.connectivity = sign.cwiseAbs();
  d.adjacency = d.connectivity;
  d.adjacency.diagonal().setZero();
  d.degree = d.connectivity.rowwise().sum();
  return d;
}

}  // namespace netrecon
