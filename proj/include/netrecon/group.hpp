#pragma once

// Orbits of the linear deformation group and how ker M_i sits among them.
//
// The orbit of v under the group of node i is determined by the off-diagonal
// support S = {j != i : v_j != 0}: scaling by d_j moves v_j freely inside
// R\{0}, and when S is non-empty the row-i entries move v_i anywhere. With
// S empty the orbit is {0} or the punctured axis of coordinate i.

#include <netrecon/gram.hpp>
#include <netrecon/group_element.hpp>
#include <netrecon/model.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace netrecon {

/// Default support-detection threshold, relative to ||v||_inf.
inline constexpr double kDefaultZeroTol = 1e-9;

struct OrbitLabel {
  std::vector<std::size_t> support;  // off-diagonal support, ascending
  bool self = false;                 // v_i != 0 with empty support
  std::size_t dimension = 0;

  bool operator==(const OrbitLabel&) const = default;
};

namespace detail {

inline double zero_threshold(const Vector& v, double zero_tol) {
  return zero_tol * v.cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Entries with |v_j| <= zero_tol * ||v||_inf count as zero.
inline OrbitLabel orbit_label(const Vector& v, std::size_t node,
                              double zero_tol = kDefaultZeroTol) {
  if (zero_tol < 0.0) throw ParameterError("orbit_label: zero tolerance must be >= 0");
  if (node >= static_cast<std::size_t>(v.size()))
    throw ParameterError("orbit_label: node index out of range");
  OrbitLabel label;
  if (v.size() == 0 || v.cwiseAbs().maxCoeff() == 0.0) return label;
  const double thr = detail::zero_threshold(v, zero_tol);
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (static_cast<std::size_t>(j) != node && std::abs(v(j)) > thr)
      label.support.push_back(static_cast<std::size_t>(j));
  if (label.support.empty()) {
    label.self = std::abs(v(static_cast<Eigen::Index>(node))) > thr;
    label.dimension = label.self ? 1 : 0;
  } else {
    label.dimension = label.support.size() + 1;
  }
  return label;
}

/// Returns G with G v2 = v1 when both vectors share an orbit, nullopt otherwise.
inline std::optional<GroupElement> same_orbit(const Vector& v1, const Vector& v2,
                                              std::size_t node,
                                              double zero_tol = kDefaultZeroTol) {
  if (v1.size() != v2.size()) throw ParameterError("same_orbit: dimension mismatch");
  const OrbitLabel l1 = orbit_label(v1, node, zero_tol);
  if (!(l1 == orbit_label(v2, node, zero_tol))) return std::nullopt;

  const Eigen::Index n = v1.size();
  const auto i = static_cast<Eigen::Index>(node);
  Vector diag = Vector::Ones(n);
  Vector row = Vector::Zero(n);
  for (std::size_t js : l1.support) {
    const auto j = static_cast<Eigen::Index>(js);
    diag(j) = v1(j) / v2(j);
  }
  if (l1.support.empty()) {
    if (l1.self) diag(i) = v1(i) / v2(i);
  } else {
    // Row i absorbs the mismatch in coordinate i through the first support entry.
    const auto k = static_cast<Eigen::Index>(l1.support.front());
    row(k) = (v1(i) - v2(i)) / v2(k);
  }
  return GroupElement(node, std::move(diag), std::move(row));
}

/// An element changing the sign pattern of v: flips the first off-diagonal
/// support coordinate. nullopt when the support is empty.
inline std::optional<GroupElement> sign_flipping_element(const Vector& v, std::size_t node,
                                                         double zero_tol = kDefaultZeroTol) {
  const OrbitLabel l = orbit_label(v, node, zero_tol);
  if (l.support.empty()) return std::nullopt;
  Vector diag = Vector::Ones(v.size());
  diag(static_cast<Eigen::Index>(l.support.front())) = -1.0;
  return GroupElement(node, std::move(diag), Vector::Zero(v.size()));
}

enum class Containment { contained_in_low_dim, reaches_full_dim };

inline std::string to_string(Containment c) {
  return c == Containment::contained_in_low_dim ? "contained-in-low-dim" : "reaches-full-dim";
}

struct ContainmentResult {
  Containment kind = Containment::contained_in_low_dim;
  std::vector<std::size_t> kernel_support;   // union of off-diagonal supports of Z
  std::vector<bool> identifiable;            // per coordinate; node's own entry false
  double zero_tol = kDefaultZeroTol;

  std::vector<std::size_t> identifiable_coordinates() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < identifiable.size(); ++j)
      if (identifiable[j]) out.push_back(j);
    return out;
  }
};

/// Whether a generic kernel vector lands in the n-dimensional orbit. The
/// generic support is the union of the basis supports. Kernel columns are
/// unit vectors, so zero_tol acts as an absolute threshold here.
inline ContainmentResult kernel_orbit_containment(const GramSummary& g,
                                                  double zero_tol = kDefaultZeroTol) {
  const std::size_t n = g.dimension();
  ContainmentResult r;
  r.zero_tol = zero_tol;
  std::vector<bool> in_support(n, false);
  for (Eigen::Index c = 0; c < g.kernel.cols(); ++c) {
    const Vector z = g.kernel.col(c);
    for (std::size_t j : orbit_label(z, g.node, zero_tol).support) in_support[j] = true;
  }
  std::size_t count = 0;
  r.identifiable.assign(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == g.node) continue;
    if (in_support[j]) {
      r.kernel_support.push_back(j);
      ++count;
    } else {
      r.identifiable[j] = true;
    }
  }
  if (g.kernel.cols() > 0 && count + 1 == n) {
    r.kind = Containment::reaches_full_dim;
    r.identifiable.assign(n, false);
  }
  return r;
}

enum class GenericVerdict { orbits_only, all_indistinguishable, structurally_unstable };

inline std::string to_string(GenericVerdict v) {
  switch (v) {
    case GenericVerdict::orbits_only: return "orbits-only";
    case GenericVerdict::all_indistinguishable: return "all-indistinguishable";
    case GenericVerdict::structurally_unstable: return "structurally-unstable";
  }
  return "structurally-unstable";
}

/// PE: indistinguishability comes from the orbits alone. A nontrivial
/// kernel generically glues everything together; a nontrivial kernel that
/// still sits in low-dimensional orbits is the non-generic borderline case.
inline GenericVerdict generic_verdict(const GramSummary& g, double zero_tol = kDefaultZeroTol) {
  if (g.rank == g.dimension()) return GenericVerdict::orbits_only;
  return kernel_orbit_containment(g, zero_tol).kind == Containment::reaches_full_dim
             ? GenericVerdict::all_indistinguishable
             : GenericVerdict::structurally_unstable;
}

}  // namespace netrecon
