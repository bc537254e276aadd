#pragma once

// Properties of the interaction matrix: identity, sign pattern S,
// connectivity C = |S|, adjacency K = C with the diagonal masked, and the
// in-degree sequence d_i = sum_j c_ij.

#include <netrecon/errors.hpp>
#include <netrecon/model.hpp>

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>

namespace netrecon {

enum class PropertyKind { identity, sign, connectivity, adjacency, degree };

inline std::string to_string(PropertyKind k) {
  switch (k) {
    case PropertyKind::identity: return "identity";
    case PropertyKind::sign: return "sign";
    case PropertyKind::connectivity: return "connectivity";
    case PropertyKind::adjacency: return "adjacency";
    case PropertyKind::degree: return "degree";
  }
  return "identity";
}

inline PropertyKind parse_property_kind(std::string_view s) {
  if (s == "identity") return PropertyKind::identity;
  if (s == "sign") return PropertyKind::sign;
  if (s == "connectivity") return PropertyKind::connectivity;
  if (s == "adjacency") return PropertyKind::adjacency;
  if (s == "degree") return PropertyKind::degree;
  throw ParameterError("unknown property '" + std::string(s) + "'");
}

/// Entrywise sign with |v_j| <= zero_tol mapped to 0.
inline Vector sign_vector(const Vector& v, double zero_tol) {
  Vector s(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j)
    s(j) = std::abs(v(j)) <= zero_tol ? 0.0 : (v(j) > 0.0 ? 1.0 : -1.0);
  return s;
}

/// Property value of an interconnection vector given its sign vector.
/// Identity is not a function of the sign and is rejected here.
inline Vector label_from_sign(const Vector& sign, std::size_t node, PropertyKind kind) {
  switch (kind) {
    case PropertyKind::sign: return sign;
    case PropertyKind::connectivity: return sign.cwiseAbs();
    case PropertyKind::adjacency: {
      Vector k = sign.cwiseAbs();
      k(static_cast<Eigen::Index>(node)) = 0.0;
      return k;
    }
    case PropertyKind::degree: return Vector::Constant(1, sign.cwiseAbs().sum());
    case PropertyKind::identity: break;
  }
  throw ParameterError("identity is not determined by a sign pattern");
}

/// Property value of the interconnection vector v of `node`.
inline Vector row_property(const Vector& v, std::size_t node, PropertyKind kind,
                           double zero_tol) {
  if (zero_tol < 0.0) throw ParameterError("zero tolerance must be >= 0");
  if (kind == PropertyKind::identity) return v;
  return label_from_sign(sign_vector(v, zero_tol), node, kind);
}

/// Whole-matrix property. Degree comes back as an n x 1 column.
inline Matrix property_of(const InteractionMatrix& a, PropertyKind kind, double zero_tol) {
  if (zero_tol < 0.0) throw ParameterError("zero tolerance must be >= 0");
  const auto n = static_cast<Eigen::Index>(a.size());
  if (kind == PropertyKind::identity) return a.matrix();
  Matrix out(n, kind == PropertyKind::degree ? 1 : n);
  for (Eigen::Index i = 0; i < n; ++i)
    out.row(i) = row_property(a.row(static_cast<std::size_t>(i)), static_cast<std::size_t>(i),
                              kind, zero_tol)
                     .transpose();
  return out;
}

}  // namespace netrecon
