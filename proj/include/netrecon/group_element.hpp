#pragma once

#include <netrecon/errors.hpp>
#include <netrecon/model.hpp>

#include <cmath>
#include <cstddef>
#include <utility>

namespace netrecon {

/// Element of the linear group of coupling deformations for node i: an n x n
/// matrix with nonzero entries only on the diagonal and in row i.
///
///   (G v)_j = d_j v_j                          for j != i
///   (G v)_i = d_i v_i + sum_{k != i} g_ik v_k
///
/// det G = prod d_j, so the element is nonsingular iff every d_j != 0.
/// The regressor transform it induces is f -> G^T f, which keeps component j
/// a function of (x_i, x_j) only.
class GroupElement {
 public:
  /// `row` holds g_ik for k != i; its i-th entry is ignored.
  GroupElement(std::size_t node, Vector diagonal, Vector row)
      : node_(node), diag_(std::move(diagonal)), row_(std::move(row)) {
    if (diag_.size() == 0 || row_.size() != diag_.size())
      throw ParameterError("group element: diagonal and row lengths differ");
    if (node_ >= static_cast<std::size_t>(diag_.size()))
      throw ParameterError("group element: node index out of range");
    if (!diag_.allFinite() || !row_.allFinite())
      throw ParameterError("group element: non-finite entries");
    for (Eigen::Index j = 0; j < diag_.size(); ++j)
      if (diag_(j) == 0.0) throw ParameterError("group element: zero diagonal entry (singular)");
    row_(static_cast<Eigen::Index>(node_)) = 0.0;
  }

  static GroupElement identity(std::size_t n, std::size_t node) {
    const auto m = static_cast<Eigen::Index>(n);
    return GroupElement(node, Vector::Ones(m), Vector::Zero(m));
  }

  /// Reads the structure off a dense matrix; throws if it has entries
  /// outside the diagonal and row `node`, or is singular.
  static GroupElement from_matrix(std::size_t node, const Matrix& g) {
    if (g.rows() != g.cols()) throw ParameterError("group element: matrix not square");
    const auto i = static_cast<Eigen::Index>(node);
    for (Eigen::Index r = 0; r < g.rows(); ++r)
      for (Eigen::Index c = 0; c < g.cols(); ++c)
        if (r != c && r != i && g(r, c) != 0.0)
          throw ParameterError("group element: entry outside diagonal and row i");
    Vector row = g.row(i).transpose();
    return GroupElement(node, g.diagonal(), std::move(row));
  }

  std::size_t node() const noexcept { return node_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(diag_.size()); }
  const Vector& diagonal() const noexcept { return diag_; }
  /// Off-diagonal entries of row i (entry i is zero).
  const Vector& row() const noexcept { return row_; }

  Matrix matrix() const {
    Matrix g = diag_.asDiagonal();
    const auto i = static_cast<Eigen::Index>(node_);
    for (Eigen::Index k = 0; k < row_.size(); ++k)
      if (k != i) g(i, k) = row_(k);
    return g;
  }

  Vector apply(const Vector& v) const {
    if (v.size() != diag_.size()) throw ParameterError("group element: dimension mismatch");
    Vector out = diag_.cwiseProduct(v);
    out(static_cast<Eigen::Index>(node_)) += row_.dot(v);
    return out;
  }

  GroupElement inverse() const {
    const auto i = static_cast<Eigen::Index>(node_);
    const Vector inv_diag = diag_.cwiseInverse();
    Vector inv_row(row_.size());
    for (Eigen::Index k = 0; k < row_.size(); ++k)
      inv_row(k) = (k == i) ? 0.0 : -row_(k) / (diag_(k) * diag_(i));
    return GroupElement(node_, inv_diag, std::move(inv_row));
  }

  /// (this * other) v = this(other v).
  GroupElement operator*(const GroupElement& other) const {
    if (other.node_ != node_ || other.size() != size())
      throw ParameterError("group elements belong to different groups");
    const auto i = static_cast<Eigen::Index>(node_);
    const Vector diag = diag_.cwiseProduct(other.diag_);
    Vector row(row_.size());
    for (Eigen::Index k = 0; k < row_.size(); ++k)
      row(k) = (k == i) ? 0.0 : diag_(i) * other.row_(k) + row_(k) * other.diag_(k);
    return GroupElement(node_, diag, std::move(row));
  }

 private:
  std::size_t node_;
  Vector diag_;
  Vector row_;
};

}  // namespace netrecon
