#pragma once

// Prior sets, fibers (affine subspaces parallel to ker M_i) and the two
// geometric decisions built on the simplex core: does a fiber separate two
// boxes, and does a fiber meet a box or a point.

#include <netrecon/errors.hpp>
#include <netrecon/gram.hpp>
#include <netrecon/group.hpp>
#include <netrecon/lp.hpp>
#include <netrecon/model.hpp>
#include <netrecon/property.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace netrecon {

/// Product of closed intervals [lower_j, upper_j].
class Box {
 public:
  Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size() || lower_.size() == 0)
      throw ParameterError("box: bound vectors differ in length");
    if (!lower_.allFinite() || !upper_.allFinite())
      throw ParameterError("box: bounds must be finite");
    for (Eigen::Index j = 0; j < lower_.size(); ++j)
      if (lower_(j) > upper_(j)) throw ParameterError("box: lower bound exceeds upper bound");
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(lower_.size()); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  Vector center() const { return 0.5 * (lower_ + upper_); }
  Vector radius() const { return 0.5 * (upper_ - lower_); }

  bool contains(const Vector& v, double tol = 0.0) const {
    return ((v - lower_).array() >= -tol).all() && ((upper_ - v).array() >= -tol).all();
  }

  /// max over the box of w.v
  double support(const Vector& w) const {
    return w.dot(center()) + radius().dot(w.cwiseAbs());
  }

 private:
  Vector lower_;
  Vector upper_;
};

enum class PriorKind { discrete, box_union, unconstrained };

inline std::string to_string(PriorKind k) {
  switch (k) {
    case PriorKind::discrete: return "discrete";
    case PriorKind::box_union: return "box-union";
    case PriorKind::unconstrained: return "unconstrained";
  }
  return "unconstrained";
}

/// A piece of the prior: a box carrying its sign label, or a single point.
struct PriorPiece {
  std::variant<Box, Vector> region;
  Vector sign_label;  // boxes only; empty for points

  bool is_box() const noexcept { return std::holds_alternative<Box>(region); }
  const Box& box() const { return std::get<Box>(region); }
  const Vector& point() const { return std::get<Vector>(region); }
};

/// The set V of admissible interconnection vectors, split into labelled
/// pieces. Unconstrained priors have no pieces.
class PriorSet {
 public:
  static PriorSet unconstrained(std::size_t n) {
    if (n == 0) throw ParameterError("prior: dimension must be positive");
    return PriorSet(PriorKind::unconstrained, n, {});
  }

  static PriorSet discrete(const std::vector<Vector>& points) {
    if (points.empty()) throw ParameterError("discrete prior needs at least one point");
    const auto n = static_cast<std::size_t>(points.front().size());
    std::vector<PriorPiece> pieces;
    for (const Vector& p : points) {
      if (static_cast<std::size_t>(p.size()) != n || n == 0 || !p.allFinite())
        throw ParameterError("discrete prior: points must be finite and of equal length");
      for (const auto& q : pieces)
        if (q.point() == p) throw ParameterError("discrete prior: duplicate point");
      pieces.push_back(PriorPiece{p, Vector()});
    }
    return PriorSet(PriorKind::discrete, n, std::move(pieces));
  }

  /// Boxes with their sign labels; the boxes must be pairwise disjoint.
  /// The quadratic disjointness check can be skipped for boxes that are
  /// disjoint by construction.
  static PriorSet box_union(std::vector<std::pair<Box, Vector>> boxes,
                            bool check_disjoint = true) {
    if (boxes.empty()) throw ParameterError("box-union prior needs at least one box");
    const std::size_t n = boxes.front().first.size();
    std::vector<PriorPiece> pieces;
    for (auto& [box, label] : boxes) {
      if (box.size() != n || static_cast<std::size_t>(label.size()) != n)
        throw ParameterError("box-union prior: inconsistent dimensions");
      pieces.push_back(PriorPiece{std::move(box), std::move(label)});
    }
    for (std::size_t a = 0; check_disjoint && a < pieces.size(); ++a)
      for (std::size_t b = a + 1; b < pieces.size(); ++b) {
        const Box& p = pieces[a].box();
        const Box& q = pieces[b].box();
        const bool overlap = ((p.lower().array() <= q.upper().array()) &&
                              (q.lower().array() <= p.upper().array())).all();
        if (overlap) throw ParameterError("box-union prior: pieces are not disjoint");
      }
    return PriorSet(PriorKind::box_union, n, std::move(pieces));
  }

  PriorKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return n_; }
  const std::vector<PriorPiece>& pieces() const noexcept { return pieces_; }

  bool contains(const Vector& v, double tol) const {
    switch (kind_) {
      case PriorKind::unconstrained: return true;
      case PriorKind::discrete:
        for (const auto& p : pieces_)
          if ((p.point() - v).norm() <= tol) return true;
        return false;
      case PriorKind::box_union:
        for (const auto& p : pieces_)
          if (p.box().contains(v, tol)) return true;
        return false;
    }
    return false;
  }

 private:
  PriorSet(PriorKind k, std::size_t n, std::vector<PriorPiece> pieces)
      : kind_(k), n_(n), pieces_(std::move(pieces)) {}

  PriorKind kind_;
  std::size_t n_;
  std::vector<PriorPiece> pieces_;
};

inline constexpr std::size_t kDefaultPieceCap = 100000;

/// The 3^n boxes of a_ij in [-a_max,-a_min] u [-eps,eps] u [a_min,a_max],
/// labelled with their sign vectors. Enumeration order is lexicographic in
/// the label with coordinate 1 most significant and -1 < 0 < +1.
inline PriorSet sign_boxes(std::size_t n, double eps, double a_min, double a_max,
                           std::size_t piece_cap = kDefaultPieceCap) {
  if (n == 0) throw ParameterError("sign_boxes: dimension must be positive");
  if (!(0.0 <= eps && eps < a_min && a_min < a_max) || !std::isfinite(a_max))
    throw ParameterError("sign_boxes: need 0 <= epsilon < a_min < a_max");
  std::size_t count = 1;
  for (std::size_t k = 0; k < n; ++k) {
    count *= 3;
    if (count > piece_cap)
      throw ScaleError("sign_boxes: 3^" + std::to_string(n) +
                       " pieces exceed the cap; restrict the prior");
  }
  const double lo[3] = {-a_max, -eps, a_min};
  const double hi[3] = {-a_min, eps, a_max};
  const auto m = static_cast<Eigen::Index>(n);
  std::vector<std::pair<Box, Vector>> boxes;
  boxes.reserve(count);
  std::vector<int> digit(n, 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rest = c;
    for (std::size_t k = n; k-- > 0;) {
      digit[k] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    Vector l(m), u(m), s(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const int dg = digit[static_cast<std::size_t>(j)];
      l(j) = lo[dg];
      u(j) = hi[dg];
      s(j) = dg - 1.0;
    }
    boxes.emplace_back(Box(l, u), s);
  }
  return PriorSet::box_union(std::move(boxes), false);
}

/// Affine subspace base + span(directions); directions are orthonormal.
struct Fiber {
  Vector base;
  Matrix directions;

  Fiber(Vector b, Matrix z) : base(std::move(b)), directions(std::move(z)) {
    if (directions.rows() != base.size())
      throw ParameterError("fiber: direction basis has wrong row count");
    if (directions.cols() > 0) {
      const Matrix gram = directions.transpose() * directions;
      if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-8)
        throw ParameterError("fiber: direction basis is not orthonormal");
    }
  }

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(directions.cols()); }
};

/// A point of fiber ∩ box, found by LP feasibility in the fiber coordinates
/// with bounds relaxed by `tol`.
inline std::optional<Vector> fiber_intersects(const Box& box, const Fiber& fiber,
                                              double tol = 1e-9) {
  if (box.size() != static_cast<std::size_t>(fiber.base.size()))
    throw ParameterError("fiber_intersects: dimension mismatch");
  const Matrix& z = fiber.directions;
  if (z.cols() == 0) {
    if (box.contains(fiber.base, tol)) return fiber.base;
    return std::nullopt;
  }
  const Eigen::Index n = z.rows();
  LpProblem lp;
  lp.objective = Vector::Zero(z.cols());
  lp.inequality.resize(2 * n, z.cols());
  lp.inequality_rhs.resize(2 * n);
  lp.inequality.topRows(n) = z;
  lp.inequality.bottomRows(n) = -z;
  lp.inequality_rhs.head(n) = (box.upper() - fiber.base).array() + tol;
  lp.inequality_rhs.tail(n) = (fiber.base - box.lower()).array() + tol;
  const LpResult res = lp_solve(lp);
  if (res.status != LpStatus::optimal) return std::nullopt;
  return Vector(fiber.base + z * res.minimizer);
}

/// A point lies on the fiber when its orthogonal projection residual is <= tol.
inline std::optional<Vector> fiber_intersects(const Vector& point, const Fiber& fiber,
                                              double tol = 1e-9) {
  if (point.size() != fiber.base.size()) throw ParameterError("fiber_intersects: dimension mismatch");
  const Vector diff = point - fiber.base;
  const Vector residual = diff - fiber.directions * (fiber.directions.transpose() * diff);
  if (residual.norm() <= tol) return point;
  return std::nullopt;
}

/// Two points of fiber ∩ box that are farther apart than `tol`, if the
/// intersection is more than a single point. Probes the extent of the
/// intersection along each fiber direction with a pair of LPs.
inline std::optional<std::pair<Vector, Vector>> fiber_box_extent(const Box& box,
                                                                 const Fiber& fiber,
                                                                 double tol = 1e-9) {
  const Matrix& z = fiber.directions;
  if (z.cols() == 0) return std::nullopt;
  const Eigen::Index n = z.rows();
  LpProblem lp;
  lp.inequality.resize(2 * n, z.cols());
  lp.inequality_rhs.resize(2 * n);
  lp.inequality.topRows(n) = z;
  lp.inequality.bottomRows(n) = -z;
  lp.inequality_rhs.head(n) = (box.upper() - fiber.base).array() + tol;
  lp.inequality_rhs.tail(n) = (fiber.base - box.lower()).array() + tol;
  for (Eigen::Index k = 0; k < z.cols(); ++k) {
    lp.objective = Vector::Unit(z.cols(), k);
    const LpResult lo = lp_solve(lp);
    if (lo.status != LpStatus::optimal) return std::nullopt;
    lp.objective = -Vector::Unit(z.cols(), k);
    const LpResult hi = lp_solve(lp);
    if (hi.status != LpStatus::optimal) return std::nullopt;
    // Relaxing each bound by tol widens a unit direction by up to 2 tol sqrt(n).
    if (hi.minimizer(k) - lo.minimizer(k) > 2.0 * tol * std::sqrt(double(n)) + 1e-12) {
      return std::make_pair(Vector(fiber.base + z * lo.minimizer),
                            Vector(fiber.base + z * hi.minimizer));
    }
  }
  return std::nullopt;
}

namespace detail {

// max over P1 of w.v minus min over P2 of w.v, for w = B alpha.
inline double separation_gap(const Box& p1, const Box& p2, const Vector& w) {
  return p1.support(w) + p2.support(-w);
}

// Is there a nonzero w in span(B) with gap(w) <= slack? The cone of such w
// is convex; if it is nontrivial, scaling to ||w||_inf = 1 makes some
// +-w_j reach 1, so 2n bounded LPs decide it.
inline std::optional<Vector> separating_cone_member(const Vector& c, const Vector& r,
                                                    const Matrix& b, double slack) {
  const Eigen::Index n = b.rows();
  const Eigen::Index k = b.cols();
  // variables: alpha (k), t (n)
  LpProblem lp;
  lp.inequality = Matrix::Zero(4 * n + 1, k + n);
  lp.inequality_rhs = Vector::Zero(4 * n + 1);
  lp.inequality.block(0, 0, n, k) = b;                       //  w - t <= 0
  lp.inequality.block(0, k, n, n) = -Matrix::Identity(n, n);
  lp.inequality.block(n, 0, n, k) = -b;                      // -w - t <= 0
  lp.inequality.block(n, k, n, n) = -Matrix::Identity(n, n);
  lp.inequality.block(2 * n, 0, n, k) = b;                   //  w <= 1
  lp.inequality_rhs.segment(2 * n, n).setOnes();
  lp.inequality.block(3 * n, 0, n, k) = -b;                  // -w <= 1
  lp.inequality_rhs.segment(3 * n, n).setOnes();
  lp.inequality.block(4 * n, 0, 1, k) = c.transpose() * b;   // gap <= slack
  lp.inequality.block(4 * n, k, 1, n) = r.transpose();
  lp.inequality_rhs(4 * n) = slack;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (double s : {1.0, -1.0}) {
      lp.objective = Vector::Zero(k + n);
      lp.objective.head(k) = -s * b.row(j).transpose();
      const LpResult res = lp_solve(lp);
      if (res.status == LpStatus::optimal && -res.value > 1e-7)
        return Vector(b * res.minimizer.head(k));
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Normal w of a fiber-parallel hyperplane with max_{P1} w.v <= min_{P2} w.v,
/// w restricted to the row space span(B). Solved as
///
///   min  sum_j (c_j w_j + r_j t_j)   s.t.  t_j >= +-w_j,  sum_j t_j = 1,
///
/// where (c, r) are the center and radius of P1 ⊕ (-P2). Separable iff the
/// optimum is <= 0 (non-strict). When some r_j vanish the LP can reach 0 at
/// w = 0; a zero optimum with a vanishing normal is settled by the cone
/// check instead.
inline std::optional<Vector> separate_by_fiber(const Box& p1, const Box& p2,
                                               const Matrix& row_basis) {
  if (p1.size() != p2.size() || static_cast<std::size_t>(row_basis.rows()) != p1.size())
    throw ParameterError("separate_by_fiber: dimension mismatch");
  const Eigen::Index n = row_basis.rows();
  const Eigen::Index k = row_basis.cols();
  if (k == 0) return std::nullopt;
  const Vector c = p1.center() - p2.center();
  const Vector r = p1.radius() + p2.radius();
  const double slack = 1e-12 * (1.0 + c.cwiseAbs().maxCoeff() + r.cwiseAbs().maxCoeff());

  LpProblem lp;
  lp.objective.resize(k + n);
  lp.objective.head(k) = row_basis.transpose() * c;
  lp.objective.tail(n) = r;
  lp.inequality = Matrix::Zero(2 * n, k + n);
  lp.inequality_rhs = Vector::Zero(2 * n);
  lp.inequality.block(0, 0, n, k) = row_basis;
  lp.inequality.block(0, k, n, n) = -Matrix::Identity(n, n);
  lp.inequality.block(n, 0, n, k) = -row_basis;
  lp.inequality.block(n, k, n, n) = -Matrix::Identity(n, n);
  lp.equality = Matrix::Zero(1, k + n);
  lp.equality.block(0, k, 1, n).setOnes();
  lp.equality_rhs = Vector::Ones(1);

  const LpResult res = lp_solve(lp);
  if (res.status != LpStatus::optimal || res.value > slack) return std::nullopt;
  const Vector w = row_basis * res.minimizer.head(k);
  if (w.lpNorm<1>() > 1e-6) return w;
  return detail::separating_cone_member(c, r, row_basis, slack);
}

struct DistinguishOptions {
  std::size_t pair_cap = kDefaultPieceCap;
  double zero_tol = kDefaultZeroTol;  // absolute, for property labels of points
  double fiber_tol = 1e-9;            // distinct-fiber test for points
};

struct Distinguishability {
  bool distinguishable = true;
  /// First non-separable pair in lexicographic piece order; (k, k) when one
  /// piece already holds two indistinguishable vectors of different value.
  std::optional<std::pair<std::size_t, std::size_t>> pieces;
  /// Indistinguishable vectors with different property values, when known.
  std::vector<Vector> witnesses;
  std::size_t pairs_checked = 0;
};

namespace detail {

// Two points of the box that differ by a nonzero kernel vector, if any.
inline std::optional<std::pair<Vector, Vector>> box_kernel_pair(const Box& box,
                                                                const Matrix& kernel) {
  const Eigen::Index n = kernel.rows();
  const Eigen::Index k = kernel.cols();
  if (k == 0) return std::nullopt;
  const Vector rad = box.radius();
  std::vector<Eigen::Index> fixed;
  for (Eigen::Index j = 0; j < n; ++j)
    if (rad(j) <= 0.0) fixed.push_back(j);
  Vector beta;
  if (fixed.empty()) {
    beta = Vector::Unit(k, 0);
  } else {
    Matrix zf(static_cast<Eigen::Index>(fixed.size()), k);
    for (std::size_t r = 0; r < fixed.size(); ++r) zf.row(static_cast<Eigen::Index>(r)) = kernel.row(fixed[r]);
    Eigen::JacobiSVD<Matrix> svd(zf, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > 1e-10) ++rank;
    if (rank == k) return std::nullopt;
    beta = svd.matrixV().col(k - 1);
  }
  Vector dir = kernel * beta;
  for (Eigen::Index j : fixed) dir(j) = 0.0;
  double t = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j)
    if (std::abs(dir(j)) > 1e-14) t = std::min(t, rad(j) / std::abs(dir(j)));
  if (!std::isfinite(t) || t <= 0.0) return std::nullopt;
  return std::make_pair(box.center(), Vector(box.center() + t * dir));
}

inline Vector piece_label(const PriorPiece& piece, std::size_t node, PropertyKind kind,
                          double zero_tol) {
  if (piece.is_box()) return label_from_sign(piece.sign_label, node, kind);
  return row_property(piece.point(), node, kind, zero_tol);
}

}  // namespace detail

/// Decides whether `kind` is reconstructable for node g.node when the
/// coupling functions are known exactly: every two pieces of the prior with
/// different property values must be separated by a fiber.
inline Distinguishability property_distinguishable(const PriorSet& prior, PropertyKind kind,
                                                   const GramSummary& g,
                                                   const DistinguishOptions& opt = {}) {
  if (g.uncertainty != Uncertainty::exact)
    throw PreconditionError("property_distinguishable requires exactly known coupling functions");
  if (prior.dimension() != g.dimension())
    throw ParameterError("property_distinguishable: prior and Gram dimensions differ");
  Distinguishability out;
  if (g.kernel.cols() == 0) return out;  // PE: every fiber is a single point
  const std::size_t node = g.node;

  if (prior.kind() == PriorKind::unconstrained) {
    // 0 and a kernel vector z share the fiber through the origin.
    for (Eigen::Index c = 0; c < g.kernel.cols(); ++c) {
      const Vector z = g.kernel.col(c);
      const Vector zero = Vector::Zero(z.size());
      if (kind == PropertyKind::adjacency && orbit_label(z, node).support.empty()) continue;
      out.distinguishable = false;
      out.pieces = std::make_pair(std::size_t{0}, std::size_t{0});
      out.witnesses = {zero, z};
      out.pairs_checked = 1;
      return out;
    }
    return out;
  }

  const auto& pieces = prior.pieces();
  const std::size_t m = pieces.size();
  if (m > 1 && (m - 1) > 2 * opt.pair_cap / m)
    throw ScaleError("property_distinguishable: " + std::to_string(m) +
                     " pieces exceed the pair cap; restrict the prior");

  const bool points = prior.kind() == PriorKind::discrete;
  if (kind == PropertyKind::identity && !points) {
    for (std::size_t a = 0; a < m; ++a) {
      if (auto pair = detail::box_kernel_pair(pieces[a].box(), g.kernel)) {
        out.distinguishable = false;
        out.pieces = std::make_pair(a, a);
        out.witnesses = {pair->first, pair->second};
        return out;
      }
    }
  }

  std::vector<Vector> labels;
  labels.reserve(m);
  for (const auto& p : pieces)
    labels.push_back(kind == PropertyKind::identity && !points
                         ? p.box().center()
                         : detail::piece_label(p, node, kind, opt.zero_tol));

  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (labels[a] == labels[b]) continue;
      ++out.pairs_checked;
      bool separated;
      if (points) {
        const Vector diff = pieces[a].point() - pieces[b].point();
        separated = (g.row_space.transpose() * diff).norm() > opt.fiber_tol * (1.0 + diff.norm());
      } else {
        separated = separate_by_fiber(pieces[a].box(), pieces[b].box(), g.row_space).has_value();
      }
      if (!separated) {
        out.distinguishable = false;
        out.pieces = std::make_pair(a, b);
        if (points) out.witnesses = {pieces[a].point(), pieces[b].point()};
        return out;
      }
    }
  }
  return out;
}

}  // namespace netrecon
