#pragma once

// Dense two-phase simplex with Bland's rule.
//
//   minimize c.z  subject to  E z <= h,  F z = g,  z free.
//
// Free variables are split z = z+ - z-, every inequality gets a slack, every
// row gets an artificial. Phase 1 minimizes the artificial sum; phase 2 the
// original objective over the remaining columns. Bland's rule (lowest index
// entering, lowest basic index among ratio ties) rules out cycling, so the
// iteration cap only guards against numerical trouble.

#include <netrecon/errors.hpp>
#include <netrecon/model.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace netrecon {

enum class LpStatus { optimal, infeasible, unbounded };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "infeasible";
}

struct LpProblem {
  Vector objective;
  Matrix inequality;       // E, rows x vars (may have zero rows)
  Vector inequality_rhs;   // h
  Matrix equality;         // F, optional
  Vector equality_rhs;     // g

  std::size_t variables() const noexcept { return static_cast<std::size_t>(objective.size()); }
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = std::numeric_limits<double>::quiet_NaN();
  Vector minimizer;
};

namespace detail {

class SimplexTableau {
 public:
  static constexpr double kPivotEps = 1e-11;
  static constexpr double kCostEps = 1e-10;

  SimplexTableau(Matrix t, std::vector<Eigen::Index> basis)
      : t_(std::move(t)), basis_(std::move(basis)) {}

  Matrix& table() { return t_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double rhs(Eigen::Index r) const { return t_(r, cols()); }

  /// Loads cost vector `c` as the reduced-cost row.
  void set_cost(const Vector& c) {
    const Eigen::Index m = rows();
    t_.row(m).setZero();
    t_.row(m).head(cols()) = c.transpose();
    for (Eigen::Index r = 0; r < m; ++r) {
      const double cb = c(basis_[static_cast<std::size_t>(r)]);
      if (cb != 0.0) t_.row(m) -= cb * t_.row(r);
    }
  }

  /// Objective value of the current basic solution.
  double value() const { return -t_(rows(), cols()); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index k = 0; k < t_.rows(); ++k) {
      if (k == r) continue;
      const double f = t_(k, c);
      if (f != 0.0) t_.row(k) -= f * t_.row(r);
      t_(k, c) = 0.0;
    }
    t_(r, c) = 1.0;
    basis_[static_cast<std::size_t>(r)] = c;
  }

  /// Runs Bland-rule simplex over columns with `allowed[c]` true.
  /// Returns false when the objective is unbounded below.
  bool optimize(const std::vector<bool>& allowed) {
    const Eigen::Index m = rows();
    const Eigen::Index rhs_col = cols();
    const long cap = 100000;
    for (long iter = 0; iter < cap; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index c = 0; c < cols(); ++c) {
        if (allowed[static_cast<std::size_t>(c)] && t_(m, c) < -kCostEps) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index r = 0; r < m; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(r, rhs_col) / a;
        if (leave < 0 || ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 &&
             basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error("lp_solve: simplex iteration cap reached");
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

inline LpResult lp_solve(const LpProblem& p) {
  const auto d = static_cast<Eigen::Index>(p.variables());
  const Eigen::Index mu = p.inequality.rows();
  const Eigen::Index me = p.equality.rows();
  if ((mu > 0 && p.inequality.cols() != d) || p.inequality_rhs.size() != mu ||
      (me > 0 && p.equality.cols() != d) || p.equality_rhs.size() != me)
    throw ParameterError("lp_solve: dimension mismatch");
  if (!p.objective.allFinite() || !p.inequality.allFinite() || !p.inequality_rhs.allFinite() ||
      !p.equality.allFinite() || !p.equality_rhs.allFinite())
    throw ParameterError("lp_solve: non-finite coefficients");

  const Eigen::Index m = mu + me;
  const Eigen::Index n_struct = 2 * d + mu;   // z+, z-, slacks
  const Eigen::Index n_cols = n_struct + m;   // + artificials
  Matrix t = Matrix::Zero(m + 1, n_cols + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) {
    const bool ineq = r < mu;
    const auto src = ineq ? p.inequality.row(r) : p.equality.row(r - mu);
    double rhs = ineq ? p.inequality_rhs(r) : p.equality_rhs(r - mu);
    t.row(r).segment(0, d) = src;
    t.row(r).segment(d, d) = -src;
    if (ineq) t(r, 2 * d + r) = 1.0;
    if (rhs < 0.0) {
      t.row(r).head(n_struct) *= -1.0;
      rhs = -rhs;
    }
    t(r, n_cols) = rhs;
    t(r, n_struct + r) = 1.0;
    basis[static_cast<std::size_t>(r)] = n_struct + r;
  }
  detail::SimplexTableau tab(std::move(t), std::move(basis));

  double rhs_scale = 1.0;
  for (Eigen::Index r = 0; r < m; ++r) rhs_scale = std::max(rhs_scale, std::abs(tab.rhs(r)));

  LpResult result;
  if (m > 0) {
    Vector phase1 = Vector::Zero(n_cols);
    phase1.tail(m).setOnes();
    tab.set_cost(phase1);
    tab.optimize(std::vector<bool>(static_cast<std::size_t>(n_cols), true));
    if (tab.value() > 1e-9 * rhs_scale) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Eigen::Index r = 0; r < m; ++r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < n_struct) continue;
      for (Eigen::Index c = 0; c < n_struct; ++c) {
        if (std::abs(tab.table()(r, c)) > 1e-9) {
          tab.pivot(r, c);
          break;
        }
      }
    }
  }

  Vector cost = Vector::Zero(n_cols);
  cost.segment(0, d) = p.objective;
  cost.segment(d, d) = -p.objective;
  tab.set_cost(cost);
  std::vector<bool> allowed(static_cast<std::size_t>(n_cols), false);
  for (Eigen::Index c = 0; c < n_struct; ++c) allowed[static_cast<std::size_t>(c)] = true;
  if (!tab.optimize(allowed)) {
    result.status = LpStatus::unbounded;
    return result;
  }

  Vector y = Vector::Zero(n_cols);
  for (Eigen::Index r = 0; r < m; ++r) y(tab.basis()[static_cast<std::size_t>(r)]) = tab.rhs(r);
  result.status = LpStatus::optimal;
  result.minimizer = y.segment(0, d) - y.segment(d, d);
  result.value = p.objective.dot(result.minimizer);
  return result;
}

}  // namespace netrecon
