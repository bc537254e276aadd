#pragma once

// Networked dynamics  dx_i/dt = sum_j a_ij f_ij(x_i, x_j) + u_i(t),
// regressor evaluation, fixed-step RK4 simulation and GLV steady states.

#include <netrecon/errors.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace netrecon {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// |x_i| above this bound during integration is reported as blowup.
inline constexpr double kOverflowBound = 1e12;

/// Square matrix of edge weights; row i holds the incoming links of node i.
class InteractionMatrix {
 public:
  explicit InteractionMatrix(Matrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() == 0)
      throw ParameterError("interaction matrix must be square and non-empty");
    if (!a_.allFinite())
      throw ParameterError("interaction matrix has non-finite entries");
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  const Matrix& matrix() const noexcept { return a_; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  /// Interconnection vector of node i (the transpose of row i).
  Vector row(std::size_t i) const {
    return a_.row(static_cast<Eigen::Index>(i)).transpose();
  }

 private:
  Matrix a_;
};

enum class CouplingPreset { glv, linear, custom };

/// How well the coupling functions are known.
enum class Uncertainty { exact, linear_group };

inline std::string to_string(CouplingPreset p) {
  switch (p) {
    case CouplingPreset::glv: return "glv";
    case CouplingPreset::linear: return "linear";
    case CouplingPreset::custom: return "custom";
  }
  return "custom";
}

inline std::string to_string(Uncertainty u) {
  return u == Uncertainty::exact ? "exact" : "linear-group";
}

class RegressorFamily;
bool is_pairwise(const RegressorFamily& reg, int trials = 8, std::uint64_t seed = 0x5eed);

/// Per-node regressor vectors f_i(x) whose j-th component is f_ij(x_i, x_j).
///
/// Presets are pairwise by construction. Custom evaluators go through the
/// pairwise probe at registration and are rejected if any component j of
/// f_i reacts to a coordinate outside {i, j}. A node can additionally carry a
/// left-composed linear map (f_i -> L f_i); that is how group transforms and
/// deformations are represented, and it is the only way to obtain a
/// non-pairwise family.
class RegressorFamily {
 public:
  using Evaluator = std::function<Vector(std::size_t node, const Vector& x)>;
  using Coupling = std::function<double(std::size_t i, std::size_t j, double xi, double xj)>;

  static RegressorFamily glv(std::size_t n, Uncertainty u = Uncertainty::exact) {
    return RegressorFamily(n, CouplingPreset::glv, u,
                           [](std::size_t i, const Vector& x) -> Vector {
                             return x(static_cast<Eigen::Index>(i)) * x;
                           });
  }

  static RegressorFamily linear(std::size_t n, Uncertainty u = Uncertainty::exact) {
    return RegressorFamily(n, CouplingPreset::linear, u,
                           [](std::size_t, const Vector& x) -> Vector { return x; });
  }

  static RegressorFamily custom(std::size_t n, Evaluator eval,
                                Uncertainty u = Uncertainty::exact) {
    RegressorFamily reg(n, CouplingPreset::custom, u, std::move(eval));
    if (!is_pairwise(reg))
      throw ParameterError("custom regressor is not pairwise: component j of f_i "
                           "depends on a coordinate outside {x_i, x_j}");
    return reg;
  }

  /// Custom family from a scalar coupling f_ij(x_i, x_j).
  static RegressorFamily pairwise(std::size_t n, Coupling f,
                                  Uncertainty u = Uncertainty::exact) {
    auto eval = [f = std::move(f)](std::size_t i, const Vector& x) -> Vector {
      Vector out(x.size());
      const double xi = x(static_cast<Eigen::Index>(i));
      for (Eigen::Index j = 0; j < x.size(); ++j)
        out(j) = f(i, static_cast<std::size_t>(j), xi, x(j));
      return out;
    };
    return custom(n, std::move(eval), u);
  }

  std::size_t size() const noexcept { return n_; }
  CouplingPreset preset() const noexcept { return preset_; }
  Uncertainty uncertainty() const noexcept { return uncertainty_; }

  Vector operator()(std::size_t node, const Vector& x) const {
    check_node(node);
    Vector f = (*eval_)(node, x);
    if (const auto& map = maps_[node]) f = (*map) * f;
    return f;
  }

  /// Copy whose regressor for `node` is replaced by map * f_node.
  RegressorFamily left_composed(std::size_t node, const Matrix& map) const {
    check_node(node);
    if (map.rows() != static_cast<Eigen::Index>(n_) || map.cols() != map.rows())
      throw ParameterError("left-composed map must be n x n");
    RegressorFamily out = *this;
    auto& slot = out.maps_[node];
    slot = slot ? Matrix(map * (*slot)) : map;
    return out;
  }

  RegressorFamily with_uncertainty(Uncertainty u) const {
    RegressorFamily out = *this;
    out.uncertainty_ = u;
    return out;
  }

  /// The linear map currently composed onto `node`, identity if none.
  Matrix node_map(std::size_t node) const {
    check_node(node);
    return maps_[node] ? *maps_[node] : Matrix::Identity(static_cast<Eigen::Index>(n_),
                                                          static_cast<Eigen::Index>(n_));
  }

  void check_node(std::size_t node) const {
    if (node >= n_) throw ParameterError("node index out of range");
  }

 private:
  RegressorFamily(std::size_t n, CouplingPreset p, Uncertainty u, Evaluator eval)
      : n_(n), preset_(p), uncertainty_(u),
        eval_(std::make_shared<const Evaluator>(std::move(eval))), maps_(n) {
    if (n == 0) throw ParameterError("regressor family needs at least one node");
  }

  std::size_t n_;
  CouplingPreset preset_;
  Uncertainty uncertainty_;
  std::shared_ptr<const Evaluator> eval_;
  std::vector<std::optional<Matrix>> maps_;
};

/// Probe evaluation: perturbing x_k must leave component j of f_i unchanged
/// for every k outside {i, j}. Random states are drawn from N(0, 1).
inline bool is_pairwise(const RegressorFamily& reg, int trials, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(reg.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < trials; ++trial) {
    Vector x(n);
    for (Eigen::Index k = 0; k < n; ++k) x(k) = normal(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector base = reg(static_cast<std::size_t>(i), x);
      if (base.size() != n) return false;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == i) continue;
        Vector xp = x;
        xp(k) += 0.5 + std::abs(normal(rng));
        const Vector moved = reg(static_cast<std::size_t>(i), xp);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (j == i || j == k) continue;
          const double scale = 1.0 + std::abs(base(j));
          if (std::abs(moved(j) - base(j)) > 1e-12 * scale) return false;
        }
      }
    }
  }
  return true;
}

/// Growth rates r of the GLV model  dx_i/dt = r_i x_i + sum_j a_ij x_i x_j.
struct GlvParameters {
  Vector r;

  explicit GlvParameters(Vector rates) : r(std::move(rates)) {
    if (r.size() == 0 || !r.allFinite())
      throw ParameterError("growth rates must be a non-empty finite vector");
  }
  std::size_t size() const noexcept { return static_cast<std::size_t>(r.size()); }
};

/// Known input u(t, x). GLV growth terms r_i x_i are modelled as inputs, so
/// the signal may read the current state.
using InputSignal = std::function<Vector(double t, const Vector& x)>;

inline InputSignal zero_input(std::size_t n) {
  return [n](double, const Vector&) -> Vector {
    return Vector::Zero(static_cast<Eigen::Index>(n));
  };
}

inline InputSignal glv_input(const GlvParameters& p) {
  return [r = p.r](double, const Vector& x) -> Vector { return r.cwiseProduct(x); };
}

/// u_i(t) = amplitude_i * sin(frequency_i * t + phase_i).
inline InputSignal sinusoidal_input(Vector amplitude, Vector frequency, Vector phase) {
  if (amplitude.size() != frequency.size() || amplitude.size() != phase.size())
    throw ParameterError("sinusoid parameter vectors differ in length");
  return [=](double t, const Vector&) -> Vector {
    Vector u(amplitude.size());
    for (Eigen::Index k = 0; k < u.size(); ++k)
      u(k) = amplitude(k) * std::sin(frequency(k) * t + phase(k));
    return u;
  };
}

/// GLV growth with sinusoidally modulated rates:
/// u_i(t, x) = x_i (r_i + amplitude_i sin(frequency_i t + phase_i)).
/// Unlike an additive forcing this keeps the positive orthant invariant.
inline InputSignal modulated_glv_input(const GlvParameters& p, Vector amplitude,
                                       Vector frequency, Vector phase) {
  if (static_cast<std::size_t>(amplitude.size()) != p.size())
    throw ParameterError("modulation parameters and growth rates differ in length");
  InputSignal wave = sinusoidal_input(std::move(amplitude), std::move(frequency), std::move(phase));
  return [r = p.r, wave = std::move(wave)](double t, const Vector& x) -> Vector {
    return x.cwiseProduct(r + wave(t, x));
  };
}

inline InputSignal sum_inputs(InputSignal a, InputSignal b) {
  return [a = std::move(a), b = std::move(b)](double t, const Vector& x) -> Vector {
    return a(t, x) + b(t, x);
  };
}

/// Uniformly sampled states, inputs and (optionally) derivatives.
/// Rows are samples, columns are nodes.
class Trajectory {
 public:
  Trajectory(double t0, double step, Matrix states, Matrix inputs,
             std::optional<Matrix> derivatives = std::nullopt)
      : t0_(t0), step_(step), states_(std::move(states)), inputs_(std::move(inputs)),
        derivatives_(std::move(derivatives)) {
    if (!(step_ > 0.0) || !std::isfinite(step_) || !std::isfinite(t0_))
      throw ParameterError("trajectory step must be positive and finite");
    if (states_.rows() < 2) throw ParameterError("trajectory needs at least two samples");
    if (states_.cols() == 0) throw ParameterError("trajectory has no nodes");
    if (inputs_.rows() != states_.rows() || inputs_.cols() != states_.cols())
      throw ParameterError("input samples do not match state samples");
    if (derivatives_ && (derivatives_->rows() != states_.rows() ||
                         derivatives_->cols() != states_.cols()))
      throw ParameterError("derivative samples do not match state samples");
    if (!states_.allFinite() || !inputs_.allFinite() ||
        (derivatives_ && !derivatives_->allFinite()))
      throw ParameterError("trajectory contains non-finite samples");
  }

  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return time(samples() - 1); }
  double step() const noexcept { return step_; }
  double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * step_; }
  std::size_t samples() const noexcept { return static_cast<std::size_t>(states_.rows()); }
  std::size_t nodes() const noexcept { return static_cast<std::size_t>(states_.cols()); }

  const Matrix& states() const noexcept { return states_; }
  const Matrix& inputs() const noexcept { return inputs_; }
  const std::optional<Matrix>& derivatives() const noexcept { return derivatives_; }
  bool has_derivatives() const noexcept { return derivatives_.has_value(); }

  Vector state(std::size_t k) const { return states_.row(static_cast<Eigen::Index>(k)).transpose(); }

  Trajectory with_derivatives(Matrix dx) const {
    return Trajectory(t0_, step_, states_, inputs_, std::move(dx));
  }

 private:
  double t0_;
  double step_;
  Matrix states_;
  Matrix inputs_;
  std::optional<Matrix> derivatives_;
};

namespace detail {

inline Vector network_rhs(const InteractionMatrix& a, const RegressorFamily& reg,
                          const InputSignal& u, double t, const Vector& x) {
  const std::size_t n = a.size();
  Vector dx = u(t, x);
  for (std::size_t i = 0; i < n; ++i)
    dx(static_cast<Eigen::Index>(i)) += reg(i, x).dot(a.row(i));
  return dx;
}

}  // namespace detail

/// Classical fourth-order Runge-Kutta at a fixed step on [0, horizon].
/// Derivatives are recorded from the right-hand side at every sample.
inline Trajectory simulate(const InteractionMatrix& a, const RegressorFamily& reg,
                           const InputSignal& u, const Vector& x0, double horizon,
                           double step) {
  if (!(step > 0.0) || !(horizon > 0.0))
    throw ParameterError("simulate: step and horizon must be positive");
  if (!x0.allFinite()) throw ParameterError("simulate: initial state is not finite");
  const std::size_t n = a.size();
  if (reg.size() != n || static_cast<std::size_t>(x0.size()) != n)
    throw ParameterError("simulate: dimension mismatch");

  const auto intervals = static_cast<Eigen::Index>(std::llround(horizon / step));
  if (intervals < 1) throw ParameterError("simulate: horizon shorter than one step");
  const Eigen::Index rows = intervals + 1;
  const auto cols = static_cast<Eigen::Index>(n);
  Matrix states(rows, cols), inputs(rows, cols), derivs(rows, cols);

  auto rhs = [&](double t, const Vector& x) { return detail::network_rhs(a, reg, u, t, x); };
  auto check = [&](double t, const Vector& x) {
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (!std::isfinite(x(k)) || std::abs(x(k)) > kOverflowBound)
        throw SimulationBlowup(t, "simulation blowup at t = " + std::to_string(t) +
                                      " (node " + std::to_string(k + 1) + ")");
    }
  };

  Vector x = x0;
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double t = static_cast<double>(k) * step;
    states.row(k) = x.transpose();
    inputs.row(k) = u(t, x).transpose();
    const Vector k1 = rhs(t, x);
    derivs.row(k) = k1.transpose();
    if (k + 1 == rows) break;
    const Vector k2 = rhs(t + 0.5 * step, x + 0.5 * step * k1);
    const Vector k3 = rhs(t + 0.5 * step, x + 0.5 * step * k2);
    const Vector k4 = rhs(t + step, x + step * k3);
    x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check(t + step, x);
  }
  return Trajectory(0.0, step, std::move(states), std::move(inputs), std::move(derivs));
}

/// Solves r + A x* = 0. Returns nullopt when A is singular to within
/// sigma_min <= 1e-12 sigma_max.
inline std::optional<Vector> glv_steady_state(const InteractionMatrix& a,
                                              const GlvParameters& p) {
  if (p.size() != a.size()) throw ParameterError("glv_steady_state: dimension mismatch");
  Eigen::JacobiSVD<Matrix> svd(a.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  if (s(0) == 0.0 || s(s.size() - 1) <= 1e-12 * s(0)) return std::nullopt;
  Vector x = svd.solve(Vector(-p.r));
  if (!x.allFinite()) return std::nullopt;
  return x;
}

/// Fills in missing derivatives: central differences inside, one-sided
/// second-order stencils at both ends. Existing derivatives are kept.
inline Trajectory estimate_derivatives(const Trajectory& traj) {
  if (traj.has_derivatives()) return traj;
  const auto m = static_cast<Eigen::Index>(traj.samples());
  if (m < 3) throw InsufficientData("estimate_derivatives: need at least 3 samples");
  const Matrix& x = traj.states();
  const double h = traj.step();
  Matrix dx(m, x.cols());
  dx.row(0) = (-3.0 * x.row(0) + 4.0 * x.row(1) - x.row(2)) / (2.0 * h);
  for (Eigen::Index k = 1; k + 1 < m; ++k)
    dx.row(k) = (x.row(k + 1) - x.row(k - 1)) / (2.0 * h);
  dx.row(m - 1) = (3.0 * x.row(m - 1) - 4.0 * x.row(m - 2) + x.row(m - 3)) / (2.0 * h);
  return traj.with_derivatives(std::move(dx));
}

}  // namespace netrecon
