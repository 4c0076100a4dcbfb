#pragma once

// Learning dynamics of deep and shallow linear networks: the exact
// mode-strength trajectories and their timescale/transition/illusory-interval
// calculators, plus numerical trainers (per-example SGD and the averaged
// batch equations) that the analytic solutions are validated against.
//
// Time is measured in units of tau = 1/(P lambda): a trained network's epoch
// k corresponds to t = k * lambda * P. Training operates on whitened examples
// (x~ = sqrt(P) x, y~ = y / sqrt(P)), under which the per-example SGD updates
// sum over an epoch to exactly one Euler step of the averaged equations with
// the library's correlation convention (Sigma^yx = (1/P) Y X^T, Sigma^x = I
// for one-hot inputs).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "semantica/dataset.hpp"
#include "semantica/linalg.hpp"
#include "semantica/matrix.hpp"
#include "semantica/rng.hpp"

namespace semantica {

// ---------------------------------------------------------------------------
// Closed-form trajectories.
// ---------------------------------------------------------------------------

// Deep-network mode strength a(t) = s / (1 + (s/a0 - 1) e^{-2 s t / tau}),
// the solution of tau da/dt = 2 a (s - a) from a(0) = a0.
inline double deep_mode_trajectory(double s, double a0, double tau, double t) {
  if (s <= 0.0) throw std::invalid_argument("deep_mode_trajectory: s <= 0");
  if (tau <= 0.0) throw std::invalid_argument("deep_mode_trajectory: tau <= 0");
  if (a0 == 0.0)
    throw std::domain_error("deep_mode_trajectory: a0 = 0 is a fixed point with no dynamics");
  if (a0 < 0.0) throw std::invalid_argument("deep_mode_trajectory: a0 < 0");
  return s / (1.0 + (s / a0 - 1.0) * std::exp(-2.0 * s * t / tau));
}

// Shallow-network mode strength b(t) = s (1 - e^{-t/tau}) + b0 e^{-t/tau}.
inline double shallow_mode_trajectory(double s, double b0, double tau, double t) {
  if (tau <= 0.0) throw std::invalid_argument("shallow_mode_trajectory: tau <= 0");
  const double decay = std::exp(-t / tau);
  return s * (1.0 - decay) + b0 * decay;
}

// Time for a deep mode to travel from strength a0 to af:
// t = (tau / 2s) ln[ af (s - a0) / (a0 (s - af)) ].
inline double time_to_reach(double s, double a0, double af, double tau) {
  if (!(0.0 < a0 && a0 < s) || af >= s || af < a0)
    throw std::domain_error("time_to_reach: need 0 < a0 <= af < s");
  return tau / (2.0 * s) * std::log(af * (s - a0) / (a0 * (s - af)));
}

// Learning timescales at cutoff eps: deep (tau/s) ln(s/eps),
// shallow tau ln(s/eps).
inline double deep_learning_time(double s, double eps, double tau) {
  if (!(0.0 < eps && eps < s)) throw std::domain_error("deep_learning_time: need 0 < eps < s");
  return tau / s * std::log(s / eps);
}

inline double shallow_learning_time(double s, double eps, double tau) {
  if (!(0.0 < eps && eps < s))
    throw std::domain_error("shallow_learning_time: need 0 < eps < s");
  return tau * std::log(s / eps);
}

struct CutoffParams {
  double eps = 0.05;   // learning-complete cutoff
  double eps0 = 1e-6;  // initial-strength cutoff

  void validate(double s_min) const {
    if (!(0.0 < eps0 && eps0 <= eps && eps < s_min))
      throw std::invalid_argument("CutoffParams: need 0 < eps0 <= eps < min singular value");
  }
};

struct TransitionSharpness {
  double t_trans;  // time inside the sigmoidal transition
  double t_tot;    // total time from strength eps0 to s - eps
  double ratio;    // t_trans / t_tot, in (0, 1]
};

// Deep network: the transition (eps -> s - eps) becomes vanishingly short
// relative to the total time as eps0 -> 0.
inline TransitionSharpness transition_sharpness(double s, double eps, double eps0,
                                                double tau) {
  if (!(0.0 < eps0 && eps0 <= eps && eps < s))
    throw std::domain_error("transition_sharpness: need 0 < eps0 <= eps < s");
  const double t_trans = tau / (2.0 * s) * std::log((s - eps) * (s - eps) / (eps * eps));
  const double t_tot =
      tau / (2.0 * s) * std::log((s - eps) * (s - eps0) / (eps0 * eps));
  return {t_trans, t_tot, t_trans / t_tot};
}

// Shallow analogue: the ratio stays near 1, transitions are not stage-like.
inline TransitionSharpness shallow_transition_sharpness(double s, double eps,
                                                        double eps0, double tau) {
  if (!(0.0 < eps0 && eps0 <= eps && eps < s))
    throw std::domain_error("shallow_transition_sharpness: need 0 < eps0 <= eps < s");
  const double t_trans = tau * std::log((s - eps) / eps);
  const double t_tot = tau * std::log((s - eps0) / eps);
  return {t_trans, t_tot, t_trans / t_tot};
}

struct IllusoryInterval {
  double exact;
  double approx;  // tau Delta ln(s_k/eps) / s_k^2
};

// Developmental interval between learning mode k and the next mode whose
// singular value is smaller by delta; the window in which a mixed-sign
// feature prediction stays wrong.
inline IllusoryInterval illusory_interval(double s_k, double delta, double eps,
                                          double tau) {
  if (delta >= s_k || delta < 0.0)
    throw std::domain_error("illusory_interval: need 0 <= delta < s_k");
  if (!(0.0 < eps && eps < s_k - delta))
    throw std::domain_error("illusory_interval: need 0 < eps < s_k - delta");
  const double exact = (tau * s_k * std::log((s_k - delta) / s_k) +
                        tau * delta * std::log(s_k / eps)) /
                       (s_k * (s_k - delta));
  const double approx = tau * delta * std::log(s_k / eps) / (s_k * s_k);
  return {exact, approx};
}

// ---------------------------------------------------------------------------
// Analytic maps and representations built on an SVD.
// ---------------------------------------------------------------------------

inline std::vector<double> mode_strengths(const SvdResult& f, double a0, double tau,
                                          double t) {
  std::vector<double> a(f.s.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = f.s[i] > 0.0 ? deep_mode_trajectory(f.s[i], a0, tau, t) : 0.0;
  return a;
}

// U A(t) V^T.
inline Matrix analytic_map(const SvdResult& f, double a0, double tau, double t) {
  const std::vector<double> a = mode_strengths(f, a0, tau, t);
  Matrix ua = f.u;
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < ua.rows(); ++i) ua(i, j) *= a[j];
  return mul_bt(ua, f.v);
}

// Hidden representations sqrt(A(t)) V^T x in the canonical gauge.
inline Matrix hidden_reps(const SvdResult& f, double a0, double tau, double t,
                          const Matrix& x) {
  const std::vector<double> a = mode_strengths(f, a0, tau, t);
  Matrix h(a.size(), x.cols());
  for (std::size_t alpha = 0; alpha < a.size(); ++alpha) {
    const double root = std::sqrt(a[alpha]);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double proj = 0.0;
      for (std::size_t i = 0; i < f.v.rows(); ++i) proj += f.v(i, alpha) * x(i, j);
      h(alpha, j) = root * proj;
    }
  }
  return h;
}

// SSE along the analytic trajectory:
// SSE = (P/2) Tr Sigma^y - P sum_alpha (s_alpha - a_alpha/2) a_alpha.
inline double sse_curve(const std::vector<double>& s, double sigma_y_trace,
                        const std::vector<double>& a, std::size_t p) {
  if (s.size() != a.size()) throw std::invalid_argument("sse_curve: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += (s[i] - 0.5 * a[i]) * a[i];
  return 0.5 * static_cast<double>(p) * sigma_y_trace - static_cast<double>(p) * acc;
}

enum class Arch { deep, shallow };

struct FeatureTrajectory {
  std::vector<double> times;
  std::vector<double> prediction;  // total predicted feature value
  Matrix contributions;            // timepoints x modes
};

// Per-mode breakdown of one feature prediction for one item over time.
inline FeatureTrajectory feature_trajectory(const SvdResult& f, std::size_t item,
                                            std::size_t feature,
                                            const std::vector<double>& times,
                                            double a0, double tau, Arch arch) {
  if (feature >= f.u.rows() || item >= f.v.rows())
    throw std::invalid_argument("feature_trajectory: index out of range");
  FeatureTrajectory out;
  out.times = times;
  out.prediction.resize(times.size());
  out.contributions = Matrix(times.size(), f.s.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    double total = 0.0;
    for (std::size_t alpha = 0; alpha < f.s.size(); ++alpha) {
      double g;
      if (arch == Arch::deep)
        g = f.s[alpha] > 0.0 ? deep_mode_trajectory(f.s[alpha], a0, tau, times[ti]) : 0.0;
      else
        g = shallow_mode_trajectory(f.s[alpha], a0, tau, times[ti]);
      const double c = g * f.u(feature, alpha) * f.v(item, alpha);
      out.contributions(ti, alpha) = c;
      total += c;
    }
    out.prediction[ti] = total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Numerical trainers.
// ---------------------------------------------------------------------------

struct DeepNet {
  Matrix w1;  // N2 x N1
  Matrix w2;  // N3 x N2
  Matrix composite() const { return w2 * w1; }
};

struct ShallowNet {
  Matrix ws;  // N3 x N1
};

enum class Regime { batch, online };
enum class InitMode { balanced, gaussian };

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 1000;
  double init_scale = 1e-4;  // a0
  std::uint64_t seed = 0;
  Regime regime = Regime::batch;
  std::size_t record_every = 1;
  std::size_t n_hidden = 0;  // 0: use the number of modes
  InitMode init = InitMode::balanced;
  bool record_hidden = false;

  void validate() const {
    if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning_rate <= 0");
    if (epochs == 0) throw std::invalid_argument("TrainConfig: epochs == 0");
    if (init_scale < 0.0) throw std::invalid_argument("TrainConfig: init_scale < 0");
  }
};

struct Trajectory {
  std::vector<double> times;   // epoch * lambda * P
  Matrix eff_singular_values;  // timepoints x modes, diag(U^T W V)
  std::vector<double> sse;
  std::vector<Matrix> hidden_snapshots;  // W1 X at each recorded time, if enabled
  std::vector<std::string> warnings;
};

struct TrainingDiverged : std::runtime_error {
  explicit TrainingDiverged(std::size_t at_epoch)
      : std::runtime_error("training diverged at epoch " + std::to_string(at_epoch)),
        epoch(at_epoch) {}
  std::size_t epoch;
};

// One per-example update of the two-layer network, the backpropagation rule
// W1 += lambda W2^T (y - yhat) x^T, W2 += lambda (y - yhat) h^T. This is the
// exact negative gradient of (1/2)||y - W2 W1 x||^2 scaled by lambda.
inline void sgd_step(DeepNet& net, const std::vector<double>& x,
                     const std::vector<double>& y, double lambda) {
  const std::vector<double> h = mat_vec(net.w1, x);
  const std::vector<double> yhat = mat_vec(net.w2, h);
  std::vector<double> e(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) e[i] = y[i] - yhat[i];
  const std::vector<double> back = matT_vec(net.w2, e);  // W2^T e
  for (std::size_t i = 0; i < net.w1.rows(); ++i)
    for (std::size_t j = 0; j < net.w1.cols(); ++j)
      net.w1(i, j) += lambda * back[i] * x[j];
  for (std::size_t i = 0; i < net.w2.rows(); ++i)
    for (std::size_t j = 0; j < net.w2.cols(); ++j)
      net.w2(i, j) += lambda * e[i] * h[j];
}

// Gaussian-initialized deep network: W1_ij ~ N(0, a0^2/N1), W2_ij ~ N(0, a0^2/N3).
inline DeepNet init_network(std::size_t n1, std::size_t n2, std::size_t n3,
                            double a0, std::uint64_t seed) {
  Rng rng(seed);
  DeepNet net{Matrix(n2, n1), Matrix(n3, n2)};
  const double sd1 = a0 / std::sqrt(static_cast<double>(n1));
  const double sd3 = a0 / std::sqrt(static_cast<double>(n3));
  for (double& v : net.w1.data()) v = sd1 * rng.normal();
  for (double& v : net.w2.data()) v = sd3 * rng.normal();
  return net;
}

namespace detail {

// Balanced spectral init in the canonical gauge: every mode starts at
// strength exactly a0 and the dynamics stay decoupled.
inline DeepNet balanced_init(const SvdResult& f, std::size_t n2, double a0) {
  const std::size_t r = f.s.size();
  if (n2 < r) throw std::invalid_argument("balanced init: n_hidden < number of modes");
  const double root = std::sqrt(a0);
  DeepNet net{Matrix(n2, f.v.rows()), Matrix(f.u.rows(), n2)};
  for (std::size_t alpha = 0; alpha < r; ++alpha) {
    for (std::size_t i = 0; i < f.v.rows(); ++i) net.w1(alpha, i) = root * f.v(i, alpha);
    for (std::size_t i = 0; i < f.u.rows(); ++i) net.w2(i, alpha) = root * f.u(i, alpha);
  }
  return net;
}

inline std::vector<double> effective_singular_values(const SvdResult& f,
                                                     const Matrix& w_tot) {
  std::vector<double> a(f.s.size(), 0.0);
  for (std::size_t alpha = 0; alpha < f.s.size(); ++alpha) {
    double acc = 0.0;
    for (std::size_t i = 0; i < w_tot.rows(); ++i) {
      double wv = 0.0;
      for (std::size_t j = 0; j < w_tot.cols(); ++j)
        wv += w_tot(i, j) * f.v(j, alpha);
      acc += f.u(i, alpha) * wv;
    }
    a[alpha] = acc;
  }
  return a;
}

// SSE under the whitened examples:
// (P/2)(Tr Sigma^y - 2 Tr(Sigma^yx^T W) + Tr(W Sigma^x W^T)).
inline double whitened_sse(const Matrix& syx, const Matrix& sx, const Matrix& w_tot,
                           double sigma_y_trace, std::size_t p) {
  double cross = 0.0;
  for (std::size_t i = 0; i < syx.rows(); ++i)
    for (std::size_t j = 0; j < syx.cols(); ++j) cross += syx(i, j) * w_tot(i, j);
  const Matrix wsx = w_tot * sx;
  double quad = 0.0;
  for (std::size_t i = 0; i < w_tot.rows(); ++i)
    for (std::size_t j = 0; j < w_tot.cols(); ++j) quad += wsx(i, j) * w_tot(i, j);
  return 0.5 * static_cast<double>(p) * (sigma_y_trace - 2.0 * cross + quad);
}

struct RecordingPlan {
  std::size_t every;
  std::size_t epochs;
  bool due(std::size_t epoch) const {  // epoch counts completed epochs
    return epoch == 0 || epoch == epochs || epoch % every == 0;
  }
};

}  // namespace detail

// Train the two-layer network on the dataset. Online regime applies the
// per-example rule in shuffled order; batch regime advances the averaged
// equations by one epoch (dt = lambda P) per step. Throws TrainingDiverged
// on non-finite weights or an SSE blow-up past 1e3 x initial.
inline std::pair<DeepNet, Trajectory> train_deep(const Dataset& data,
                                                 const TrainConfig& config) {
  config.validate();
  data.validate();
  const Matrix syx = data.sigma_yx();
  const Matrix sx = data.sigma_x();
  const SvdResult f = svd(syx);
  const std::size_t p = data.items();
  const std::size_t r = f.s.size();
  const std::size_t n2 = config.n_hidden ? config.n_hidden : r;
  const double lambda = config.learning_rate;
  const double step = lambda * static_cast<double>(p);
  const double sigma_y_trace = trace(data.sigma_y());

  Trajectory traj;
  if (!f.s.empty() && lambda >= 1.0 / (f.s[0] * static_cast<double>(p)))
    traj.warnings.push_back(
        "learning rate violates the gradual-learning bound lambda << 1/(s1 P)");

  DeepNet net = (config.init == InitMode::balanced)
                    ? detail::balanced_init(f, n2, config.init_scale)
                    : init_network(data.input_dim(), n2, data.features(),
                                   config.init_scale, config.seed);

  const detail::RecordingPlan plan{std::max<std::size_t>(1, config.record_every),
                                   config.epochs};
  double sse0 = -1.0;
  auto record = [&](std::size_t epoch) {
    const Matrix w_tot = net.composite();
    const std::vector<double> a = detail::effective_singular_values(f, w_tot);
    traj.times.push_back(static_cast<double>(epoch) * step);
    const double sse = detail::whitened_sse(syx, sx, w_tot, sigma_y_trace, p);
    traj.sse.push_back(sse);
    Matrix grown(traj.times.size(), r);
    for (std::size_t ti = 0; ti + 1 < traj.times.size(); ++ti)
      for (std::size_t j = 0; j < r; ++j) grown(ti, j) = traj.eff_singular_values(ti, j);
    for (std::size_t j = 0; j < r; ++j) grown(traj.times.size() - 1, j) = a[j];
    traj.eff_singular_values = std::move(grown);
    if (config.record_hidden) traj.hidden_snapshots.push_back(net.w1 * data.x);
    return sse;
  };

  sse0 = record(0);
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  const double sqrt_p = std::sqrt(static_cast<double>(p));

  // One RK4 step per epoch over dt = lambda P; forward Euler at the
  // reference lambda = 0.01 drifts ~0.1 in mode strength, past the
  // analytic-match tolerance.
  auto averaged_rhs = [&](const Matrix& w1, const Matrix& w2) {
    const Matrix err = syx - (w2 * w1) * sx;
    return std::pair<Matrix, Matrix>{at_mul(w2, err), mul_bt(err, w1)};
  };

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.regime == Regime::batch) {
      const auto k1 = averaged_rhs(net.w1, net.w2);
      const auto k2 = averaged_rhs(net.w1 + k1.first * (0.5 * step),
                                   net.w2 + k1.second * (0.5 * step));
      const auto k3 = averaged_rhs(net.w1 + k2.first * (0.5 * step),
                                   net.w2 + k2.second * (0.5 * step));
      const auto k4 = averaged_rhs(net.w1 + k3.first * step, net.w2 + k3.second * step);
      net.w1 += (k1.first + k2.first * 2.0 + k3.first * 2.0 + k4.first) * (step / 6.0);
      net.w2 +=
          (k1.second + k2.second * 2.0 + k3.second * 2.0 + k4.second) * (step / 6.0);
    } else {
      Rng rng = Rng::stream(config.seed, 0x0e11 + epoch);
      rng.shuffle(order);
      std::vector<double> xt(data.input_dim()), yt(data.features());
      for (std::size_t idx : order) {
        for (std::size_t i = 0; i < xt.size(); ++i) xt[i] = sqrt_p * data.x(i, idx);
        for (std::size_t i = 0; i < yt.size(); ++i) yt[i] = data.y(i, idx) / sqrt_p;
        sgd_step(net, xt, yt, lambda);
      }
    }
    if (!net.w1.all_finite() || !net.w2.all_finite()) throw TrainingDiverged(epoch);
    if (plan.due(epoch)) {
      const double sse = record(epoch);
      if (sse > 1e3 * sse0 && sse0 > 0.0) throw TrainingDiverged(epoch);
    }
  }
  return {std::move(net), std::move(traj)};
}

inline std::pair<ShallowNet, Trajectory> train_shallow(const Dataset& data,
                                                       const TrainConfig& config) {
  config.validate();
  data.validate();
  const Matrix syx = data.sigma_yx();
  const Matrix sx = data.sigma_x();
  const SvdResult f = svd(syx);
  const std::size_t p = data.items();
  const std::size_t r = f.s.size();
  const double lambda = config.learning_rate;
  const double step = lambda * static_cast<double>(p);
  const double sigma_y_trace = trace(data.sigma_y());

  Trajectory traj;
  ShallowNet net{Matrix(data.features(), data.input_dim())};
  if (config.init == InitMode::balanced) {
    for (std::size_t alpha = 0; alpha < r; ++alpha)
      for (std::size_t i = 0; i < net.ws.rows(); ++i)
        for (std::size_t j = 0; j < net.ws.cols(); ++j)
          net.ws(i, j) += config.init_scale * f.u(i, alpha) * f.v(j, alpha);
  } else {
    Rng rng(config.seed);
    const double sd = config.init_scale / std::sqrt(static_cast<double>(data.input_dim()));
    for (double& v : net.ws.data()) v = sd * rng.normal();
  }

  const detail::RecordingPlan plan{std::max<std::size_t>(1, config.record_every),
                                   config.epochs};
  double sse0 = -1.0;
  auto record = [&](std::size_t epoch) {
    const std::vector<double> a = detail::effective_singular_values(f, net.ws);
    traj.times.push_back(static_cast<double>(epoch) * step);
    const double sse = detail::whitened_sse(syx, sx, net.ws, sigma_y_trace, p);
    traj.sse.push_back(sse);
    Matrix grown(traj.times.size(), r);
    for (std::size_t ti = 0; ti + 1 < traj.times.size(); ++ti)
      for (std::size_t j = 0; j < r; ++j) grown(ti, j) = traj.eff_singular_values(ti, j);
    for (std::size_t j = 0; j < r; ++j) grown(traj.times.size() - 1, j) = a[j];
    traj.eff_singular_values = std::move(grown);
    return sse;
  };

  sse0 = record(0);
  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  const double sqrt_p = std::sqrt(static_cast<double>(p));

  auto shallow_rhs = [&](const Matrix& ws) { return syx - ws * sx; };

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.regime == Regime::batch) {
      const Matrix k1 = shallow_rhs(net.ws);
      const Matrix k2 = shallow_rhs(net.ws + k1 * (0.5 * step));
      const Matrix k3 = shallow_rhs(net.ws + k2 * (0.5 * step));
      const Matrix k4 = shallow_rhs(net.ws + k3 * step);
      net.ws += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (step / 6.0);
    } else {
      Rng rng = Rng::stream(config.seed, 0x0e11 + epoch);
      rng.shuffle(order);
      std::vector<double> xt(data.input_dim()), yt(data.features());
      for (std::size_t idx : order) {
        for (std::size_t i = 0; i < xt.size(); ++i) xt[i] = sqrt_p * data.x(i, idx);
        for (std::size_t i = 0; i < yt.size(); ++i) yt[i] = data.y(i, idx) / sqrt_p;
        const std::vector<double> yhat = mat_vec(net.ws, xt);
        for (std::size_t i = 0; i < net.ws.rows(); ++i)
          for (std::size_t j = 0; j < net.ws.cols(); ++j)
            net.ws(i, j) += lambda * (yt[i] - yhat[i]) * xt[j];
      }
    }
    if (!net.ws.all_finite()) throw TrainingDiverged(epoch);
    if (plan.due(epoch)) {
      const double sse = record(epoch);
      if (sse > 1e3 * sse0 && sse0 > 0.0) throw TrainingDiverged(epoch);
    }
  }
  return {std::move(net), std::move(traj)};
}

// CSV export: header `t,mode_1,...,mode_k,sse`, 17 significant digits.
inline void trajectory_to_csv(const Trajectory& traj, std::ostream& out) {
  const std::size_t modes = traj.eff_singular_values.cols();
  out << "t";
  for (std::size_t j = 0; j < modes; ++j) out << ",mode_" << (j + 1);
  out << ",sse\n";
  char buf[32];
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", traj.times[i]);
    out << buf;
    for (std::size_t j = 0; j < modes; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", traj.eff_singular_values(i, j));
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", traj.sse[i]);
    out << ',' << buf << "\n";
  }
}

}  // namespace semantica
