#pragma once

// Fast-timescale knowledge deployment (learning a novel feature or item on
// top of frozen background knowledge, and projecting it through hidden-layer
// similarity) plus the neural/behavioral similarity identities, minimum-norm
// weight construction and representational-similarity experiments.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "semantica/dynamics.hpp"
#include "semantica/linalg.hpp"
#include "semantica/matrix.hpp"
#include "semantica/rng.hpp"
#include "semantica/semantics.hpp"

namespace semantica {

struct FastLearnResult {
  std::vector<double> weights;  // new synapses, h / ||h||^2
  std::size_t target = 0;       // anchored item or feature index
  double time = 0.0;            // developmental time of the fast episode
};

// Steady state of fast gradient descent on the new output synapses when item
// `item`'s hidden vector is h: w = h / ||h||^2, so that w . h = 1.
inline FastLearnResult learn_novel_feature(const Matrix& hidden, std::size_t item,
                                           double time = 0.0) {
  if (item >= hidden.cols())
    throw std::invalid_argument("learn_novel_feature: item out of range");
  FastLearnResult r;
  r.target = item;
  r.time = time;
  r.weights.resize(hidden.rows());
  double norm2 = 0.0;
  for (std::size_t a = 0; a < hidden.rows(); ++a) norm2 += hidden(a, item) * hidden(a, item);
  if (norm2 <= 0.0)
    throw std::domain_error("learn_novel_feature: zero hidden vector, nothing to anchor to");
  for (std::size_t a = 0; a < hidden.rows(); ++a) r.weights[a] = hidden(a, item) / norm2;
  return r;
}

// ODE route to the same steady state: integrate tau_f dw/dt = (1 - w.h) h
// with RK4 from w(0) = 0. Exposed so the closed form can be cross-checked.
inline FastLearnResult learn_novel_feature_ode(const Matrix& hidden, std::size_t item,
                                               double tau_f, double t_end,
                                               std::size_t steps = 4000) {
  if (item >= hidden.cols())
    throw std::invalid_argument("learn_novel_feature_ode: item out of range");
  std::vector<double> h(hidden.rows());
  double nrm = 0.0;
  for (std::size_t a = 0; a < h.size(); ++a) {
    h[a] = hidden(a, item);
    nrm += h[a] * h[a];
  }
  if (nrm <= 0.0)
    throw std::domain_error("learn_novel_feature_ode: zero hidden vector");
  std::vector<double> w(h.size(), 0.0);
  const double dt = t_end / static_cast<double>(steps);
  auto residual = [&](const std::vector<double>& wv) {
    double dot_wh = 0.0;
    for (std::size_t a = 0; a < h.size(); ++a) dot_wh += wv[a] * h[a];
    return (1.0 - dot_wh) / tau_f;
  };
  std::vector<double> tmp(w.size());
  for (std::size_t k = 0; k < steps; ++k) {
    const double k1 = residual(w);
    for (std::size_t a = 0; a < w.size(); ++a) tmp[a] = w[a] + 0.5 * dt * k1 * h[a];
    const double k2 = residual(tmp);
    for (std::size_t a = 0; a < w.size(); ++a) tmp[a] = w[a] + 0.5 * dt * k2 * h[a];
    const double k3 = residual(tmp);
    for (std::size_t a = 0; a < w.size(); ++a) tmp[a] = w[a] + dt * k3 * h[a];
    const double k4 = residual(tmp);
    for (std::size_t a = 0; a < w.size(); ++a)
      w[a] += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4) * h[a];
  }
  FastLearnResult r;
  r.target = item;
  r.time = 0.0;
  r.weights = std::move(w);
  return r;
}

// Projection of the learned novel feature onto item j: w . h_j.
inline double project_feature(const FastLearnResult& r, const Matrix& hidden,
                              std::size_t j) {
  if (j >= hidden.cols()) throw std::invalid_argument("project_feature: item out of range");
  double acc = 0.0;
  for (std::size_t a = 0; a < hidden.rows(); ++a) acc += r.weights[a] * hidden(a, j);
  return acc;
}

// Hidden representation of feature m at developmental time t:
// h_m^alpha = u_m^alpha sqrt(a_alpha(t)).
inline std::vector<double> feature_hidden_rep(const SemanticSvd& a, std::size_t feature,
                                              double t, double a0, double tau) {
  if (feature >= a.data.features())
    throw std::invalid_argument("feature_hidden_rep: feature out of range");
  const std::vector<double> strengths = mode_strengths(a.svd, a0, tau, t);
  std::vector<double> h(strengths.size());
  for (std::size_t alpha = 0; alpha < h.size(); ++alpha)
    h[alpha] = a.svd.u(feature, alpha) * std::sqrt(strengths[alpha]);
  return h;
}

// Fast learning of a novel item that has familiar feature m: new input
// synapses converge to h_m / ||h_m||^2.
inline FastLearnResult learn_novel_item(const SemanticSvd& a, std::size_t feature,
                                        double t, double a0, double tau) {
  const std::vector<double> h = feature_hidden_rep(a, feature, t, a0, tau);
  const double n2 = dot(h, h);
  if (n2 <= 0.0)
    throw std::domain_error("learn_novel_item: zero feature representation");
  FastLearnResult r;
  r.target = feature;
  r.time = t;
  r.weights.resize(h.size());
  for (std::size_t alpha = 0; alpha < h.size(); ++alpha) r.weights[alpha] = h[alpha] / n2;
  return r;
}

// Projection of familiar feature n onto the novel item: h_n . w.
inline double project_item(const FastLearnResult& r, std::size_t feature_n,
                           const SemanticSvd& a, double t, double a0, double tau) {
  const std::vector<double> h = feature_hidden_rep(a, feature_n, t, a0, tau);
  return dot(h, r.weights);
}

// Row t_k: the projection of a feature anchored at `anchor` to every item,
// using the analytic hidden representations at times[k].
inline Matrix projection_over_time(const Dataset& data, std::size_t anchor,
                                   const std::vector<double>& times, double a0,
                                   double tau) {
  const SemanticSvd a = analyze(data);
  Matrix out(times.size(), data.items());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Matrix h = hidden_reps(a.svd, a0, tau, times[k], data.x);
    const FastLearnResult r = learn_novel_feature(h, anchor, times[k]);
    for (std::size_t j = 0; j < data.items(); ++j) out(k, j) = project_feature(r, h, j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Similarity structure.
// ---------------------------------------------------------------------------

struct SimilarityPair {
  Matrix neural;      // Sigma^h = H^T H
  Matrix behavioral;  // Sigma^yhat = Yhat^T Yhat
};

inline Matrix neural_similarity(const Matrix& hidden) { return at_mul(hidden, hidden); }

inline Matrix behavioral_similarity(const Matrix& yhat) { return at_mul(yhat, yhat); }

// Relative residual of Sigma^yhat = (Sigma^h)^2.
inline double similarity_relation_check(const SimilarityPair& pair) {
  if (pair.neural.rows() != pair.behavioral.rows())
    throw std::invalid_argument("similarity_relation_check: shape mismatch");
  const Matrix squared = pair.neural * pair.neural;
  return frobenius(pair.behavioral - squared) / frobenius(pair.behavioral);
}

// ---------------------------------------------------------------------------
// Minimum-norm weights and RSA experiments.
// ---------------------------------------------------------------------------

// W1 = R sqrt(A(t)) V^T, W2 = U sqrt(A(t)) R^T with R orthonormal columns;
// rotation_seed absent means the canonical gauge R = I. This is the smallest
// total-Frobenius-norm implementation of the map U A(t) V^T.
inline DeepNet min_norm_weights(const SemanticSvd& a, double t,
                                std::optional<std::uint64_t> rotation_seed,
                                double a0 = 1e-8, double tau = 1.0,
                                std::size_t n_hidden = 0) {
  const std::size_t r = a.svd.s.size();
  const std::size_t n2 = n_hidden ? n_hidden : r;
  if (n2 < r) throw std::invalid_argument("min_norm_weights: n_hidden < rank");
  const std::vector<double> strengths = mode_strengths(a.svd, a0, tau, t);

  Matrix rot(n2, r);
  if (rotation_seed) {
    Rng rng(*rotation_seed);
    for (double& v : rot.data()) v = rng.normal();
    // Orthonormalize columns (Gram-Schmidt, two passes).
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
          double proj = 0.0;
          for (std::size_t i = 0; i < n2; ++i) proj += rot(i, k) * rot(i, j);
          for (std::size_t i = 0; i < n2; ++i) rot(i, j) -= proj * rot(i, k);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n2; ++i) nrm += rot(i, j) * rot(i, j);
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n2; ++i) rot(i, j) /= nrm;
      }
  } else {
    for (std::size_t j = 0; j < r; ++j) rot(j, j) = 1.0;
  }

  DeepNet net{Matrix(n2, a.svd.v.rows()), Matrix(a.svd.u.rows(), n2)};
  for (std::size_t alpha = 0; alpha < r; ++alpha) {
    const double root = std::sqrt(strengths[alpha]);
    for (std::size_t i = 0; i < n2; ++i) {
      for (std::size_t j = 0; j < net.w1.cols(); ++j)
        net.w1(i, j) += rot(i, alpha) * root * a.svd.v(j, alpha);
    }
    for (std::size_t i = 0; i < net.w2.rows(); ++i)
      for (std::size_t j = 0; j < n2; ++j)
        net.w2(i, j) += a.svd.u(i, alpha) * root * rot(j, alpha);
  }
  return net;
}

struct RsaResult {
  Matrix distances;                  // pairwise ||S_a - S_b||_F / ||S_a||_F
  std::vector<Matrix> sigma_h;       // per-seed hidden similarity
  std::vector<Matrix> sigma_yhat;    // per-seed behavioral similarity
  std::vector<double> relation_residual;  // per-seed Sigma^yhat=(Sigma^h)^2 check
};

// Train one network per seed from Gaussian init at scale a0 and compare the
// hidden similarity structures across runs (probe inputs X = I).
inline RsaResult rsa_invariance(const Dataset& data,
                                const std::vector<std::uint64_t>& seeds, double a0,
                                TrainConfig base) {
  if (seeds.size() < 2) throw std::invalid_argument("rsa_invariance: need >= 2 seeds");
  base.init = InitMode::gaussian;
  base.init_scale = a0;
  base.record_every = base.epochs;  // endpoint only

  RsaResult out;
  for (std::uint64_t seed : seeds) {
    TrainConfig config = base;
    config.seed = seed;
    auto [net, traj] = train_deep(data, config);
    (void)traj;
    const Matrix hidden = net.w1 * data.x;
    const Matrix yhat = net.composite() * data.x;
    out.sigma_h.push_back(neural_similarity(hidden));
    out.sigma_yhat.push_back(behavioral_similarity(yhat));
    out.relation_residual.push_back(
        similarity_relation_check({out.sigma_h.back(), out.sigma_yhat.back()}));
  }
  const std::size_t n = seeds.size();
  out.distances = Matrix(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      out.distances(a, b) =
          frobenius(out.sigma_h[a] - out.sigma_h[b]) / frobenius(out.sigma_h[a]);
  return out;
}

}  // namespace semantica
