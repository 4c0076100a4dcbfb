#pragma once

// SVD-based semantic analysis: typicality/prototype identities, planted
// category coherence with the random-matrix recovery predictions, tree-level
// coherence and basic-level profiles, and rank-k optimal truncation.

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "semantica/datagen.hpp"
#include "semantica/dataset.hpp"
#include "semantica/dynamics.hpp"
#include "semantica/linalg.hpp"
#include "semantica/threads.hpp"

namespace semantica {

struct SemanticSvd {
  Dataset data;
  SvdResult svd;
  std::size_t items = 0;
};

inline SemanticSvd analyze(const Dataset& d) {
  d.validate();
  SemanticSvd out;
  out.data = d;
  out.svd = svd(d.sigma_yx());
  out.items = d.items();
  return out;
}

// Typicality of item i on semantic dimension alpha, computed through the
// feature-sum route v_i = (1/(P s_alpha)) sum_m u_m o_m^i rather than read
// from V directly; the two agree exactly, which the tests assert.
inline double typicality(const SemanticSvd& a, std::size_t item, std::size_t alpha) {
  if (alpha >= a.svd.s.size() || item >= a.items)
    throw std::invalid_argument("typicality: index out of range");
  if (a.svd.s[alpha] <= 0.0)
    throw std::domain_error("typicality: undefined for zero singular value");
  double acc = 0.0;
  for (std::size_t m = 0; m < a.data.features(); ++m)
    acc += a.svd.u(m, alpha) * a.data.y(m, item);
  return acc / (static_cast<double>(a.items) * a.svd.s[alpha]);
}

// Category prototype for dimension alpha: the typicality-weighted average of
// item feature vectors, u_m = (1/(P s_alpha)) sum_i v_i o_m^i.
inline std::vector<double> prototype(const SemanticSvd& a, std::size_t alpha) {
  if (alpha >= a.svd.s.size())
    throw std::invalid_argument("prototype: index out of range");
  if (a.svd.s[alpha] <= 0.0)
    throw std::domain_error("prototype: undefined for zero singular value");
  std::vector<double> u(a.data.features(), 0.0);
  for (std::size_t m = 0; m < u.size(); ++m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.items; ++i)
      acc += a.svd.v(i, alpha) * a.data.y(m, i);
    u[m] = acc / (static_cast<double>(a.items) * a.svd.s[alpha]);
  }
  return u;
}

// Contribution of mode alpha to feature m of item i at the end of learning.
inline double typicality_response(const SemanticSvd& a, std::size_t item,
                                  std::size_t feature, std::size_t alpha) {
  if (alpha >= a.svd.s.size() || item >= a.items || feature >= a.data.features())
    throw std::invalid_argument("typicality_response: index out of range");
  return a.svd.u(feature, alpha) * a.svd.s[alpha] * a.svd.v(item, alpha);
}

// ---------------------------------------------------------------------------
// Planted-category coherence and the recovery transition.
// ---------------------------------------------------------------------------

// Category coherence C = SNR * K_o K_f / sqrt(N_o N_f), SNR = (p-q)^2/(q(1-q)).
inline double category_coherence(const PlantedSpec& spec) {
  if (!(0.0 < spec.p_out && spec.p_out <= spec.p_in && spec.p_in < 1.0))
    throw std::invalid_argument("category_coherence: need 0 < q <= p < 1");
  const double snr = (spec.p_in - spec.p_out) * (spec.p_in - spec.p_out) /
                     (spec.p_out * (1.0 - spec.p_out));
  return snr * static_cast<double>(spec.k_objects) *
         static_cast<double>(spec.k_features) /
         std::sqrt(static_cast<double>(spec.n_objects) *
                   static_cast<double>(spec.n_features));
}

// Signal singular value of the planted low-rank block:
// theta = (p-q) sqrt(K_f K_o) / sqrt(N_f q (1-q)).
inline double planted_theta(const PlantedSpec& spec) {
  if (!(0.0 < spec.p_out && spec.p_out <= spec.p_in && spec.p_in < 1.0))
    throw std::invalid_argument("planted_theta: need 0 < q <= p < 1");
  return (spec.p_in - spec.p_out) *
         std::sqrt(static_cast<double>(spec.k_features) *
                   static_cast<double>(spec.k_objects)) /
         std::sqrt(static_cast<double>(spec.n_features) * spec.p_out *
                   (1.0 - spec.p_out));
}

// Asymptotic squared overlaps of the learned feature/object analyzers with
// the planted ones; zero at or below the recovery threshold C = 1.
inline std::pair<double, double> predicted_overlaps(double coherence, double c_ratio) {
  if (!(c_ratio > 0.0 && c_ratio <= 1.0))
    throw std::invalid_argument("predicted_overlaps: need c in (0, 1]");
  if (coherence < 0.0) throw std::invalid_argument("predicted_overlaps: C < 0");
  if (coherence <= 1.0) return {0.0, 0.0};
  const double rc = std::sqrt(c_ratio);
  const double u2 =
      1.0 - (1.0 + coherence / rc) / (coherence * (coherence + 1.0 / rc));
  const double v2 = 1.0 - (1.0 + rc * coherence) / (coherence * (coherence + rc));
  return {std::max(0.0, u2), std::max(0.0, v2)};
}

// Measured squared overlaps of the top singular vector pair of a rescaled
// realization with the planted analyzers. The top vector is what the cited
// recovery theorem speaks about; below threshold it is delocalized and the
// overlaps vanish like 1/N.
inline std::pair<double, double> empirical_overlaps(const Matrix& r_tilde,
                                                    const PlantedSpec& spec) {
  if (spec.k_objects == 0 || spec.k_features == 0) return {0.0, 0.0};
  const std::size_t n_o = r_tilde.cols();
  const EigResult eig = sym_eig_top(at_mul(r_tilde, r_tilde), 1);

  const double ku = 1.0 / std::sqrt(static_cast<double>(spec.k_features));
  const double kv = 1.0 / std::sqrt(static_cast<double>(spec.k_objects));
  std::vector<double> v(n_o);
  for (std::size_t i = 0; i < n_o; ++i) v[i] = eig.vectors(i, 0);
  const std::vector<double> u = mat_vec(r_tilde, v);
  const double nu = norm2(u);
  if (nu == 0.0) return {0.0, 0.0};
  double udot = 0.0, vdot = 0.0;
  for (std::size_t m = 0; m < spec.k_features; ++m) udot += u[m] / nu * ku;
  for (std::size_t i = 0; i < spec.k_objects; ++i) vdot += v[i] * kv;
  return {udot * udot, vdot * vdot};
}

struct CoherenceResult {
  double theta = 0.0;
  double coherence = 0.0;
  double c_ratio = 0.0;
  double predicted_u2 = 0.0, predicted_v2 = 0.0;
  double empirical_u2 = 0.0, empirical_v2 = 0.0;
  double stderr_u2 = 0.0, stderr_v2 = 0.0;
};

// Monte-Carlo estimate of the recovery overlaps across `trials` seeds
// (spec.seed, spec.seed+1, ...), reported as mean and standard error.
inline CoherenceResult coherence_experiment(const PlantedSpec& spec,
                                            std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("coherence_experiment: trials == 0");
  CoherenceResult out;
  out.theta = planted_theta(spec);
  out.coherence = category_coherence(spec);
  out.c_ratio = spec.c_ratio();
  std::tie(out.predicted_u2, out.predicted_v2) =
      predicted_overlaps(out.coherence, out.c_ratio);

  std::vector<double> u2(trials), v2(trials);
  parallel_for(trials, [&](std::size_t t) {
    PlantedSpec run = spec;
    run.seed = spec.seed + t;
    const Matrix r = planted_category(run);
    const Matrix rt = rescale_planted(r, run.p_out, run.n_features);
    std::tie(u2[t], v2[t]) = empirical_overlaps(rt, run);
  });

  double mu = 0.0, mv = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    mu += u2[t];
    mv += v2[t];
  }
  mu /= static_cast<double>(trials);
  mv /= static_cast<double>(trials);
  out.empirical_u2 = mu;
  out.empirical_v2 = mv;
  if (trials == 1) {
    out.stderr_u2 = std::numeric_limits<double>::quiet_NaN();
    out.stderr_v2 = std::numeric_limits<double>::quiet_NaN();
  } else {
    double su = 0.0, sv = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      su += (u2[t] - mu) * (u2[t] - mu);
      sv += (v2[t] - mv) * (v2[t] - mv);
    }
    out.stderr_u2 = std::sqrt(su / static_cast<double>(trials - 1) /
                              static_cast<double>(trials));
    out.stderr_v2 = std::sqrt(sv / static_cast<double>(trials - 1) /
                              static_cast<double>(trials));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tree-level category coherence.
// ---------------------------------------------------------------------------

// Within-category similarity minus between-category similarity:
// lambda = sum_{j in C} Sigma_ij - sum_{j in S} Sigma_ij for any i in C.
// Throws when the result depends on the representative i (input was not
// block-constant on the partition).
inline double tree_category_coherence(const Matrix& sigma_y,
                                      const std::vector<std::size_t>& category,
                                      const std::vector<std::size_t>& sibling,
                                      double tolerance = 1e-8) {
  if (category.empty() || sibling.empty())
    throw std::invalid_argument("tree_category_coherence: empty category");
  double first = 0.0;
  bool have_first = false;
  for (std::size_t i : category) {
    double within = 0.0, between = 0.0;
    for (std::size_t j : category) within += sigma_y(i, j);
    for (std::size_t j : sibling) between += sigma_y(i, j);
    const double lambda = within - between;
    if (!have_first) {
      first = lambda;
      have_first = true;
    } else if (std::abs(lambda - first) > tolerance) {
      throw std::domain_error(
          "tree_category_coherence: similarity matrix is not ultrametric on the "
          "given partition");
    }
  }
  return first;
}

// Nested partition of items: levels from coarsest (children of the root) to
// finest, each level a list of categories.
using TreePartition = std::vector<std::vector<std::vector<std::size_t>>>;

// Partition induced by a regular TreeSpec, levels 1..D-1.
inline TreePartition tree_partition(const TreeSpec& spec) {
  spec.validate();
  const std::vector<std::size_t> m = spec.level_sizes();
  const std::size_t p = spec.leaves();
  TreePartition levels;
  for (std::size_t l = 1; l < spec.depth; ++l) {
    const std::size_t block = p / m[l];
    std::vector<std::vector<std::size_t>> cats(m[l]);
    for (std::size_t i = 0; i < p; ++i) cats[i / block].push_back(i);
    levels.push_back(std::move(cats));
  }
  return levels;
}

struct BasicLevelProfile {
  std::vector<double> coherence;  // one value per partition level
  std::size_t argmax_level = 0;
};

// Per-level coherence via tree_category_coherence, using a sibling category
// under the same parent; flags the level with the largest value.
inline BasicLevelProfile basic_level_profile(const Matrix& sigma_y,
                                             const TreePartition& partition,
                                             double tolerance = 1e-8) {
  if (partition.empty()) throw std::invalid_argument("basic_level_profile: empty partition");
  BasicLevelProfile out;
  for (std::size_t l = 0; l < partition.size(); ++l) {
    const auto& cats = partition[l];
    if (cats.size() < 2)
      throw std::invalid_argument("basic_level_profile: level needs >= 2 categories");
    // Sibling of category c: another category contained in the same parent
    // (any other category at the top level).
    double level_value = 0.0;
    bool have_value = false;
    for (std::size_t c = 0; c < cats.size(); ++c) {
      std::size_t sib = cats.size();
      if (l == 0) {
        sib = (c == 0) ? 1 : 0;
      } else {
        const auto& parents = partition[l - 1];
        for (std::size_t other = 0; other < cats.size() && sib == cats.size(); ++other) {
          if (other == c) continue;
          for (const auto& parent : parents) {
            const bool c_in = std::find(parent.begin(), parent.end(), cats[c][0]) !=
                              parent.end();
            const bool o_in = std::find(parent.begin(), parent.end(), cats[other][0]) !=
                              parent.end();
            if (c_in && o_in) {
              sib = other;
              break;
            }
          }
        }
        if (sib == cats.size())
          throw std::invalid_argument("basic_level_profile: category has no sibling");
      }
      const double lambda =
          tree_category_coherence(sigma_y, cats[c], cats[sib], tolerance);
      if (!have_value) {
        level_value = lambda;
        have_value = true;
      } else if (std::abs(lambda - level_value) > tolerance) {
        throw std::domain_error("basic_level_profile: coherence differs across categories");
      }
    }
    out.coherence.push_back(level_value);
  }
  for (std::size_t l = 1; l < out.coherence.size(); ++l)
    if (out.coherence[l] > out.coherence[out.argmax_level]) out.argmax_level = l;
  return out;
}

// ---------------------------------------------------------------------------
// Rank-k truncation.
// ---------------------------------------------------------------------------

// Map retaining only the top k modes, and the SSE it leaves:
// (P/2) sum_{alpha > k} s_alpha^2.
inline std::pair<Matrix, double> truncated_map(const SemanticSvd& a, std::size_t k) {
  if (k > a.svd.s.size()) throw std::invalid_argument("truncated_map: k > rank");
  Matrix us = a.svd.u;
  for (std::size_t j = 0; j < a.svd.s.size(); ++j) {
    const double s = j < k ? a.svd.s[j] : 0.0;
    for (std::size_t i = 0; i < us.rows(); ++i) us(i, j) *= s;
  }
  const Matrix map = mul_bt(us, a.svd.v);
  double residual = 0.0;
  for (std::size_t j = k; j < a.svd.s.size(); ++j) residual += a.svd.s[j] * a.svd.s[j];
  residual *= 0.5 * static_cast<double>(a.items);
  return {map, residual};
}

}  // namespace semantica
