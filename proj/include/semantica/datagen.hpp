#pragma once

// Generators for every structured environment used by the experiments:
// the hand-crafted hierarchy, branching-diffusion trees with their analytic
// spectra, Gaussian Markov random field structural forms (clusters, rings,
// trees), the explicit transitive-ordering and cross-cutting matrices, and
// planted noisy categories for the random-matrix experiments.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "semantica/dataset.hpp"
#include "semantica/linalg.hpp"
#include "semantica/matrix.hpp"
#include "semantica/rng.hpp"

namespace semantica {

// ---------------------------------------------------------------------------
// Hand-crafted toy hierarchy: 4 items, 7 features. Y is scaled so that
// Sigma^yx = 0.7 * pattern, giving singular values
// 0.7*(sqrt7, sqrt3, 1, 1) ~= (1.85203, 1.21244, 0.7, 0.7).
// ---------------------------------------------------------------------------

inline Dataset toy_hierarchy() {
  const Matrix pattern = {{1, 1, 1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 0, 0},
                          {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  Dataset d;
  d.name = "toy_hierarchy";
  d.item_labels = {"Canary", "Salmon", "Oak", "Rose"};
  d.feature_labels = {"Grow", "Move", "Roots", "Fly", "Swim", "Bark", "Petals"};
  d.x = Matrix::identity(4);
  d.y = pattern * (0.7 * 4.0);
  return d;
}

// ---------------------------------------------------------------------------
// Branching diffusion trees.
// ---------------------------------------------------------------------------

struct TreeSpec {
  std::size_t depth = 3;                // number of levels D (root = level 0)
  std::vector<std::size_t> branching;   // B_l for l = 0..D-2
  double flip_prob = 0.15;              // diffusion flip probability
  std::size_t n_features = 1000;
  std::uint64_t seed = 0;

  void validate() const {
    if (depth < 2) throw std::invalid_argument("TreeSpec: depth must be >= 2");
    if (branching.size() != depth - 1)
      throw std::invalid_argument("TreeSpec: need depth-1 branching factors");
    for (std::size_t b : branching)
      if (b < 1) throw std::invalid_argument("TreeSpec: branching factors must be >= 1");
    if (!(flip_prob >= 0.0 && flip_prob <= 0.5))
      throw std::invalid_argument("TreeSpec: flip_prob must lie in [0, 0.5]");
    if (n_features == 0) throw std::invalid_argument("TreeSpec: n_features == 0");
  }

  // Node counts per level: M_0 = 1, M_l = prod B_k.
  std::vector<std::size_t> level_sizes() const {
    std::vector<std::size_t> m(depth, 1);
    for (std::size_t l = 1; l < depth; ++l) m[l] = m[l - 1] * branching[l - 1];
    return m;
  }

  std::size_t leaves() const { return level_sizes().back(); }

  // Level of the deepest common ancestor of two leaves.
  std::size_t ancestor_level(std::size_t i, std::size_t j) const {
    if (i == j) return depth - 1;
    std::size_t level = depth - 1;
    while (i != j) {
      i /= branching[level - 1];
      j /= branching[level - 1];
      --level;
    }
    return level;
  }
};

// Probability that a sum of n Bernoulli(p) trials is odd: (1 - (1-2p)^n)/2.
inline double odd_parity_prob(std::size_t n, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("odd_parity_prob: p outside [0,1]");
  return 0.5 * (1.0 - std::pow(1.0 - 2.0 * p, static_cast<double>(n)));
}

// Expected overlap q_k between leaves whose deepest common ancestor is at
// level k: q_k = 1 - 2 Omega(D-1-k, 2 eps (1-eps)).
inline std::vector<double> analytic_overlaps(const TreeSpec& spec) {
  spec.validate();
  const double p_flip = 2.0 * spec.flip_prob * (1.0 - spec.flip_prob);
  std::vector<double> q(spec.depth);
  for (std::size_t k = 0; k < spec.depth; ++k)
    q[k] = 1.0 - 2.0 * odd_parity_prob(spec.depth - 1 - k, p_flip);
  return q;
}

// The P x P analytic item correlation matrix with entries q_{ancestor level}.
inline Matrix analytic_tree_sigma(const TreeSpec& spec) {
  const std::vector<double> q = analytic_overlaps(spec);
  const std::size_t p = spec.leaves();
  Matrix sigma(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) sigma(i, j) = q[spec.ancestor_level(i, j)];
  return sigma;
}

struct TreeMode {
  std::size_t level;
  double eigenvalue;
  std::size_t degeneracy;
};

// Per-level eigenvalues of the analytic correlation matrix:
// lambda_l = P * sum_{k=l}^{D-1} Delta_k / M_k with Delta_k = q_k - q_{k-1}
// (q_{-1} = 0). Level-l modes have degeneracy M_{l-1} (B_{l-1} - 1), level 0
// is the single uniform mode.
inline std::vector<TreeMode> analytic_tree_eigs(const TreeSpec& spec) {
  const std::vector<double> q = analytic_overlaps(spec);
  const std::vector<std::size_t> m = spec.level_sizes();
  const double p = static_cast<double>(spec.leaves());
  std::vector<TreeMode> modes(spec.depth);
  for (std::size_t l = 0; l < spec.depth; ++l) {
    double acc = 0.0;
    for (std::size_t k = l; k < spec.depth; ++k) {
      const double delta = q[k] - (k == 0 ? 0.0 : q[k - 1]);
      acc += delta / static_cast<double>(m[k]);
    }
    modes[l].level = l;
    modes[l].eigenvalue = p * acc;
    modes[l].degeneracy =
        (l == 0) ? 1 : m[l - 1] * (spec.branching[l - 1] - 1);
  }
  return modes;
}

// Learning timescale per level: tau_l = (1/eps_rate) sqrt(M_l / Delta_l).
inline std::vector<double> tree_timescales(const TreeSpec& spec, double eps_rate) {
  if (eps_rate <= 0.0) throw std::invalid_argument("tree_timescales: eps_rate <= 0");
  const std::vector<double> q = analytic_overlaps(spec);
  const std::vector<std::size_t> m = spec.level_sizes();
  std::vector<double> tau(spec.depth);
  for (std::size_t l = 0; l < spec.depth; ++l) {
    const double delta = q[l] - (l == 0 ? 0.0 : q[l - 1]);
    if (delta <= 0.0)
      throw std::domain_error("tree_timescales: non-positive overlap increment");
    tau[l] = std::sqrt(static_cast<double>(m[l]) / delta) / eps_rate;
  }
  return tau;
}

// Sample +-1 feature vectors by diffusing a root coin flip down the tree.
// Each feature column uses its own RNG substream.
inline Dataset sample_tree_features(const TreeSpec& spec) {
  spec.validate();
  const std::size_t p = spec.leaves();
  Dataset d;
  d.name = "tree";
  d.x = Matrix::identity(p);
  d.y = Matrix(spec.n_features, p);
  for (std::size_t i = 0; i < p; ++i) d.item_labels.push_back("leaf_" + std::to_string(i));
  for (std::size_t f = 0; f < spec.n_features; ++f)
    d.feature_labels.push_back("feat_" + std::to_string(f));

  std::vector<double> cur, next;
  for (std::size_t f = 0; f < spec.n_features; ++f) {
    Rng rng = Rng::stream(spec.seed, f);
    cur.assign(1, rng.sign());
    for (std::size_t l = 1; l < spec.depth; ++l) {
      const std::size_t b = spec.branching[l - 1];
      next.assign(cur.size() * b, 0.0);
      for (std::size_t parent = 0; parent < cur.size(); ++parent)
        for (std::size_t c = 0; c < b; ++c)
          next[parent * b + c] =
              rng.bernoulli(spec.flip_prob) ? -cur[parent] : cur[parent];
      cur.swap(next);
    }
    for (std::size_t i = 0; i < p; ++i) d.y(f, i) = cur[i];
  }
  return d;
}

// ---------------------------------------------------------------------------
// Gaussian Markov random fields over relational graphs.
// ---------------------------------------------------------------------------

struct GmrfEdge {
  std::size_t a, b;
  double length;
};

struct GmrfSpec {
  std::size_t nodes = 0;
  std::vector<GmrfEdge> edges;
  double sigma = 1.0;                  // graph-independent std deviation
  std::vector<std::size_t> item_mask;  // nodes carrying items, in item order
  std::uint64_t seed = 0;

  void validate() const {
    if (nodes == 0) throw std::invalid_argument("GmrfSpec: no nodes");
    if (sigma <= 0.0) throw std::invalid_argument("GmrfSpec: sigma <= 0");
    if (item_mask.empty()) throw std::invalid_argument("GmrfSpec: no items");
    std::vector<bool> seen(nodes, false);
    for (std::size_t n : item_mask) {
      if (n >= nodes) throw std::invalid_argument("GmrfSpec: item node out of range");
      if (seen[n]) throw std::invalid_argument("GmrfSpec: item_mask not injective");
      seen[n] = true;
    }
    for (const GmrfEdge& e : edges) {
      if (e.a >= nodes || e.b >= nodes || e.a == e.b)
        throw std::invalid_argument("GmrfSpec: bad edge");
      if (e.length <= 0.0) throw std::invalid_argument("GmrfSpec: edge length <= 0");
    }
  }
};

// Precision over all nodes: L + (1/sigma^2) I, with L = D - A, A_ij = 1/e_ij.
inline Matrix gmrf_precision(const GmrfSpec& spec) {
  spec.validate();
  Matrix phi(spec.nodes, spec.nodes);
  for (const GmrfEdge& e : spec.edges) {
    const double w = 1.0 / e.length;
    phi(e.a, e.b) -= w;
    phi(e.b, e.a) -= w;
    phi(e.a, e.a) += w;
    phi(e.b, e.b) += w;
  }
  const double reg = 1.0 / (spec.sigma * spec.sigma);
  for (std::size_t i = 0; i < spec.nodes; ++i) phi(i, i) += reg;
  return phi;
}

// Item covariance M Phi~^{-1} M^T (P x P, symmetric PSD).
inline Matrix gmrf_covariance(const GmrfSpec& spec) {
  const Matrix phi = gmrf_precision(spec);
  const std::size_t p = spec.item_mask.size();
  Matrix rhs(spec.nodes, p);
  for (std::size_t j = 0; j < p; ++j) rhs(spec.item_mask[j], j) = 1.0;
  Matrix solved = spd_solve(phi, rhs);  // Phi~^{-1} M^T
  Matrix cov(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) cov(i, j) = solved(spec.item_mask[i], j);
  // Exact symmetrization of solver roundoff.
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      const double v = 0.5 * (cov(i, j) + cov(j, i));
      cov(i, j) = v;
      cov(j, i) = v;
    }
  return cov;
}

// Closed-form covariance eigenvalues of one cluster of size m_b whose items
// hang off a shared hidden hub by edges of length e_b:
//   s1 = (1 + m_b sigma^2/e_b) / ((m_b+1)/e_b + 1/sigma^2)   (shared mode)
//   s2 = 1 / (1/e_b + 1/sigma^2)                             (m_b - 1 fold)
inline std::pair<double, double> cluster_eigs(std::size_t m_b, double e_b,
                                              double sigma) {
  if (m_b == 0 || e_b <= 0.0 || sigma <= 0.0)
    throw std::invalid_argument("cluster_eigs: parameters must be positive");
  const double s2inv = 1.0 / (sigma * sigma);
  const double m = static_cast<double>(m_b);
  const double s1 = (1.0 + m * sigma * sigma / e_b) / ((m + 1.0) / e_b + s2inv);
  const double s2 = 1.0 / (1.0 / e_b + s2inv);
  return {s1, s2};
}

// Graph builders for the structural forms used in the experiments. Items are
// the first nodes in each construction; hidden nodes follow.

inline GmrfSpec make_cluster_graph(const std::vector<std::size_t>& cluster_sizes,
                                   double e_b, double sigma, std::uint64_t seed = 0) {
  GmrfSpec spec;
  spec.sigma = sigma;
  spec.seed = seed;
  std::size_t items = 0;
  for (std::size_t m : cluster_sizes) items += m;
  spec.nodes = items + cluster_sizes.size();
  std::size_t item = 0;
  for (std::size_t c = 0; c < cluster_sizes.size(); ++c) {
    const std::size_t hub = items + c;
    for (std::size_t k = 0; k < cluster_sizes[c]; ++k, ++item) {
      spec.edges.push_back({item, hub, e_b});
      spec.item_mask.push_back(item);
    }
  }
  return spec;
}

inline GmrfSpec make_ring_graph(std::size_t p, double edge_weight, double sigma,
                                std::uint64_t seed = 0) {
  GmrfSpec spec;
  spec.nodes = p;
  spec.sigma = sigma;
  spec.seed = seed;
  for (std::size_t i = 0; i < p; ++i) {
    spec.edges.push_back({i, (i + 1) % p, 1.0 / edge_weight});
    spec.item_mask.push_back(i);
  }
  return spec;
}

// Tree-structured GMRF: internal nodes at every branching point, items at the
// leaves only.
inline GmrfSpec make_tree_graph(const TreeSpec& tree, double edge_length,
                                double sigma, std::uint64_t seed = 0) {
  tree.validate();
  const std::vector<std::size_t> m = tree.level_sizes();
  std::size_t total = 0;
  for (std::size_t lm : m) total += lm;
  const std::size_t leaves = m.back();

  GmrfSpec spec;
  spec.nodes = total;
  spec.sigma = sigma;
  spec.seed = seed;
  // Leaves occupy node ids [0, leaves); internal levels stack after them,
  // root last.
  std::vector<std::size_t> level_base(tree.depth);
  level_base[tree.depth - 1] = 0;
  std::size_t off = leaves;
  for (std::size_t l = tree.depth - 1; l-- > 0;) {
    level_base[l] = off;
    off += m[l];
  }
  for (std::size_t l = 1; l < tree.depth; ++l)
    for (std::size_t n = 0; n < m[l]; ++n)
      spec.edges.push_back({level_base[l] + n,
                            level_base[l - 1] + n / tree.branching[l - 1],
                            edge_length});
  for (std::size_t i = 0; i < leaves; ++i) spec.item_mask.push_back(i);
  return spec;
}

// Draw n_features independent zero-mean Gaussian feature columns with the
// item covariance of the field.
inline Dataset sample_gmrf_features(const GmrfSpec& spec, std::size_t n_features) {
  const Matrix cov = gmrf_covariance(spec);
  const Matrix chol = cholesky(cov);
  const std::size_t p = cov.rows();

  Dataset d;
  d.name = "gmrf";
  d.x = Matrix::identity(p);
  d.y = Matrix(n_features, p);
  for (std::size_t i = 0; i < p; ++i) d.item_labels.push_back("item_" + std::to_string(i));
  for (std::size_t f = 0; f < n_features; ++f)
    d.feature_labels.push_back("feat_" + std::to_string(f));

  std::vector<double> z(p);
  for (std::size_t f = 0; f < n_features; ++f) {
    Rng rng = Rng::stream(spec.seed, f);
    for (std::size_t i = 0; i < p; ++i) z[i] = rng.normal();
    for (std::size_t i = 0; i < p; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k <= i; ++k) s += chol(i, k) * z[k];
      d.y(f, i) = s;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Explicit structural-form matrices: perfect transitive ordering and
// cross-cutting categories.
// ---------------------------------------------------------------------------

inline Dataset ordering_dataset() {
  const std::size_t n = 9;
  Dataset d;
  d.name = "ordering";
  d.x = Matrix::identity(n);
  d.y = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t mu = 0; mu <= i; ++mu) d.y(i, mu) = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    d.item_labels.push_back("rank_" + std::to_string(i));
    d.feature_labels.push_back("dominates_" + std::to_string(i));
  }
  return d;
}

inline Dataset crosscut_dataset() {
  // Hierarchy over pairs of items plus two categories cutting across it; the
  // 1.1 entries separate the hierarchy modes from the cross-cutting ones.
  Dataset d;
  d.name = "crosscut";
  d.y = Matrix{{1, 1, 1, 1, 1, 1, 1, 1},
               {1, 1, 1, 1, 0, 0, 0, 0},
               {0, 0, 0, 0, 1, 1, 1, 1},
               {1.1, 1.1, 0, 0, 0, 0, 0, 0},
               {0, 0, 1.1, 1.1, 0, 0, 0, 0},
               {0, 0, 0, 0, 1.1, 1.1, 0, 0},
               {0, 0, 0, 0, 0, 0, 1.1, 1.1},
               {1.1, 1.1, 0, 0, 0, 0, 0, 0},
               {0, 0, 1.1, 1.1, 0, 0, 0, 0},
               {0, 0, 0, 0, 1.1, 1.1, 0, 0},
               {0, 0, 0, 0, 0, 0, 1.1, 1.1},
               {1, 0, 1, 0, 1, 0, 1, 0},
               {0, 1, 0, 1, 0, 1, 0, 1}};
  d.x = Matrix::identity(8);
  for (std::size_t i = 0; i < 8; ++i) d.item_labels.push_back("item_" + std::to_string(i));
  for (std::size_t f = 0; f < 13; ++f)
    d.feature_labels.push_back("feat_" + std::to_string(f));
  return d;
}

// ---------------------------------------------------------------------------
// Planted noisy categories (random-matrix recovery experiments).
// ---------------------------------------------------------------------------

struct PlantedSpec {
  std::size_t n_objects = 1000;
  std::size_t n_features = 1600;
  std::size_t k_objects = 40;
  std::size_t k_features = 40;
  double p_in = 0.5;
  double p_out = 0.1;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(0.0 < p_out && p_out < p_in && p_in < 1.0))
      throw std::invalid_argument("PlantedSpec: need 0 < q < p < 1");
    if (k_objects > n_objects || k_features > n_features)
      throw std::invalid_argument("PlantedSpec: category larger than environment");
    if (n_objects > n_features)
      throw std::invalid_argument("PlantedSpec: requires c = N_o/N_f <= 1");
  }

  double c_ratio() const {
    return static_cast<double>(n_objects) / static_cast<double>(n_features);
  }
};

// 0/1 feature matrix R (N_f x N_o); the category occupies the first
// k_features rows and first k_objects columns.
inline Matrix planted_category(const PlantedSpec& spec) {
  spec.validate();
  Matrix r(spec.n_features, spec.n_objects);
  for (std::size_t j = 0; j < spec.n_objects; ++j) {
    Rng rng = Rng::stream(spec.seed, j);
    const bool in_obj = j < spec.k_objects;
    for (std::size_t i = 0; i < spec.n_features; ++i) {
      const double p = (in_obj && i < spec.k_features) ? spec.p_in : spec.p_out;
      r(i, j) = rng.bernoulli(p) ? 1.0 : 0.0;
    }
  }
  return r;
}

// Recenter and rescale so background entries have mean 0, variance 1/N_f.
inline Matrix rescale_planted(const Matrix& r, double q, std::size_t n_f) {
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("rescale_planted: bad q");
  Matrix out = r;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_f) * q * (1.0 - q));
  for (double& v : out.data()) v = (v - q) * scale;
  return out;
}

}  // namespace semantica
