#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "semantica/knowledge.hpp"
#include "test_util.hpp"

using namespace semantica;

namespace {

constexpr double kS1 = 1.8520259177452136;
constexpr double kS2 = 1.2124355652982142;

Matrix toy_hidden_at_infinity(const SemanticSvd& a) {
  return hidden_reps(a.svd, 1e-6, 1.0, 1e4, a.data.x);
}

}  // namespace

TEST_CASE("learn_novel_feature: steady state") {
  // Unit hidden vector: w = h and w.h = 1.
  Matrix hidden(3, 2);
  hidden(0, 0) = 1.0;
  hidden(1, 1) = 0.6;
  hidden(2, 1) = 0.8;
  const FastLearnResult r = learn_novel_feature(hidden, 1);
  CHECK(r.weights[1] == Catch::Approx(0.6).margin(1e-12));
  CHECK(r.weights[2] == Catch::Approx(0.8).margin(1e-12));
  CHECK(project_feature(r, hidden, 1) == Catch::Approx(1.0).margin(1e-12));
  // Orthogonal hidden representation projects to zero.
  CHECK(project_feature(r, hidden, 0) == Catch::Approx(0.0).margin(1e-12));

  Matrix dead(3, 1);
  CHECK_THROWS_AS(learn_novel_feature(dead, 0), std::domain_error);
}

TEST_CASE("learn_novel_feature: ODE route agrees with the closed form") {
  const SemanticSvd toy = analyze(toy_hierarchy());
  const Matrix h = toy_hidden_at_infinity(toy);
  const FastLearnResult closed = learn_novel_feature(h, 0);
  // ||h||^2 ~= 1.116 so 30 tau_f is far past convergence.
  const FastLearnResult ode = learn_novel_feature_ode(h, 0, 1.0, 30.0);
  for (std::size_t a = 0; a < closed.weights.size(); ++a)
    CHECK(ode.weights[a] == Catch::Approx(closed.weights[a]).margin(1e-6));

  // Convergence of the residual (1 - w.h)^2 is monotone.
  double prev = 1.0;
  for (double t_end : {0.5, 1.0, 2.0, 4.0}) {
    const FastLearnResult w = learn_novel_feature_ode(h, 0, 1.0, t_end, 2000);
    double dot_wh = 0.0;
    for (std::size_t a = 0; a < w.weights.size(); ++a) dot_wh += w.weights[a] * h(a, 0);
    const double res = (1.0 - dot_wh) * (1.0 - dot_wh);
    CHECK(res < prev + 1e-12);
    prev = res;
  }
}

TEST_CASE("project_feature: toy values at the end of learning") {
  const SemanticSvd toy = analyze(toy_hierarchy());
  const Matrix h = toy_hidden_at_infinity(toy);
  const FastLearnResult canary = learn_novel_feature(h, 0);

  // Hand values from the mode sums.
  const double den = kS1 / 4.0 + kS2 / 4.0 + 0.35;
  const double salmon = (kS1 / 4.0 + kS2 / 4.0 - 0.35) / den;
  const double oak = (kS1 / 4.0 - kS2 / 4.0) / den;
  CHECK(project_feature(canary, h, 0) == Catch::Approx(1.0).margin(1e-10));
  CHECK(project_feature(canary, h, 1) == Catch::Approx(salmon).margin(1e-9));
  CHECK(project_feature(canary, h, 1) == Catch::Approx(0.37282).margin(1e-4));
  CHECK(project_feature(canary, h, 2) == Catch::Approx(oak).margin(1e-9));
  CHECK(project_feature(canary, h, 2) == Catch::Approx(0.14326).margin(1e-4));
  CHECK(project_feature(canary, h, 3) == Catch::Approx(oak).margin(1e-9));
}

TEST_CASE("projection equals the appended-weights network output") {
  const SemanticSvd toy = analyze(toy_hierarchy());
  const double t = 2.5, a0 = 1e-4;
  const Matrix h = hidden_reps(toy.svd, a0, 1.0, t, toy.data.x);
  const FastLearnResult r = learn_novel_feature(h, 2);

  // Extend W2 with the new row w and read the composite map's new row.
  const DeepNet net = min_norm_weights(toy, t, std::nullopt, a0, 1.0);
  Matrix w2_ext(net.w2.rows() + 1, net.w2.cols());
  for (std::size_t i = 0; i < net.w2.rows(); ++i)
    for (std::size_t j = 0; j < net.w2.cols(); ++j) w2_ext(i, j) = net.w2(i, j);
  for (std::size_t j = 0; j < net.w2.cols(); ++j)
    w2_ext(net.w2.rows(), j) = r.weights[j];
  const Matrix composite = w2_ext * net.w1;
  for (std::size_t item = 0; item < 4; ++item)
    CHECK(project_feature(r, h, item) ==
          Catch::Approx(composite(net.w2.rows(), item)).margin(1e-12));
}

TEST_CASE("learn_novel_item and project_item") {
  const SemanticSvd toy = analyze(toy_hierarchy());
  const double t = 1e4, a0 = 1e-6, tau = 1.0;

  // Projection of the anchoring feature itself is one.
  const FastLearnResult blick = learn_novel_item(toy, 1, t, a0, tau);  // "Move"
  CHECK(project_item(blick, 1, toy, t, a0, tau) == Catch::Approx(1.0).margin(1e-10));

  // Projection of "Fly" onto an item anchored at "Move" lies in (0, 1).
  const double fly = project_item(blick, 3, toy, t, a0, tau);
  CHECK(fly > 0.0);
  CHECK(fly < 1.0);
  // Direct evaluation from the SVD: (h_Fly . h_Move) / ||h_Move||^2.
  const std::vector<double> h_move = feature_hidden_rep(toy, 1, t, a0, tau);
  const std::vector<double> h_fly = feature_hidden_rep(toy, 3, t, a0, tau);
  CHECK(fly == Catch::Approx(dot(h_fly, h_move) / dot(h_move, h_move)).margin(1e-12));

  // Features with disjoint mode support project to zero.
  Dataset split;
  split.name = "split";
  split.x = Matrix::identity(4);
  split.y = Matrix{{2, 2, 0, 0}, {0, 0, 3, 3}};
  split.item_labels = {"a", "b", "c", "d"};
  split.feature_labels = {"f0", "f1"};
  const SemanticSvd sa = analyze(split);
  const FastLearnResult anchored = learn_novel_item(sa, 0, t, a0, tau);
  CHECK(project_item(anchored, 1, sa, t, a0, tau) == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("projection_over_time") {
  const Dataset toy = toy_hierarchy();
  SECTION("toy asymptote matches the hand values") {
    const Matrix proj = projection_over_time(toy, 0, {200.0}, 1e-6, 1.0);
    CHECK(proj(0, 0) == Catch::Approx(1.0).margin(1e-9));
    CHECK(proj(0, 1) == Catch::Approx(0.37282).margin(1e-4));
    CHECK(proj(0, 2) == Catch::Approx(0.14326).margin(1e-4));
    CHECK(proj(0, 3) == Catch::Approx(0.14326).margin(1e-4));
  }
  SECTION("out-of-subtree projection narrows after the first transition") {
    TreeSpec spec;
    spec.depth = 3;
    spec.branching = {2, 2};
    spec.flip_prob = 0.15;
    spec.n_features = 1024;
    // Exact dataset realizing the analytic tree correlations.
    const Matrix chol = cholesky(analytic_tree_sigma(spec));
    Dataset d;
    d.name = "tree_exact";
    d.x = Matrix::identity(4);
    d.y = Matrix(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) d.y(i, j) = 32.0 * chol(j, i);
    d.item_labels = {"l0", "l1", "l2", "l3"};
    d.feature_labels = {"f0", "f1", "f2", "f3"};

    std::vector<double> times;
    for (double t = 2.0; t <= 6.0; t += 0.25) times.push_back(t);
    const Matrix proj = projection_over_time(d, 0, times, 1e-6, 1.0);
    for (std::size_t k = 1; k < times.size(); ++k) {
      CHECK(proj(k, 2) <= proj(k - 1, 2) + 1e-9);
      CHECK(proj(k, 3) <= proj(k - 1, 3) + 1e-9);
    }
    // Within-subtree projection stays above the cross-branch one.
    for (std::size_t k = 0; k < times.size(); ++k) CHECK(proj(k, 1) > proj(k, 2));

    // Just after the uniform mode is learned and before finer modes rise,
    // the projection is nearly uniform across all items: representations are
    // still undifferentiated.
    const SemanticSvd sa = analyze(d);
    const double s0 = sa.svd.s[0], s1 = sa.svd.s[1];
    const double a0 = 1e-10;
    // Midpoint of the two half-rise times ln(s/a0)/(2s).
    const double t_broad = 0.5 * (std::log(s0 / a0) / (2.0 * s0) +
                                  std::log(s1 / a0) / (2.0 * s1));
    const Matrix broad = projection_over_time(d, 0, {t_broad}, a0, 1.0);
    for (std::size_t j = 0; j < 4; ++j) CHECK(broad(0, j) > 0.8);
  }
}

TEST_CASE("neural and behavioral similarity") {
  const Matrix q = testutil::random_orthonormal(6, 4, 3);
  CHECK(testutil::max_offdiag_identity_dev(neural_similarity(q)) < 1e-12);

  const SemanticSvd toy = analyze(toy_hierarchy());
  const Matrix h = toy_hidden_at_infinity(toy);
  const Matrix sigma_h = neural_similarity(h);
  const EigResult eig = sym_eig(sigma_h);
  CHECK(eig.values[0] == Catch::Approx(kS1).margin(1e-9));
  CHECK(eig.values[1] == Catch::Approx(kS2).margin(1e-9));
  CHECK(eig.values[2] == Catch::Approx(0.7).margin(1e-9));
  CHECK(eig.values[3] == Catch::Approx(0.7).margin(1e-9));
}

TEST_CASE("similarity relation: min-norm network is exact") {
  const SemanticSvd toy = analyze(toy_hierarchy());
  const DeepNet net = min_norm_weights(toy, 1e4, 77, 1e-6, 1.0, 16);
  const Matrix hidden = net.w1 * toy.data.x;
  const Matrix yhat = net.composite() * toy.data.x;
  const SimilarityPair pair{neural_similarity(hidden), behavioral_similarity(yhat)};
  CHECK(similarity_relation_check(pair) < 1e-10);

  // Shared eigenvectors with squared eigenvalues; the degenerate pair is
  // compared as a subspace.
  const EigResult eh = sym_eig(pair.neural);
  const EigResult ey = sym_eig(pair.behavioral);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(ey.values[i] == Catch::Approx(eh.values[i] * eh.values[i]).epsilon(1e-8));
  auto subspace_residual = [&](std::size_t lo, std::size_t hi) {
    double worst = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      std::vector<double> x(4), proj(4, 0.0);
      for (std::size_t i = 0; i < 4; ++i) x[i] = ey.vectors(i, j);
      for (std::size_t r = lo; r < hi; ++r) {
        double c = 0.0;
        for (std::size_t i = 0; i < 4; ++i) c += eh.vectors(i, r) * x[i];
        for (std::size_t i = 0; i < 4; ++i) proj[i] += c * eh.vectors(i, r);
      }
      double res = 0.0;
      for (std::size_t i = 0; i < 4; ++i) res += (x[i] - proj[i]) * (x[i] - proj[i]);
      worst = std::max(worst, std::sqrt(res));
    }
    return worst;
  };
  CHECK(subspace_residual(0, 1) < 1e-8);  // leading mode
  CHECK(subspace_residual(1, 2) < 1e-8);
  CHECK(subspace_residual(2, 4) < 1e-8);  // degenerate pair
}

TEST_CASE("min_norm_weights: map, norm, and gauge properties") {
  const SemanticSvd toy = analyze(toy_hierarchy());
  const double t = 1e4, a0 = 1e-6;

  SECTION("identity gauge reproduces the map with minimal norm") {
    const DeepNet net = min_norm_weights(toy, t, std::nullopt, a0, 1.0);
    CHECK(max_abs_diff(net.composite(), toy.data.sigma_yx()) < 1e-10);
    const double total = frobenius(net.w1) * frobenius(net.w1) +
                         frobenius(net.w2) * frobenius(net.w2);
    CHECK(total == Catch::Approx(8.9289230).margin(1e-6));  // 2 sum s_alpha
  }
  SECTION("rotated gauges implement the same map with the same norm") {
    const DeepNet base = min_norm_weights(toy, t, std::nullopt, a0, 1.0, 16);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      const DeepNet rot = min_norm_weights(toy, t, seed, a0, 1.0, 16);
      CHECK(max_abs_diff(rot.composite(), base.composite()) < 1e-10);
      const double n_base = frobenius(base.w1) * frobenius(base.w1) +
                            frobenius(base.w2) * frobenius(base.w2);
      const double n_rot = frobenius(rot.w1) * frobenius(rot.w1) +
                           frobenius(rot.w2) * frobenius(rot.w2);
      CHECK(n_rot == Catch::Approx(n_base).margin(1e-9));
      // Hidden similarity is gauge invariant.
      CHECK(max_abs_diff(neural_similarity(rot.w1 * toy.data.x),
                         neural_similarity(base.w1 * toy.data.x)) < 1e-10);
    }
  }
  SECTION("non-orthogonal gauges strictly inflate the norm") {
    const DeepNet base = min_norm_weights(toy, t, std::nullopt, a0, 1.0, 8);
    const double n_base = frobenius(base.w1) * frobenius(base.w1) +
                          frobenius(base.w2) * frobenius(base.w2);
    // Q gauge: W1 = Q [sqrtA; 0] V^T, W2 = U [sqrtA 0] Q^{-1}.
    for (unsigned trial = 0; trial < 20; ++trial) {
      const Matrix q = testutil::random_matrix(8, 8, 500 + trial);
      // Invert via two spd solves: Q^{-1} = (Q^T Q)^{-1} Q^T.
      const Matrix qtq = at_mul(q, q);
      const Matrix qinv = spd_solve(qtq, q.transposed());
      Matrix w1(8, 4), w2(7, 8);
      const std::vector<double> strengths = mode_strengths(toy.svd, a0, 1.0, t);
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
          double acc = 0.0;
          for (std::size_t alpha = 0; alpha < 4; ++alpha)
            acc += q(i, alpha) * std::sqrt(strengths[alpha]) * toy.svd.v(j, alpha);
          w1(i, j) = acc;
        }
      for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
          double acc = 0.0;
          for (std::size_t alpha = 0; alpha < 4; ++alpha)
            acc += toy.svd.u(i, alpha) * std::sqrt(strengths[alpha]) * qinv(alpha, j);
          w2(i, j) = acc;
        }
      // Same composite map, larger total norm.
      CHECK(max_abs_diff(w2 * w1, base.composite()) < 1e-8);
      const double n_q =
          frobenius(w1) * frobenius(w1) + frobenius(w2) * frobenius(w2);
      CHECK(n_q > n_base + 1e-6);
    }
  }
}

TEST_CASE("rsa_invariance: small init conserves similarity, large init does not") {
  const Dataset toy = toy_hierarchy();
  TrainConfig base;
  base.learning_rate = 0.01;
  base.epochs = 1000;
  base.n_hidden = 32;

  const RsaResult small = rsa_invariance(toy, {1, 2}, 0.0002, base);
  CHECK(small.distances(0, 1) < 0.05);
  CHECK(small.relation_residual[0] < 0.05);
  CHECK(small.relation_residual[1] < 0.05);

  const RsaResult large = rsa_invariance(toy, {1, 2}, 1.0, base);
  CHECK(large.distances(0, 1) > 0.2);
  CHECK(large.relation_residual[0] > 0.2);

  const RsaResult same = rsa_invariance(toy, {5, 5}, 0.0002, base);
  CHECK(same.distances(0, 1) == 0.0);
}
