#pragma once

// The semantica command-line tool: dataset generation, analytic solving,
// numerical training, analytic-vs-simulation comparison, coherence sweeps,
// inductive projection, RSA experiments, MDS trajectory plots and a bundled
// report. Exit codes: 0 success, 2 usage/input error, 3 numeric failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semantica/datagen.hpp"
#include "semantica/dataset.hpp"
#include "semantica/dynamics.hpp"
#include "semantica/knowledge.hpp"
#include "semantica/linalg.hpp"
#include "semantica/semantics.hpp"
#include "svg_plot.hpp"

namespace semantica::cli {

inline constexpr const char* kVersion = "semantica 0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string join_args(const std::vector<std::string>& args) {
  std::string s = "semantica";
  for (const std::string& a : args) {
    s += ' ';
    s += a;
  }
  return s;
}

inline std::ofstream open_csv(const std::string& path, const std::string& provenance,
                              std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open for writing: " + path);
  out << "# provenance: " << provenance << " | seed=" << seed << " | version=" << kVersion
      << "\n";
  return out;
}

inline std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(static_cast<std::size_t>(std::stoull(tok)));
  }
  if (out.empty()) throw UsageError("expected a comma-separated list, got: " + text);
  return out;
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  if (out.empty()) throw UsageError("expected a comma-separated list, got: " + text);
  return out;
}

inline Dataset load_dataset_checked(const std::string& path) {
  if (!std::filesystem::exists(path)) throw UsageError("dataset file not found: " + path);
  return load_dataset(path);
}

// Geometric time grid, dense early and sparse late, with t = 0 prepended.
inline std::vector<double> time_grid(double tmax, std::size_t points, double tmin) {
  if (tmax <= 0.0 || points < 2) throw UsageError("need tmax > 0 and points >= 2");
  if (tmin <= 0.0) tmin = tmax / 1000.0;
  std::vector<double> t{0.0};
  const double ratio = std::pow(tmax / tmin, 1.0 / static_cast<double>(points - 1));
  double v = tmin;
  for (std::size_t k = 0; k < points; ++k, v *= ratio) t.push_back(v);
  t.back() = tmax;
  return t;
}

inline std::vector<double> top_singular_values(const Dataset& d, std::size_t k) {
  const EigResult eig = sym_eig_top(d.sigma_y(), std::min(k, d.items()));
  std::vector<double> s(eig.values.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(std::max(0.0, eig.values[i]));
  return s;
}

inline std::size_t resolve_item(const Dataset& d, const std::string& key) {
  for (std::size_t i = 0; i < d.item_labels.size(); ++i)
    if (d.item_labels[i] == key) return i;
  try {
    const std::size_t idx = static_cast<std::size_t>(std::stoull(key));
    if (idx < d.items()) return idx;
  } catch (...) {
  }
  throw UsageError("unknown item: " + key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenParams {
  std::string generator;
  std::string out = "dataset.json";
  // tree
  std::size_t depth = 3;
  std::string branch = "2,2";
  double flip = 0.15;
  std::size_t features = 10000;
  std::uint64_t seed = 0;
  // gmrf
  std::string sizes = "4,2,3";
  double edge = 0.24;
  double sigma = 4.0;
  std::size_t items = 20;
  double weight = 0.7;
  // planted
  std::size_t n_objects = 1000, n_features = 1600, k_objects = 40, k_features = 40;
  double p_in = 0.5, p_out = 0.1;
};

inline Dataset build_dataset(const GenParams& g) {
  if (g.generator == "toy") return toy_hierarchy();
  if (g.generator == "ordering") return ordering_dataset();
  if (g.generator == "crosscut") return crosscut_dataset();
  if (g.generator == "tree") {
    TreeSpec spec;
    spec.depth = g.depth;
    spec.branching = detail::parse_size_list(g.branch);
    spec.flip_prob = g.flip;
    spec.n_features = g.features;
    spec.seed = g.seed;
    return sample_tree_features(spec);
  }
  if (g.generator == "gmrf-cluster") {
    const GmrfSpec spec =
        make_cluster_graph(detail::parse_size_list(g.sizes), g.edge, g.sigma, g.seed);
    Dataset d = sample_gmrf_features(spec, g.features);
    d.name = "gmrf-cluster";
    return d;
  }
  if (g.generator == "gmrf-ring") {
    const GmrfSpec spec = make_ring_graph(g.items, g.weight, g.sigma, g.seed);
    Dataset d = sample_gmrf_features(spec, g.features);
    d.name = "gmrf-ring";
    return d;
  }
  if (g.generator == "gmrf-tree") {
    TreeSpec shape;
    shape.depth = g.depth;
    shape.branching = detail::parse_size_list(g.branch);
    shape.flip_prob = 0.1;
    shape.n_features = 1;
    const GmrfSpec spec = make_tree_graph(shape, g.edge, g.sigma, g.seed);
    Dataset d = sample_gmrf_features(spec, g.features);
    d.name = "gmrf-tree";
    return d;
  }
  if (g.generator == "planted") {
    PlantedSpec spec;
    spec.n_objects = g.n_objects;
    spec.n_features = g.n_features;
    spec.k_objects = g.k_objects;
    spec.k_features = g.k_features;
    spec.p_in = g.p_in;
    spec.p_out = g.p_out;
    spec.seed = g.seed;
    spec.validate();
    Dataset d;
    d.name = "planted";
    d.x = Matrix::identity(spec.n_objects);
    d.y = rescale_planted(planted_category(spec), spec.p_out, spec.n_features);
    for (std::size_t i = 0; i < spec.n_objects; ++i)
      d.item_labels.push_back("obj_" + std::to_string(i));
    for (std::size_t f = 0; f < spec.n_features; ++f)
      d.feature_labels.push_back("feat_" + std::to_string(f));
    return d;
  }
  throw UsageError("unknown generator: " + g.generator);
}

inline void cmd_gen(const GenParams& g, std::ostream& log) {
  const Dataset d = build_dataset(g);
  save_dataset(d, g.out);
  log << "wrote " << g.out << ": " << d.features() << " features x " << d.items()
      << " items (" << d.name << ")\n";
  log << "top singular values of Sigma^yx:";
  for (double s : detail::top_singular_values(d, 5)) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.6g", s);
    log << buf;
  }
  log << "\n";
}

// ---------------------------------------------------------------------------
// solve / train / compare
// ---------------------------------------------------------------------------

struct SolveParams {
  std::string dataset;
  std::string arch = "deep";
  double a0 = 1e-4;
  double tau = 1.0;
  double tmax = 12.0;
  double tmin = 0.0;
  std::size_t points = 200;
  std::string out = "trajectory.csv";
  std::string svg;
};

inline void cmd_solve(const SolveParams& p, const std::string& provenance,
                      std::ostream& log) {
  const Dataset d = detail::load_dataset_checked(p.dataset);
  const SvdResult f = svd(d.sigma_yx());
  const double trace_sy = trace(d.sigma_y());
  const std::vector<double> times = detail::time_grid(p.tmax, p.points, p.tmin);
  const bool deep = p.arch == "deep";
  if (!deep && p.arch != "shallow") throw UsageError("--arch must be deep or shallow");

  std::ofstream out = detail::open_csv(p.out, provenance, 0);
  out << "t";
  for (std::size_t j = 0; j < f.s.size(); ++j) out << ",mode_" << (j + 1);
  out << ",sse\n";
  std::vector<std::vector<double>> series(f.s.size());
  for (double t : times) {
    std::vector<double> a(f.s.size());
    for (std::size_t j = 0; j < f.s.size(); ++j) {
      a[j] = deep ? (f.s[j] > 0.0 ? deep_mode_trajectory(f.s[j], p.a0, p.tau, t) : 0.0)
                  : shallow_mode_trajectory(f.s[j], p.a0, p.tau, t);
      series[j].push_back(a[j]);
    }
    out << detail::fmt17(t);
    for (double v : a) out << ',' << detail::fmt17(v);
    out << ',' << detail::fmt17(sse_curve(f.s, trace_sy, a, d.items())) << "\n";
  }
  log << "wrote " << p.out << " (" << times.size() << " timepoints, " << f.s.size()
      << " modes)\n";

  if (!p.svg.empty()) {
    SvgPlot plot(std::string(deep ? "deep" : "shallow") + " analytic trajectories",
                 "t (units of tau)", "effective singular value");
    for (std::size_t j = 0; j < f.s.size() && j < 12; ++j)
      plot.add_series("mode " + std::to_string(j + 1), times, series[j]);
    plot.write(p.svg);
    log << "wrote " << p.svg << "\n";
  }
}

struct TrainParams {
  std::string dataset;
  std::string arch = "deep";
  std::string regime = "batch";
  std::string init = "balanced";
  double lr = 0.01;
  std::size_t epochs = 500;
  double a0 = 1e-4;
  std::uint64_t seed = 0;
  std::size_t record_every = 1;
  std::size_t n_hidden = 0;
  std::string out = "training.csv";
  std::string svg;
};

inline TrainConfig make_train_config(const TrainParams& p) {
  TrainConfig config;
  config.learning_rate = p.lr;
  config.epochs = p.epochs;
  config.init_scale = p.a0;
  config.seed = p.seed;
  config.record_every = p.record_every;
  config.n_hidden = p.n_hidden;
  if (p.regime == "batch")
    config.regime = Regime::batch;
  else if (p.regime == "online")
    config.regime = Regime::online;
  else
    throw UsageError("--regime must be batch or online");
  if (p.init == "balanced")
    config.init = InitMode::balanced;
  else if (p.init == "gaussian")
    config.init = InitMode::gaussian;
  else
    throw UsageError("--init must be balanced or gaussian");
  return config;
}

inline Trajectory run_training(const Dataset& d, const TrainParams& p) {
  const TrainConfig config = make_train_config(p);
  if (p.arch == "deep") return train_deep(d, config).second;
  if (p.arch == "shallow") return train_shallow(d, config).second;
  throw UsageError("--arch must be deep or shallow");
}

inline void cmd_train(const TrainParams& p, const std::string& provenance,
                      std::ostream& log) {
  const Dataset d = detail::load_dataset_checked(p.dataset);
  const Trajectory traj = run_training(d, p);
  for (const std::string& w : traj.warnings) log << "warning: " << w << "\n";
  std::ofstream out = detail::open_csv(p.out, provenance, p.seed);
  trajectory_to_csv(traj, out);
  log << "wrote " << p.out << " (" << traj.times.size() << " records)\n";
  if (!p.svg.empty()) {
    SvgPlot plot("trained trajectories (" + p.arch + ", " + p.regime + ")",
                 "t (units of tau)", "effective singular value");
    for (std::size_t j = 0; j < traj.eff_singular_values.cols() && j < 12; ++j) {
      std::vector<double> ys(traj.times.size());
      for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = traj.eff_singular_values(i, j);
      plot.add_series("mode " + std::to_string(j + 1), traj.times, ys);
    }
    plot.write(p.svg);
    log << "wrote " << p.svg << "\n";
  }
}

inline void cmd_compare(const TrainParams& p, const std::string& provenance,
                        std::ostream& log) {
  const Dataset d = detail::load_dataset_checked(p.dataset);
  const SvdResult f = svd(d.sigma_yx());
  const Trajectory traj = run_training(d, p);
  const bool deep = p.arch == "deep";
  const std::size_t modes = f.s.size();

  std::vector<double> worst(modes, 0.0);
  std::ofstream out = detail::open_csv(p.out, provenance, p.seed);
  out << "t";
  for (std::size_t j = 0; j < modes; ++j) out << ",sim_mode_" << (j + 1);
  for (std::size_t j = 0; j < modes; ++j) out << ",ana_mode_" << (j + 1);
  out << "\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << detail::fmt17(traj.times[i]);
    for (std::size_t j = 0; j < modes; ++j)
      out << ',' << detail::fmt17(traj.eff_singular_values(i, j));
    for (std::size_t j = 0; j < modes; ++j) {
      const double ana =
          deep ? (f.s[j] > 0.0 ? deep_mode_trajectory(f.s[j], p.a0, 1.0, traj.times[i])
                               : 0.0)
               : shallow_mode_trajectory(f.s[j], p.a0, 1.0, traj.times[i]);
      out << ',' << detail::fmt17(ana);
      worst[j] = std::max(worst[j], std::abs(ana - traj.eff_singular_values(i, j)));
    }
    out << "\n";
  }
  double overall = 0.0;
  log << "max |simulation - analytic| per mode:";
  for (std::size_t j = 0; j < modes; ++j) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.3g", worst[j]);
    log << buf;
    overall = std::max(overall, worst[j]);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "\noverall max deviation: %.6g\n", overall);
  log << buf;
  log << "wrote " << p.out << "\n";

  if (!p.svg.empty()) {
    SvgPlot plot("simulation vs analytic (" + p.arch + ")", "t (units of tau)",
                 "effective singular value");
    for (std::size_t j = 0; j < modes && j < 6; ++j) {
      std::vector<double> sim(traj.times.size()), ana(traj.times.size());
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        sim[i] = traj.eff_singular_values(i, j);
        ana[i] = deep ? deep_mode_trajectory(f.s[j], p.a0, 1.0, traj.times[i])
                      : shallow_mode_trajectory(f.s[j], p.a0, 1.0, traj.times[i]);
      }
      plot.add_series("sim " + std::to_string(j + 1), traj.times, sim);
      plot.add_series("analytic " + std::to_string(j + 1), traj.times, ana);
    }
    plot.write(p.svg);
    log << "wrote " << p.svg << "\n";
  }
}

// ---------------------------------------------------------------------------
// coherence
// ---------------------------------------------------------------------------

struct CoherenceParams {
  std::size_t n_objects = 500, n_features = 800, k_objects = 40, k_features = 40;
  double q = 0.1;
  double cmin = 0.25, cmax = 4.0;
  std::size_t points = 8;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string out = "coherence.csv";
  std::string svg;
};

inline PlantedSpec planted_for_coherence(const CoherenceParams& p, double coherence,
                                         std::uint64_t seed) {
  PlantedSpec spec;
  spec.n_objects = p.n_objects;
  spec.n_features = p.n_features;
  spec.k_objects = p.k_objects;
  spec.k_features = p.k_features;
  spec.p_out = p.q;
  const double gap2 = coherence * p.q * (1.0 - p.q) *
                      std::sqrt(static_cast<double>(p.n_objects) *
                                static_cast<double>(p.n_features)) /
                      (static_cast<double>(p.k_objects) *
                       static_cast<double>(p.k_features));
  spec.p_in = p.q + std::sqrt(gap2);
  if (spec.p_in >= 1.0)
    throw UsageError("coherence value needs p > 1; shrink cmax or grow the category");
  spec.seed = seed;
  return spec;
}

inline std::vector<CoherenceResult> run_coherence_sweep(const CoherenceParams& p,
                                                        std::ostream& log) {
  std::vector<double> grid;
  if (p.points < 1) throw UsageError("--points must be >= 1");
  if (p.points == 1) {
    grid.push_back(p.cmin);
  } else {
    const double ratio = std::pow(p.cmax / p.cmin, 1.0 / static_cast<double>(p.points - 1));
    double c = p.cmin;
    for (std::size_t k = 0; k < p.points; ++k, c *= ratio) grid.push_back(c);
    grid.back() = p.cmax;
  }
  std::vector<CoherenceResult> results;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const PlantedSpec spec = planted_for_coherence(p, grid[k], p.seed + 1000 * k);
    results.push_back(coherence_experiment(spec, p.trials));
    char buf[128];
    std::snprintf(buf, sizeof(buf), "C=%.4g: emp u2=%.4f v2=%.4f (pred %.4f %.4f)\n",
                  results.back().coherence, results.back().empirical_u2,
                  results.back().empirical_v2, results.back().predicted_u2,
                  results.back().predicted_v2);
    log << buf;
  }
  return results;
}

inline void cmd_coherence(const CoherenceParams& p, const std::string& provenance,
                          std::ostream& log) {
  const std::vector<CoherenceResult> results = run_coherence_sweep(p, log);
  std::ofstream out = detail::open_csv(p.out, provenance, p.seed);
  out << "C,c,pred_u2,pred_v2,emp_u2,emp_v2,stderr_u2,stderr_v2\n";
  for (const CoherenceResult& r : results) {
    out << detail::fmt17(r.coherence) << ',' << detail::fmt17(r.c_ratio) << ','
        << detail::fmt17(r.predicted_u2) << ',' << detail::fmt17(r.predicted_v2) << ','
        << detail::fmt17(r.empirical_u2) << ',' << detail::fmt17(r.empirical_v2) << ','
        << detail::fmt17(r.stderr_u2) << ',' << detail::fmt17(r.stderr_v2) << "\n";
  }
  log << "wrote " << p.out << "\n";

  if (!p.svg.empty()) {
    SvgPlot plot("category recovery vs coherence", "coherence C", "squared overlap");
    std::vector<double> cs, pu, pv, eu, ev;
    const double c_ratio = static_cast<double>(p.n_objects) / p.n_features;
    for (double c = p.cmin; c <= p.cmax * 1.0001; c += (p.cmax - p.cmin) / 120.0) {
      const auto [u2, v2] = predicted_overlaps(c, c_ratio);
      cs.push_back(c);
      pu.push_back(u2);
      pv.push_back(v2);
    }
    plot.add_series("theory u^2", cs, pu);
    plot.add_series("theory v^2", cs, pv);
    std::vector<double> grid_c;
    for (const CoherenceResult& r : results) {
      grid_c.push_back(r.coherence);
      eu.push_back(r.empirical_u2);
      ev.push_back(r.empirical_v2);
    }
    plot.add_points("empirical u^2", grid_c, eu);
    plot.add_points("empirical v^2", grid_c, ev);
    plot.write(p.svg);
    log << "wrote " << p.svg << "\n";
  }
}

// ---------------------------------------------------------------------------
// project / rsa / mds
// ---------------------------------------------------------------------------

struct ProjectParams {
  std::string dataset;
  std::string anchor = "0";
  std::string times = "0.5,1,2,4";
  double a0 = 1e-6;
  double tau = 1.0;
  std::string out = "projection.csv";
};

inline void cmd_project(const ProjectParams& p, const std::string& provenance,
                        std::ostream& log) {
  const Dataset d = detail::load_dataset_checked(p.dataset);
  const std::size_t anchor = detail::resolve_item(d, p.anchor);
  const std::vector<double> times = detail::parse_double_list(p.times);
  const Matrix proj = projection_over_time(d, anchor, times, p.a0, p.tau);
  std::ofstream out = detail::open_csv(p.out, provenance, 0);
  out << "t";
  for (const std::string& label : d.item_labels) out << ',' << label;
  out << "\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    out << detail::fmt17(times[k]);
    for (std::size_t j = 0; j < d.items(); ++j) out << ',' << detail::fmt17(proj(k, j));
    out << "\n";
  }
  log << "wrote " << p.out << " (anchor " << d.item_labels[anchor] << ")\n";
}

struct RsaParams {
  std::string dataset;
  std::size_t seeds = 4;
  std::string seed_list;
  double a0 = 0.0002;
  double lr = 0.01;
  std::size_t epochs = 1000;
  std::size_t n_hidden = 32;
  std::string out = "rsa.csv";
  std::string sims_out;
};

inline RsaResult run_rsa(const RsaParams& p, const Dataset& d) {
  std::vector<std::uint64_t> seeds;
  if (!p.seed_list.empty())
    for (std::size_t s : detail::parse_size_list(p.seed_list)) seeds.push_back(s);
  else
    for (std::size_t s = 1; s <= p.seeds; ++s) seeds.push_back(s);
  TrainConfig base;
  base.learning_rate = p.lr;
  base.epochs = p.epochs;
  base.n_hidden = p.n_hidden;
  return rsa_invariance(d, seeds, p.a0, base);
}

inline void write_labeled_matrix_csv(std::ofstream& out, const Matrix& m,
                                     const std::vector<std::string>& labels) {
  out << "item";
  for (const std::string& l : labels) out << ',' << l;
  out << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < m.cols(); ++j) out << ',' << detail::fmt17(m(i, j));
    out << "\n";
  }
}

inline void cmd_rsa(const RsaParams& p, const std::string& provenance,
                    std::ostream& log) {
  const Dataset d = detail::load_dataset_checked(p.dataset);
  const RsaResult r = run_rsa(p, d);
  std::ofstream out = detail::open_csv(p.out, provenance, 0);
  out << "run_a,run_b,distance\n";
  double max_pairwise = 0.0;
  for (std::size_t a = 0; a < r.distances.rows(); ++a)
    for (std::size_t b = 0; b < r.distances.cols(); ++b) {
      out << a << ',' << b << ',' << detail::fmt17(r.distances(a, b)) << "\n";
      if (a != b) max_pairwise = std::max(max_pairwise, r.distances(a, b));
    }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max pairwise hidden-similarity distance: %.6g\n",
                max_pairwise);
  log << buf;
  for (std::size_t k = 0; k < r.relation_residual.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "run %zu behavioral=(neural)^2 residual: %.6g\n", k,
                  r.relation_residual[k]);
    log << buf;
  }
  log << "wrote " << p.out << "\n";

  if (!p.sims_out.empty()) {
    for (std::size_t k = 0; k < r.sigma_h.size(); ++k) {
      const std::string hp = p.sims_out + "_run" + std::to_string(k) + "_sigma_h.csv";
      std::ofstream hout = detail::open_csv(hp, provenance, 0);
      write_labeled_matrix_csv(hout, r.sigma_h[k], d.item_labels);
      const std::string yp = p.sims_out + "_run" + std::to_string(k) + "_sigma_yhat.csv";
      std::ofstream yout = detail::open_csv(yp, provenance, 0);
      write_labeled_matrix_csv(yout, r.sigma_yhat[k], d.item_labels);
      log << "wrote " << hp << ", " << yp << "\n";
    }
  }
}

struct MdsParams {
  std::string dataset;
  double a0 = 1e-6;
  double tau = 1.0;
  double tmax = 8.0;
  std::size_t points = 60;
  std::size_t dim = 2;
  std::string out = "mds.csv";
  std::string svg = "mds.svg";
};

inline void cmd_mds(const MdsParams& p, const std::string& provenance,
                    std::ostream& log) {
  const Dataset d = detail::load_dataset_checked(p.dataset);
  const SvdResult f = svd(d.sigma_yx());
  const std::vector<double> times = detail::time_grid(p.tmax, p.points, p.tmax / 200.0);

  std::vector<Matrix> frames;
  for (double t : times) {
    const Matrix h = hidden_reps(f, p.a0, p.tau, t, d.x);
    Matrix coords = classical_mds(at_mul(h, h), p.dim);
    if (!frames.empty()) coords = procrustes_align(coords, frames.back());
    frames.push_back(std::move(coords));
  }

  std::ofstream out = detail::open_csv(p.out, provenance, 0);
  out << "t,item";
  for (std::size_t k = 0; k < p.dim; ++k) out << ",c" << (k + 1);
  out << "\n";
  for (std::size_t ti = 0; ti < times.size(); ++ti)
    for (std::size_t i = 0; i < d.items(); ++i) {
      out << detail::fmt17(times[ti]) << ',' << d.item_labels[i];
      for (std::size_t k = 0; k < p.dim; ++k)
        out << ',' << detail::fmt17(frames[ti](i, k));
      out << "\n";
    }
  log << "wrote " << p.out << "\n";

  if (!p.svg.empty() && p.dim >= 2) {
    SvgPlot plot("hidden representation trajectories (MDS)", "dimension 1",
                 "dimension 2");
    const std::size_t max_series = std::min<std::size_t>(d.items(), 12);
    for (std::size_t i = 0; i < max_series; ++i) {
      std::vector<double> xs(times.size()), ys(times.size());
      for (std::size_t ti = 0; ti < times.size(); ++ti) {
        xs[ti] = frames[ti](i, 0);
        ys[ti] = frames[ti](i, 1);
      }
      plot.add_series(d.item_labels[i], xs, ys);
    }
    plot.write(p.svg);
    log << "wrote " << p.svg << "\n";
  }
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportParams {
  std::string out_dir = "report";
  bool quick = false;
};

inline void cmd_report(const ReportParams& p, const std::string& provenance,
                       std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(p.out_dir);
  const std::string dir = p.out_dir + "/";

  // Toy hierarchy: dataset, analytic curves, simulation comparison.
  GenParams toy;
  toy.generator = "toy";
  toy.out = dir + "toy.json";
  cmd_gen(toy, log);

  SolveParams solve_deep;
  solve_deep.dataset = toy.out;
  solve_deep.tmax = 12.0;
  solve_deep.out = dir + "toy_deep.csv";
  solve_deep.svg = dir + "toy_deep.svg";
  cmd_solve(solve_deep, provenance, log);
  SolveParams solve_shallow = solve_deep;
  solve_shallow.arch = "shallow";
  solve_shallow.out = dir + "toy_shallow.csv";
  solve_shallow.svg = dir + "toy_shallow.svg";
  cmd_solve(solve_shallow, provenance, log);

  TrainParams cmp;
  cmp.dataset = toy.out;
  cmp.epochs = p.quick ? 300 : 500;
  cmp.record_every = 5;
  cmp.n_hidden = 16;
  cmp.out = dir + "toy_compare.csv";
  cmp.svg = dir + "toy_compare.svg";
  cmd_compare(cmp, provenance, log);

  // Illusory correlation: Salmon / Fly feature trajectory.
  {
    const Dataset d = load_dataset(toy.out);
    const SvdResult f = svd(d.sigma_yx());
    std::vector<double> times;
    for (double t = 0.0; t <= 14.0; t += 0.05) times.push_back(t);
    const FeatureTrajectory deep = feature_trajectory(f, 1, 3, times, 1e-4, 1.0, Arch::deep);
    const FeatureTrajectory sh =
        feature_trajectory(f, 1, 3, times, 1e-4, 1.0, Arch::shallow);
    std::ofstream out = detail::open_csv(dir + "illusory.csv", provenance, 0);
    out << "t,deep_prediction,shallow_prediction";
    for (std::size_t j = 0; j < f.s.size(); ++j) out << ",deep_mode_" << (j + 1);
    out << "\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      out << detail::fmt17(times[i]) << ',' << detail::fmt17(deep.prediction[i]) << ','
          << detail::fmt17(sh.prediction[i]);
      for (std::size_t j = 0; j < f.s.size(); ++j)
        out << ',' << detail::fmt17(deep.contributions(i, j));
      out << "\n";
    }
    SvgPlot plot("prediction of 'Fly' for 'Salmon'", "t (units of tau)", "prediction");
    plot.add_series("deep", times, deep.prediction);
    plot.add_series("shallow", times, sh.prediction);
    plot.write(dir + "illusory.svg");
    log << "wrote " << dir << "illusory.csv, " << dir << "illusory.svg\n";
  }

  // Progressive differentiation on a binary tree.
  GenParams tree;
  tree.generator = "tree";
  tree.depth = 4;
  tree.branch = "2,2,2";
  tree.features = p.quick ? 2000 : 10000;
  tree.seed = 1;
  tree.out = dir + "tree.json";
  cmd_gen(tree, log);
  MdsParams mds;
  mds.dataset = tree.out;
  mds.tmax = 3.0;
  mds.out = dir + "tree_mds.csv";
  mds.svg = dir + "tree_mds.svg";
  cmd_mds(mds, provenance, log);

  // Inductive projection narrowing, anchored at the first leaf.
  ProjectParams proj;
  proj.dataset = tree.out;
  proj.anchor = "leaf_0";
  proj.times = "0.5,1.0,1.5,2.0,3.0";
  proj.out = dir + "tree_projection.csv";
  cmd_project(proj, provenance, log);

  // Category coherence collapse.
  CoherenceParams coh;
  coh.points = p.quick ? 4 : 8;
  coh.trials = p.quick ? 5 : 20;
  coh.out = dir + "coherence.csv";
  coh.svg = dir + "coherence.svg";
  cmd_coherence(coh, provenance, log);

  // RSA invariance, small vs large init.
  RsaParams rsa_small;
  rsa_small.dataset = toy.out;
  rsa_small.seeds = p.quick ? 2 : 4;
  rsa_small.out = dir + "rsa_small_init.csv";
  cmd_rsa(rsa_small, provenance, log);
  RsaParams rsa_large = rsa_small;
  rsa_large.a0 = 1.0;
  rsa_large.out = dir + "rsa_large_init.csv";
  cmd_rsa(rsa_large, provenance, log);

  std::ofstream index(dir + "index.txt");
  index << "semantica report\n"
        << "toy.json, toy_deep.csv/.svg, toy_shallow.csv/.svg  analytic trajectories\n"
        << "toy_compare.csv/.svg     simulation vs closed form\n"
        << "illusory.csv/.svg        non-monotone feature prediction\n"
        << "tree.json, tree_mds.csv/.svg  progressive differentiation\n"
        << "tree_projection.csv      inductive projection narrowing\n"
        << "coherence.csv/.svg       category recovery collapse\n"
        << "rsa_small_init.csv, rsa_large_init.csv  similarity conservation\n";
  log << "report written to " << p.out_dir << "\n";
}

// ---------------------------------------------------------------------------
// Argument wiring.
// ---------------------------------------------------------------------------

namespace detail {

// Expand `--config file.json` into ordinary tokens placed where the option
// appeared, so explicit command-line flags (parsed later with take-last
// precedence) override the file.
inline std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file argument");
      const std::string path = args[++i];
      if (!std::filesystem::exists(path)) throw UsageError("config file not found: " + path);
      std::ifstream in(path);
      nlohmann::json j;
      in >> j;
      if (!j.is_object()) throw UsageError("config file must hold a JSON object");
      for (const auto& [key, value] : j.items()) {
        if (value.is_boolean()) {
          if (value.get<bool>()) out.push_back("--" + key);
          continue;
        }
        out.push_back("--" + key);
        if (value.is_string())
          out.push_back(value.get<std::string>());
        else
          out.push_back(value.dump());
      }
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& log = std::cout,
               std::ostream& err = std::cerr) {
  const std::string provenance = detail::join_args(args);

  CLI::App app{"deep linear network semantic development toolkit"};
  app.require_subcommand(1);

  GenParams gen;
  SolveParams solve;
  TrainParams train, compare;
  CoherenceParams coherence;
  ProjectParams project;
  RsaParams rsa;
  MdsParams mds;
  ReportParams report;

  auto configure = [](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return sub;
  };

  CLI::App* g = configure(app.add_subcommand("gen", "generate a dataset file"));
  g->add_option("generator", gen.generator,
                "toy|tree|gmrf-cluster|gmrf-ring|gmrf-tree|ordering|crosscut|planted")
      ->required();
  g->add_option("--out", gen.out, "output dataset path");
  g->add_option("--depth", gen.depth, "tree depth (levels)");
  g->add_option("--branch", gen.branch, "branching factors, comma separated");
  g->add_option("--flip", gen.flip, "diffusion flip probability");
  g->add_option("--features", gen.features, "number of sampled features");
  g->add_option("--seed", gen.seed, "rng seed");
  g->add_option("--sizes", gen.sizes, "cluster sizes, comma separated");
  g->add_option("--edge", gen.edge, "graph edge length");
  g->add_option("--sigma", gen.sigma, "graph-independent std deviation");
  g->add_option("--items", gen.items, "ring item count");
  g->add_option("--weight", gen.weight, "ring adjacency weight (1/edge length)");
  g->add_option("--no", gen.n_objects, "planted: objects");
  g->add_option("--nf", gen.n_features, "planted: features");
  g->add_option("--ko", gen.k_objects, "planted: category objects");
  g->add_option("--kf", gen.k_features, "planted: category features");
  g->add_option("--p", gen.p_in, "planted: in-category probability");
  g->add_option("--q", gen.p_out, "planted: background probability");

  CLI::App* s = configure(app.add_subcommand("solve", "analytic learning trajectories"));
  s->add_option("--dataset", solve.dataset, "dataset file")->required();
  s->add_option("--arch", solve.arch, "deep|shallow");
  s->add_option("--a0", solve.a0, "initial mode strength");
  s->add_option("--tau", solve.tau, "time constant");
  s->add_option("--tmax", solve.tmax, "final time");
  s->add_option("--tmin", solve.tmin, "first nonzero time (default tmax/1000)");
  s->add_option("--points", solve.points, "timepoints");
  s->add_option("--out", solve.out, "output csv");
  s->add_option("--svg", solve.svg, "optional svg plot");

  auto add_train_options = [](CLI::App* sub, TrainParams& p) {
    sub->add_option("--dataset", p.dataset, "dataset file")->required();
    sub->add_option("--arch", p.arch, "deep|shallow");
    sub->add_option("--regime", p.regime, "batch|online");
    sub->add_option("--init", p.init, "balanced|gaussian");
    sub->add_option("--lr", p.lr, "learning rate");
    sub->add_option("--epochs", p.epochs, "training epochs");
    sub->add_option("--a0", p.a0, "initial weight scale");
    sub->add_option("--seed", p.seed, "rng seed");
    sub->add_option("--record-every", p.record_every, "recording stride");
    sub->add_option("--n-hidden", p.n_hidden, "hidden units (0 = number of modes)");
    sub->add_option("--out", p.out, "output csv");
    sub->add_option("--svg", p.svg, "optional svg plot");
  };
  CLI::App* t = configure(app.add_subcommand("train", "numerically train a network"));
  add_train_options(t, train);
  CLI::App* c =
      configure(app.add_subcommand("compare", "overlay simulation on the closed form"));
  add_train_options(c, compare);

  CLI::App* coh = configure(app.add_subcommand("coherence", "category recovery sweep"));
  coh->add_option("--no", coherence.n_objects, "objects");
  coh->add_option("--nf", coherence.n_features, "features");
  coh->add_option("--ko", coherence.k_objects, "category objects");
  coh->add_option("--kf", coherence.k_features, "category features");
  coh->add_option("--q", coherence.q, "background probability");
  coh->add_option("--cmin", coherence.cmin, "smallest coherence");
  coh->add_option("--cmax", coherence.cmax, "largest coherence");
  coh->add_option("--points", coherence.points, "grid points");
  coh->add_option("--trials", coherence.trials, "seeds per grid point");
  coh->add_option("--seed", coherence.seed, "base seed");
  coh->add_option("--out", coherence.out, "output csv");
  coh->add_option("--svg", coherence.svg, "optional svg plot");

  CLI::App* pr = configure(app.add_subcommand("project", "inductive projection over time"));
  pr->add_option("--dataset", project.dataset, "dataset file")->required();
  pr->add_option("--anchor", project.anchor, "anchor item label or index");
  pr->add_option("--times", project.times, "comma-separated times");
  pr->add_option("--a0", project.a0, "initial mode strength");
  pr->add_option("--tau", project.tau, "time constant");
  pr->add_option("--out", project.out, "output csv");

  CLI::App* r = configure(app.add_subcommand("rsa", "similarity invariance across seeds"));
  r->add_option("--dataset", rsa.dataset, "dataset file")->required();
  r->add_option("--seeds", rsa.seeds, "number of seeds (1..n)");
  r->add_option("--seed-list", rsa.seed_list, "explicit seeds, comma separated");
  r->add_option("--a0", rsa.a0, "initial weight scale");
  r->add_option("--lr", rsa.lr, "learning rate");
  r->add_option("--epochs", rsa.epochs, "training epochs");
  r->add_option("--n-hidden", rsa.n_hidden, "hidden units");
  r->add_option("--out", rsa.out, "output csv");
  r->add_option("--sims-out", rsa.sims_out, "prefix for similarity matrix csvs");

  CLI::App* m = configure(app.add_subcommand("mds", "MDS trajectory of hidden reps"));
  m->add_option("--dataset", mds.dataset, "dataset file")->required();
  m->add_option("--a0", mds.a0, "initial mode strength");
  m->add_option("--tau", mds.tau, "time constant");
  m->add_option("--tmax", mds.tmax, "final time");
  m->add_option("--points", mds.points, "timepoints");
  m->add_option("--dim", mds.dim, "embedding dimension");
  m->add_option("--out", mds.out, "coordinates csv");
  m->add_option("--svg", mds.svg, "svg plot");

  CLI::App* rep = configure(app.add_subcommand("report", "run the bundled experiments"));
  rep->add_option("--out-dir", report.out_dir, "output directory");
  rep->add_flag("--quick", report.quick, "smaller, faster parameters");

  g->callback([&] { cmd_gen(gen, log); });
  s->callback([&] { cmd_solve(solve, provenance, log); });
  t->callback([&] { cmd_train(train, provenance, log); });
  c->callback([&] { cmd_compare(compare, provenance, log); });
  coh->callback([&] { cmd_coherence(coherence, provenance, log); });
  pr->callback([&] { cmd_project(project, provenance, log); });
  r->callback([&] { cmd_rsa(rsa, provenance, log); });
  m->callback([&] { cmd_mds(mds, provenance, log); });
  rep->callback([&] { cmd_report(report, provenance, log); });

  try {
    std::vector<std::string> expanded = detail::expand_config(std::move(args));
    std::vector<const char*> argv;
    argv.push_back("semantica");
    for (const std::string& a : expanded) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, log, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, log, err);
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const TrainingDiverged& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace semantica::cli
