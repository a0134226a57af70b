#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subpert/core.hpp"
#include "subpert/graph_laplacian.hpp"
#include "subpert/perturbation_bounds.hpp"
#include "subpert/random.hpp"
#include "subpert/spectral_core.hpp"

namespace subpert {

/// Parameters of the synthetic clustered-graph experiment. The defaults are
/// calibration choices that put lambdat_{q+1}, the mean coupling and max MED
/// in the same range as the published 333-vertex, 12-cluster example.
struct ExperimentConfig {
  int n_vertices = 333;
  int q = 12;
  int min_cluster_size = 20;
  double intra_edge_prob = 0.95;
  int inter_edge_count = 45;
  double edge_weight = 1.0;
  std::uint64_t seed = 20240521;

  void validate() const {
    if (q < 1 || n_vertices < q) {
      throw Error(ErrorCode::InvalidArgument, "need n_vertices >= q >= 1");
    }
    if (min_cluster_size < 1 ||
        static_cast<long long>(min_cluster_size) * q > n_vertices) {
      throw Error(ErrorCode::InvalidArgument,
                  "need 1 <= min_cluster_size and q * min_cluster_size <= n");
    }
    if (!(intra_edge_prob > 0.0 && intra_edge_prob <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "intra_edge_prob must be in (0,1]");
    }
    if (inter_edge_count < 0) {
      throw Error(ErrorCode::InvalidArgument, "inter_edge_count must be >= 0");
    }
    if (!(edge_weight > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "edge_weight must be positive");
    }
  }
};

/// Stream ids used by the generators, one per phase.
enum StreamPhase : std::uint64_t {
  kPhaseSizes = 1,
  kPhaseShuffle = 2,
  kPhaseIntra = 3,
  kPhaseInter = 4,
};

struct ClusteredGraph {
  WeightedGraph graph;
  QCut cut;
};

namespace detail {

inline WeightedGraph sorted_graph(int n, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return WeightedGraph(n, edges);
}

inline bool connected(const std::vector<int>& members,
                      const std::vector<std::pair<int, int>>& local_edges) {
  std::vector<int> parent(members.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x)
      x = parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  std::size_t comps = members.size();
  for (auto [a, b] : local_edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[static_cast<std::size_t>(ra)] = rb;
      --comps;
    }
  }
  return comps <= 1;
}

}  // namespace detail

inline constexpr int kConnectivityRetries = 1000;

/// q mutually disconnected, internally connected clusters.
///
/// Cluster sizes: each cluster starts with min_cluster_size vertices and every remaining
/// vertex joins a uniformly drawn cluster. Vertex ids are then shuffled
/// across clusters. Each cluster is an Erdos-Renyi G(m, p) graph, redrawn
/// until connected (at most kConnectivityRetries times). Labels are
/// canonical: cluster ids follow the order of each cluster's smallest vertex.
inline ClusteredGraph synth_clustered_graph(const ExperimentConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_vertices, q = cfg.q;
  Rng size_rng = Rng::stream(cfg.seed, kPhaseSizes);
  std::vector<int> sizes(static_cast<std::size_t>(q), cfg.min_cluster_size);
  for (int i = q * cfg.min_cluster_size; i < n; ++i)
    ++sizes[static_cast<std::size_t>(size_rng.below(static_cast<std::uint64_t>(q)))];

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng shuffle_rng = Rng::stream(cfg.seed, kPhaseShuffle);
  shuffle_rng.shuffle(perm);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(q));
  std::size_t next = 0;
  for (int h = 0; h < q; ++h) {
    for (int k = 0; k < sizes[static_cast<std::size_t>(h)]; ++k)
      members[static_cast<std::size_t>(h)].push_back(perm[next++]);
    std::sort(members[static_cast<std::size_t>(h)].begin(),
              members[static_cast<std::size_t>(h)].end());
  }
  std::sort(members.begin(), members.end());  // canonical: by smallest vertex

  Rng intra_rng = Rng::stream(cfg.seed, kPhaseIntra);
  std::vector<Edge> edges;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (int h = 0; h < q; ++h) {
    const auto& mem = members[static_cast<std::size_t>(h)];
    for (int v : mem) labels[static_cast<std::size_t>(v)] = h;
    const int m = static_cast<int>(mem.size());
    std::vector<std::pair<int, int>> local;
    bool ok = false;
    for (int attempt = 0; attempt < kConnectivityRetries && !ok; ++attempt) {
      local.clear();
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          if (intra_rng.uniform() < cfg.intra_edge_prob) local.emplace_back(a, b);
      ok = detail::connected(mem, local);
    }
    if (!ok) {
      throw Error(ErrorCode::Unsatisfiable,
                  "cluster of size " + std::to_string(m) +
                      " stayed disconnected after " +
                      std::to_string(kConnectivityRetries) + " draws");
    }
    for (auto [a, b] : local)
      edges.push_back({mem[static_cast<std::size_t>(a)],
                       mem[static_cast<std::size_t>(b)], cfg.edge_weight});
  }
  return {detail::sorted_graph(n, std::move(edges)), QCut(labels, q)};
}

/// Gt = G plus exactly cfg.inter_edge_count new edges of weight
/// cfg.edge_weight, each joining two different clusters, no duplicates.
inline WeightedGraph add_intercluster_edges(const WeightedGraph& g,
                                            const QCut& cut,
                                            const ExperimentConfig& cfg) {
  detail::require_cut_fits(g, cut);
  const int n = g.n();
  long long cross = 0;
  for (int h = 0; h < cut.q(); ++h)
    cross += static_cast<long long>(cut.size(h)) * (n - cut.size(h));
  cross /= 2;
  long long existing = 0;
  for (const auto& e : g.edges())
    if (cut.label(e.u) != cut.label(e.v)) ++existing;
  const long long available = cross - existing;
  if (cfg.inter_edge_count > available) {
    throw Error(ErrorCode::NotEnoughCrossPairs,
                std::to_string(cfg.inter_edge_count) + " edges requested, " +
                    std::to_string(available) + " cross pairs free",
                static_cast<double>(available));
  }
  Rng rng = Rng::stream(cfg.seed, kPhaseInter);
  std::vector<Edge> edges = g.edges();
  WeightedGraph probe = g;
  if (2LL * cfg.inter_edge_count > available) {
    // Dense request: shuffle every free cross pair and take a prefix.
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (cut.label(u) != cut.label(v) && !g.has_edge(u, v))
          pairs.emplace_back(u, v);
    rng.shuffle(pairs);
    for (int k = 0; k < cfg.inter_edge_count; ++k)
      edges.push_back({pairs[static_cast<std::size_t>(k)].first,
                       pairs[static_cast<std::size_t>(k)].second,
                       cfg.edge_weight});
  } else {
    int added = 0;
    while (added < cfg.inter_edge_count) {
      int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (cut.label(u) == cut.label(v) || probe.has_edge(u, v)) continue;
      if (u > v) std::swap(u, v);
      probe.add_edge(u, v, cfg.edge_weight);
      edges.push_back({u, v, cfg.edge_weight});
      ++added;
    }
  }
  return detail::sorted_graph(n, std::move(edges));
}

/// Magnitudes from the published 333-vertex example, printed for comparison
/// only; the random graph behind them is not reproducible.
struct ReferenceValues {
  static constexpr double lhs_dsp = 2.516e-2;
  static constexpr double known_perturbed = 3.992e-2;
  static constexpr double known_base_fine = 6.036e-2;
  static constexpr double lambda_t_q1 = 18.436;
  static constexpr double mean_coupling = 0.5417;
  static constexpr double max_med = 3.0;
};

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ReproduceReport {
  ExperimentConfig cfg;
  std::size_t base_edges = 0;
  std::size_t perturbed_edges = 0;
  double lambda_q1 = 0.0;    ///< of L
  double lambda_t_q1 = 0.0;  ///< of Lt
  double mean_coupling = 0.0;
  double max_med = 0.0;
  double lhs_dsp = 0.0;
  double known_perturbed = kInf;
  bool med_condition = false;
  double med_margin = 0.0;  ///< lambda_{q+1}/4 - max MED
  double known_base_fine = kInf;
  double known_base_coarse = kInf;
  double laplacian_diff_norm = 0.0;
  double laplacian_diff_bound = 0.0;
  double residual_identity_max_dev = 0.0;
  double aligned_span_dsp = 0.0;     ///< d_sp(U_A R', U_A)
  double aligned_residual = 0.0;     ///< ||U_A R' - Ut_A^||_F
  double unaligned_residual = 0.0;   ///< ||U_A - Ut_A^||_F
  std::vector<InequalityCheck> checks;
  PointMultiset base_spectrum;
  PointMultiset perturbed_spectrum;
  std::vector<ClusterCoupling> clusters;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const auto& c) { return c.pass; });
  }
};

/// Full graph pipeline: synthesize G, add inter-cluster edges, evaluate both
/// null-space bounds and the supporting identities, and align the null basis
/// with the q lowest eigenvectors of Lt.
inline ReproduceReport reproduce_clustered_experiment(const ExperimentConfig& cfg) {
  const auto [g, cut] = synth_clustered_graph(cfg);
  const WeightedGraph gt = add_intercluster_edges(g, cut, cfg);
  require_edge_superset(g, gt, cut);

  ReproduceReport r;
  r.cfg = cfg;
  r.base_edges = g.edges().size();
  r.perturbed_edges = gt.edges().size();
  const auto l = laplacian_spectrum(g);
  const auto lt = laplacian_spectrum(gt);
  r.base_spectrum = l.eigenvalues;
  r.perturbed_spectrum = lt.eigenvalues;
  r.clusters = cluster_couplings(gt, cut);

  auto check = [&](std::string name, double lhs, double rhs) {
    r.checks.push_back({std::move(name), lhs, rhs, BoundReport::within(lhs, rhs)});
  };

  const auto kp = nullspace_bound_known_perturbed(g, gt, cut, lt);
  r.lambda_t_q1 = kp.eigen_gap;
  r.mean_coupling = kp.mean_coupling;
  r.max_med = kp.max_med;
  r.lhs_dsp = kp.lhs_dsp;
  r.known_perturbed = kp.bounds.front().value;
  r.lambda_q1 = eigenvalue(l, cut.q());
  check("lhs <= known_perturbed", r.lhs_dsp, r.known_perturbed);

  r.med_margin = r.lambda_q1 / 4.0 - r.max_med;
  try {
    const auto kb = nullspace_bound_known_base(g, gt, cut, l, lt);
    r.med_condition = true;
    r.known_base_fine = kb.bounds[0].value;
    r.known_base_coarse = kb.bounds[1].value;
    check("lhs <= known_base_fine", r.lhs_dsp, r.known_base_fine);
    check("known_base_fine <= known_base_coarse", r.known_base_fine,
          r.known_base_coarse);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MedConditionViolated) throw;
    r.med_condition = false;
  }

  const auto diff = laplacian_diff_bound_check(g, gt, cut);
  r.laplacian_diff_norm = diff.op_norm;
  r.laplacian_diff_bound = diff.bound;
  r.checks.push_back({"||Lt - L||_2 <= 2 max MED", diff.op_norm, diff.bound, diff.ok});

  bool identity_ok = true;
  for (const auto& row : residual_identity_check(g, gt, cut)) {
    r.residual_identity_max_dev =
        std::max(r.residual_identity_max_dev, std::abs(row.lhs - row.rhs));
    identity_ok = identity_ok && row.ok;
  }
  r.checks.push_back({"||(Lt - L) u_j||^2 = CP_j", r.residual_identity_max_dev,
                      0.0, identity_ok});

  for (int h = 0; h < cut.q(); ++h) {
    const auto s = coupling_sandwich(h, cut, gt);
    if (!s.ok) {
      r.checks.push_back({"coupling sandwich cluster " + std::to_string(h + 1),
                          s.value, s.upper, false});
    }
  }

  const OrthonormalFrame u_a = null_basis(cut);
  std::vector<Eigen::Index> low(static_cast<std::size_t>(cut.q()));
  std::iota(low.begin(), low.end(), Eigen::Index{0});
  const OrthonormalFrame ut = eigen_frame(lt, low);
  const OrthonormalFrame aligned = align_basis(u_a, ut);
  r.aligned_span_dsp = dsp_projector(aligned, u_a);
  r.aligned_residual = (aligned.matrix() - ut.matrix()).norm();
  r.unaligned_residual = (u_a.matrix() - ut.matrix()).norm();
  return r;
}

/// Random-instance soundness campaign over Hermitian and normal pairs.
struct AuditSummary {
  std::uint64_t seed = 0;
  int instances = 0;
  int hermitian = 0;
  int normal = 0;
  int identity_checks = 0;
  int identity_failures = 0;
  long long bounds_evaluated = 0;
  long long condition_ok = 0;
  long long gap_instances = 0;  ///< (instance, A) pairs meeting the gap condition
  long long violations = 0;
  double worst_ratio = 0.0;  ///< max lhs / value over finite positive values
  std::string worst_bound;
  std::vector<std::string> violation_log;
};

namespace detail {

inline std::vector<Eigen::Index> random_subset(Eigen::Index n, Eigen::Index q,
                                               Rng& rng) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  rng.shuffle(all);
  all.resize(static_cast<std::size_t>(q));
  std::sort(all.begin(), all.end());
  return all;
}

struct AuditPair {
  CMatrix m, mt;
  bool hermitian = false;
};

// Clustered spectrum with a random number of groups; perturbation size is
// log-uniform so both the gap-satisfying and the violating regimes appear.
inline AuditPair audit_pair(Eigen::Index n, bool hermitian, Rng& rng) {
  const int groups = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(4, static_cast<std::uint64_t>(n))));
  std::vector<Complex> centres;
  for (int k = 0; k < groups; ++k)
    centres.emplace_back(20.0 * rng.uniform() - 10.0,
                         hermitian ? 0.0 : 20.0 * rng.uniform() - 10.0);
  CVector lambda(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex c = centres[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(groups)))];
    const double jr = 0.5 * (rng.uniform() - 0.5);
    const double ji = hermitian ? 0.0 : 0.5 * (rng.uniform() - 0.5);
    lambda(j) = c + Complex(jr, ji);
  }
  const double eps = std::pow(10.0, -4.0 + 4.5 * rng.uniform());
  const CMatrix u = random_unitary(n, rng);
  AuditPair p;
  p.hermitian = hermitian;
  p.m = u * lambda.asDiagonal() * u.adjoint();
  if (hermitian) {
    p.m = 0.5 * (p.m + p.m.adjoint());
    p.mt = p.m + random_hermitian(n, eps, rng);
    p.mt = 0.5 * (p.mt + p.mt.adjoint());
  } else {
    CVector lt = lambda;
    for (Eigen::Index j = 0; j < n; ++j)
      lt(j) += eps / std::sqrt(static_cast<double>(n)) * rng.complex_normal();
    const CMatrix ut = u * unitary_exp(random_hermitian(n, eps, rng));
    p.mt = ut * lt.asDiagonal() * ut.adjoint();
  }
  return p;
}

}  // namespace detail

inline constexpr std::size_t kAuditExactLimit = 2000;

/// Each instance i draws from its own stream (seed, 100 + i), so instances
/// are independent of evaluation order. Instances alternate Hermitian and
/// normal; n is uniform in [2, n_max]. For every q in 1..n-1 the campaign
/// takes A = the q lowest indices and a random q-subset, and pairs each with
/// A~ in {A^ (when the gap condition holds), A, a random subset, the exact
/// closest invariant subspace (when enumeration is small)}.
inline AuditSummary audit_random_matrices(int count, int n_max,
                                          std::uint64_t seed) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 0");
  if (n_max < 2) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 2");
  AuditSummary s;
  s.seed = seed;
  for (int inst = 0; inst < count; ++inst) {
    Rng rng = Rng::stream(seed, 100 + static_cast<std::uint64_t>(inst));
    const auto n = static_cast<Eigen::Index>(2 + rng.below(static_cast<std::uint64_t>(n_max - 1)));
    const bool herm = inst % 2 == 0;
    const auto pair = detail::audit_pair(n, herm, rng);
    ++s.instances;
    ++(herm ? s.hermitian : s.normal);

    const auto sys = decompose_normal(pair.m);
    const auto sys_t = decompose_normal(pair.mt);
    const CMatrix mdiff = pair.mt - pair.m;

    const auto cm = coupling_matrix(sys, sys_t, mdiff);
    const auto rn = residual_norms(sys, sys_t, mdiff);
    const double bf = bauer_fike_gap(sys, sys_t);
    s.identity_checks += 3;
    if (!cm.self_check_ok) ++s.identity_failures;
    if (!rn.self_check_ok) ++s.identity_failures;
    if (!BoundReport::within(bf, rn.op_norm)) ++s.identity_failures;

    auto record = [&](const BoundReport& rep, const std::string& tag) {
      for (const auto& b : rep.bounds) {
        ++s.bounds_evaluated;
        if (!b.condition_ok) continue;
        ++s.condition_ok;
        if (b.value > 0) {
          const double ratio = rep.lhs_dsp / b.value;
          if (ratio > s.worst_ratio) {
            s.worst_ratio = ratio;
            s.worst_bound = b.name;
          }
        }
        if (!BoundReport::within(rep.lhs_dsp, b.value)) {
          ++s.violations;
          if (s.violation_log.size() < 20)
            s.violation_log.push_back(tag + " " + b.name + " lhs=" +
                                      std::to_string(rep.lhs_dsp) +
                                      " value=" + std::to_string(b.value));
        }
      }
    };

    for (Eigen::Index q = 1; q < n; ++q) {
      std::vector<Eigen::Index> low(static_cast<std::size_t>(q));
      std::iota(low.begin(), low.end(), Eigen::Index{0});
      const IndexPartition choices[] = {IndexPartition(n, low),
                                        IndexPartition(n, detail::random_subset(n, q, rng))};
      for (const auto& a : choices) {
        std::vector<IndexPartition> tildes{a,
                                           IndexPartition(n, detail::random_subset(n, q, rng))};
        std::optional<TildeFreeResult> tf;
        try {
          tf = bound_tilde_free(sys, sys_t, mdiff, a);
          ++s.gap_instances;
          tildes.push_back(tf->a_hat);
          BoundReport rep;
          rep.lhs_dsp = tf->lhs_dsp;
          rep.bounds = tf->bounds;
          record(rep, "tilde-free");
        } catch (const Error& e) {
          if (e.code() != ErrorCode::GapConditionViolated) throw;
        }
        if (binomial_saturating(static_cast<std::size_t>(n),
                                static_cast<std::size_t>(q),
                                kAuditExactLimit) <= kAuditExactLimit) {
          tildes.push_back(search_closest_invariant(sys_t, eigen_frame(sys, a.set_a()), q,
                                                    SearchMode::Exact, kAuditExactLimit)
                               .a_tilde);
        }
        for (const auto& at : tildes) {
          BoundSelection sel;
          sel.tilde_free = false;
          const auto ev =
              evaluate_bounds(sys, sys_t, mdiff, a, at, sel, KappaPolicy::Mode::Tightest);
          record(ev.report, "n=" + std::to_string(n) + " q=" + std::to_string(q));
        }
      }
    }
  }
  return s;
}

}  // namespace subpert
