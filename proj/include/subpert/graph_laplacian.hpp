#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "subpert/core.hpp"
#include "subpert/perturbation_bounds.hpp"
#include "subpert/random.hpp"
#include "subpert/spectral_core.hpp"
#include "subpert/subspace_metric.hpp"

namespace subpert {

struct Edge {
  int u = 0;  ///< always u < v
  int v = 0;
  double w = 1.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected graph on vertices 0..n-1 with positive edge weights.
class WeightedGraph {
 public:
  explicit WeightedGraph(int n_vertices = 0) : n_(n_vertices) {
    if (n_ < 0) throw Error(ErrorCode::InvalidGraph, "negative vertex count");
  }

  WeightedGraph(int n_vertices, const std::vector<Edge>& edges)
      : WeightedGraph(n_vertices) {
    for (const auto& e : edges) add_edge(e.u, e.v, e.w);
  }

  void add_edge(int u, int v, double w) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) {
      throw Error(ErrorCode::InvalidGraph, "edge (" + std::to_string(u) + "," +
                                               std::to_string(v) +
                                               ") out of range");
    }
    if (u == v) {
      throw Error(ErrorCode::InvalidGraph,
                  "self-loop at vertex " + std::to_string(u));
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidGraph, "edge weight must be positive");
    }
    if (u > v) std::swap(u, v);
    if (!index_.emplace(std::make_pair(u, v), edges_.size()).second) {
      throw Error(ErrorCode::InvalidGraph, "duplicate edge (" +
                                               std::to_string(u) + "," +
                                               std::to_string(v) + ")");
    }
    edges_.push_back({u, v, w});
  }

  bool has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return index_.count({u, v}) > 0;
  }

  /// Weight of edge {u, v}, 0 when absent.
  double weight(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = index_.find({u, v});
    return it == index_.end() ? 0.0 : edges_[it->second].w;
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::map<std::pair<int, int>, std::size_t> index_;
};

/// Vertex labels 0..q-1 (printed 1-based in reports); every cluster non-empty.
class QCut {
 public:
  QCut(std::vector<int> labels, int q) : labels_(std::move(labels)), q_(q) {
    if (q_ < 1) throw Error(ErrorCode::InvalidArgument, "q must be >= 1");
    sizes_.assign(static_cast<std::size_t>(q_), 0);
    for (int l : labels_) {
      if (l < 0 || l >= q_) {
        throw Error(ErrorCode::InvalidArgument,
                    "label " + std::to_string(l) + " outside 0.." +
                        std::to_string(q_ - 1));
      }
      ++sizes_[static_cast<std::size_t>(l)];
    }
    for (int h = 0; h < q_; ++h) {
      if (sizes_[static_cast<std::size_t>(h)] == 0) {
        throw Error(ErrorCode::EmptyCluster,
                    "cluster " + std::to_string(h) + " has no vertices");
      }
    }
  }

  int n() const { return static_cast<int>(labels_.size()); }
  int q() const { return q_; }
  int label(int v) const { return labels_[static_cast<std::size_t>(v)]; }
  int size(int h) const { return sizes_[static_cast<std::size_t>(h)]; }
  const std::vector<int>& labels() const { return labels_; }

  std::vector<int> members(int h) const {
    std::vector<int> out;
    for (int v = 0; v < n(); ++v)
      if (label(v) == h) out.push_back(v);
    return out;
  }

  friend bool operator==(const QCut& a, const QCut& b) {
    return a.q_ == b.q_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int> labels_;
  int q_;
  std::vector<int> sizes_;
};

namespace detail {

inline void require_cut_fits(const WeightedGraph& g, const QCut& cut) {
  if (g.n() != cut.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "graph has " + std::to_string(g.n()) + " vertices, cut has " +
                    std::to_string(cut.n()));
  }
}

inline void require_cluster(const QCut& cut, int h) {
  if (h < 0 || h >= cut.q()) {
    throw Error(ErrorCode::InvalidArgument,
                "cluster id " + std::to_string(h) + " out of range");
  }
}

}  // namespace detail

/// L = D - A.
inline RMatrix laplacian(const WeightedGraph& g) {
  RMatrix l = RMatrix::Zero(g.n(), g.n());
  for (const auto& e : g.edges()) {
    l(e.u, e.v) -= e.w;
    l(e.v, e.u) -= e.w;
    l(e.u, e.u) += e.w;
    l(e.v, e.v) += e.w;
  }
  return l;
}

/// Connected components, labeled in order of their smallest vertex.
inline QCut components(const WeightedGraph& g) {
  std::vector<int> parent(static_cast<std::size_t>(g.n()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    const int a = find(e.u), b = find(e.v);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int> labels(static_cast<std::size_t>(g.n()), -1);
  std::map<int, int> root_label;
  for (int v = 0; v < g.n(); ++v) {
    const int r = find(v);
    auto [it, fresh] =
        root_label.emplace(r, static_cast<int>(root_label.size()));
    labels[static_cast<std::size_t>(v)] = it->second;
  }
  const int q = static_cast<int>(root_label.size());
  if (q == 0) throw Error(ErrorCode::InvalidGraph, "graph has no vertices");
  return QCut(std::move(labels), q);
}

/// Column h is the indicator of cluster h divided by sqrt(|cluster h|).
inline OrthonormalFrame null_basis(const QCut& cut) {
  CMatrix u = CMatrix::Zero(cut.n(), cut.q());
  for (int v = 0; v < cut.n(); ++v)
    u(v, cut.label(v)) = 1.0 / std::sqrt(static_cast<double>(cut.size(cut.label(v))));
  return OrthonormalFrame(std::move(u));
}

/// Per-vertex weight into each cluster: entry (v, h) = sum of w(v, x) over
/// neighbours x of v with label h.
inline RMatrix cluster_weights(const WeightedGraph& g, const QCut& cut) {
  detail::require_cut_fits(g, cut);
  RMatrix into = RMatrix::Zero(g.n(), cut.q());
  for (const auto& e : g.edges()) {
    into(e.u, cut.label(e.v)) += e.w;
    into(e.v, cut.label(e.u)) += e.w;
  }
  return into;
}

namespace detail {

// ED of v relative to H from the per-cluster weight table.
inline double external_degree(const RMatrix& into, const QCut& cut, int v,
                              int h) {
  if (cut.label(v) != h) return into(v, h);
  double out = 0.0;
  for (int k = 0; k < cut.q(); ++k)
    if (k != h) out += into(v, k);
  return out;
}

}  // namespace detail

/// For v in H: total weight from v to vertices outside H. For v outside H:
/// total weight from v into H.
inline double external_degree(int v, int h, const QCut& cut,
                              const WeightedGraph& g) {
  detail::require_cluster(cut, h);
  if (v < 0 || v >= cut.n()) {
    throw Error(ErrorCode::InvalidArgument, "vertex out of range");
  }
  return detail::external_degree(cluster_weights(g, cut), cut, v, h);
}

/// Per-cluster external-degree summaries.
struct ClusterCoupling {
  int cluster = 0;
  int size = 0;
  double coupling = 0.0;  ///< (1/|H|) sum over all vertices of ED^2
  double med = 0.0;       ///< max ED over vertices of H
  double sum_w = 0.0;     ///< total weight of edges leaving H
  double sum_w2 = 0.0;    ///< sum of squared weights of edges leaving H
};

inline std::vector<ClusterCoupling> cluster_couplings(const WeightedGraph& g,
                                                      const QCut& cut) {
  const RMatrix into = cluster_weights(g, cut);
  std::vector<ClusterCoupling> out(static_cast<std::size_t>(cut.q()));
  for (int h = 0; h < cut.q(); ++h) {
    auto& c = out[static_cast<std::size_t>(h)];
    c.cluster = h;
    c.size = cut.size(h);
    double sq = 0.0;
    for (int v = 0; v < cut.n(); ++v) {
      const double ed = detail::external_degree(into, cut, v, h);
      sq += ed * ed;
      if (cut.label(v) == h) c.med = std::max(c.med, ed);
    }
    c.coupling = sq / c.size;
  }
  for (const auto& e : g.edges()) {
    const int a = cut.label(e.u), b = cut.label(e.v);
    if (a == b) continue;
    for (int h : {a, b}) {
      out[static_cast<std::size_t>(h)].sum_w += e.w;
      out[static_cast<std::size_t>(h)].sum_w2 += e.w * e.w;
    }
  }
  return out;
}

inline double coupling(int h, const QCut& cut, const WeightedGraph& g) {
  detail::require_cluster(cut, h);
  return cluster_couplings(g, cut)[static_cast<std::size_t>(h)].coupling;
}

inline double max_external_degree(int h, const QCut& cut,
                                  const WeightedGraph& g) {
  detail::require_cluster(cut, h);
  return cluster_couplings(g, cut)[static_cast<std::size_t>(h)].med;
}

inline double total_coupling(const WeightedGraph& g, const QCut& cut) {
  double s = 0.0;
  for (const auto& c : cluster_couplings(g, cut)) s += c.coupling;
  return s;
}

struct CouplingSandwich {
  double lower = 0.0;  ///< (2/|H|) sum of squared leaving weights
  double value = 0.0;  ///< CP(H)
  double upper = 0.0;  ///< (2/|H|) (sum of leaving weights)^2
  bool ok = false;
};

inline CouplingSandwich coupling_sandwich(int h, const QCut& cut,
                                          const WeightedGraph& g) {
  detail::require_cluster(cut, h);
  const auto c = cluster_couplings(g, cut)[static_cast<std::size_t>(h)];
  CouplingSandwich s;
  s.lower = 2.0 * c.sum_w2 / c.size;
  s.value = c.coupling;
  s.upper = 2.0 * c.sum_w * c.sum_w / c.size;
  const double slack = 1e-12 * std::max(1.0, s.upper);
  s.ok = s.lower <= s.value + slack && s.value <= s.upper + slack;
  return s;
}

/// Checks that `g` is exactly the intra-cluster part of `gt`: same edges,
/// same weights, none crossing clusters.
inline void require_edge_superset(const WeightedGraph& g,
                                  const WeightedGraph& gt, const QCut& cut) {
  detail::require_cut_fits(g, cut);
  detail::require_cut_fits(gt, cut);
  for (const auto& e : g.edges()) {
    if (cut.label(e.u) != cut.label(e.v)) {
      throw Error(ErrorCode::NotAnEdgeSuperset,
                  "base edge (" + std::to_string(e.u) + "," +
                      std::to_string(e.v) + ") crosses clusters");
    }
    if (gt.weight(e.u, e.v) != e.w) {
      throw Error(ErrorCode::NotAnEdgeSuperset,
                  "perturbed graph lacks or reweights edge (" +
                      std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
  for (const auto& e : gt.edges()) {
    if (cut.label(e.u) == cut.label(e.v) && !g.has_edge(e.u, e.v)) {
      throw Error(ErrorCode::NotAnEdgeSuperset,
                  "perturbed graph adds intra-cluster edge (" +
                      std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
  }
}

struct ResidualIdentityRow {
  int cluster = 0;
  double lhs = 0.0;  ///< ||(Lt - L) u_j||_2^2
  double rhs = 0.0;  ///< CP(G_j) in Gt
  bool ok = false;
};

inline std::vector<ResidualIdentityRow> residual_identity_check(
    const WeightedGraph& g, const WeightedGraph& gt, const QCut& cut) {
  require_edge_superset(g, gt, cut);
  const RMatrix diff = laplacian(gt) - laplacian(g);
  const CMatrix applied = diff * null_basis(cut).matrix();
  const auto cps = cluster_couplings(gt, cut);
  std::vector<ResidualIdentityRow> rows;
  for (int h = 0; h < cut.q(); ++h) {
    ResidualIdentityRow r;
    r.cluster = h;
    r.lhs = applied.col(h).squaredNorm();
    r.rhs = cps[static_cast<std::size_t>(h)].coupling;
    r.ok = std::abs(r.lhs - r.rhs) <= 1e-9 * std::max(1.0, r.rhs);
    rows.push_back(r);
  }
  return rows;
}

struct LaplacianDiffCheck {
  double op_norm = 0.0;  ///< ||Lt - L||_2
  double bound = 0.0;    ///< 2 max_j MED(G_j)
  bool ok = false;
};

inline LaplacianDiffCheck laplacian_diff_bound_check(const WeightedGraph& g,
                                                     const WeightedGraph& gt,
                                                     const QCut& cut) {
  require_edge_superset(g, gt, cut);
  LaplacianDiffCheck c;
  c.op_norm = norm2(RMatrix(laplacian(gt) - laplacian(g)));
  for (const auto& cc : cluster_couplings(gt, cut))
    c.bound = std::max(c.bound, 2.0 * cc.med);
  c.ok = c.op_norm <= c.bound + 1e-10;
  return c;
}

/// Threshold below which a Laplacian eigenvalue counts as zero.
inline constexpr double kZeroEigenvalue = 1e-10;

/// Ascending eigen-decomposition of a graph Laplacian.
inline NormalEigenSystem laplacian_spectrum(const WeightedGraph& g) {
  return decompose_normal(laplacian(g));
}

inline double eigenvalue(const NormalEigenSystem& sys, Eigen::Index j) {
  return sys.lambda(j).real();
}

/// Outcome of either null-space bound.
struct NullspaceBound {
  double lhs_dsp = 0.0;          ///< d_sp(null basis, q lowest eigvecs of Lt)
  double eigen_gap = 0.0;        ///< lambda_{q+1} of Lt (or of L)
  double mean_coupling = 0.0;    ///< (1/q) sum_j CP(G_j)
  double max_med = 0.0;          ///< max_j MED(G_j)
  std::vector<BoundEntry> bounds;
};

namespace detail {

inline double lowest_span_dsp(const QCut& cut, const NormalEigenSystem& lt) {
  std::vector<Eigen::Index> low(static_cast<std::size_t>(cut.q()));
  std::iota(low.begin(), low.end(), Eigen::Index{0});
  return dsp_projector(null_basis(cut), eigen_frame(lt, low));
}

inline void coupling_summary(const WeightedGraph& gt, const QCut& cut,
                             NullspaceBound& out) {
  double sum = 0.0;
  for (const auto& c : cluster_couplings(gt, cut)) {
    sum += c.coupling;
    out.max_med = std::max(out.max_med, c.med);
  }
  out.mean_coupling = sum / cut.q();
}

inline void require_proper_q(const QCut& cut) {
  if (cut.q() >= cut.n()) {
    throw Error(ErrorCode::InvalidArgument,
                "null-space bounds need q < n (lambda_{q+1} must exist)");
  }
}

}  // namespace detail

/// Bound in terms of the perturbed spectrum:
/// d_sp <= sqrt(mean CP) / lambdat_{q+1}.
inline NullspaceBound nullspace_bound_known_perturbed(
    const WeightedGraph& g, const WeightedGraph& gt, const QCut& cut,
    const NormalEigenSystem& lt) {
  require_edge_superset(g, gt, cut);
  detail::require_proper_q(cut);
  NullspaceBound out;
  out.eigen_gap = eigenvalue(lt, cut.q());
  if (!(out.eigen_gap > kZeroEigenvalue)) {
    throw Error(ErrorCode::ZeroGap,
                "lambdat_{q+1} = " + std::to_string(out.eigen_gap), out.eigen_gap);
  }
  detail::coupling_summary(gt, cut, out);
  out.lhs_dsp = detail::lowest_span_dsp(cut, lt);
  out.bounds.push_back(make_entry("known_perturbed",
                                  std::sqrt(out.mean_coupling) / out.eigen_gap,
                                  true));
  return out;
}

inline NullspaceBound nullspace_bound_known_perturbed(const WeightedGraph& g,
                                                      const WeightedGraph& gt,
                                                      const QCut& cut) {
  require_edge_superset(g, gt, cut);
  return nullspace_bound_known_perturbed(g, gt, cut, laplacian_spectrum(gt));
}

/// Bounds in terms of the unperturbed spectrum, valid when
/// max MED < lambda_{q+1} / 4: sqrt(mean CP) / (lambda_{q+1} - 2 max MED)
/// and the coarser 2 max MED / (lambda_{q+1} - 2 max MED).
inline NullspaceBound nullspace_bound_known_base(const WeightedGraph& g,
                                                 const WeightedGraph& gt,
                                                 const QCut& cut,
                                                 const NormalEigenSystem& l,
                                                 const NormalEigenSystem& lt) {
  require_edge_superset(g, gt, cut);
  detail::require_proper_q(cut);
  NullspaceBound out;
  out.eigen_gap = eigenvalue(l, cut.q());
  detail::coupling_summary(gt, cut, out);
  const double margin = out.eigen_gap / 4.0 - out.max_med;
  if (!(margin > 0.0)) {
    throw Error(ErrorCode::MedConditionViolated,
                "max MED = " + std::to_string(out.max_med) +
                    " is not below lambda_{q+1}/4 = " +
                    std::to_string(out.eigen_gap / 4.0),
                margin);
  }
  out.lhs_dsp = detail::lowest_span_dsp(cut, lt);
  const double den = out.eigen_gap - 2.0 * out.max_med;
  out.bounds.push_back(
      make_entry("known_base_fine", std::sqrt(out.mean_coupling) / den, true));
  out.bounds.push_back(
      make_entry("known_base_coarse", 2.0 * out.max_med / den, true));
  return out;
}

inline NullspaceBound nullspace_bound_known_base(const WeightedGraph& g,
                                                 const WeightedGraph& gt,
                                                 const QCut& cut) {
  require_edge_superset(g, gt, cut);
  return nullspace_bound_known_base(g, gt, cut, laplacian_spectrum(g),
                                    laplacian_spectrum(gt));
}

/// Number of partitions of n labelled items into exactly q non-empty blocks,
/// saturating at cap + 1.
inline std::size_t stirling2_saturating(int n, int q, std::size_t cap) {
  if (q < 0 || n < 0 || q > n) return 0;
  // row[k] = S(i, k), saturated.
  std::vector<std::size_t> row(static_cast<std::size_t>(q) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int k = std::min(i, q); k >= 1; --k) {
      const auto uk = static_cast<std::size_t>(k);
      const unsigned __int128 v =
          static_cast<unsigned __int128>(uk) * row[uk] + row[uk - 1];
      row[uk] = v > cap ? cap + 1 : static_cast<std::size_t>(v);
    }
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(q)];
}

struct BestCut {
  QCut cut;
  double total_coupling = 0.0;
  bool heuristic = false;
};

inline constexpr std::size_t kDefaultCutLimit = 100000;

/// Candidates within this relative margin of the incumbent count as ties, so
/// round-off never overrides the lexicographic tie-break.
inline constexpr double kTieTolerance = 1e-12;

namespace detail {

// Relabels so clusters appear in order of their first vertex.
inline std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::map<int, int> remap;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, fresh] = remap.emplace(l, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

inline BestCut exact_best_cut(const WeightedGraph& g, int q) {
  const int n = g.n();
  // Restricted growth strings with exactly q blocks, in lexicographic order.
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  std::vector<int> best;
  double best_val = kInf;

  auto evaluate = [&]() {
    const double v = total_coupling(g, QCut(a, q));
    if (v < best_val - kTieTolerance * std::max(1.0, std::abs(v))) {
      best_val = v;
      best = a;
    }
  };
  // Recursive enumeration keeps it simple and lexicographic.
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (i == n) {
      if (used == q) evaluate();
      return;
    }
    // Remaining vertices must be able to open the missing blocks.
    const int remaining = n - i;
    for (int l = 0; l <= std::min(used, q - 1); ++l) {
      const int next_used = std::max(used, l + 1);
      if (q - next_used > remaining - 1) continue;
      a[static_cast<std::size_t>(i)] = l;
      self(self, i + 1, next_used);
    }
  };
  rec(rec, 0, 0);
  return {QCut(best, q), best_val, false};
}

inline std::vector<int> kmeans(const RMatrix& points, int k, Rng& rng,
                               int max_iter = 100) {
  const auto n = points.rows();
  // k-means++ seeding.
  std::vector<Eigen::Index> centres_idx;
  centres_idx.push_back(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  RVector d2 = RVector::Constant(n, kInf);
  while (static_cast<int>(centres_idx.size()) < k) {
    const auto last = centres_idx.back();
    for (Eigen::Index i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (points.row(i) - points.row(last)).squaredNorm());
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0) {
      double r = rng.uniform() * total;
      for (pick = 0; pick < n - 1; ++pick) {
        r -= d2(pick);
        if (r < 0) break;
      }
    } else {
      // All points coincide with chosen centres; take the first unused index.
      while (std::find(centres_idx.begin(), centres_idx.end(), pick) !=
             centres_idx.end())
        ++pick;
    }
    centres_idx.push_back(pick);
  }
  RMatrix centres(k, points.cols());
  for (int c = 0; c < k; ++c) centres.row(c) = points.row(centres_idx[static_cast<std::size_t>(c)]);

  std::vector<int> label(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double bd = kInf;
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - centres.row(c)).squaredNorm();
        if (d < bd) {
          bd = d;
          best = c;
        }
      }
      if (label[static_cast<std::size_t>(i)] != best) {
        label[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    // Refill empty clusters with the point farthest from its centre.
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (int l : label) ++count[static_cast<std::size_t>(l)];
    for (int c = 0; c < k; ++c) {
      if (count[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index far = -1;
      double fd = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int l = label[static_cast<std::size_t>(i)];
        if (count[static_cast<std::size_t>(l)] <= 1) continue;
        const double d = (points.row(i) - centres.row(l)).squaredNorm();
        if (d > fd) {
          fd = d;
          far = i;
        }
      }
      --count[static_cast<std::size_t>(label[static_cast<std::size_t>(far)])];
      label[static_cast<std::size_t>(far)] = c;
      count[static_cast<std::size_t>(c)] = 1;
      changed = true;
    }
    centres.setZero();
    for (Eigen::Index i = 0; i < n; ++i)
      centres.row(label[static_cast<std::size_t>(i)]) += points.row(i);
    for (int c = 0; c < k; ++c)
      centres.row(c) /= count[static_cast<std::size_t>(c)];
    if (!changed) break;
  }
  return label;
}

inline BestCut heuristic_best_cut(const WeightedGraph& g, int q,
                                  std::uint64_t seed, int restarts) {
  const auto sys = laplacian_spectrum(g);
  RMatrix embed(g.n(), q);
  for (int c = 0; c < q; ++c) embed.col(c) = sys.u(c).real();
  Rng rng = Rng::stream(seed, 7);
  std::vector<int> best;
  double best_val = kInf;
  for (int r = 0; r < restarts; ++r) {
    auto labels = canonical_labels(kmeans(embed, q, rng));
    const double v = total_coupling(g, QCut(labels, q));
    if (v < best_val) {
      best_val = v;
      best = std::move(labels);
    }
  }
  return {QCut(best, q), best_val, true};
}

}  // namespace detail

enum class CutMode { Exact, Heuristic };

/// q-cut minimizing the summed coupling. Exact mode enumerates every
/// partition (ties go to the lexicographically smallest canonical label
/// vector); heuristic mode clusters the q lowest Laplacian eigenvectors with
/// seeded k-means++ restarts.
inline BestCut best_q_cut(const WeightedGraph& g, int q, CutMode mode,
                          std::size_t limit = kDefaultCutLimit,
                          std::uint64_t seed = 0, int restarts = 8) {
  if (q < 1 || q > g.n()) {
    throw Error(ErrorCode::InvalidArgument,
                "need 1 <= q <= n, got q=" + std::to_string(q));
  }
  if (mode == CutMode::Exact) {
    const auto count = stirling2_saturating(g.n(), q, limit);
    if (count > limit) {
      throw Error(ErrorCode::SearchSpaceTooLarge,
                  "S(" + std::to_string(g.n()) + "," + std::to_string(q) +
                      ") exceeds limit " + std::to_string(limit),
                  static_cast<double>(count));
    }
    return detail::exact_best_cut(g, q);
  }
  return detail::heuristic_best_cut(g, q, seed, restarts);
}

/// Rotates U_A within its span to best match Ut: R = U_A^H Ut (the
/// pseudoinverse of an orthonormal frame is its adjoint), R = V S W^H,
/// output U_A V W^H.
inline OrthonormalFrame align_basis(const OrthonormalFrame& u_a,
                                    const OrthonormalFrame& ut) {
  detail::require_same_shape(u_a, ut);
  const CMatrix r = u_a.matrix().adjoint() * ut.matrix();
  Eigen::JacobiSVD<CMatrix> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const CMatrix rot = svd.matrixU() * svd.matrixV().adjoint();
  return OrthonormalFrame(u_a.matrix() * rot);
}

}  // namespace subpert
