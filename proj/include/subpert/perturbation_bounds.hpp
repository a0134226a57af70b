#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "subpert/core.hpp"
#include "subpert/set_geometry.hpp"
#include "subpert/spectral_core.hpp"
#include "subpert/subspace_metric.hpp"

namespace subpert {

/// A q-element subset A of {0, ..., n-1} (stored sorted, 0-based) together
/// with its implicit complement B. Reports print these 1-based.
class IndexPartition {
 public:
  IndexPartition(Eigen::Index n, std::vector<Eigen::Index> set_a)
      : n_(n), set_a_(std::move(set_a)) {
    std::sort(set_a_.begin(), set_a_.end());
    const auto q = static_cast<Eigen::Index>(set_a_.size());
    if (q < 1 || q > n_ - 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "partition needs 1 <= |A| <= n-1, got |A|=" +
                      std::to_string(q) + " n=" + std::to_string(n_));
    }
    for (std::size_t i = 0; i < set_a_.size(); ++i) {
      if (set_a_[i] < 0 || set_a_[i] >= n_) {
        throw Error(ErrorCode::InvalidArgument,
                    "index " + std::to_string(set_a_[i]) + " out of range");
      }
      if (i > 0 && set_a_[i] == set_a_[i - 1]) {
        throw Error(ErrorCode::InvalidArgument,
                    "duplicate index " + std::to_string(set_a_[i]));
      }
    }
    member_.assign(static_cast<std::size_t>(n_), false);
    for (auto j : set_a_) member_[static_cast<std::size_t>(j)] = true;
    for (Eigen::Index j = 0; j < n_; ++j)
      if (!contains(j)) set_b_.push_back(j);
  }

  static IndexPartition from_one_based(Eigen::Index n,
                                       const std::vector<Eigen::Index>& idx) {
    std::vector<Eigen::Index> zero;
    zero.reserve(idx.size());
    for (auto i : idx) zero.push_back(i - 1);
    return IndexPartition(n, std::move(zero));
  }

  /// The partition with A and B interchanged.
  IndexPartition swapped() const { return IndexPartition(n_, set_b_); }

  Eigen::Index n() const { return n_; }
  Eigen::Index q() const { return static_cast<Eigen::Index>(set_a_.size()); }
  const std::vector<Eigen::Index>& set_a() const { return set_a_; }
  const std::vector<Eigen::Index>& set_b() const { return set_b_; }
  bool contains(Eigen::Index j) const {
    return member_[static_cast<std::size_t>(j)];
  }

  std::vector<Eigen::Index> one_based() const {
    std::vector<Eigen::Index> out;
    for (auto j : set_a_) out.push_back(j + 1);
    return out;
  }

  friend bool operator==(const IndexPartition& a, const IndexPartition& b) {
    return a.n_ == b.n_ && a.set_a_ == b.set_a_;
  }

 private:
  Eigen::Index n_;
  std::vector<Eigen::Index> set_a_;
  std::vector<Eigen::Index> set_b_;
  std::vector<bool> member_;
};

/// Choice of the free parameters kappa_j of the main bound.
struct KappaPolicy {
  enum class Mode { Zero, Tightest, Fixed };
  Mode mode = Mode::Zero;
  /// For Mode::Fixed: one value per eigen-index j in 0..n-1. Entries for A
  /// feed the direct evaluation, entries for B the interchanged one.
  std::vector<double> fixed_values;

  static KappaPolicy zero() { return {Mode::Zero, {}}; }
  static KappaPolicy tightest() { return {Mode::Tightest, {}}; }
  static KappaPolicy fixed(std::vector<double> v) {
    return {Mode::Fixed, std::move(v)};
  }
};

/// Strictly-below-the-ratio upper limits on kappa are realized by this factor.
inline constexpr double kKappaShrink = 1.0 - 1e-12;

struct BoundEntry {
  std::string name;
  double value = kInf;
  bool condition_ok = false;
  bool vacuous = false;        ///< value > 1, which d_sp can never exceed
  std::vector<double> kappas;  ///< per eigen-index kappa used, if any
  std::string note;
};

inline BoundEntry make_entry(std::string name, double value, bool condition_ok,
                             std::string note = {}) {
  BoundEntry e;
  e.name = std::move(name);
  e.condition_ok = condition_ok && std::isfinite(value);
  e.value = e.condition_ok ? value : kInf;
  e.vacuous = e.value > 1.0;
  e.note = std::move(note);
  return e;
}

struct BoundReport {
  double lhs_dsp = 0.0;
  std::vector<BoundEntry> bounds;
  std::optional<IndexPartition> chosen_a_tilde;

  /// Soundness slack used across the library: lhs <= value (1 + 1e-9) + 1e-12.
  static bool within(double lhs, double value) {
    return lhs <= value * (1.0 + 1e-9) + 1e-12;
  }

  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    for (const auto& b : bounds)
      if (b.condition_ok && !within(lhs_dsp, b.value)) out.push_back(b.name);
    return out;
  }

  const BoundEntry* find(const std::string& name) const {
    for (const auto& b : bounds)
      if (b.name == name) return &b;
    return nullptr;
  }
};

namespace detail {

inline void require_pair(const NormalEigenSystem& sys,
                         const NormalEigenSystem& sys_t, const IndexPartition& a,
                         const IndexPartition& a_t) {
  if (sys.n != sys_t.n || a.n() != sys.n || a_t.n() != sys.n) {
    throw Error(ErrorCode::DimensionMismatch,
                "eigen systems and partitions disagree on n");
  }
  if (a.q() != a_t.q()) {
    throw Error(ErrorCode::SizeMismatch,
                "|A| = " + std::to_string(a.q()) +
                    " but |A~| = " + std::to_string(a_t.q()));
  }
}

inline double min_distance(Complex z, const NormalEigenSystem& sys,
                           const std::vector<Eigen::Index>& idx) {
  double best = kInf;
  for (auto k : idx) best = std::min(best, std::abs(sys.lambda(k) - z));
  return best;
}

inline PointMultiset spectrum_of(const NormalEigenSystem& sys,
                                 const std::vector<Eigen::Index>& idx) {
  std::vector<Complex> pts;
  for (auto k : idx) pts.push_back(sys.lambda(k));
  return PointMultiset(std::move(pts));
}

inline double sqr(double x) { return x * x; }

/// Per-index data shared by the bounds that need the perturbed spectrum.
/// own[j]: distance from lambda_j to the perturbed eigenvalues on j's side
/// (A~ for j in A, B~ for j in B); other[j]: to the opposite side.
struct GapTable {
  std::vector<double> own;
  std::vector<double> other;
  std::vector<double> residual;  ///< ||(Mt - M) u_j||_2
  double op_norm = 0.0;
  double frob_norm = 0.0;
};

inline GapTable gap_table(const NormalEigenSystem& sys,
                          const NormalEigenSystem& sys_t, const CMatrix& mdiff,
                          const IndexPartition& a, const IndexPartition& a_t) {
  if (mdiff.rows() != sys.n || mdiff.cols() != sys.n) {
    throw Error(ErrorCode::DimensionMismatch, "difference matrix is not n x n");
  }
  GapTable t;
  const CMatrix applied = mdiff * sys.U();
  for (Eigen::Index j = 0; j < sys.n; ++j) {
    const bool in_a = a.contains(j);
    const auto& own_set = in_a ? a_t.set_a() : a_t.set_b();
    const auto& other_set = in_a ? a_t.set_b() : a_t.set_a();
    t.own.push_back(min_distance(sys.lambda(j), sys_t, own_set));
    t.other.push_back(min_distance(sys.lambda(j), sys_t, other_set));
    t.residual.push_back(applied.col(j).norm());
  }
  t.op_norm = norm2(mdiff);
  t.frob_norm = mdiff.norm();
  return t;
}

/// Admissible upper limit of kappa given the denominator-side and
/// numerator-side squared gaps: min(1, (other^2 / own^2) shrunk).
inline double kappa_limit(double other_sq, double own_sq) {
  if (own_sq == 0.0) return 1.0;
  return std::min(1.0, other_sq / own_sq * kKappaShrink);
}

struct SideEval {
  double value = kInf;
  std::vector<std::pair<Eigen::Index, double>> kappas;
};

// sqrt((1/q) sum_{j in side} (r_j^2 - k_j own_j^2) / (other_j^2 - k_j own_j^2))
inline SideEval full_main_side(const GapTable& t,
                               const std::vector<Eigen::Index>& side,
                               double q, const KappaPolicy& policy) {
  SideEval out;
  double sum = 0.0;
  bool finite = true;
  for (auto j : side) {
    const auto sj = static_cast<std::size_t>(j);
    const double own_sq = sqr(t.own[sj]);
    const double other_sq = sqr(t.other[sj]);
    const double limit = kappa_limit(other_sq, own_sq);
    double kappa = 0.0;
    switch (policy.mode) {
      case KappaPolicy::Mode::Zero:
        kappa = 0.0;
        break;
      case KappaPolicy::Mode::Tightest:
        kappa = t.residual[sj] < t.other[sj] ? limit : 0.0;
        break;
      case KappaPolicy::Mode::Fixed:
        if (policy.fixed_values.size() != t.own.size()) {
          throw Error(ErrorCode::InvalidArgument,
                      "fixed kappa policy needs one value per index");
        }
        kappa = policy.fixed_values[sj];
        if (!(kappa >= 0.0 && kappa <= limit)) {
          throw Error(ErrorCode::KappaOutOfRange,
                      "kappa_" + std::to_string(j + 1) + " = " +
                          std::to_string(kappa) + " outside [0, " +
                          std::to_string(limit) + "]",
                      kappa);
        }
        break;
    }
    out.kappas.emplace_back(j, kappa);
    const double num = std::max(0.0, sqr(t.residual[sj]) - kappa * own_sq);
    const double den = other_sq - kappa * own_sq;
    if (!(den > 0.0)) {
      finite = false;
      continue;
    }
    sum += num / den;
  }
  out.value = finite ? std::sqrt(sum / q) : kInf;
  return out;
}

}  // namespace detail

/// d_sp(span(u_A), span(ut_A~)) through the complement-overlap form
/// sqrt((1/q) sum_{j in B, k in A~} |u_j^H ut_k|^2).
inline double dsp_between(const NormalEigenSystem& sys,
                          const NormalEigenSystem& sys_t,
                          const IndexPartition& a, const IndexPartition& a_t) {
  detail::require_pair(sys, sys_t, a, a_t);
  double sum = 0.0;
  for (auto j : a.set_b())
    for (auto k : a_t.set_a())
      sum += std::norm(sys.u(j).dot(sys_t.u(k)));
  return std::sqrt(sum / static_cast<double>(a.q()));
}

/// Frame spanned by the eigenvectors at `idx`.
inline OrthonormalFrame eigen_frame(const NormalEigenSystem& sys,
                                    const std::vector<Eigen::Index>& idx) {
  CMatrix cols(sys.n, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c)
    cols.col(static_cast<Eigen::Index>(c)) = sys.u(idx[c]);
  return OrthonormalFrame(std::move(cols));
}

struct FullMainSides {
  double direct = kInf;        ///< sum over j in A
  double interchanged = kInf;  ///< sum over j in B, A/B roles swapped
  std::vector<double> kappas;  ///< kappa_j for every j (A: direct, B: swapped)
};

inline FullMainSides full_main_sides(const NormalEigenSystem& sys,
                                     const NormalEigenSystem& sys_t,
                                     const CMatrix& mdiff,
                                     const IndexPartition& a,
                                     const IndexPartition& a_t,
                                     const KappaPolicy& policy) {
  detail::require_pair(sys, sys_t, a, a_t);
  const auto t = detail::gap_table(sys, sys_t, mdiff, a, a_t);
  const double q = static_cast<double>(a.q());
  const auto direct = detail::full_main_side(t, a.set_a(), q, policy);
  const auto swapped = detail::full_main_side(t, a.set_b(), q, policy);
  FullMainSides out;
  out.direct = direct.value;
  out.interchanged = swapped.value;
  out.kappas.assign(static_cast<std::size_t>(sys.n), 0.0);
  for (auto [j, k] : direct.kappas) out.kappas[static_cast<std::size_t>(j)] = k;
  for (auto [j, k] : swapped.kappas) out.kappas[static_cast<std::size_t>(j)] = k;
  return out;
}

/// Main kappa-parameterized bound, minimized over the direct and the A/B
/// interchanged evaluation.
inline BoundEntry bound_full_main(const NormalEigenSystem& sys,
                                  const NormalEigenSystem& sys_t,
                                  const CMatrix& mdiff, const IndexPartition& a,
                                  const IndexPartition& a_t,
                                  const KappaPolicy& policy) {
  const auto sides = full_main_sides(sys, sys_t, mdiff, a, a_t, policy);
  const double value = std::min(sides.direct, sides.interchanged);
  std::string name = "full_main";
  switch (policy.mode) {
    case KappaPolicy::Mode::Zero: name += "_kappa_zero"; break;
    case KappaPolicy::Mode::Tightest: name += "_kappa_tightest"; break;
    case KappaPolicy::Mode::Fixed: name += "_kappa_fixed"; break;
  }
  auto e = make_entry(std::move(name), value, std::isfinite(value),
                      std::isfinite(value) ? "" : "DegenerateDenominator");
  e.kappas = sides.kappas;
  return e;
}

/// Scalars of the uniform-kappa simplification: per side, the summed squared
/// residuals, summed and worst own-side squared gaps, and the smallest
/// opposite-side squared gap.
struct SimplifiedTerms {
  double sum_r2_a = 0, sum_own2_a = 0, max_own2_a = 0, min_other2_a = kInf;
  double sum_r2_b = 0, sum_own2_b = 0, max_own2_b = 0, min_other2_b = kInf;
  double frob2 = 0;
  double q = 1;

  double kappa_a_limit() const {
    return detail::kappa_limit(min_other2_a, max_own2_a);
  }
  double kappa_b_limit() const {
    return detail::kappa_limit(min_other2_b, max_own2_b);
  }

  double part1_a(double ka) const {
    const double den = min_other2_a - ka * max_own2_a;
    if (!(den > 0)) return kInf;
    return std::sqrt(std::max(0.0, sum_r2_a - ka * sum_own2_a) / den / q);
  }
  double part1_b(double kb) const {
    const double den = min_other2_b - kb * max_own2_b;
    if (!(den > 0)) return kInf;
    return std::sqrt(std::max(0.0, sum_r2_b - kb * sum_own2_b) / den / q);
  }
  double part2(double ka, double kb) const {
    const double den = min_other2_a + min_other2_b - ka * max_own2_a -
                       kb * max_own2_b;
    if (!(den > 0)) return kInf;
    const double num = frob2 - ka * sum_own2_a - kb * sum_own2_b;
    return std::sqrt(std::max(0.0, num) / q / den);
  }
};

inline SimplifiedTerms simplified_terms(const NormalEigenSystem& sys,
                                        const NormalEigenSystem& sys_t,
                                        const CMatrix& mdiff,
                                        const IndexPartition& a,
                                        const IndexPartition& a_t) {
  detail::require_pair(sys, sys_t, a, a_t);
  const auto t = detail::gap_table(sys, sys_t, mdiff, a, a_t);
  SimplifiedTerms s;
  s.q = static_cast<double>(a.q());
  s.frob2 = detail::sqr(t.frob_norm);
  for (Eigen::Index j = 0; j < sys.n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    const double r2 = detail::sqr(t.residual[sj]);
    const double own2 = detail::sqr(t.own[sj]);
    const double other2 = detail::sqr(t.other[sj]);
    if (a.contains(j)) {
      s.sum_r2_a += r2;
      s.sum_own2_a += own2;
      s.max_own2_a = std::max(s.max_own2_a, own2);
      s.min_other2_a = std::min(s.min_other2_a, other2);
    } else {
      s.sum_r2_b += r2;
      s.sum_own2_b += own2;
      s.max_own2_b = std::max(s.max_own2_b, own2);
      s.min_other2_b = std::min(s.min_other2_b, other2);
    }
  }
  return s;
}

/// Uniform-kappa form: part 1 (residual sums over min gap, min of the A
/// and B sides) and part 2 (Frobenius form).
inline std::vector<BoundEntry> bound_simplified(
    const NormalEigenSystem& sys, const NormalEigenSystem& sys_t,
    const CMatrix& mdiff, const IndexPartition& a, const IndexPartition& a_t,
    double kappa_a, double kappa_b) {
  const auto s = simplified_terms(sys, sys_t, mdiff, a, a_t);
  if (!(kappa_a >= 0 && kappa_a <= s.kappa_a_limit())) {
    throw Error(ErrorCode::KappaOutOfRange,
                "kappa_A = " + std::to_string(kappa_a) + " outside [0, " +
                    std::to_string(s.kappa_a_limit()) + "]",
                kappa_a);
  }
  if (!(kappa_b >= 0 && kappa_b <= s.kappa_b_limit())) {
    throw Error(ErrorCode::KappaOutOfRange,
                "kappa_B = " + std::to_string(kappa_b) + " outside [0, " +
                    std::to_string(s.kappa_b_limit()) + "]",
                kappa_b);
  }
  const double p1 = std::min(s.part1_a(kappa_a), s.part1_b(kappa_b));
  const double p2 = s.part2(kappa_a, kappa_b);
  auto e1 = make_entry("simplified_part1", p1, std::isfinite(p1),
                       std::isfinite(p1) ? "" : "DegenerateDenominator");
  auto e2 = make_entry("simplified_part2", p2, std::isfinite(p2),
                       std::isfinite(p2) ? "" : "DegenerateDenominator");
  return {e1, e2};
}

/// bound_simplified with (kappa_A, kappa_B) chosen to minimize each bound.
/// Each expression is linear-fractional in each kappa with a positive
/// denominator, hence monotone, so the optimum sits at an interval endpoint.
inline std::vector<BoundEntry> bound_simplified_tightest(
    const NormalEigenSystem& sys, const NormalEigenSystem& sys_t,
    const CMatrix& mdiff, const IndexPartition& a, const IndexPartition& a_t) {
  const auto s = simplified_terms(sys, sys_t, mdiff, a, a_t);
  const double la = s.kappa_a_limit();
  const double lb = s.kappa_b_limit();
  const double ka = s.part1_a(la) < s.part1_a(0) ? la : 0.0;
  const double kb = s.part1_b(lb) < s.part1_b(0) ? lb : 0.0;
  const double p1 = std::min(s.part1_a(ka), s.part1_b(kb));
  double p2 = kInf;
  double p2_ka = 0, p2_kb = 0;
  for (double x : {0.0, la})
    for (double y : {0.0, lb})
      if (s.part2(x, y) < p2) {
        p2 = s.part2(x, y);
        p2_ka = x;
        p2_kb = y;
      }
  auto e1 = make_entry("simplified_part1_kappa_tightest", p1, std::isfinite(p1),
                       "kappa_A=" + std::to_string(ka) +
                           " kappa_B=" + std::to_string(kb));
  auto e2 = make_entry("simplified_part2_kappa_tightest", p2, std::isfinite(p2),
                       "kappa_A=" + std::to_string(p2_ka) +
                           " kappa_B=" + std::to_string(p2_kb));
  return {e1, e2};
}

/// Davis-Kahan type bounds from the cross separations sep(l_A, lt_B~) and
/// sep(l_B, lt_A~): part 1 (2-norm), part 2 (Frobenius) and its 2-norm
/// relaxation.
inline std::vector<BoundEntry> bound_davis_kahan(const NormalEigenSystem& sys,
                                                 const NormalEigenSystem& sys_t,
                                                 const CMatrix& mdiff,
                                                 const IndexPartition& a,
                                                 const IndexPartition& a_t) {
  detail::require_pair(sys, sys_t, a, a_t);
  const double n = static_cast<double>(sys.n);
  const double q = static_cast<double>(a.q());
  const double s1 = sep(detail::spectrum_of(sys, a.set_a()),
                        detail::spectrum_of(sys_t, a_t.set_b()));
  const double s2 = sep(detail::spectrum_of(sys, a.set_b()),
                        detail::spectrum_of(sys_t, a_t.set_a()));
  const double op = norm2(mdiff);
  const double fro = mdiff.norm();
  const bool ok = std::max(s1, s2) > 0.0;
  const char* note = ok ? "" : "ZeroSeparation";
  const double p1 = ok ? std::min(1.0, std::sqrt((n - q) / q)) * op /
                             std::max(s1, s2)
                       : kInf;
  const double seps = std::sqrt(s1 * s1 + s2 * s2);
  const double p2 = ok ? fro / std::sqrt(q) / seps : kInf;
  const double p2c = ok ? std::sqrt(n / q) / seps * op : kInf;
  return {make_entry("davis_kahan_part1", p1, ok, note),
          make_entry("davis_kahan_part2", p2, ok, note),
          make_entry("davis_kahan_part2_coarse", p2c, ok, note)};
}

/// Splits the perturbed spectrum by nearest unperturbed group:
/// A^ = { j' : min_{j in A} |lt_j' - l_j| <= min_{j in B} |lt_j' - l_j| }.
/// Requires ||Mt - M||_2 < sep(l_A, l_B) / 2, under which |A^| = |A|.
inline IndexPartition hat_partition(const NormalEigenSystem& sys,
                                    const NormalEigenSystem& sys_t,
                                    double op_norm, const IndexPartition& a) {
  if (sys.n != sys_t.n || a.n() != sys.n) {
    throw Error(ErrorCode::DimensionMismatch,
                "eigen systems and partition disagree on n");
  }
  const double gap = sep(detail::spectrum_of(sys, a.set_a()),
                         detail::spectrum_of(sys, a.set_b()));
  const double margin = 0.5 * gap - op_norm;
  if (!(op_norm < 0.5 * gap)) {
    throw Error(ErrorCode::GapConditionViolated,
                "||Mt - M||_2 = " + std::to_string(op_norm) +
                    " is not below sep/2 = " + std::to_string(0.5 * gap),
                margin);
  }
  std::vector<Eigen::Index> hat;
  for (Eigen::Index jp = 0; jp < sys.n; ++jp) {
    const Complex z = sys_t.lambda(jp);
    if (detail::min_distance(z, sys, a.set_a()) <=
        detail::min_distance(z, sys, a.set_b()))
      hat.push_back(jp);
  }
  if (static_cast<Eigen::Index>(hat.size()) != a.q()) {
    throw std::logic_error("hat partition has " + std::to_string(hat.size()) +
                           " elements, expected " + std::to_string(a.q()));
  }
  return IndexPartition(sys.n, std::move(hat));
}

inline IndexPartition hat_partition(const NormalEigenSystem& sys,
                                    const NormalEigenSystem& sys_t,
                                    const CMatrix& mdiff,
                                    const IndexPartition& a) {
  return hat_partition(sys, sys_t, norm2(mdiff), a);
}

struct TildeFreeResult {
  IndexPartition a_hat;
  double lhs_dsp = 0.0;  ///< d_sp(span(u_A), span(ut_A^))
  std::vector<BoundEntry> bounds;
};

/// Bounds that need only the unperturbed spectrum and norms of Mt - M, valid
/// when ||Mt - M||_2 < sep(l_A, l_B) / 2. sys_t is used solely to form A^
/// and the left-hand side.
inline TildeFreeResult bound_tilde_free(const NormalEigenSystem& sys,
                                        const NormalEigenSystem& sys_t,
                                        const CMatrix& mdiff,
                                        const IndexPartition& a) {
  const double op = norm2(mdiff);
  auto a_hat = hat_partition(sys, sys_t, op, a);
  const double n = static_cast<double>(sys.n);
  const double q = static_cast<double>(a.q());
  const double fro = mdiff.norm();
  const double gap = sep(detail::spectrum_of(sys, a.set_a()),
                         detail::spectrum_of(sys, a.set_b()));
  const CMatrix applied = mdiff * sys.U();

  auto side = [&](const std::vector<Eigen::Index>& here,
                  const std::vector<Eigen::Index>& there) {
    double sum = 0.0;
    for (auto j : here) {
      const double den = detail::min_distance(sys.lambda(j), sys, there) - op;
      sum += detail::sqr(applied.col(j).norm() / den);
    }
    return std::sqrt(sum);
  };
  const double fine =
      std::min(side(a.set_a(), a.set_b()), side(a.set_b(), a.set_a())) /
      std::sqrt(q);
  const double coarse =
      std::min(1.0, std::sqrt((n - q) / q)) * op / (gap - op);
  const double part2 = fro / std::sqrt(2.0 * q) / (gap - op);

  TildeFreeResult out{a_hat, dsp_between(sys, sys_t, a, a_hat), {}};
  out.bounds.push_back(make_entry("tilde_free_part1_fine", fine, true));
  out.bounds.push_back(make_entry("tilde_free_part1_coarse", coarse, true));
  out.bounds.push_back(make_entry("tilde_free_part2", part2, true));
  return out;
}

enum class SearchMode { Exact, Heuristic };

struct SearchContext {
  const NormalEigenSystem* base = nullptr;  ///< unperturbed system
  const CMatrix* mdiff = nullptr;
  const IndexPartition* a = nullptr;
};

struct SearchResult {
  IndexPartition a_tilde;
  double dsp = 0.0;
  std::string method;  ///< "exact", "hat", "greedy-eigenvalue", "greedy-overlap"
};

inline constexpr std::size_t kDefaultSearchLimit = 200000;

/// Closest q-dimensional invariant subspace of the perturbed matrix to
/// `target`, among spans of q eigenvectors. Exact mode enumerates every
/// q-subset (lexicographic order; the first minimum wins, with candidates
/// within 1e-12 of the incumbent treated as ties). Heuristic mode uses
/// the hat partition when `ctx` is supplied and its gap condition holds, a
/// greedy nearest-eigenvalue match when `ctx` is supplied otherwise, and the
/// q largest overlaps ||target^H ut_k|| without context.
inline SearchResult search_closest_invariant(
    const NormalEigenSystem& sys_t, const OrthonormalFrame& target,
    Eigen::Index q, SearchMode mode, std::size_t limit = kDefaultSearchLimit,
    const SearchContext& ctx = {}) {
  const auto n = sys_t.n;
  if (target.n() != n || target.q() != q) {
    throw Error(ErrorCode::DimensionMismatch, "target frame must be n x q");
  }
  if (q < 1 || q >= n) {
    throw Error(ErrorCode::InvalidArgument, "need 1 <= q <= n-1");
  }
  // weight_k = ||target^H ut_k||^2; d_sp(S)^2 = 1 - (1/q) sum_{k in S} w_k.
  const RVector weight =
      (target.matrix().adjoint() * sys_t.U()).cwiseAbs2().colwise().sum();
  auto dsp_of = [&](const std::vector<Eigen::Index>& s) {
    double acc = 0.0;
    for (auto k : s) acc += weight(k);
    return std::sqrt(std::clamp(1.0 - acc / static_cast<double>(q), 0.0, 1.0));
  };
  auto exact_dsp = [&](const IndexPartition& p) {
    return dsp_overlap(target, eigen_frame(sys_t, p.set_a()));
  };

  if (mode == SearchMode::Exact) {
    const auto count = binomial_saturating(static_cast<std::size_t>(n),
                                           static_cast<std::size_t>(q), limit);
    if (count > limit) {
      throw Error(ErrorCode::SearchSpaceTooLarge,
                  "C(" + std::to_string(n) + "," + std::to_string(q) +
                      ") exceeds limit " + std::to_string(limit),
                  static_cast<double>(count));
    }
    std::vector<Eigen::Index> cur(static_cast<std::size_t>(q));
    for (Eigen::Index i = 0; i < q; ++i) cur[static_cast<std::size_t>(i)] = i;
    std::vector<Eigen::Index> best = cur;
    double best_val = dsp_of(cur);
    while (true) {
      // Next combination in lexicographic order.
      Eigen::Index i = q - 1;
      while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - q + i) --i;
      if (i < 0) break;
      ++cur[static_cast<std::size_t>(i)];
      for (Eigen::Index k = i + 1; k < q; ++k)
        cur[static_cast<std::size_t>(k)] = cur[static_cast<std::size_t>(k - 1)] + 1;
      const double v = dsp_of(cur);
      if (v < best_val - 1e-12) {
        best_val = v;
        best = cur;
      }
    }
    IndexPartition p(n, best);
    return {p, exact_dsp(p), "exact"};
  }

  if (ctx.base && ctx.mdiff && ctx.a) {
    try {
      auto hat = hat_partition(*ctx.base, sys_t, *ctx.mdiff, *ctx.a);
      return {hat, exact_dsp(hat), "hat"};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GapConditionViolated) throw;
    }
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::vector<Eigen::Index> pick;
    for (auto j : ctx.a->set_a()) {
      Eigen::Index best = -1;
      double best_d = kInf;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (used[static_cast<std::size_t>(k)]) continue;
        const double d = std::abs(sys_t.lambda(k) - ctx.base->lambda(j));
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      used[static_cast<std::size_t>(best)] = true;
      pick.push_back(best);
    }
    IndexPartition p(n, std::move(pick));
    return {p, exact_dsp(p), "greedy-eigenvalue"};
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) {
    return weight(x) > weight(y);
  });
  order.resize(static_cast<std::size_t>(q));
  IndexPartition p(n, std::move(order));
  return {p, exact_dsp(p), "greedy-overlap"};
}

/// Which families evaluate_bounds() runs.
struct BoundSelection {
  bool full = true;
  bool simplified = true;
  bool davis_kahan = true;
  bool tilde_free = true;
};

/// Evaluates the selected bound families for (A, A~) into one report. The
/// tilde-free family has its own left side against A^; it is folded in only
/// when A~ == A^ and otherwise reported through `tilde_free` below.
struct FullEvaluation {
  BoundReport report;
  std::optional<TildeFreeResult> tilde_free;
  std::optional<Error> tilde_free_error;
};

inline FullEvaluation evaluate_bounds(const NormalEigenSystem& sys,
                                      const NormalEigenSystem& sys_t,
                                      const CMatrix& mdiff,
                                      const IndexPartition& a,
                                      const IndexPartition& a_t,
                                      const BoundSelection& sel,
                                      KappaPolicy::Mode kappa) {
  FullEvaluation out;
  auto& r = out.report;
  r.lhs_dsp = dsp_between(sys, sys_t, a, a_t);
  r.chosen_a_tilde = a_t;
  if (sel.full) {
    r.bounds.push_back(
        bound_full_main(sys, sys_t, mdiff, a, a_t, KappaPolicy::zero()));
    if (kappa == KappaPolicy::Mode::Tightest)
      r.bounds.push_back(
          bound_full_main(sys, sys_t, mdiff, a, a_t, KappaPolicy::tightest()));
  }
  if (sel.simplified) {
    auto s = bound_simplified(sys, sys_t, mdiff, a, a_t, 0.0, 0.0);
    r.bounds.insert(r.bounds.end(), s.begin(), s.end());
    if (kappa == KappaPolicy::Mode::Tightest) {
      auto t = bound_simplified_tightest(sys, sys_t, mdiff, a, a_t);
      r.bounds.insert(r.bounds.end(), t.begin(), t.end());
    }
  }
  if (sel.davis_kahan) {
    auto d = bound_davis_kahan(sys, sys_t, mdiff, a, a_t);
    r.bounds.insert(r.bounds.end(), d.begin(), d.end());
  }
  if (sel.tilde_free) {
    try {
      out.tilde_free = bound_tilde_free(sys, sys_t, mdiff, a);
      if (out.tilde_free->a_hat == a_t) {
        r.bounds.insert(r.bounds.end(), out.tilde_free->bounds.begin(),
                        out.tilde_free->bounds.end());
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GapConditionViolated) throw;
      out.tilde_free_error = e;
    }
  }
  return out;
}

}  // namespace subpert
