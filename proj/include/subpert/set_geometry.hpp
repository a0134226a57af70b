#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "subpert/core.hpp"

namespace subpert {

/// Finite multiset of points in the complex plane. Order and multiplicity are
/// preserved; all distances are Euclidean moduli |a - b|.
class PointMultiset {
 public:
  PointMultiset() = default;
  PointMultiset(std::initializer_list<Complex> pts) : points_(pts) {}
  explicit PointMultiset(std::vector<Complex> pts) : points_(std::move(pts)) {}

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Complex& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Complex>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  void push_back(Complex z) { points_.push_back(z); }

  /// Multiset union (concatenation).
  friend PointMultiset operator+(const PointMultiset& a,
                                 const PointMultiset& b) {
    std::vector<Complex> all = a.points_;
    all.insert(all.end(), b.points_.begin(), b.points_.end());
    return PointMultiset(std::move(all));
  }

 private:
  std::vector<Complex> points_;
};

namespace detail {

inline void require_nonempty(const PointMultiset& a, const char* what) {
  if (a.empty()) throw Error(ErrorCode::EmptySet, std::string(what) + " is empty");
}

}  // namespace detail

/// min over b in B of |z - b|.
inline double distance_to_set(Complex z, const PointMultiset& b) {
  detail::require_nonempty(b, "set");
  double best = kInf;
  for (const auto& p : b) best = std::min(best, std::abs(z - p));
  return best;
}

/// max over a in A of the distance from a to B.
inline double directed_hausdorff(const PointMultiset& a,
                                 const PointMultiset& b) {
  detail::require_nonempty(a, "first set");
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, distance_to_set(p, b));
  return worst;
}

inline double sep(const PointMultiset& a, const PointMultiset& b) {
  detail::require_nonempty(a, "first set");
  detail::require_nonempty(b, "second set");
  double best = kInf;
  for (const auto& p : a) best = std::min(best, distance_to_set(p, b));
  return best;
}

inline double hausdorff(const PointMultiset& a, const PointMultiset& b) {
  detail::require_nonempty(b, "second set");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

inline double diam(const PointMultiset& a) {
  detail::require_nonempty(a, "set");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      worst = std::max(worst, std::abs(a[i] - a[j]));
  return worst;
}

struct SepPreservingCheck {
  bool holds_full = false;    ///< max_r d(r, P u Q) + d_H(P u Q, R) < sep(P, Q)
  bool holds_simple = false;  ///< d_H(P u Q, R) < sep(P, Q) / 2
  double margin = 0.0;        ///< sep(P, Q) minus the left side of holds_full
  double sep_pq = 0.0;
  double hausdorff_pq_r = 0.0;
};

inline SepPreservingCheck sep_preserving_check(const PointMultiset& p,
                                               const PointMultiset& q,
                                               const PointMultiset& r) {
  detail::require_nonempty(p, "P");
  detail::require_nonempty(q, "Q");
  detail::require_nonempty(r, "R");
  const PointMultiset pq = p + q;
  SepPreservingCheck out;
  out.sep_pq = sep(p, q);
  out.hausdorff_pq_r = hausdorff(pq, r);
  const double lhs = directed_hausdorff(r, pq) + out.hausdorff_pq_r;
  out.holds_full = lhs < out.sep_pq;
  out.holds_simple = out.hausdorff_pq_r < 0.5 * out.sep_pq;
  out.margin = out.sep_pq - lhs;
  return out;
}

struct SetPartitionResult {
  std::vector<std::size_t> p_tilde;  ///< indices into R assigned to P
  std::vector<std::size_t> q_tilde;  ///< indices into R assigned to Q
  double sep_pq = 0.0;
  double hausdorff_pq_r = 0.0;
  double new_sep_lower_bound = 0.0;  ///< sep(P, Q) - 2 d_H(P u Q, R)
};

/// Splits R by nearest set: r goes to P when its distance to P is no larger
/// than its distance to Q (ties go to P). Refuses when the strict
/// separation-preserving condition fails, since the split is then not
/// guaranteed to be a partition with the advertised properties.
inline SetPartitionResult sep_preserving_partition(const PointMultiset& p,
                                                   const PointMultiset& q,
                                                   const PointMultiset& r) {
  const SepPreservingCheck check = sep_preserving_check(p, q, r);
  if (!check.holds_full) {
    throw Error(ErrorCode::ConditionViolated,
                "separation-preserving condition fails, margin " +
                    std::to_string(check.margin),
                check.margin);
  }
  SetPartitionResult out;
  out.sep_pq = check.sep_pq;
  out.hausdorff_pq_r = check.hausdorff_pq_r;
  out.new_sep_lower_bound = check.sep_pq - 2.0 * check.hausdorff_pq_r;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (distance_to_set(r[i], p) <= distance_to_set(r[i], q)) {
      out.p_tilde.push_back(i);
    } else {
      out.q_tilde.push_back(i);
    }
  }
  return out;
}

/// Gathers the points of `set` at `indices`.
inline PointMultiset select(const PointMultiset& set,
                            const std::vector<std::size_t>& indices) {
  std::vector<Complex> pts;
  pts.reserve(indices.size());
  for (auto i : indices) pts.push_back(set[i]);
  return PointMultiset(std::move(pts));
}

}  // namespace subpert
