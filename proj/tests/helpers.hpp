#pragma once

#include <vector>

#include "subpert/subpert.hpp"

namespace testing_support {

using namespace subpert;

struct Pair {
  CMatrix m, mt;
};

/// M = U diag(l) U^H, Mt = Ut diag(lt) Ut^H with Ut = U exp(i eps H); real
/// spectra give Hermitian pairs.
inline Pair normal_pair(Eigen::Index n, Rng& rng, double eps, bool hermitian) {
  CVector l(n), lt(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    l(j) = Complex(4 * rng.normal(), hermitian ? 0.0 : 4 * rng.normal());
    lt(j) = l(j) + eps * Complex(rng.normal(), hermitian ? 0.0 : rng.normal());
  }
  const CMatrix u = random_unitary(n, rng);
  const CMatrix ut = u * unitary_exp(random_hermitian(n, eps, rng));
  Pair p{u * l.asDiagonal() * u.adjoint(), ut * lt.asDiagonal() * ut.adjoint()};
  if (hermitian) {
    p.m = 0.5 * (p.m + p.m.adjoint());
    p.mt = 0.5 * (p.mt + p.mt.adjoint());
  }
  return p;
}

inline CMatrix diag(std::initializer_list<Complex> d) {
  CVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (auto z : d) v(i++) = z;
  return v.asDiagonal();
}

/// All q-subsets of {0..n-1}, by recursion (independent of the library's
/// iterative enumeration).
inline void subsets(int n, int q, int start, std::vector<Eigen::Index>& cur,
                    std::vector<std::vector<Eigen::Index>>& out) {
  if (static_cast<int>(cur.size()) == q) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, q, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace testing_support
