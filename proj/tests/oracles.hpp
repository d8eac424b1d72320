#ifndef CODESCENT_TESTS_ORACLES_HPP
#define CODESCENT_TESTS_ORACLES_HPP

// Independent reference computations used to check the library. Nothing here
// calls the library's linear algebra: ranks are recomputed by a separate
// column-oriented elimination on plain integer vectors.

#include <cstdint>
#include <map>
#include <vector>

#include "codescent/chain.hpp"

namespace oracle {

using Rows = std::vector<std::vector<std::int64_t>>;

inline std::int64_t mod(std::int64_t v, std::int64_t p) { return ((v % p) + p) % p; }

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  // Extended Euclid, independent of the library's Fermat inverse.
  std::int64_t t = 0, nt = 1, r = p, nr = mod(a, p);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  return mod(t, p);
}

inline Rows to_rows(const codescent::Matrix& m) {
  Rows r(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[i][j] = m(i, j);
  return r;
}

/// Rank by eliminating columns against rows, processing rows bottom-up.
inline std::size_t rank(Rows a, std::int64_t p) {
  if (a.empty()) return 0;
  const std::size_t cols = a[0].size();
  std::size_t rk = 0;
  std::vector<bool> used(a.size(), false);
  for (std::size_t c = cols; c-- > 0;) {
    std::size_t piv = a.size();
    for (std::size_t i = a.size(); i-- > 0;)
      if (!used[i] && mod(a[i][c], p) != 0) {
        piv = i;
        break;
      }
    if (piv == a.size()) continue;
    used[piv] = true;
    ++rk;
    const std::int64_t iv = inv_mod(a[piv][c], p);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == piv || mod(a[i][c], p) == 0) continue;
      const std::int64_t f = mod(a[i][c] * iv, p);
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = mod(a[i][j] - f * a[piv][j], p);
    }
  }
  return rk;
}

inline std::size_t rank(const codescent::Matrix& m) { return rank(to_rows(m), m.prime()); }

/// Betti numbers by dim ker d_n - rank d_{n+1}, with the oracle rank.
inline std::map<int, std::size_t> betti(const codescent::ChainComplex& c) {
  std::map<int, std::size_t> out;
  if (c.is_zero()) return out;
  for (int n = c.lo(); n <= c.hi(); ++n) {
    const std::size_t ker = c.dim(n) - oracle::rank(c.d(n));
    out[n] = ker - oracle::rank(c.d(n + 1));
  }
  return out;
}

/// f is a quasi-isomorphism iff the block matrix of the cone differential
/// has the rank forcing every cone homology group to vanish. Computed from
/// explicit blocks, not from the library's cone.
inline bool quasi_iso(const codescent::ChainMap& f) {
  const auto& s = f.source();
  const auto& t = f.target();
  const std::int64_t p = f.prime();
  auto [lo, hi] = codescent::joint_range(s, t);
  if (lo > hi) return true;
  // cone_n = t_n (+) s_{n-1}; d = [[dt, f], [0, -ds]].
  auto cone_d = [&](int n) {
    Rows m(t.dim(n - 1) + s.dim(n - 2), std::vector<std::int64_t>(t.dim(n) + s.dim(n - 1), 0));
    auto dt = t.d(n);
    auto fn = f.at(n - 1);
    auto ds = s.d(n - 1);
    for (std::size_t i = 0; i < dt.rows(); ++i)
      for (std::size_t j = 0; j < dt.cols(); ++j) m[i][j] = dt(i, j);
    for (std::size_t i = 0; i < fn.rows(); ++i)
      for (std::size_t j = 0; j < fn.cols(); ++j) m[i][t.dim(n) + j] = fn(i, j);
    for (std::size_t i = 0; i < ds.rows(); ++i)
      for (std::size_t j = 0; j < ds.cols(); ++j) m[t.dim(n - 1) + i][t.dim(n) + j] = mod(-static_cast<std::int64_t>(ds(i, j)), p);
    return m;
  };
  for (int n = lo; n <= hi + 1; ++n) {
    const std::size_t dim = t.dim(n) + s.dim(n - 1);
    const Rows dn = cone_d(n), dn1 = cone_d(n + 1);
    const std::size_t r_out = dn.empty() || dn[0].empty() ? 0 : rank(dn, p);
    const std::size_t r_in = dn1.empty() || dn1[0].empty() ? 0 : rank(dn1, p);
    if (dim - r_out != r_in) return false;
  }
  return true;
}

/// Homology of the cyclic group Z/k with coefficients in F_p, from the
/// normalized bar resolution tensored with the trivial module. Chains in
/// degree n are words [g1|...|gn] with all gi != 0 in Z/k.
inline std::vector<std::size_t> cyclic_group_homology(int k, std::int64_t p, int top) {
  auto words = [&](int n) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < n; ++i) {
      std::vector<std::vector<int>> next;
      for (const auto& w : out)
        for (int g = 1; g < k; ++g) {
          auto v = w;
          v.push_back(g);
          next.push_back(v);
        }
      out = next;
    }
    return out;
  };
  auto index = [&](const std::vector<int>& w) {
    std::size_t i = 0;
    for (int g : w) i = i * static_cast<std::size_t>(k - 1) + static_cast<std::size_t>(g - 1);
    return i;
  };
  // d[g1|..|gn] = [g2|..|gn] + sum_{i} (-1)^i [..|gi+g(i+1)|..] + (-1)^n [g1|..|g(n-1)],
  // inner terms vanishing when gi + g(i+1) = 0 in Z/k.
  auto boundary = [&](int n) {
    auto src = words(n), tgt = words(n - 1);
    Rows m(tgt.size(), std::vector<std::int64_t>(src.size(), 0));
    for (std::size_t j = 0; j < src.size(); ++j) {
      const auto& w = src[j];
      m[index(std::vector<int>(w.begin() + 1, w.end()))][j] += 1;
      for (int i = 1; i < n; ++i) {
        const int prod = (w[i - 1] + w[i]) % k;
        if (prod == 0) continue;
        std::vector<int> v(w.begin(), w.begin() + (i - 1));
        v.push_back(prod);
        v.insert(v.end(), w.begin() + i + 1, w.end());
        m[index(v)][j] += (i % 2 == 0) ? 1 : -1;
      }
      m[index(std::vector<int>(w.begin(), w.end() - 1))][j] += (n % 2 == 0) ? 1 : -1;
    }
    for (auto& row : m)
      for (auto& v : row) v = mod(v, p);
    return m;
  };
  std::vector<std::size_t> h;
  for (int n = 0; n <= top; ++n) {
    const std::size_t dim = words(n).size();
    const std::size_t r_out = n == 0 ? 0 : rank(boundary(n), p);
    const std::size_t r_in = rank(boundary(n + 1), p);
    h.push_back(dim - r_out - r_in);
  }
  return h;
}

}  // namespace oracle

#endif  // CODESCENT_TESTS_ORACLES_HPP
