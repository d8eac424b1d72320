#ifndef CODESCENT_CHAIN_HPP
#define CODESCENT_CHAIN_HPP

// Bounded chain complexes of finite-dimensional F_p vector spaces. Complexes
// are homological: the differential d(n) maps degree n to degree n - 1.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "codescent/error.hpp"
#include "codescent/field.hpp"
#include "codescent/fincat.hpp"

namespace codescent {

class ChainComplex {
 public:
  ChainComplex() = default;
  explicit ChainComplex(std::uint32_t prime) : prime_(prime) {}

  /// diffs[k] is d(lo + k + 1), of shape dims[k] x dims[k + 1]. Checks d o d = 0.
  static ChainComplex validate(std::uint32_t prime, int lo, std::vector<std::size_t> dims, std::vector<Matrix> diffs) {
    Fp check(prime);
    (void)check;
    const std::size_t expected = dims.empty() ? 0 : dims.size() - 1;
    if (diffs.size() != expected) {
      throw Error(ErrorKind::ShapeMismatch, "expected " + std::to_string(expected) + " differentials, got " +
                                                std::to_string(diffs.size()));
    }
    for (std::size_t k = 0; k < diffs.size(); ++k) {
      if (diffs[k].rows() != dims[k] || diffs[k].cols() != dims[k + 1]) {
        throw Error(ErrorKind::ShapeMismatch, "d(" + std::to_string(lo + static_cast<int>(k) + 1) + ") has shape " +
                                                  diffs[k].shape());
      }
      if (diffs[k].prime() != prime && !diffs[k].data().empty()) {
        throw Error(ErrorKind::PrimeMismatch, "differential over the wrong field");
      }
    }
    for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
      if (!(diffs[k] * diffs[k + 1]).is_zero()) {
        throw Error(ErrorKind::NotAComplex, "d o d != 0 at degree " + std::to_string(lo + static_cast<int>(k) + 2));
      }
    }
    return trusted(prime, lo, std::move(dims), std::move(diffs));
  }

  /// Builds without the d o d check; callers guarantee the invariant.
  static ChainComplex trusted(std::uint32_t prime, int lo, std::vector<std::size_t> dims, std::vector<Matrix> diffs) {
    ChainComplex c(prime);
    // Trim zero degrees at both ends so equal complexes compare equal.
    std::size_t first = 0, last = dims.size();
    while (first < last && dims[first] == 0) ++first;
    while (last > first && dims[last - 1] == 0) --last;
    if (first == last) return c;
    c.lo_ = lo + static_cast<int>(first);
    c.dims_.assign(dims.begin() + first, dims.begin() + last);
    for (std::size_t k = first; k + 1 < last; ++k) c.diffs_.push_back(std::move(diffs[k]));
    for (auto& m : c.diffs_)
      if (m.empty()) m = Matrix(m.rows(), m.cols(), prime);
    return c;
  }

  /// k^dim concentrated in degree n.
  static ChainComplex sphere(int n, std::uint32_t prime, std::size_t dim = 1) { return trusted(prime, n, {dim}, {}); }

  /// k in degrees n and n - 1 with the identity as differential.
  static ChainComplex disk(int n, std::uint32_t prime) {
    return trusted(prime, n - 1, {1, 1}, {Matrix::identity(1, prime)});
  }

  std::uint32_t prime() const { return prime_; }
  bool is_zero() const { return dims_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }

  std::size_t dim(int n) const {
    if (n < lo_ || n > hi()) return 0;
    return dims_[static_cast<std::size_t>(n - lo_)];
  }
  std::size_t total_dim() const {
    std::size_t s = 0;
    for (auto d : dims_) s += d;
    return s;
  }

  /// d(n): degree n -> degree n - 1, as a dim(n-1) x dim(n) matrix.
  Matrix d(int n) const {
    if (n <= lo_ || n > hi()) return Matrix(dim(n - 1), dim(n), prime_);
    return diffs_[static_cast<std::size_t>(n - lo_ - 1)];
  }

  friend bool operator==(const ChainComplex& a, const ChainComplex& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.prime_ == b.prime_ && a.lo_ == b.lo_ && a.dims_ == b.dims_ && a.diffs_ == b.diffs_;
  }

 private:
  std::uint32_t prime_ = 2;
  int lo_ = 0;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> diffs_;
};

/// Degree range covering both complexes (empty range when both are zero).
inline std::pair<int, int> joint_range(const ChainComplex& a, const ChainComplex& b) {
  if (a.is_zero()) return {b.lo(), b.hi()};
  if (b.is_zero()) return {a.lo(), a.hi()};
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

class ChainMap {
 public:
  ChainMap() = default;

  /// component(n) must have shape target.dim(n) x source.dim(n). Checks that
  /// the components commute with the differentials.
  static ChainMap validate(ChainComplex source, ChainComplex target, const std::function<Matrix(int)>& component) {
    ChainMap f = trusted(std::move(source), std::move(target), component);
    for (int n = f.source_.lo(); n <= f.source_.hi() + 1; ++n) {
      Matrix lhs = f.target_.d(n) * f.at(n);
      Matrix rhs = f.at(n - 1) * f.source_.d(n);
      if (!(lhs == rhs)) {
        throw Error(ErrorKind::NonCommutingSquare, "map does not commute with differentials at degree " + std::to_string(n));
      }
    }
    return f;
  }

  static ChainMap trusted(ChainComplex source, ChainComplex target, const std::function<Matrix(int)>& component) {
    ChainMap f;
    f.source_ = std::move(source);
    f.target_ = std::move(target);
    if (f.source_.prime() != f.target_.prime() && !f.source_.is_zero() && !f.target_.is_zero()) {
      throw Error(ErrorKind::PrimeMismatch, "chain map between complexes over different fields");
    }
    for (int n = f.source_.lo(); n <= f.source_.hi(); ++n) {
      Matrix m = component(n);
      if (m.rows() != f.target_.dim(n) || m.cols() != f.source_.dim(n)) {
        throw Error(ErrorKind::ShapeMismatch, "component " + std::to_string(n) + " has shape " + m.shape());
      }
      f.comp_.push_back(std::move(m));
    }
    return f;
  }

  static ChainMap identity(const ChainComplex& c) {
    return trusted(c, c, [&](int n) { return Matrix::identity(c.dim(n), c.prime()); });
  }
  static ChainMap zero(const ChainComplex& s, const ChainComplex& t) {
    std::uint32_t p = s.is_zero() ? t.prime() : s.prime();
    return trusted(s, t, [&](int n) { return Matrix(t.dim(n), s.dim(n), p); });
  }

  const ChainComplex& source() const { return source_; }
  const ChainComplex& target() const { return target_; }
  std::uint32_t prime() const { return source_.is_zero() ? target_.prime() : source_.prime(); }

  Matrix at(int n) const {
    if (n < source_.lo() || n > source_.hi()) return Matrix(target_.dim(n), source_.dim(n), prime());
    return comp_[static_cast<std::size_t>(n - source_.lo())];
  }

  bool is_zero() const {
    return std::all_of(comp_.begin(), comp_.end(), [](const Matrix& m) { return m.is_zero(); });
  }

  /// this o f
  ChainMap after(const ChainMap& f) const {
    if (!(f.target_ == source_)) throw Error(ErrorKind::ShapeMismatch, "composing maps with mismatched complexes");
    return trusted(f.source_, target_, [&](int n) { return at(n) * f.at(n); });
  }

  friend ChainMap operator+(const ChainMap& a, const ChainMap& b) {
    a.check_parallel(b);
    return trusted(a.source_, a.target_, [&](int n) { return a.at(n) + b.at(n); });
  }
  friend ChainMap operator-(const ChainMap& a, const ChainMap& b) {
    a.check_parallel(b);
    return trusted(a.source_, a.target_, [&](int n) { return a.at(n) - b.at(n); });
  }
  ChainMap scaled(std::int64_t k) const {
    return trusted(source_, target_, [&](int n) { return at(n).scaled(k); });
  }

  friend bool operator==(const ChainMap& a, const ChainMap& b) {
    if (!(a.source_ == b.source_) || !(a.target_ == b.target_)) return false;
    for (int n = a.source_.lo(); n <= a.source_.hi(); ++n)
      if (!(a.at(n) == b.at(n))) return false;
    return true;
  }

 private:
  void check_parallel(const ChainMap& b) const {
    if (!(source_ == b.source_) || !(target_ == b.target_)) {
      throw Error(ErrorKind::ShapeMismatch, "adding maps with different source or target");
    }
  }

  ChainComplex source_;
  ChainComplex target_;
  std::vector<Matrix> comp_;
};

// ---------------------------------------------------------------------------
// Homology.

struct HomologyProfile {
  int lo = 0;
  std::vector<std::size_t> betti;

  std::size_t at(int n) const {
    if (n < lo || n >= lo + static_cast<int>(betti.size())) return 0;
    return betti[static_cast<std::size_t>(n - lo)];
  }
  bool acyclic() const {
    return std::all_of(betti.begin(), betti.end(), [](std::size_t b) { return b == 0; });
  }
  std::optional<int> first_nonzero() const {
    for (std::size_t i = 0; i < betti.size(); ++i)
      if (betti[i] != 0) return lo + static_cast<int>(i);
    return std::nullopt;
  }
  long euler_characteristic() const {
    long chi = 0;
    for (std::size_t i = 0; i < betti.size(); ++i) {
      long v = static_cast<long>(betti[i]);
      chi += ((lo + static_cast<int>(i)) % 2 == 0) ? v : -v;
    }
    return chi;
  }
  friend bool operator==(const HomologyProfile& a, const HomologyProfile& b) {
    int lo = std::min(a.lo, b.lo);
    int hi = std::max(a.lo + static_cast<int>(a.betti.size()), b.lo + static_cast<int>(b.betti.size()));
    for (int n = lo; n < hi; ++n)
      if (a.at(n) != b.at(n)) return false;
    return true;
  }
};

inline long euler_characteristic(const ChainComplex& c) {
  long chi = 0;
  for (int n = c.lo(); n <= c.hi(); ++n) chi += (n % 2 == 0 ? 1 : -1) * static_cast<long>(c.dim(n));
  return chi;
}

/// betti(n) = dim ker d(n) - rank d(n+1), by elimination over F_p.
inline HomologyProfile homology_dims(const ChainComplex& c) {
  HomologyProfile h;
  if (c.is_zero()) return h;
  h.lo = c.lo();
  std::vector<std::size_t> ranks;  // ranks[k] = rank d(lo + k), k = 0..len
  for (int n = c.lo(); n <= c.hi() + 1; ++n) ranks.push_back(rank(c.d(n)));
  for (int n = c.lo(); n <= c.hi(); ++n) {
    std::size_t k = static_cast<std::size_t>(n - c.lo());
    h.betti.push_back(c.dim(n) - ranks[k] - ranks[k + 1]);
  }
  return h;
}

inline ChainComplex mapping_cone(const ChainMap& f) {
  const ChainComplex& s = f.source();
  const ChainComplex& t = f.target();
  const std::uint32_t p = f.prime();
  if (s.is_zero()) return t;
  int lo = t.is_zero() ? s.lo() + 1 : std::min(t.lo(), s.lo() + 1);
  int hi = t.is_zero() ? s.hi() + 1 : std::max(t.hi(), s.hi() + 1);
  std::vector<std::size_t> dims;
  for (int n = lo; n <= hi; ++n) dims.push_back(t.dim(n) + s.dim(n - 1));
  std::vector<Matrix> diffs;
  for (int n = lo + 1; n <= hi; ++n) {
    Matrix d(t.dim(n - 1) + s.dim(n - 2), t.dim(n) + s.dim(n - 1), p);
    d.place(0, 0, t.d(n));
    d.place(0, t.dim(n), f.at(n - 1));
    d.place(t.dim(n - 1), t.dim(n), -s.d(n - 1));
    diffs.push_back(std::move(d));
  }
  return ChainComplex::trusted(p, lo, std::move(dims), std::move(diffs));
}

/// Per-degree kernel and cokernel dimensions of the induced map on homology.
struct HomologyMapDefect {
  int degree;
  std::size_t kernel;
  std::size_t cokernel;
};

inline std::vector<HomologyMapDefect> homology_map_defects(const ChainMap& f) {
  const ChainComplex& s = f.source();
  const ChainComplex& t = f.target();
  std::vector<HomologyMapDefect> out;
  auto [lo, hi] = joint_range(s, t);
  HomologyProfile hs = homology_dims(s), ht = homology_dims(t);
  for (int n = lo; n <= hi; ++n) {
    Matrix cycles = kernel_basis(s.d(n));
    Matrix boundaries = t.d(n + 1);
    Matrix image = f.at(n) * cycles;
    std::size_t rb = rank(boundaries);
    std::size_t rj = rank(hstack({image, boundaries}, t.dim(n), f.prime()));
    std::size_t r = rj - rb;
    std::size_t ker = hs.at(n) - r, coker = ht.at(n) - r;
    if (ker != 0 || coker != 0) out.push_back({n, ker, coker});
  }
  return out;
}

struct QuasiIsoResult {
  bool holds = true;
  std::optional<int> obstruction_degree;  // lowest degree where H(f) is not an iso
  std::size_t defect = 0;                 // dim ker + dim coker of H(f) there
  explicit operator bool() const { return holds; }
};

/// Decides via acyclicity of the mapping cone; on failure the lowest degree
/// where the induced map on homology is not an isomorphism is reported.
inline QuasiIsoResult is_quasi_iso(const ChainMap& f) {
  QuasiIsoResult r;
  if (homology_dims(mapping_cone(f)).acyclic()) return r;
  r.holds = false;
  auto defects = homology_map_defects(f);
  if (!defects.empty()) {
    r.obstruction_degree = defects.front().degree;
    r.defect = defects.front().kernel + defects.front().cokernel;
  }
  return r;
}

/// Same question answered degree by degree on homology.
inline bool induces_homology_iso(const ChainMap& f) { return homology_map_defects(f).empty(); }

inline bool is_degreewise_epi(const ChainMap& f) {
  auto [lo, hi] = joint_range(f.source(), f.target());
  for (int n = lo; n <= hi; ++n)
    if (rank(f.at(n)) != f.target().dim(n)) return false;
  return true;
}

inline bool is_degreewise_mono(const ChainMap& f) {
  auto [lo, hi] = joint_range(f.source(), f.target());
  for (int n = lo; n <= hi; ++n)
    if (rank(f.at(n)) != f.source().dim(n)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Direct sums.

inline std::uint32_t common_prime(const std::vector<ChainComplex>& cs, std::uint32_t fallback) {
  std::optional<std::uint32_t> p;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    if (p && *p != c.prime()) throw Error(ErrorKind::PrimeMismatch, "summands over different fields");
    p = c.prime();
  }
  return p.value_or(fallback);
}

inline std::pair<int, int> joint_range(const std::vector<ChainComplex>& cs) {
  std::optional<int> lo, hi;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    lo = lo ? std::min(*lo, c.lo()) : c.lo();
    hi = hi ? std::max(*hi, c.hi()) : c.hi();
  }
  if (!lo) return {0, -1};
  return {*lo, *hi};
}

/// Offset of summand k in degree n of the direct sum of cs.
inline std::size_t summand_offset(const std::vector<ChainComplex>& cs, std::size_t k, int n) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < k; ++i) off += cs[i].dim(n);
  return off;
}

inline ChainComplex direct_sum(const std::vector<ChainComplex>& cs, std::uint32_t prime = 2) {
  const std::uint32_t p = common_prime(cs, prime);
  auto [lo, hi] = joint_range(cs);
  if (lo > hi) return ChainComplex(p);
  std::vector<std::size_t> dims;
  std::vector<Matrix> diffs;
  for (int n = lo; n <= hi; ++n) {
    std::size_t d = 0;
    for (const auto& c : cs) d += c.dim(n);
    dims.push_back(d);
  }
  for (int n = lo + 1; n <= hi; ++n) {
    std::vector<Matrix> blocks;
    for (const auto& c : cs) blocks.push_back(c.d(n));
    diffs.push_back(block_diag(blocks, p));
  }
  return ChainComplex::trusted(p, lo, std::move(dims), std::move(diffs));
}

inline ChainMap direct_sum(const std::vector<ChainMap>& fs, std::uint32_t prime = 2) {
  std::vector<ChainComplex> ss, ts;
  for (const auto& f : fs) {
    ss.push_back(f.source());
    ts.push_back(f.target());
  }
  ChainComplex s = direct_sum(ss, prime), t = direct_sum(ts, prime);
  const std::uint32_t p = s.is_zero() ? t.prime() : s.prime();
  return ChainMap::trusted(s, t, [&](int n) {
    std::vector<Matrix> blocks;
    for (const auto& f : fs) blocks.push_back(f.at(n));
    return blocks.empty() ? Matrix(0, 0, p) : block_diag(blocks, p);
  });
}

/// Inclusion of summand k into the direct sum of cs.
inline ChainMap sum_injection(const std::vector<ChainComplex>& cs, const ChainComplex& sum, std::size_t k) {
  return ChainMap::trusted(cs[k], sum, [&](int n) {
    Matrix m(sum.dim(n), cs[k].dim(n), sum.prime());
    m.place(summand_offset(cs, k, n), 0, Matrix::identity(cs[k].dim(n), sum.prime()));
    return m;
  });
}

inline ChainMap sum_projection(const std::vector<ChainComplex>& cs, const ChainComplex& sum, std::size_t k) {
  return ChainMap::trusted(sum, cs[k], [&](int n) {
    Matrix m(cs[k].dim(n), sum.dim(n), sum.prime());
    m.place(0, summand_offset(cs, k, n), Matrix::identity(cs[k].dim(n), sum.prime()));
    return m;
  });
}

/// The map from a direct sum determined by one map out of each summand.
inline ChainMap copair(const std::vector<ChainMap>& fs, const ChainComplex& target) {
  std::vector<ChainComplex> ss;
  for (const auto& f : fs) ss.push_back(f.source());
  ChainComplex s = direct_sum(ss, target.prime());
  return ChainMap::trusted(s, target, [&](int n) {
    Matrix m(target.dim(n), s.dim(n), target.prime());
    for (std::size_t k = 0; k < fs.size(); ++k) m.place(0, summand_offset(ss, k, n), fs[k].at(n));
    return m;
  });
}

/// The map into a direct sum determined by one map into each summand.
inline ChainMap pair_into(const ChainComplex& source, const std::vector<ChainMap>& fs) {
  std::vector<ChainComplex> ts;
  for (const auto& f : fs) ts.push_back(f.target());
  ChainComplex t = direct_sum(ts, source.prime());
  return ChainMap::trusted(source, t, [&](int n) {
    Matrix m(t.dim(n), source.dim(n), source.prime());
    for (std::size_t k = 0; k < fs.size(); ++k) m.place(summand_offset(ts, k, n), 0, fs[k].at(n));
    return m;
  });
}

// ---------------------------------------------------------------------------
// Tensor products, with the Koszul sign d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy.

namespace detail {
// Summands of (C (x) P)_n are C_i (x) P_{n-i} for increasing i.
inline std::size_t tensor_offset(const ChainComplex& c, const ChainComplex& p, int n, int i) {
  std::size_t off = 0;
  for (int k = c.lo(); k < i; ++k) off += c.dim(k) * p.dim(n - k);
  return off;
}
}  // namespace detail

inline ChainComplex tensor(const ChainComplex& c, const ChainComplex& p) {
  if (!c.is_zero() && !p.is_zero() && c.prime() != p.prime()) {
    throw Error(ErrorKind::PrimeMismatch, "tensor of complexes over different fields");
  }
  const std::uint32_t q = c.is_zero() ? p.prime() : c.prime();
  if (c.is_zero() || p.is_zero()) return ChainComplex(q);
  const int lo = c.lo() + p.lo(), hi = c.hi() + p.hi();
  std::vector<std::size_t> dims;
  for (int n = lo; n <= hi; ++n) dims.push_back(detail::tensor_offset(c, p, n, c.hi() + 1));
  std::vector<Matrix> diffs;
  for (int n = lo + 1; n <= hi; ++n) {
    Matrix d(dims[static_cast<std::size_t>(n - 1 - lo)], dims[static_cast<std::size_t>(n - lo)], q);
    for (int i = c.lo(); i <= c.hi(); ++i) {
      const int j = n - i;
      if (c.dim(i) == 0 || p.dim(j) == 0) continue;
      const std::size_t col = detail::tensor_offset(c, p, n, i);
      if (c.dim(i - 1) > 0) {
        d.place(detail::tensor_offset(c, p, n - 1, i - 1), col, kron(c.d(i), Matrix::identity(p.dim(j), q)));
      }
      if (p.dim(j - 1) > 0) {
        Matrix block = kron(Matrix::identity(c.dim(i), q), p.d(j));
        d.place(detail::tensor_offset(c, p, n - 1, i), col, i % 2 == 0 ? block : -block);
      }
    }
    diffs.push_back(std::move(d));
  }
  return ChainComplex::trusted(q, lo, std::move(dims), std::move(diffs));
}

inline ChainMap tensor(const ChainMap& f, const ChainMap& g) {
  ChainComplex s = tensor(f.source(), g.source());
  ChainComplex t = tensor(f.target(), g.target());
  const std::uint32_t q = f.prime();
  return ChainMap::trusted(s, t, [&](int n) {
    Matrix m(t.dim(n), s.dim(n), q);
    for (int i = f.source().lo(); i <= f.source().hi(); ++i) {
      const int j = n - i;
      if (f.source().dim(i) == 0 || g.source().dim(j) == 0) continue;
      if (f.target().dim(i) == 0 || g.target().dim(j) == 0) continue;
      m.place(detail::tensor_offset(f.target(), g.target(), n, i), detail::tensor_offset(f.source(), g.source(), n, i),
              kron(f.at(i), g.at(j)));
    }
    return m;
  });
}

inline ChainComplex tensor_with(const ChainComplex& c, const ChainComplex& p) { return tensor(c, p); }
inline ChainMap tensor_with(const ChainMap& f, const ChainComplex& p) { return tensor(f, ChainMap::identity(p)); }

// ---------------------------------------------------------------------------
// Kernels and cokernels of chain maps, degreewise.

struct CokernelResult {
  ChainComplex object;
  ChainMap projection;          // target(f) -> object
  std::vector<Matrix> section;  // per degree, projection * section = I
  int lo = 0;

  Matrix section_at(int n) const {
    if (n < lo || n >= lo + static_cast<int>(section.size())) {
      return Matrix(projection.source().dim(n), object.dim(n), projection.prime());
    }
    return section[static_cast<std::size_t>(n - lo)];
  }
};

inline CokernelResult chain_cokernel(const ChainMap& f) {
  const ChainComplex& w = f.target();
  const std::uint32_t p = f.prime();
  CokernelResult r;
  if (w.is_zero()) {
    r.object = ChainComplex(p);
    r.projection = ChainMap::zero(w, r.object);
    return r;
  }
  std::vector<Quotient> qs;
  std::vector<std::size_t> dims;
  for (int n = w.lo(); n <= w.hi(); ++n) {
    qs.push_back(cokernel(f.at(n)));
    dims.push_back(qs.back().projection.rows());
  }
  auto q_at = [&](int n) -> const Quotient& { return qs[static_cast<std::size_t>(n - w.lo())]; };
  std::vector<Matrix> diffs;
  for (int n = w.lo() + 1; n <= w.hi(); ++n) diffs.push_back(q_at(n - 1).projection * w.d(n) * q_at(n).section);
  // Keep the untrimmed layout for sections: trusted() may trim the range.
  ChainComplex obj = ChainComplex::trusted(p, w.lo(), dims, std::move(diffs));
  r.object = obj;
  r.lo = w.lo();
  for (auto& q : qs) r.section.push_back(q.section);
  r.projection = ChainMap::trusted(w, obj, [&](int n) { return q_at(n).projection; });
  return r;
}

struct KernelResult {
  ChainComplex object;
  ChainMap inclusion;                // object -> source(f)
  std::vector<Matrix> left_inverse;  // per degree, left_inverse * inclusion = I
  int lo = 0;

  Matrix left_inverse_at(int n) const {
    if (n < lo || n >= lo + static_cast<int>(left_inverse.size())) {
      return Matrix(object.dim(n), inclusion.target().dim(n), inclusion.prime());
    }
    return left_inverse[static_cast<std::size_t>(n - lo)];
  }
};

inline KernelResult chain_kernel(const ChainMap& f) {
  const ChainComplex& w = f.source();
  const std::uint32_t p = f.prime();
  KernelResult r;
  if (w.is_zero()) {
    r.object = ChainComplex(p);
    r.inclusion = ChainMap::zero(r.object, w);
    return r;
  }
  std::vector<Matrix> ks, ls;
  std::vector<std::size_t> dims;
  for (int n = w.lo(); n <= w.hi(); ++n) {
    ks.push_back(kernel_basis(f.at(n)));
    ls.push_back(ks.back().cols() == 0 ? Matrix(0, w.dim(n), p) : left_inverse(ks.back()));
    dims.push_back(ks.back().cols());
  }
  auto idx = [&](int n) { return static_cast<std::size_t>(n - w.lo()); };
  std::vector<Matrix> diffs;
  for (int n = w.lo() + 1; n <= w.hi(); ++n) diffs.push_back(ls[idx(n - 1)] * w.d(n) * ks[idx(n)]);
  ChainComplex obj = ChainComplex::trusted(p, w.lo(), dims, std::move(diffs));
  r.object = obj;
  r.lo = w.lo();
  r.left_inverse = ls;
  r.inclusion = ChainMap::trusted(obj, w, [&](int n) { return ks[idx(n)]; });
  return r;
}

// ---------------------------------------------------------------------------
// Finite colimits and limits of diagrams of complexes indexed by a FinCat.

inline void check_functor_values(const FinCat& shape, const std::vector<ChainComplex>& values,
                                 const std::vector<ChainMap>& maps) {
  if (values.size() != shape.object_count() || maps.size() != shape.morphism_count()) {
    throw Error(ErrorKind::NotAFunctor, "wrong number of values or maps");
  }
  for (MorId m = 0; m < shape.morphism_count(); ++m) {
    if (!(maps[m].source() == values[shape.source(m)]) || !(maps[m].target() == values[shape.target(m)])) {
      throw Error(ErrorKind::NotAFunctor, "map of '" + shape.morphism_name(m) + "' has wrong source or target");
    }
  }
  for (ObjId o = 0; o < shape.object_count(); ++o)
    if (!(maps[shape.identity(o)] == ChainMap::identity(values[o]))) {
      throw Error(ErrorKind::NotAFunctor, "identity of '" + shape.object_name(o) + "' not sent to an identity");
    }
  for (MorId f = 0; f < shape.morphism_count(); ++f)
    for (MorId g : shape.out(shape.target(f))) {
      if (shape.is_identity(f) || shape.is_identity(g)) continue;
      if (!(maps[shape.compose(g, f)] == maps[g].after(maps[f]))) {
        throw Error(ErrorKind::NotAFunctor, "composite (" + shape.morphism_name(g) + ", " + shape.morphism_name(f) +
                                                ") not preserved");
      }
    }
}

/// Colimit presented as the cokernel of  (+)_{m: a->b} V_a -> (+)_o V_o,
/// x at m |-> V(m)x at b - x at a, over non-identity morphisms.
struct ColimitResult {
  ChainComplex object;
  std::vector<ChainMap> legs;         // V_o -> colim
  std::vector<ChainComplex> summands; // the values, in object order
  ChainComplex sum;                   // (+)_o V_o
  CokernelResult quotient;            // sum -> colim
};

inline ColimitResult finite_colimit(const FinCat& shape, const std::vector<ChainComplex>& values,
                                    const std::vector<ChainMap>& maps, std::uint32_t prime, bool check = true) {
  if (check) check_functor_values(shape, values, maps);
  ColimitResult r;
  r.summands = values;
  r.sum = direct_sum(values, prime);
  std::vector<ChainComplex> rel_summands;
  std::vector<MorId> rels;
  for (MorId m = 0; m < shape.morphism_count(); ++m) {
    if (shape.is_identity(m)) continue;
    rels.push_back(m);
    rel_summands.push_back(values[shape.source(m)]);
  }
  ChainComplex rel = direct_sum(rel_summands, prime);
  const std::uint32_t p = r.sum.is_zero() ? prime : r.sum.prime();
  ChainMap delta = ChainMap::trusted(rel, r.sum, [&](int n) {
    Matrix d(r.sum.dim(n), rel.dim(n), p);
    for (std::size_t k = 0; k < rels.size(); ++k) {
      MorId m = rels[k];
      const std::size_t col = summand_offset(rel_summands, k, n);
      const std::size_t dim = values[shape.source(m)].dim(n);
      if (dim == 0) continue;
      Matrix vm = maps[m].at(n);
      const std::size_t trow = summand_offset(values, shape.target(m), n);
      const std::size_t srow = summand_offset(values, shape.source(m), n);
      for (std::size_t i = 0; i < vm.rows(); ++i)
        for (std::size_t j = 0; j < dim; ++j) d.set(trow + i, col + j, vm(i, j));
      Fp f(p);
      for (std::size_t j = 0; j < dim; ++j) d.set(srow + j, col + j, f.sub(d(srow + j, col + j), 1));
    }
    return d;
  });
  r.quotient = chain_cokernel(delta);
  r.object = r.quotient.object;
  for (ObjId o = 0; o < shape.object_count(); ++o) r.legs.push_back(r.quotient.projection.after(sum_injection(values, r.sum, o)));
  return r;
}

/// Limit presented as the kernel of  (+)_o V_o -> (+)_{m: a->b} V_b,
/// v |-> V(m) v_a - v_b, over non-identity morphisms.
struct LimitResult {
  ChainComplex object;
  std::vector<ChainMap> legs;  // lim -> V_o
  std::vector<ChainComplex> summands;
  ChainComplex sum;
  KernelResult kernel;  // lim -> sum
};

inline LimitResult finite_limit(const FinCat& shape, const std::vector<ChainComplex>& values,
                                const std::vector<ChainMap>& maps, std::uint32_t prime, bool check = true) {
  if (check) check_functor_values(shape, values, maps);
  LimitResult r;
  r.summands = values;
  r.sum = direct_sum(values, prime);
  std::vector<ChainComplex> rel_summands;
  std::vector<MorId> rels;
  for (MorId m = 0; m < shape.morphism_count(); ++m) {
    if (shape.is_identity(m)) continue;
    rels.push_back(m);
    rel_summands.push_back(values[shape.target(m)]);
  }
  ChainComplex rel = direct_sum(rel_summands, prime);
  const std::uint32_t p = r.sum.is_zero() ? prime : r.sum.prime();
  ChainMap delta = ChainMap::trusted(r.sum, rel, [&](int n) {
    Matrix d(rel.dim(n), r.sum.dim(n), p);
    Fp f(p);
    for (std::size_t k = 0; k < rels.size(); ++k) {
      MorId m = rels[k];
      const std::size_t row = summand_offset(rel_summands, k, n);
      const std::size_t dim = values[shape.target(m)].dim(n);
      if (dim == 0) continue;
      Matrix vm = maps[m].at(n);
      const std::size_t scol = summand_offset(values, shape.source(m), n);
      const std::size_t tcol = summand_offset(values, shape.target(m), n);
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < vm.cols(); ++j) d.set(row + i, scol + j, vm(i, j));
      for (std::size_t i = 0; i < dim; ++i) d.set(row + i, tcol + i, f.sub(d(row + i, tcol + i), 1));
    }
    return d;
  });
  r.kernel = chain_kernel(delta);
  r.object = r.kernel.object;
  for (ObjId o = 0; o < shape.object_count(); ++o) r.legs.push_back(sum_projection(values, r.sum, o).after(r.kernel.inclusion));
  return r;
}

// ---------------------------------------------------------------------------
// Lifting problems, solved as linear systems.

/// Finds h: target(i) -> source(p) with h o i = top and p o h = bottom, if any.
inline std::optional<ChainMap> solve_lifting(const ChainMap& i, const ChainMap& p, const ChainMap& top,
                                             const ChainMap& bottom) {
  if (!(p.after(top) == bottom.after(i))) throw Error(ErrorKind::NonCommutingSquare, "p o top != bottom o i");
  const ChainComplex& b = i.target();
  const ChainComplex& x = p.source();
  const std::uint32_t q = i.prime();
  if (b.is_zero()) return ChainMap::zero(b, x);
  BlockSystem sys(q);
  std::vector<std::size_t> h;
  for (int n = b.lo(); n <= b.hi(); ++n) h.push_back(sys.add_unknown(x.dim(n), b.dim(n)));
  auto hid = [&](int n) { return h[static_cast<std::size_t>(n - b.lo())]; };
  for (int n = b.lo(); n <= b.hi(); ++n) {
    sys.add_equation({{std::nullopt, hid(n), i.at(n)}}, top.at(n));
    sys.add_equation({{p.at(n), hid(n), std::nullopt}}, bottom.at(n));
    std::vector<BlockSystem::Term> terms{{x.d(n), hid(n), std::nullopt}};
    if (n > b.lo()) terms.push_back({std::nullopt, hid(n - 1), -b.d(n)});
    sys.add_equation(terms, Matrix(x.dim(n - 1), b.dim(n), q));
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  return ChainMap::trusted(b, x, [&](int n) { return (*sol)[static_cast<std::size_t>(n - b.lo())]; });
}

/// Basis of the space of chain maps source -> target.
inline std::vector<ChainMap> chain_map_basis(const ChainComplex& s, const ChainComplex& t) {
  if (s.is_zero()) return {};
  const std::uint32_t q = s.prime();
  BlockSystem sys(q);
  for (int n = s.lo(); n <= s.hi(); ++n) sys.add_unknown(t.dim(n), s.dim(n));
  for (int n = s.lo(); n <= s.hi() + 1; ++n) {
    std::vector<BlockSystem::Term> terms;
    if (n <= s.hi()) terms.push_back({t.d(n), static_cast<std::size_t>(n - s.lo()), std::nullopt});
    if (n > s.lo()) terms.push_back({std::nullopt, static_cast<std::size_t>(n - 1 - s.lo()), -s.d(n)});
    sys.add_equation(terms, Matrix(t.dim(n - 1), s.dim(n), q));
  }
  std::vector<ChainMap> out;
  for (auto& blocks : sys.homogeneous_basis()) {
    out.push_back(ChainMap::trusted(s, t, [&](int n) { return blocks[static_cast<std::size_t>(n - s.lo())]; }));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random complexes with homology known by construction.

using Rng = std::mt19937_64;

/// Uniform-ish draw in [0, n); deterministic across platforms.
inline std::uint64_t draw(Rng& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::uint32_t p) {
  Matrix m(rows, cols, p);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, static_cast<Elem>(draw(rng, p)));
  return m;
}

/// Random invertible matrix as a permuted product of unit lower and
/// invertible upper triangular factors.
inline Matrix random_invertible(Rng& rng, std::size_t n, std::uint32_t p) {
  Matrix l = Matrix::identity(n, p), u(n, n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) l.set(i, j, static_cast<Elem>(draw(rng, p)));
    u.set(i, i, static_cast<Elem>(1 + draw(rng, p - 1)));
    for (std::size_t j = i + 1; j < n; ++j) u.set(i, j, static_cast<Elem>(draw(rng, p)));
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[draw(rng, i)]);
  Matrix pm(n, n, p);
  for (std::size_t i = 0; i < n; ++i) pm.set(i, perm[i], 1);
  return pm * l * u;
}

struct RandomComplex {
  ChainComplex complex;
  HomologyProfile expected;  // from the sphere summands
};

/// Direct sum of random spheres and disks inside [lo, hi] with at most
/// max_dim per degree, conjugated by a random change of basis in each degree.
inline RandomComplex random_complex(Rng& rng, int lo, int hi, std::size_t max_dim, std::uint32_t p) {
  RandomComplex out;
  if (hi < lo || max_dim == 0) {
    out.complex = ChainComplex(p);
    return out;
  }
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::size_t> dims(len, 0), spheres(len, 0);
  std::vector<std::pair<int, bool>> summands;  // (degree, is_disk); a disk at n spans n, n-1
  const std::size_t attempts = 1 + draw(rng, len * max_dim + 1);
  for (std::size_t a = 0; a < attempts; ++a) {
    std::size_t k = draw(rng, len);
    bool disk = k > 0 && draw(rng, 2) == 0;
    if (disk) {
      if (dims[k] < max_dim && dims[k - 1] < max_dim) {
        ++dims[k];
        ++dims[k - 1];
        summands.push_back({lo + static_cast<int>(k), true});
      }
    } else if (dims[k] < max_dim) {
      ++dims[k];
      ++spheres[k];
      summands.push_back({lo + static_cast<int>(k), false});
    }
  }
  // Standard-basis differential: each disk contributes a 1 from its top cell to its bottom cell.
  std::vector<std::size_t> fill(len, 0);
  std::vector<Matrix> diffs;
  for (std::size_t k = 1; k < len; ++k) diffs.emplace_back(dims[k - 1], dims[k], p);
  for (const auto& [deg, disk] : summands) {
    std::size_t k = static_cast<std::size_t>(deg - lo);
    if (disk) {
      diffs[k - 1].set(fill[k - 1], fill[k], 1);
      ++fill[k - 1];
    }
    ++fill[k];
  }
  std::vector<Matrix> basis, inv;
  for (std::size_t k = 0; k < len; ++k) {
    basis.push_back(random_invertible(rng, dims[k], p));
    inv.push_back(*inverse(basis.back()));
  }
  for (std::size_t k = 1; k < len; ++k) diffs[k - 1] = basis[k - 1] * diffs[k - 1] * inv[k];
  out.complex = ChainComplex::trusted(p, lo, dims, std::move(diffs));
  out.expected.lo = lo;
  out.expected.betti = spheres;
  return out;
}

inline RandomComplex random_complex(std::uint64_t seed, int lo, int hi, std::size_t max_dim, std::uint32_t p) {
  Rng rng(seed);
  return random_complex(rng, lo, hi, max_dim, p);
}

/// Random element of the space of chain maps s -> t.
inline ChainMap random_chain_map(Rng& rng, const ChainComplex& s, const ChainComplex& t) {
  const std::uint32_t p = s.is_zero() ? t.prime() : s.prime();
  ChainMap f = ChainMap::zero(s, t);
  for (const auto& b : chain_map_basis(s, t)) f = f + b.scaled(static_cast<std::int64_t>(draw(rng, p)));
  return f;
}

}  // namespace codescent

#endif  // CODESCENT_CHAIN_HPP
