#ifndef CODESCENT_FIELD_HPP
#define CODESCENT_FIELD_HPP

// Dense exact linear algebra over the prime field F_p.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codescent/error.hpp"

namespace codescent {

using Elem = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Arithmetic in F_p. p must be a prime below 2^31 so products fit in 64 bits.
class Fp {
 public:
  explicit Fp(std::uint32_t p) : p_(p) {
    if (!is_prime(p) || p >= (1u << 31)) {
      throw Error(ErrorKind::PrimeMismatch, "not a supported prime: " + std::to_string(p));
    }
  }

  std::uint32_t p() const { return p_; }

  Elem reduce(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    return static_cast<Elem>(r < 0 ? r + p_ : r);
  }
  Elem add(Elem a, Elem b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Elem>(s >= p_ ? s - p_ : s);
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : static_cast<Elem>(a + p_ - b); }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return static_cast<Elem>((std::uint64_t{a} * b) % p_); }
  Elem inv(Elem a) const {
    if (a == 0) throw Error(ErrorKind::ShapeMismatch, "inverse of zero in F_p");
    // a^(p-2)
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e > 0) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<Elem>(result);
  }

 private:
  std::uint32_t p_;
};

/// Dense row-major matrix over F_p. The prime travels with the value so that
/// mixing fields is caught at the first arithmetic operation.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, std::uint32_t prime)
      : rows_(rows), cols_(cols), prime_(prime), data_(rows * cols, 0) {}

  static Matrix zeros(std::size_t rows, std::size_t cols, std::uint32_t prime) {
    return Matrix(rows, cols, prime);
  }
  static Matrix identity(std::size_t n, std::uint32_t prime) {
    Matrix m(n, n, prime);
    for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
    return m;
  }
  /// Entries are reduced mod p; negative values are allowed.
  static Matrix from_flat(std::size_t rows, std::size_t cols, std::uint32_t prime,
                          const std::vector<std::int64_t>& flat) {
    if (flat.size() != rows * cols) {
      throw Error(ErrorKind::ShapeMismatch, "expected " + std::to_string(rows * cols) +
                                                " entries, got " + std::to_string(flat.size()));
    }
    Fp f(prime);
    Matrix m(rows, cols, prime);
    for (std::size_t i = 0; i < flat.size(); ++i) m.data_[i] = f.reduce(flat[i]);
    return m;
  }
  static Matrix from_rows(std::uint32_t prime,
                          std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<std::int64_t> flat;
    for (const auto& row : rows) {
      if (row.size() != c) throw Error(ErrorKind::ShapeMismatch, "ragged matrix literal");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return from_flat(r, c, prime, flat);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t prime() const { return prime_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Elem v) { data_[r * cols_ + c] = v; }
  Elem* row(std::size_t r) { return data_.data() + r * cols_; }
  const Elem* row(std::size_t r) const { return data_.data() + r * cols_; }
  const std::vector<Elem>& data() const { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Elem v) { return v == 0; });
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_ &&
           (a.prime_ == b.prime_ || a.data_.empty());
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_, prime_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = data_[i * cols_ + j];
    return t;
  }

  Matrix scaled(std::int64_t k) const {
    Fp f(prime_);
    Elem kk = f.reduce(k);
    Matrix m = *this;
    for (auto& v : m.data_) v = f.mul(v, kk);
    return m;
  }

  Matrix operator-() const { return scaled(-1); }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "+");
    Fp f(a.prime_);
    Matrix m = a;
    for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] = f.add(m.data_[i], b.data_[i]);
    return m;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same_shape(a, b, "-");
    Fp f(a.prime_);
    Matrix m = a;
    for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] = f.sub(m.data_[i], b.data_[i]);
    return m;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw Error(ErrorKind::ShapeMismatch, "product of " + a.shape() + " and " + b.shape());
    }
    check_prime(a, b);
    const std::uint64_t p = a.prime_;
    Matrix m(a.rows_, b.cols_, a.prime_);
    std::vector<std::uint64_t> acc(b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      const Elem* arow = a.row(i);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const std::uint64_t aik = arow[k];
        if (aik == 0) continue;
        const Elem* brow = b.row(k);
        for (std::size_t j = 0; j < b.cols_; ++j) {
          acc[j] += aik * brow[j];
          if (acc[j] >= (std::uint64_t{1} << 62)) acc[j] %= p;
        }
      }
      Elem* out = m.row(i);
      for (std::size_t j = 0; j < b.cols_; ++j) out[j] = static_cast<Elem>(acc[j] % p);
    }
    return m;
  }

  /// Copies src into this matrix with its top-left corner at (r0, c0).
  void place(std::size_t r0, std::size_t c0, const Matrix& src) {
    if (r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_) {
      throw Error(ErrorKind::ShapeMismatch, "block " + src.shape() + " does not fit in " + shape());
    }
    for (std::size_t i = 0; i < src.rows_; ++i)
      std::copy(src.row(i), src.row(i) + src.cols_, row(r0 + i) + c0);
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix m(nr, nc, prime_);
    for (std::size_t i = 0; i < nr; ++i)
      std::copy(row(r0 + i) + c0, row(r0 + i) + c0 + nc, m.row(i));
    return m;
  }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

 private:
  static void check_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      throw Error(ErrorKind::ShapeMismatch, std::string("operator") + op + " on " + a.shape() +
                                                " and " + b.shape());
    }
    check_prime(a, b);
  }
  static void check_prime(const Matrix& a, const Matrix& b) {
    if (a.prime_ != b.prime_) {
      throw Error(ErrorKind::PrimeMismatch, "F_" + std::to_string(a.prime_) + " vs F_" +
                                                std::to_string(b.prime_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t prime_ = 2;
  std::vector<Elem> data_;
};

inline Matrix hstack(const std::vector<Matrix>& blocks, std::size_t rows, std::uint32_t prime) {
  std::size_t cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Matrix m(rows, cols, prime);
  std::size_t c = 0;
  for (const auto& b : blocks) {
    m.place(0, c, b);
    c += b.cols();
  }
  return m;
}

inline Matrix vstack(const std::vector<Matrix>& blocks, std::size_t cols, std::uint32_t prime) {
  std::size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix m(rows, cols, prime);
  std::size_t r = 0;
  for (const auto& b : blocks) {
    m.place(r, 0, b);
    r += b.rows();
  }
  return m;
}

inline Matrix block_diag(const std::vector<Matrix>& blocks, std::uint32_t prime) {
  std::size_t rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  Matrix m(rows, cols, prime);
  std::size_t r = 0, c = 0;
  for (const auto& b : blocks) {
    m.place(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return m;
}

/// Kronecker product; the (i,j) block of the result is a(i,j) * b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Fp f(a.prime());
  Matrix m(a.rows() * b.rows(), a.cols() * b.cols(), a.prime());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Elem aij = a(i, j);
      if (aij == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m.set(i * b.rows() + k, j * b.cols() + l, f.mul(aij, b(k, l)));
    }
  return m;
}

struct Echelon {
  Matrix reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination. Only the first `ncols` columns are used for
/// pivoting (defaults to all), which lets callers reduce augmented systems.
inline Echelon rref(Matrix m, std::size_t ncols = static_cast<std::size_t>(-1)) {
  Fp f(m.prime());
  const std::uint64_t p = m.prime();
  ncols = std::min(ncols, m.cols());
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r) std::swap_ranges(m.row(sel), m.row(sel) + m.cols(), m.row(r));
    Elem inv = f.inv(m(r, c));
    Elem* prow = m.row(r);
    for (std::size_t j = c; j < m.cols(); ++j) prow[j] = f.mul(prow[j], inv);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      Elem* irow = m.row(i);
      const std::uint64_t factor = irow[c];
      if (factor == 0) continue;
      const std::uint64_t nf = p - factor;
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (prow[j] != 0) irow[j] = static_cast<Elem>((irow[j] + nf * prow[j]) % p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) {
  if (m.empty()) return 0;
  return rref(m).pivots.size();
}

/// Columns form a basis of the null space of m.
inline Matrix kernel_basis(const Matrix& m) {
  const std::size_t n = m.cols();
  Echelon e = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto c : e.pivots) is_pivot[c] = true;
  Fp f(m.prime());
  Matrix k(n, n - e.pivots.size(), m.prime());
  std::size_t col = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    k.set(free, col, 1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      k.set(e.pivots[i], col, f.neg(e.reduced(i, free)));
    }
    ++col;
  }
  return k;
}

/// Columns form a basis of the column space of m (a subset of m's columns).
inline Matrix image_basis(const Matrix& m) {
  Echelon e = rref(m);
  Matrix b(m.rows(), e.pivots.size(), m.prime());
  for (std::size_t j = 0; j < e.pivots.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) b.set(i, j, m(i, e.pivots[j]));
  return b;
}

/// Returns some X with a * X = b, or nothing if the system is inconsistent.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "solve: " + a.shape() + " vs rhs " + b.shape());
  }
  Matrix aug = hstack({a, b}, a.rows(), a.prime());
  Echelon e = rref(std::move(aug), a.cols());
  const std::size_t rk = e.pivots.size();
  for (std::size_t i = rk; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      if (e.reduced(i, a.cols() + j) != 0) return std::nullopt;
  Matrix x(a.cols(), b.cols(), a.prime());
  for (std::size_t i = 0; i < rk; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x.set(e.pivots[i], j, e.reduced(i, a.cols() + j));
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  return solve(m, Matrix::identity(m.rows(), m.prime()));
}

/// For m of full column rank, returns L with L * m = I.
inline Matrix left_inverse(const Matrix& m) {
  auto lt = solve(m.transposed(), Matrix::identity(m.cols(), m.prime()));
  if (!lt) throw Error(ErrorKind::ShapeMismatch, "left_inverse: matrix lacks full column rank");
  return lt->transposed();
}

/// A surjection W -> W / im(A) in coordinates, with a chosen section.
struct Quotient {
  Matrix projection;  // r x m, kernel = column space of A, full row rank
  Matrix section;     // m x r, projection * section = I
};

inline Quotient cokernel(const Matrix& a) {
  const std::size_t m = a.rows();
  Matrix basis = image_basis(a);
  Matrix ext = hstack({basis, Matrix::identity(m, a.prime())}, m, a.prime());
  Echelon e = rref(ext);
  // Pivots among the identity columns select the complement.
  std::vector<std::size_t> chosen;
  for (auto c : e.pivots) chosen.push_back(c);
  Matrix full(m, m, a.prime());
  for (std::size_t j = 0; j < chosen.size(); ++j)
    for (std::size_t i = 0; i < m; ++i) full.set(i, j, ext(i, chosen[j]));
  Matrix inv = *inverse(full);
  const std::size_t k = basis.cols();
  const std::size_t r = m - k;
  Quotient q{inv.block(k, 0, r, m), Matrix(m, r, a.prime())};
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < m; ++i) q.section.set(i, j, ext(i, chosen[k + j]));
  return q;
}

/// Linear system whose unknowns are matrix blocks U_k and whose equations have
/// the form  sum_t L_t * U_{k_t} * R_t = C  (L or R may be the identity).
class BlockSystem {
 public:
  explicit BlockSystem(std::uint32_t prime) : prime_(prime) {}

  std::size_t add_unknown(std::size_t rows, std::size_t cols) {
    unknowns_.push_back({rows, cols, total_});
    total_ += rows * cols;
    return unknowns_.size() - 1;
  }

  struct Term {
    std::optional<Matrix> left;  // nullopt = identity
    std::size_t unknown;
    std::optional<Matrix> right;  // nullopt = identity
  };

  void add_equation(const std::vector<Term>& terms, const Matrix& rhs) {
    Fp f(prime_);
    const std::size_t base = rows_.size();
    for (std::size_t i = 0; i < rhs.rows() * rhs.cols(); ++i) {
      rows_.emplace_back();
      rhs_.push_back(rhs.data()[i]);
    }
    for (const auto& t : terms) {
      const auto& u = unknowns_.at(t.unknown);
      const std::size_t lr = t.left ? t.left->rows() : u.rows;
      const std::size_t lc = t.left ? t.left->cols() : u.rows;
      const std::size_t rr = t.right ? t.right->rows() : u.cols;
      const std::size_t rc = t.right ? t.right->cols() : u.cols;
      if (lr != rhs.rows() || rc != rhs.cols() || lc != u.rows || rr != u.cols) {
        throw Error(ErrorKind::ShapeMismatch, "BlockSystem: inconsistent term shapes");
      }
      for (std::size_t i = 0; i < lr; ++i)
        for (std::size_t r = 0; r < lc; ++r) {
          Elem a = t.left ? (*t.left)(i, r) : Elem(i == r ? 1 : 0);
          if (a == 0) continue;
          for (std::size_t s = 0; s < rr; ++s)
            for (std::size_t j = 0; j < rc; ++j) {
              Elem b = t.right ? (*t.right)(s, j) : Elem(s == j ? 1 : 0);
              if (b == 0) continue;
              auto& row = rows_[base + i * rc + j];
              row.emplace_back(u.offset + r * u.cols + s, f.mul(a, b));
            }
        }
    }
  }

  std::size_t unknown_count() const { return total_; }

  /// One solution (free variables zero), split back into blocks.
  std::optional<std::vector<Matrix>> solve() const {
    auto x = codescent::solve(dense(), rhs_column());
    if (!x) return std::nullopt;
    return split(*x, 0);
  }

  /// Basis of the homogeneous solution space, each element split into blocks.
  std::vector<std::vector<Matrix>> homogeneous_basis() const {
    Matrix k = kernel_basis(dense());
    std::vector<std::vector<Matrix>> out;
    for (std::size_t j = 0; j < k.cols(); ++j) out.push_back(split(k, j));
    return out;
  }

 private:
  struct Unknown {
    std::size_t rows, cols, offset;
  };

  Matrix dense() const {
    Fp f(prime_);
    Matrix a(rows_.size(), total_, prime_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (const auto& [col, v] : rows_[i]) a.set(i, col, f.add(a(i, col), v));
    return a;
  }
  Matrix rhs_column() const {
    Matrix b(rhs_.size(), 1, prime_);
    for (std::size_t i = 0; i < rhs_.size(); ++i) b.set(i, 0, rhs_[i]);
    return b;
  }
  std::vector<Matrix> split(const Matrix& x, std::size_t col) const {
    std::vector<Matrix> out;
    for (const auto& u : unknowns_) {
      Matrix m(u.rows, u.cols, prime_);
      for (std::size_t r = 0; r < u.rows; ++r)
        for (std::size_t c = 0; c < u.cols; ++c) m.set(r, c, x(u.offset + r * u.cols + c, col));
      out.push_back(std::move(m));
    }
    return out;
  }

  std::uint32_t prime_;
  std::vector<Unknown> unknowns_;
  std::size_t total_ = 0;
  std::vector<std::vector<std::pair<std::size_t, Elem>>> rows_;
  std::vector<Elem> rhs_;
};

}  // namespace codescent

#endif  // CODESCENT_FIELD_HPP
