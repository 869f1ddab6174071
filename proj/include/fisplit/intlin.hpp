#pragma once

// Exact integer linear algebra: Smith and Hermite normal forms and solvers
// for systems of linear congruences. Every categorical construction in the
// library bottoms out here.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fisplit {

using Int = mpz_class;
using IntVector = std::vector<Int>;

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int trunc_div(const Int& a, const Int& b) {
  Int q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Canonical residue of `a` modulo `m`: in [0, m) for m > 0, `a` itself for m == 0.
inline Int reduce_mod(const Int& a, const Int& m) {
  if (m == 0) return a;
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool divides(const Int& d, const Int& a) {
  if (d == 0) return a == 0;
  return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline std::string to_string(const Int& a) { return a.get_str(); }

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    IntMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
      std::size_t j = 0;
      for (long v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix diagonal(std::span<const Int> d) {
    IntMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static IntMatrix column(std::span<const Int> v) {
    IntMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  IntVector col(std::size_t j) const {
    IntVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_col(std::size_t j, std::span<const Int> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
  }

  // elementary operations
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += c * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const Int& c) {
    if (c == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += c * (*this)(src, j);
  }
  /// col[dst] += c * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const Int& c) {
    if (c == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += c * (*this)(i, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
  }
  void negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
  }

  /// Keeps the listed columns, in order.
  IntMatrix select_cols(std::span<const std::size_t> idx) const {
    IntMatrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) m(i, k) = (*this)(i, idx[k]);
    return m;
  }
  IntMatrix select_rows(std::span<const std::size_t> idx) const {
    IntMatrix m(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < cols_; ++j) m(k, j) = (*this)(idx[k], j);
    return m;
  }
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    IntMatrix m(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
    return m;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: product dimension mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Int& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend IntVector operator*(const IntMatrix& a, std::span<const Int> x) {
    if (a.cols_ != x.size()) throw std::invalid_argument("IntMatrix: vector dimension mismatch");
    IntVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("IntMatrix: sum dimension mismatch");
    IntMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
    return c;
  }

  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("IntMatrix: difference dimension mismatch");
    IntMatrix c = a;
    for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
    return c;
  }

  friend IntMatrix operator-(const IntMatrix& a) {
    IntMatrix c = a;
    for (auto& x : c.data_) x = -x;
    return c;
  }

  /// [a | b]
  static IntMatrix hcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("IntMatrix::hcat: row count mismatch");
    IntMatrix c(a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) c(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, a.cols_ + j) = b(i, j);
    }
    return c;
  }

  /// [a ; b]
  static IntMatrix vcat(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.cols_) throw std::invalid_argument("IntMatrix::vcat: column count mismatch");
    IntMatrix c(a.rows_ + b.rows_, a.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) c(a.rows_ + i, j) = b(i, j);
    return c;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << ',';
      os << '[';
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ',';
        os << (*this)(i, j).get_str();
      }
      os << ']';
    }
    os << ']';
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

/// U * A * V = S with U, V unimodular and S the Smith normal form of A.
/// The inverses of U and V are tracked alongside so callers can move
/// between coordinate systems without a separate inversion.
struct SnfDecomposition {
  IntMatrix U, S, V;
  IntMatrix U_inv, V_inv;
  std::size_t rank = 0;

  IntVector diagonal() const {
    IntVector d(std::min(S.rows(), S.cols()));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = S(i, i);
    return d;
  }
};

namespace detail {

struct SnfState {
  IntMatrix S, U, Ui, V, Vi;

  void row_add(std::size_t dst, std::size_t src, const Int& c) {
    S.add_row_multiple(dst, src, c);
    U.add_row_multiple(dst, src, c);
    Ui.add_col_multiple(src, dst, -c);
  }
  void row_swap(std::size_t a, std::size_t b) {
    S.swap_rows(a, b);
    U.swap_rows(a, b);
    Ui.swap_cols(a, b);
  }
  void row_negate(std::size_t i) {
    S.negate_row(i);
    U.negate_row(i);
    Ui.negate_col(i);
  }
  void col_add(std::size_t dst, std::size_t src, const Int& c) {
    S.add_col_multiple(dst, src, c);
    V.add_col_multiple(dst, src, c);
    Vi.add_row_multiple(src, dst, -c);
  }
  void col_swap(std::size_t a, std::size_t b) {
    S.swap_cols(a, b);
    V.swap_cols(a, b);
    Vi.swap_rows(a, b);
  }
};

}  // namespace detail

inline SnfDecomposition snf(const IntMatrix& A) {
  const std::size_t m = A.rows(), n = A.cols();
  detail::SnfState st{A, IntMatrix::identity(m), IntMatrix::identity(m), IntMatrix::identity(n),
                      IntMatrix::identity(n)};
  IntMatrix& S = st.S;
  std::size_t t = 0;
  const std::size_t lim = std::min(m, n);
  while (t < lim) {
    // smallest nonzero entry of the trailing block becomes the pivot
    bool found = false;
    std::size_t pi = 0, pj = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (S(i, j) == 0) continue;
        if (!found || abs(S(i, j)) < abs(S(pi, pj))) {
          found = true;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    st.row_swap(t, pi);
    st.col_swap(t, pj);

    bool clean = true;
    for (std::size_t i = t + 1; i < m; ++i) {
      if (S(i, t) == 0) continue;
      Int q = trunc_div(S(i, t), S(t, t));
      st.row_add(i, t, -q);
      if (S(i, t) != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (S(t, j) == 0) continue;
      Int q = trunc_div(S(t, j), S(t, t));
      st.col_add(j, t, -q);
      if (S(t, j) != 0) clean = false;
    }
    if (!clean) continue;

    // pivot must divide the rest of the trailing block
    bool fixed = false;
    for (std::size_t i = t + 1; i < m && !fixed; ++i)
      for (std::size_t j = t + 1; j < n; ++j)
        if (!divides(S(t, t), S(i, j))) {
          st.row_add(t, i, 1);
          fixed = true;
          break;
        }
    if (fixed) continue;

    if (S(t, t) < 0) st.row_negate(t);
    ++t;
  }
  return SnfDecomposition{std::move(st.U), std::move(st.S), std::move(st.V), std::move(st.Ui), std::move(st.Vi), t};
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `A`:
/// echelon rows with strictly increasing pivot columns, positive pivots and
/// entries above each pivot reduced into [0, pivot). Zero rows are dropped,
/// so the result is a basis and is unique for the lattice.
inline IntMatrix hermite_rows(IntMatrix A) {
  const std::size_t m = A.rows(), n = A.cols();
  std::size_t p = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < n && p < m; ++c) {
    while (true) {
      std::size_t best = m;
      for (std::size_t i = p; i < m; ++i)
        if (A(i, c) != 0 && (best == m || abs(A(i, c)) < abs(A(best, c)))) best = i;
      if (best == m) break;
      A.swap_rows(p, best);
      bool done = true;
      for (std::size_t i = p + 1; i < m; ++i) {
        if (A(i, c) == 0) continue;
        A.add_row_multiple(i, p, -trunc_div(A(i, c), A(p, c)));
        if (A(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (A(p, c) == 0) continue;
    if (A(p, c) < 0) A.negate_row(p);
    for (std::size_t i = 0; i < p; ++i) A.add_row_multiple(i, p, -floor_div(A(i, c), A(p, c)));
    pivot_cols.push_back(c);
    ++p;
  }
  return A.block(0, 0, p, n);
}

/// Coordinates of `v` in the basis given by the rows of a Hermite form `H`,
/// or nothing when `v` is outside the lattice.
inline std::optional<IntVector> hermite_coordinates(const IntMatrix& H, std::span<const Int> v) {
  IntVector rest(v.begin(), v.end());
  IntVector coords(H.rows());
  std::size_t c = 0;
  for (std::size_t t = 0; t < H.rows(); ++t) {
    while (c < H.cols() && H(t, c) == 0) {
      if (rest[c] != 0) return std::nullopt;
      ++c;
    }
    if (!divides(H(t, c), rest[c])) return std::nullopt;
    coords[t] = rest[c] / H(t, c);
    for (std::size_t j = c; j < H.cols(); ++j) rest[j] -= coords[t] * H(t, j);
    ++c;
  }
  for (std::size_t j = 0; j < rest.size(); ++j)
    if (rest[j] != 0) return std::nullopt;
  return coords;
}

namespace detail {

inline void check_congruence_shape(const IntMatrix& A, std::size_t b_size, std::span<const Int> moduli) {
  if (moduli.size() != A.rows() || b_size != A.rows())
    throw std::invalid_argument("congruence system: dimension mismatch");
  for (const Int& q : moduli)
    if (q < 0) throw std::invalid_argument("congruence system: negative modulus");
}

/// [A | diag(positive moduli)]; one extra column per row with a positive modulus.
inline IntMatrix with_modulus_columns(const IntMatrix& A, std::span<const Int> moduli) {
  std::size_t extra = 0;
  for (const Int& q : moduli)
    if (q > 0) ++extra;
  IntMatrix B(A.rows(), A.cols() + extra);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) B(i, j) = A(i, j);
  std::size_t k = A.cols();
  for (std::size_t i = 0; i < moduli.size(); ++i)
    if (moduli[i] > 0) B(i, k++) = moduli[i];
  return B;
}

}  // namespace detail

/// Some x with A x = b row-wise modulo `moduli` (modulus 0: exact equality),
/// or nothing if the system has no integer solution.
inline std::optional<IntVector> solve_congruences(const IntMatrix& A, std::span<const Int> b,
                                                  std::span<const Int> moduli) {
  detail::check_congruence_shape(A, b.size(), moduli);
  const IntMatrix B = detail::with_modulus_columns(A, moduli);
  const SnfDecomposition d = snf(B);
  const IntVector w = d.U * b;
  IntVector y(B.cols());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i < d.rank) {
      if (!divides(d.S(i, i), w[i])) return std::nullopt;
      y[i] = w[i] / d.S(i, i);
    } else if (w[i] != 0) {
      return std::nullopt;
    }
  }
  const IntVector z = d.V * std::span<const Int>(y);
  return IntVector(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(A.cols()));
}

/// Generators (as columns, in Hermite form) of all x with A x = 0 modulo `moduli`.
inline IntMatrix solution_lattice(const IntMatrix& A, std::span<const Int> moduli) {
  detail::check_congruence_shape(A, A.rows(), moduli);
  const IntMatrix B = detail::with_modulus_columns(A, moduli);
  const SnfDecomposition d = snf(B);
  const std::size_t free_count = B.cols() - d.rank;
  IntMatrix gens(free_count, A.cols());
  for (std::size_t k = 0; k < free_count; ++k)
    for (std::size_t j = 0; j < A.cols(); ++j) gens(k, j) = d.V(j, d.rank + k);
  return hermite_rows(std::move(gens)).transpose();
}

/// Fraction-free Gaussian elimination (Bareiss).
inline Int determinant(const IntMatrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = A.rows();
  if (n == 0) return 1;
  IntMatrix M = A;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (M(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && M(r, k) == 0) ++r;
      if (r == n) return 0;
      M.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
    prev = M(k, k);
  }
  return sign * M(n - 1, n - 1);
}

}  // namespace fisplit
