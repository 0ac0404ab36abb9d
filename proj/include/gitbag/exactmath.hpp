#pragma once

// Exact integer and rational linear algebra.
//
// Everything downstream (cones, fans, bags) is decided by exact sign tests,
// so no floating point appears anywhere in this header.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gitbag/errors.hpp"

namespace gitbag {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Dense row-major matrix over an exact scalar type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
      for (long long v : row) data_.emplace_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  /// Builds a matrix whose rows are the given vectors; `cols` is used when
  /// `rows` is empty.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols = 0) {
    if (!rows.empty()) cols = rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged row list");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<std::vector<T>>& columns, std::size_t rows = 0) {
    return from_rows(columns, rows).transpose();
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<std::vector<T>> row_list() const {
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }
  std::vector<std::vector<T>> column_list() const {
    std::vector<std::vector<T>> out;
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    if (a.cols_ != v.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
    std::vector<T> out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

// ---------------------------------------------------------------------------
// Vectors

inline IntVector make_vector(std::initializer_list<long long> values) {
  return IntVector(values.begin(), values.end());
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot product");
  T s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
inline Integer dot(const IntVector& a, const IntVector& b) {
  return dot<Integer>(std::span<const Integer>(a), std::span<const Integer>(b));
}
inline Rational dot(const RatVector& a, const RatVector& b) {
  return dot<Rational>(std::span<const Rational>(a), std::span<const Rational>(b));
}
inline Rational dot(const IntVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "dot product");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
  return s;
}

inline bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}
inline bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline RatVector to_rational(const IntVector& v) { return RatVector(v.begin(), v.end()); }

inline IntVector negated(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

inline IntVector operator+(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "vector sum");
  IntVector s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return s;
}

/// gcd of the absolute values of all entries; zero for the zero vector.
inline Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, Integer(abs(x)));
  return g;
}

/// The primitive integer vector on the ray through `v`.
inline IntVector primitive_vector(const IntVector& v) {
  Integer g = content(v);
  if (g == 0) throw Error(ErrorKind::InvalidInput, "primitive_vector of the zero vector");
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

inline IntVector primitive_vector(const RatVector& v) {
  Integer l = 1;
  for (const auto& x : v) {
    const Integer den = boost::multiprecision::denominator(x);
    l = l / boost::multiprecision::gcd(l, den) * den;
  }
  IntVector scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    scaled[i] = boost::multiprecision::numerator(v[i]) * (l / boost::multiprecision::denominator(v[i]));
  }
  return primitive_vector(scaled);
}

inline std::string to_string(const IntVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s + ")";
}

inline std::ostream& operator<<(std::ostream& os, const IntVector& v) { return os << to_string(v); }

/// Rows as nested brackets, e.g. [[1,0],[0,1]].
inline std::string to_string(const IntMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += ",";
    s += "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) s += ",";
      s += m(i, j).str();
    }
    s += "]";
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// Rational elimination

struct RowEchelon {
  RatMatrix reduced;                 ///< reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   ///< pivot column of each nonzero row
};

inline RowEchelon reduced_row_echelon(RatMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    m.swap_rows(row, sel);
    const Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  RatMatrix reduced(row, m.cols());
  for (std::size_t i = 0; i < row; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) reduced(i, j) = m(i, j);
  return {std::move(reduced), std::move(pivots)};
}

inline RatMatrix to_rational(const IntMatrix& a) {
  RatMatrix m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

inline std::size_t rank(const RatMatrix& a) { return reduced_row_echelon(a).pivots.size(); }
inline std::size_t rank(const IntMatrix& a) { return rank(to_rational(a)); }

/// Rank of a list of integer vectors of common length `dim`.
inline std::size_t rank_of(const std::vector<IntVector>& vectors, std::size_t dim) {
  return rank(IntMatrix::from_rows(vectors, dim));
}

/// Canonical basis of the row space: the nonzero rows of the reduced row
/// echelon form, each scaled to a primitive integer vector. Two lists span
/// the same subspace iff their canonical bases are equal.
inline std::vector<IntVector> canonical_row_basis(const std::vector<IntVector>& vectors, std::size_t dim) {
  const auto ech = reduced_row_echelon(to_rational(IntMatrix::from_rows(vectors, dim)));
  std::vector<IntVector> out;
  for (std::size_t i = 0; i < ech.reduced.rows(); ++i) out.push_back(primitive_vector(ech.reduced.row(i)));
  return out;
}

/// Canonical basis of {x : <v,x> = 0 for all v in `vectors`} read off from the
/// reduced row echelon form (one primitive vector per free column).
inline std::vector<IntVector> nullspace(const std::vector<IntVector>& vectors, std::size_t dim) {
  const auto ech = reduced_row_echelon(to_rational(IntMatrix::from_rows(vectors, dim)));
  std::vector<bool> is_pivot(dim, false);
  for (auto p : ech.pivots) is_pivot[p] = true;
  std::vector<IntVector> basis;
  for (std::size_t f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    RatVector v(dim);
    v[f] = 1;
    for (std::size_t i = 0; i < ech.pivots.size(); ++i) v[ech.pivots[i]] = -ech.reduced(i, f);
    basis.push_back(primitive_vector(v));
  }
  return basis;
}

/// Solves the square system `a x = b` over Q; nullopt when `a` is singular.
inline std::optional<RatVector> solve_square(const RatMatrix& a, const RatVector& b) {
  const std::size_t n = a.rows();
  RatMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  const auto ech = reduced_row_echelon(aug);
  if (ech.pivots.size() != n || ech.pivots.back() != n - 1) return std::nullopt;
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = ech.reduced(i, n);
  return x;
}

/// Orthogonal projection of `v` onto the complement of span(`basis`), where
/// `basis` is linearly independent.
inline RatVector project_out(const IntVector& v, const std::vector<IntVector>& basis) {
  RatVector out = to_rational(v);
  if (basis.empty()) return out;
  const std::size_t m = basis.size();
  RatMatrix gram(m, m);
  RatVector rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) gram(i, j) = Rational(dot(basis[i], basis[j]));
    rhs[i] = Rational(dot(basis[i], v));
  }
  const auto coeff = solve_square(gram, rhs);
  if (!coeff) throw Error(ErrorKind::InternalError, "project_out: dependent basis");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[j] -= (*coeff)[i] * Rational(basis[i][j]);
  return out;
}

// ---------------------------------------------------------------------------
// Integer normal forms

struct SmithForm {
  IntMatrix U;  ///< unimodular, rows x rows
  IntMatrix D;  ///< diagonal with d1 | d2 | ... , all nonnegative
  IntMatrix V;  ///< unimodular, cols x cols
  std::size_t rank = 0;
};

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline void row_axpy(IntMatrix& m, std::size_t target, std::size_t source, const Integer& f) {
  if (f == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(target, j) -= f * m(source, j);
}

inline void col_axpy(IntMatrix& m, std::size_t target, std::size_t source, const Integer& f) {
  if (f == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, target) -= f * m(i, source);
}

}  // namespace detail

/// Smith normal form with U*A*V = D. Pivots are always the entry of smallest
/// absolute value in the active block, which keeps coefficients small on the
/// matrices this library deals with.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  IntMatrix D = a;
  IntMatrix U = IntMatrix::identity(m);
  IntMatrix V = IntMatrix::identity(n);
  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    for (;;) {
      // Smallest nonzero entry of the active block goes to (t, t).
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (D(i, j) != 0 && (pi == m || abs(D(i, j)) < abs(D(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == m) break;
      D.swap_rows(t, pi);
      U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      V.swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        const Integer q = detail::floor_div(D(i, t), D(t, t));
        detail::row_axpy(D, i, t, q);
        detail::row_axpy(U, i, t, q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        const Integer q = detail::floor_div(D(t, j), D(t, t));
        detail::col_axpy(D, j, t, q);
        detail::col_axpy(V, j, t, q);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: fold an offending row into row t and repeat.
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            detail::row_axpy(D, t, i, Integer(-1));
            detail::row_axpy(U, t, i, Integer(-1));
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (D(t, t) == 0) break;
    if (D(t, t) < 0) {
      for (std::size_t j = 0; j < n; ++j) D(t, j) = -D(t, j);
      for (std::size_t j = 0; j < m; ++j) U(t, j) = -U(t, j);
    }
  }
  return {std::move(U), std::move(D), std::move(V), t};
}

/// Basis of the saturated integer kernel {v in Z^n : A v = 0}.
inline std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  const auto snf = smith_normal_form(a);
  std::vector<IntVector> basis;
  for (std::size_t j = snf.rank; j < a.cols(); ++j) basis.push_back(snf.V.column(j));
  return basis;
}

inline std::vector<IntVector> kernel_basis(const RatMatrix& a) {
  IntMatrix scaled(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    if (is_zero(row)) continue;
    const auto p = primitive_vector(row);
    for (std::size_t j = 0; j < a.cols(); ++j) scaled(i, j) = p[j];
  }
  return kernel_basis(scaled);
}

/// Some integer solution of A x = b, or nullopt if none exists.
inline std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "solve_integer");
  const auto snf = smith_normal_form(a);
  const IntVector ub = snf.U * b;
  IntVector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i < snf.rank) {
      if (ub[i] % snf.D(i, i) != 0) return std::nullopt;
      y[i] = ub[i] / snf.D(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V * y;
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`:
/// upper echelon, positive pivots, entries above each pivot reduced into
/// [0, pivot). Equal lattices give equal output.
inline std::vector<IntVector> hermite_basis(const std::vector<IntVector>& vectors, std::size_t dim) {
  std::vector<IntVector> rows;
  for (const auto& v : vectors)
    if (!is_zero(v)) rows.push_back(v);
  std::size_t r = 0;
  for (std::size_t col = 0; col < dim && r < rows.size(); ++col) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col]))) best = i;
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        const Integer q = detail::floor_div(rows[i][col], rows[r][col]);
        for (std::size_t j = 0; j < dim; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (r < rows.size() && rows[r][col] != 0) {
      if (rows[r][col] < 0) rows[r] = negated(rows[r]);
      for (std::size_t i = 0; i < r; ++i) {
        const Integer q = detail::floor_div(rows[i][col], rows[r][col]);
        for (std::size_t j = 0; j < dim; ++j) rows[i][j] -= q * rows[r][j];
      }
      ++r;
    }
  }
  rows.resize(r);
  return rows;
}

inline Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  RatMatrix m = to_rational(a);
  const std::size_t n = m.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      m.swap_rows(p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return boost::multiprecision::numerator(det);
}

}  // namespace gitbag
