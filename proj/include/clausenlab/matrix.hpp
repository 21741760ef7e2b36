#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clausenlab/poly.hpp"

namespace clausenlab {

template <class F>
using Vec = std::vector<F>;

/// Result of Gaussian elimination: reduced row echelon form and pivot
/// columns, pivot chosen as the first nonzero entry of each column.
template <class F>
struct Echelon;

/// Dense row-major matrix over a field.
template <class F>
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, F(0)) {}
  Matrix(std::initializer_list<std::initializer_list<F>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (const auto& v : row) a_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }
  static Matrix scalar(std::size_t n, const F& s) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }
  static Matrix from_columns(const std::vector<Vec<F>>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& x = a(i, k);
        if (clausenlab::is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const F& s, Matrix m) {
    for (auto& v : m.a_) v = s * v;
    return m;
  }
  friend Vec<F> operator*(const Matrix& m, const Vec<F>& v) {
    if (v.size() != m.cols_) throw std::invalid_argument("matrix-vector shape mismatch");
    Vec<F> r(m.rows_, F(0));
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j)
        if (!clausenlab::is_zero(v[j])) r[i] += m(i, j) * v[j];
    return r;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  F trace() const {
    require_square("trace");
    F t(0);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : a_)
      if (!clausenlab::is_zero(v)) return false;
    return true;
  }
  bool is_scalar() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        if (i != j && !clausenlab::is_zero((*this)(i, j))) return false;
        if (i == j && (*this)(i, i) != (*this)(0, 0)) return false;
      }
    return true;
  }
  bool is_identity() const { return is_scalar() && rows_ > 0 && (*this)(0, 0) == F(1); }

  Echelon<F> echelon() const;
  std::size_t rank() const;
  /// Basis of {v : M v = 0}; one vector per free column.
  std::vector<Vec<F>> kernel() const;
  F det() const;
  /// Inverse; throws MathError for singular input.
  Matrix inverse() const;
  /// Some x with M x = b, or nullopt-like failure via MathError.
  Vec<F> solve(const Vec<F>& b) const;
  /// det(x·I − M), monic of degree rows().
  Poly<F> charpoly() const;

  Matrix pow(unsigned n) const {
    require_square("pow");
    Matrix r = identity(rows_), b(*this);
    while (n) {
      if (n & 1U) r = r * b;
      n >>= 1U;
      if (n) b = b * b;
    }
    return r;
  }

  void require_square(const char* what) const {
    if (!is_square())
      throw std::invalid_argument(std::string(what) + " needs a square matrix, got " + std::to_string(rows_) + "x" +
                                  std::to_string(cols_));
  }

private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> a_;
};

template <class F>
struct Echelon {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;
};

template <class F>
Echelon<F> Matrix<F>::echelon() const {
  Echelon<F> e{*this, {}};
  Matrix<F>& m = e.reduced;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t piv = row;
    while (piv < rows_ && clausenlab::is_zero(m(piv, col))) ++piv;
    if (piv == rows_) continue;
    if (piv != row)
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m(piv, j), m(row, j));
    F inv = F(1) / m(row, col);
    for (std::size_t j = col; j < cols_; ++j) m(row, j) *= inv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row || clausenlab::is_zero(m(r, col))) continue;
      F f = m(r, col);
      for (std::size_t j = col; j < cols_; ++j) m(r, j) -= f * m(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

template <class F>
std::size_t Matrix<F>::rank() const {
  return echelon().pivots.size();
}

template <class F>
std::vector<Vec<F>> Matrix<F>::kernel() const {
  Echelon<F> e = echelon();
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec<F>> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    Vec<F> v(cols_, F(0));
    v[free] = F(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
F Matrix<F>::det() const {
  require_square("det");
  std::vector<std::vector<F>> rows(rows_);
  for (std::size_t i = 0; i < rows_; ++i) rows[i].assign(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
  return detail::gauss_det(std::move(rows));
}

template <class F>
Matrix<F> Matrix<F>::inverse() const {
  require_square("inverse");
  const std::size_t n = rows_;
  Matrix<F> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = F(1);
  }
  Echelon<F> e = aug.echelon();
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw MathError("inverse of a singular matrix");
  Matrix<F> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

template <class F>
Vec<F> Matrix<F>::solve(const Vec<F>& b) const {
  if (b.size() != rows_) throw std::invalid_argument("solve: right-hand side length mismatch");
  Matrix<F> aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_) = b[i];
  }
  Echelon<F> e = aug.echelon();
  if (!e.pivots.empty() && e.pivots.back() == cols_) throw MathError("solve: inconsistent linear system");
  Vec<F> x(cols_, F(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, cols_);
  return x;
}

// Faddeev–LeVerrier; exact in characteristic zero.
template <class F>
Poly<F> Matrix<F>::charpoly() const {
  require_square("charpoly");
  const std::size_t n = rows_;
  std::vector<F> c(n + 1, F(0));
  c[n] = F(1);
  Matrix<F> m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = *this * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    F t = (*this * m).trace();
    c[n - k] = -(t / F(static_cast<long>(k)));
  }
  return Poly<F>(std::move(c));
}

/// Evaluates a polynomial at a square matrix.
template <class F>
Matrix<F> eval_at_matrix(const Poly<F>& p, const Matrix<F>& m) {
  m.require_square("eval_at_matrix");
  Matrix<F> acc(m.rows(), m.cols());
  for (std::size_t k = p.coeffs().size(); k-- > 0;) acc = acc * m + Matrix<F>::scalar(m.rows(), p.coeffs()[k]);
  return acc;
}

using QMatrix = Matrix<Rational>;
using CMatrix = Matrix<CycloNum>;

}  // namespace clausenlab
