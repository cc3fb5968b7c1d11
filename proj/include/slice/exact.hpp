#pragma once

// Dense exact matrices over Z and Q (GMP).  Indices are 0-based here; these
// are internal workhorses.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace slice::exact {

class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : r_(rows), c_(cols), d_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix size");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  T& operator()(int i, int j) { return d_[idx(i, j)]; }
  const T& operator()(int i, int j) const { return d_[idx(i, j)]; }

  bool is_zero() const {
    for (const auto& x : d_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && d_ == o.d_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(c_) + static_cast<std::size_t>(j);
  }
  int r_ = 0;
  int c_ = 0;
  std::vector<T> d_;
};

using IntMatrix = Matrix<mpz_class>;
using RatMatrix = Matrix<mpq_class>;

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

template <class T>
Matrix<T> power(const Matrix<T>& a, int k) {
  if (a.rows() != a.cols()) throw std::invalid_argument("power: matrix not square");
  if (k < 0) throw std::invalid_argument("power: negative exponent");
  Matrix<T> out = Matrix<T>::identity(a.rows());
  for (int i = 0; i < k; ++i) out = multiply(out, a);
  return out;
}

/// Fraction-free (Bareiss) elimination.  The parallel version splits each
/// pivot step's row updates across OpenMP threads.
int rank_bareiss(IntMatrix m, int jobs = 0);
int rank_bareiss_serial(IntMatrix m);

/// Rank over Q: scales rows to clear denominators, then Bareiss.
int rank_rational(const RatMatrix& m);

/// Rank over Z/prime.  Never exceeds the rank over Q.
int rank_mod(const IntMatrix& m, std::uint32_t prime, int jobs = 0);
int rank_mod_serial(const IntMatrix& m, std::uint32_t prime);

/// Primes below 2^31 used for modular ranks.
const std::vector<std::uint32_t>& rank_primes();

/// Unique solution of A x = b; throws SingularSystem otherwise.
std::vector<mpq_class> solve(RatMatrix a, std::vector<mpq_class> b);

}  // namespace slice::exact
