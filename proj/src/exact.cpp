#include "slice/exact.hpp"

#include <omp.h>

#include <utility>

namespace slice::exact {

namespace {

void swap_rows(IntMatrix& m, int a, int b) {
  if (a == b) return;
  for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

int find_pivot(const IntMatrix& m, int from, int col) {
  for (int i = from; i < m.rows(); ++i)
    if (m(i, col) != 0) return i;
  return -1;
}

// One Bareiss step below pivot (r, col): every later entry becomes the 2x2
// minor with the pivot divided by the previous pivot, which is exact.
void bareiss_row(IntMatrix& m, int r, int col, int i, const mpz_class& prev) {
  const mpz_class& piv = m(r, col);
  const mpz_class lead = m(i, col);
  for (int j = col + 1; j < m.cols(); ++j) {
    mpz_class& x = m(i, j);
    x *= piv;
    x -= lead * m(r, j);
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
  }
  m(i, col) = 0;
}

}  // namespace

int rank_bareiss_serial(IntMatrix m) {
  int rank = 0;
  mpz_class prev = 1;
  for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
    const int pr = find_pivot(m, rank, col);
    if (pr < 0) continue;
    swap_rows(m, rank, pr);
    for (int i = rank + 1; i < m.rows(); ++i) bareiss_row(m, rank, col, i, prev);
    prev = m(rank, col);
    ++rank;
  }
  return rank;
}

int rank_bareiss(IntMatrix m, int jobs) {
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  int rank = 0;
  mpz_class prev = 1;
  for (int col = 0; col < m.cols() && rank < m.rows(); ++col) {
    const int pr = find_pivot(m, rank, col);
    if (pr < 0) continue;
    swap_rows(m, rank, pr);
    const int r = rank;
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (int i = r + 1; i < m.rows(); ++i) bareiss_row(m, r, col, i, prev);
    prev = m(rank, col);
    ++rank;
  }
  return rank;
}

int rank_rational(const RatMatrix& m) {
  IntMatrix z(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    mpz_class den = 1;
    for (int j = 0; j < m.cols(); ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (int j = 0; j < m.cols(); ++j) z(i, j) = m(i, j).get_num() * (den / m(i, j).get_den());
  }
  return rank_bareiss_serial(std::move(z));
}

const std::vector<std::uint32_t>& rank_primes() {
  static const std::vector<std::uint32_t> primes{2147483647u, 2147483629u, 2147483587u, 2147483579u};
  return primes;
}

namespace {

using Row = std::vector<std::uint64_t>;

std::vector<Row> reduce(const IntMatrix& m, std::uint32_t prime) {
  std::vector<Row> a(static_cast<std::size_t>(m.rows()), Row(static_cast<std::size_t>(m.cols())));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      mpz_class r = m(i, j) % prime;
      if (r < 0) r += prime;
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = r.get_ui();
    }
  return a;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  std::uint64_t r = 1, e = p - 2;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

void eliminate_row(Row& row, const Row& piv, std::size_t col, std::uint64_t p) {
  const std::uint64_t f = row[col];
  if (f == 0) return;
  for (std::size_t j = col; j < row.size(); ++j) row[j] = (row[j] + (p - f) * piv[j]) % p;
}

int rank_mod_impl(const IntMatrix& m, std::uint32_t prime, int threads) {
  auto a = reduce(m, prime);
  const std::uint64_t p = prime;
  const std::size_t rows = a.size(), cols = static_cast<std::size_t>(m.cols());
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pr = rank;
    while (pr < rows && a[pr][col] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(a[rank], a[pr]);
    const std::uint64_t inv = inv_mod(a[rank][col], p);
    for (std::size_t j = col; j < cols; ++j) a[rank][j] = a[rank][j] * inv % p;
    const Row& piv = a[rank];
    const long lo = static_cast<long>(rank + 1), hi = static_cast<long>(rows);
    if (threads > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
      for (long i = lo; i < hi; ++i) eliminate_row(a[static_cast<std::size_t>(i)], piv, col, p);
    } else {
      for (long i = lo; i < hi; ++i) eliminate_row(a[static_cast<std::size_t>(i)], piv, col, p);
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

}  // namespace

int rank_mod(const IntMatrix& m, std::uint32_t prime, int jobs) {
  return rank_mod_impl(m, prime, jobs > 0 ? jobs : omp_get_max_threads());
}

int rank_mod_serial(const IntMatrix& m, std::uint32_t prime) { return rank_mod_impl(m, prime, 1); }

std::vector<mpq_class> solve(RatMatrix a, std::vector<mpq_class> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw std::invalid_argument("solve: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int pr = col;
    while (pr < n && a(pr, col) == 0) ++pr;
    if (pr == n) throw SingularSystem("singular linear system");
    if (pr != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pr, j));
      std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pr)]);
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const mpq_class f = a(i, col) / a(col, col);
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<mpq_class> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] / a(i, i);
  return x;
}

}  // namespace slice::exact
