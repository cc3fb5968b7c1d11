#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "slice/exact.hpp"

using namespace slice::exact;

namespace {

// Random integer matrix of prescribed rank: product of random r-column and
// r-row factors (rank exactly r with high probability; the oracle decides).
IntMatrix low_rank(std::mt19937& rng, int rows, int cols, int r) {
  const auto a = oracle::random_matrix(rng, rows, r, -4, 4);
  const auto b = oracle::random_matrix(rng, r, cols, -4, 4);
  return multiply(a, b);
}

}  // namespace

TEST_CASE("matrix basics") {
  const auto id = IntMatrix::identity(3);
  CHECK(multiply(id, id) == id);
  IntMatrix j(3, 3);
  j(0, 1) = 1;
  j(1, 2) = 1;
  CHECK_FALSE(j.is_zero());
  CHECK(power(j, 3).is_zero());
  CHECK(power(j, 0) == id);
  CHECK_THROWS_AS(multiply(IntMatrix(2, 3), IntMatrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(power(IntMatrix(2, 3), 2), std::invalid_argument);
}

TEST_CASE("ranks of small fixed matrices") {
  IntMatrix m(3, 3);
  CHECK(rank_bareiss(m) == 0);
  CHECK(rank_bareiss(IntMatrix::identity(4)) == 4);
  IntMatrix two(2, 3);
  two(0, 0) = 1;
  two(0, 1) = 2;
  two(0, 2) = 3;
  two(1, 0) = 2;
  two(1, 1) = 4;
  two(1, 2) = 6;
  CHECK(rank_bareiss(two) == 1);
  CHECK(rank_bareiss_serial(two) == 1);
  CHECK(rank_bareiss(IntMatrix(0, 0)) == 0);
}

TEST_CASE("bareiss, modular and rational ranks agree with Gauss-Jordan") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 12);
    const int cols = 1 + static_cast<int>(rng() % 12);
    const int r = static_cast<int>(rng() % static_cast<unsigned>(std::min(rows, cols) + 1));
    const auto m = r == 0 ? IntMatrix(rows, cols) : low_rank(rng, rows, cols, r);
    const int want = oracle::rank_q(oracle::to_q(m));
    CHECK(rank_bareiss(m, 4) == want);
    CHECK(rank_bareiss_serial(m) == want);
    for (auto pr : rank_primes()) {
      const int got = rank_mod(m, pr, 4);
      CHECK(got <= want);
      CHECK(got == rank_mod_serial(m, pr));
    }
    CHECK(rank_mod(m, rank_primes().front()) == want);
    RatMatrix q(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) q(i, j) = mpq_class(m(i, j), 1 + (i + j) % 3);
    CHECK(rank_rational(q) == oracle::rank_q([&] {
            oracle::QMat a(static_cast<std::size_t>(rows), std::vector<mpq_class>(static_cast<std::size_t>(cols)));
            for (int i = 0; i < rows; ++i)
              for (int j = 0; j < cols; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = q(i, j);
            return a;
          }()));
  }
}

TEST_CASE("modular rank can undercount") {
  // det = p, so the rank drops mod p
  const std::uint32_t pr = 7;
  IntMatrix m(2, 2);
  m(0, 0) = 7;
  m(1, 1) = 1;
  CHECK(rank_bareiss(m) == 2);
  CHECK(rank_mod(m, pr) == 1);
}

TEST_CASE("big entries stay exact") {
  IntMatrix m(3, 3);
  const mpz_class big("123456789012345678901234567890");
  m(0, 0) = big;
  m(0, 1) = big + 1;
  m(1, 0) = big * 2;
  m(1, 1) = big * 2 + 2;
  m(2, 2) = 1;
  CHECK(rank_bareiss(m) == 2);
  m(1, 1) += 1;
  CHECK(rank_bareiss(m) == 3);
}

TEST_CASE("solve") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const auto a = oracle::random_matrix(rng, n, n, -5, 5);
    std::vector<mpq_class> b(static_cast<std::size_t>(n));
    for (auto& x : b) x = static_cast<int>(rng() % 11) - 5;
    RatMatrix aq(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) aq(i, j) = a(i, j);
    const auto want = oracle::solve_q(oracle::to_q(a), b);
    if (!want) {
      CHECK_THROWS_AS(solve(aq, b), SingularSystem);
      continue;
    }
    CHECK(solve(aq, b) == *want);
  }
  CHECK_THROWS_AS(solve(RatMatrix(2, 2), {1, 1}), SingularSystem);
}
