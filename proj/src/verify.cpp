#include "slice/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <tuple>

namespace slice::verify {

using meander::ConsistencyError;

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

// Sparse gl(n) element: (row, col, coefficient), 0-based.
using Sparse = std::vector<std::tuple<int, int, int>>;

std::vector<Sparse> p_basis(const CoprimePair& pair) {
  const int p = pair.p, n = pair.n;
  std::vector<Sparse> basis;
  for (auto [lo, hi] : {std::pair{0, p}, std::pair{p, n}}) {
    for (int i = lo; i < hi; ++i)
      for (int j = lo; j < hi; ++j)
        if (i != j) basis.push_back({{i, j, 1}});
    for (int i = lo; i + 1 < hi; ++i) basis.push_back({{i, i, 1}, {i + 1, i + 1, -1}});
  }
  for (int i = p; i < n; ++i)
    for (int j = 0; j < p; ++j) basis.push_back({{i, j, 1}});
  return basis;
}

// trace(F [X, Y]) with E_ab E_cd = delta_bc E_ad and trace(F E_ad) = F_da.
long pair_commutator(const IntMatrix& f, const Sparse& x, const Sparse& y) {
  long s = 0;
  for (const auto& [a, b, cx] : x)
    for (const auto& [c, d, cy] : y) {
      if (b == c) s += static_cast<long>(cx) * cy * f(d, a).get_si();
      if (d == a) s -= static_cast<long>(cx) * cy * f(b, c).get_si();
    }
  return s;
}

int parity_bound(int d) { return d % 2 == 1 ? d - 1 : d; }

}  // namespace

mpq_class evaluate(const std::vector<mpq_class>& h, const Root& r) {
  mpq_class s = 0;
  for (int i = 1; i <= r.size(); ++i) s += h[z(i - 1)] * r[i];
  return s;
}

AdaptedPair eta_and_h(const CoprimePair& pair) {
  const int p = pair.p, q = pair.q, n = pair.n;
  std::vector<Root> all = rootlab::kostant_cascade(n);
  for (auto& r : rootlab::levi_cascade(p, q)) all.push_back(r);
  if (static_cast<int>(all.size()) != n - 1) throw ConsistencyError("|B u B'| != n-1");

  AdaptedPair ap;
  int found = 0;
  for (const auto& r : all) {
    if (rootlab::signed_simple_index(r) != 0) {
      ap.alpha = r;
      ++found;
    } else {
      ap.eta_support.push_back(r);
    }
  }
  if (found != 1) throw ConsistencyError("B u B' must meet +-pi in exactly one root");

  exact::RatMatrix a(n, n);
  std::vector<mpq_class> rhs(z(n), 0);
  int row = 0;
  for (const auto& r : ap.eta_support) {
    for (int j = 1; j <= n; ++j) a(row, j - 1) = r[j];
    rhs[z(row)] = -1;
    ++row;
  }
  for (int j = 0; j < n; ++j) a(row, j) = j < p ? 1 : 0;
  ++row;
  for (int j = 0; j < n; ++j) a(row, j) = j < p ? 0 : 1;

  ap.h = exact::solve(std::move(a), std::move(rhs));
  ap.h_alpha = evaluate(ap.h, ap.alpha);
  ap.m_formula = (p * p + q * q + p * q - 1) / 2 - 1;
  return ap;
}

IntMatrix root_vector(const Root& r) {
  IntMatrix m(r.size(), r.size());
  m(r.head() - 1, r.tail() - 1) = 1;
  return m;
}

IntMatrix eta_matrix(const CoprimePair& pair, const AdaptedPair& ap) {
  IntMatrix m(pair.n, pair.n);
  for (const auto& r : ap.eta_support) m(r.head() - 1, r.tail() - 1) += 1;
  return m;
}

std::string to_string(RankMethod m) {
  switch (m) {
    case RankMethod::Bareiss: return "bareiss";
    case RankMethod::BareissSerial: return "bareiss-serial";
    case RankMethod::Certified: return "certified";
  }
  return "?";
}

RankResult certified_rank(const IntMatrix& m, int upper, RankMethod method, int jobs) {
  if (method == RankMethod::Certified) {
    // rank mod a prime never exceeds the rank over Q, so reaching the upper
    // bound settles it.
    if (exact::rank_mod(m, exact::rank_primes().front(), jobs) == upper) return {upper, "modular+bound"};
    return {exact::rank_bareiss(m, jobs), "bareiss"};
  }
  if (method == RankMethod::BareissSerial) return {exact::rank_bareiss_serial(m), "bareiss"};
  return {exact::rank_bareiss(m, jobs), "bareiss"};
}

int dim_p(const CoprimePair& pair) { return static_cast<int>(p_basis(pair).size()); }

IntMatrix skew_form(const CoprimePair& pair, const IntMatrix& functional) {
  const auto basis = p_basis(pair);
  const int d = static_cast<int>(basis.size());
  IntMatrix s(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      const long v = pair_commutator(functional, basis[z(j)], basis[z(k)]);
      if (v == 0) continue;
      s(j, k) = v;
      s(k, j) = -v;
    }
  return s;
}

Regularity functional_regularity(const CoprimePair& pair, const IntMatrix& functional, RankMethod method, int jobs) {
  const IntMatrix s = skew_form(pair, functional);
  Regularity r;
  r.dim_p = s.rows();
  const auto rr = certified_rank(s, parity_bound(r.dim_p), method, jobs);
  r.rank = rr.rank;
  r.method = rr.method;
  r.stabilizer_dim = r.dim_p - r.rank;
  r.regular = r.stabilizer_dim == 1;
  return r;
}

Regularity eta_regularity(const CoprimePair& pair, RankMethod method, int jobs) {
  const AdaptedPair ap = eta_and_h(pair);
  return functional_regularity(pair, eta_matrix(pair, ap), method, jobs);
}

bool complement_check(const CoprimePair& pair, const AdaptedPair& ap, const std::optional<Root>& replace,
                      RankMethod method, int jobs) {
  const IntMatrix s = skew_form(pair, eta_matrix(pair, ap));
  const auto basis = p_basis(pair);
  const int d = s.rows();
  const Root& r = replace ? *replace : ap.alpha;
  const int h = r.head() - 1, t = r.tail() - 1;
  IntMatrix m(d + 1, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = s(i, j);
  // trace(E_ht X) is the (t, h) entry of X.
  for (int k = 0; k < d; ++k)
    for (const auto& [a, b, c] : basis[z(k)])
      if (a == t && b == h) m(d, k) += c;
  return certified_rank(m, d, method, jobs).rank == d;
}

std::vector<Root> added_roots(const SliceConstruction& sc) {
  std::vector<Root> out;
  const auto& td = sc.mr.td;
  for (int i = 1; i < sc.mr.pair.n; ++i) {
    if (i == td.e()) continue;
    const Root r = td.eps(i) * sc.mr.beta_at(i);
    if (r != sc.pi_star[z(i - 1)]) out.push_back(r);
  }
  return out;
}

IntMatrix y_prime(const SliceConstruction& sc) {
  const int n = sc.mr.pair.n;
  IntMatrix y(n, n);
  for (const auto& r : sc.pi_star) y(r.head() - 1, r.tail() - 1) += 1;
  return y;
}

IntMatrix completed_element(const SliceConstruction& sc) {
  IntMatrix y = y_prime(sc);
  for (const auto& r : added_roots(sc)) {
    if (!r.is_elementary() || sc.sys.position(r.head()) + 1 >= sc.sys.position(r.tail()))
      throw ContractViolation("added root " + r.str() + " is not a positive non-simple root of Pi*");
    y(r.head() - 1, r.tail() - 1) += 1;
  }
  return y;
}

std::vector<int> power_ranks(const IntMatrix& m) {
  std::vector<int> out;
  IntMatrix pw = m;
  for (int k = 1; k <= m.rows(); ++k) {
    out.push_back(exact::rank_bareiss_serial(pw));
    if (k < m.rows()) pw = exact::multiply(pw, m);
  }
  return out;
}

bool check_regular_nilpotent(const IntMatrix& m) {
  if (m.rows() != m.cols()) return false;
  const auto r = power_ranks(m);
  for (int k = 1; k <= m.rows(); ++k)
    if (r[z(k - 1)] != m.rows() - k) return false;
  return true;
}

Restriction check_restriction(const SliceConstruction& sc, const AdaptedPair& ap) {
  const int n = sc.mr.pair.n, p = sc.mr.pair.p;
  const IntMatrix y = completed_element(sc);
  Restriction res;
  auto note = [&](const std::string& w) {
    if (res.witness.empty()) res.witness = w;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (y(a, b) == 0) continue;
      const std::string at = "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
      if (a == b) {
        note("diagonal entry at " + at);
        continue;
      }
      const Root r = rootlab::eps_diff(a + 1, b + 1, n);
      if (rootlab::alpha_p_coefficient(r, p) == -1) {
        res.m_part.push_back(r);
      } else {
        if (y(a, b) != 1) note("coefficient " + y(a, b).get_str() + " at " + at);
        res.p_minus_part.push_back(r);
      }
    }
  std::vector<Root> want = ap.eta_support;
  std::sort(want.begin(), want.end());
  std::vector<Root> got = res.p_minus_part;
  std::sort(got.begin(), got.end());
  if (got != want) {
    for (const auto& r : got)
      if (!std::binary_search(want.begin(), want.end(), r)) note("extra root " + r.str() + " outside m");
    for (const auto& r : want)
      if (!std::binary_search(got.begin(), got.end(), r)) note("missing eta root " + r.str());
  }
  res.ok = res.witness.empty();
  return res;
}

std::vector<int> weyl_permutation(const rootlab::PathSystem& sys) { return sys.order(); }

bool weyl_conjugates(const SliceConstruction& sc) {
  const int n = sc.mr.pair.n;
  const auto w = weyl_permutation(sc.sys);
  IntMatrix pm(n, n), pt(n, n), j(n, n);
  for (int i = 0; i < n; ++i) {
    pm(w[z(i)] - 1, i) = 1;
    pt(i, w[z(i)] - 1) = 1;
  }
  for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1;
  return exact::multiply(exact::multiply(pm, j), pt) == y_prime(sc);
}

bool VerificationReport::all_ok() const { return failure().empty(); }

std::string VerificationReport::failure() const {
  if (!sc.cond.all()) return "conditions: " + sc.cond.witness;
  if (!m_formula_ok) return "h(alpha) = " + ap.h_alpha.get_str() + ", expected " + std::to_string(ap.m_formula);
  if (regularity && !regularity->regular)
    return "stabilizer dimension " + std::to_string(regularity->stabilizer_dim);
  if (complement_ok && !*complement_ok) return "K x_alpha is not a complement";
  if (!contract_error.empty()) return contract_error;
  if (!y_regular_nilpotent) return "y'' is not regular nilpotent";
  if (!restriction.ok) return "restriction: " + restriction.witness;
  if (!h_integral) return "h is not integral on the support of y''";
  if (!weyl_ok) return "w does not conjugate the Jordan block to y'";
  return {};
}

VerificationReport full_report(const CoprimePair& pair, const ReportOptions& opt) {
  VerificationReport rep;
  rep.pair = pair;
  rep.sc = slicebuild::construct(pair);
  rep.ap = eta_and_h(pair);
  rep.m_formula_ok = rep.ap.h_alpha == rep.ap.m_formula;
  if (pair.n <= opt.stabilizer_max_n) {
    rep.regularity = functional_regularity(pair, eta_matrix(pair, rep.ap), opt.method, opt.jobs);
    rep.complement_ok = complement_check(pair, rep.ap, std::nullopt, opt.method, opt.jobs);
  }
  rep.weyl = weyl_permutation(rep.sc.sys);
  rep.weyl_ok = weyl_conjugates(rep.sc);
  rep.added = added_roots(rep.sc);
  try {
    const IntMatrix y = completed_element(rep.sc);
    rep.rank_sequence = power_ranks(y);
    rep.y_regular_nilpotent = check_regular_nilpotent(y);
    rep.restriction = check_restriction(rep.sc, rep.ap);
    rep.h_integral = true;
    for (int a = 0; a < pair.n; ++a)
      for (int b = 0; b < pair.n; ++b)
        if (a != b && y(a, b) != 0 && evaluate(rep.ap.h, rootlab::eps_diff(a + 1, b + 1, pair.n)).get_den() != 1)
          rep.h_integral = false;
    for (const auto& r : rep.ap.eta_support)
      if (evaluate(rep.ap.h, r) != -1) rep.h_integral = false;
  } catch (const ContractViolation& ex) {
    rep.contract_error = ex.what();
  }
  return rep;
}

std::vector<VerificationReport> verify_sweep(int max_n, const ReportOptions& opt, int jobs) {
  const auto pairs = meander::coprime_pairs(max_n);
  std::vector<VerificationReport> out(pairs.size());
  std::vector<std::exception_ptr> errs(pairs.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  ReportOptions inner = opt;
  inner.jobs = 1;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    try {
      out[k] = full_report(pairs[k], inner);
    } catch (...) {
      errs[k] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<VerificationReport> verify_sweep_serial(int max_n, const ReportOptions& opt) {
  std::vector<VerificationReport> out;
  ReportOptions inner = opt;
  inner.jobs = 1;
  for (const auto& pr : meander::coprime_pairs(max_n)) out.push_back(full_report(pr, inner));
  return out;
}

}  // namespace slice::verify
