#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "oracles.hpp"
#include "slice/slicebuild.hpp"

using namespace slice::slicebuild;
using slice::meander::build_meander;
using slice::meander::CoprimePair;
using slice::meander::coprime_pairs;
using slice::meander::Tag;
using slice::rootlab::eps_diff;
using slice::rootlab::simple_root;

namespace {

struct OracleConditions {
  bool a = false, b = false, c = false, d = false;
  std::vector<int> order;
};

// Conditions a)-d) recomputed from scratch: the path by following edges,
// positivity by a rational linear solve in the basis pi_star.
OracleConditions oracle_conditions(const Meander& mr, const ChangeLedger& ledger) {
  const int n = mr.pair.n;
  const int p = mr.pair.p;
  OracleConditions oc;
  std::vector<Root> pi;
  for (int i = 1; i < n; ++i) pi.push_back(mr.td.eps(i) * ledger.at(i).beta_prime);

  std::map<int, int> next, prev;
  bool ok = true;
  for (const auto& r : pi) {
    if (!r.is_elementary()) {
      ok = false;
      break;
    }
    ok = ok && !next.count(r.head()) && !prev.count(r.tail());
    next[r.head()] = r.tail();
    prev[r.tail()] = r.head();
  }
  if (ok) {
    int start = 0;
    for (int v = 1; v <= n; ++v)
      if (!prev.count(v)) start = start == 0 ? v : -1;
    if (start > 0) {
      for (int v = start;; v = next[v]) {
        oc.order.push_back(v);
        if (!next.count(v) || oc.order.size() > static_cast<std::size_t>(n)) break;
      }
    }
    std::vector<int> sorted = oc.order;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    ok = static_cast<int>(oc.order.size()) == n && static_cast<int>(sorted.size()) == n;
  }
  oc.a = ok;

  oc.b = true;
  for (int i = 1; i < n; ++i)
    if (ledger.at(i).changed())
      oc.b = oc.b && oracle::simple_expansion(pi[static_cast<std::size_t>(i - 1)])[static_cast<std::size_t>(p - 1)] == -1;

  oc.c = ledger.at(mr.td.e()).changed();

  oc.d = oc.a;
  if (oc.a) {
    for (int i = 1; i < n; ++i) {
      if (i == mr.td.e()) continue;
      for (const auto& x : oracle::expansion(mr.td.eps(i) * mr.beta_at(i), pi)) oc.d = oc.d && x >= 0;
    }
  }
  return oc;
}

// Rules for a single-primed ledger, reimplemented.
void check_change_rules(const Meander& mr, const ChangeLedger& ledger) {
  const auto& td = mr.td;
  std::map<int, int> per_anchor;
  for (int i = 1; i < mr.pair.n; ++i) {
    const auto& en = ledger.at(i);
    if (!en.changed()) {
      CHECK(en.beta_prime == mr.beta_at(i));
      continue;
    }
    CHECK(td.boundary(i));
    CHECK_FALSE(td.nil(i));
    REQUIRE(td.is_turning(en.lo));
    REQUIRE(td.is_turning(en.hi));
    CHECK(en.beta_prime == mr.beta_at(i) + mr.iota(en.lo, en.hi));
    const bool left = i == en.lo - 1, right = i == en.hi;
    REQUIRE(left != right);
    const int anchor = left ? en.lo : en.hi;
    ++per_anchor[anchor];
    int simples = 0;
    for (int pos : td.positions()) simples += pos >= en.lo && pos < en.hi;
    CHECK(simples % 2 == 1);
    CHECK((en.kind == ChangeKind::Simple) == (simples == 1));
  }
  for (int pos : td.positions())
    CHECK(per_anchor[pos] == (td.is_internal(pos) ? 1 : 0));
}

struct Golden {
  int p, q;
  const char* signature;
  Dispatch dispatch;
  std::vector<std::tuple<int, int, int, const char*>> changes;
  std::vector<int> order;
  const char* fix;  // "", "internal", "end-point"
  int restored, ie;
};

const std::vector<Golden>& goldens() {
  static const std::vector<Golden> g{
      {1, 2, "", Dispatch::Forward, {}, {2, 1, 3}, "end-point", 0, 0},
      {2, 3, "-", Dispatch::Reversed, {{2, 1, 2, "simple"}}, {2, 4, 1, 5, 3}, "", 0, 0},
      {2, 5, "+", Dispatch::Forward, {{4, 5, 7, "simple"}}, {2, 6, 4, 1, 7, 3, 5}, "", 0, 0},
      {3, 4, "+", Dispatch::Forward, {{2, 3, 4, "simple"}, {4, 3, 4, "simple"}}, {2, 6, 3, 5, 1, 7, 4}, "", 0, 0},
      {3, 7, "+", Dispatch::Forward, {{3, 4, 6, "simple"}, {6, 4, 6, "simple"}}, {2, 9, 5, 3, 8, 6, 1, 10, 4, 7}, "", 0, 0},
      {4, 5, "--", Dispatch::Reversed, {{2, 1, 2, "simple"}, {4, 5, 6, "simple"}, {6, 5, 6, "simple"}},
       {3, 7, 2, 8, 4, 6, 1, 9, 5}, "", 0, 0},
      {5, 7, "+-", Dispatch::Forward,
       {{2, 3, 4, "simple"}, {4, 3, 4, "simple"}, {8, 1, 8, "return"}, {10, 11, 12, "simple"}},
       {4, 9, 2, 11, 7, 3, 10, 5, 8, 1, 12, 6}, "internal", 8, 0},
      {5, 9, "++", Dispatch::Forward,
       {{3, 1, 3, "undecided"}, {6, 7, 9, "simple"}, {9, 7, 9, "simple"}, {12, 13, 14, "simple"}},
       {5, 10, 1, 14, 6, 4, 11, 9, 2, 13, 7, 3, 12, 8}, "", 0, 0},
      {5, 13, "++", Dispatch::Forward,
       {{4, 1, 4, "undecided"}, {8, 9, 18, "bridge"}, {10, 11, 14, "simple"}, {14, 11, 14, "simple"}},
       {5, 14, 10, 4, 15, 9, 2, 17, 7, 12, 1, 18, 6, 13, 3, 16, 8, 11}, "internal", 10, 14},
      {7, 9, "+-+", Dispatch::Forward,
       {{2, 3, 4, "simple"}, {4, 3, 4, "simple"}, {7, 1, 7, "return"}, {10, 11, 12, "simple"}, {12, 11, 12, "simple"},
        {14, 15, 16, "simple"}},
       {5, 12, 3, 14, 7, 10, 1, 16, 8, 4, 13, 6, 11, 2, 15, 9}, "", 0, 0},
      {7, 11, "++-", Dispatch::Forward,
       {{3, 1, 3, "undecided"}, {6, 7, 13, "bridge"}, {8, 7, 8, "isolated-shift"}, {10, 8, 10, "simple"},
        {13, 10, 13, "return-past-isolated"}, {16, 17, 18, "simple"}},
       {6, 13, 2, 17, 9, 5, 14, 7, 12, 3, 16, 10, 1, 18, 8, 4, 15, 11}, "", 0, 0},
      {8, 11, "-++-", Dispatch::Reversed,
       {{2, 1, 2, "simple"}, {4, 5, 13, "return-past-isolated"}, {8, 9, 10, "simple"}, {10, 9, 10, "simple"},
        {12, 13, 15, "simple"}, {14, 15, 16, "isolated-shift"}, {16, 5, 16, "bridge"}},
       {6, 14, 3, 17, 5, 15, 7, 13, 4, 16, 8, 12, 1, 19, 9, 11, 2, 18, 10}, "", 0, 0},
      {9, 14, "++-+", Dispatch::Forward,
       {{3, 1, 3, "undecided"}, {6, 7, 13, "bridge"}, {8, 7, 8, "isolated-shift"}, {10, 8, 10, "simple"},
        {13, 10, 13, "return-past-isolated"}, {16, 17, 23, "bridge"}, {18, 17, 18, "isolated-shift"},
        {20, 18, 20, "simple"}},
       {7, 17, 8, 16, 3, 21, 12, 2, 22, 11, 6, 18, 9, 15, 4, 20, 13, 1, 23, 10, 5, 19, 14}, "", 0, 0},
  };
  return g;
}

}  // namespace

TEST_CASE("interval values") {
  const auto m23 = build_meander(CoprimePair::make(2, 3));
  const auto iv = interval_value(m23, 1, 2);
  CHECK(iv.value == eps_diff(4, 2, 5));
  CHECK(iv.simple);
  CHECK(iv.sign == -1);
  const auto m12 = build_meander(CoprimePair::make(1, 2));
  const auto iv12 = interval_value(m12, 1, 3);
  CHECK(iv12.value == simple_root(1, 3));
  CHECK(iv12.simple);
  CHECK_THROWS_AS(interval_value(m23, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(interval_value(m23, 5, 1), std::invalid_argument);

  for (const auto& pr : coprime_pairs(24)) {
    const auto mr = build_meander(pr);
    const auto& t = mr.td.positions();
    for (std::size_t k = 0; k < t.size(); ++k)
      for (std::size_t l = k + 1; l < t.size(); ++l) {
        const auto v = interval_value(mr, t[k], t[l]);
        const int coef = oracle::simple_expansion(v.value)[static_cast<std::size_t>(pr.p - 1)];
        CHECK(v.simple == (l == k + 1));
        if ((l - k) % 2 == 1) CHECK(coef == v.sign);
        if (v.simple) {
          int nils = 0;
          for (int i = t[k]; i < t[l]; ++i) nils += mr.td.nil(i);
          CHECK(nils == 1);
          CHECK(v.sign == (mr.td.tag(t[k]) == Tag::A ? 1 : -1));
        }
      }
  }
}

TEST_CASE("rule-based ledgers obey the change rules") {
  for (const auto& pr : coprime_pairs(30)) {
    CAPTURE(pr.p);
    CAPTURE(pr.q);
    const auto mr = build_meander(pr);
    const auto br = build_pi_star(mr);
    CHECK(ledger_violations(mr, br.ledger).empty());
    check_change_rules(mr, br.ledger);
    CHECK(br.ledger.chi_injective);
    CHECK(br.ledger.undecided.size() == 1);
    CHECK(br.dispatch != Dispatch::Split);
    // chi maps internal A points to distinct B points
    std::set<int> image;
    for (const auto& [a, b] : br.ledger.chi) {
      CHECK(mr.td.tag(a) == Tag::A);
      CHECK(mr.td.is_internal(a));
      CHECK(mr.td.tag(b) == Tag::B);
      image.insert(b);
    }
    CHECK(image.size() == br.ledger.chi.size());
    int b_count = 0;
    for (int pos : mr.td.positions()) b_count += mr.td.tag(pos) == Tag::B;
    CHECK(static_cast<int>(image.size()) + 1 == b_count);
    CHECK_FALSE(image.count(br.ledger.undecided.front()));
    const auto stars = star_roots(mr, br.ledger);
    CHECK(stars == br.pi_star);
  }
}

TEST_CASE("constructions satisfy the conditions, certified independently") {
  int fallbacks = 0;
  for (const auto& pr : coprime_pairs(30)) {
    CAPTURE(pr.p);
    CAPTURE(pr.q);
    const auto sc = construct(pr);
    fallbacks += sc.mode != Mode::RuleBased;
    CHECK(sc.cond.all());
    const auto oc = oracle_conditions(sc.mr, sc.final_ledger);
    CHECK(oc.a);
    CHECK(oc.b);
    CHECK(oc.c);
    CHECK(oc.d);
    CHECK(oc.order == sc.sys.order());
    CHECK(sc.used_exceptional_fix == sc.fix.has_value());
    CHECK(sc.used_exceptional_fix == !sc.ledger.at(sc.mr.td.e()).changed());
    if (!sc.used_exceptional_fix) CHECK(sc.final_ledger.entries.size() == sc.ledger.entries.size());
    if (pr.n <= 7) {
      const auto brute = oracle::brute_path(sc.pi_star, pr.n);
      REQUIRE(brute.has_value());
      CHECK(*brute == sc.sys.order());
    }
  }
  CHECK(fallbacks == 0);
}

TEST_CASE("d holds at every index before the fix") {
  for (const auto& pr : coprime_pairs(30)) {
    const auto sc = construct(pr);
    if (!sc.used_exceptional_fix) continue;
    CAPTURE(pr.p);
    CAPTURE(pr.q);
    const auto before = check_conditions(sc.mr, sc.ledger);
    CHECK(before.a);
    CHECK(before.b);
    CHECK_FALSE(before.c);
    CHECK(before.d_all);
    CHECK(sc.d_all_before_fix);
  }
}

TEST_CASE("p = 1 always needs the end-point fix") {
  for (const auto& pr : coprime_pairs(30)) {
    if (pr.p != 1) continue;
    const auto sc = construct(pr);
    for (const auto& en : sc.ledger.entries) CHECK_FALSE(en.changed());
    REQUIRE(sc.fix.has_value());
    CHECK(sc.fix->end_point);
  }
}

TEST_CASE("construction examples") {
  const auto s23 = construct(CoprimePair::make(2, 3));
  CHECK(s23.pi_star == std::vector<Root>{eps_diff(2, 4, 5), eps_diff(4, 1, 5), eps_diff(1, 5, 5), eps_diff(5, 3, 5)});
  CHECK(s23.sys.order() == std::vector<int>{2, 4, 1, 5, 3});
  CHECK_FALSE(s23.used_exceptional_fix);
  CHECK(s23.mode == Mode::RuleBased);
  CHECK(s23.ledger.at(2).beta_prime == eps_diff(4, 1, 5));
  for (int i : {1, 3, 4}) CHECK_FALSE(s23.ledger.at(i).changed());
  CHECK(s23.ledger.undecided == std::vector<int>{5});
  CHECK(s23.mr.tr.at(5) == 3);
  CHECK(s23.ledger.undecided_disposition == "neighbour-unchanged");

  const auto s12 = construct(CoprimePair::make(1, 2));
  REQUIRE(s12.fix.has_value());
  CHECK(s12.fix->end_point);
  CHECK(s12.fix->ie == 0);
  CHECK(s12.final_ledger.at(2).beta_prime == -simple_root(1, 3));
  CHECK(s12.pi_star == std::vector<Root>{eps_diff(1, 3, 3), eps_diff(2, 1, 3)});
  CHECK(s12.sys.order() == std::vector<int>{2, 1, 3});

  const auto s34 = construct(CoprimePair::make(3, 4));
  CHECK(s34.cond.all());
}

TEST_CASE("exceptional fix refuses a ledger that already changes e") {
  const auto s23 = construct(CoprimePair::make(2, 3));
  CHECK_THROWS_AS(exceptional_fix(s23.mr, s23.ledger), std::logic_error);
}

TEST_CASE("golden constructions") {
  for (const auto& g : goldens()) {
    CAPTURE(g.p);
    CAPTURE(g.q);
    const auto sc = construct(CoprimePair::make(g.p, g.q));
    CHECK(sc.mr.sig.str() == g.signature);
    CHECK(sc.dispatch == g.dispatch);
    CHECK(sc.mode == Mode::RuleBased);
    std::vector<std::tuple<int, int, int, std::string>> got, want;
    for (int i = 1; i < g.p + g.q; ++i) {
      const auto& en = sc.ledger.at(i);
      if (en.changed()) got.emplace_back(i, en.lo, en.hi, to_string(en.rule));
    }
    for (const auto& [i, lo, hi, rule] : g.changes) want.emplace_back(i, lo, hi, rule);
    CHECK(got == want);
    CHECK(sc.sys.order() == g.order);
    const std::string fix = !sc.fix ? "" : sc.fix->end_point ? "end-point" : "internal";
    CHECK(fix == g.fix);
    if (sc.fix) {
      CHECK(sc.fix->f == g.restored);
      CHECK(sc.fix->ie == g.ie);
    }
  }
}

TEST_CASE("positive constant signatures use only simple changes at A points") {
  for (const auto& pr : coprime_pairs(30)) {
    const auto mr = build_meander(pr);
    const auto& sg = mr.sig.sg;
    if (sg.empty() || std::any_of(sg.begin(), sg.end(), [](int s) { return s < 0; })) continue;
    if (a_signs(mr.td).back() < 0) continue;
    const auto sc = construct(pr);
    CAPTURE(pr.p);
    CAPTURE(pr.q);
    for (const auto& en : sc.ledger.entries)
      if (en.changed()) CHECK(en.kind == ChangeKind::Simple);
  }
}

TEST_CASE("triangularity") {
  const auto s23 = construct(CoprimePair::make(2, 3));
  const auto o23 = triangularity_order(s23.mr, s23.ledger);
  CHECK(o23.back() == 2);

  for (const auto& pr : coprime_pairs(30)) {
    const auto sc = construct(pr);
    const auto& mr = sc.mr;
    const int n = pr.n;
    const auto order = triangularity_order(mr, sc.ledger);
    REQUIRE(order.size() == static_cast<std::size_t>(n - 1));
    std::vector<Root> basis;
    for (int j = 1; j < n; ++j) basis.push_back(mr.td.eps(j) * mr.beta_at(j));
    std::vector<int> pos(static_cast<std::size_t>(n), 0);
    for (std::size_t k = 0; k < order.size(); ++k) pos[static_cast<std::size_t>(order[k])] = static_cast<int>(k);
    bool unitri = true;
    for (int i = 1; i < n; ++i) {
      const auto row = oracle::expansion(mr.td.eps(i) * sc.ledger.at(i).beta_prime, basis);
      for (int j = 1; j < n; ++j) {
        const auto& x = row[static_cast<std::size_t>(j - 1)];
        if (j == i) unitri = unitri && x == 1;
        if (pos[static_cast<std::size_t>(j)] > pos[static_cast<std::size_t>(i)]) unitri = unitri && x == 0;
      }
    }
    CHECK(unitri);
  }
}

TEST_CASE("unchanged ledger gives the identity matrix") {
  const auto mr = build_meander(CoprimePair::make(1, 4));
  const auto ledger = make_ledger(mr, {});
  const auto order = triangularity_order(mr, ledger);
  CHECK(order == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("rule-based ledger is among the admissible change sets") {
  for (const auto& pr : coprime_pairs(12)) {
    CAPTURE(pr.p);
    CAPTURE(pr.q);
    const auto mr = build_meander(pr);
    const auto sc = construct(pr);
    const auto all = enumerate_admissible(mr);
    REQUIRE_FALSE(all.empty());
    CHECK(std::find(all.begin(), all.end(), changes_of(sc.ledger)) != all.end());
    for (const auto& cs : all) {
      const auto led = make_ledger(mr, cs);
      CHECK(ledger_violations(mr, led).empty());
      const auto done = complete(mr, led);
      REQUIRE(done.has_value());
      const auto oc = oracle_conditions(mr, done->final_ledger);
      CHECK((oc.a && oc.b && oc.c && oc.d));
    }
    const auto first = first_admissible(mr);
    REQUIRE(first.has_value());
    CHECK(*first == all.front());
  }
}

TEST_CASE("search rejects change sets that break the rules") {
  const auto mr = build_meander(CoprimePair::make(2, 3));
  // change a nil value
  const auto bad = make_ledger(mr, {{1, 2, 5}});
  CHECK_FALSE(ledger_violations(mr, bad).empty());
  CHECK(search_space_size(mr) >= 1);
}
