#include "slice/slicebuild.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

namespace slice::slicebuild {

using meander::Tag;

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

int next_turning(const Meander& mr, int pos) {
  const auto& t = mr.td.positions();
  const int k = mr.td.index_of(pos);
  return k >= 0 && k + 1 < static_cast<int>(t.size()) ? t[z(k + 1)] : 0;
}

}  // namespace

IntervalValue interval_value(const Meander& mr, int s, int t) {
  if (s >= t) throw std::invalid_argument("interval_value needs s < t");
  if (!mr.td.is_turning(s) || !mr.td.is_turning(t))
    throw std::invalid_argument("interval end points must be turning positions");
  IntervalValue iv;
  iv.s = s;
  iv.t = t;
  iv.value = mr.iota(s, t);
  iv.simple = next_turning(mr, s) == t;
  iv.sign = mr.td.tag(s) == Tag::A ? 1 : -1;
  return iv;
}

std::string to_string(ChangeKind k) {
  switch (k) {
    case ChangeKind::Unchanged: return "unchanged";
    case ChangeKind::Simple: return "simple";
    case ChangeKind::Compound: return "compound";
    case ChangeKind::ExceptionalFix: return "exceptional-fix";
  }
  return "?";
}

std::string to_string(Rule r) {
  switch (r) {
    case Rule::None: return "none";
    case Rule::Simple: return "simple";
    case Rule::Undecided: return "undecided";
    case Rule::IsolatedShift: return "isolated-shift";
    case Rule::Bridge: return "bridge";
    case Rule::Return: return "return";
    case Rule::ReturnPastIsolated: return "return-past-isolated";
    case Rule::TailBridge: return "tail-bridge";
    case Rule::FixInternal: return "fix-internal";
    case Rule::FixEndPoint: return "fix-end-point";
    case Rule::Search: return "search";
  }
  return "?";
}

std::string to_string(Dispatch d) {
  switch (d) {
    case Dispatch::Forward: return "forward";
    case Dispatch::Reversed: return "reversed";
    case Dispatch::Split: return "split";
  }
  return "?";
}

std::string to_string(Mode m) { return m == Mode::RuleBased ? "rule-based" : "search-fallback"; }

std::vector<Change> changes_of(const ChangeLedger& ledger) {
  std::vector<Change> out;
  for (int i = 1; i <= ledger.size(); ++i) {
    const auto& en = ledger.at(i);
    if (en.changed()) out.push_back(Change{i, en.lo, en.hi});
  }
  return out;
}

namespace {

// chi and the undecided element, read off the changes.
void finish_ledger(const Meander& mr, ChangeLedger& ledger) {
  const auto& td = mr.td;
  const int n = mr.pair.n;
  ledger.chi.clear();
  std::set<int> used_by_chi;
  bool complete = true;
  for (int t : td.a_positions()) {
    if (!td.is_internal(t)) continue;
    const int u = td.a_sign(t) > 0 ? t - 1 : t;
    const auto& en = ledger.at(u);
    if (!en.changed()) {
      complete = false;
      continue;
    }
    if (en.lo == t)
      ledger.chi[t] = en.hi;
    else if (en.hi == t)
      ledger.chi[t] = en.lo;
    else {
      complete = false;
      continue;
    }
    used_by_chi.insert(u);
  }
  std::set<int> image;
  for (const auto& [t, b] : ledger.chi) image.insert(b);
  ledger.chi_injective = complete && image.size() == ledger.chi.size();
  for (int b : image)
    if (td.tag(b) != Tag::B) ledger.chi_injective = false;

  ledger.undecided.clear();
  for (int pos : td.positions())
    if (td.tag(pos) == Tag::B && !image.count(pos)) ledger.undecided.push_back(pos);

  ledger.undecided_disposition = "neighbour-unchanged";
  if (ledger.undecided.size() == 1) {
    const int d = ledger.undecided.front();
    for (int i : {d - 1, d}) {
      if (i < 1 || i > n - 1 || used_by_chi.count(i)) continue;
      auto& en = ledger.at(i);
      if (en.changed()) {
        ledger.undecided_disposition = "changed:" + std::to_string(i);
        if (en.rule == Rule::Simple) en.rule = Rule::Undecided;
      }
    }
  }
}

LedgerEntry change_entry(const Meander& mr, int i, int lo, int hi, Rule rule) {
  LedgerEntry en;
  en.kind = next_turning(mr, lo) == hi ? ChangeKind::Simple : ChangeKind::Compound;
  en.rule = rule;
  en.lo = lo;
  en.hi = hi;
  en.beta_prime = mr.beta_at(i) + mr.iota(lo, hi);
  return en;
}

ChangeLedger unchanged_ledger(const Meander& mr) {
  ChangeLedger ledger;
  for (int i = 1; i < mr.pair.n; ++i) {
    LedgerEntry en;
    en.beta_prime = mr.beta_at(i);
    ledger.entries.push_back(en);
  }
  return ledger;
}

}  // namespace

ChangeLedger make_ledger(const Meander& mr, const std::vector<Change>& changes, Rule rule) {
  ChangeLedger ledger = unchanged_ledger(mr);
  for (const auto& c : changes) {
    if (ledger.at(c.i).changed()) throw std::invalid_argument("index changed twice");
    ledger.at(c.i) = change_entry(mr, c.i, c.lo, c.hi, rule);
  }
  finish_ledger(mr, ledger);
  return ledger;
}

namespace {

// A window [lo, hi] of positions read forwards or backwards.  Oriented
// positions run 1..L; oriented beta index i sits between x = i and x = i+1.
struct View {
  const Meander& mr;
  int lo, hi;
  bool fwd;
  int L;

  View(const Meander& m, int l, int h, bool f) : mr(m), lo(l), hi(h), fwd(f), L(h - l + 1) {}

  int orig(int x) const { return fwd ? lo + x - 1 : hi - x + 1; }
  int ob(int i) const { return fwd ? lo + i - 1 : hi - i; }
  std::pair<int, int> oint(int u, int v) const {
    return fwd ? std::pair{lo + u - 1, lo + v - 1} : std::pair{hi - v + 1, hi - u + 1};
  }
  bool nil(int i) const { return mr.td.nil(ob(i)); }
  int sign(int x) const {
    const bool below = x <= L - 1 && nil(x);
    const bool above = x >= 2 && nil(x - 1);
    if (below == above) throw RuleFailure("A point without a unique nil neighbour in window");
    return below ? 1 : -1;
  }
};

struct Pending {
  int lo, hi;
  Rule rule;
};
using ChangeMap = std::map<int, Pending>;

std::vector<std::size_t> run_starts(const std::vector<int>& signs) {
  std::vector<std::size_t> st;
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (i == 0 || signs[i] != signs[i - 1]) st.push_back(i);
  return st;
}

void engine(const View& v, ChangeMap& out) {
  std::vector<int> T, As;
  for (int x = 1; x <= v.L; ++x) {
    const int o = v.orig(x);
    if (!v.mr.td.is_turning(o)) continue;
    T.push_back(x);
    if (v.mr.td.tag(o) == Tag::A) As.push_back(x);
  }
  if (As.empty()) return;
  std::map<int, std::size_t> idx;
  for (std::size_t k = 0; k < T.size(); ++k) idx[T[k]] = k;
  auto next_t = [&](int x) {
    const std::size_t k = idx.at(x);
    if (k + 1 >= T.size()) throw RuleFailure("no turning point after " + std::to_string(x));
    return T[k + 1];
  };
  auto prev_t = [&](int x) {
    const std::size_t k = idx.at(x);
    if (k == 0) throw RuleFailure("no turning point before " + std::to_string(x));
    return T[k - 1];
  };
  const int last = T.back();

  std::vector<int> sg;
  for (int x : As) sg.push_back(v.sign(x));
  if (sg.front() != 1) throw RuleFailure("engine needs a positive first sign");
  const auto st = run_starts(sg);

  auto ch = [&](int i, int u, int w, Rule rule) {
    const int oi = v.ob(i);
    const auto [l, h] = v.oint(u, w);
    if (out.count(oi)) throw RuleFailure("index " + std::to_string(oi) + " changed twice");
    if (v.mr.td.nil(oi)) throw RuleFailure("rule changes nil value " + std::to_string(oi));
    out[oi] = Pending{l, h, rule};
  };

  const std::size_t none = static_cast<std::size_t>(-1);
  for (std::size_t r = 0; r < st.size(); r += 2) {
    const std::size_t j = st[r];
    const std::size_t k = r + 1 < st.size() ? st[r + 1] : none;
    const std::size_t l = r + 2 < st.size() ? st[r + 2] : none;

    // Positive run: each A point changes its upper neighbour and the lower
    // neighbour of the next B point by the same simple interval.
    const std::size_t pos_end = k != none ? k : As.size();
    for (std::size_t a = j; a < pos_end; ++a) {
      if (k != none && a == k - 1) continue;
      const int t = As[a];
      const int nb = next_t(t);
      if (t > 1) ch(t - 1, t, nb, Rule::Simple);
      if (nb != last) ch(nb, t, nb, Rule::Simple);
    }
    if (k == none) continue;

    // Sign change: the last positive A point bridges over the negative run.
    const int t = As[k - 1];
    const int s = l != none ? prev_t(As[l]) : last;
    if (t > 1) ch(t - 1, t, s, Rule::Bridge);
    const bool iso1 = next_t(t) == t + 1;
    if (l != none) {
      if (!iso1)
        ch(s, t, s, Rule::Return);
      else
        ch(s, As[k], s, Rule::ReturnPastIsolated);
    }
    const std::size_t neg_end = l != none ? l : As.size();
    for (std::size_t a = k; a < neg_end; ++a) {
      const int t2 = As[a];
      const int pb = prev_t(t2);
      ch(t2, pb, t2, Rule::Simple);
      if (a == k && iso1)
        ch(pb, t, pb, Rule::IsolatedShift);
      else
        ch(pb - 1, pb, t2, Rule::Simple);
    }
  }
}

ChangeLedger ledger_from(const Meander& mr, const ChangeMap& m) {
  ChangeLedger ledger = unchanged_ledger(mr);
  for (const auto& [i, pd] : m) ledger.at(i) = change_entry(mr, i, pd.lo, pd.hi, pd.rule);
  finish_ledger(mr, ledger);
  return ledger;
}

}  // namespace

std::vector<Root> star_roots(const Meander& mr, const ChangeLedger& ledger) {
  std::vector<Root> out;
  for (int i = 1; i <= ledger.size(); ++i) out.push_back(mr.td.eps(i) * ledger.at(i).beta_prime);
  return out;
}

BuildResult build_pi_star(const Meander& mr) {
  const int n = mr.pair.n;
  const auto& td = mr.td;
  const auto As = td.a_positions();
  const auto sg = meander::a_signs(td);
  ChangeMap m;
  BuildResult res;
  if (sg.front() == 1) {
    engine(View(mr, 1, n, true), m);
    res.dispatch = Dispatch::Forward;
  } else if (run_starts(sg).size() % 2 == 1) {
    engine(View(mr, 1, n, false), m);
    res.dispatch = Dispatch::Reversed;
  } else {
    const std::size_t k = run_starts(sg).back();
    const int idx = td.index_of(As[k]);
    const int t = td.positions()[z(idx - 1)];
    engine(View(mr, 1, t, false), m);
    engine(View(mr, t, n, true), m);
    if (m.count(t - 1)) throw RuleFailure("split point boundary already changed");
    if (td.nil(t - 1)) throw RuleFailure("split point boundary is nil");
    m[t - 1] = Pending{t, As.back(), Rule::TailBridge};
    res.dispatch = Dispatch::Split;
  }
  res.ledger = ledger_from(mr, m);
  res.pi_star = star_roots(mr, res.ledger);
  return res;
}

FixResult exceptional_fix(const Meander& mr, const ChangeLedger& ledger) {
  const auto& td = mr.td;
  const int n = mr.pair.n;
  const int e = td.e();
  if (ledger.at(e).changed()) throw std::logic_error("exceptional_fix: beta_e is already changed");

  FixResult res;
  res.ledger = ledger;
  FixRecord& rec = res.record;
  const int tp = td.is_turning(e) ? e : e + 1;
  if (!td.is_turning(tp)) throw RuleFailure("beta_e is not a boundary value");
  if (td.tag(tp) != Tag::B) throw RuleFailure("beta_e does not bound a B point");
  rec.tp = tp;
  const Root& beta_e = mr.beta_at(e);

  auto set_e = [&](int lo, int hi, Rule rule) {
    LedgerEntry& en = res.ledger.at(e);
    en.kind = ChangeKind::ExceptionalFix;
    en.rule = rule;
    en.lo = lo;
    en.hi = hi;
    en.beta_prime = -mr.iota(lo, hi);
  };
  auto set_ie = [&](int i) {
    LedgerEntry& en = res.ledger.at(i);
    en.kind = ChangeKind::ExceptionalFix;
    en.rule = rec.end_point ? Rule::FixEndPoint : Rule::FixInternal;
    en.beta_prime = mr.beta_at(i) + mr.iota(en.lo, en.hi) - beta_e;
    rec.ie = i;
  };

  if (tp != 1 && tp != n) {
    const int f = e == tp - 1 ? tp : tp - 1;
    const LedgerEntry& fe = ledger.at(f);
    if (!fe.changed()) throw RuleFailure("other boundary value of the exceptional turning point is unchanged");
    rec.f = f;
    rec.lo = fe.lo;
    rec.hi = fe.hi;
    std::vector<int> cands;
    for (int i = 1; i < n; ++i) {
      const auto& en = ledger.at(i);
      if (i != f && en.changed() && (en.lo == e || en.hi - 1 == e)) cands.push_back(i);
    }
    if (cands.size() > 1) throw RuleFailure("i(e) is not unique");
    LedgerEntry restored;
    restored.beta_prime = mr.beta_at(f);
    res.ledger.at(f) = restored;
    if (!cands.empty()) set_ie(cands.front());
    set_e(rec.lo, rec.hi, Rule::FixInternal);
  } else {
    rec.end_point = true;
    const auto& T = td.positions();
    const int k = td.index_of(tp);
    const int s = k == 0 ? T[1] : T[z(k - 1)];
    const int lo = std::min(s, tp), hi = std::max(s, tp);
    rec.lo = lo;
    rec.hi = hi;
    const int nb = s <= n - 1 && td.nil(s) ? s : s - 1;
    if (lo <= nb && nb < hi && s != 1 && s != n) {
      const int other = nb == s ? s - 1 : s;
      if (ledger.at(other).changed()) set_ie(other);
    }
    set_e(lo, hi, Rule::FixEndPoint);
  }
  res.pi_star = star_roots(mr, res.ledger);
  return res;
}

Conditions check_conditions(const Meander& mr, const ChangeLedger& ledger) {
  Conditions c;
  const int n = mr.pair.n, p = mr.pair.p, e = mr.td.e();
  const auto star = star_roots(mr, ledger);
  auto note = [&](const std::string& w) {
    if (c.witness.empty()) c.witness = w;
  };

  try {
    c.sys = rootlab::validate_path_system(star);
    c.a = true;
  } catch (const rootlab::PathError& ex) {
    note(std::string("a: ") + rootlab::to_string(ex.kind()) + ": " + ex.what());
  }

  c.b = true;
  for (int i = 1; i < n; ++i) {
    if (!ledger.at(i).changed()) continue;
    const Root& r = star[z(i - 1)];
    if (!r.is_elementary() || rootlab::alpha_p_coefficient(r, p) != -1) {
      c.b = false;
      note("b: beta*_" + std::to_string(i) + " = " + r.str());
      break;
    }
  }

  c.c = star[z(e - 1)] != mr.td.eps(e) * mr.beta_at(e);
  if (!c.c) note("c: beta*_e unchanged at e = " + std::to_string(e));

  if (c.a) {
    c.d = true;
    c.d_all = true;
    for (int i = 1; i < n; ++i) {
      if (rootlab::positive_wrt(mr.td.eps(i) * mr.beta_at(i), *c.sys)) continue;
      c.d_all = false;
      if (i != e) {
        c.d = false;
        note("d: eps_" + std::to_string(i) + " beta_" + std::to_string(i) + " is negative");
        break;
      }
    }
  }
  return c;
}

std::vector<std::string> ledger_violations(const Meander& mr, const ChangeLedger& ledger) {
  const auto& td = mr.td;
  const int n = mr.pair.n;
  std::vector<std::string> out;
  std::map<int, int> anchors;
  for (int i = 1; i < n; ++i) {
    const auto& en = ledger.at(i);
    if (!en.changed()) continue;
    const std::string tag = "index " + std::to_string(i) + ": ";
    if (en.kind == ChangeKind::ExceptionalFix) {
      out.push_back(tag + "exceptional fix in a single-primed ledger");
      continue;
    }
    if (!td.boundary(i)) out.push_back(tag + "not a boundary value");
    if (td.nil(i)) out.push_back(tag + "nil value changed");
    if (!(en.lo < en.hi) || !td.is_turning(en.lo) || !td.is_turning(en.hi)) {
      out.push_back(tag + "interval end points are not turning positions");
      continue;
    }
    int anchor = 0;
    if (i == en.lo - 1)
      anchor = en.lo;
    else if (i == en.hi)
      anchor = en.hi;
    else {
      out.push_back(tag + "added interval is not on the opposite side");
      continue;
    }
    if ((td.index_of(en.hi) - td.index_of(en.lo)) % 2 == 0)
      out.push_back(tag + "even number of simple interval values");
    if (!td.is_internal(anchor)) out.push_back(tag + "anchored at an end point");
    ++anchors[anchor];
  }
  for (int pos : td.positions()) {
    if (!td.is_internal(pos)) continue;
    const int c = anchors.count(pos) ? anchors[pos] : 0;
    if (c != 1)
      out.push_back("turning position " + std::to_string(pos) + ": " + std::to_string(c) + " changes");
  }
  return out;
}

std::optional<Completion> complete(const Meander& mr, const ChangeLedger& ledger) {
  Completion out;
  Conditions c = check_conditions(mr, ledger);
  out.d_all_before_fix = c.d_all;
  if (!c.a || !c.b) return std::nullopt;
  if (c.c) {
    if (!c.d) return std::nullopt;
    out.final_ledger = ledger;
    out.cond = std::move(c);
    return out;
  }
  FixResult fx;
  try {
    fx = exceptional_fix(mr, ledger);
  } catch (const RuleFailure&) {
    return std::nullopt;
  }
  Conditions c2 = check_conditions(mr, fx.ledger);
  if (!c2.all()) return std::nullopt;
  out.final_ledger = std::move(fx.ledger);
  out.fix = fx.record;
  out.cond = std::move(c2);
  return out;
}

SliceConstruction construct(const meander::CoprimePair& pair) {
  SliceConstruction sc;
  sc.mr = meander::build_meander(pair);
  const Meander& mr = sc.mr;

  std::optional<Completion> done;
  try {
    BuildResult br = build_pi_star(mr);
    sc.dispatch = br.dispatch;
    const auto viol = ledger_violations(mr, br.ledger);
    if (!viol.empty()) throw RuleFailure(viol.front());
    done = complete(mr, br.ledger);
    if (!done) throw RuleFailure("rule-based system fails a)-d)");
    sc.ledger = std::move(br.ledger);
  } catch (const RuleFailure& ex) {
    sc.fallback_reason = ex.what();
    sc.mode = Mode::SearchFallback;
    const auto found = first_admissible(mr);
    if (!found)
      throw ConstructionFailed("no admissible change set satisfies a)-d) for (" + std::to_string(pair.p) +
                               "," + std::to_string(pair.q) + ")");
    sc.ledger = make_ledger(mr, *found, Rule::Search);
    done = complete(mr, sc.ledger);
    if (!done) throw ConstructionFailed("search result does not complete");
  }

  sc.final_ledger = std::move(done->final_ledger);
  sc.fix = done->fix;
  sc.used_exceptional_fix = done->fix.has_value();
  sc.d_all_before_fix = done->d_all_before_fix;
  sc.cond = std::move(done->cond);
  sc.sys = *sc.cond.sys;
  sc.pi_star = star_roots(mr, sc.final_ledger);
  return sc;
}

std::vector<int> triangularity_order(const Meander& mr, const ChangeLedger& ledger) {
  const int n = mr.pair.n;
  const auto& phi = mr.tr.phi;
  // coef[i][j]: coefficient of eps_j beta_j in eps_i beta'_i.
  std::vector<std::vector<int>> coef(z(n), std::vector<int>(z(n), 0));
  for (int i = 1; i < n; ++i) {
    const Root& r = ledger.at(i).beta_prime;
    int acc = 0;
    for (int j = 1; j < n; ++j) {
      acc += r[phi[z(j - 1)]];
      coef[z(i)][z(j)] = mr.td.eps(i) * acc * mr.td.eps(j);
    }
  }
  auto rank = [&](int i) { return static_cast<int>(ledger.at(i).kind); };

  std::vector<std::vector<int>> succ(z(n));
  std::vector<int> indeg(z(n), 0);
  for (int i = 1; i < n; ++i) {
    if (coef[z(i)][z(i)] != 1)
      throw TriangularityError("diagonal coefficient at " + std::to_string(i) + " is " +
                               std::to_string(coef[z(i)][z(i)]));
    for (int j = 1; j < n; ++j) {
      if (j == i || coef[z(i)][z(j)] == 0) continue;
      succ[z(j)].push_back(i);
      ++indeg[z(i)];
    }
  }
  using Key = std::pair<int, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (int i = 1; i < n; ++i)
    if (indeg[z(i)] == 0) ready.push({rank(i), i});
  std::vector<int> order;
  while (!ready.empty()) {
    const int i = ready.top().second;
    ready.pop();
    order.push_back(i);
    for (int k : succ[z(i)])
      if (--indeg[z(k)] == 0) ready.push({rank(k), k});
  }
  if (static_cast<int>(order.size()) != n - 1) throw TriangularityError("cycle among changed values");
  return order;
}

}  // namespace slice::slicebuild
