#include "slice/meander.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>

namespace slice::meander {

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

}  // namespace

CoprimePair CoprimePair::make(int p, int q) {
  if (p < 1 || q < 1) throw InputError("block sizes must be positive");
  if (p > q) throw InputError("expected p <= q, got p=" + std::to_string(p) + " q=" + std::to_string(q));
  if (p + q < 3) throw InputError("need p+q >= 3");
  if (std::gcd(p, q) != 1)
    throw InputError("p=" + std::to_string(p) + " and q=" + std::to_string(q) +
                     " are not coprime: there is no sigma/tau path through all n points");
  return CoprimePair{p, q, p + q};
}

std::vector<CoprimePair> coprime_pairs(int max_n) {
  std::vector<CoprimePair> out;
  for (int n = 3; n <= max_n; ++n)
    for (int p = 1; 2 * p <= n; ++p)
      if (std::gcd(p, n - p) == 1) out.push_back(CoprimePair{p, n - p, n});
  return out;
}

int sigma(int i, int n) {
  if (i < 1 || i > n) throw InputError("sigma index out of range");
  return n + 1 - i;
}

int tau(int i, int p, int n) {
  if (i < 1 || i > n) throw InputError("tau index out of range");
  return i <= p ? p + 1 - i : n + p + 1 - i;
}

int orbit_count(int p, int q) {
  const int n = p + q;
  std::vector<bool> seen(z(n + 1), false);
  int orbits = 0;
  for (int start = 1; start <= n; ++start) {
    if (seen[z(start)]) continue;
    ++orbits;
    std::vector<int> stack{start};
    seen[z(start)] = true;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (int y : {sigma(x, n), tau(x, p, n)}) {
        if (!seen[z(y)]) {
          seen[z(y)] = true;
          stack.push_back(y);
        }
      }
    }
  }
  return orbits;
}

bool rotation_is_single_cycle(int p, int q) {
  const int n = p + q;
  int x = 1, len = 0;
  do {
    x = tau(sigma(x, n), p, n);
    ++len;
  } while (x != 1);
  return len == n;
}

Traversal walk(int p, int q) {
  const int n = p + q;
  Traversal tr;
  if (p % 2 == 1) {
    tr.a = (p + 1) / 2;
    tr.b = n % 2 == 1 ? (n + 1) / 2 : p + (q + 1) / 2;
  } else {
    tr.b = (n + 1) / 2;
    tr.a = p + (q + 1) / 2;
  }
  if (tau(tr.a, p, n) != tr.a)
    throw InputError("no tau-fixed starting point: every sigma/tau orbit is closed");
  tr.phi.reserve(z(n));
  int cur = tr.a;
  tr.phi.push_back(cur);
  for (int k = 1; k < n; ++k) {
    cur = k % 2 == 1 ? sigma(cur, n) : tau(cur, p, n);
    tr.phi.push_back(cur);
  }
  std::vector<int> sorted = tr.phi;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[z(i)] != i + 1)
      throw InputError("the sigma/tau walk from " + std::to_string(tr.a) + " does not visit every point");
  return tr;
}

Traversal traversal(const CoprimePair& pair) {
  Traversal tr = walk(pair.p, pair.q);
  if (tau(tr.a, pair.p, pair.n) != tr.a) throw ConsistencyError("starting point is not tau-fixed");
  if (tr.phi.back() != tr.b) throw ConsistencyError("walk does not finish at b");
  return tr;
}

std::vector<Root> beta_sequence(const Traversal& tr) {
  std::vector<Root> out;
  const int n = tr.n();
  out.reserve(z(n - 1));
  for (int i = 1; i < n; ++i) out.push_back(rootlab::eps_diff(tr.at(i), tr.at(i + 1), n));
  return out;
}

TurningData::TurningData(const CoprimePair& pair, const Traversal& tr) : n_(pair.n) {
  const int p = pair.p, q = pair.q, n = pair.n;

  // Closed forms.
  std::vector<bool> in_a(z(n + 1), false), in_b(z(n + 1), false);
  for (int k = p / 2 + 1; k <= p; ++k) {
    in_a[z(k)] = true;
    a_vals_.push_back(k);
  }
  for (int k = n / 2 + 1; k <= p + (q + 1) / 2; ++k) {
    in_b[z(k)] = true;
    b_vals_.push_back(k);
  }

  // Sign-flip definition read on values: k turns iff k - sigma(k) and
  // k - tau(k) differ in sign or one of them vanishes.
  for (int k = 1; k <= n; ++k) {
    const int d1 = k - sigma(k, n), d2 = k - tau(k, p, n);
    const bool turns = d1 == 0 || d2 == 0 || ((d1 > 0) != (d2 > 0));
    if (turns != (in_a[z(k)] || in_b[z(k)]))
      throw ConsistencyError("turning value " + std::to_string(k) + " disagrees between the two definitions");
  }

  is_t_.assign(z(n + 2), false);
  tag_.assign(z(n + 1), Tag::B);
  for (int pos = 1; pos <= n; ++pos) {
    const int v = tr.at(pos);
    if (in_a[z(v)] || in_b[z(v)]) {
      t_.push_back(pos);
      is_t_[z(pos)] = true;
      tag_[z(pos)] = in_a[z(v)] ? Tag::A : Tag::B;
    }
  }
  if (count() != p + 1) throw ConsistencyError("expected p+1 turning points");
  if (!is_t_[1] || !is_t_[z(n)]) throw ConsistencyError("end points must be turning points");
  for (std::size_t k = 1; k < t_.size(); ++k)
    if (tag_[z(t_[k])] == tag_[z(t_[k - 1])]) throw ConsistencyError("A/B tags do not alternate");

  label_base_ = p % 2 == 1 ? 1 : 0;

  // eps_i = +1 on [t_k, t_{k+1}) when t_k is an A point.
  eps_.assign(z(n), 0);
  for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
    const int s = tag_[z(t_[k])] == Tag::A ? 1 : -1;
    const int lab = static_cast<int>(k) + label_base_;
    if (s != (lab % 2 == 1 ? 1 : -1))
      throw ConsistencyError("eps sign disagrees with the label parity rule");
    for (int i = t_[k]; i < t_[k + 1]; ++i) eps_[z(i)] = s;
  }

  const auto beta = beta_sequence(tr);
  nil_.assign(z(n), false);
  for (int i = 1; i < n; ++i) nil_[z(i)] = rootlab::alpha_p_coefficient(beta[z(i - 1)], p) != 0;

  for (int pos : t_) {
    if (tag_[z(pos)] != Tag::A) continue;
    const bool below = pos <= n - 1 && nil_[z(pos)];
    const bool above = pos >= 2 && nil_[z(pos - 1)];
    if (below == above) throw ConsistencyError("A point without a unique nil boundary value");
  }

  for (int i = 1; i < n; ++i) {
    if (rootlab::signed_simple_index(beta[z(i - 1)]) != 0) {
      if (e_ != 0) throw ConsistencyError("more than one exceptional value");
      e_ = i;
    }
  }
  if (e_ == 0) throw ConsistencyError("no exceptional value");
  for (int c : {p, 2 * p + q, n})
    if (c % 2 == 0) m_ = c;
  if (rootlab::signed_simple_index(beta[z(e_ - 1)]) != m_ / 2)
    throw ConsistencyError("exceptional value is not +-alpha_{m/2}");
  if (nil_[z(e_)]) throw ConsistencyError("exceptional value is nil");
}

Tag TurningData::tag(int pos) const {
  if (!is_turning(pos)) throw std::out_of_range("not a turning position: " + std::to_string(pos));
  return tag_[z(pos)];
}

int TurningData::label(int k) const {
  if (k < 1 || k > count()) throw std::out_of_range("turning index out of range");
  return k - 1 + label_base_;
}

int TurningData::index_of(int pos) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), pos);
  return it != t_.end() && *it == pos ? static_cast<int>(it - t_.begin()) : -1;
}

int TurningData::a_sign(int pos) const {
  if (tag(pos) != Tag::A) throw std::out_of_range("a_sign of a B position");
  return pos <= n_ - 1 && nil_[z(pos)] ? 1 : -1;
}

std::vector<int> TurningData::a_positions() const {
  std::vector<int> out;
  for (int pos : t_)
    if (tag_[z(pos)] == Tag::A) out.push_back(pos);
  return out;
}

std::string Signature::str() const {
  std::string s;
  for (int x : sg) s += x > 0 ? '+' : '-';
  return s;
}

std::vector<int> a_signs(const TurningData& td) {
  std::vector<int> out;
  for (int pos : td.a_positions()) out.push_back(td.a_sign(pos));
  return out;
}

Signature signature(const TurningData& td, int p) {
  const auto all = a_signs(td);
  Signature s;
  s.first_sign = all.front();
  s.sg.assign(all.begin(), all.begin() + p / 2);
  for (std::size_t j = 0; j < s.sg.size(); ++j)
    if (j == 0 || s.sg[j] != s.sg[j - 1]) s.changes.push_back(static_cast<int>(j) + 1);
  return s;
}

Root Meander::iota(int s, int t) const {
  if (s >= t) throw std::invalid_argument("iota needs s < t");
  return rootlab::eps_diff(tr.at(s), tr.at(t), pair.n);
}

Meander build_meander(const CoprimePair& pair) {
  Traversal tr = traversal(pair);
  auto beta = beta_sequence(tr);
  TurningData td(pair, tr);
  Signature sig = signature(td, pair.p);
  return Meander{pair, std::move(tr), std::move(beta), std::move(td), std::move(sig)};
}

std::map<std::string, std::vector<CoprimePair>> Atlas::fibers() const {
  std::map<std::string, std::vector<CoprimePair>> out;
  for (const auto& [k, v] : image)
    if (v.size() >= 2) out.emplace(k, v);
  return out;
}

namespace {

Atlas assemble(std::vector<AtlasRow> rows) {
  Atlas at;
  at.rows = std::move(rows);
  for (const auto& r : at.rows) at.image[r.sig.str()].push_back(r.pair);
  return at;
}

}  // namespace

Atlas signature_atlas(int max_n, int jobs) {
  if (max_n < 3) throw InputError("max_n must be at least 3");
  const auto pairs = coprime_pairs(max_n);
  std::vector<AtlasRow> rows(pairs.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    TurningData td(pairs[k], traversal(pairs[k]));
    rows[k] = AtlasRow{pairs[k], signature(td, pairs[k].p)};
  }
  return assemble(std::move(rows));
}

Atlas signature_atlas_serial(int max_n) {
  if (max_n < 3) throw InputError("max_n must be at least 3");
  std::vector<AtlasRow> rows;
  for (const auto& pr : coprime_pairs(max_n)) {
    TurningData td(pr, traversal(pr));
    rows.push_back(AtlasRow{pr, signature(td, pr.p)});
  }
  return assemble(std::move(rows));
}

}  // namespace slice::meander
