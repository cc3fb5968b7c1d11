#include "slice/rootlab.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace slice::rootlab {

Root::Root(std::vector<int> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidRoot("root of size 0");
  if (std::accumulate(coords_.begin(), coords_.end(), 0) != 0)
    throw InvalidRoot("root coordinates must sum to zero");
}

Root Root::zero(int n) {
  if (n < 1) throw InvalidRoot("root of size < 1");
  return Root(std::vector<int>(static_cast<std::size_t>(n), 0));
}

bool Root::is_elementary() const {
  int plus = 0, minus = 0;
  for (int c : coords_) {
    if (c == 1)
      ++plus;
    else if (c == -1)
      ++minus;
    else if (c != 0)
      return false;
  }
  return plus == 1 && minus == 1;
}

bool Root::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](int c) { return c == 0; });
}

int Root::head() const {
  if (!is_elementary()) throw InvalidRoot("head() of non-elementary root " + str());
  return static_cast<int>(std::find(coords_.begin(), coords_.end(), 1) - coords_.begin()) + 1;
}

int Root::tail() const {
  if (!is_elementary()) throw InvalidRoot("tail() of non-elementary root " + str());
  return static_cast<int>(std::find(coords_.begin(), coords_.end(), -1) - coords_.begin()) + 1;
}

Root Root::operator-() const {
  Root r = *this;
  for (int& c : r.coords_) c = -c;
  return r;
}

Root& Root::operator+=(const Root& o) {
  if (o.size() != size()) throw InvalidRoot("adding roots of different rank");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

Root& Root::operator-=(const Root& o) { return *this += -o; }

Root operator*(int s, Root r) {
  for (int& c : r.coords_) c *= s;
  return r;
}

std::string Root::str() const {
  if (is_elementary()) return "e" + std::to_string(head()) + "-e" + std::to_string(tail());
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? "," : "") << coords_[i];
  os << ')';
  return os.str();
}

Root eps_diff(int a, int b, int n) {
  if (n < 2 || a < 1 || b < 1 || a > n || b > n)
    throw InvalidRoot("eps_diff index out of range 1.." + std::to_string(n));
  if (a == b) throw InvalidRoot("eps_diff needs distinct indices");
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  c[static_cast<std::size_t>(a - 1)] = 1;
  c[static_cast<std::size_t>(b - 1)] = -1;
  return Root(std::move(c));
}

Root simple_root(int i, int n) { return eps_diff(i, i + 1, n); }

SimpleCoords to_simple_coords(const Root& r) {
  SimpleCoords out;
  out.k.reserve(static_cast<std::size_t>(r.size() - 1));
  int acc = 0;
  for (int j = 1; j < r.size(); ++j) {
    acc += r[j];
    out.k.push_back(acc);
  }
  return out;
}

Root from_simple_coords(const SimpleCoords& k) {
  const int n = static_cast<int>(k.k.size()) + 1;
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  int prev = 0;
  for (int j = 0; j < n - 1; ++j) {
    c[static_cast<std::size_t>(j)] = k.k[static_cast<std::size_t>(j)] - prev;
    prev = k.k[static_cast<std::size_t>(j)];
  }
  c[static_cast<std::size_t>(n - 1)] = -prev;
  return Root(std::move(c));
}

int alpha_p_coefficient(const Root& r, int p) {
  if (p < 1 || p >= r.size()) throw InvalidRoot("alpha_p index out of range");
  int acc = 0;
  for (int i = 1; i <= p; ++i) acc += r[i];
  return acc;
}

int signed_simple_index(const Root& r) {
  if (!r.is_elementary()) return 0;
  const int h = r.head(), t = r.tail();
  if (t == h + 1) return h;
  if (h == t + 1) return t;
  return 0;
}

int scalar_product(const Root& a, const Root& b) {
  if (a.size() != b.size()) throw InvalidRoot("pairing roots of different rank");
  int s = 0;
  for (int i = 1; i <= a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Root> kostant_cascade(int n) {
  if (n < 2) throw InvalidRoot("kostant_cascade needs n >= 2");
  std::vector<Root> out;
  for (int i = 1; i <= n / 2; ++i) out.push_back(eps_diff(i, n + 1 - i, n));
  return out;
}

std::vector<Root> levi_cascade(int p, int q) {
  if (p < 1 || q < 1) throw InvalidRoot("levi_cascade needs positive block sizes");
  const int n = p + q;
  std::vector<Root> out;
  for (int i = 1; i <= p / 2; ++i) out.push_back(eps_diff(p + 1 - i, i, n));
  for (int i = 1; i <= q / 2; ++i) out.push_back(eps_diff(n + 1 - i, p + i, n));
  return out;
}

std::string to_string(PathErrorKind k) {
  switch (k) {
    case PathErrorKind::WrongCount: return "wrong-count";
    case PathErrorKind::NonElementary: return "non-elementary";
    case PathErrorKind::OrientationConflict: return "orientation-conflict";
    case PathErrorKind::Branching: return "branching";
    case PathErrorKind::Disconnected: return "disconnected";
  }
  return "?";
}

PathSystem validate_path_system(std::span<const Root> roots) {
  if (roots.empty()) throw PathError(PathErrorKind::WrongCount, "empty root list");
  const int n = roots.front().size();
  if (static_cast<int>(roots.size()) != n - 1)
    throw PathError(PathErrorKind::WrongCount, "expected " + std::to_string(n - 1) + " roots, got " +
                                                   std::to_string(roots.size()));
  for (const auto& r : roots) {
    if (r.size() != n) throw PathError(PathErrorKind::WrongCount, "mixed rank in root list");
    if (!r.is_elementary())
      throw PathError(PathErrorKind::NonElementary, "root " + r.str() + " is not elementary");
  }

  std::vector<int> next(static_cast<std::size_t>(n + 1), 0), prev(static_cast<std::size_t>(n + 1), 0);
  for (const auto& r : roots) {
    const int a = r.head(), b = r.tail();
    if (next[static_cast<std::size_t>(b)] == a)
      throw PathError(PathErrorKind::OrientationConflict, "both " + r.str() + " and its negative occur");
    if (next[static_cast<std::size_t>(a)] != 0)
      throw PathError(PathErrorKind::Branching, "vertex " + std::to_string(a) + " has out-degree 2");
    if (prev[static_cast<std::size_t>(b)] != 0)
      throw PathError(PathErrorKind::Branching, "vertex " + std::to_string(b) + " has in-degree 2");
    next[static_cast<std::size_t>(a)] = b;
    prev[static_cast<std::size_t>(b)] = a;
  }

  int start = 0;
  for (int v = 1; v <= n; ++v) {
    if (prev[static_cast<std::size_t>(v)] == 0) {
      if (start != 0)
        throw PathError(PathErrorKind::Disconnected, "more than one source vertex");
      start = v;
    }
  }
  if (start == 0) throw PathError(PathErrorKind::Disconnected, "edges close a cycle");

  PathSystem sys;
  sys.roots_.assign(roots.begin(), roots.end());
  sys.pos_.assign(static_cast<std::size_t>(n), 0);
  for (int v = start; v != 0; v = next[static_cast<std::size_t>(v)]) {
    if (sys.pos_[static_cast<std::size_t>(v - 1)] != 0)
      throw PathError(PathErrorKind::Disconnected, "edges close a cycle");
    sys.order_.push_back(v);
    sys.pos_[static_cast<std::size_t>(v - 1)] = static_cast<int>(sys.order_.size());
  }
  if (static_cast<int>(sys.order_.size()) != n)
    throw PathError(PathErrorKind::Disconnected, "path does not reach every vertex");
  return sys;
}

bool positive_wrt(const Root& r, const PathSystem& sys) {
  return sys.position(r.head()) < sys.position(r.tail());
}

std::vector<int> expand_in(const Root& r, const PathSystem& sys) {
  // Along the path, the coefficient of the k-th link is the prefix sum of
  // r's coordinates over c_1..c_k.
  const int n = sys.size();
  std::vector<int> by_link(static_cast<std::size_t>(n - 1), 0);
  int acc = 0;
  for (int k = 1; k < n; ++k) {
    acc += r[sys.order()[static_cast<std::size_t>(k - 1)]];
    by_link[static_cast<std::size_t>(k - 1)] = acc;
  }
  std::vector<int> out;
  out.reserve(sys.roots().size());
  for (const auto& b : sys.roots()) out.push_back(by_link[static_cast<std::size_t>(sys.position(b.head()) - 1)]);
  return out;
}

}  // namespace slice::rootlab
