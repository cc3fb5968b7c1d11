// Exhaustive search over change sets allowed by the change rules: one
// non-nil boundary value per internal turning point, changed by an odd number
// of simple interval values on the far side.

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

#include "slice/slicebuild.hpp"

namespace slice::slicebuild {

std::vector<std::vector<Change>> change_options(const Meander& mr) {
  const auto& td = mr.td;
  const auto& T = td.positions();
  const int cnt = static_cast<int>(T.size());
  std::vector<std::vector<Change>> out;
  for (int k = 0; k < cnt; ++k) {
    const int x = T[static_cast<std::size_t>(k)];
    if (!td.is_internal(x)) continue;
    std::vector<Change> o;
    if (!td.nil(x - 1))
      for (int r = k + 1; r < cnt; r += 2) o.push_back(Change{x - 1, x, T[static_cast<std::size_t>(r)]});
    if (!td.nil(x))
      for (int r = k - 1; r >= 0; r -= 2) o.push_back(Change{x, T[static_cast<std::size_t>(r)], x});
    std::sort(o.begin(), o.end(), [](const Change& a, const Change& b) {
      return std::pair{a.i, a.hi - a.lo} < std::pair{b.i, b.hi - b.lo};
    });
    out.push_back(std::move(o));
  }
  return out;
}

std::uint64_t search_space_size(const Meander& mr) {
  std::uint64_t total = 1;
  for (const auto& o : change_options(mr)) {
    if (o.empty()) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / o.size()) return std::numeric_limits<std::uint64_t>::max();
    total *= o.size();
  }
  return total;
}

namespace {

// Depth-first over turning points in t-order; `visit` returns false to stop.
void dfs(const Meander& mr, std::uint64_t limit, const std::function<bool(const std::vector<Change>&)>& visit) {
  const auto opts = change_options(mr);
  std::vector<Change> cur;
  std::set<int> used;
  std::uint64_t leaves = 0;
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (stop) return;
    if (k == opts.size()) {
      if (++leaves > limit) throw ConstructionFailed("admissible search exceeded its candidate limit");
      std::vector<Change> sorted = cur;
      std::sort(sorted.begin(), sorted.end());
      if (!visit(sorted)) stop = true;
      return;
    }
    for (const auto& c : opts[k]) {
      if (used.count(c.i)) continue;
      used.insert(c.i);
      cur.push_back(c);
      rec(k + 1);
      cur.pop_back();
      used.erase(c.i);
      if (stop) return;
    }
  };
  rec(0);
}

}  // namespace

std::vector<std::vector<Change>> enumerate_admissible(const Meander& mr, std::uint64_t limit) {
  std::vector<std::vector<Change>> out;
  dfs(mr, limit, [&](const std::vector<Change>& ch) {
    if (complete(mr, make_ledger(mr, ch))) out.push_back(ch);
    return true;
  });
  return out;
}

std::optional<std::vector<Change>> first_admissible(const Meander& mr, std::uint64_t limit) {
  std::optional<std::vector<Change>> out;
  dfs(mr, limit, [&](const std::vector<Change>& ch) {
    if (complete(mr, make_ledger(mr, ch))) {
      out = ch;
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace slice::slicebuild
