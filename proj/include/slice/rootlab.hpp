#pragma once

// Type A_{n-1} root lattice in the epsilon basis.
//
// All public indices are 1-based: eps_diff(a, b, n) is e_a - e_b, simple
// coordinates k_1..k_{n-1} are coefficients of alpha_1..alpha_{n-1}.

#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slice::rootlab {

class InvalidRoot : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A vector of the sl(n) root lattice, stored as coefficients of e_1..e_n.
/// Sums of roots (interval values) are Roots too; "elementary" is checked.
class Root {
 public:
  Root() = default;
  explicit Root(std::vector<int> coords);
  static Root zero(int n);

  int size() const { return static_cast<int>(coords_.size()); }
  /// Coefficient of e_i, 1-based.
  int operator[](int i) const { return coords_.at(static_cast<std::size_t>(i - 1)); }
  std::span<const int> coords() const { return coords_; }

  /// Exactly one +1, one -1, rest 0.
  bool is_elementary() const;
  bool is_zero() const;
  /// Index of the +1 (resp. -1) entry of an elementary root.
  int head() const;
  int tail() const;

  Root operator-() const;
  Root& operator+=(const Root& o);
  Root& operator-=(const Root& o);
  friend Root operator+(Root a, const Root& b) { return a += b; }
  friend Root operator-(Root a, const Root& b) { return a -= b; }
  friend Root operator*(int s, Root r);

  bool operator==(const Root&) const = default;
  auto operator<=>(const Root&) const = default;

  /// "e4-e2" for elementary roots, "(0,-1,0,1,0)" otherwise.
  std::string str() const;

 private:
  std::vector<int> coords_;
};

/// Coefficients k_1..k_{n-1} with respect to alpha_1..alpha_{n-1}.
struct SimpleCoords {
  std::vector<int> k;
  bool operator==(const SimpleCoords&) const = default;
};

Root eps_diff(int a, int b, int n);
/// alpha_i = e_i - e_{i+1}.
Root simple_root(int i, int n);

SimpleCoords to_simple_coords(const Root& r);
Root from_simple_coords(const SimpleCoords& k);

/// Coefficient of alpha_p: the p-th prefix sum of the e-coordinates.
int alpha_p_coefficient(const Root& r, int p);

/// Index i with r = +-alpha_i, or 0 when r is not a signed simple root.
int signed_simple_index(const Root& r);

/// Standard (trace) pairing of e-coordinates.
int scalar_product(const Root& a, const Root& b);

/// { e_i - e_{n+1-i} : 1 <= i <= [n/2] }.
std::vector<Root> kostant_cascade(int n);

/// Negated cascades of sl(p) on e_1..e_p and sl(q) on e_{p+1}..e_{p+q}.
std::vector<Root> levi_cascade(int p, int q);

enum class PathErrorKind {
  WrongCount,
  NonElementary,
  OrientationConflict,
  Branching,
  Disconnected,
};

std::string to_string(PathErrorKind k);

class PathError : public std::runtime_error {
 public:
  PathError(PathErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  PathErrorKind kind() const { return kind_; }

 private:
  PathErrorKind kind_;
};

/// n-1 elementary roots forming the directed Hamiltonian path
/// c_1 -> c_2 -> ... -> c_n, i.e. a simple root system of type A_{n-1}.
class PathSystem {
 public:
  const std::vector<Root>& roots() const { return roots_; }
  /// c_1..c_n
  const std::vector<int>& order() const { return order_; }
  int size() const { return static_cast<int>(order_.size()); }
  /// 1-based position of vertex v in the path order.
  int position(int v) const { return pos_.at(static_cast<std::size_t>(v - 1)); }

 private:
  friend PathSystem validate_path_system(std::span<const Root> roots);
  std::vector<Root> roots_;
  std::vector<int> order_;
  std::vector<int> pos_;
};

/// Throws PathError describing the first defect found.
PathSystem validate_path_system(std::span<const Root> roots);

/// True iff the +1 vertex of r precedes its -1 vertex in sys.order().
bool positive_wrt(const Root& r, const PathSystem& sys);

/// Coefficients of r in the basis sys.roots() (given in input order).
std::vector<int> expand_in(const Root& r, const PathSystem& sys);

}  // namespace slice::rootlab
