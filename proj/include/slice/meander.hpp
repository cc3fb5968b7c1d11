#pragma once

// The sigma/tau orbit of a coprime pair, its turning points, signs and
// signature.
//
// Positions ("orbit positions") are 1..n along the traversal phi; values are
// the integers 1..n that phi visits.  Turning points are stored as positions.
// beta_i = e_{phi(i)} - e_{phi(i+1)}, i = 1..n-1.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "slice/rootlab.hpp"

namespace slice::meander {

using rootlab::Root;

/// Bad user input (non-coprime, out of range, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two independent computations disagreed.  Never expected.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CoprimePair {
  int p = 0;
  int q = 0;
  int n = 0;

  /// Throws InputError unless 1 <= p <= q, p+q >= 3, gcd(p,q) = 1.
  static CoprimePair make(int p, int q);
  auto operator<=>(const CoprimePair&) const = default;
};

/// All coprime pairs with p <= q and 3 <= p+q <= max_n, ordered by (n, p).
std::vector<CoprimePair> coprime_pairs(int max_n);

int sigma(int i, int n);
int tau(int i, int p, int n);

struct Traversal {
  std::vector<int> phi;  // phi[k-1] = phi(k)
  int a = 0;             // starting point
  int b = 0;             // finishing point

  int at(int k) const { return phi.at(static_cast<std::size_t>(k - 1)); }
  int n() const { return static_cast<int>(phi.size()); }
};

/// Walks sigma, tau, sigma, ... from a.  Accepts any p, q >= 1 and throws
/// InputError when a is not tau-fixed or the walk misses a point; both
/// happen exactly when gcd(p,q) > 1.
Traversal walk(int p, int q);
Traversal traversal(const CoprimePair& pair);

/// Number of orbits of the group generated by sigma and tau.  One orbit does
/// not imply coprime: for gcd(p,q) = 2 the single orbit is a closed cycle.
int orbit_count(int p, int q);

/// True iff tau sigma (k -> k+p mod n) is a single n-cycle.
bool rotation_is_single_cycle(int p, int q);

std::vector<Root> beta_sequence(const Traversal& tr);

enum class Tag { A, B };

class TurningData {
 public:
  TurningData() = default;
  TurningData(const CoprimePair& pair, const Traversal& tr);

  /// Turning positions t_1 < ... < t_{p+1}.
  const std::vector<int>& positions() const { return t_; }
  int count() const { return static_cast<int>(t_.size()); }
  bool is_turning(int pos) const { return is_t_.at(static_cast<std::size_t>(pos)); }
  Tag tag(int pos) const;
  /// Label of the k-th turning position (k is 1-based in positions()):
  /// 1..p+1 for p odd, 0..p for p even.
  int label(int k) const;
  bool is_internal(int pos) const { return is_turning(pos) && pos != 1 && pos != n_; }
  /// Index of pos in positions(), 0-based; -1 if not a turning position.
  int index_of(int pos) const;

  /// Turning values, as closed forms.
  const std::vector<int>& a_values() const { return a_vals_; }
  const std::vector<int>& b_values() const { return b_vals_; }

  int eps(int i) const { return eps_.at(static_cast<std::size_t>(i)); }
  bool nil(int i) const { return nil_.at(static_cast<std::size_t>(i)); }
  bool boundary(int i) const { return is_turning(i) || is_turning(i + 1); }
  bool isolated(int i) const { return is_turning(i) && is_turning(i + 1); }

  /// +1 when the nil boundary value of an A position is below it (beta_t),
  /// -1 when above (beta_{t-1}).
  int a_sign(int pos) const;
  /// A positions in increasing order.
  std::vector<int> a_positions() const;

  int e() const { return e_; }
  int m() const { return m_; }
  int n() const { return n_; }

 private:
  int n_ = 0;
  std::vector<int> t_;
  std::vector<bool> is_t_;  // indexed 0..n+1
  std::vector<Tag> tag_;    // indexed by position
  std::vector<int> a_vals_, b_vals_;
  std::vector<int> eps_;    // 1..n-1
  std::vector<bool> nil_;   // 1..n-1
  int label_base_ = 1;
  int e_ = 0;
  int m_ = 0;
};

struct Signature {
  std::vector<int> sg;  // sg[j-1], j = 1..[p/2]
  int first_sign = 1;   // sign of the first A point (defined even when sg is empty)
  std::vector<int> changes;  // run starts j_1 = 1 < j_2 < ... (1-based)

  /// "+--+" style, empty for p = 1.
  std::string str() const;
};

/// Signs of every A position, in t-order; length [(p+1)/2].
std::vector<int> a_signs(const TurningData& td);
Signature signature(const TurningData& td, int p);

/// Bundle of everything computed from a pair.
struct Meander {
  CoprimePair pair;
  Traversal tr;
  std::vector<Root> beta;  // beta[i-1] = beta_i
  TurningData td;
  Signature sig;

  const Root& beta_at(int i) const { return beta.at(static_cast<std::size_t>(i - 1)); }
  /// iota_{s,t} = sum of beta_i over s <= i < t = e_{phi(s)} - e_{phi(t)}.
  Root iota(int s, int t) const;
};

Meander build_meander(const CoprimePair& pair);

struct AtlasRow {
  CoprimePair pair;
  Signature sig;
};

struct Atlas {
  std::vector<AtlasRow> rows;
  /// signature string -> pairs, for every signature in range.
  std::map<std::string, std::vector<CoprimePair>> image;

  /// Entries of image with at least two preimages.
  std::map<std::string, std::vector<CoprimePair>> fibers() const;
};

/// OpenMP over pairs; rows come back in coprime_pairs() order.
Atlas signature_atlas(int max_n, int jobs = 0);
Atlas signature_atlas_serial(int max_n);

}  // namespace slice::meander
