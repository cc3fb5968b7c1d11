#pragma once

// Modified simple root systems Pi* / Pi** built from a meander by changing
// boundary values by interval values.
//
// A change at index i adds iota_{lo,hi} (lo < hi turning positions) to
// beta_i.  The turning point the change belongs to (its anchor) is lo when
// i = lo - 1 and hi when i = hi; the added interval always lies on the far
// side of the anchor from beta_i.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slice/meander.hpp"
#include "slice/rootlab.hpp"

namespace slice::slicebuild {

using meander::Meander;
using rootlab::PathSystem;
using rootlab::Root;

/// The rule-based construction hit a configuration its rules do not cover.
class RuleFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neither the rules nor the admissible search produced a valid system.
class ConstructionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TriangularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntervalValue {
  int s = 0;
  int t = 0;
  Root value;
  bool simple = false;
  int sign = 0;
};

/// Throws std::invalid_argument unless s < t are turning positions.
IntervalValue interval_value(const Meander& mr, int s, int t);

enum class ChangeKind { Unchanged, Simple, Compound, ExceptionalFix };

enum class Rule {
  None,
  Simple,              // one simple interval across the anchor
  Undecided,           // change at the undecided B point
  IsolatedShift,       // isolated iota_1: move the change to the other neighbour
  Bridge,              // beta'_{t-1} = beta_{t-1} + iota_{t,s}
  Return,              // beta'_s = beta_s + iota_{t,s}
  ReturnPastIsolated,  // beta'_s = beta_s + iota_{t',s}, skipping the isolated value
  TailBridge,          // negative-first, even number of sign runs
  FixInternal,
  FixEndPoint,
  Search,              // chosen by the admissible search
};

std::string to_string(ChangeKind k);
std::string to_string(Rule r);

struct LedgerEntry {
  ChangeKind kind = ChangeKind::Unchanged;
  Rule rule = Rule::None;
  int lo = 0;  // added iota_{lo,hi}; for the fixed e this is iota_1
  int hi = 0;
  Root beta_prime;  // beta'_i (beta''_i after a fix)

  bool changed() const { return kind != ChangeKind::Unchanged; }
};

struct ChangeLedger {
  std::vector<LedgerEntry> entries;  // entries[i-1]
  /// internal A position -> B position reached by its change
  std::map<int, int> chi;
  bool chi_injective = false;
  std::vector<int> undecided;  // B positions outside the image of chi (expected: one)
  /// "neighbour-unchanged" or "changed:<i>"
  std::string undecided_disposition;

  const LedgerEntry& at(int i) const { return entries.at(static_cast<std::size_t>(i - 1)); }
  LedgerEntry& at(int i) { return entries.at(static_cast<std::size_t>(i - 1)); }
  int size() const { return static_cast<int>(entries.size()); }
};

/// Bare change set: i -> [lo, hi).
struct Change {
  int i = 0;
  int lo = 0;
  int hi = 0;
  auto operator<=>(const Change&) const = default;
};

std::vector<Change> changes_of(const ChangeLedger& ledger);

/// Fills kinds, beta', chi and the undecided element for a bare change set.
ChangeLedger make_ledger(const Meander& mr, const std::vector<Change>& changes, Rule rule = Rule::Search);

/// How the rule engine was driven.
enum class Dispatch { Forward, Reversed, Split };
std::string to_string(Dispatch d);

struct BuildResult {
  ChangeLedger ledger;
  std::vector<Root> pi_star;  // beta*_i = eps_i beta'_i
  Dispatch dispatch = Dispatch::Forward;
};

/// Signature-driven rules.  Throws RuleFailure when a rule would change a nil
/// or already-changed value.
BuildResult build_pi_star(const Meander& mr);

struct FixRecord {
  bool end_point = false;
  int tp = 0;  // turning position of beta_e
  int f = 0;   // restored index (internal case), else 0
  int ie = 0;  // i(e), or 0 when undefined
  int lo = 0;  // iota_1 (internal) / iota (end point)
  int hi = 0;
};

struct FixResult {
  ChangeLedger ledger;
  std::vector<Root> pi_star;
  FixRecord record;
};

/// Requires beta'_e = beta_e (std::logic_error otherwise).  Throws RuleFailure
/// when the configuration falls outside the fix rules.
FixResult exceptional_fix(const Meander& mr, const ChangeLedger& ledger);

std::vector<Root> star_roots(const Meander& mr, const ChangeLedger& ledger);

struct Conditions {
  bool a = false;
  bool b = false;
  bool c = false;
  bool d = false;
  bool d_all = false;  // d including i = e
  std::optional<PathSystem> sys;
  std::string witness;  // first failure, empty when all hold

  bool all() const { return a && b && c && d; }
};

Conditions check_conditions(const Meander& mr, const ChangeLedger& ledger);

/// Rule 1-3 violations of a single-primed ledger (empty when admissible).
std::vector<std::string> ledger_violations(const Meander& mr, const ChangeLedger& ledger);

enum class Mode { RuleBased, SearchFallback };
std::string to_string(Mode m);

struct SliceConstruction {
  Meander mr;
  ChangeLedger ledger;        // single-primed
  ChangeLedger final_ledger;  // equals ledger unless the fix was used
  std::optional<FixRecord> fix;
  std::vector<Root> pi_star;  // final
  PathSystem sys;
  Conditions cond;
  bool used_exceptional_fix = false;
  bool d_all_before_fix = false;
  Mode mode = Mode::RuleBased;
  Dispatch dispatch = Dispatch::Forward;
  std::string fallback_reason;
};

SliceConstruction construct(const meander::CoprimePair& pair);

/// Runs the exceptional fix when needed and checks a)-d).  Returns nullopt
/// when the change set does not lead to a valid system.
struct Completion {
  ChangeLedger final_ledger;
  std::optional<FixRecord> fix;
  Conditions cond;
  bool d_all_before_fix = false;
};
std::optional<Completion> complete(const Meander& mr, const ChangeLedger& ledger);

/// Candidate changes for every internal turning position, in t-order; each
/// list sorted by (index, interval length).
std::vector<std::vector<Change>> change_options(const Meander& mr);
std::uint64_t search_space_size(const Meander& mr);

/// All admissible change sets that complete to a valid system, in search
/// order.  Throws ConstructionFailed beyond `limit` candidates.
std::vector<std::vector<Change>> enumerate_admissible(const Meander& mr, std::uint64_t limit = 50'000'000);

/// First admissible change set in search order.
std::optional<std::vector<Change>> first_admissible(const Meander& mr, std::uint64_t limit = 50'000'000);

/// Total order on 1..n-1 (unchanged < simple < compound, then index) in
/// which the matrix taking {eps_i beta_i} to {beta*_i} is unitriangular.
/// Throws TriangularityError on a cycle or a bad diagonal.
std::vector<int> triangularity_order(const Meander& mr, const ChangeLedger& ledger);

}  // namespace slice::slicebuild
