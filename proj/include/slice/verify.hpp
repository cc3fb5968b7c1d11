#pragma once

// Matrix realisation of the adapted pair and the completed nilpotent element,
// with exact certificates.
//
// x_beta for beta = e_a - e_b is the matrix unit E_{a,b}; functionals on
// gl(n) are given by a matrix F acting as X -> trace(F X).

#include <optional>
#include <string>
#include <vector>

#include "slice/exact.hpp"
#include "slice/meander.hpp"
#include "slice/slicebuild.hpp"

namespace slice::verify {

using exact::IntMatrix;
using meander::CoprimePair;
using rootlab::Root;
using slicebuild::SliceConstruction;

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct AdaptedPair {
  std::vector<mpq_class> h;        // h[i-1] = h_i
  std::vector<Root> eta_support;   // B-bar
  Root alpha;                      // the element of B u B' in +-pi
  mpq_class h_alpha;
  int m_formula = 0;               // (p^2+q^2+pq-1)/2 - 1
};

mpq_class evaluate(const std::vector<mpq_class>& h, const Root& r);

/// Throws exact::SingularSystem if the h-system is not uniquely solvable.
AdaptedPair eta_and_h(const CoprimePair& pair);

/// Matrix of eta = sum of x_beta over B-bar.
IntMatrix eta_matrix(const CoprimePair& pair, const AdaptedPair& ap);
IntMatrix root_vector(const Root& r);

enum class RankMethod {
  Bareiss,          // fraction-free over Z, OpenMP row updates
  BareissSerial,    // same, single thread
  Certified,        // modular lower bound closed by an upper bound, else Bareiss
};

std::string to_string(RankMethod m);

struct RankResult {
  int rank = 0;
  std::string method;  // "bareiss" or "modular+bound"
};

/// Exact rank when `upper` bounds the rank from above.
RankResult certified_rank(const IntMatrix& m, int upper, RankMethod method, int jobs);

/// Basis of p: off-diagonal units and adjacent diagonal differences inside
/// each block, then every lower-left unit E_{ij}, i > p >= j.
int dim_p(const CoprimePair& pair);

/// S_{jk} = trace(F [b_j, b_k]).
IntMatrix skew_form(const CoprimePair& pair, const IntMatrix& functional);

struct Regularity {
  int dim_p = 0;
  int rank = 0;
  int stabilizer_dim = 0;
  bool regular = false;
  std::string method;
};

Regularity eta_regularity(const CoprimePair& pair, RankMethod method = RankMethod::Certified, int jobs = 1);
Regularity functional_regularity(const CoprimePair& pair, const IntMatrix& functional,
                                 RankMethod method = RankMethod::Bareiss, int jobs = 1);

/// True iff the coadjoint image of eta plus the line through x_r spans p*,
/// where r defaults to alpha.
bool complement_check(const CoprimePair& pair, const AdaptedPair& ap, const std::optional<Root>& replace = std::nullopt,
                      RankMethod method = RankMethod::Certified, int jobs = 1);

/// Roots added to y' to form y'': eps_i beta_i for i != e with eps_i beta_i != beta*_i.
std::vector<Root> added_roots(const SliceConstruction& sc);

/// y'' = sum x_{beta*_i} + sum of x over added_roots.  Throws
/// ContractViolation if an added root is not a positive non-simple root for
/// the path order of Pi*.
IntMatrix completed_element(const SliceConstruction& sc);

/// y' = sum x_{beta*_i}.
IntMatrix y_prime(const SliceConstruction& sc);

/// rank(M^k) for k = 1..n.
std::vector<int> power_ranks(const IntMatrix& m);
bool check_regular_nilpotent(const IntMatrix& m);

struct Restriction {
  bool ok = false;
  std::vector<Root> p_minus_part;
  std::vector<Root> m_part;
  std::string witness;
};

Restriction check_restriction(const SliceConstruction& sc, const AdaptedPair& ap);

/// w(i) = c_i.
std::vector<int> weyl_permutation(const rootlab::PathSystem& sys);
/// Permutation matrix of w conjugates the standard Jordan block to y'.
bool weyl_conjugates(const SliceConstruction& sc);

struct ReportOptions {
  int stabilizer_max_n = 20;
  RankMethod method = RankMethod::Certified;
  int jobs = 1;
};

struct VerificationReport {
  CoprimePair pair;
  SliceConstruction sc;
  AdaptedPair ap;
  bool m_formula_ok = false;
  std::optional<Regularity> regularity;  // empty when skipped
  std::optional<bool> complement_ok;
  std::vector<int> rank_sequence;
  bool y_regular_nilpotent = false;
  Restriction restriction;
  bool h_integral = false;
  std::vector<int> weyl;
  bool weyl_ok = false;
  std::vector<Root> added;
  std::string contract_error;  // completed_element refused the construction

  bool all_ok() const;
  /// First failing check, empty when all pass.
  std::string failure() const;
};

VerificationReport full_report(const CoprimePair& pair, const ReportOptions& opt = {});

/// Reports for every coprime pair with n <= max_n, in coprime_pairs order.
std::vector<VerificationReport> verify_sweep(int max_n, const ReportOptions& opt, int jobs = 0);
std::vector<VerificationReport> verify_sweep_serial(int max_n, const ReportOptions& opt);

}  // namespace slice::verify
