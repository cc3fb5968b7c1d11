#pragma once

// Serialisation of meanders, constructions, verification reports and the
// signature atlas.  All output is deterministic for fixed input.

#include <json.hpp>
#include <string>
#include <vector>

#include "slice/meander.hpp"
#include "slice/slicebuild.hpp"
#include "slice/verify.hpp"

namespace slice::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

Json root_json(const rootlab::Root& r);
Json meander_json(const meander::Meander& mr);
Json construction_json(const slicebuild::SliceConstruction& sc);
Json verification_row_json(const verify::VerificationReport& rep);

Json meander_doc(const meander::Meander& mr);
Json construct_doc(const slicebuild::SliceConstruction& sc);
Json verify_doc(const std::vector<verify::VerificationReport>& reps);

struct SigmapRow {
  meander::CoprimePair pair;
  std::string signature;
  bool used_fix = false;
  std::string mode;
  int m = 0;  // h(alpha)
};

/// Runs the construction for every atlas row (OpenMP over rows).
std::vector<SigmapRow> sigmap_rows(const meander::Atlas& atlas, int jobs = 0);
Json sigmap_doc(const meander::Atlas& atlas, const std::vector<SigmapRow>& rows);

/// Header p,q,n,signature,used_fix,mode,m; LF line endings.
std::string csv_header();
std::string csv_row(const SigmapRow& r);
SigmapRow row_of(const verify::VerificationReport& rep);

std::string verify_csv(const std::vector<verify::VerificationReport>& reps);
/// Rows, a blank line, then "signature,count,pairs" over the fibers.
std::string sigmap_csv(const meander::Atlas& atlas, const std::vector<SigmapRow>& rows);

std::string meander_text(const meander::Meander& mr);
std::string construct_text(const slicebuild::SliceConstruction& sc);
std::string verify_text(const std::vector<verify::VerificationReport>& reps);
std::string sigmap_text(const meander::Atlas& atlas, const std::vector<SigmapRow>& rows);

std::string pair_str(const meander::CoprimePair& pr);

}  // namespace slice::report
