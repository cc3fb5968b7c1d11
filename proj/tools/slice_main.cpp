// slice <command> [p q | --max-n N] [--format json|csv|text] [--diagram ascii|svg]
//       [--out PATH] [--jobs K]
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "slice/diagram.hpp"
#include "slice/meander.hpp"
#include "slice/report.hpp"
#include "slice/slicebuild.hpp"
#include "slice/verify.hpp"

namespace {

using namespace slice;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kInput = 2;

struct RunConfig {
  std::string command;
  std::vector<int> pq;
  std::optional<int> max_n;
  std::string format;
  std::string diagram;
  std::string out;
  int jobs = 0;
  int stabilizer_max_n = 20;
  std::string rank_method = "certified";
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

meander::CoprimePair single_pair(const RunConfig& cfg) {
  if (cfg.pq.size() != 2) throw UsageError(cfg.command + " needs a pair p q");
  return meander::CoprimePair::make(cfg.pq[0], cfg.pq[1]);
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  throw UsageError("format '" + cfg.format + "' is not available for " + cfg.command);
}

std::string dump(const report::Json& j) { return j.dump(2) + "\n"; }

std::string render_diagram(const slicebuild::SliceConstruction& sc, const std::string& kind) {
  const auto lay = diagram::layout(sc);
  if (kind == "svg") return diagram::svg(lay);
  if (kind == "ascii") return diagram::ascii(lay);
  throw UsageError("diagram format must be ascii or svg");
}

verify::RankMethod rank_method(const std::string& s) {
  if (s == "certified") return verify::RankMethod::Certified;
  if (s == "bareiss") return verify::RankMethod::Bareiss;
  if (s == "bareiss-serial") return verify::RankMethod::BareissSerial;
  throw UsageError("unknown rank method '" + s + "'");
}

int run_command(const RunConfig& cfg, std::string& text) {
  if (cfg.command == "meander" || cfg.command == "construct") {
    require_format(cfg, {"json", "text", "csv"});
    const auto pr = single_pair(cfg);
    const auto sc = slicebuild::construct(pr);
    if (cfg.format == "csv") {
      const auto ap = verify::eta_and_h(pr);
      text = report::csv_header() +
             report::csv_row({pr, sc.mr.sig.str(), sc.used_exceptional_fix, to_string(sc.mode),
                              static_cast<int>(ap.h_alpha.get_num().get_si())});
      return kOk;
    }
    if (cfg.format == "json") {
      auto doc = cfg.command == "meander" ? report::meander_doc(sc.mr) : report::construct_doc(sc);
      if (!cfg.diagram.empty()) doc["diagram"] = render_diagram(sc, cfg.diagram);
      text = dump(doc);
    } else {
      text = cfg.command == "meander" ? report::meander_text(sc.mr) : report::construct_text(sc);
      if (!cfg.diagram.empty()) text += render_diagram(sc, cfg.diagram);
    }
    return cfg.command == "construct" && !sc.cond.all() ? kFail : kOk;
  }

  if (cfg.command == "diagram") {
    const auto sc = slicebuild::construct(single_pair(cfg));
    std::string kind = cfg.diagram;
    if (kind.empty()) kind = cfg.format == "svg" ? "svg" : "ascii";
    if (!cfg.format.empty() && cfg.format != "text" && cfg.format != "ascii" && cfg.format != "svg")
      throw UsageError("diagram takes --format ascii|svg");
    text = render_diagram(sc, kind);
    return kOk;
  }

  if (cfg.command == "verify") {
    require_format(cfg, {"json", "text", "csv"});
    verify::ReportOptions opt;
    opt.stabilizer_max_n = cfg.stabilizer_max_n;
    opt.method = rank_method(cfg.rank_method);
    opt.jobs = cfg.jobs;
    std::vector<verify::VerificationReport> reps;
    if (cfg.max_n) {
      if (!cfg.pq.empty()) throw UsageError("give either p q or --max-n");
      if (*cfg.max_n < 3) throw UsageError("--max-n must be at least 3");
      reps = verify::verify_sweep(*cfg.max_n, opt, cfg.jobs);
    } else {
      reps.push_back(verify::full_report(single_pair(cfg), opt));
    }
    if (cfg.format == "json")
      text = dump(report::verify_doc(reps));
    else if (cfg.format == "csv")
      text = report::verify_csv(reps);
    else
      text = report::verify_text(reps);
    bool ok = true;
    for (const auto& r : reps) {
      if (r.all_ok()) continue;
      ok = false;
      std::cerr << "verification failed for " << report::pair_str(r.pair) << ": " << r.failure() << "\n";
    }
    return ok ? kOk : kFail;
  }

  if (cfg.command == "sigmap") {
    require_format(cfg, {"json", "text", "csv"});
    if (!cfg.max_n) throw UsageError("sigmap needs --max-n");
    if (!cfg.pq.empty()) throw UsageError("sigmap takes --max-n only");
    const auto atlas = meander::signature_atlas(*cfg.max_n, cfg.jobs);
    const auto rows = report::sigmap_rows(atlas, cfg.jobs);
    if (cfg.format == "json")
      text = dump(report::sigmap_doc(atlas, rows));
    else if (cfg.format == "csv")
      text = report::sigmap_csv(atlas, rows);
    else
      text = report::sigmap_text(atlas, rows);
    return kOk;
  }
  throw UsageError("unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meander slices for truncated biparabolics of index one"};
  app.require_subcommand(1);
  RunConfig cfg;

  struct Spec {
    const char* name;
    const char* help;
    bool pair;
    bool max_n;
  };
  const Spec specs[] = {
      {"meander", "orbit, turning points, signs and signature", true, false},
      {"construct", "modified simple root system and change ledger", true, false},
      {"verify", "certify the construction, the adapted pair and the completion", true, true},
      {"sigmap", "signature atlas with image and fibers", false, true},
      {"diagram", "meander column diagram", true, false},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    if (s.pair) sub->add_option("pair", cfg.pq, "p q")->expected(2);
    if (s.max_n) sub->add_option("--max-n", cfg.max_n, "all coprime pairs with p+q <= N");
    sub->add_option("--format", cfg.format, "json|csv|text (diagram: ascii|svg)");
    sub->add_option("--diagram", cfg.diagram, "ascii|svg");
    sub->add_option("--out", cfg.out, "write to PATH instead of stdout");
    sub->add_option("--jobs", cfg.jobs, "worker threads (SLICE_JOBS overrides)")->check(CLI::NonNegativeNumber);
    if (std::string(s.name) == "verify") {
      sub->add_option("--stabilizer-max-n", cfg.stabilizer_max_n, "largest n for the stabilizer rank")
          ->capture_default_str();
      sub->add_option("--rank-method", cfg.rank_method, "certified|bareiss|bareiss-serial")->capture_default_str();
    }
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  if (const char* env = std::getenv("SLICE_JOBS")) {
    try {
      cfg.jobs = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "SLICE_JOBS must be an integer\n";
      return kInput;
    }
    if (cfg.jobs < 0) {
      std::cerr << "SLICE_JOBS must be non-negative\n";
      return kInput;
    }
  }
  if (cfg.format.empty()) cfg.format = cfg.command == "diagram" ? "" : "text";

  std::string text;
  int rc = kOk;
  try {
    rc = run_command(cfg, text);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const meander::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFail;
  }

  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << cfg.out << "\n";
      return kInput;
    }
    f << text;
  }
  return rc;
}
