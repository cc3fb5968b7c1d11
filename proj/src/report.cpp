#include "slice/report.hpp"

#include <omp.h>

#include <sstream>

namespace slice::report {

using meander::Tag;

namespace {

std::size_t z(int i) { return static_cast<std::size_t>(i); }

Json ints(const std::vector<int>& v) {
  Json a = Json::array();
  for (int x : v) a.push_back(x);
  return a;
}

Json roots(const std::vector<rootlab::Root>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(root_json(r));
  return a;
}

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

Json signature_json(const meander::Signature& s) {
  Json j;
  j["sg"] = s.str();
  j["first_sign"] = s.first_sign;
  j["changes"] = ints(s.changes);
  return j;
}

Json entry_json(int i, const slicebuild::LedgerEntry& en) {
  Json j;
  j["i"] = i;
  j["kind"] = to_string(en.kind);
  j["rule"] = to_string(en.rule);
  j["added"] = Json::array({en.lo, en.hi});
  j["beta_prime"] = root_json(en.beta_prime);
  return j;
}

Json ledger_json(const meander::Meander& mr, const slicebuild::ChangeLedger& lg) {
  Json j;
  Json ch = Json::array();
  for (int i = 1; i <= lg.size(); ++i)
    if (lg.at(i).changed()) ch.push_back(entry_json(i, lg.at(i)));
  j["changes"] = ch;
  Json chi = Json::array();
  for (const auto& [t, b] : lg.chi) chi.push_back(Json::array({t, b}));
  j["chi"] = chi;
  j["chi_injective"] = lg.chi_injective;
  Json und = Json::array();
  for (int d : lg.undecided) {
    Json u;
    u["position"] = d;
    u["value"] = mr.tr.at(d);
    und.push_back(u);
  }
  j["undecided"] = und;
  j["undecided_disposition"] = lg.undecided_disposition;
  return j;
}

Json conditions_json(const slicebuild::SliceConstruction& sc) {
  Json j;
  j["a"] = sc.cond.a;
  j["b"] = sc.cond.b;
  j["c"] = sc.cond.c;
  j["d"] = sc.cond.d;
  j["d_all_before_fix"] = sc.d_all_before_fix;
  return j;
}

}  // namespace

std::string pair_str(const meander::CoprimePair& pr) {
  return "(" + std::to_string(pr.p) + "," + std::to_string(pr.q) + ")";
}

Json root_json(const rootlab::Root& r) { return r.str(); }

Json meander_json(const meander::Meander& mr) {
  const auto& td = mr.td;
  Json j;
  j["p"] = mr.pair.p;
  j["q"] = mr.pair.q;
  j["n"] = mr.pair.n;
  j["a"] = mr.tr.a;
  j["b"] = mr.tr.b;
  j["phi"] = ints(mr.tr.phi);
  j["beta"] = roots(mr.beta);
  Json tps = Json::array();
  for (int k = 1; k <= td.count(); ++k) {
    const int pos = td.positions()[z(k - 1)];
    Json t;
    t["position"] = pos;
    t["value"] = mr.tr.at(pos);
    t["tag"] = td.tag(pos) == Tag::A ? "A" : "B";
    t["label"] = td.label(k);
    tps.push_back(t);
  }
  j["turning"] = tps;
  std::vector<int> eps, nil, boundary, isolated;
  for (int i = 1; i < mr.pair.n; ++i) {
    eps.push_back(td.eps(i));
    if (td.nil(i)) nil.push_back(i);
    if (td.boundary(i)) boundary.push_back(i);
    if (td.isolated(i)) isolated.push_back(i);
  }
  j["eps"] = ints(eps);
  j["nil"] = ints(nil);
  j["boundary"] = ints(boundary);
  j["isolated"] = ints(isolated);
  j["e"] = td.e();
  j["m_even"] = td.m();
  j["signature"] = signature_json(mr.sig);
  return j;
}

Json construction_json(const slicebuild::SliceConstruction& sc) {
  Json j;
  j["p"] = sc.mr.pair.p;
  j["q"] = sc.mr.pair.q;
  j["n"] = sc.mr.pair.n;
  j["signature"] = sc.mr.sig.str();
  j["dispatch"] = to_string(sc.dispatch);
  j["construction_mode"] = to_string(sc.mode);
  if (!sc.fallback_reason.empty()) j["fallback_reason"] = sc.fallback_reason;
  j["ledger"] = ledger_json(sc.mr, sc.ledger);
  j["used_exceptional_fix"] = sc.used_exceptional_fix;
  if (sc.fix) {
    Json f;
    f["case"] = sc.fix->end_point ? "end-point" : "internal";
    f["turning_position"] = sc.fix->tp;
    f["restored"] = sc.fix->f;
    f["i_e"] = sc.fix->ie;
    f["iota"] = Json::array({sc.fix->lo, sc.fix->hi});
    Json ch = Json::array();
    for (int i = 1; i <= sc.final_ledger.size(); ++i)
      if (sc.final_ledger.at(i).changed()) ch.push_back(entry_json(i, sc.final_ledger.at(i)));
    f["changes"] = ch;
    j["fix"] = f;
  }
  j["pi_star"] = roots(sc.pi_star);
  j["path_order"] = ints(sc.sys.order());
  j["weyl"] = ints(verify::weyl_permutation(sc.sys));
  j["triangularity_order"] = ints(slicebuild::triangularity_order(sc.mr, sc.ledger));
  j["conditions"] = conditions_json(sc);
  return j;
}

Json verification_row_json(const verify::VerificationReport& rep) {
  Json j;
  j["p"] = rep.pair.p;
  j["q"] = rep.pair.q;
  j["n"] = rep.pair.n;
  j["signature"] = rep.sc.mr.sig.str();
  j["construction_mode"] = to_string(rep.sc.mode);
  j["used_exceptional_fix"] = rep.sc.used_exceptional_fix;
  j["conditions"] = conditions_json(rep.sc);
  j["path_order"] = ints(rep.sc.sys.order());
  j["weyl"] = ints(rep.weyl);
  j["weyl_conjugates"] = rep.weyl_ok;
  Json h = Json::array();
  for (const auto& x : rep.ap.h) h.push_back(x.get_str());
  j["h"] = h;
  j["alpha"] = root_json(rep.ap.alpha);
  j["eta_support"] = roots(rep.ap.eta_support);
  j["m"] = rep.ap.h_alpha.get_str();
  j["m_formula"] = rep.ap.m_formula;
  j["m_ok"] = rep.m_formula_ok;
  if (rep.regularity) {
    Json r;
    r["dim_p"] = rep.regularity->dim_p;
    r["rank"] = rep.regularity->rank;
    r["stabilizer_dim"] = rep.regularity->stabilizer_dim;
    r["method"] = rep.regularity->method;
    r["regular"] = rep.regularity->regular;
    j["regularity"] = r;
  } else {
    j["regularity"] = "skipped";
  }
  if (rep.complement_ok)
    j["complement_ok"] = *rep.complement_ok;
  else
    j["complement_ok"] = "skipped";
  j["added_roots"] = roots(rep.added);
  j["rank_sequence"] = ints(rep.rank_sequence);
  j["y_regular_nilpotent"] = rep.y_regular_nilpotent;
  Json r;
  r["ok"] = rep.restriction.ok;
  r["p_minus_part"] = roots(rep.restriction.p_minus_part);
  r["m_part"] = roots(rep.restriction.m_part);
  if (!rep.restriction.witness.empty()) r["witness"] = rep.restriction.witness;
  j["restriction"] = r;
  j["h_integral"] = rep.h_integral;
  j["pass"] = rep.all_ok();
  if (!rep.all_ok()) j["failure"] = rep.failure();
  return j;
}

Json meander_doc(const meander::Meander& mr) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "meander";
  j["meander"] = meander_json(mr);
  return j;
}

Json construct_doc(const slicebuild::SliceConstruction& sc) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "construct";
  j["construction"] = construction_json(sc);
  return j;
}

Json verify_doc(const std::vector<verify::VerificationReport>& reps) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify";
  Json rows = Json::array();
  int passed = 0, fallback = 0, fixes = 0, stab = 0;
  for (const auto& r : reps) {
    rows.push_back(verification_row_json(r));
    passed += r.all_ok();
    fallback += r.sc.mode == slicebuild::Mode::SearchFallback;
    fixes += r.sc.used_exceptional_fix;
    stab += r.regularity.has_value();
  }
  j["rows"] = rows;
  Json s;
  s["pairs"] = reps.size();
  s["passed"] = passed;
  s["failed"] = static_cast<int>(reps.size()) - passed;
  s["fallback_count"] = fallback;
  s["fix_count"] = fixes;
  s["stabilizer_checked"] = stab;
  j["summary"] = s;
  return j;
}

std::vector<SigmapRow> sigmap_rows(const meander::Atlas& atlas, int jobs) {
  std::vector<SigmapRow> rows(atlas.rows.size());
  std::vector<std::exception_ptr> errs(atlas.rows.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t k = 0; k < atlas.rows.size(); ++k) {
    try {
      const auto& ar = atlas.rows[k];
      const auto sc = slicebuild::construct(ar.pair);
      const auto ap = verify::eta_and_h(ar.pair);
      rows[k] = SigmapRow{ar.pair, ar.sig.str(), sc.used_exceptional_fix, to_string(sc.mode),
                          static_cast<int>(ap.h_alpha.get_num().get_si())};
    } catch (...) {
      errs[k] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);
  return rows;
}

Json sigmap_doc(const meander::Atlas& atlas, const std::vector<SigmapRow>& rows) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "sigmap";
  Json rs = Json::array();
  for (const auto& r : rows) {
    Json x;
    x["p"] = r.pair.p;
    x["q"] = r.pair.q;
    x["n"] = r.pair.n;
    x["signature"] = r.signature;
    x["used_fix"] = r.used_fix;
    x["mode"] = r.mode;
    x["m"] = r.m;
    rs.push_back(x);
  }
  j["rows"] = rs;
  auto group = [](const std::map<std::string, std::vector<meander::CoprimePair>>& m) {
    Json a = Json::array();
    for (const auto& [sig, prs] : m) {
      Json g;
      g["signature"] = sig;
      g["count"] = prs.size();
      Json ps = Json::array();
      for (const auto& pr : prs) ps.push_back(Json::array({pr.p, pr.q}));
      g["pairs"] = ps;
      a.push_back(g);
    }
    return a;
  };
  j["image"] = group(atlas.image);
  j["fibers"] = group(atlas.fibers());
  return j;
}

std::string csv_header() { return "p,q,n,signature,used_fix,mode,m\n"; }

std::string csv_row(const SigmapRow& r) {
  std::ostringstream os;
  os << r.pair.p << ',' << r.pair.q << ',' << r.pair.n << ',' << r.signature << ',' << (r.used_fix ? "true" : "false")
     << ',' << r.mode << ',' << r.m << '\n';
  return os.str();
}

SigmapRow row_of(const verify::VerificationReport& rep) {
  return SigmapRow{rep.pair, rep.sc.mr.sig.str(), rep.sc.used_exceptional_fix, to_string(rep.sc.mode),
                   static_cast<int>(rep.ap.h_alpha.get_num().get_si())};
}

std::string verify_csv(const std::vector<verify::VerificationReport>& reps) {
  std::string s = csv_header();
  for (const auto& r : reps) s += csv_row(row_of(r));
  return s;
}

std::string sigmap_csv(const meander::Atlas& atlas, const std::vector<SigmapRow>& rows) {
  std::string s = csv_header();
  for (const auto& r : rows) s += csv_row(r);
  s += "\nsignature,count,pairs\n";
  for (const auto& [sig, prs] : atlas.fibers()) {
    s += sig + ',' + std::to_string(prs.size()) + ',';
    for (std::size_t i = 0; i < prs.size(); ++i)
      s += (i ? ";" : "") + std::to_string(prs[i].p) + ":" + std::to_string(prs[i].q);
    s += '\n';
  }
  return s;
}

std::string meander_text(const meander::Meander& mr) {
  const auto& td = mr.td;
  std::ostringstream os;
  os << "pair " << pair_str(mr.pair) << "  n=" << mr.pair.n << "\n";
  os << "phi = (" << join(mr.tr.phi) << ")  a=" << mr.tr.a << " b=" << mr.tr.b << "\n";
  os << "turning points:\n";
  for (int k = 1; k <= td.count(); ++k) {
    const int pos = td.positions()[z(k - 1)];
    os << "  t" << td.label(k) << "  position " << pos << "  value " << mr.tr.at(pos) << "  "
       << (td.tag(pos) == Tag::A ? "A" : "B") << "\n";
  }
  os << "  i  beta_i      eps  flags\n";
  for (int i = 1; i < mr.pair.n; ++i) {
    std::string flags;
    if (td.nil(i)) flags += " nil";
    if (td.boundary(i)) flags += " boundary";
    if (td.isolated(i)) flags += " isolated";
    if (i == td.e()) flags += " exceptional";
    std::string b = mr.beta_at(i).str();
    b.resize(std::max<std::size_t>(b.size(), 11), ' ');
    os << (i < 10 ? "  " : " ") << i << "  " << b << " " << (td.eps(i) > 0 ? "+" : "-") << "  " << flags << "\n";
  }
  os << "e=" << td.e() << "  m_even=" << td.m() << "\n";
  os << "signature \"" << mr.sig.str() << "\"  first sign " << (mr.sig.first_sign > 0 ? "+" : "-") << "\n";
  return os.str();
}

std::string construct_text(const slicebuild::SliceConstruction& sc) {
  std::ostringstream os;
  os << meander_text(sc.mr);
  os << "dispatch " << to_string(sc.dispatch) << ", " << to_string(sc.mode) << "\n";
  if (!sc.fallback_reason.empty()) os << "fallback reason: " << sc.fallback_reason << "\n";
  os << "changes:\n";
  for (int i = 1; i <= sc.ledger.size(); ++i) {
    const auto& en = sc.ledger.at(i);
    if (!en.changed()) continue;
    os << "  beta'_" << i << " = beta_" << i << " + iota[" << en.lo << "," << en.hi << ")  " << to_string(en.kind)
       << "/" << to_string(en.rule) << "  -> " << en.beta_prime.str() << "\n";
  }
  for (int d : sc.ledger.undecided)
    os << "undecided element: position " << d << " (value " << sc.mr.tr.at(d) << "), "
       << sc.ledger.undecided_disposition << "\n";
  if (sc.fix) {
    os << "exceptional fix (" << (sc.fix->end_point ? "end-point" : "internal") << "):\n";
    for (int i = 1; i <= sc.final_ledger.size(); ++i) {
      const auto& en = sc.final_ledger.at(i);
      if (en.kind == slicebuild::ChangeKind::ExceptionalFix)
        os << "  beta''_" << i << " = " << en.beta_prime.str() << "\n";
    }
    if (sc.fix->f) os << "  beta''_" << sc.fix->f << " restored\n";
  }
  os << "Pi*:";
  for (const auto& r : sc.pi_star) os << " " << r.str();
  os << "\npath order c = (" << join(sc.sys.order()) << ")\n";
  os << "conditions a=" << sc.cond.a << " b=" << sc.cond.b << " c=" << sc.cond.c << " d=" << sc.cond.d << "\n";
  return os.str();
}

std::string verify_text(const std::vector<verify::VerificationReport>& reps) {
  std::ostringstream os;
  int passed = 0;
  for (const auto& r : reps) {
    const bool ok = r.all_ok();
    passed += ok;
    os << pair_str(r.pair) << "  sg=\"" << r.sc.mr.sig.str() << "\"  m=" << r.ap.h_alpha.get_str()
       << "  c=(" << join(r.sc.sys.order()) << ")";
    if (r.regularity)
      os << "  stab=" << r.regularity->stabilizer_dim;
    else
      os << "  stab=skipped";
    os << "  " << (ok ? "PASS" : "FAIL: " + r.failure()) << "\n";
  }
  os << passed << "/" << reps.size() << " pairs pass\n";
  return os.str();
}

std::string sigmap_text(const meander::Atlas& atlas, const std::vector<SigmapRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) os << pair_str(r.pair) << "  \"" << r.signature << "\"\n";
  os << "fibers:\n";
  for (const auto& [sig, prs] : atlas.fibers()) {
    os << "  \"" << sig << "\":";
    for (const auto& pr : prs) os << " " << pair_str(pr);
    os << "\n";
  }
  os << atlas.image.size() << " signatures over " << rows.size() << " pairs\n";
  return os.str();
}

}  // namespace slice::report
