#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "slice/diagram.hpp"
#include "slice/report.hpp"

using namespace slice;
using meander::CoprimePair;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

// Tag balance for the subset of XML the svg writer emits.
bool balanced_xml(const std::string& s) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while ((i = s.find('<', i)) != std::string::npos) {
    const auto j = s.find('>', i);
    if (j == std::string::npos) return false;
    const std::string tag = s.substr(i + 1, j - i - 1);
    i = j + 1;
    if (tag.empty() || tag[0] == '?') continue;
    if (tag.back() == '/') continue;
    const auto name_end = tag.find_first_of(" \t\n");
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else {
      stack.push_back(tag.substr(0, name_end));
    }
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("meander json") {
  const auto mr = meander::build_meander(CoprimePair::make(2, 3));
  const auto doc = report::meander_doc(mr);
  CHECK(doc["schema_version"] == "1.0");
  CHECK(doc["command"] == "meander");
  const auto& m = doc["meander"];
  CHECK(m["phi"] == std::vector<int>{4, 2, 1, 5, 3});
  CHECK(m["signature"]["sg"] == "-");
  const auto again = report::Json::parse(doc.dump());
  CHECK(again == doc);
}

TEST_CASE("construct json") {
  const auto sc = slicebuild::construct(CoprimePair::make(1, 2));
  const auto doc = report::construct_doc(sc);
  const auto& c = doc["construction"];
  CHECK(c["used_exceptional_fix"] == true);
  CHECK(c["path_order"] == std::vector<int>{2, 1, 3});
  CHECK(c["construction_mode"] == "rule-based");
  CHECK(c["conditions"]["c"] == true);
}

TEST_CASE("verify json summary") {
  const auto reps = verify::verify_sweep_serial(8, {});
  const auto doc = report::verify_doc(reps);
  CHECK(doc["summary"]["pairs"] == reps.size());
  CHECK(doc["summary"]["failed"] == 0);
  CHECK(doc["summary"]["fallback_count"] == 0);
  const auto& row = doc["rows"][3];
  CHECK(row["p"] == 2);
  CHECK(row["q"] == 3);
  CHECK(row["m"] == "8");
  CHECK(row["pass"] == true);
  CHECK(row["rank_sequence"] == std::vector<int>{4, 3, 2, 1, 0});
}

TEST_CASE("csv") {
  const auto atlas = meander::signature_atlas(12);
  const auto rows = report::sigmap_rows(atlas, 1);
  const auto csv = report::sigmap_csv(atlas, rows);
  const auto ls = lines(csv);
  REQUIRE(ls.size() > rows.size() + 2);
  CHECK(ls[0] == "p,q,n,signature,used_fix,mode,m");
  CHECK(ls[1] == "1,2,3,,true,rule-based,2");
  CHECK(std::find(ls.begin(), ls.end(), "2,3,5,-,false,rule-based,8") != ls.end());
  CHECK(ls[rows.size() + 1].empty());
  CHECK(ls[rows.size() + 2] == "signature,count,pairs");
  for (std::size_t k = 1; k <= rows.size(); ++k) CHECK(std::count(ls[k].begin(), ls[k].end(), ',') == 6);
  const auto fib = atlas.fibers();
  CHECK(ls.size() == rows.size() + 3 + fib.size());
  CHECK(csv.find('\r') == std::string::npos);
  // the empty signature collects every p = 1 pair
  CHECK(ls[rows.size() + 3].rfind(",10,1:2;1:3;", 0) == 0);
}

TEST_CASE("sigmap json groups") {
  const auto atlas = meander::signature_atlas(10);
  const auto doc = report::sigmap_doc(atlas, report::sigmap_rows(atlas, 2));
  std::size_t total = 0;
  for (const auto& g : doc["image"]) total += g["count"].get<std::size_t>();
  CHECK(total == doc["rows"].size());
  for (const auto& g : doc["fibers"]) CHECK(g["count"].get<int>() >= 2);
}

TEST_CASE("text renderers mention the essentials") {
  const auto sc = slicebuild::construct(CoprimePair::make(2, 3));
  const auto mt = report::meander_text(sc.mr);
  CHECK(mt.find("phi = (4,2,1,5,3)") != std::string::npos);
  CHECK(mt.find("signature \"-\"") != std::string::npos);
  const auto ct = report::construct_text(sc);
  CHECK(ct.find("path order c = (2,4,1,5,3)") != std::string::npos);
  CHECK(ct.find("conditions a=1 b=1 c=1 d=1") != std::string::npos);
}

TEST_CASE("ascii diagram for (2,3)") {
  const auto sc = slicebuild::construct(CoprimePair::make(2, 3));
  const auto lay = diagram::layout(sc);
  CHECK(lay.dots.size() == 5);
  CHECK(lay.dots[1].tag == 'A');
  CHECK(lay.dots[0].tag == 'B');
  CHECK(lay.dots[2].tag == ' ');
  CHECK(lay.links[0].nil);
  CHECK(lay.links[2].nil);
  CHECK_FALSE(lay.links[1].nil);
  REQUIRE(lay.bars.size() == 1);
  CHECK(lay.bars[0].lo == 1);
  CHECK(lay.bars[0].hi == 2);
  const auto txt = diagram::ascii(lay);
  const auto ls = lines(txt);
  REQUIRE(ls.size() == 2 + 5 + 4);
  int dots = 0, circles = 0;
  for (const auto& l : ls) {
    if (l.find('*') != std::string::npos) ++dots;
    if (l.size() > 9 && l[9] == 'o') ++circles;
  }
  CHECK(dots == 5);
  CHECK(circles == 2);
  CHECK(ls[2 + 2].find("* A") != std::string::npos);  // orbit position 2
  CHECK(ls[3].find("beta_1 nil") != std::string::npos);
  CHECK(ls[7].find("beta_3 nil") != std::string::npos);
}

TEST_CASE("svg diagrams are well-formed and deterministic") {
  for (auto [p, q] : {std::pair{1, 2}, {2, 3}, {3, 7}, {5, 13}, {8, 11}}) {
    const auto sc = slicebuild::construct(CoprimePair::make(p, q));
    const auto a = diagram::svg(diagram::layout(sc));
    const auto b = diagram::svg(diagram::layout(slicebuild::construct(CoprimePair::make(p, q))));
    CHECK(a == b);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(balanced_xml(a));
    CHECK(a.find("stroke-width=\"4\"") != std::string::npos);
  }
}

TEST_CASE("repeating pattern for a positive signature") {
  // (3,7), signature "+": the two changes share the interval between the
  // internal turning points and sit on either side of it
  const auto sc = slicebuild::construct(CoprimePair::make(3, 7));
  const auto lay = diagram::layout(sc);
  REQUIRE(lay.bars.size() == 2);
  CHECK(lay.bars[0].lo == lay.bars[1].lo);
  CHECK(lay.bars[0].hi == lay.bars[1].hi);
  CHECK(lay.bars[0].i == lay.bars[0].lo - 1);
  CHECK(lay.bars[1].i == lay.bars[1].hi);
  CHECK(lay.columns == 2);
}
