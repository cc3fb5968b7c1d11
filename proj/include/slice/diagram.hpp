#pragma once

// Meander column diagrams: one dot per orbit position, top to bottom, A/B
// labels at turning points, circled nil values, "c" at changed values and a
// thick bar for every added interval.

#include <string>
#include <vector>

#include "slice/slicebuild.hpp"

namespace slice::diagram {

struct Dot {
  int pos = 0;
  int value = 0;
  char tag = ' ';  // 'A', 'B' or ' '
};

struct Link {
  int i = 0;
  bool nil = false;
  bool isolated = false;
  bool changed = false;
  bool exceptional = false;
};

struct Bar {
  int i = 0;  // changed index
  int lo = 0;
  int hi = 0;
  int column = 0;
  bool fix = false;
};

struct Layout {
  int p = 0;
  int q = 0;
  int n = 0;
  std::string signature;
  std::vector<int> order;
  std::vector<Dot> dots;
  std::vector<Link> links;
  std::vector<Bar> bars;
  int columns = 0;
};

Layout layout(const slicebuild::SliceConstruction& sc);
std::string ascii(const Layout& lay);
std::string svg(const Layout& lay);

}  // namespace slice::diagram
