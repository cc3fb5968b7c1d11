#include "slice/diagram.hpp"

#include <cstdio>
#include <sstream>

namespace slice::diagram {

namespace {

constexpr int kTop = 60;
constexpr int kStep = 40;
constexpr int kDotX = 80;
constexpr int kBarX = 150;
constexpr int kBarStep = 24;

int ypos(int x) { return kTop + kStep * (x - 1); }

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

Layout layout(const slicebuild::SliceConstruction& sc) {
  const auto& mr = sc.mr;
  const auto& td = mr.td;
  Layout lay;
  lay.p = mr.pair.p;
  lay.q = mr.pair.q;
  lay.n = mr.pair.n;
  lay.signature = mr.sig.str();
  lay.order = sc.sys.order();
  for (int x = 1; x <= lay.n; ++x) {
    Dot d{x, mr.tr.at(x), ' '};
    if (td.is_turning(x)) d.tag = td.tag(x) == meander::Tag::A ? 'A' : 'B';
    lay.dots.push_back(d);
  }
  std::vector<int> col_end;  // last hi per column
  for (int i = 1; i < lay.n; ++i) {
    const auto& en = sc.final_ledger.at(i);
    lay.links.push_back(Link{i, td.nil(i), td.isolated(i), en.changed(), i == td.e()});
    if (!en.changed()) continue;
    Bar b{i, en.lo, en.hi, 0, en.kind == slicebuild::ChangeKind::ExceptionalFix};
    std::size_t c = 0;
    while (c < col_end.size() && col_end[c] >= b.lo) ++c;
    if (c == col_end.size()) col_end.push_back(0);
    col_end[c] = b.hi;
    b.column = static_cast<int>(c);
    lay.bars.push_back(b);
  }
  lay.columns = static_cast<int>(col_end.size());
  return lay;
}

std::string ascii(const Layout& lay) {
  std::ostringstream os;
  os << "meander (" << lay.p << "," << lay.q << ")  signature \"" << lay.signature << "\"  c=(" << join(lay.order)
     << ")\n";
  os << "pos val\n";
  auto bar_cell = [&](int col, bool dot_row, int x) {
    for (const auto& b : lay.bars) {
      if (b.column != col) continue;
      if (dot_row && (x == b.lo || x == b.hi)) return b.fix ? '#' : '+';
      if (dot_row && b.lo < x && x < b.hi) return b.fix ? ':' : '|';
      if (!dot_row && b.lo <= x && x < b.hi) return b.fix ? ':' : '|';
    }
    return ' ';
  };
  for (int x = 1; x <= lay.n; ++x) {
    const auto& d = lay.dots[static_cast<std::size_t>(x - 1)];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%3d %3d  ", d.pos, d.value);
    std::string line = buf;
    line += '*';
    line += ' ';
    line += d.tag;
    line += "  ";
    for (int c = 0; c < lay.columns; ++c) {
      line += bar_cell(c, true, x);
      line += ' ';
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << "\n";
    if (x == lay.n) break;

    const auto& l = lay.links[static_cast<std::size_t>(x - 1)];
    std::string row = "         ";
    row += l.nil ? 'o' : '|';
    row += ' ';
    row += l.changed ? 'c' : ' ';
    row += "  ";
    for (int c = 0; c < lay.columns; ++c) {
      row += bar_cell(c, false, x);
      row += ' ';
    }
    std::string note = "  beta_" + std::to_string(l.i);
    if (l.nil) note += " nil";
    if (l.isolated) note += " isolated";
    if (l.exceptional) note += " exceptional";
    for (const auto& b : lay.bars)
      if (b.i == l.i)
        note += (b.fix ? " fixed by iota[" : " + iota[") + std::to_string(b.lo) + "," + std::to_string(b.hi) + ")";
    os << row << note << "\n";
  }
  return os.str();
}

std::string svg(const Layout& lay) {
  const int width = kBarX + kBarStep * lay.columns + 220;
  const int height = ypos(lay.n) + 50;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"monospace\" font-size=\"12\">\n";
  os << "  <text x=\"10\" y=\"20\">meander (" << lay.p << "," << lay.q << ") signature \"" << lay.signature
     << "\"</text>\n";
  os << "  <text x=\"10\" y=\"38\">c=(" << join(lay.order) << ")</text>\n";

  for (const auto& l : lay.links) {
    const int y0 = ypos(l.i), y1 = ypos(l.i + 1), ym = (y0 + y1) / 2;
    os << "  <line x1=\"" << kDotX << "\" y1=\"" << y0 << "\" x2=\"" << kDotX << "\" y2=\"" << y1
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    if (l.nil)
      os << "  <circle cx=\"" << kDotX << "\" cy=\"" << ym << "\" r=\"9\" fill=\"none\" stroke=\"black\"/>\n";
    if (l.changed) os << "  <text x=\"" << kDotX + 14 << "\" y=\"" << ym + 4 << "\">c</text>\n";
    if (l.exceptional) os << "  <text x=\"" << kDotX - 24 << "\" y=\"" << ym + 4 << "\">e</text>\n";
  }
  for (const auto& b : lay.bars) {
    const int x = kBarX + kBarStep * b.column;
    const int ym = (ypos(b.i) + ypos(b.i + 1)) / 2;
    os << "  <line x1=\"" << x << "\" y1=\"" << ypos(b.lo) << "\" x2=\"" << x << "\" y2=\"" << ypos(b.hi)
       << "\" stroke=\"black\" stroke-width=\"4\"" << (b.fix ? " stroke-dasharray=\"6 3\"" : "") << "/>\n";
    os << "  <line x1=\"" << kDotX + 24 << "\" y1=\"" << ym << "\" x2=\"" << x << "\" y2=\"" << ym
       << "\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"2 2\"/>\n";
  }
  for (const auto& d : lay.dots) {
    const int y = ypos(d.pos);
    os << "  <circle cx=\"" << kDotX << "\" cy=\"" << y << "\" r=\"3\" fill=\"black\"/>\n";
    os << "  <text x=\"10\" y=\"" << y + 4 << "\">" << d.pos << "</text>\n";
    os << "  <text x=\"34\" y=\"" << y + 4 << "\" fill=\"gray\">" << d.value << "</text>\n";
    if (d.tag != ' ') os << "  <text x=\"" << kDotX + 10 << "\" y=\"" << y + 4 << "\">" << d.tag << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace slice::diagram
