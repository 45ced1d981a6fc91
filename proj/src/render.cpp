#include "rightsim/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rightsim {

namespace {

// viridis at five stops
constexpr std::array<Rgb, 5> kPalette{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

void header(std::ostringstream& os, int w, int h) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
}

void text(std::ostringstream& os, double x, double y, const std::string& s, const char* anchor = "middle",
          int size = 12) {
  os << "<text x=\"" << fmt(x, 1) << "\" y=\"" << fmt(y, 1) << "\" text-anchor=\"" << anchor << "\" font-size=\""
     << size << "\">" << escape(s) << "</text>\n";
}

void rect(std::ostringstream& os, double x, double y, double w, double h, const std::string& fill,
          const char* stroke = "none") {
  os << "<rect x=\"" << fmt(x, 1) << "\" y=\"" << fmt(y, 1) << "\" width=\"" << fmt(w, 1) << "\" height=\""
     << fmt(h, 1) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

std::string angle_label(double rad) { return fmt(rad * 12 / std::numbers::pi, 0) + "pi/12"; }

// shared grid layout for heatmaps and regime maps
struct Layout {
  double left = 90, top = 50, cell_w = 60, cell_h = 40;
  int cols = 0, rows = 0;
  double width() const { return left + cols * cell_w; }
  double height() const { return top + rows * cell_h; }
  double cell_x(int col) const { return left + col * cell_w; }
  // A_p increases upward
  double cell_y(int row) const { return top + (rows - 1 - row) * cell_h; }
};

void grid_axes(std::ostringstream& os, const Layout& L, const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& x_label, const std::string& y_label) {
  for (int c = 0; c < L.cols; ++c) text(os, L.cell_x(c) + L.cell_w / 2, L.height() + 16, fmt(xs[c]));
  for (int r = 0; r < L.rows; ++r) text(os, L.left - 6, L.cell_y(r) + L.cell_h / 2 + 4, angle_label(ys[r]), "end");
  text(os, L.left + L.cols * L.cell_w / 2, L.height() + 36, x_label);
  os << "<text x=\"20\" y=\"" << fmt(L.top + L.rows * L.cell_h / 2, 1) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << fmt(L.top + L.rows * L.cell_h / 2, 1) << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

std::string to_hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb ColorScale::color(double value) const {
  double u = 0.5;
  if (max > min) u = std::clamp((value - min) / (max - min), 0.0, 1.0);
  const double pos = u * (kPalette.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(pos), kPalette.size() - 2);
  const double f = pos - static_cast<double>(i);
  auto lerp = [f](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * f)); };
  return {lerp(kPalette[i].r, kPalette[i + 1].r), lerp(kPalette[i].g, kPalette[i + 1].g),
          lerp(kPalette[i].b, kPalette[i + 1].b)};
}

HeatmapDocument make_heatmap(const BehaviorDiagram& diagram, double (*value)(const CellSummary&),
                             const std::string& title, const std::string& legend_label) {
  HeatmapDocument doc;
  doc.title = title;
  doc.x_label = "wave number n";
  doc.y_label = "pitch amplitude A_p";
  doc.legend_label = legend_label;
  doc.x_values = diagram.n_values;
  doc.y_values = diagram.a_p_values;
  for (const auto& c : diagram.cells) doc.values.push_back(value(c));
  if (!doc.values.empty()) {
    const auto [lo, hi] = std::minmax_element(doc.values.begin(), doc.values.end());
    doc.scale = {*lo, *hi};
  }
  for (double v : doc.values) doc.colors.push_back(doc.scale.color(v));
  return doc;
}

HeatmapDocument dx_heatmap(const BehaviorDiagram& diagram) {
  return make_heatmap(
      diagram, [](const CellSummary& c) { return c.dX.mean; }, diagram.variant + ": net displacement",
      "dX (BL/cycle)");
}

HeatmapDocument theta_dot_heatmap(const BehaviorDiagram& diagram) {
  return make_heatmap(
      diagram, [](const CellSummary& c) { return c.theta_dot.mean; }, diagram.variant + ": axial rotation",
      "theta_dot (rad/s)");
}

std::string render_svg(const HeatmapDocument& doc) {
  Layout L;
  L.cols = static_cast<int>(doc.x_values.size());
  L.rows = static_cast<int>(doc.y_values.size());
  const double legend_x = L.width() + 30;
  const int w = static_cast<int>(legend_x + 110);
  const int h = static_cast<int>(L.height() + 50);
  std::ostringstream os;
  header(os, w, h);
  text(os, w / 2.0, 24, doc.title, "middle", 14);
  for (int r = 0; r < L.rows; ++r) {
    for (int c = 0; c < L.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * L.cols + c;
      rect(os, L.cell_x(c), L.cell_y(r), L.cell_w, L.cell_h, to_hex(doc.colors[i]), "white");
      const Rgb col = doc.colors[i];
      const bool dark = col.r * 0.299 + col.g * 0.587 + col.b * 0.114 < 128;
      os << "<text x=\"" << fmt(L.cell_x(c) + L.cell_w / 2, 1) << "\" y=\"" << fmt(L.cell_y(r) + L.cell_h / 2 + 4, 1)
         << "\" text-anchor=\"middle\" font-size=\"10\" fill=\"" << (dark ? "white" : "black") << "\">"
         << fmt(doc.values[i]) << "</text>\n";
    }
  }
  grid_axes(os, L, doc.x_values, doc.y_values, doc.x_label, doc.y_label);

  // vertical color bar, max on top
  os << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
  for (std::size_t i = 0; i < kPalette.size(); ++i) {
    os << "<stop offset=\"" << fmt(static_cast<double>(i) / (kPalette.size() - 1), 3) << "\" stop-color=\""
       << to_hex(kPalette[i]) << "\"/>\n";
  }
  os << "</linearGradient></defs>\n";
  rect(os, legend_x, L.top, 18, L.rows * L.cell_h, "url(#scale)", "black");
  os << "<text class=\"legend-max\" x=\"" << fmt(legend_x + 24, 1) << "\" y=\"" << fmt(L.top + 10, 1) << "\">"
     << format_number(doc.scale.max) << "</text>\n";
  os << "<text class=\"legend-min\" x=\"" << fmt(legend_x + 24, 1) << "\" y=\"" << fmt(L.height(), 1) << "\">"
     << format_number(doc.scale.min) << "</text>\n";
  text(os, legend_x + 9, L.top - 8, doc.legend_label);
  os << "</svg>\n";
  return os.str();
}

Rgb regime_color(Regime regime) {
  switch (regime) {
    case Regime::InPlaceSpin:
      return {228, 26, 28};
    case Regime::PureSidewinding:
      return {55, 126, 184};
    case Regime::RollingAssistedSidewinding:
      return {152, 78, 163};
    case Regime::KinematicSaturation:
      return {166, 166, 166};
  }
  return {0, 0, 0};
}

std::string render_regime_map(const BehaviorDiagram& diagram) {
  Layout L;
  L.cols = static_cast<int>(diagram.n_values.size());
  L.rows = static_cast<int>(diagram.a_p_values.size());
  const double legend_x = L.width() + 30;
  const int w = static_cast<int>(legend_x + 230);
  const int h = static_cast<int>(L.height() + 50);
  std::ostringstream os;
  header(os, w, h);
  text(os, w / 2.0, 24, diagram.variant + ": behavioral regimes", "middle", 14);
  for (int r = 0; r < L.rows; ++r) {
    for (int c = 0; c < L.cols; ++c) {
      const Regime g = diagram.cell(r, c).regime;
      rect(os, L.cell_x(c), L.cell_y(r), L.cell_w, L.cell_h, to_hex(regime_color(g)), "white");
      os << "<text x=\"" << fmt(L.cell_x(c) + L.cell_w / 2, 1) << "\" y=\"" << fmt(L.cell_y(r) + L.cell_h / 2 + 4, 1)
         << "\" text-anchor=\"middle\" fill=\"white\">" << regime_code(g) << "</text>\n";
    }
  }
  grid_axes(os, L, diagram.n_values, diagram.a_p_values, "wave number n", "pitch amplitude A_p");
  int k = 0;
  for (Regime g : {Regime::InPlaceSpin, Regime::PureSidewinding, Regime::RollingAssistedSidewinding,
                   Regime::KinematicSaturation}) {
    const double y = L.top + k * 24;
    rect(os, legend_x, y, 16, 16, to_hex(regime_color(g)));
    text(os, legend_x + 22, y + 12, regime_code(g) + " " + to_string(g), "start", 10);
    ++k;
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_phase_sweep(const PhaseSweepResult& result) {
  // two bar panels: dX and theta per cycle, each with SEM whiskers
  const int w = 720, h = 340;
  const double panel_w = 300, panel_h = 220, top = 60;
  std::ostringstream os;
  header(os, w, h);
  text(os, w / 2.0, 24, "Phase offset sweep", "middle", 14);
  const std::size_t n = result.rows.size();
  auto panel = [&](double left, const std::string& label, auto get, const char* fill) {
    double lo = 0, hi = 0;
    for (const auto& r : result.rows) {
      const Stats s = get(r);
      lo = std::min(lo, s.mean - s.sem);
      hi = std::max(hi, s.mean + s.sem);
    }
    if (hi - lo < 1e-12) hi = lo + 1;
    auto ymap = [&](double v) { return top + panel_h * (hi - v) / (hi - lo); };
    os << "<line x1=\"" << fmt(left, 1) << "\" y1=\"" << fmt(ymap(0), 1) << "\" x2=\"" << fmt(left + panel_w, 1)
       << "\" y2=\"" << fmt(ymap(0), 1) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << fmt(left, 1) << "\" y1=\"" << fmt(top, 1) << "\" x2=\"" << fmt(left, 1) << "\" y2=\""
       << fmt(top + panel_h, 1) << "\" stroke=\"black\"/>\n";
    text(os, left - 4, top + 4, fmt(hi), "end", 10);
    text(os, left - 4, top + panel_h, fmt(lo), "end", 10);
    const double slot = panel_w / static_cast<double>(std::max<std::size_t>(n, 1));
    for (std::size_t i = 0; i < n; ++i) {
      const Stats s = get(result.rows[i]);
      const double x = left + i * slot + slot * 0.2;
      const double y0 = ymap(0), y1 = ymap(s.mean);
      rect(os, x, std::min(y0, y1), slot * 0.6, std::abs(y1 - y0), fill);
      const double cx = x + slot * 0.3;
      os << "<line x1=\"" << fmt(cx, 1) << "\" y1=\"" << fmt(ymap(s.mean - s.sem), 1) << "\" x2=\"" << fmt(cx, 1)
         << "\" y2=\"" << fmt(ymap(s.mean + s.sem), 1) << "\" stroke=\"black\"/>\n";
      text(os, cx, top + panel_h + 16, fmt(result.rows[i].delta_d * 4 / std::numbers::pi, 0) + "pi/4", "middle", 10);
    }
    text(os, left + panel_w / 2, top - 10, label);
    text(os, left + panel_w / 2, top + panel_h + 34, "phase offset delta_d");
  };
  panel(60, "dX (BL/cycle)", [](const PhaseSweepRow& r) { return r.dX; }, "#377eb8");
  panel(400, "theta per cycle (rad)", [](const PhaseSweepRow& r) { return r.theta_per_cycle; }, "#e41a1c");
  os << "</svg>\n";
  return os.str();
}

std::string render_energy_profiles(const std::vector<EnergyRecord>& records) {
  const int w = 640, h = 380;
  const double left = 70, top = 50, pw = 420, ph = 270;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& r : records) {
    for (double v : r.profile.height) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = 0, hi = 1;
  if (hi - lo < 1e-9) hi = lo + 1e-3;
  auto xmap = [&](double roll) { return left + pw * roll / (2 * std::numbers::pi); };
  auto ymap = [&](double z) { return top + ph * (hi - z) / (hi - lo); };
  std::ostringstream os;
  header(os, w, h);
  text(os, w / 2.0, 24, "Resting CoM height over roll angle", "middle", 14);
  rect(os, left, top, pw, ph, "none", "black");
  text(os, left - 4, top + 4, fmt(hi * 1000, 1) + " mm", "end", 10);
  text(os, left - 4, top + ph, fmt(lo * 1000, 1) + " mm", "end", 10);
  for (int k = 0; k <= 4; ++k) text(os, xmap(k * std::numbers::pi / 2), top + ph + 16, fmt(k * 0.5, 1) + "pi", "middle", 10);
  text(os, left + pw / 2, top + ph + 34, "roll angle");
  const char* colors[] = {"#000000", "#377eb8", "#4daf4a", "#e41a1c", "#984ea3", "#ff7f00"};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& p = records[i].profile;
    const char* color = colors[i % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < p.roll.size(); ++j) os << fmt(xmap(p.roll[j]), 1) << ',' << fmt(ymap(p.height[j]), 1) << ' ';
    os << "\"/>\n";
    rect(os, left + pw + 20, top + i * 22, 14, 14, color);
    text(os, left + pw + 40, top + i * 22 + 11,
         records[i].variant + " (" + fmt(p.barrier * 1000, 1) + " mm)", "start", 10);
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rightsim
