#include "poisim/svg.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace poisim::svg {

namespace {

constexpr double kWidth = 860, kHeight = 520;
constexpr double kLeft = 70, kTop = 45, kRight = 180, kBottom = 55;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b"};

std::string num(double v) { return io::fmt_fixed(v, 2); }

struct Canvas {
  std::string out;
  double x_max = 1.0, y_max = 1.0;  // data domains, minima fixed at 0

  double px(double x) const { return kLeft + x / x_max * kPlotW; }
  double py(double y) const { return kTop + (1.0 - y / y_max) * kPlotH; }

  void open(std::string_view titletext) {
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
           "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
           " " + num(kHeight) + "\" font-family=\"sans-serif\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(kLeft, kTop - 18, xml_escape(titletext), 16, "start", "#000");
  }

  void close() { out += "</svg>\n"; }

  void line(double x1, double y1, double x2, double y2, const char* stroke,
            const char* extra = "") {
    out += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
           num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\"" +
           extra + "/>\n";
  }

  void text(double x, double y, const std::string& s, int size,
            const char* anchor, const char* fill) {
    out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
           std::to_string(size) + "\" text-anchor=\"" + anchor + "\" fill=\"" +
           fill + "\">" + s + "</text>\n";
  }

  void axes(const std::string& x_label, const std::string& y_label,
            std::span<const double> x_ticks, std::span<const double> y_ticks,
            int x_decimals, int y_decimals) {
    for (const double t : x_ticks) {
      const double gx = px(t);
      line(gx, kTop, gx, kTop + kPlotH, "#dddddd");
      line(gx, kTop + kPlotH, gx, kTop + kPlotH + 4, "#000");
      text(gx, kTop + kPlotH + 18, io::fmt_fixed(t, x_decimals), 11, "middle",
           "#000");
    }
    for (const double t : y_ticks) {
      const double gy = py(t);
      line(kLeft, gy, kLeft + kPlotW, gy, "#dddddd");
      line(kLeft - 4, gy, kLeft, gy, "#000");
      text(kLeft - 8, gy + 4, io::fmt_fixed(t, y_decimals), 11, "end", "#000");
    }
    line(kLeft, kTop, kLeft, kTop + kPlotH, "#000");
    line(kLeft, kTop + kPlotH, kLeft + kPlotW, kTop + kPlotH, "#000");
    text(kLeft + kPlotW / 2, kHeight - 14, xml_escape(x_label), 13, "middle",
         "#000");
    out += "<text x=\"18\" y=\"" + num(kTop + kPlotH / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#000\" "
           "transform=\"rotate(-90 18 " +
           num(kTop + kPlotH / 2) + ")\">" + xml_escape(y_label) + "</text>\n";
  }

  void legend_entry(std::size_t slot, const char* color,
                    const std::string& label, bool line_swatch) {
    const double lx = kLeft + kPlotW + 16;
    const double ly = kTop + 10 + static_cast<double>(slot) * 20;
    if (line_swatch) {
      line(lx, ly, lx + 22, ly, color, " stroke-width=\"2.5\"");
    } else {
      out += "<rect x=\"" + num(lx + 6) + "\" y=\"" + num(ly - 5) +
             "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    }
    text(lx + 28, ly + 4, label, 12, "start", "#000");
  }
};

std::string degree_name(int degree) {
  return degree == 1 ? "linear" : degree == 2 ? "quadratic" : std::to_string(degree);
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string sweep_plot(std::span<const io::SweepRecord> rows) {
  if (rows.empty()) {
    throw io::SchemaError("sweep plot needs at least one data row");
  }

  using Key = std::pair<int, std::string>;
  std::vector<Key> series;
  for (const io::SweepRecord& r : rows) {
    const Key k{r.model_degree, r.attack};
    if (std::find(series.begin(), series.end(), k) == series.end()) {
      series.push_back(k);
    }
  }

  Canvas c;
  c.y_max = 1.0;
  for (const io::SweepRecord& r : rows) {
    if (r.flipped && r.poison_pct) {
      c.y_max = std::max(c.y_max, *r.poison_pct);
    }
  }
  c.y_max *= 1.1;

  c.open("Poison needed to flip the target");
  const double yticks[] = {0, c.y_max / 4, c.y_max / 2, 3 * c.y_max / 4, c.y_max};
  const double xticks[] = {0, 0.2, 0.4, 0.6, 0.8, 1.0};
  c.axes("target x", "poison needed (% of organic data)", xticks, yticks, 1, 1);

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % std::size(kPalette)];
    c.out += "<g class=\"series\" data-series=\"" +
             degree_name(series[si].first) + "-" + xml_escape(series[si].second) +
             "\">\n";
    std::string points;
    const auto flush = [&] {
      if (!points.empty()) {
        c.out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                 "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        points.clear();
      }
    };
    for (const io::SweepRecord& r : rows) {
      if (Key{r.model_degree, r.attack} != series[si]) {
        continue;
      }
      if (r.flipped && r.poison_pct) {
        const double gx = c.px(r.target_x), gy = c.py(*r.poison_pct);
        if (!points.empty()) {
          points.push_back(' ');
        }
        points += num(gx) + "," + num(gy);
        c.out += "<circle class=\"flip-point\" cx=\"" + num(gx) + "\" cy=\"" +
                 num(gy) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      } else {
        flush();  // break the line across censored or failed points
        if (!r.flipped && r.censored_at) {
          const double gx = c.px(r.target_x), gy = c.py(c.y_max);
          c.out += "<path class=\"censored\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" d=\"M" + num(gx - 4) + " " +
                   num(gy - 4) + " L" + num(gx + 4) + " " + num(gy + 4) + " M" +
                   num(gx - 4) + " " + num(gy + 4) + " L" + num(gx + 4) + " " +
                   num(gy - 4) + "\"/>\n";
        }
      }
    }
    flush();
    c.out += "</g>\n";
  }

  std::size_t slot = 0;
  for (std::size_t si = 0; si < series.size(); ++si) {
    c.legend_entry(slot++, kPalette[si % std::size(kPalette)],
                   degree_name(series[si].first) + " " +
                       xml_escape(series[si].second),
                   true);
  }
  c.legend_entry(slot++, "#777777", "x = censored at budget", true);
  c.close();
  return std::move(c.out);
}

std::string snapshot_plot(const Dataset& data,
                          const model::LogisticModel& linear,
                          const model::LogisticModel& quadratic,
                          const TargetSpec& target) {
  model::validate_model(linear);
  model::validate_model(quadratic);
  validate_target(target);
  if (data.empty()) {
    throw io::SchemaError("snapshot plot needs a non-empty dataset");
  }

  Canvas c;
  c.open("Data, fitted models, and the attack target");
  const double xticks[] = {0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const double yticks[] = {0, 0.25, 0.5, 0.75, 1.0};
  c.axes("x", "P(fake)", xticks, yticks, 1, 2);

  const char* real_color = "#1f77b4";
  const char* fake_color = "#d62728";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double gx = c.px(data.x(i));
    const double gy = c.py(label_value(data.y(i)));
    const char* color = data.y(i) == Label::fake_news ? fake_color : real_color;
    if (data.provenance(i) == Provenance::organic) {
      c.out += "<circle class=\"pt-organic\" cx=\"" + num(gx) + "\" cy=\"" +
               num(gy) + "\" r=\"2\" fill=\"" + color +
               "\" fill-opacity=\"0.25\"/>\n";
    } else {
      c.out += "<rect class=\"pt-poison\" x=\"" + num(gx - 2.5) + "\" y=\"" +
               num(gy - 2.5) + "\" width=\"5\" height=\"5\" fill=\"" + color +
               "\" fill-opacity=\"0.6\" stroke=\"#000\" stroke-width=\"0.4\"/>\n";
    }
  }

  c.line(c.px(0), c.py(0.5), c.px(1), c.py(0.5), "#999999",
         " stroke-dasharray=\"2 3\" class=\"threshold\"");

  const char* curve_colors[] = {"#ff7f0e", "#9467bd"};
  const model::LogisticModel* models[] = {&linear, &quadratic};
  for (int mi = 0; mi < 2; ++mi) {
    std::string points;
    for (int j = 0; j <= 200; ++j) {
      const double x = static_cast<double>(j) / 200.0;
      const double p = model::predict_proba(*models[mi], x);
      if (j > 0) {
        points.push_back(' ');
      }
      points += num(c.px(x)) + "," + num(c.py(p));
    }
    c.out += "<polyline class=\"curve\" fill=\"none\" stroke=\"" +
             std::string(curve_colors[mi]) +
             "\" stroke-width=\"2.5\" points=\"" + points + "\"/>\n";
  }

  c.line(c.px(target.x_target), kTop, c.px(target.x_target), kTop + kPlotH,
         "#000000", " stroke-width=\"1.5\" stroke-dasharray=\"6 4\""
                    " class=\"target-marker\"");
  c.text(c.px(target.x_target) + 5, kTop + 14,
         "target (true class " + std::to_string(label_value(target.y_true)) + ")",
         12, "start", "#000");

  std::size_t slot = 0;
  c.legend_entry(slot++, real_color, "organic, label 0", false);
  c.legend_entry(slot++, fake_color, "organic, label 1", false);
  c.legend_entry(slot++, "#555555", "squares = poison", false);
  c.legend_entry(slot++, curve_colors[0], "linear fit", true);
  c.legend_entry(slot++, curve_colors[1], "quadratic fit", true);
  c.close();
  return std::move(c.out);
}

}  // namespace poisim::svg
