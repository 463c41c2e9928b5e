#include "freeproj/figure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "freeproj/csv.hpp"

namespace freeproj {

namespace {

constexpr int kMaxBins = 400;

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// 1/2/5 tick step covering roughly five intervals.
double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 5.0;
  const double pow10 = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / pow10;
  double mult = 10.0;
  if (frac < 1.5) {
    mult = 1.0;
  } else if (frac < 3.5) {
    mult = 2.0;
  } else if (frac < 7.5) {
    mult = 5.0;
  }
  return mult * pow10;
}

}  // namespace

Histogram build_histogram(const EmpiricalDistribution& emp, const SpectralLaw* overlay,
                          int bins) {
  const std::vector<double>& s = emp.samples;
  if (s.empty()) throw std::invalid_argument("cannot build a histogram from an empty sample");
  double lo = s.front();
  double hi = s.back();
  if (!(hi - lo > 1e-12)) {
    lo -= 0.5;
    hi += 0.5;
  }

  const std::size_t n = s.size();
  int nbins = bins;
  if (nbins <= 0) {
    const double q1 = s[(n - 1) / 4];
    const double q3 = s[(3 * (n - 1)) / 4];
    const double width = 2.0 * (q3 - q1) * std::pow(static_cast<double>(n), -1.0 / 3.0);
    if (width > 0.0) {
      nbins = static_cast<int>(std::ceil((hi - lo) / width));
    } else {
      nbins = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    }
  }
  nbins = std::clamp(nbins, 1, kMaxBins);

  std::vector<double> edges(static_cast<std::size_t>(nbins) + 1);
  for (int i = 0; i <= nbins; ++i) {
    edges[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nbins);
  }

  // Snap the nearest interior edge onto each overlay atom strictly inside the
  // hull so no bin straddles an atom.
  if (overlay != nullptr) {
    for (const Atom& atom : overlay->atoms) {
      const double x = atom.location;
      if (!(x > lo && x < hi)) continue;
      std::size_t best = 1;
      double best_dist = std::abs(edges[1] - x);
      for (std::size_t j = 2; j + 1 < edges.size(); ++j) {
        const double d = std::abs(edges[j] - x);
        if (d < best_dist) {
          best = j;
          best_dist = d;
        }
      }
      if (edges.size() >= 3) edges[best] = x;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.size() < 2) edges = {lo, hi};
    nbins = static_cast<int>(edges.size()) - 1;
  }

  Histogram h;
  h.edges = edges;
  h.mass.assign(static_cast<std::size_t>(nbins), 0.0);
  const double w = emp.weight_per_sample;
  for (double x : s) {
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    std::size_t idx = (it == edges.begin()) ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    if (idx >= h.mass.size()) idx = h.mass.size() - 1;  // closed last bin
    h.mass[idx] += w;
  }
  h.total_mass = emp.total_mass;
  return h;
}

std::string render_figure_svg(const Histogram& hist, const SpectralLaw* overlay,
                              const FigureSpec& spec) {
  constexpr double W = 960.0, H = 600.0;
  constexpr double ML = 70.0, MR = 20.0, MT = 40.0, MB = 60.0;
  const double PW = W - ML - MR;
  const double PH = H - MT - MB;

  double xmin = hist.edges.front();
  double xmax = hist.edges.back();
  if (overlay != nullptr && !overlay->empty()) {
    xmin = std::min(xmin, overlay->support_lo());
    xmax = std::max(xmax, overlay->support_hi());
  }
  double span = xmax - xmin;
  if (!(span > 0.0)) span = 1.0;
  xmin -= 0.04 * span;
  xmax += 0.04 * span;
  span = xmax - xmin;

  double ymax = 0.0;
  for (std::size_t i = 0; i < hist.mass.size(); ++i) ymax = std::max(ymax, hist.density(i));
  std::vector<std::pair<double, double>> grid;
  if (overlay != nullptr && !overlay->pieces.empty()) {
    grid = density_grid(*overlay, std::max(8, spec.overlay_points));
    std::vector<double> dens;
    dens.reserve(grid.size());
    for (const auto& [x, d] : grid) {
      (void)x;
      if (std::isfinite(d)) dens.push_back(d);
    }
    if (!dens.empty()) {
      std::sort(dens.begin(), dens.end());
      const double p98 = dens[static_cast<std::size_t>(0.98 * (dens.size() - 1))];
      ymax = std::max(ymax, p98);
    }
  }
  if (!(ymax > 0.0)) ymax = 1.0;
  ymax *= 1.2;

  const auto sx = [&](double x) { return ML + (x - xmin) / span * PW; };
  const auto sy = [&](double y) {
    const double clamped = std::clamp(y, 0.0, ymax);
    return MT + PH - clamped / ymax * PH;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"600\" "
         "viewBox=\"0 0 960 600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"600\" fill=\"#ffffff\"/>\n";
  if (!spec.title.empty()) {
    svg += "<text x=\"480\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\" fill=\"#222222\">" + spec.title + "</text>\n";
  }

  // Axes.
  svg += "<line x1=\"" + fmt(ML) + "\" y1=\"" + fmt(MT + PH) + "\" x2=\"" + fmt(ML + PW) +
         "\" y2=\"" + fmt(MT + PH) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + fmt(ML) + "\" y1=\"" + fmt(MT) + "\" x2=\"" + fmt(ML) + "\" y2=\"" +
         fmt(MT + PH) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  const double xstep = nice_step(span);
  const double x0 = std::ceil(xmin / xstep) * xstep;
  for (double t = x0; t <= xmax + 1e-12 * span; t += xstep) {
    const double px = sx(t);
    svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(MT + PH) + "\" x2=\"" + fmt(px) +
           "\" y2=\"" + fmt(MT + PH + 5) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(MT + PH + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"#333333\">" + fmt(t, "%.6g") + "</text>\n";
  }
  const double ystep = nice_step(ymax);
  for (double t = 0.0; t <= ymax + 1e-12 * ymax; t += ystep) {
    const double py = sy(t);
    svg += "<line x1=\"" + fmt(ML - 5) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(ML) +
           "\" y2=\"" + fmt(py) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(ML - 9) + "\" y=\"" + fmt(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"#333333\">" + fmt(t, "%.6g") + "</text>\n";
  }

  // Histogram bars.
  for (std::size_t i = 0; i < hist.mass.size(); ++i) {
    if (!(hist.mass[i] > 0.0)) continue;
    const double d = hist.density(i);
    const double bx = sx(hist.edges[i]);
    const double bw = sx(hist.edges[i + 1]) - bx;
    const double by = sy(d);
    const double bh = sy(0.0) - by;
    svg += "<rect x=\"" + fmt(bx) + "\" y=\"" + fmt(by) + "\" width=\"" + fmt(bw) +
           "\" height=\"" + fmt(bh) +
           "\" fill=\"#a8c8e8\" stroke=\"#5588bb\" stroke-width=\"0.5\"/>\n";
  }

  // Overlay density, one polyline per piece.
  if (overlay != nullptr) {
    for (const ACPiece& piece : overlay->pieces) {
      const int per_half = std::max(4, spec.overlay_points / 2);
      std::vector<double> xs;
      xs.reserve(static_cast<std::size_t>(2 * per_half));
      const double len = piece.hi - piece.lo;
      for (int j = 1; j <= per_half; ++j) {
        const double u = (std::numbers::pi / 2.0) * static_cast<double>(j) /
                         static_cast<double>(per_half);
        const double f = std::pow(std::sin(u), 4.0);
        xs.push_back(piece.lo + len * 0.5 * f);
        xs.push_back(piece.hi - len * 0.5 * f);
      }
      std::sort(xs.begin(), xs.end());
      std::string points;
      for (double x : xs) {
        const double d = piece.density ? piece.density(x) : 0.0;
        if (!std::isfinite(d)) continue;
        points += fmt(sx(x)) + "," + fmt(sy(d)) + " ";
      }
      if (!points.empty()) {
        points.pop_back();
        svg += "<polyline fill=\"none\" stroke=\"#d04040\" stroke-width=\"1.5\" points=\"" +
               points + "\"/>\n";
      }
    }
    for (const Atom& atom : overlay->atoms) {
      const double px = sx(atom.location);
      const double top = sy(0.9 * ymax);
      svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(sy(0.0)) + "\" x2=\"" + fmt(px) +
             "\" y2=\"" + fmt(top) +
             "\" stroke=\"#d04040\" stroke-width=\"1.5\" stroke-dasharray=\"4,3\"/>\n";
      svg += "<circle cx=\"" + fmt(px) + "\" cy=\"" + fmt(top) +
             "\" r=\"3\" fill=\"#d04040\"/>\n";
      svg += "<text x=\"" + fmt(px + 5) + "\" y=\"" + fmt(top - 5) +
             "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#d04040\">mass " +
             fmt(atom.mass, "%.4g") + "</text>\n";
    }
  }

  svg += "<text x=\"" + fmt(ML + PW / 2) + "\" y=\"" + fmt(H - 15) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "fill=\"#222222\">" + spec.x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(MT + PH / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "fill=\"#222222\" transform=\"rotate(-90 18 " + fmt(MT + PH / 2) +
         ")\">density</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string histogram_csv(const Histogram& hist) {
  std::string out = "bin_lo,bin_hi,mass,density\n";
  for (std::size_t i = 0; i < hist.mass.size(); ++i) {
    out += csv_join({format_double(hist.edges[i]), format_double(hist.edges[i + 1]),
                     format_double(hist.mass[i]), format_double(hist.density(i))});
    out.push_back('\n');
  }
  return out;
}

std::string overlay_csv(const SpectralLaw& law, int points_per_piece) {
  std::string out = "x,density\n";
  for (const auto& [x, d] : density_grid(law, points_per_piece)) {
    out += csv_join({format_double(x), format_double(d)});
    out.push_back('\n');
  }
  return out;
}

}  // namespace freeproj
