#pragma once

#include <string>
#include <vector>

#include "freeproj/limit_laws.hpp"
#include "freeproj/montecarlo.hpp"

namespace freeproj {

// Density-normalized histogram: bars of height mass/width, so the total bar
// area equals the empirical total mass. Bin edges never straddle an atom of
// the overlay law.
struct Histogram {
  std::vector<double> edges;   // bins + 1, increasing
  std::vector<double> mass;    // per bin
  double total_mass = 0.0;

  double density(std::size_t bin) const { return mass[bin] / (edges[bin + 1] - edges[bin]); }
};

// bins = 0 selects the Freedman-Diaconis rule (square-root rule fallback when
// the interquartile range degenerates).
Histogram build_histogram(const EmpiricalDistribution& emp, const SpectralLaw* overlay, int bins);

struct FigureSpec {
  std::string title;
  std::string x_label = "x";
  int bins = 0;                 // 0 = automatic
  int overlay_points = 512;     // density grid points per piece
};

// Self-contained SVG: histogram bars, the overlay density as one polyline per
// piece, atoms as labeled spikes. Deterministic output for fixed inputs.
std::string render_figure_svg(const Histogram& hist, const SpectralLaw* overlay,
                              const FigureSpec& spec);

// CSV exports backing the figure: histogram rows (bin_lo, bin_hi, mass,
// density) and overlay rows (x, density).
std::string histogram_csv(const Histogram& hist);
std::string overlay_csv(const SpectralLaw& law, int points_per_piece);

}  // namespace freeproj
