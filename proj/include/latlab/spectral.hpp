#pragma once

#include <span>
#include <string>
#include <vector>

#include "latlab/body.hpp"
#include "latlab/cutoff.hpp"
#include "latlab/lattice.hpp"

namespace latlab {

// Which smoothed profile a frequency-side series approximates: the weighted
// distance density (nu) or the weighted counting discrepancy (E).
enum class SeriesMode { nu, E };

struct SpectralSeries {
  std::string body;
  double q = 0.0;
  double R = 0.0;
  SeriesMode mode = SeriesMode::nu;
  std::vector<double> t;
  std::vector<double> value;
};

// Frequency-side lattice series over 0 < |a| <= R:
//   nu: psi(t/q) t^{(d-1)/2} sum psi(|a|/q) ft_surface(t a)
//   E : psi(t/q) t^{(d+1)/2} sum psi(|a|/q) ft_indicator(t a)
// Every t must lie in (1/q, q - 1/q). R <= 0 selects the default 8q; R < 1
// leaves no terms and yields zero. Ball and ellipsoid-indicator terms use
// closed forms; other terms use the stationary-phase form beyond |ta| = 1
// and direct quadrature inside it (dimensions 2 and 3 only there).
SpectralSeries poisson_series(const Body& K, double q, const Cutoff& cutoff, SeriesMode mode,
                              std::span<const double> tgrid, double R = 0.0,
                              long long budget = kDefaultPointBudget);

// int_0^{r_max} r^{d-1} psi^2(r/q) S(r)^2 dr with
// S(r) = sum over nonzero a in Z^d with |a|_K <= q of the dual body's
// surface transform at r a. r_max <= 0 selects the default 8q; r_max must
// reach the certified decay range of psi (squared tail bound below 1e-6).
double mattila_integral(const Body& K, double q, const Cutoff& cutoff, double r_max = 0.0,
                        long long budget = kDefaultPointBudget);

// Weighted L2 norms of the mean-subtracted shell profile for K and its dual,
// accumulated over histograms extended to where psi drops below 1e-8.
struct DualityNorms {
  double normK = 0.0;
  double normKstar = 0.0;
};
DualityNorms duality_l2(const Body& K, double q, const Cutoff& cutoff,
                        long long budget = kDefaultPointBudget);

void write_series_csv(const SpectralSeries& s, const std::string& path);

} // namespace latlab
