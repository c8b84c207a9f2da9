#include "latlab/profile.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace latlab {

DistanceProfile build_profile(const ShellHistogram& hist, const Body& body) {
  if (hist.dim != body.dim()) {
    throw std::invalid_argument("build_profile: histogram dimension does not match the body");
  }
  DistanceProfile p;
  p.q = hist.q;
  p.delta = hist.delta;
  p.dim = hist.dim;
  p.volume = body.volume();
  p.body = body.to_string();
  p.gamma = hist.counts;

  const std::size_t n = hist.counts.size();
  p.t.resize(n);
  p.nu0.resize(n);
  p.N0.resize(n);
  p.E0.resize(n);
  p.nu_w.resize(n);
  p.E_w.resize(n);

  double cum = 1.0; // the origin, excluded from the histogram
  const double wexp = 0.5 * (1.0 - p.dim);
  for (std::size_t k = 0; k < n; ++k) {
    double tk = (static_cast<double>(k) + 0.5) * p.delta;
    cum += static_cast<double>(hist.counts[k]);
    p.t[k] = tk;
    p.nu0[k] = p.q * static_cast<double>(hist.counts[k]);
    p.N0[k] = cum;
    p.E0[k] = cum - std::pow(tk, p.dim) * p.volume;
    double w = std::pow(tk, wexp);
    p.nu_w[k] = w * p.nu0[k];
    p.E_w[k] = w * p.E0[k];
    if (tk <= p.q) p.q_buckets = k + 1;
  }
  return p;
}

double discrepancy_at(const DistanceProfile& p, double t) {
  if (!(t > 0.0) || p.t.empty()) throw std::invalid_argument("discrepancy_at: t must be positive");
  std::size_t k = static_cast<std::size_t>(t / p.delta);
  if (k >= p.t.size()) throw std::invalid_argument("discrepancy_at: t beyond the profile range");
  return p.N0[k] - std::pow(t, p.dim) * p.volume;
}

L1Mass l1_mass(const DistanceProfile& p) {
  // Include the bucket straddling t = q: it holds the gauge-exactly-q shell,
  // so for a default histogram the mass is the exact point count.
  std::size_t last = std::min(static_cast<std::size_t>(p.q / p.delta), p.gamma.size() - 1);
  double mass = 0.0;
  for (std::size_t k = 0; k <= last; ++k) mass += static_cast<double>(p.gamma[k]);
  L1Mass out;
  out.mass = mass;
  out.ratio = mass / (p.volume * std::pow(p.q, p.dim));
  return out;
}

MeanSquare mean_square(const DistanceProfile& p) {
  double sg = 0.0, se = 0.0;
  for (std::size_t k = 0; k < p.q_buckets; ++k) {
    double g = static_cast<double>(p.gamma[k]);
    sg += g * g;
    se += p.E0[k] * p.E0[k];
  }
  MeanSquare out;
  out.D_A = std::sqrt(sg) / p.q;
  out.D_K = std::sqrt(se) / p.q;
  return out;
}

double l2_weighted_nu(const DistanceProfile& p) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.q_buckets; ++k) s += p.nu_w[k] * p.nu_w[k];
  return s * p.delta;
}

L2N l2_weighted_N(const DistanceProfile& p) {
  if (p.dim < 3) {
    throw std::invalid_argument("l2_weighted_N: the weighted count is not square-integrable "
                                "in the plane; d >= 3 required");
  }
  double s = 0.0;
  const double wexp = 1.0 - p.dim; // squared weight
  for (std::size_t k = 0; k < p.q_buckets; ++k) {
    s += std::pow(p.t[k], wexp) * p.N0[k] * p.N0[k];
  }
  L2N out;
  out.value = s * p.delta;
  out.ratio = out.value / std::pow(p.q, p.dim + 2);
  return out;
}

CauchySchwarz cauchy_schwarz_support(const DistanceProfile& p) {
  double sum = 0.0, sum2 = 0.0;
  long long occ = 0;
  for (std::size_t k = 0; k < p.q_buckets; ++k) {
    double g = static_cast<double>(p.gamma[k]);
    sum += g;
    sum2 += g * g;
    occ += p.gamma[k] > 0 ? 1 : 0;
  }
  CauchySchwarz out;
  out.lhs = sum * sum;
  out.rhs = static_cast<double>(occ) * sum2;
  out.support_size = occ;
  return out;
}

double landau_ratio(const DistanceProfile& p) {
  const double a = p.dim - 2.0 + 2.0 / (p.dim - 1.0);
  double worst = 0.0;
  for (std::size_t k = 0; k < p.q_buckets; ++k) {
    double tk = p.t[k];
    if (tk < 1.0) continue;
    double envelope = std::pow(tk, a) + std::pow(tk, p.dim - 1.0) / p.q;
    worst = std::max(worst, std::abs(p.E0[k]) / envelope);
  }
  return worst;
}

void write_profile_csv(const DistanceProfile& p, std::ostream& os) {
  os << "t,nu0,N0,E0,nu_w,E_w\n";
  char line[160];
  for (std::size_t k = 0; k < p.t.size(); ++k) {
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", p.t[k], p.nu0[k],
                  p.N0[k], p.E0[k], p.nu_w[k], p.E_w[k]);
    os << line;
  }
}

} // namespace latlab
