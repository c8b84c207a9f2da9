#include "latlab/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "latlab/bessel.hpp"
#include "latlab/fourier.hpp"
#include "latlab/parallel.hpp"
#include "latlab/quadrature.hpp"

namespace latlab {
namespace {

constexpr double kPi = std::numbers::pi;

// How a frequency-side term is evaluated. The whole sum shares one form
// because it is a property of the transform body, not of the point.
enum class TermForm { ball, ellipsoid_indicator, stationary_phase };

struct Term {
  double weight = 0.0;         // point multiplicity times the series weight
  double na = 0.0;             // Euclidean length of the frequency vector
  double m = 0.0;              // support value: oscillation rate in t
  double amp = 0.0;            // sqrt(h/kappa), or det(A) for the closed ellipsoid form
  std::array<double, 8> rep{}; // representative point, for the near-zero fallback
};

// A weighted sum of body transforms over a fixed frequency set, evaluated
// at dilates t*a. Sign-symmetric pairs are folded into one term of twice
// the weight (the transforms of +-a are conjugate, so the sum is real);
// for ball and ellipsoid bodies, points sharing (|a|^2, m^2) bit-for-bit
// are merged, which shrinks the term list by orders of magnitude.
struct TransformSum {
  Body transform_body;
  int dim = 0;
  FtKind kind = FtKind::surface;
  TermForm form = TermForm::ball;
  std::vector<Term> terms;
  double max_m = 0.0; // fastest oscillation rate present

  double term_value(const Term& tm, double t) const {
    const double x = t * tm.na;
    switch (form) {
      case TermForm::ball:
        return kind == FtKind::surface ? ft_ball_surface(dim, x) : ft_ball_indicator(dim, x);
      case TermForm::ellipsoid_indicator:
        return tm.amp * ft_ball_indicator(dim, t * tm.m);
      case TermForm::stationary_phase:
        break;
    }
    if (x > 1.0) {
      const double arg = 2.0 * kPi * t * tm.m;
      if (kind == FtKind::surface)
        return 2.0 * kPi * tm.amp * bessel_j(0.5 * dim - 1.0, arg) * std::pow(x, 1.0 - 0.5 * dim);
      return tm.amp * bessel_j(0.5 * dim, arg) * std::pow(x, -0.5 * dim);
    }
    if (dim > 3)
      throw std::runtime_error(
          "TransformSum: no small-frequency evaluation above dimension 3 for this body");
    std::array<double, 8> xi{};
    for (int i = 0; i < dim; ++i) xi[static_cast<std::size_t>(i)] = t * tm.rep[static_cast<std::size_t>(i)];
    return ft_body_direct(transform_body, std::span(xi.data(), static_cast<std::size_t>(dim)), kind)
        .real();
  }

  double eval_range(double t, std::int64_t begin, std::int64_t end) const {
    double acc = 0.0;
    for (std::int64_t i = begin; i < end; ++i)
      acc += terms[static_cast<std::size_t>(i)].weight * term_value(terms[static_cast<std::size_t>(i)], t);
    return acc;
  }

  // Deterministic for any thread count: fixed chunk layout, ordered merge.
  double eval(double t) const {
    const auto n = static_cast<std::int64_t>(terms.size());
    if (n == 0) return 0.0;
    const std::int64_t chunk = std::max<std::int64_t>(64, n / 256);
    std::vector<double> partial(chunk_count(n, chunk), 0.0);
    parallel_chunks(n, chunk, [&](std::size_t c, std::int64_t b, std::int64_t e) {
      partial[c] = eval_range(t, b, e);
    });
    double acc = 0.0;
    for (double p : partial) acc += p;
    return acc;
  }
};

// Collects nonzero integer points inside per-axis bounds that pass `member`,
// one representative per +-pair, and builds the grouped term list. The
// weight of a point is weight_of(|a|), doubled for the sign fold.
//
// Merging is exact, never approximate: points are grouped only under a key
// that the body's own symmetries force to share one transform value. A ball
// term depends on |a|^2 alone; an ellipsoid indicator on the dual gauge m^2
// alone; an ellipsoid surface term on the coordinate pattern up to sign
// flips and permutations within runs of equal axes. Equal inputs yield
// bit-identical doubles, so key comparison by value is safe.
TransformSum build_transform_sum(const Body& transform_body, FtKind kind,
                                 std::span<const long long> bound,
                                 const std::function<bool(std::span<const double>)>& member,
                                 const std::function<double(double)>& weight_of,
                                 long long budget) {
  const int d = transform_body.dim();
  double box_points = 1.0;
  for (long long b : bound) box_points *= 2.0 * static_cast<double>(b) + 1.0;
  if (box_points > static_cast<double>(budget)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "frequency sum needs %.3g candidate points, budget is %lld", box_points, budget);
    throw BudgetError(msg);
  }

  TransformSum sum{transform_body, d, kind, TermForm::stationary_phase, {}, 0.0};
  double p = 0.0;
  std::vector<double> sep_weights;
  std::vector<double> axes;
  if (transform_body.to_string() == "ball") {
    sum.form = TermForm::ball;
  } else if (transform_body.separable(p, sep_weights) && p == 2.0) {
    // gauge^2 = sum w_i x_i^2 is an ellipsoid with semi-axes 1/sqrt(w_i).
    axes.resize(sep_weights.size());
    for (std::size_t i = 0; i < axes.size(); ++i) axes[i] = 1.0 / std::sqrt(sep_weights[i]);
    sum.form =
        kind == FtKind::indicator ? TermForm::ellipsoid_indicator : TermForm::stationary_phase;
  }
  const bool ellipsoid = !axes.empty();
  double det = 1.0;
  for (double a : axes) det *= a;

  std::map<std::vector<double>, std::size_t> merged;
  std::vector<double> key;

  std::vector<long long> c(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = -bound[static_cast<std::size_t>(i)];
  std::vector<double> x(static_cast<std::size_t>(d));
  bool done = false;
  while (!done) {
    int first_nonzero = -1;
    for (int i = 0; i < d; ++i)
      if (c[static_cast<std::size_t>(i)] != 0) {
        first_nonzero = i;
        break;
      }
    if (first_nonzero >= 0 && c[static_cast<std::size_t>(first_nonzero)] > 0) {
      for (int i = 0; i < d; ++i)
        x[static_cast<std::size_t>(i)] = static_cast<double>(c[static_cast<std::size_t>(i)]);
      if (member(x)) {
        double n2 = 0.0;
        for (double v : x) n2 += v * v;
        const double na = std::sqrt(n2);
        const double w = 2.0 * weight_of(na);
        if (w != 0.0) {
          double m = na;
          if (ellipsoid) {
            double m2 = 0.0;
            for (int i = 0; i < d; ++i) {
              const double s = axes[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
              m2 += s * s;
            }
            m = std::sqrt(m2);
          }
          sum.max_m = std::max(sum.max_m, m);

          if (sum.form == TermForm::ball || sum.form == TermForm::ellipsoid_indicator || ellipsoid) {
            key.assign(x.begin(), x.end());
            for (double& v : key) v = std::abs(v);
            if (sum.form == TermForm::ball)
              key.assign(1, n2);
            else if (sum.form == TermForm::ellipsoid_indicator)
              key.assign(1, m * m);
            else
              for (std::size_t i = 0; i < key.size();) { // sort runs of equal axes
                std::size_t j = i + 1;
                while (j < key.size() && axes[j] == axes[i]) ++j;
                std::sort(key.begin() + static_cast<std::ptrdiff_t>(i),
                          key.begin() + static_cast<std::ptrdiff_t>(j));
                i = j;
              }
            auto [it, fresh] = merged.try_emplace(key, sum.terms.size());
            if (!fresh) {
              sum.terms[it->second].weight += w;
            } else {
              Term tm{w, na, m, 0.0, {}};
              if (sum.form == TermForm::ellipsoid_indicator) {
                tm.amp = det;
              } else if (ellipsoid) {
                // Stationary phase for an ellipsoid: kappa = h^{d+1}/det^2
                // at the contact normal, so sqrt(h/kappa) = det * h^{-d/2}.
                const double h = m / na;
                tm.amp = det * std::pow(h, -0.5 * d);
                std::copy(key.begin(), key.end(), tm.rep.begin());
              }
              sum.terms.push_back(tm);
            }
          } else {
            Term tm{w, na, 0.0, 0.0, {}};
            tm.m = transform_body.support(x);
            const double h = tm.m / na;
            tm.amp = std::sqrt(h / transform_body.curvature(x));
            std::copy(x.begin(), x.end(), tm.rep.begin());
            sum.terms.push_back(tm);
          }
        }
      }
    }
    for (int i = 0;; ++i) {
      if (i == d) {
        done = true;
        break;
      }
      auto& ci = c[static_cast<std::size_t>(i)];
      if (++ci <= bound[static_cast<std::size_t>(i)]) break;
      ci = -bound[static_cast<std::size_t>(i)];
    }
  }
  return sum;
}

} // namespace

SpectralSeries poisson_series(const Body& K, double q, const Cutoff& cutoff, SeriesMode mode,
                              std::span<const double> tgrid, double R, long long budget) {
  const int d = K.dim();
  if (cutoff.dim() != d) throw std::invalid_argument("poisson_series: cutoff dimension mismatch");
  if (!(q >= 1.0)) throw std::invalid_argument("poisson_series: q must be >= 1");
  if (tgrid.empty()) throw std::invalid_argument("poisson_series: empty t grid");
  for (double t : tgrid)
    if (!(t > 1.0 / q && t < q - 1.0 / q))
      throw std::invalid_argument("poisson_series: t outside the window (1/q, q - 1/q)");
  if (R <= 0.0) R = 8.0 * q;

  SpectralSeries out;
  out.body = K.to_string();
  out.q = q;
  out.R = R;
  out.mode = mode;
  out.t.assign(tgrid.begin(), tgrid.end());
  out.value.assign(tgrid.size(), 0.0);
  if (R < 1.0) return out; // no nonzero integer point survives

  const auto bnd = static_cast<long long>(std::floor(R));
  std::vector<long long> bound(static_cast<std::size_t>(d), bnd);
  const double r2 = R * R;
  auto member = [r2](std::span<const double> x) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return n2 <= r2;
  };
  auto weight = [&](double na) { return cutoff.psi(na / q); };
  const FtKind kind = mode == SeriesMode::nu ? FtKind::surface : FtKind::indicator;
  const TransformSum sum = build_transform_sum(K, kind, bound, member, weight, budget);

  const double expo = mode == SeriesMode::nu ? 0.5 * (d - 1) : 0.5 * (d + 1);
  for (std::size_t k = 0; k < out.t.size(); ++k) {
    const double t = out.t[k];
    out.value[k] = cutoff(t / q) * std::pow(t, expo) * sum.eval(t);
  }
  return out;
}

double mattila_integral(const Body& K, double q, const Cutoff& cutoff, double r_max,
                        long long budget) {
  const int d = K.dim();
  if (cutoff.dim() != d) throw std::invalid_argument("mattila_integral: cutoff dimension mismatch");
  if (!(q >= 1.0)) throw std::invalid_argument("mattila_integral: q must be >= 1");
  if (r_max <= 0.0) r_max = 8.0 * q;
  // The integrand carries psi(r/q)^2; demand that the certified tail beyond
  // r_max is below 1e-6 of the peak so truncation cannot move the value.
  const double tail = cutoff.decay_constant() * std::pow(1.0 + r_max / q, -Cutoff::decay_order);
  if (!(tail * tail <= 1e-6))
    throw std::invalid_argument("mattila_integral: r_max stops short of the certified psi decay");

  const Body dual = K.dual();
  const auto bnd = static_cast<long long>(std::floor(q * K.outer_radius()));
  std::vector<long long> bound(static_cast<std::size_t>(d), std::max<long long>(bnd, 0));
  auto member = [&](std::span<const double> x) { return K.gauge(x) <= q; };
  auto weight = [](double) { return 1.0; };
  const TransformSum sum =
      build_transform_sum(dual, FtKind::surface, bound, member, weight, budget);

  // S(r) oscillates at rates up to max_m, and S^2 at up to twice that; one
  // panel per unit of r*max_m keeps 16-point Gauss comfortably converged.
  // The last summand tracks the knot density of the interpolated psi, whose
  // piecewise-cubic seams otherwise cap the accuracy near 1e-6.
  const auto panels = static_cast<std::int64_t>(8 + std::ceil(r_max * std::max(sum.max_m, 1.0)) +
                                                std::ceil(8.0 * r_max / q));
  const GaussRule& rule = gauss_legendre(16);
  const double width = r_max / static_cast<double>(panels);
  const std::int64_t chunk = std::max<std::int64_t>(1, panels / 256);
  std::vector<double> partial(chunk_count(panels, chunk), 0.0);
  parallel_chunks(panels, chunk, [&](std::size_t ci, std::int64_t b, std::int64_t e) {
    double acc = 0.0;
    for (std::int64_t pi = b; pi < e; ++pi) {
      const double lo = static_cast<double>(pi) * width;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double r = lo + 0.5 * width * (rule.x[i] + 1.0);
        const double psi = cutoff(r / q);
        if (psi == 0.0) continue;
        const double s = sum.eval_range(r, 0, static_cast<std::int64_t>(sum.terms.size()));
        acc += 0.5 * width * rule.w[i] * std::pow(r, d - 1) * psi * psi * s * s;
      }
    }
    partial[ci] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

DualityNorms duality_l2(const Body& K, double q, const Cutoff& cutoff, long long budget) {
  const int d = K.dim();
  if (cutoff.dim() != d) throw std::invalid_argument("duality_l2: cutoff dimension mismatch");
  if (!(q >= 1.0)) throw std::invalid_argument("duality_l2: q must be >= 1");
  const double delta = 1.0 / (2.0 * q);
  const double t_max = q * cutoff.truncation_radius(1e-8);

  auto norm_of = [&](const Body& B) {
    const ShellHistogram hist = shell_histogram(B, q, delta, t_max, budget);
    const double vol = B.volume();
    double acc = 0.0;
    for (std::size_t k = 0; k < hist.counts.size(); ++k) {
      const double tk = 0.5 * (hist.t_lo(k) + hist.t_hi(k));
      const double expected = vol * (std::pow(hist.t_hi(k), d) - std::pow(hist.t_lo(k), d));
      const double nu = cutoff(tk / q) * std::pow(tk, 0.5 * (1.0 - d)) * q *
                        (static_cast<double>(hist.counts[k]) - expected);
      acc += nu * nu;
    }
    return std::sqrt(delta * acc);
  };

  DualityNorms norms;
  norms.normK = norm_of(K);
  norms.normKstar = norm_of(K.dual());
  return norms;
}

void write_series_csv(const SpectralSeries& s, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_series_csv: cannot open " + path);
  os << "t,value,R\n";
  char line[128];
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g\n", s.t[k], s.value[k], s.R);
    os << line;
  }
}

} // namespace latlab
