#include "latlab/fourier.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "latlab/bessel.hpp"
#include "latlab/quadrature.hpp"

namespace latlab {

namespace {

const double kPi = std::acos(-1.0);
const double kTwoPi = 2.0 * std::acos(-1.0);

// Cap on quadrature nodes per direct transform call.
constexpr std::size_t kNodeBudget = 8'000'000;

// Nodes resolving the oscillation count `cycles` at >= 20 nodes each, plus a
// floor for the smooth shape factors.
std::size_t osc_nodes(double cycles, std::size_t floor_nodes) {
  return floor_nodes + 48 * static_cast<std::size_t>(std::ceil(std::max(cycles, 0.0) + 1.0));
}

// int_0^R r^k exp(-i b r) dr for k = 1, 2. Closed antiderivative away from
// b R ~ 0, power series inside to dodge the cancellation.
std::complex<double> radial_moment(int k, double R, double b) {
  const std::complex<double> i(0.0, 1.0);
  const double bR = std::abs(b) * R;
  if (bR <= 0.5) {
    std::complex<double> sum = 0.0;
    std::complex<double> coef = 1.0; // (-i b)^j / j!
    double rpow = std::pow(R, k + 1);
    for (int j = 0;; ++j) {
      const std::complex<double> term = coef * rpow / static_cast<double>(j + k + 1);
      sum += term;
      if (std::abs(term) < 1e-20 * std::pow(R, k + 1) && j > 2) break;
      if (j > 40) break;
      coef *= -i * b / static_cast<double>(j + 1);
      rpow *= R;
    }
    return sum;
  }
  const std::complex<double> e = std::exp(-i * b * R);
  if (k == 1) return e * (i * R / b + 1.0 / (b * b)) - 1.0 / (b * b);
  return e * (i * R * R / b + 2.0 * R / (b * b) - 2.0 * i / (b * b * b)) + 2.0 * i / (b * b * b);
}

std::complex<double> direct_2d(const Body& K, std::span<const double> xi, FtKind kind) {
  const double r = std::hypot(xi[0], xi[1]);
  const std::size_t n = osc_nodes(2.0 * r * K.outer_radius(), 256);
  if (n > kNodeBudget) throw std::runtime_error("ft_body_direct: oscillation node budget exceeded");
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> total = 0.0;
  std::vector<double> u(2), du(2);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    u[0] = std::cos(a);
    u[1] = std::sin(a);
    const double g = K.gauge(u);
    const double rho = 1.0 / g;
    if (kind == FtKind::surface) {
      du[0] = -u[1];
      du[1] = u[0];
      const auto grad = K.gauge_grad(u);
      const double dg = grad[0] * du[0] + grad[1] * du[1];
      const double speed = std::hypot(rho, dg * rho * rho);
      const double phase = -kTwoPi * rho * (xi[0] * u[0] + xi[1] * u[1]);
      total += speed * std::exp(i * phase);
    } else {
      total += radial_moment(1, rho, kTwoPi * (xi[0] * u[0] + xi[1] * u[1]));
    }
  }
  return total * (kTwoPi / static_cast<double>(n));
}

std::complex<double> direct_3d(const Body& K, std::span<const double> xi, FtKind kind) {
  const double r = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  const double outer = K.outer_radius();
  const std::size_t n_chi = osc_nodes(2.0 * r * outer, 64);
  const std::size_t n_lam = osc_nodes(r * (outer - K.inner_radius()), 64);
  if (n_chi * n_lam > kNodeBudget)
    throw std::runtime_error("ft_body_direct: oscillation node budget exceeded");

  // Orthonormal frame with e3 along xi (any axis for xi = 0); the polar angle
  // then carries all of the fast oscillation.
  std::vector<double> e3 = {0.0, 0.0, 1.0};
  if (r > 0.0)
    for (int k = 0; k < 3; ++k) e3[k] = xi[k] / r;
  int small = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(e3[k]) < std::abs(e3[small])) small = k;
  std::vector<double> e1(3, 0.0);
  e1[small] = 1.0;
  const double proj = e1[0] * e3[0] + e1[1] * e3[1] + e1[2] * e3[2];
  for (int k = 0; k < 3; ++k) e1[k] -= proj * e3[k];
  const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (int k = 0; k < 3; ++k) e1[k] /= n1;
  const std::vector<double> e2 = {e3[1] * e1[2] - e3[2] * e1[1], e3[2] * e1[0] - e3[0] * e1[2],
                                  e3[0] * e1[1] - e3[1] * e1[0]};

  const auto& rule = gauss_legendre(24);
  const std::size_t panels = (n_chi + 23) / 24;
  const double width = kPi / static_cast<double>(panels);
  const std::complex<double> i(0.0, 1.0);
  std::complex<double> total = 0.0;
  std::vector<double> u(3);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * width;
    for (std::size_t a = 0; a < rule.x.size(); ++a) {
      const double chi = mid + 0.5 * width * rule.x[a];
      const double wchi = 0.5 * width * rule.w[a] * std::sin(chi);
      const double cc = std::cos(chi), sc = std::sin(chi);
      std::complex<double> ring = 0.0;
      for (std::size_t l = 0; l < n_lam; ++l) {
        const double lam = kTwoPi * static_cast<double>(l) / static_cast<double>(n_lam);
        const double cl = std::cos(lam), sl = std::sin(lam);
        for (int k = 0; k < 3; ++k) u[k] = sc * (cl * e1[k] + sl * e2[k]) + cc * e3[k];
        const double g = K.gauge(u);
        const double rho = 1.0 / g;
        const double beta = kTwoPi * r * cc; // 2 pi xi . u
        if (kind == FtKind::surface) {
          const auto grad = K.gauge_grad(u);
          const double gu = grad[0] * u[0] + grad[1] * u[1] + grad[2] * u[2];
          double tang2 = 0.0;
          for (int k = 0; k < 3; ++k) {
            const double t = grad[k] - gu * u[k];
            tang2 += t * t;
          }
          const double area = rho * rho * std::sqrt(1.0 + tang2 / (g * g));
          ring += area * std::exp(-i * beta * rho);
        } else {
          ring += radial_moment(2, rho, beta);
        }
      }
      total += wchi * ring * (kTwoPi / static_cast<double>(n_lam));
    }
  }
  return total;
}

// Fitted scalar coefficient of the second asymptotic term, cached per body
// and measure kind.
double correction_coefficient(const Body& K, FtKind kind) {
  static std::mutex mu;
  static std::map<std::string, double> cache;
  const std::string key =
      K.to_string() + (kind == FtKind::surface ? "#s" : "#i") + "@" + std::to_string(K.dim());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const int d = K.dim();
  std::vector<std::vector<double>> dirs;
  if (d == 2) {
    for (double a : {0.3, 1.1, 1.9, 2.6}) dirs.push_back({std::cos(a), std::sin(a)});
  } else {
    dirs = {{1.0, 0.2, -0.3}, {-0.4, 1.0, 0.5}, {0.2, -0.7, 1.0}, {0.6, 0.6, 0.6}};
    for (auto& v : dirs) {
      const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (auto& c : v) c /= n;
    }
  }
  const int nf = d == 2 ? 40 : 24;
  double num = 0.0, den = 0.0;
  std::vector<double> xi(d);
  for (const auto& dir : dirs) {
    for (int j = 0; j < nf; ++j) {
      const double t =
          10.0 * std::pow(4.0, static_cast<double>(j) / static_cast<double>(nf - 1));
      for (int k = 0; k < d; ++k) xi[k] = t * dir[k];
      const double direct = ft_body_direct(K, xi, kind).real();
      const double lead = ft_body_asymptotic(K, xi, kind, 1);
      const double m = K.support(xi);
      const double basis = kind == FtKind::surface
                               ? bessel_j(0.5 * d, kTwoPi * m) * std::pow(t, -0.5 * d)
                               : bessel_j(0.5 * d + 1.0, kTwoPi * m) * std::pow(t, -0.5 * d - 1.0);
      num += (direct - lead) * basis;
      den += basis * basis;
    }
  }
  const double coeff = den > 0.0 ? num / den : 0.0;
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, coeff);
  return coeff;
}

} // namespace

double ft_ball_surface(int dim, double r) {
  if (dim < 2 || dim > 8) throw std::invalid_argument("ft_ball_surface: dimension out of range");
  if (r < 0.0) r = -r;
  return std::pow(kTwoPi, 0.5 * dim) * bessel_jt(0.5 * dim - 1.0, kTwoPi * r);
}

double ft_ball_indicator(int dim, double r) {
  if (dim < 2 || dim > 8) throw std::invalid_argument("ft_ball_indicator: dimension out of range");
  if (r < 0.0) r = -r;
  return std::pow(kTwoPi, 0.5 * dim) * bessel_jt(0.5 * dim, kTwoPi * r);
}

double ft_ellipsoid_indicator(std::span<const double> axes, std::span<const double> xi) {
  if (axes.size() != xi.size() || axes.size() < 2)
    throw std::invalid_argument("ft_ellipsoid_indicator: dimension mismatch");
  double det = 1.0, s2 = 0.0;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    det *= axes[k];
    s2 += axes[k] * xi[k] * axes[k] * xi[k];
  }
  return det * ft_ball_indicator(static_cast<int>(axes.size()), std::sqrt(s2));
}

std::complex<double> ft_body_direct(const Body& K, std::span<const double> xi, FtKind kind) {
  const int d = K.dim();
  if (d != 2 && d != 3)
    throw std::invalid_argument("ft_body_direct: only dimensions 2 and 3 are supported");
  if (static_cast<int>(xi.size()) != d)
    throw std::invalid_argument("ft_body_direct: frequency dimension mismatch");
  double r2 = 0.0;
  for (double c : xi) r2 += c * c;
  if (r2 > 50.0 * 50.0 * (1.0 + 1e-12))
    throw std::invalid_argument("ft_body_direct: |xi| must be at most 50");
  return d == 2 ? direct_2d(K, xi, kind) : direct_3d(K, xi, kind);
}

double ft_body_asymptotic(const Body& K, std::span<const double> xi, FtKind kind, int terms) {
  const int d = K.dim();
  if (static_cast<int>(xi.size()) != d)
    throw std::invalid_argument("ft_body_asymptotic: frequency dimension mismatch");
  if (terms != 1 && terms != 2)
    throw std::invalid_argument("ft_body_asymptotic: terms must be 1 or 2");
  double r2 = 0.0;
  for (double c : xi) r2 += c * c;
  const double r = std::sqrt(r2);
  if (!(r > 1.0)) throw std::invalid_argument("ft_body_asymptotic: requires |xi| > 1");
  if (terms == 2 && d > 3)
    throw std::invalid_argument("ft_body_asymptotic: correction needs a direct reference (dim <= 3)");

  std::vector<double> theta(xi.begin(), xi.end());
  for (auto& c : theta) c /= r;
  const double m = K.support(xi); // dual gauge of xi
  const double h = m / r;
  const double kappa = K.curvature(theta);
  const double amp = std::sqrt(h / kappa);

  double value;
  if (kind == FtKind::surface)
    value = kTwoPi * amp * bessel_j(0.5 * d - 1.0, kTwoPi * m) * std::pow(r, 1.0 - 0.5 * d);
  else
    value = amp * bessel_j(0.5 * d, kTwoPi * m) * std::pow(r, -0.5 * d);
  if (terms == 2) {
    const double coeff = correction_coefficient(K, kind);
    if (kind == FtKind::surface)
      value += coeff * bessel_j(0.5 * d, kTwoPi * m) * std::pow(r, -0.5 * d);
    else
      value += coeff * bessel_j(0.5 * d + 1.0, kTwoPi * m) * std::pow(r, -0.5 * d - 1.0);
  }
  return value;
}

} // namespace latlab
