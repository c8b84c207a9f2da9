#include "latlab/body.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "latlab/quadrature.hpp"

namespace latlab {
namespace detail {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double unit_ball_volume(int d) {
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double sphere_area(int d) { return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d); }

} // namespace

class BodyImpl {
public:
  virtual ~BodyImpl() = default;

  int dim() const { return dim_; }
  double volume() const { return volume_; }
  double inner_radius() const { return inner_; }
  double outer_radius() const { return outer_; }

  virtual double gauge(std::span<const double> x) const = 0;
  virtual void gauge_grad(std::span<const double> x, std::span<double> out) const = 0;
  // Closed-form support; returns false when only the ascent path exists.
  virtual bool closed_support(std::span<const double> x, double* value,
                              std::span<double> maximizer) const {
    (void)x;
    (void)value;
    (void)maximizer;
    return false;
  }
  virtual bool separable(double& p, std::vector<double>& weights) const {
    (void)p;
    (void)weights;
    return false;
  }
  virtual std::string to_string() const = 0;
  virtual std::shared_ptr<const BodyImpl> base() const { return nullptr; }

  double support_value(std::span<const double> x) const;
  SupportResult support_full(std::span<const double> x) const;

protected:
  explicit BodyImpl(int dim) : dim_(dim) {
    if (dim < 2 || dim > 8) throw std::invalid_argument("body dimension must be in [2, 8]");
  }

  // Surface quadrature of rho(theta)^d / d over the unit sphere; product
  // Gauss-Legendre/trapezoid grids for d <= 4, Halton QMC above.
  double volume_by_quadrature() const;

  int dim_;
  double volume_ = 0.0;
  double inner_ = 0.0;
  double outer_ = 0.0;
};

namespace {

// Multistart projected gradient ascent for f(u) = (x . u) / gauge(u) on the
// unit sphere; the maximum equals sup_{y in K} x . y with maximizer
// u / gauge(u).
SupportResult ascent_impl(const BodyImpl& K, std::span<const double> x) {
  const int d = K.dim();
  SupportResult res;
  res.maximizer.assign(d, 0.0);
  double xn = norm2(x);
  if (xn == 0.0) return res;
  const double fscale = xn * K.outer_radius();
  const double tol = 1e-12 * fscale;

  std::vector<std::vector<double>> starts;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(d, 0.0);
    e[i] = 1.0;
    starts.push_back(e);
    e[i] = -1.0;
    starts.push_back(e);
  }
  {
    std::vector<double> xh(x.begin(), x.end());
    for (double& v : xh) v /= xn;
    starts.push_back(xh);
    for (double& v : xh) v = -v;
    starts.push_back(xh);
  }
  std::mt19937_64 rng(0x5eed5eedULL + 977u * static_cast<unsigned>(d));
  std::normal_distribution<double> gauss;
  while (static_cast<int>(starts.size()) < 8 * d) {
    std::vector<double> u(d);
    double n = 0.0;
    for (double& v : u) {
      v = gauss(rng);
      n += v * v;
    }
    n = std::sqrt(n);
    if (n < 1e-12) continue;
    for (double& v : u) v /= n;
    starts.push_back(u);
  }

  auto fval = [&](const std::vector<double>& u) { return dot(x, u) / K.gauge(u); };

  double best_f = -INFINITY, best_grad = INFINITY;
  std::vector<double> best_u(d, 0.0);
  std::vector<double> grad(d), gt(d), trial(d);
  int total_iter = 0;

  for (auto& u0 : starts) {
    std::vector<double> u = u0;
    double fu = fval(u);
    double alpha = 0.5;
    double gn = INFINITY;
    for (int iter = 0; iter < 300; ++iter) {
      ++total_iter;
      double g = K.gauge(u);
      K.gauge_grad(u, grad);
      double xu = dot(x, u);
      // grad f = x / g - (x.u) grad g / g^2, projected onto the tangent.
      for (int i = 0; i < d; ++i) grad[i] = x[i] / g - xu * grad[i] / (g * g);
      double gu = dot(grad, u);
      gn = 0.0;
      for (int i = 0; i < d; ++i) {
        gt[i] = grad[i] - gu * u[i];
        gn += gt[i] * gt[i];
      }
      gn = std::sqrt(gn);
      if (gn <= tol) break;
      bool advanced = false;
      double a = std::min(2.0 * alpha, 1.0);
      for (int bt = 0; bt < 60; ++bt) {
        double nrm = 0.0;
        for (int i = 0; i < d; ++i) {
          trial[i] = u[i] + a * gt[i];
          nrm += trial[i] * trial[i];
        }
        nrm = std::sqrt(nrm);
        for (int i = 0; i < d; ++i) trial[i] /= nrm;
        double ft = fval(trial);
        if (ft > fu) {
          u = trial;
          fu = ft;
          alpha = a;
          advanced = true;
          break;
        }
        a *= 0.5;
      }
      if (!advanced) break;
    }
    if (fu > best_f) {
      best_f = fu;
      best_u = u;
      best_grad = gn;
    }
  }

  // Gradient ascent stalls on nearly flat ridges (e.g. quartic support
  // profiles near axis directions); polish the winner with derivative-free
  // golden-section sweeps along tangent great circles.
  {
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    std::vector<double> v(d), w(d);
    for (int round = 0; round < 2; ++round) {
      for (int axis = 0; axis < d; ++axis) {
        // Tangent direction from coordinate axis, skip near-parallel ones.
        double proj = best_u[axis];
        double vn = 0.0;
        for (int i = 0; i < d; ++i) {
          v[i] = (i == axis ? 1.0 : 0.0) - proj * best_u[i];
          vn += v[i] * v[i];
        }
        vn = std::sqrt(vn);
        if (vn < 1e-8) continue;
        for (int i = 0; i < d; ++i) v[i] /= vn;
        auto eval = [&](double t) {
          double ct = std::cos(t), st = std::sin(t);
          for (int i = 0; i < d; ++i) w[i] = ct * best_u[i] + st * v[i];
          return fval(w);
        };
        double lo = -0.2, hi = 0.2;
        double m1 = hi - golden * (hi - lo), m2 = lo + golden * (hi - lo);
        double f1 = eval(m1), f2 = eval(m2);
        for (int it = 0; it < 60; ++it) {
          if (f1 < f2) {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + golden * (hi - lo);
            f2 = eval(m2);
          } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - golden * (hi - lo);
            f1 = eval(m1);
          }
        }
        double t = f1 > f2 ? m1 : m2;
        double ft = f1 > f2 ? f1 : f2;
        if (ft > best_f) {
          double ct = std::cos(t), st = std::sin(t);
          for (int i = 0; i < d; ++i) best_u[i] = ct * best_u[i] + st * v[i];
          double nn = norm2(best_u);
          for (int i = 0; i < d; ++i) best_u[i] /= nn;
          best_f = fval(best_u);
        }
      }
    }
  }

  res.value = best_f;
  res.iterations = total_iter;
  res.converged = best_grad <= 1e-7 * fscale;
  double g = K.gauge(best_u);
  for (int i = 0; i < d; ++i) res.maximizer[i] = best_u[i] / g;
  return res;
}

} // namespace

double BodyImpl::support_value(std::span<const double> x) const {
  double v;
  std::vector<double> m(dim_);
  if (closed_support(x, &v, m)) return v;
  return ascent_impl(*this, x).value;
}

SupportResult BodyImpl::support_full(std::span<const double> x) const {
  double v;
  SupportResult res;
  res.maximizer.assign(dim_, 0.0);
  if (closed_support(x, &v, res.maximizer)) {
    res.value = v;
    return res;
  }
  return ascent_impl(*this, x);
}

double BodyImpl::volume_by_quadrature() const {
  const int d = dim_;
  auto rho_pow = [&](const std::vector<double>& u) {
    double g = gauge(u);
    return std::pow(1.0 / g, d);
  };

  if (d == 2) {
    int n = 4096;
    double sum = 0.0;
    std::vector<double> u(2);
    for (int i = 0; i < n; ++i) {
      double a = 2.0 * M_PI * i / n;
      u[0] = std::cos(a);
      u[1] = std::sin(a);
      sum += rho_pow(u);
    }
    return sum * (2.0 * M_PI / n) / d;
  }

  if (d <= 4) {
    // Product grid over spherical angles; polar angles carry sin^k weights.
    const GaussRule& polar = gauss_legendre(64);
    int n_az = 128;
    double sum = 0.0;
    std::vector<double> u(d);
    // Iterate all combinations of polar nodes; innermost azimuth loop.
    std::vector<double> chi(d - 2);
    std::function<void(int, double)> recurse = [&](int level, double wacc) {
      if (level == d - 2) {
        for (int j = 0; j < n_az; ++j) {
          double lam = 2.0 * M_PI * j / n_az;
          double sins = 1.0;
          for (int k = 0; k < d - 2; ++k) {
            u[k] = sins * std::cos(chi[k]);
            sins *= std::sin(chi[k]);
          }
          u[d - 2] = sins * std::cos(lam);
          u[d - 1] = sins * std::sin(lam);
          sum += wacc * (2.0 * M_PI / n_az) * rho_pow(u);
        }
        return;
      }
      for (int i = 0; i < 64; ++i) {
        double c = 0.5 * M_PI * (polar.x[i] + 1.0);
        double w = 0.5 * M_PI * polar.w[i];
        int sin_pow = d - 2 - level;
        chi[level] = c;
        recurse(level + 1, wacc * w * std::pow(std::sin(c), sin_pow));
      }
    };
    recurse(0, 1.0);
    return sum / d;
  }

  // Halton QMC directions through Box-Muller.
  auto radical = [](std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= base;
      r += f * (i % base);
      i /= base;
    }
    return r;
  };
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const int pairs = (d + 1) / 2;
  const std::uint64_t n = 1 << 16;
  double sum = 0.0;
  std::vector<double> u(d);
  for (std::uint64_t i = 1; i <= n; ++i) {
    for (int p = 0; p < pairs; ++p) {
      double u1 = radical(i + 1000, primes[2 * p]);
      double u2 = radical(i + 1000, primes[2 * p + 1]);
      u1 = std::max(u1, 1e-12);
      double r = std::sqrt(-2.0 * std::log(u1));
      if (2 * p < d) u[2 * p] = r * std::cos(2.0 * M_PI * u2);
      if (2 * p + 1 < d) u[2 * p + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    double nn = norm2(u);
    if (nn < 1e-12) continue;
    for (double& v : u) v /= nn;
    sum += rho_pow(u);
  }
  return sum / n * sphere_area(d) / d;
}

namespace {

class BallImpl final : public BodyImpl {
public:
  explicit BallImpl(int dim) : BodyImpl(dim) {
    volume_ = unit_ball_volume(dim);
    inner_ = outer_ = 1.0;
  }
  double gauge(std::span<const double> x) const override { return norm2(x); }
  void gauge_grad(std::span<const double> x, std::span<double> out) const override {
    double n = norm2(x);
    for (int i = 0; i < dim_; ++i) out[i] = n > 0 ? x[i] / n : 0.0;
  }
  bool closed_support(std::span<const double> x, double* value,
                      std::span<double> maximizer) const override {
    double n = norm2(x);
    *value = n;
    for (int i = 0; i < dim_; ++i) maximizer[i] = n > 0 ? x[i] / n : 0.0;
    return true;
  }
  bool separable(double& p, std::vector<double>& w) const override {
    p = 2.0;
    w.assign(dim_, 1.0);
    return true;
  }
  std::string to_string() const override { return "ball"; }
};

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << format_double(v[i]);
  }
  return os.str();
}

class EllipsoidImpl final : public BodyImpl {
public:
  explicit EllipsoidImpl(std::vector<double> axes)
      : BodyImpl(static_cast<int>(axes.size())), a_(std::move(axes)) {
    for (double a : a_) {
      if (!(a > 0.0)) throw std::invalid_argument("ellipsoid semi-axes must be positive");
    }
    volume_ = unit_ball_volume(dim_);
    for (double a : a_) volume_ *= a;
    inner_ = *std::min_element(a_.begin(), a_.end());
    outer_ = *std::max_element(a_.begin(), a_.end());
  }
  double gauge(std::span<const double> x) const override {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double t = x[i] / a_[i];
      s += t * t;
    }
    return std::sqrt(s);
  }
  void gauge_grad(std::span<const double> x, std::span<double> out) const override {
    double g = gauge(x);
    for (int i = 0; i < dim_; ++i) out[i] = g > 0 ? x[i] / (a_[i] * a_[i] * g) : 0.0;
  }
  bool closed_support(std::span<const double> x, double* value,
                      std::span<double> maximizer) const override {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double t = a_[i] * x[i];
      s += t * t;
    }
    double v = std::sqrt(s);
    *value = v;
    for (int i = 0; i < dim_; ++i) maximizer[i] = v > 0 ? a_[i] * a_[i] * x[i] / v : 0.0;
    return true;
  }
  bool separable(double& p, std::vector<double>& w) const override {
    p = 2.0;
    w.resize(dim_);
    for (int i = 0; i < dim_; ++i) w[i] = 1.0 / (a_[i] * a_[i]);
    return true;
  }
  std::string to_string() const override { return "ellipsoid:" + format_list(a_); }
  const std::vector<double>& axes() const { return a_; }

private:
  std::vector<double> a_;
};

class SuperellipsoidImpl final : public BodyImpl {
public:
  SuperellipsoidImpl(int p, std::vector<double> scales)
      : BodyImpl(static_cast<int>(scales.size())), p_(p), a_(std::move(scales)) {
    if (p < 2 || p > 8 || p % 2 != 0) {
      throw std::invalid_argument("superellipsoid exponent must be even in [2, 8]");
    }
    for (double a : a_) {
      if (!(a > 0.0)) throw std::invalid_argument("superellipsoid scales must be positive");
    }
    inner_ = *std::min_element(a_.begin(), a_.end());
    outer_ = *std::max_element(a_.begin(), a_.end()) *
             std::pow(static_cast<double>(dim_), 0.5 - 1.0 / p_);
    volume_ = volume_by_quadrature();
  }
  double gauge(std::span<const double> x) const override {
    // Scale by the max term so large exponents stay in range.
    double m = 0.0;
    for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(x[i]) / a_[i]);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      double t = std::abs(x[i]) / (a_[i] * m);
      double tp = t * t;
      for (int k = 2; k < p_; k += 2) tp *= t * t;
      s += tp;
    }
    return m * std::pow(s, 1.0 / p_);
  }
  void gauge_grad(std::span<const double> x, std::span<double> out) const override {
    double g = gauge(x);
    if (g == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    // grad_i = g^{1-p} (x_i/a_i)^{p-1} / a_i; the ratio form stays in range.
    for (int i = 0; i < dim_; ++i) {
      double t = x[i] / a_[i];
      double tp = 1.0;
      for (int k = 1; k < p_; ++k) tp *= t / g;
      out[i] = tp / a_[i];
    }
  }
  bool separable(double& p, std::vector<double>& w) const override {
    p = p_;
    w.resize(dim_);
    for (int i = 0; i < dim_; ++i) w[i] = std::pow(a_[i], -static_cast<double>(p_));
    return true;
  }
  std::string to_string() const override {
    return "superellipsoid:" + std::to_string(p_) + ":" + format_list(a_);
  }

private:
  int p_;
  std::vector<double> a_;
};

class RadialImpl final : public BodyImpl {
public:
  RadialImpl(int dim, double eps, std::uint64_t seed)
      : BodyImpl(dim), eps_(eps), seed_(seed) {
    if (!(eps >= 0.0 && eps <= 0.5)) {
      throw std::invalid_argument("radial perturbation eps must be in [0, 0.5]");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const int terms = 4;
    double csum = 0.0;
    for (int j = 0; j < terms; ++j) {
      std::vector<double> u(dim);
      double n = 0.0;
      for (double& v : u) {
        v = gauss(rng);
        n += v * v;
      }
      n = std::sqrt(std::max(n, 1e-12));
      for (double& v : u) v /= n;
      dirs_.push_back(std::move(u));
      double c = unif(rng);
      if (std::abs(c) < 0.05) c = c < 0 ? -0.05 : 0.05;
      coef_.push_back(c);
      csum += std::abs(c);
    }
    for (double& c : coef_) c /= csum;
    // |g| <= 1 - 1/d, so these radial bounds are valid for every theta.
    double gbound = 1.0 - 1.0 / dim;
    inner_ = 1.0 - eps * gbound;
    outer_ = 1.0 + eps * gbound;
    volume_ = volume_by_quadrature();
  }

  double bump(std::span<const double> unit) const {
    double s = 0.0;
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      double t = dot(dirs_[j], unit);
      s += coef_[j] * (t * t - 1.0 / dim_);
    }
    return s;
  }

  double gauge(std::span<const double> x) const override {
    double n = norm2(x);
    if (n == 0.0) return 0.0;
    std::vector<double> u(x.begin(), x.end());
    for (double& v : u) v /= n;
    return n / (1.0 + eps_ * bump(u));
  }

  void gauge_grad(std::span<const double> x, std::span<double> out) const override {
    double n = norm2(x);
    if (n == 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    std::vector<double> u(x.begin(), x.end());
    for (double& v : u) v /= n;
    double rho = 1.0 + eps_ * bump(u);
    // d/dx of g(x/||x||): sum_j c_j [2 t_j u_j / ||x|| - 2 t_j^2 x / ||x||^2] / ...
    std::vector<double> gb(dim_, 0.0);
    for (std::size_t j = 0; j < dirs_.size(); ++j) {
      double t = dot(dirs_[j], u);
      for (int i = 0; i < dim_; ++i) {
        gb[i] += coef_[j] * (2.0 * t * dirs_[j][i] - 2.0 * t * t * u[i]) / n;
      }
    }
    for (int i = 0; i < dim_; ++i) {
      out[i] = u[i] / rho - n * eps_ * gb[i] / (rho * rho);
    }
  }

  std::string to_string() const override {
    return "radial:" + format_double(eps_) + ":" + std::to_string(seed_);
  }

private:
  double eps_;
  std::uint64_t seed_;
  std::vector<std::vector<double>> dirs_;
  std::vector<double> coef_;
};

class DualImpl final : public BodyImpl {
public:
  explicit DualImpl(std::shared_ptr<const BodyImpl> base)
      : BodyImpl(base->dim()), base_(std::move(base)) {
    inner_ = 1.0 / base_->outer_radius();
    outer_ = 1.0 / base_->inner_radius();
    volume_ = volume_by_quadrature();
  }
  double gauge(std::span<const double> x) const override { return base_->support_value(x); }
  void gauge_grad(std::span<const double> x, std::span<double> out) const override {
    // The gradient of a support function is its maximizer.
    SupportResult r = base_->support_full(x);
    std::copy(r.maximizer.begin(), r.maximizer.end(), out.begin());
  }
  bool closed_support(std::span<const double> x, double* value,
                      std::span<double> maximizer) const override {
    // Bipolar identity: the support of the polar body is the base gauge.
    // Its maximizer is grad gauge, the boundary point of the base body whose
    // supporting hyperplane has normal x (Euler: x . grad gauge = gauge(x)).
    *value = base_->gauge(x);
    base_->gauge_grad(x, maximizer);
    return true;
  }
  std::string to_string() const override { return "dual(" + base_->to_string() + ")"; }
  std::shared_ptr<const BodyImpl> base() const override { return base_; }

private:
  std::shared_ptr<const BodyImpl> base_;
};

} // namespace

SupportResult support_ascent(const Body& body, std::span<const double> x) {
  return ascent_impl(body.impl(), x);
}

} // namespace detail

Body::Body(std::shared_ptr<const detail::BodyImpl> impl) : impl_(std::move(impl)) {}

Body Body::ball(int dim) { return Body(std::make_shared<detail::BallImpl>(dim)); }

Body Body::ellipsoid(std::vector<double> semi_axes) {
  return Body(std::make_shared<detail::EllipsoidImpl>(std::move(semi_axes)));
}

Body Body::superellipsoid(int exponent, std::vector<double> scales) {
  return Body(std::make_shared<detail::SuperellipsoidImpl>(exponent, std::move(scales)));
}

Body Body::radial_perturbed(int dim, double eps, std::uint64_t seed) {
  auto impl = std::make_shared<detail::RadialImpl>(dim, eps, seed);
  Body body{impl};
  // Reject perturbations that break convexity: midpoint convexity of the
  // gauge on seeded pairs plus positive curvature on a direction grid.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  std::vector<double> a(dim), b(dim), m(dim);
  for (int trial = 0; trial < 2048; ++trial) {
    for (int i = 0; i < dim; ++i) {
      a[i] = gauss(rng);
      b[i] = gauss(rng);
      m[i] = 0.5 * (a[i] + b[i]);
    }
    if (body.gauge(m) > 0.5 * (body.gauge(a) + body.gauge(b)) + 1e-9) {
      throw std::invalid_argument("radial perturbation breaks convexity (gauge midpoint test)");
    }
  }
  for (int k = 0; k < 2 * dim + 6; ++k) {
    std::vector<double> u(dim);
    if (k < 2 * dim) {
      u[k / 2] = (k % 2) ? -1.0 : 1.0;
    } else {
      for (double& v : u) v = gauss(rng);
    }
    try {
      if (!(body.curvature(u) > 0.0)) throw std::runtime_error("flat");
    } catch (const std::runtime_error&) {
      throw std::invalid_argument("radial perturbation breaks convexity (curvature test)");
    }
  }
  return body;
}

int Body::dim() const { return impl_->dim(); }
double Body::volume() const { return impl_->volume(); }
double Body::inner_radius() const { return impl_->inner_radius(); }
double Body::outer_radius() const { return impl_->outer_radius(); }

double Body::gauge(std::span<const double> x) const { return impl_->gauge(x); }

std::vector<double> Body::gauge_grad(std::span<const double> x) const {
  std::vector<double> out(impl_->dim());
  impl_->gauge_grad(x, out);
  return out;
}

double Body::support(std::span<const double> x) const { return impl_->support_value(x); }

SupportResult Body::support_detail(std::span<const double> x) const {
  return impl_->support_full(x);
}

Body Body::dual() const {
  using namespace detail;
  if (auto base = impl_->base()) return Body(base); // bipolar: K** = K
  if (dynamic_cast<const BallImpl*>(impl_.get())) return *this;
  if (auto* e = dynamic_cast<const EllipsoidImpl*>(impl_.get())) {
    std::vector<double> inv(e->axes());
    for (double& a : inv) a = 1.0 / a;
    return ellipsoid(std::move(inv));
  }
  return Body(std::make_shared<DualImpl>(impl_));
}

double Body::curvature(std::span<const double> normal) const {
  const int d = impl_->dim();
  double n = 0.0;
  for (double v : normal) n += v * v;
  n = std::sqrt(n);
  if (n == 0.0) throw std::invalid_argument("curvature: zero normal direction");
  std::vector<double> theta(normal.begin(), normal.end());
  for (double& v : theta) v /= n;

  // Orthonormal tangent basis via Gram-Schmidt against theta.
  std::vector<std::vector<double>> basis;
  int skip = 0;
  for (int i = 1; i < d; ++i) {
    if (std::abs(theta[i]) > std::abs(theta[skip])) skip = i;
  }
  for (int i = 0; i < d && static_cast<int>(basis.size()) < d - 1; ++i) {
    if (i == skip) continue;
    std::vector<double> v(d, 0.0);
    v[i] = 1.0;
    double vt = 0.0;
    for (int k = 0; k < d; ++k) vt += v[k] * theta[k];
    for (int k = 0; k < d; ++k) v[k] -= vt * theta[k];
    for (auto& b : basis) {
      double vb = 0.0;
      for (int k = 0; k < d; ++k) vb += v[k] * b[k];
      for (int k = 0; k < d; ++k) v[k] -= vb * b[k];
    }
    double vn = 0.0;
    for (double w : v) vn += w * w;
    vn = std::sqrt(vn);
    for (double& w : v) w /= vn;
    basis.push_back(std::move(v));
  }

  auto h = [&](const std::vector<double>& y) { return impl_->support_value(y); };
  auto hessian = [&](double s) {
    std::vector<std::vector<double>> H(d - 1, std::vector<double>(d - 1, 0.0));
    double h0 = h(theta);
    std::vector<double> y(d);
    for (int i = 0; i < d - 1; ++i) {
      for (int k = 0; k < d; ++k) y[k] = theta[k] + s * basis[i][k];
      double hp = h(y);
      for (int k = 0; k < d; ++k) y[k] = theta[k] - s * basis[i][k];
      double hm = h(y);
      H[i][i] = (hp - 2.0 * h0 + hm) / (s * s);
      for (int j = i + 1; j < d - 1; ++j) {
        for (int k = 0; k < d; ++k) y[k] = theta[k] + s * (basis[i][k] + basis[j][k]);
        double hpp = h(y);
        for (int k = 0; k < d; ++k) y[k] = theta[k] + s * (basis[i][k] - basis[j][k]);
        double hpm = h(y);
        for (int k = 0; k < d; ++k) y[k] = theta[k] - s * (basis[i][k] - basis[j][k]);
        double hmp = h(y);
        for (int k = 0; k < d; ++k) y[k] = theta[k] - s * (basis[i][k] + basis[j][k]);
        double hmm = h(y);
        H[i][j] = H[j][i] = (hpp - hpm - hmp + hmm) / (4.0 * s * s);
      }
    }
    return H;
  };

  const double s = 1e-4;
  auto H1 = hessian(s), H2 = hessian(0.5 * s);
  std::vector<std::vector<double>> H(d - 1, std::vector<double>(d - 1));
  for (int i = 0; i < d - 1; ++i) {
    for (int j = 0; j < d - 1; ++j) H[i][j] = (4.0 * H2[i][j] - H1[i][j]) / 3.0;
  }

  // Determinant by elimination with partial pivoting.
  double det = 1.0;
  int m = d - 1;
  for (int c = 0; c < m; ++c) {
    int piv = c;
    for (int r = c + 1; r < m; ++r) {
      if (std::abs(H[r][c]) > std::abs(H[piv][c])) piv = r;
    }
    if (piv != c) {
      std::swap(H[piv], H[c]);
      det = -det;
    }
    if (H[c][c] == 0.0) {
      det = 0.0;
      break;
    }
    det *= H[c][c];
    for (int r = c + 1; r < m; ++r) {
      double f = H[r][c] / H[c][c];
      for (int k = c; k < m; ++k) H[r][k] -= f * H[c][k];
    }
  }

  if (!(det > 0.0)) {
    throw std::runtime_error("curvature: non-positive principal radius determinant for " +
                             impl_->to_string());
  }
  return 1.0 / det;
}

bool Body::separable(double& p, std::vector<double>& weights) const {
  return impl_->separable(p, weights);
}

std::string Body::to_string() const { return impl_->to_string(); }

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw std::invalid_argument("body spec: empty list entry");
    std::size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("body spec: bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("body spec: empty list");
  return out;
}

} // namespace

Body Body::parse(const std::string& spec, int dim) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw std::invalid_argument("empty body spec");

  const std::string& kind = parts[0];
  if (kind == "ball") {
    if (parts.size() != 1) throw std::invalid_argument("ball takes no parameters");
    return ball(dim);
  }
  if (kind == "ellipsoid") {
    if (parts.size() != 2) throw std::invalid_argument("ellipsoid spec: expected ellipsoid:a1,...,ad");
    auto axes = parse_list(parts[1]);
    if (static_cast<int>(axes.size()) != dim) {
      throw std::invalid_argument("ellipsoid spec: axis count does not match dimension");
    }
    return ellipsoid(std::move(axes));
  }
  if (kind == "superellipsoid") {
    if (parts.size() != 3) {
      throw std::invalid_argument("superellipsoid spec: expected superellipsoid:p:a1,...,ad");
    }
    int p = std::stoi(parts[1]);
    auto scales = parse_list(parts[2]);
    if (static_cast<int>(scales.size()) != dim) {
      throw std::invalid_argument("superellipsoid spec: scale count does not match dimension");
    }
    return superellipsoid(p, std::move(scales));
  }
  if (kind == "radial") {
    if (parts.size() != 3) throw std::invalid_argument("radial spec: expected radial:eps:seed");
    double eps = std::stod(parts[1]);
    std::uint64_t seed = std::stoull(parts[2]);
    return radial_perturbed(dim, eps, seed);
  }
  throw std::invalid_argument("unknown body kind '" + kind + "'");
}

} // namespace latlab
