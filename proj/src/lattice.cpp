#include "latlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>

#include "latlab/parallel.hpp"

namespace latlab {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int k = 0; k < p; ++k) r *= x;
  return r;
}

// Depth-first prefix walker over the integer bounding box of t_max * K.
// Subtrees are pruned with rigorous necessary conditions (slightly inflated
// Euclidean and separable-power bounds); membership of individual points is
// always decided by the one exact predicate gauge(x) <= t_max, so results
// match a naive brute force bit for bit.
struct Walker {
  const Body& body;
  int d;
  double t_max;
  std::vector<long long> box; // per-axis half-width

  bool sep = false;
  double p = 0.0;
  int ip = 0;
  std::vector<double> w;
  double sp_budget = 0.0; // inflated t_max^p
  double sp_safe = 0.0;   // deflated t_max^p (bulk accept)

  double r2_budget = 0.0; // inflated (t_max * outer)^2
  double r2_safe = 0.0;   // deflated (t_max * inner)^2 (bulk accept)

  Walker(const Body& b, double tmax) : body(b), d(b.dim()), t_max(tmax) {
    std::vector<double> e(d, 0.0);
    for (int i = 0; i < d; ++i) {
      e[i] = 1.0;
      double s = body.support(e);
      e[i] = 0.0;
      box.push_back(static_cast<long long>(std::floor(t_max * s * (1.0 + 1e-12) + 1e-9)));
    }
    sep = body.separable(p, w);
    if (sep) {
      ip = static_cast<int>(p);
      sp_budget = std::pow(t_max, p) * (1.0 + 1e-11);
      sp_safe = std::pow(t_max, p) * (1.0 - 1e-11);
    }
    double ro = t_max * body.outer_radius();
    double ri = t_max * body.inner_radius();
    r2_budget = ro * ro * (1.0 + 1e-11);
    r2_safe = ri * ri * (1.0 - 1e-11);
  }

  double box_points() const {
    double n = 1.0;
    for (long long b : box) n *= static_cast<double>(2 * b + 1);
    return n;
  }

  // Largest |x| admissible for axis `axis` given prefix partial sums.
  long long reach(int axis, double s2, double sp) const {
    double r = std::sqrt(std::max(0.0, r2_budget - s2));
    if (sep) {
      double rs = std::pow(std::max(0.0, sp_budget - sp) / w[axis], 1.0 / p);
      r = std::min(r, rs);
    }
    long long h = static_cast<long long>(std::floor(r * (1.0 + 1e-12) + 1e-9));
    return std::min(h, box[axis]);
  }

  // --- counting mode ---------------------------------------------------
  long long count_column(std::vector<double>& x, double s2, double sp) const {
    const int axis = d - 1;
    long long hi = reach(axis, s2, sp);
    if (hi < 0) return 0;

    // Provably interior half-width: no gauge call needed below it.
    double rs = std::sqrt(std::max(0.0, r2_safe - s2));
    if (sep) {
      double rr = std::pow(std::max(0.0, sp_safe - sp) / w[axis], 1.0 / p);
      rs = std::max(rs, rr); // either sufficient condition proves membership
    }
    long long safe = std::min(hi, static_cast<long long>(std::floor(rs * (1.0 - 1e-12) - 1e-9)));

    long long n = safe >= 0 ? 2 * safe + 1 : 0;
    long long from = safe >= 0 ? safe + 1 : 0;
    for (long long a = from; a <= hi; ++a) {
      x[axis] = static_cast<double>(a);
      if (body.gauge(x) <= t_max) ++n;
      if (a > 0) {
        x[axis] = -static_cast<double>(a);
        if (body.gauge(x) <= t_max) ++n;
      }
    }
    x[axis] = 0.0;
    return n;
  }

  long long count_descend(int level, std::vector<double>& x, double s2, double sp) const {
    if (level == d - 1) return count_column(x, s2, sp);
    long long hi = reach(level, s2, sp);
    long long n = 0;
    for (long long a = -hi; a <= hi; ++a) {
      x[level] = static_cast<double>(a);
      double aa = static_cast<double>(a);
      double s2n = s2 + aa * aa;
      if (s2n > r2_budget) continue;
      double spn = sep ? sp + w[level] * ipow(std::abs(aa), ip) : 0.0;
      if (sep && spn > sp_budget) continue;
      n += count_descend(level + 1, x, s2n, spn);
    }
    x[level] = 0.0;
    return n;
  }

  // --- binning mode ----------------------------------------------------
  void bin_column(std::vector<double>& x, double s2, double sp, bool zero_prefix,
                  double inv_delta, std::vector<long long>& hist) const {
    const int axis = d - 1;
    long long hi = reach(axis, s2, sp);
    for (long long a = -hi; a <= hi; ++a) {
      if (zero_prefix && a == 0) continue; // origin
      x[axis] = static_cast<double>(a);
      double g = body.gauge(x);
      if (g <= t_max) {
        std::size_t k = static_cast<std::size_t>(g * inv_delta);
        ++hist[std::min(k, hist.size() - 1)];
      }
    }
    x[axis] = 0.0;
  }

  void bin_descend(int level, std::vector<double>& x, double s2, double sp, bool zero_prefix,
                   double inv_delta, std::vector<long long>& hist) const {
    if (level == d - 1) {
      bin_column(x, s2, sp, zero_prefix, inv_delta, hist);
      return;
    }
    long long hi = reach(level, s2, sp);
    for (long long a = -hi; a <= hi; ++a) {
      x[level] = static_cast<double>(a);
      double aa = static_cast<double>(a);
      double s2n = s2 + aa * aa;
      if (s2n > r2_budget) continue;
      double spn = sep ? sp + w[level] * ipow(std::abs(aa), ip) : 0.0;
      if (sep && spn > sp_budget) continue;
      bin_descend(level + 1, x, s2n, spn, zero_prefix && a == 0, inv_delta, hist);
    }
    x[level] = 0.0;
  }
};

void check_budget(const Walker& walker, long long budget) {
  double n = walker.box_points();
  if (n > static_cast<double>(budget)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "enumeration bounding box holds %.3g points, over the budget of %lld", n,
                  budget);
    throw BudgetError(msg);
  }
}

} // namespace

long long enumerate_count(const Body& body, double q, long long budget) {
  if (!(q >= 1.0)) throw std::invalid_argument("enumerate_count: q must be >= 1");
  Walker walker(body, q);
  check_budget(walker, budget);

  const long long b0 = walker.box[0];
  const long long n = 2 * b0 + 1;
  const long long chunk = std::max<long long>(1, n / 256);
  std::mutex mu;
  long long total = 0;
  parallel_chunks(n, chunk, [&](std::size_t, long long lo, long long hi) {
    std::vector<double> x(walker.d, 0.0);
    long long local = 0;
    for (long long i = lo; i < hi; ++i) {
      long long a = i - b0;
      double aa = static_cast<double>(a);
      double s2 = aa * aa;
      if (s2 > walker.r2_budget) continue;
      double sp = walker.sep ? walker.w[0] * ipow(std::abs(aa), walker.ip) : 0.0;
      if (walker.sep && sp > walker.sp_budget) continue;
      x[0] = aa;
      local += walker.count_descend(1, x, s2, sp);
    }
    std::lock_guard<std::mutex> lock(mu);
    total += local;
  });
  return total - 1; // drop the origin, always a member
}

ShellHistogram shell_histogram(const Body& body, double q, double delta, double t_max,
                               long long budget) {
  if (!(q >= 1.0)) throw std::invalid_argument("shell_histogram: q must be >= 1");
  if (!(delta >= 1.0 / (4.0 * q) && delta <= 4.0 / q)) {
    throw std::invalid_argument("shell_histogram: delta must lie in [1/(4q), 4/q]");
  }
  if (t_max <= 0.0) t_max = q;
  if (t_max < q) throw std::invalid_argument("shell_histogram: t_max must be >= q");

  Walker walker(body, t_max);
  check_budget(walker, budget);

  ShellHistogram h;
  h.q = q;
  h.delta = delta;
  h.t_max = t_max;
  h.dim = body.dim();
  // One spare bucket absorbs the corner where g * (1/delta) rounds just past
  // t_max / delta at the top edge.
  h.counts.assign(static_cast<std::size_t>(t_max / delta) + 2, 0);

  const double inv_delta = 1.0 / delta;
  const long long b0 = walker.box[0];
  const long long n = 2 * b0 + 1;
  const long long chunk = std::max<long long>(1, n / 256);
  std::mutex mu;
  parallel_chunks(n, chunk, [&](std::size_t, long long lo, long long hi) {
    std::vector<double> x(walker.d, 0.0);
    std::vector<long long> local(h.counts.size(), 0);
    for (long long i = lo; i < hi; ++i) {
      long long a = i - b0;
      double aa = static_cast<double>(a);
      double s2 = aa * aa;
      if (s2 > walker.r2_budget) continue;
      double sp = walker.sep ? walker.w[0] * ipow(std::abs(aa), walker.ip) : 0.0;
      if (walker.sep && sp > walker.sp_budget) continue;
      x[0] = aa;
      walker.bin_descend(1, x, s2, sp, a == 0, inv_delta, local);
    }
    std::lock_guard<std::mutex> lock(mu);
    for (std::size_t k = 0; k < local.size(); ++k) h.counts[k] += local[k];
  });

  for (long long c : h.counts) h.total += c;
  return h;
}

long long distinct_distances(const ShellHistogram& hist) {
  long long n = 0;
  for (long long c : hist.counts) n += c > 0 ? 1 : 0;
  return n;
}

ShellHistogram merge_histograms(const ShellHistogram& a, const ShellHistogram& b) {
  if (a.q != b.q || a.delta != b.delta || a.dim != b.dim ||
      a.counts.size() != b.counts.size()) {
    throw std::invalid_argument("merge_histograms: incompatible histogram grids");
  }
  ShellHistogram out = a;
  for (std::size_t k = 0; k < out.counts.size(); ++k) out.counts[k] += b.counts[k];
  out.total += b.total;
  return out;
}

ShellHistogram coarsen_histogram(const ShellHistogram& h, int factor) {
  if (factor < 1) throw std::invalid_argument("coarsen_histogram: factor must be >= 1");
  ShellHistogram out;
  out.q = h.q;
  out.delta = h.delta * factor;
  out.t_max = h.t_max;
  out.dim = h.dim;
  out.total = h.total;
  out.counts.assign((h.counts.size() + factor - 1) / factor, 0);
  for (std::size_t k = 0; k < h.counts.size(); ++k) out.counts[k / factor] += h.counts[k];
  return out;
}

void write_histogram_csv(const ShellHistogram& h, std::ostream& os) {
  os << "k,t_lo,t_hi,count\n";
  char line[96];
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    std::snprintf(line, sizeof line, "%zu,%.10g,%.10g,%lld\n", k, h.t_lo(k), h.t_hi(k),
                  h.counts[k]);
    os << line;
  }
}

} // namespace latlab
