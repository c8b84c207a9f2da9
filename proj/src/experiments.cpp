#include "latlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "latlab/body.hpp"
#include "latlab/cutoff.hpp"
#include "latlab/falconer.hpp"
#include "latlab/lattice.hpp"
#include "latlab/parallel.hpp"
#include "latlab/profile.hpp"
#include "latlab/spectral.hpp"

namespace latlab {

namespace {

constexpr const char* kColumns =
    "d,q,body,total,D_A,D_K,l2nu,l2N,distinct,support_size,"
    "mattila_ratio,duality_ratio,falconer_lower,falconer_upper,error";

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// Body specs carry commas (ellipsoid:2,1), so the body and error fields are
// always quoted; quotes and newlines inside them are replaced, not escaped.
std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? '\'' : (c == '\n' ? ' ' : c);
  out += '"';
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string row_key(int d, long long q, const std::string& body) {
  return std::to_string(d) + "|" + std::to_string(q) + "|" + body;
}

SweepRow compute_row(const Config& cfg, int d, long long q, const std::string& spec) {
  SweepRow row;
  row.d = d;
  row.q = q;
  row.body = spec;
  row.mattila_ratio = nan_value();
  row.duality_ratio = nan_value();
  row.falconer_lower = nan_value();
  row.falconer_upper = nan_value();

  const Body body = Body::parse(spec, d);
  const double qd = static_cast<double>(q);
  const double delta = 1.0 / (static_cast<double>(cfg.delta_denominator) * qd);
  const ShellHistogram hist = shell_histogram(body, qd, delta, 0.0, cfg.budget);
  const DistanceProfile profile = build_profile(hist, body);

  row.total = l1_mass(profile).mass;
  const MeanSquare ms = mean_square(profile);
  row.D_A = ms.D_A;
  row.D_K = ms.D_K;
  row.l2nu = l2_weighted_nu(profile);
  row.l2N = d >= 3 ? l2_weighted_N(profile).value : nan_value();
  row.distinct = distinct_distances(hist);
  row.support_size = cauchy_schwarz_support(profile).support_size;

  if (cfg.mattila) {
    row.mattila_ratio = mattila_integral(body, qd, shared_cutoff(d), 0.0, cfg.budget) / row.l2nu;
  }
  if (cfg.duality) {
    const DualityNorms n = duality_l2(body, qd, shared_cutoff(d), cfg.budget);
    row.duality_ratio = n.normK / n.normKstar;
  }
  if (cfg.falconer_s > 0.0) {
    const DistanceSetMeasure m = distance_set_measure(make_stage(q, cfg.falconer_s, body),
                                                      cfg.budget);
    row.falconer_lower = m.lower;
    row.falconer_upper = m.upper;
  }
  return row;
}

void append_slopes(ExperimentReport& report) {
  struct Series {
    std::vector<double> qs;
    std::vector<std::vector<double>> vals;
  };
  static const char* stats[] = {"total", "D_A", "D_K", "l2nu", "l2N", "distinct"};
  std::map<std::pair<int, std::string>, Series> groups;
  for (const SweepRow& r : report.rows) {
    if (!r.error.empty()) continue;
    Series& g = groups[{r.d, r.body}];
    g.vals.resize(6);
    g.qs.push_back(static_cast<double>(r.q));
    const double v[] = {r.total, r.D_A,
                        r.D_K,   r.l2nu,
                        r.l2N,   static_cast<double>(r.distinct)};
    for (int i = 0; i < 6; ++i) g.vals[i].push_back(v[i]);
  }
  for (const auto& [key, g] : groups) {
    for (int i = 0; i < 6; ++i) {
      std::vector<double> qs, vs;
      for (std::size_t k = 0; k < g.qs.size(); ++k) {
        if (std::isfinite(g.vals[i][k]) && g.vals[i][k] > 0.0) {
          qs.push_back(g.qs[k]);
          vs.push_back(g.vals[i][k]);
        }
      }
      if (qs.size() < 3) continue;
      report.slopes.push_back({key.first, key.second, stats[i], fit_slope(qs, vs)});
    }
  }
}

void write_header(const Config& cfg, std::ostream& os) {
  os << "# seed=" << cfg.seed << " threads=" << cfg.threads << " budget=" << cfg.budget
     << " delta_denominator=" << cfg.delta_denominator << "\n"
     << kColumns << "\n";
}

} // namespace

double fit_slope(std::span<const double> qs, std::span<const double> values) {
  if (qs.size() != values.size() || qs.size() < 2) {
    throw std::invalid_argument("fit_slope: needs >= 2 (q, value) pairs");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (!(qs[i] > 0.0) || !(values[i] > 0.0)) {
      throw std::invalid_argument("fit_slope: q and value must be positive");
    }
    const double x = std::log(qs[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw std::invalid_argument("fit_slope: q values must not all coincide");
  return (n * sxy - sx * sy) / denom;
}

std::string format_row(const SweepRow& row) {
  char num[256];
  std::snprintf(num, sizeof num, "%d,%lld,", row.d, row.q);
  std::string out = num;
  out += csv_quote(row.body);
  std::snprintf(num, sizeof num, ",%.10g,%.10g,%.10g,%.10g,%.10g,%lld,%lld,%.10g,%.10g,%.10g,%.10g,",
                row.total, row.D_A, row.D_K, row.l2nu, row.l2N, row.distinct, row.support_size,
                row.mattila_ratio, row.duality_ratio, row.falconer_lower, row.falconer_upper);
  out += num;
  out += csv_quote(row.error);
  return out;
}

SweepRow parse_row(const std::string& line) {
  const std::vector<std::string> f = split_csv(line);
  if (f.size() != 15) {
    throw std::invalid_argument("parse_row: expected 15 fields, got " +
                                std::to_string(f.size()));
  }
  SweepRow row;
  row.d = std::atoi(f[0].c_str());
  row.q = std::atoll(f[1].c_str());
  row.body = f[2];
  row.total = std::strtod(f[3].c_str(), nullptr);
  row.D_A = std::strtod(f[4].c_str(), nullptr);
  row.D_K = std::strtod(f[5].c_str(), nullptr);
  row.l2nu = std::strtod(f[6].c_str(), nullptr);
  row.l2N = std::strtod(f[7].c_str(), nullptr);
  row.distinct = std::atoll(f[8].c_str());
  row.support_size = std::atoll(f[9].c_str());
  row.mattila_ratio = std::strtod(f[10].c_str(), nullptr);
  row.duality_ratio = std::strtod(f[11].c_str(), nullptr);
  row.falconer_lower = std::strtod(f[12].c_str(), nullptr);
  row.falconer_upper = std::strtod(f[13].c_str(), nullptr);
  row.error = f[14];
  return row;
}

ExperimentReport run_sweep(const Config& cfg) {
  if (cfg.dims.empty() || cfg.qs.empty() || cfg.bodies.empty()) {
    throw std::invalid_argument("run_sweep: config needs dims, qs and at least one body");
  }
  if (cfg.threads > 0) set_default_threads(cfg.threads);

  ExperimentReport report;
  report.config = cfg;

  std::map<std::string, SweepRow> done;
  if (cfg.resume && !cfg.out.empty()) {
    std::ifstream in(cfg.out);
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'd') continue;
      try {
        SweepRow r = parse_row(line);
        if (r.error.empty()) done[row_key(r.d, r.q, r.body)] = r;
      } catch (const std::invalid_argument&) {
        // A truncated last line from an interrupted run is recomputed.
      }
    }
  }

  std::ofstream out;
  if (!cfg.out.empty()) {
    const bool append = cfg.resume && !done.empty();
    out.open(cfg.out, append ? std::ios::app : std::ios::trunc);
    if (!out) throw std::invalid_argument("run_sweep: cannot open '" + cfg.out + "'");
    if (!append) write_header(cfg, out);
    out.flush();
  }

  for (int d : cfg.dims) {
    for (const std::string& spec : cfg.bodies) {
      for (long long q : cfg.qs) {
        const std::string key = row_key(d, q, spec);
        const auto hit = done.find(key);
        SweepRow row;
        bool reused = false;
        if (hit != done.end()) {
          row = hit->second;
          reused = true;
        } else {
          try {
            row = compute_row(cfg, d, q, spec);
          } catch (const std::exception& e) {
            row = SweepRow{};
            row.d = d;
            row.q = q;
            row.body = spec;
            row.error = e.what();
          }
        }
        report.rows.push_back(row);
        if (out && !reused) {
          out << format_row(row) << "\n";
          out.flush();
        }
      }
    }
  }

  append_slopes(report);
  if (!cfg.out.empty()) {
    std::ofstream slopes(cfg.out + ".slopes.csv", std::ios::trunc);
    write_slopes_csv(report, slopes);
  }
  return report;
}

void write_report_csv(const ExperimentReport& report, std::ostream& os) {
  write_header(report.config, os);
  for (const SweepRow& r : report.rows) os << format_row(r) << "\n";
}

void write_slopes_csv(const ExperimentReport& report, std::ostream& os) {
  os << "d,body,stat,slope\n";
  char num[64];
  for (const SlopeFit& s : report.slopes) {
    std::snprintf(num, sizeof num, "%.10g", s.slope);
    os << s.d << ',' << csv_quote(s.body) << ',' << s.stat << ',' << num << "\n";
  }
}

} // namespace latlab
