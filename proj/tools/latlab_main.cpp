#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latlab/acceptance.hpp"
#include "latlab/body.hpp"
#include "latlab/config.hpp"
#include "latlab/cutoff.hpp"
#include "latlab/experiments.hpp"
#include "latlab/falconer.hpp"
#include "latlab/lattice.hpp"
#include "latlab/parallel.hpp"
#include "latlab/profile.hpp"
#include "latlab/spectral.hpp"

namespace {

using namespace latlab;

struct GlobalArgs {
  std::string config_path;
  std::string out;
  int threads = 0;
  long long budget = 0; // 0: keep the config / module default
};

Config effective_config(const GlobalArgs& g) {
  Config cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path);
  if (!g.out.empty()) cfg.out = g.out;
  if (g.threads > 0) cfg.threads = g.threads;
  if (g.budget > 0) cfg.budget = g.budget;
  if (cfg.threads > 0) set_default_threads(cfg.threads);
  return cfg;
}

std::ostream* open_out(const std::string& path, std::ofstream& file) {
  if (path.empty()) return &std::cout;
  file.open(path, std::ios::trunc);
  if (!file) throw std::invalid_argument("cannot open '" + path + "' for writing");
  return &file;
}

std::vector<int> parse_criteria_flag(const std::string& flag) {
  if (flag == "none") return {};
  std::vector<int> ids;
  const char* p = flag.c_str();
  while (*p) {
    char* end = nullptr;
    long id = std::strtol(p, &end, 10);
    if (end == p || id < 1 || id > 16) {
      throw std::invalid_argument("criteria must be a comma list of ids in [1, 16] or 'none'");
    }
    ids.push_back(static_cast<int>(id));
    p = *end == ',' ? end + 1 : end;
  }
  return ids;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice point statistics in dilates of convex bodies"};
  app.require_subcommand(1);

  GlobalArgs g;
  app.add_option("--config", g.config_path, "flat key = value settings file");
  app.add_option("--out", g.out, "output path (overrides the config)");
  app.add_option("--threads", g.threads, "worker threads (0: hardware)");
  app.add_option("--budget", g.budget, "candidate point budget");

  std::string body_spec = "ball";
  int dim = 2;
  double q = 8.0;
  long long delta_den = 2;
  auto add_body_args = [&](CLI::App* cmd, bool with_delta = false) {
    cmd->add_option("--body", body_spec, "ball | ellipsoid:a1,..,ad | superellipsoid:p:a1,..,ad");
    cmd->add_option("--dim", dim, "ambient dimension")->check(CLI::Range(2, 8));
    cmd->add_option("--q", q, "dilation parameter")->required();
    if (with_delta) cmd->add_option("--delta-den", delta_den, "annulus width 1/(delta-den * q)");
  };

  int exit_code = 0;
  auto budget_of = [&](const Config& cfg) { return g.budget > 0 ? g.budget : cfg.budget; };

  auto* cmd_enumerate = app.add_subcommand("enumerate", "count nonzero lattice points in qK");
  add_body_args(cmd_enumerate);
  cmd_enumerate->callback([&] {
    const Config cfg = effective_config(g);
    const long long n = enumerate_count(Body::parse(body_spec, dim), q, budget_of(cfg));
    std::printf("%lld\n", n);
  });

  auto* cmd_profile = app.add_subcommand("profile", "annulus counts and discrepancies as CSV");
  add_body_args(cmd_profile, true);
  cmd_profile->callback([&] {
    const Config cfg = effective_config(g);
    const Body body = Body::parse(body_spec, dim);
    const ShellHistogram h =
        shell_histogram(body, q, 1.0 / (static_cast<double>(delta_den) * q), 0.0, budget_of(cfg));
    std::ofstream file;
    write_profile_csv(build_profile(h, body), *open_out(cfg.out, file));
  });

  auto* cmd_discrepancy = app.add_subcommand("discrepancy", "summary statistics for one dilate");
  add_body_args(cmd_discrepancy, true);
  cmd_discrepancy->callback([&] {
    const Config cfg = effective_config(g);
    const Body body = Body::parse(body_spec, dim);
    const ShellHistogram h =
        shell_histogram(body, q, 1.0 / (static_cast<double>(delta_den) * q), 0.0, budget_of(cfg));
    const DistanceProfile p = build_profile(h, body);
    const MeanSquare ms = mean_square(p);
    std::ofstream file;
    std::ostream& os = *open_out(cfg.out, file);
    os << "total,l1_ratio,D_A,D_K,l2nu,l2N,distinct,support_size\n";
    char line[256];
    const double l2n = dim >= 3 ? l2_weighted_N(p).value : std::nan("");
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%lld,%lld\n",
                  l1_mass(p).mass, l1_mass(p).ratio, ms.D_A, ms.D_K, l2_weighted_nu(p), l2n,
                  distinct_distances(h), cauchy_schwarz_support(p).support_size);
    os << line;
  });

  auto* cmd_distances = app.add_subcommand("distances", "count distinct gauge distances");
  add_body_args(cmd_distances, true);
  cmd_distances->callback([&] {
    const Config cfg = effective_config(g);
    const Body body = Body::parse(body_spec, dim);
    const ShellHistogram h =
        shell_histogram(body, q, 1.0 / (static_cast<double>(delta_den) * q), 0.0, budget_of(cfg));
    std::printf("%lld\n", distinct_distances(h));
  });

  std::string mode = "nu";
  std::vector<double> tgrid;
  double radius = 0.0;
  auto* cmd_poisson = app.add_subcommand("poisson", "frequency-side series along a t grid");
  add_body_args(cmd_poisson);
  cmd_poisson->add_option("--mode", mode, "nu (surface) or E (indicator)")
      ->check(CLI::IsMember({"nu", "E"}));
  cmd_poisson->add_option("--t", tgrid, "evaluation radii")->required()->delimiter(',');
  cmd_poisson->add_option("--R", radius, "frequency cutoff (default 8q)");
  cmd_poisson->callback([&] {
    const Config cfg = effective_config(g);
    const Body body = Body::parse(body_spec, dim);
    const SpectralSeries s =
        poisson_series(body, q, shared_cutoff(dim), mode == "nu" ? SeriesMode::nu : SeriesMode::E,
                       tgrid, radius, budget_of(cfg));
    std::ofstream file;
    std::ostream& os = *open_out(cfg.out, file);
    os << "t,value,R\n";
    char line[128];
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g\n", s.t[i], s.value[i], s.R);
      os << line;
    }
  });

  double r_max = 0.0;
  auto* cmd_mattila = app.add_subcommand("mattila", "weighted L2 energy of the dual transform");
  add_body_args(cmd_mattila);
  cmd_mattila->add_option("--r-max", r_max, "integration range (default 8q)");
  cmd_mattila->callback([&] {
    const Config cfg = effective_config(g);
    const double v =
        mattila_integral(Body::parse(body_spec, dim), q, shared_cutoff(dim), r_max, budget_of(cfg));
    std::printf("%.10g\n", v);
  });

  auto* cmd_duality = app.add_subcommand("duality", "weighted shell norms for K and its dual");
  add_body_args(cmd_duality);
  cmd_duality->callback([&] {
    const Config cfg = effective_config(g);
    const DualityNorms n =
        duality_l2(Body::parse(body_spec, dim), q, shared_cutoff(dim), budget_of(cfg));
    std::printf("normK,normKstar,ratio\n%.10g,%.10g,%.10g\n", n.normK, n.normKstar,
                n.normK / n.normKstar);
  });

  double falconer_s = 2.0;
  int stage_count = 1;
  std::string rule = "geometric";
  auto* cmd_falconer = app.add_subcommand("falconer", "distance-set measure of speck unions");
  add_body_args(cmd_falconer);
  cmd_falconer->add_option("--s", falconer_s, "dimension exponent in (0, d]")->required();
  cmd_falconer->add_option("--count", stage_count, "number of stages");
  cmd_falconer->add_option("--rule", rule, "stage growth: literal or geometric")
      ->check(CLI::IsMember({"literal", "geometric"}));
  cmd_falconer->callback([&] {
    const Config cfg = effective_config(g);
    const Body body = Body::parse(body_spec, dim);
    const long long q0 = static_cast<long long>(q);
    const std::vector<FalconerStage> stages =
        stage_sequence(q0, rule == "literal" ? GrowthRule::literal : GrowthRule::geometric,
                       stage_count, falconer_s, body);
    std::ofstream file;
    std::ostream& os = *open_out(cfg.out, file);
    os << "q,s,d,body,measure_lower,measure_upper,distinct,ball_radius\n";
    char line[256];
    for (const FalconerStage& st : stages) {
      const DistanceSetMeasure m = distance_set_measure(st, budget_of(cfg));
      std::snprintf(line, sizeof line, "%lld,%.10g,%d,\"%s\",%.10g,%.10g,%lld,%.10g\n", st.q, st.s,
                    st.d, st.body.to_string().c_str(), m.lower, m.upper, m.distinct,
                    st.ball_radius);
      os << line;
    }
  });

  auto* cmd_sweep = app.add_subcommand("sweep", "run the configured (d, q, body) sweep");
  cmd_sweep->callback([&] {
    const Config cfg = effective_config(g);
    const ExperimentReport report = run_sweep(cfg);
    if (cfg.out.empty()) {
      write_report_csv(report, std::cout);
    } else {
      long long failed = 0;
      for (const SweepRow& r : report.rows) failed += r.error.empty() ? 0 : 1;
      std::printf("wrote %zu rows (%lld failed) and %zu slopes to %s\n", report.rows.size(),
                  failed, report.slopes.size(), cfg.out.c_str());
    }
  });

  std::string criteria_flag;
  double corrupt = 0.0;
  auto* cmd_check = app.add_subcommand("check", "run the acceptance checks");
  cmd_check->add_option("--criteria", criteria_flag, "comma list of ids in [1,16], or 'none'");
  cmd_check->add_option("--corrupt-volume", corrupt, "scale Vol K (negative control)");
  cmd_check->callback([&] {
    const Config cfg = effective_config(g);
    AcceptanceOptions opt;
    opt.subset = !criteria_flag.empty() ? parse_criteria_flag(criteria_flag)
                 : cfg.criteria_set     ? cfg.criteria
                                        : all_criteria();
    opt.volume_corruption = corrupt > 0.0 ? corrupt : cfg.corrupt_volume;
    opt.threads = cfg.threads;
    if (g.budget > 0 || cfg.budget != kDefaultPointBudget) opt.budget = budget_of(cfg);
    const std::vector<CriterionResult> results = run_acceptance(opt, std::cout);
    exit_code = all_passed(results) ? 0 : 1;
  });

  for (CLI::App* sub : {cmd_enumerate, cmd_profile, cmd_discrepancy, cmd_distances, cmd_poisson,
                        cmd_mattila, cmd_duality, cmd_falconer, cmd_sweep, cmd_check}) {
    sub->fallthrough();
  }

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }
    return exit_code;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
