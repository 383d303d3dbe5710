// vgstein: command-line front end. Results go to stdout as JSON, or to --out
// as CSV or JSON by extension. Exit codes: 0 ok, 2 bad arguments or
// parameters, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "vgstein/bessel.hpp"
#include "vgstein/bounds.hpp"
#include "vgstein/errors.hpp"
#include "vgstein/harness.hpp"
#include "vgstein/stein.hpp"
#include "vgstein/sweep.hpp"
#include "vgstein/vgdist.hpp"

using json = nlohmann::ordered_json;
using namespace vgstein;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

// ------------------------------------------------------------------- output

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  return sweep::format_double(v);
}

// nlohmann prints shortest round-trip doubles; we want %.17g everywhere.
void dump(const json& j, std::ostream& os) {
  switch (j.type()) {
    case json::value_t::object: {
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',';
        first = false;
        os << json(k).dump() << ':';
        dump(v, os);
      }
      os << '}';
      break;
    }
    case json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        dump(j[i], os);
      }
      os << ']';
      break;
    }
    case json::value_t::number_float:
      os << num(j.get<double>());
      break;
    default:
      os << j.dump();
  }
}

std::string dumps(const json& j) {
  std::ostringstream os;
  dump(j, os);
  return os.str();
}

// A command's tabular view for CSV output.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

void emit(const json& result, const Table* table, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << dumps(result) << '\n';
    return;
  }
  if (ends_with(out_path, ".json")) {
    write_file(out_path, dumps(result) + "\n");
  } else if (ends_with(out_path, ".csv")) {
    if (!table) throw DomainError("this command has no tabular output; use a .json path");
    std::ostringstream os;
    for (std::size_t c = 0; c < table->columns.size(); ++c) {
      os << (c ? "," : "") << table->columns[c];
    }
    os << '\n';
    for (const auto& row : table->rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << num(row[c]);
      os << '\n';
    }
    write_file(out_path, os.str());
  } else {
    throw DomainError("--out must end in .csv or .json");
  }
}

// --------------------------------------------------------------- parameters

// Either (r, theta, sigma, mu) or (nu, alpha, beta, mu).
struct ParamFlags {
  double r = 1.0, theta = 0.0, sigma = 1.0, mu = 0.0;
  double nu = 0.0, alpha = 1.0, beta = 0.0;
  CLI::Option *o_nu = nullptr, *o_alpha = nullptr, *o_beta = nullptr;
  CLI::Option *o_r = nullptr, *o_theta = nullptr, *o_sigma = nullptr;

  void add(CLI::App* app) {
    o_r = app->add_option("--r", r, "shape r > 0 (first form)");
    o_theta = app->add_option("--theta", theta, "skewness theta (first form)");
    o_sigma = app->add_option("--sigma", sigma, "spread sigma > 0 (first form)");
    app->add_option("--mu", mu, "location");
    o_nu = app->add_option("--nu", nu, "nu > -1/2 (second form)");
    o_alpha = app->add_option("--alpha", alpha, "alpha > |beta| (second form)");
    o_beta = app->add_option("--beta", beta, "beta (second form)");
  }

  VGParams get() const {
    const bool second = o_nu->count() || o_alpha->count() || o_beta->count();
    const bool first = o_r->count() || o_theta->count() || o_sigma->count();
    if (second && first) throw DomainError("give either --r/--theta/--sigma or --nu/--alpha/--beta");
    return second ? VGParams::second(nu, alpha, beta, mu) : VGParams::first(r, theta, sigma, mu);
  }
};

json params_json(const VGParams& p) {
  return json{{"r", p.r}, {"theta", p.theta}, {"sigma", p.sigma}, {"mu", p.mu}};
}

HNorms norms_from_flags(const std::vector<double>& d123, double center) {
  if (d123.size() != 3) throw DomainError("--norms takes three values: ||h'||, ||h''||, ||h'''||");
  for (double v : d123) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("norms must be finite and >= 0");
  }
  if (!(center >= 0.0) || !std::isfinite(center)) throw DomainError("--center-norm must be >= 0");
  return {center, d123[0], d123[1], d123[2]};
}

json report_json(const bounds::BoundReport& b) {
  return json{{"gamma1", b.gamma1}, {"gamma2", b.gamma2}, {"gamma3", b.gamma3},
              {"m", b.m},           {"n", b.n},           {"r", b.r},
              {"M2", b.M2},         {"M3", b.M3},         {"M4", b.M4},
              {"total", b.total},   {"variant", bounds::variant_name(b.variant)},
              {"swapped", b.swapped}};
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Runs a sweep from config text and writes CSV + manifest, or JSON rows to stdout.
int run_sweep_text(const std::string& command, const std::string& text, const std::string& out,
                   int threads_override) {
  auto cfg = sweep::parse_config(text);
  if (threads_override >= 0) cfg.threads = threads_override;
  const std::string started = iso_now();
  const auto result = sweep::run_sweep(cfg);
  const std::string csv = sweep::to_csv(result, cfg);
  for (const auto& oc : result.outcomes) {
    if (!oc.ok) std::cerr << "cell m=" << oc.cell.m << " n=" << oc.cell.n << ": " << oc.error << '\n';
  }
  if (out.empty()) {
    json rows = json::array();
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    std::vector<std::string> cols;
    for (std::stringstream hs(header); std::getline(hs, line, ',');) cols.push_back(line);
    while (std::getline(in, line)) {
      json row;
      std::stringstream ls(line);
      std::string cell;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!std::getline(ls, cell, ',')) cell.clear();
        char* end = nullptr;
        const double v = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
        if (cell.empty()) {
          row[cols[c]] = nullptr;
        } else if (end && *end == '\0') {
          row[cols[c]] = v;  // non-finite prints as null
        } else if (cell == "true" || cell == "false") {
          row[cols[c]] = cell == "true";
        } else {
          row[cols[c]] = cell;
        }
      }
      rows.push_back(row);
    }
    std::cout << dumps(json{{"command", command}, {"rows", rows}}) << '\n';
  } else {
    if (!ends_with(out, ".csv")) throw DomainError("sweep output must be a .csv path");
    write_file(out, csv);
    json manifest{{"command", command},
                  {"config_text", text},
                  {"parameters",
                   {{"cells", sweep::cells(cfg).size()},
                    {"n_samples", cfg.n_samples},
                    {"threads", sim::resolve_threads(cfg.threads)}}},
                  {"seed", cfg.seed},
                  {"version", VGSTEIN_VERSION},
                  {"started", started},
                  {"finished", iso_now()},
                  {"outputs", json::array({out})}};
    write_file(out + ".manifest.json", manifest.dump(2) + "\n");
  }
  return result.failed_cells() == result.outcomes.size() ? kExitNumeric : 0;
}

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s;
}

template <class T>
std::string join_nums(const std::vector<T>& xs) {
  std::vector<std::string> s;
  for (auto x : xs) s.push_back(std::to_string(x));
  return join(s);
}

std::vector<double> stein_x_grid(const VGParams& p, const std::vector<double>& given) {
  if (!given.empty()) return given;
  std::vector<double> xs;
  const double half = 10.0 * p.sigma * std::sqrt(p.r);
  for (int i = 0; i <= 40; ++i) xs.push_back(p.mu - half + half * i / 20.0);
  return xs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variance-Gamma distributions, Stein solutions and approximation bounds"};
  // --h names a test function, so help is --help only.
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(VGSTEIN_VERSION));
  std::string out;

  auto add_out = [&out](CLI::App* sub) {
    sub->add_option("--out", out, "write CSV or JSON here (by extension)");
  };

  // density / cdf / mgf / moments / sample / convert
  ParamFlags pf;
  std::vector<double> xs, ts;
  int k_max = 4;
  std::size_t count = 1000;
  std::uint64_t seed = 1;

  auto* density = app.add_subcommand("density", "density at one or more x");
  pf.add(density);
  density->add_option("--x", xs, "evaluation points")->delimiter(',')->required();
  add_out(density);

  ParamFlags pf_cdf;
  auto* cdf = app.add_subcommand("cdf", "CDF at one or more x");
  pf_cdf.add(cdf);
  cdf->add_option("--x", xs, "evaluation points")->delimiter(',')->required();
  add_out(cdf);

  ParamFlags pf_mom;
  auto* moments = app.add_subcommand("moments", "raw moments M_0..M_k (mu must be 0)");
  pf_mom.add(moments);
  moments->add_option("--k", k_max, "highest order")->check(CLI::Range(0, 60));
  add_out(moments);

  ParamFlags pf_mgf;
  auto* mgf = app.add_subcommand("mgf", "moment generating function (mu must be 0)");
  pf_mgf.add(mgf);
  mgf->add_option("--t", ts, "arguments")->delimiter(',')->required();
  add_out(mgf);

  ParamFlags pf_sample;
  auto* sample = app.add_subcommand("sample", "draw from the mixture representation");
  pf_sample.add(sample);
  sample->add_option("--n", count, "number of draws")->check(CLI::Range(1ul, 100000000ul));
  sample->add_option("--seed", seed, "seed");
  add_out(sample);

  ParamFlags pf_conv;
  auto* convert = app.add_subcommand("convert", "print both parametrisations");
  pf_conv.add(convert);
  add_out(convert);

  // stein-solve / stein-check
  ParamFlags pf_solve;
  std::string h_name = "cos";
  int max_order = 2;
  auto* solve = app.add_subcommand("stein-solve", "bounded Stein solution f and derivatives");
  pf_solve.add(solve);
  solve->add_option("--h", h_name, "test function: cos, sin, tanh, bump, one, x, x2");
  solve->add_option("--x", xs, "evaluation points (default: 41 points over mu +/- 10 sigma sqrt r)")->delimiter(',');
  solve->add_option("--order", max_order, "highest derivative, 0..4")->check(CLI::Range(0, 4));
  add_out(solve);

  ParamFlags pf_check;
  std::string method = "quadrature";
  std::size_t mc_samples = 1000000;
  bool control = false;
  auto* check = app.add_subcommand("stein-check", "characterising residual over x^j exp(-c x^2)");
  pf_check.add(check);
  check->add_option("--method", method, "quadrature or mc")
      ->check(CLI::IsMember({"quadrature", "mc"}));
  check->add_option("--samples", mc_samples, "Monte Carlo draws")
      ->check(CLI::Range(1000ul, 1000000000ul));
  check->add_option("--seed", seed, "seed");
  check->add_flag("--normal-control", control, "evaluate under the moment-matched normal instead");
  add_out(check);

  // bound / d2-bound
  std::string law_x = "rademacher", law_y = "rademacher";
  std::uint64_t m = 100, n = 100;
  int r = 1;
  std::vector<double> norms;
  double center = 0.0;
  bool as_stated = false;
  auto* bound = app.add_subcommand("bound", "approximation bound for W_r against VG(r,0,1,0)");
  bound->add_option("--law-x", law_x, "rademacher, gaussian or uniform_pm");
  bound->add_option("--law-y", law_y, "rademacher, gaussian or uniform_pm");
  bound->add_option("--m", m)->check(CLI::PositiveNumber);
  bound->add_option("--n", n)->check(CLI::PositiveNumber);
  bound->add_option("--r", r)->check(CLI::PositiveNumber);
  auto* b_h = bound->add_option("--h", h_name, "built-in test function");
  auto* b_norms = bound->add_option("--norms", norms, "||h'||,||h''||,||h'''||")->delimiter(',');
  bound->add_option("--center-norm", center, "||h - VG h||");
  bound->add_flag("--as-stated", as_stated, "no min over the two orderings");
  b_h->excludes(b_norms);
  add_out(bound);

  auto* d2b = app.add_subcommand("d2-bound", "binary-sequence bound min{A, B}");
  d2b->add_option("--m", m)->check(CLI::PositiveNumber)->required();
  d2b->add_option("--n", n)->check(CLI::PositiveNumber)->required();
  d2b->add_option("--norms", norms, "||h'||,||h''||,||h'''||")->delimiter(',')->required();
  d2b->add_option("--center-norm", center, "||h - VG h||")->required();
  add_out(d2b);

  // simulate / d2-run
  std::string config_path, replay_path;
  std::vector<std::uint64_t> ms, ns;
  std::vector<int> rs{1};
  std::vector<std::string> hs{"cos"};
  std::size_t samples = 1000000;
  int threads = -1;
  bool fit = false;
  double budget = 0.0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo distances and bounds for W_r");
  auto* o_cfg = simulate->add_option("--config", config_path, "sweep config file")
                    ->check(CLI::ExistingFile);
  auto* o_replay = simulate->add_option("--replay", replay_path, "re-run a manifest")
                       ->check(CLI::ExistingFile);
  auto* o_m = simulate->add_option("--m", ms, "m values")->delimiter(',');
  simulate->add_option("--n", ns, "n values (default: m)")->delimiter(',');
  simulate->add_option("--r", rs, "r values")->delimiter(',');
  simulate->add_option("--law-x", law_x);
  simulate->add_option("--law-y", law_y);
  simulate->add_option("--h", hs, "test functions")->delimiter(',');
  simulate->add_option("--samples", samples)->check(CLI::Range(10000ul, 10000000000ul));
  simulate->add_option("--seed", seed);
  simulate->add_option("--threads", threads, "workers (VGSTEIN_THREADS caps)")
      ->check(CLI::NonNegativeNumber);
  simulate->add_flag("--rate-fit", fit, "fit log distance against log m over m = n cells");
  simulate->add_option("--time-budget", budget, "seconds per cell")->check(CLI::NonNegativeNumber);
  o_cfg->excludes(o_replay);
  o_cfg->excludes(o_m);
  o_replay->excludes(o_m);
  add_out(simulate);

  std::string seq1, seq2;
  auto* d2run = app.add_subcommand("d2-run", "D2 statistic of two sequences, or a D2 experiment");
  auto* o_s1 = d2run->add_option("--seq1", seq1, "first bit sequence");
  auto* o_s2 = d2run->add_option("--seq2", seq2, "second bit sequence");
  o_s1->needs(o_s2);
  o_s2->needs(o_s1);
  d2run->add_option("--m", m)->check(CLI::PositiveNumber);
  d2run->add_option("--n", n)->check(CLI::PositiveNumber);
  d2run->add_option("--sequences", samples)->check(CLI::Range(10000ul, 10000000000ul));
  d2run->add_option("--h", hs)->delimiter(',');
  d2run->add_option("--seed", seed);
  d2run->add_option("--threads", threads)->check(CLI::NonNegativeNumber);
  add_out(d2run);

  std::uint64_t k = 1, l = 1;
  auto* nonsmooth = app.add_subcommand("nonsmooth", "exact P(W = 0) for m = 2k, n = 2l");
  nonsmooth->add_option("--k", k)->check(CLI::Range(1ul, 1000000ul))->required();
  nonsmooth->add_option("--l", l)->check(CLI::Range(1ul, 1000000ul))->required();
  add_out(nonsmooth);

  double ineq_nu = 0.5, ineq_beta = 0.0;
  auto* bcheck = app.add_subcommand("bessel-check", "Bessel identities and kernel inequalities");
  auto* o_inu = bcheck->add_option("--nu", ineq_nu, "order for the kernel inequalities");
  bcheck->add_option("--beta", ineq_beta, "skew for the kernel inequalities")->needs(o_inu);
  add_out(bcheck);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*density || *cdf) {
      const bool is_density = density->parsed();
      const VGParams p = is_density ? pf.get() : pf_cdf.get();
      Table t{{"x", is_density ? "density" : "cdf"}, {}};
      json vals = json::array();
      std::vector<double> sorted;
      for (double x : xs) {
        if (!std::isfinite(x)) throw DomainError("x must be finite");
      }
      for (double x : xs) {
        const double v = is_density ? vg::density(p, x) : vg::cdf(p, x);
        vals.push_back(v);
        t.rows.push_back({x, v});
      }
      json res{{"params", params_json(p)}};
      const char* key = is_density ? "density" : "cdf";
      if (xs.size() == 1) {
        res["x"] = xs[0];
        res[key] = vals[0];
      } else {
        res["x"] = xs;
        res[key] = vals;
      }
      // A single density value prints bare, e.g. `vgstein density ... --x 0` -> 0.5.
      if (out.empty() && xs.size() == 1) {
        std::cout << num(vals[0].get<double>()) << '\n';
      } else {
        emit(res, &t, out);
      }
    } else if (*moments) {
      const VGParams p = pf_mom.get();
      const auto mv = vg::moments(p, k_max);
      Table t{{"k", "moment"}, {}};
      for (std::size_t i = 0; i < mv.size(); ++i) t.rows.push_back({double(i), mv[i]});
      emit(json{{"M", mv}}, &t, out);
    } else if (*mgf) {
      const VGParams p = pf_mgf.get();
      Table t{{"t", "mgf"}, {}};
      json vals = json::array();
      for (double tt : ts) {
        const double v = vg::mgf(p, tt);
        vals.push_back(v);
        t.rows.push_back({tt, v});
      }
      emit(json{{"params", params_json(p)}, {"t", ts}, {"mgf", vals}}, &t, out);
    } else if (*sample) {
      const VGParams p = pf_sample.get();
      const auto draws = vg::sample(p, seed, count);
      Table t{{"x"}, {}};
      for (double v : draws) t.rows.push_back({v});
      emit(json{{"params", params_json(p)}, {"seed", seed}, {"samples", draws}}, &t, out);
    } else if (*convert) {
      const VGParams p = pf_conv.get();
      emit(json{{"first", params_json(p)},
                {"second", {{"nu", p.nu()}, {"alpha", p.alpha()}, {"beta", p.beta()}, {"mu", p.mu}}}},
           nullptr, out);
    } else if (*solve) {
      const VGParams p = pf_solve.get();
      const auto h = builtin_test_function(h_name);
      const auto sol = stein::stein_solve(p, h);
      const auto grid = stein_x_grid(p, xs);
      Table t{{"x", "f"}, {}};
      for (int d = 1; d <= max_order; ++d) t.columns.push_back("d" + std::to_string(d));
      json rows = json::array();
      for (double x : grid) {
        std::vector<double> row{x};
        const auto v = sol.values(x);
        row.push_back(v.f);
        if (max_order >= 1) row.push_back(v.d1);
        if (max_order >= 2) row.push_back(v.d2);
        for (int d = 3; d <= max_order; ++d) row.push_back(sol.derivative(x, d));
        json jr;
        for (std::size_t c = 0; c < row.size(); ++c) jr[t.columns[c]] = row[c];
        rows.push_back(jr);
        t.rows.push_back(std::move(row));
      }
      emit(json{{"params", params_json(p)},
                {"h", h_name},
                {"target", sol.target_expectation()},
                {"unique", sol.unique()},
                {"rows", rows}},
           &t, out);
    } else if (*check) {
      const VGParams p = pf_check.get();
      const auto suite = stein::damped_polynomial_suite();
      const auto [mean, var] = vg::mean_variance(p);
      json rows = json::array();
      Table t{{"j", "c", "value", "se"}, {}};
      double worst = 0.0;
      for (std::size_t i = 0; i < suite.size(); ++i) {
        const double c = i < 6 ? 0.5 : 0.1;
        const double j = static_cast<double>(i % 6);
        stein::ResidualResult rr;
        if (control) {
          const auto normal = [&](double x) {
            return std::exp(-0.5 * (x - mean) * (x - mean) / var) / std::sqrt(2 * std::numbers::pi * var);
          };
          rr.value = stein::operator_expectation(p, suite[i], normal, mean);
        } else {
          rr = stein::characterization_residual(
              p, suite[i],
              method == "mc" ? stein::ResidualMethod::kMonteCarlo : stein::ResidualMethod::kQuadrature,
              seed, mc_samples);
        }
        worst = std::max(worst, std::abs(rr.value));
        rows.push_back(json{{"j", j}, {"c", c}, {"value", rr.value}, {"se", rr.std_error}});
        t.rows.push_back({j, c, rr.value, rr.std_error});
      }
      emit(json{{"params", params_json(p)},
                {"method", control ? "normal-control" : method},
                {"max_abs", worst},
                {"residuals", rows}},
           &t, out);
    } else if (*bound) {
      HNorms hn;
      if (b_norms->count()) {
        hn = norms_from_flags(norms, center);
      } else {
        const auto h = builtin_test_function(h_name);
        hn = h.norms(harness::vg_target(h, r));
      }
      const auto lx = sim::parse_law(law_x), ly = sim::parse_law(law_y);
      const auto rep =
          bounds::vg_bound(sim::law_moments(lx), sim::law_moments(ly), m, n, r, hn, !as_stated);
      json res = report_json(rep);
      res["law_x"] = law_x;
      res["law_y"] = law_y;
      emit(res, nullptr, out);
    } else if (*d2b) {
      const HNorms hn = norms_from_flags(norms, center);
      const auto rad = MomentBundle::rademacher();
      const auto a = bounds::vg_bound(rad, rad, m, n, 1, hn, false);
      const auto b = bounds::vg_bound(rad, rad, n, m, 1, hn, false);
      const auto best = bounds::d2_bound(m, n, hn);
      emit(json{{"m", m},
                {"n", n},
                {"A", a.total},
                {"B", b.total},
                {"min", best.total},
                {"M3", best.M3},
                {"M4", best.M4}},
           nullptr, out);
    } else if (*simulate) {
      std::string text, command = "simulate";
      if (!replay_path.empty()) {
        std::ifstream in(replay_path);
        const json manifest = json::parse(in);
        text = manifest.at("config_text").get<std::string>();
        command = manifest.value("command", "simulate");
      } else if (!config_path.empty()) {
        std::ifstream in(config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      } else {
        if (ms.empty()) throw DomainError("simulate needs --m, --config or --replay");
        std::ostringstream os;
        os << "m = " << join_nums(ms) << '\n';
        if (!ns.empty()) os << "n = " << join_nums(ns) << '\n';
        os << "r = " << join_nums(rs) << '\n'
           << "laws = " << law_x << '/' << law_y << '\n'
           << "h = " << join(hs) << '\n'
           << "n_samples = " << samples << '\n'
           << "seed = " << seed << '\n'
           << "rate_fit = " << (fit ? "true" : "false") << '\n'
           << "time_budget = " << budget << '\n';
        text = os.str();
      }
      return run_sweep_text(command, text, out, threads);
    } else if (*d2run) {
      if (o_s1->count()) {
        const auto v = harness::d2_statistic(seq1, seq2);
        emit(json{{"m", seq1.size()}, {"n", seq2.size()}, {"D2", v.d2}, {"W", v.w}}, nullptr, out);
      } else {
        std::ostringstream os;
        os << "m = " << m << "\nn = " << n << "\nstatistic = d2\nh = " << join(hs)
           << "\nn_samples = " << samples << "\nseed = " << seed << '\n';
        return run_sweep_text("d2-run", os.str(), out, threads);
      }
    } else if (*nonsmooth) {
      const auto pm = harness::nonsmooth_exact(k, l);
      emit(json{{"k", k},
                {"l", l},
                {"m", 2 * k},
                {"n", 2 * l},
                {"exact", pm.exact},
                {"stirling", pm.stirling},
                {"vg_target", 0.0}},
           nullptr, out);
    } else if (*bcheck) {
      const auto sc = bessel::self_check();
      json res{{"wronskian_max_rel", sc.wronskian_max_rel},
               {"k_half_max_rel", sc.k_half_max_rel},
               {"i_ratio_max_dev", sc.i_ratio_max_dev},
               {"k_ratio_max_dev", sc.k_ratio_max_dev},
               {"grid_points", sc.grid_points},
               {"pass", sc.pass()}};
      bool ineq_ok = true;
      if (o_inu->count()) {
        std::vector<double> grid;
        for (int i = 0; i <= 60; ++i) grid.push_back(0.05 + 0.5 * i);
        const auto rep = bessel::check_kernel_inequalities(ineq_nu, ineq_beta, grid);
        json pts = json::array();
        for (const auto& pt : rep.points) {
          pts.push_back(json{{"name", pt.name}, {"x", pt.x}, {"lhs", pt.lhs}, {"rhs", pt.rhs},
                             {"pass", pt.pass}});
        }
        ineq_ok = rep.all_pass();
        res["inequalities"] = json{{"nu", ineq_nu}, {"beta", ineq_beta}, {"all_pass", ineq_ok},
                                   {"points", pts}};
      }
      emit(res, nullptr, out);
      return sc.pass() && ineq_ok ? 0 : kExitNumeric;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << " (best " << num(e.best_estimate()) << ", err "
              << num(e.error_estimate()) << ")\n";
    return kExitNumeric;
  } catch (const PartialResultError& e) {
    std::cerr << "partial result: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const InsufficientSignalError& e) {
    std::cerr << "insufficient signal: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad manifest: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
