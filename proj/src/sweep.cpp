#include "vgstein/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vgstein/errors.hpp"

namespace vgstein::sweep {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = v.find(',');
    const auto item = trim(v.substr(0, c));
    if (!item.empty()) out.push_back(item);
    if (c == std::string_view::npos) break;
    v.remove_prefix(c + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError(where + ": not a number: " + std::string(s));
  }
  return value;
}

bool parse_bool(std::string_view s, const std::string& where) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw DomainError(where + ": expected true or false");
}

}  // namespace

SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  bool have_m = false;
  std::map<std::string, int> seen;
  int lineno = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw DomainError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (seen[key]++ > 0) throw DomainError(where + ": duplicate key " + key);
    const auto items = split_list(value);

    if (key == "m" || key == "n") {
      auto& dst = key == "m" ? cfg.m : cfg.n;
      for (auto it : items) {
        const auto v = parse_number<std::uint64_t>(it, where);
        if (v == 0) throw DomainError(where + ": " + key + " must be positive");
        dst.push_back(v);
      }
      if (key == "m") have_m = true;
    } else if (key == "pairing") {
      if (value == "diagonal") {
        cfg.diagonal = true;
      } else if (value == "grid") {
        cfg.diagonal = false;
      } else {
        throw DomainError(where + ": pairing must be diagonal or grid");
      }
    } else if (key == "r") {
      cfg.r.clear();
      for (auto it : items) {
        const int v = parse_number<int>(it, where);
        if (v < 1) throw DomainError(where + ": r must be a positive integer");
        cfg.r.push_back(v);
      }
    } else if (key == "laws") {
      cfg.laws.clear();
      for (auto it : items) {
        const auto slash = it.find('/');
        const auto lx = trim(it.substr(0, slash));
        const auto ly = slash == std::string_view::npos ? lx : trim(it.substr(slash + 1));
        try {
          cfg.laws.emplace_back(sim::parse_law(lx), sim::parse_law(ly));
        } catch (const DomainError& e) {
          throw DomainError(where + ": " + e.what());
        }
      }
    } else if (key == "h") {
      cfg.h.clear();
      for (auto it : items) {
        try {
          builtin_test_function(it);
        } catch (const DomainError& e) {
          throw DomainError(where + ": " + e.what());
        }
        cfg.h.emplace_back(it);
      }
    } else if (key == "n_samples") {
      cfg.n_samples = parse_number<std::size_t>(value, where);
      if (cfg.n_samples < harness::kMinSamples) {
        throw DomainError(where + ": n_samples must be at least " +
                          std::to_string(harness::kMinSamples));
      }
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, where);
    } else if (key == "statistic") {
      if (value == "d2") {
        cfg.d2 = true;
      } else if (value == "product") {
        cfg.d2 = false;
      } else {
        throw DomainError(where + ": statistic must be product or d2");
      }
    } else if (key == "rate_fit") {
      cfg.fit_rate = parse_bool(value, where);
    } else if (key == "threads") {
      cfg.threads = parse_number<int>(value, where);
      if (cfg.threads < 0) throw DomainError(where + ": threads must be >= 0");
    } else if (key == "time_budget") {
      cfg.time_budget_seconds = parse_number<double>(value, where);
      if (!(cfg.time_budget_seconds >= 0.0)) throw DomainError(where + ": time_budget must be >= 0");
    } else {
      throw DomainError(where + ": unknown key " + key);
    }
  }
  if (!have_m || cfg.m.empty()) throw DomainError("empty grid: no m values");
  if (cfg.r.empty() || cfg.laws.empty() || cfg.h.empty()) throw DomainError("empty grid");
  if (cfg.diagonal && !cfg.n.empty() && cfg.n.size() != cfg.m.size()) {
    throw DomainError("diagonal pairing needs as many n values as m values");
  }
  if (cfg.d2) {
    for (int r : cfg.r) {
      if (r != 1) throw DomainError("statistic = d2 requires r = 1");
    }
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<Cell> cells(const SweepConfig& cfg) {
  const auto& ns = cfg.n.empty() ? cfg.m : cfg.n;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> mn;
  if (cfg.diagonal) {
    for (std::size_t i = 0; i < cfg.m.size(); ++i) mn.emplace_back(cfg.m[i], ns[i]);
  } else {
    for (auto m : cfg.m) {
      for (auto n : ns) mn.emplace_back(m, n);
    }
  }
  std::vector<Cell> out;
  for (const auto& [lx, ly] : cfg.laws) {
    for (int r : cfg.r) {
      for (const auto& [m, n] : mn) out.push_back({m, n, r, lx, ly});
    }
  }
  return out;
}

std::size_t SweepOutput::failed_cells() const {
  std::size_t k = 0;
  for (const auto& o : outcomes) k += o.ok ? 0 : 1;
  return k;
}

SweepOutput run_sweep(const SweepConfig& cfg) {
  std::vector<TestFunction> suite;
  for (const auto& name : cfg.h) suite.push_back(builtin_test_function(name));

  SweepOutput out;
  for (const auto& cell : cells(cfg)) {
    CellOutcome oc;
    oc.cell = cell;
    try {
      if (cfg.d2) {
        oc.result = harness::d2_experiment(cell.m, cell.n, cfg.n_samples, suite, cfg.seed,
                                           cfg.threads, cfg.time_budget_seconds);
      } else {
        harness::SimConfig sc;
        sc.m = cell.m;
        sc.n = cell.n;
        sc.r = cell.r;
        sc.law_x = cell.law_x;
        sc.law_y = cell.law_y;
        sc.n_samples = cfg.n_samples;
        sc.seed = cfg.seed;
        sc.h_suite = suite;
        sc.threads = cfg.threads;
        sc.time_budget_seconds = cfg.time_budget_seconds;
        oc.result = harness::simulate_w(sc);
      }
      oc.ok = true;
    } catch (const std::exception& e) {
      oc.error = e.what();
    }
    out.outcomes.push_back(std::move(oc));
  }

  if (cfg.fit_rate) {
    for (const auto& [lx, ly] : cfg.laws) {
      for (int r : cfg.r) {
        for (const auto& h : cfg.h) {
          FitOutcome fo;
          fo.r = r;
          fo.law_x = cfg.d2 ? "bits" : sim::law_name(lx);
          fo.law_y = cfg.d2 ? "bits" : sim::law_name(ly);
          fo.h = h;
          std::vector<harness::SimResult> series;
          for (const auto& oc : out.outcomes) {
            if (oc.ok && oc.cell.r == r && oc.cell.law_x == lx && oc.cell.law_y == ly &&
                oc.cell.m == oc.cell.n) {
              series.push_back(oc.result);
            }
          }
          try {
            fo.fit = harness::rate_fit(series, h);
            fo.ok = true;
          } catch (const std::exception& e) {
            fo.error = e.what();
          }
          out.fits.push_back(std::move(fo));
        }
      }
      if (cfg.d2) break;
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const SweepOutput& out, const SweepConfig& cfg) {
  std::ostringstream os;
  os << "m,n,r,law_x,law_y,h,n_samples,estimate,se,target,distance,"
        "gamma1,gamma2,gamma3,M2,M3,M4,bound,pass\n";
  const auto f = format_double;
  for (const auto& oc : out.outcomes) {
    const std::string lx = cfg.d2 ? "bits" : sim::law_name(oc.cell.law_x);
    const std::string ly = cfg.d2 ? "bits" : sim::law_name(oc.cell.law_y);
    if (!oc.ok) {
      for (const auto& h : cfg.h) {
        os << oc.cell.m << ',' << oc.cell.n << ',' << oc.cell.r << ',' << lx << ',' << ly << ','
           << h << ',' << cfg.n_samples << ",,,,,,,,,,,,error\n";
      }
      continue;
    }
    const auto& res = oc.result;
    for (const auto& hr : res.per_h) {
      const auto& b = hr.bound;
      os << res.m << ',' << res.n << ',' << res.r << ',' << lx << ',' << ly << ',' << hr.h << ','
         << res.n_samples << ',' << f(hr.estimate) << ',' << f(hr.se) << ',' << f(hr.target) << ','
         << f(hr.distance) << ',' << f(b.gamma1) << ',' << f(b.gamma2) << ',' << f(b.gamma3) << ','
         << f(b.M2) << ',' << f(b.M3) << ',' << f(b.M4) << ',' << f(b.total) << ','
         << (hr.pass ? "true" : "false") << '\n';
    }
  }
  for (const auto& fo : out.fits) {
    os << "fit,," << fo.r << ',' << fo.law_x << ',' << fo.law_y << ',' << fo.h << ','
       << (fo.ok ? std::to_string(fo.fit.used) : "") << ',' << (fo.ok ? f(fo.fit.slope) : "")
       << ",,,,,,,,,,," << (fo.ok ? "ok" : "insufficient") << '\n';
  }
  return os.str();
}

}  // namespace vgstein::sweep
