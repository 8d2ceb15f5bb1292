#pragma once

// Subcommand table, output rendering and run manifests for the fracwalk tool.
// run_cli is the whole program; main() only binds it to the process streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "fracwalk/fracwalk.hpp"

namespace fracwalk::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Parameters

class Params {
 public:
  std::map<std::string, std::string> values;

  const std::string& text(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end()) throw UsageError("missing parameter " + key);
    return it->second;
  }
  double num(const std::string& key) const { return parse_double(key, text(key)); }
  std::uint64_t whole(const std::string& key) const {
    const std::string& s = text(key);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw UsageError(key + ": expected a nonnegative integer, got '" + s + "'");
    return v;
  }
  bool flag(const std::string& key) const { return text(key) == "true"; }
  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(text(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    if (out.empty()) throw UsageError(key + ": expected a comma-separated list");
    return out;
  }

 private:
  static double parse_double(const std::string& key, std::string s) {
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
      throw UsageError(key + ": expected a number, got '" + s + "'");
    return v;
  }
};

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  Table() = default;
  Table(std::string s, std::vector<std::string> c) : schema(std::move(s)), columns(std::move(c)) {}

  std::string schema;  // name/version
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
  int status = 0;  // exit status the command asks for
  bool plain = false;  // bare newline-delimited values of the last column
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return *d;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

inline std::string render(const Table& t, bool json) {
  std::ostringstream out;
  if (json) {
    nlohmann::ordered_json head;
    head["schema"] = t.schema;
    head["columns"] = t.columns;
    for (const auto& [k, v] : t.meta) head[k] = v;
    out << head.dump() << '\n';
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
      out << obj.dump() << '\n';
    }
    return out.str();
  }
  if (t.plain) {
    for (const auto& row : t.rows) out << csv_cell(row.back()) << '\n';
    return out.str();
  }
  out << "# schema=" << t.schema;
  for (const auto& [k, v] : t.meta) out << ' ' << k << '=' << v;
  out << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
  return out.str();
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// Law parsing

inline WaitingLaw waiting_law(const Params& p, const std::string& key) {
  const std::string& name = p.text(key);
  if (name == "exponential") return WaitingLaw::exponential(p.num("rate"));
  if (name == "mittag-leffler") return WaitingLaw::mittag_leffler(p.num("beta"));
  if (name == "pareto") return WaitingLaw::pareto(p.num("beta"), p.num("theta"));
  throw UsageError(key + ": unknown waiting law '" + name + "' (exponential, mittag-leffler, pareto)");
}

inline JumpLaw jump_law(const Params& p) {
  const std::string& name = p.text("jump");
  if (name == "gaussian") return JumpLaw::gaussian(p.num("sigma"));
  if (name == "two-point") return JumpLaw::two_point();
  if (name == "sym-pareto") return JumpLaw::sym_pareto(p.num("alpha"), p.num("jump-theta"));
  if (name == "sym-stable") return JumpLaw::sym_stable(p.num("alpha"));
  if (name == "unit-drift") return JumpLaw::unit_drift();
  throw UsageError("jump: unknown jump law '" + name + "' (gaussian, two-point, sym-pareto, sym-stable, unit-drift)");
}

// ---------------------------------------------------------------------------
// Subcommands

struct ParamSpec {
  std::string name;
  std::string fallback;
  std::string help;
  bool flag = false;
};

struct Context {
  unsigned threads = 1;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<ParamSpec> params;
  std::function<Table(const Params&, const Context&)> run;
};

inline Table cmd_ml_eval(const Params& p, const Context&) {
  Table t{"ml-eval/1", {"argument", "value", "abs_error_bound", "method"}};
  const auto row = [&](double x, const EvalResult<double>& r) {
    t.rows.push_back({x, r.value, r.abs_error_bound, std::string(to_string(r.method_used))});
  };
  if (p.flag("mwright")) {
    t.meta.push_back({"function", "mwright"});
    for (double z : p.list("z")) row(z, mwright(p.num("beta"), z));
  } else if (p.flag("survival")) {
    // E_beta(-t^beta)
    const double beta = p.num("beta");
    t.meta.push_back({"function", "survival"});
    for (double x : p.list("t")) {
      detail::require(beta > 0.0 && beta <= 1.0, "survival exponent must lie in (0, 1]");
      detail::require(x >= 0.0, "time must be nonnegative");
      row(x, x == 0.0 ? EvalResult<double>{1.0, 0.0, Method::series}
                      : ml_one(beta, -std::pow(x, beta), unbounded_ml_options()));
    }
  } else {
    const double alpha = p.num("alpha");
    const double b = p.text("beta2").empty() ? 1.0 : p.num("beta2");
    t.meta.push_back({"function", "mittag-leffler"});
    for (double z : p.list("z")) row(z, ml_two(alpha, b, z));
  }
  return t;
}

inline Table cmd_sample(const Params& p, const Context&) {
  Table t{"sample/1", {"index", "value"}};
  t.plain = p.text("format") == "plain";
  if (!t.plain && p.text("format") != "csv") throw UsageError("format: expected csv or plain");
  RngStream rng(p.whole("seed"), p.whole("stream"));
  const std::string& law = p.text("law");
  std::function<double()> draw;
  if (law == "one-sided-stable") {
    const double beta = p.num("beta");
    detail::require(beta > 0.0 && beta < 1.0, "one-sided stable exponent must lie in (0, 1)");
    draw = [&] { return sample_one_sided_stable(beta, rng); };
  } else if (law == "exponential" || law == "mittag-leffler" || law == "pareto") {
    const WaitingLaw w = waiting_law(p, "law");
    draw = [&, w] { return sample_waiting(w, rng); };
  } else {
    Params q = p;
    q.values["jump"] = law;
    const JumpLaw j = jump_law(q);
    draw = [&, j] { return sample_jump(j, rng); };
  }
  const std::uint64_t n = p.whole("count");
  for (std::uint64_t i = 0; i < n; ++i) t.rows.push_back({static_cast<std::int64_t>(i), draw()});
  return t;
}

inline Table cmd_renewal_sim(const Params& p, const Context& ctx) {
  const WaitingLaw law = waiting_law(p, "law");
  const double horizon = p.num("horizon");
  const ThinningConfig thin{p.num("q"), p.num("tau")};
  thin.validate();
  const bool thinned = thin.q != 1.0 || thin.tau != 1.0;
  const std::size_t n = p.whole("paths");
  const std::uint64_t seed = p.whole("seed"), stream = p.whole("stream");
  std::vector<RenewalPath> paths(n);
  parallel_for(n, ctx.threads, [&](std::size_t i) {
    RngStream rng = RngStream::for_path(seed, stream, i);
    paths[i] = simulate_renewal(law, horizon, rng);
    if (thinned) paths[i] = thin_path(paths[i], thin, rng);
  });
  const std::string& table = p.text("table");
  if (table == "events") {
    Table t{"renewal-events/1", {"path", "index", "time"}};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < paths[i].size(); ++k)
        t.rows.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(k + 1), paths[i].event_times[k]});
    return t;
  }
  if (table != "pmf") throw UsageError("table: expected events or pmf");
  const double at = horizon * thin.tau;
  std::vector<double> freq;
  for (const auto& path : paths) {
    const std::size_t k = counting_number(path, at);
    if (k >= freq.size()) freq.resize(k + 1, 0.0);
    freq[k] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(n);
  Table t{"renewal-pmf/1", {"k", "empirical", "analytic"}};
  t.meta.push_back({"t", format_double(at)});
  for (std::size_t k = 0; k < freq.size(); ++k) {
    double exact = std::numeric_limits<double>::quiet_NaN();
    if (!thinned && law.kind() == WaitingLaw::Kind::mittag_leffler) {
      exact = counting_pmf(law.beta(), at, static_cast<int>(k));
    } else if (!thinned && law.kind() == WaitingLaw::Kind::exponential) {
      const double m = law.rate() * at;
      exact = std::exp(static_cast<double>(k) * std::log(m) - m - std::lgamma(k + 1.0));
    }
    t.rows.push_back({static_cast<std::int64_t>(k), freq[k], exact});
  }
  return t;
}

inline Table cmd_thin_demo(const Params& p, const Context&) {
  const WaitingLaw law = waiting_law(p, "law");
  const auto s = p.list("s");
  const auto taus = p.list("tau");
  Table t{"thin-demo/1", {"tau", "q", "s", "deviation"}};
  for (const auto& row : thinning_limit_curve(law, s, taus))
    for (std::size_t i = 0; i < s.size(); ++i) t.rows.push_back({row.tau, row.q, s[i], row.deviation[i]});
  return t;
}

inline CtrwSample run_ctrw(const Params& p, const Context& ctx, CtrwConfig& cfg) {
  const WaitingLaw w = waiting_law(p, "waiting");
  const JumpLaw j = jump_law(p);
  const double h = p.num("h"), a = p.num("a");
  const ScaleState scale = p.flag("well-scaled") ? ScaleState::well_scaled_from(w, j, h, a)
                                                 : ScaleState::make(w, j, h, p.num("tau"), a);
  cfg = CtrwConfig{w, j, scale, static_cast<std::size_t>(p.whole("paths")), p.list("times")};
  CtrwOptions opt;
  opt.threads = ctx.threads;
  return simulate_ctrw(cfg, RngStream(p.whole("seed"), p.whole("stream")), opt);
}

inline Table cmd_ctrw_sim(const Params& p, const Context& ctx) {
  CtrwConfig cfg{WaitingLaw::exponential(1.0), JumpLaw::two_point(), {}, 1, {}};
  const CtrwSample out = run_ctrw(p, ctx, cfg);
  const std::string& table = p.text("table");
  Table t;
  t.meta = {{"h", format_double(cfg.scale.h)}, {"tau", format_double(cfg.scale.tau)},
            {"a", format_double(cfg.scale.a)}, {"paths", std::to_string(cfg.n_paths)}};
  if (table == "histogram") {
    t.schema = "ctrw-histogram/1";
    t.columns = {"t", "bin_left", "bin_right", "density"};
    for (std::size_t i = 0; i < out.observation_times.size(); ++i) {
      const double ti = out.observation_times[i];
      const auto f = empirical_density(out.positions[i], ti, p.num("x-min"), p.num("x-max"), p.whole("bins"));
      for (std::size_t b = 0; b < f.values.size(); ++b) t.rows.push_back({ti, f.grid[b], f.grid[b + 1], f.values[b]});
      t.meta.push_back({"outside_mass_t" + format_double(ti), format_double(f.mass_below + f.mass_above)});
    }
  } else if (table == "charfn") {
    t.schema = "ctrw-charfn/1";
    t.columns = {"t", "kappa", "re_estimate", "stderr"};
    const auto ks = p.list("kappa");
    for (std::size_t i = 0; i < out.observation_times.size(); ++i) {
      const double ti = out.observation_times[i];
      const auto f = empirical_char_function(out.positions[i], ks, ti);
      for (std::size_t k = 0; k < ks.size(); ++k) t.rows.push_back({ti, ks[k], f.values[k], f.std_errors[k]});
    }
  } else {
    throw UsageError("table: expected histogram or charfn");
  }
  return t;
}

inline Table cmd_density(const Params& p, const Context& ctx) {
  const FracDiffProblem prob{p.num("alpha"), p.num("beta"), p.num("t")};
  prob.validate();
  const double lo = p.num("x-min"), hi = p.num("x-max");
  const auto n = static_cast<std::size_t>(p.whole("points"));
  if (!(hi > lo) || n < 2) throw UsageError("need x-max > x-min and at least two points");
  const std::string& route = p.text("route");
  Table t{"density/1", {"x", "u"}};
  t.meta.push_back({"route", route});
  if (route == "mc") {
    const std::vector<double> times{prob.t};
    const auto mc = sample_subordination(prob, p.num("dt-star"), times, p.whole("paths"),
                                         RngStream(p.whole("seed"), p.whole("stream")), ctx.threads);
    const auto f = empirical_density(mc.positions[0], prob.t, lo, hi, n);
    for (std::size_t i = 0; i < n; ++i) t.rows.push_back({0.5 * (f.grid[i] + f.grid[i + 1]), f.values[i]});
    return t;
  }
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  DensityResult d;
  if (route == "fourier") {
    d = density_fourier(prob, xs);
  } else if (route == "subordination") {
    d = density_subordination(prob, xs);
  } else {
    throw UsageError("route: expected fourier, subordination or mc");
  }
  for (std::size_t i = 0; i < n; ++i) t.rows.push_back({xs[i], d.u[i]});
  return t;
}

inline Table cmd_subordinate(const Params& p, const Context&) {
  const FracDiffProblem prob{p.num("alpha"), p.num("beta"), 1.0};
  Table t{"subordinate/1", {"path", "operational_time", "t", "x"}};
  const std::size_t n = p.whole("paths");
  const std::uint64_t seed = p.whole("seed"), stream = p.whole("stream");
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng = RngStream::for_path(seed, stream, i);
    for (const auto& pt : simulate_parametric_subordination(prob, p.num("dt-star"), p.whole("steps"), rng))
      t.rows.push_back({static_cast<std::int64_t>(i), pt.operational_time, pt.physical_time, pt.position});
  }
  return t;
}

inline Table cmd_variance_scan(const Params& p, const Context& ctx) {
  const double alpha = p.num("alpha"), beta = p.num("beta");
  const auto times = p.list("t");
  const WaitingLaw w = WaitingLaw::mittag_leffler(beta);
  const JumpLaw j = alpha == 2.0 ? JumpLaw::gaussian(std::sqrt(2.0)) : JumpLaw::sym_stable(alpha);
  const CtrwConfig cfg{w, j, ScaleState::well_scaled_from(w, j, p.num("h")), static_cast<std::size_t>(p.whole("paths")),
                       times};
  CtrwOptions opt;
  opt.threads = ctx.threads;
  const auto out = simulate_ctrw(cfg, RngStream(p.whole("seed"), p.whole("stream")), opt);
  Table t{"variance-scan/1", {"t", "analytic", "empirical", "stderr"}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto exact = variance({alpha, beta, times[i]});
    const auto v = ctrw_variance(j, out.positions[i]);
    t.rows.push_back({times[i], exact.value, v.value, v.std_error});
  }
  return t;
}

inline Table cmd_validate(const Params& p, const Context& ctx) {
  validation::Options opt;
  opt.seed = p.whole("seed");
  opt.threads = ctx.threads;
  std::vector<const validation::Check*> chosen;
  if (!p.text("only").empty()) {
    std::stringstream ss(p.text("only"));
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto* c = validation::find_check(name);
      if (!c) throw UsageError("only: unknown check '" + name + "'");
      chosen.push_back(c);
    }
  } else {
    for (const auto& c : validation::registry())
      if (!p.flag("quick") || c.quick) chosen.push_back(&c);
  }
  Table t{"validate/1", {"check", "criterion", "status", "item", "value", "limit", "item_status"}};
  int failed = 0;
  bool broken = false;
  for (const auto* c : chosen) {
    const auto r = validation::run_check(*c, opt);
    const std::string status = r.passed() ? "pass" : "fail";
    if (!r.passed()) ++failed;
    for (const auto& m : r.items)
      t.rows.push_back({r.name, static_cast<std::int64_t>(r.criterion), status, m.label, m.value, m.limit,
                        std::string(m.passed ? "pass" : "fail")});
    if (!r.error.empty()) {
      broken = true;
      t.rows.push_back({r.name, static_cast<std::int64_t>(r.criterion), status, "error: " + r.error,
                        std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                        std::string("fail")});
    }
  }
  t.meta = {{"checks", std::to_string(chosen.size())}, {"failed", std::to_string(failed)}};
  t.status = broken ? 3 : failed ? 1 : 0;
  return t;
}

inline const std::vector<Command>& commands() {
  static const std::vector<Command> table{
      {"ml-eval",
       "Mittag-Leffler, survival or M-Wright values",
       {{"alpha", "0.5", "order alpha of E_alpha,beta2"},
        {"beta2", "", "second parameter (empty: 1)"},
        {"z", "-1", "comma-separated arguments"},
        {"survival", "false", "evaluate E_beta(-t^beta) at --t", true},
        {"mwright", "false", "evaluate M_beta(z) at --z", true},
        {"beta", "0.5", "exponent for --survival and --mwright"},
        {"t", "1", "comma-separated times for --survival"}},
       cmd_ml_eval},
      {"sample",
       "Random variates from one stream",
       {{"law", "mittag-leffler",
         "exponential, mittag-leffler, pareto, one-sided-stable, gaussian, two-point, sym-pareto, sym-stable, unit-drift"},
        {"rate", "1", "exponential rate"},
        {"beta", "0.5", "waiting exponent"},
        {"theta", "1", "pareto scale"},
        {"alpha", "1.5", "jump exponent"},
        {"sigma", "1", "gaussian standard deviation"},
        {"jump-theta", "1", "symmetric pareto scale"},
        {"count", "10", "number of samples"},
        {"seed", "1", "seed"},
        {"stream", "0", "stream id"},
        {"format", "csv", "csv or plain"}},
       cmd_sample},
      {"renewal-sim",
       "Renewal paths, optionally thinned: event times or counting pmf",
       {{"law", "mittag-leffler", "exponential, mittag-leffler or pareto"},
        {"rate", "1", "exponential rate"},
        {"beta", "0.5", "waiting exponent"},
        {"theta", "1", "pareto scale"},
        {"horizon", "10", "simulation horizon"},
        {"paths", "1", "number of paths"},
        {"q", "1", "keep probability of thinning"},
        {"tau", "1", "time scale applied after thinning"},
        {"table", "events", "events or pmf (counting pmf at horizon * tau)"},
        {"seed", "1", "seed"},
        {"stream", "0", "stream id"}},
       cmd_renewal_sim},
      {"thin-demo",
       "Distance of thinned-and-rescaled waiting transforms from 1/(1+s^beta)",
       {{"law", "pareto", "exponential, mittag-leffler or pareto"},
        {"rate", "1", "exponential rate"},
        {"beta", "0.75", "waiting exponent"},
        {"theta", "1", "pareto scale"},
        {"s", "0.25,1,4", "Laplace arguments"},
        {"tau", "0.1,0.01,0.001,0.0001", "decreasing time scales"}},
       cmd_thin_demo},
      {"ctrw-sim",
       "Continuous-time random walk Monte Carlo: histograms or characteristic function",
       {{"waiting", "mittag-leffler", "exponential, mittag-leffler or pareto"},
        {"rate", "1", "exponential rate"},
        {"beta", "0.5", "waiting exponent"},
        {"theta", "1", "pareto scale"},
        {"jump", "gaussian", "gaussian, two-point, sym-pareto, sym-stable or unit-drift"},
        {"sigma", "1.4142135623730951", "gaussian standard deviation"},
        {"alpha", "1.5", "jump exponent"},
        {"jump-theta", "1", "symmetric pareto scale"},
        {"h", "1", "space scale"},
        {"tau", "1", "time scale (ignored with --well-scaled)"},
        {"a", "1", "respeeding factor, at most 1"},
        {"well-scaled", "false", "derive tau from h", true},
        {"paths", "10000", "number of paths"},
        {"times", "1", "observation times"},
        {"table", "histogram", "histogram or charfn"},
        {"x-min", "-5", "histogram range start"},
        {"x-max", "5", "histogram range end"},
        {"bins", "40", "histogram bins"},
        {"kappa", "0.5,1,2", "wavenumbers for charfn"},
        {"seed", "1", "seed"},
        {"stream", "0", "stream id"}},
       cmd_ctrw_sim},
      {"density",
       "Space-time fractional diffusion density u(x,t)",
       {{"alpha", "1.5", "space exponent in (0, 2]"},
        {"beta", "0.75", "time exponent in (0, 1]"},
        {"t", "1", "time"},
        {"x-min", "-5", "grid start"},
        {"x-max", "5", "grid end"},
        {"points", "101", "grid points (bins for mc)"},
        {"route", "fourier", "fourier, subordination or mc"},
        {"paths", "100000", "paths for mc"},
        {"dt-star", "0.002", "operational step for mc"},
        {"seed", "1", "seed"},
        {"stream", "0", "stream id"}},
       cmd_density},
      {"subordinate",
       "Parametric subordination paths (operational time, physical time, position)",
       {{"alpha", "1.5", "space exponent"},
        {"beta", "0.75", "time exponent"},
        {"dt-star", "0.01", "operational step"},
        {"steps", "500", "steps per path"},
        {"paths", "10", "number of paths"},
        {"seed", "1", "seed"},
        {"stream", "0", "stream id"}},
       cmd_subordinate},
      {"variance-scan",
       "Well-scaled CTRW variance against 2 t^beta / Gamma(1+beta)",
       {{"alpha", "2", "space exponent"},
        {"beta", "0.5", "time exponent"},
        {"t", "1,2,4,8", "times"},
        {"h", "1", "space scale"},
        {"paths", "100000", "number of paths"},
        {"seed", "1", "seed"},
        {"stream", "0", "stream id"}},
       cmd_variance_scan},
      {"validate",
       "Cross-route acceptance checks",
       {{"quick", "false", "deterministic sub-minute subset", true},
        {"only", "", "comma-separated check names"},
        {"seed", "1", "seed for the Monte Carlo checks"}},
       cmd_validate},
  };
  return table;
}

inline const Command* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return &c;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Config files and manifests

inline std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  for (int n = 1; std::getline(in, line); ++n) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

struct Outcome {
  std::string output;
  int status = 0;
  double seconds = 0.0;
};

inline Outcome execute(const Command& cmd, const Params& params, bool json, const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const Table t = cmd.run(params, ctx);
  Outcome o{render(t, json), t.status, 0.0};
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

inline nlohmann::ordered_json manifest(const Command& cmd, const Params& params, bool json, const Context& ctx,
                                       const Outcome& o, const std::string& out_path) {
  nlohmann::ordered_json m;
  m["tool"] = "fracwalk";
  m["version"] = kVersion;
  m["subcommand"] = cmd.name;
  m["parameters"] = params.values;
  if (params.values.count("seed")) m["seed"] = params.values.at("seed");
  if (params.values.count("stream")) m["stream"] = params.values.at("stream");
  m["format"] = json ? "json" : "csv";
  m["threads"] = ctx.threads;
  m["duration_seconds"] = o.seconds;
  m["outputs"] = nlohmann::ordered_json::array(
      {{{"path", out_path.empty() ? "-" : out_path}, {"bytes", o.output.size()}, {"fnv1a64", hex64(fnv1a64(o.output))}}});
  return m;
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << bytes;
}

inline unsigned thread_default() {
  if (std::getenv("FRACWALK_THREADS")) return default_threads();
  return std::max(1u, std::thread::hardware_concurrency());
}

inline int replay(const std::string& manifest_path, const std::string& out_path, const Context& ctx, std::ostream& out,
                  std::ostream& err) {
  std::ifstream in(manifest_path);
  if (!in) throw UsageError("cannot read manifest " + manifest_path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("manifest " + manifest_path + " is not valid JSON");
  }
  const Command* cmd = find_command(m.value("subcommand", std::string()));
  if (!cmd) throw UsageError("manifest names no known subcommand");
  Params params;
  for (const auto& [k, v] : m.at("parameters").items()) params.values[k] = v.get<std::string>();
  const Outcome o = execute(*cmd, params, m.value("format", std::string("csv")) == "json", ctx);
  if (out_path.empty()) {
    out << o.output;
  } else {
    write_file(out_path, o.output);
  }
  const std::string want = m.at("outputs").at(0).at("fnv1a64").get<std::string>();
  const std::string got = hex64(fnv1a64(o.output));
  if (want == got) {
    err << "replay: output digest " << got << " matches\n";
    return 0;
  }
  err << "replay: output digest " << got << " differs from recorded " << want << "\n";
  return 1;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fracwalk: renewal processes, random walks and fractional diffusion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Slot {
    const Command* cmd;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
  };
  std::vector<Slot> slots;
  slots.reserve(commands().size());
  std::string config, out_path, manifest_path;
  bool json = false;
  unsigned threads = 0;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "write output to this file instead of stdout");
    sub->add_option("--manifest", manifest_path, "manifest path (default: <out>.manifest.json, or stderr)");
    sub->add_option("--threads", threads, "worker threads (default: FRACWALK_THREADS or all cores)");
  };
  for (const auto& cmd : commands()) {
    slots.push_back({&cmd, app.add_subcommand(cmd.name, cmd.help), {}, {}});
    Slot& s = slots.back();
    s.app->set_help_flag("--help", "print this help");  // -h would clash with the space scale --h
    for (const auto& ps : cmd.params) {
      if (ps.flag) {
        s.app->add_flag("--" + ps.name, s.flags[ps.name], ps.help);
      } else {
        const std::string shown = ps.fallback.empty() ? "" : " [" + ps.fallback + "]";
        s.app->add_option("--" + ps.name, s.values[ps.name], ps.help + shown);
      }
    }
    s.app->add_option("--config", config, "key=value file; flags override it");
    s.app->add_flag("--json", json, "line-delimited JSON instead of CSV");
    common(s.app);
  }
  std::string replay_path;
  CLI::App* rep = app.add_subcommand("replay", "Re-run a manifest and compare output digests");
  rep->add_option("file", replay_path, "manifest file")->required();
  rep->add_option("--out", out_path, "write output to this file instead of stdout");
  rep->add_option("--threads", threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    const Context ctx{threads > 0 ? threads : thread_default()};
    if (rep->parsed()) return replay(replay_path, out_path, ctx, out, err);

    for (auto& s : slots) {
      if (!s.app->parsed()) continue;
      std::map<std::string, std::string> file;
      if (!config.empty()) file = read_config(config);
      for (const auto& [k, v] : file) {
        (void)v;
        bool known = false;
        for (const auto& ps : s.cmd->params) known = known || ps.name == k;
        if (!known) throw UsageError("config: unknown key '" + k + "' for " + s.cmd->name);
      }
      Params params;
      for (const auto& ps : s.cmd->params) {
        std::string v = ps.fallback;
        if (const auto it = file.find(ps.name); it != file.end()) v = it->second;
        if (s.app->get_option("--" + ps.name)->count() > 0) v = ps.flag ? "true" : s.values[ps.name];
        params.values[ps.name] = v;
      }
      const Outcome o = execute(*s.cmd, params, json, ctx);
      if (out_path.empty()) {
        out << o.output;
      } else {
        write_file(out_path, o.output);
      }
      const auto m = manifest(*s.cmd, params, json, ctx, o, out_path);
      if (!manifest_path.empty()) {
        write_file(manifest_path, m.dump(2) + "\n");
      } else if (!out_path.empty()) {
        write_file(out_path + ".manifest.json", m.dump(2) + "\n");
      } else {
        err << m.dump() << "\n";
      }
      return o.status;
    }
    return 2;
  } catch (const UsageError& e) {
    err << "fracwalk: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "fracwalk: domain error: " << e.what() << "\n";
    return 2;
  } catch (const RangeError& e) {
    err << "fracwalk: range error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    err << "fracwalk: budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const TruncationError& e) {
    err << "fracwalk: truncation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "fracwalk: internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace fracwalk::cli
