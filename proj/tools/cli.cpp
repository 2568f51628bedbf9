#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "liouville/conditions.hpp"
#include "liouville/format.hpp"
#include "liouville/harness.hpp"
#include "liouville/serialize.hpp"
#include "liouville/simulator.hpp"

namespace liouville::cli {

namespace {

struct Config {
  std::string command;
  // problem
  std::string g;
  int m = 2;
  int n = 3;
  double A = 1.0;
  std::vector<std::string> params;  // name=value substituted into --g
  // numerics and output
  double tol = 1e-9;
  std::string out;
  std::string format = "json";
  int jobs = 1;
  std::vector<std::string> sweeps;
  // g-table
  double t_min = 1e-3;
  double t_max = 1e3;
  int count = 25;
  // bound
  std::optional<double> r;
  std::string r_grid;
  double C = 1.0;
  double k_bound = 1.0;
  double eps = 1e-3;
  // simulate
  double u0 = 1.0;
  double r_max = 10.0;
  double rtol = 1e-10;
  std::vector<double> cascade;
  // verify-example
  double nu = 2.0;
  double c0 = 1.0;
  std::string k = "auto";
  // harness
  int lemma = 33;
  std::optional<double> r1;
  std::optional<double> r2;
  std::string psi = "zeta^2";
  std::string gamma = "zeta^2/4";
  double theta = 2.0;
  double alpha = 0.5;
  double M1 = 1.0;
  double M2 = 4.0;
};

struct JobResult {
  Json body;
  std::string csv;
  int code = 0;
};

double parse_number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::pair<std::string, std::string> split_assignment(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected name=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

/// "v1,v2,..." or "lo:hi:count" (inclusive, evenly spaced).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid range must read lo:hi:count");
    double lo = parse_number(parts[0]), hi = parse_number(parts[1]);
    int count = static_cast<int>(parse_number(parts[2]));
    if (count < 2 || !(hi > lo)) throw std::invalid_argument("grid range needs hi > lo and count >= 2");
    for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
  }
  for (const auto& p : split(text, ',')) out.push_back(parse_number(p));
  return out;
}

std::map<std::string, double, std::less<>> parameters(const Config& c) {
  std::map<std::string, double, std::less<>> ps;
  for (const auto& p : c.params) {
    auto [name, value] = split_assignment(p);
    ps[name] = parse_number(value);
  }
  return ps;
}

Nonlinearity parse_with_params(const std::string& text, const Config& c) {
  ParseOptions po;
  po.parameters = parameters(c);
  return Nonlinearity::parse(text, po);
}

ProblemSpec make_spec(const Config& c) {
  if (c.g.empty()) throw std::invalid_argument("--g is required for '" + c.command + "'");
  ProblemSpec s;
  s.m = c.m;
  s.n = c.n;
  s.A = c.A;
  s.g = parse_with_params(c.g, c);
  s.validate();
  return s;
}

ImproperOptions integral_options(const Config& c) {
  ImproperOptions o;
  o.tol = c.tol;
  return o;
}

Json config_echo(const Config& c) {
  Json j;
  j["version"] = LIOUVILLE_VERSION_STRING;
  j["command"] = c.command;
  j["g"] = c.g;
  Json ps = Json::object();
  for (const auto& [k, v] : parameters(c)) ps[k] = real(v);
  j["parameters"] = ps;
  j["m"] = c.m;
  j["n"] = c.n;
  j["A"] = real(c.A);
  j["tol"] = real(c.tol);
  j["format"] = c.format;
  j["jobs"] = c.jobs;
  j["sweep"] = c.sweeps;
  j["t_min"] = real(c.t_min);
  j["t_max"] = real(c.t_max);
  j["count"] = c.count;
  j["r"] = c.r ? real(*c.r) : Json(nullptr);
  j["r_grid"] = c.r_grid;
  j["C"] = real(c.C);
  j["k"] = c.command == "bound" ? Json(real(c.k_bound)) : Json(c.k);
  j["eps"] = real(c.eps);
  j["u0"] = real(c.u0);
  j["r_max"] = real(c.r_max);
  j["rtol"] = real(c.rtol);
  Json cas = Json::array();
  for (double v : c.cascade) cas.push_back(real(v));
  j["cascade"] = cas;
  j["nu"] = real(c.nu);
  j["c0"] = real(c.c0);
  j["lemma"] = c.lemma;
  j["r1"] = c.r1 ? real(*c.r1) : Json(nullptr);
  j["r2"] = c.r2 ? real(*c.r2) : Json(nullptr);
  j["psi"] = c.psi;
  j["gamma"] = c.gamma;
  j["theta"] = real(c.theta);
  j["alpha"] = real(c.alpha);
  j["M1"] = real(c.M1);
  j["M2"] = real(c.M2);
  return j;
}

// ---------------------------------------------------------------------------
// Commands

JobResult run_classify(const Config& c) {
  ProblemSpec spec = make_spec(c);
  ClassifyOptions opts;
  opts.integral = integral_options(c);
  opts.liminf.integral = opts.integral;
  Verdict v = classify(spec, opts);
  JobResult r;
  r.body = to_json(v);
  r.body["admissibility"] = to_json(check_admissible(spec.g));
  r.body["warnings"] = spec.g.warnings();
  r.csv = "outcome,t211,t221,t231\n" + to_string(v.outcome) + "," + to_string(v.tail.status) + "," +
          to_string(v.liminf.decision) + "," + to_string(v.nonexistence.integral.status) + "\n";
  r.code = v.outcome == Outcome::Inconclusive ? 2 : 0;
  return r;
}

JobResult run_g_table(const Config& c) {
  ProblemSpec spec = make_spec(c);
  GTable t = big_G_table(spec.g, spec.m, c.t_min, c.t_max, c.count, integral_options(c));
  JobResult r;
  r.body = to_json(t);
  r.csv = t.to_csv();
  bool undecided = std::any_of(t.statuses.begin(), t.statuses.end(),
                               [](IntegralStatus s) { return s == IntegralStatus::Inconclusive; });
  r.code = undecided ? 2 : 0;
  return r;
}

JobResult run_bound(const Config& c) {
  ProblemSpec spec = make_spec(c);
  JobResult r;
  if (!c.r_grid.empty()) {
    DecayCurve d = decay_curve(spec, parse_grid(c.r_grid), c.C, c.k_bound, c.eps, integral_options(c));
    r.body = to_json(d);
    r.csv = "r,bound\n";
    for (std::size_t i = 0; i < d.r_grid.size(); ++i) {
      r.csv += format_real(d.r_grid[i]) + "," + format_real(d.bounds[i]) + "\n";
    }
    return r;
  }
  if (!c.r) throw std::invalid_argument("bound needs --r or --r-grid");
  double b = mean_bound(spec, *c.r, c.C, c.k_bound, integral_options(c));
  r.body["r"] = real(*c.r);
  r.body["bound"] = real(b);
  r.csv = "r,bound\n" + format_real(*c.r) + "," + format_real(b) + "\n";
  return r;
}

RadialProfile simulate_profile(const ProblemSpec& spec, const Config& c) {
  IntegrationOptions io;
  io.rtol = c.rtol;
  io.cascade_initial = c.cascade;
  return integrate_radial(spec, c.u0, c.r_max, io);
}

JobResult run_simulate(const Config& c) {
  ProblemSpec spec = make_spec(c);
  RadialProfile p = simulate_profile(spec, c);
  JobResult r;
  r.body["profile"] = profile_header(p);
  Json samples;
  samples["r"] = p.grid;
  for (int j = 0; j < p.half_m(); ++j) {
    samples[j == 0 ? std::string("u") : "v_" + std::to_string(j)] = p.cascade[static_cast<std::size_t>(j)];
  }
  r.body["samples"] = samples;
  r.csv = profile_csv(p);
  return r;
}

JobResult run_verify_example(const Config& c) {
  if (c.m % 2 != 0 || c.m < 2) throw std::invalid_argument("verify-example needs an even m >= 2");
  std::optional<double> k;
  if (c.k != "auto") k = parse_number(c.k);
  CounterexampleReport rep = verify_counterexample(c.m / 2, c.n, c.nu, c.c0, k, parse_grid(c.r_grid));
  JobResult r;
  r.body = to_json(rep);
  r.csv = "r,scaled_residual,residual\n";
  for (std::size_t i = 0; i < rep.r_grid.size(); ++i) {
    r.csv += format_real(rep.r_grid[i]) + "," + format_real(rep.scaled_residual[i]) + "," +
             format_real(rep.residual[i]) + "\n";
  }
  return r;
}

std::string report_csv(const Json& report) {
  return "lemma,empirical_constant,pass\n" + report["lemma"].get<std::string>() + "," +
         format_real(report["empirical_constant"].is_number() ? report["empirical_constant"].get<double>() : NAN) +
         "," + (report["pass"].get<bool>() ? "true" : "false") + "\n";
}

JobResult run_harness(const Config& c) {
  JobResult r;
  if (c.lemma == 34) {
    ComparisonCase lc;
    lc.psi = parse_with_params(c.psi, c);
    lc.gamma = parse_with_params(c.gamma, c);
    lc.theta = c.theta;
    lc.alpha = c.alpha;
    lc.nu = c.nu;
    lc.M1 = c.M1;
    lc.M2 = c.M2;
    r.body = to_json(integral_comparison(lc), lc);
    r.csv = report_csv(r.body);
    return r;
  }
  ProblemSpec spec = make_spec(c);
  RadialProfile p = simulate_profile(spec, c);
  double base = c.r ? *c.r : 0.5 * p.r_end();
  switch (c.lemma) {
    case 31:
      r.body = to_json(annulus_ratio(p, spec, c.r1.value_or(0.5 * base), c.r2.value_or(base)));
      break;
    case 33:
      r.body = to_json(doubling_sequence(p, spec, base));
      break;
    case 35:
      r.body = to_json(tail_bound_check(p, spec, base, integral_options(c)));
      break;
    default:
      throw std::invalid_argument("unknown lemma " + std::to_string(c.lemma));
  }
  r.body["profile"] = profile_header(p);
  r.csv = report_csv(r.body);
  return r;
}

JobResult execute(const Config& c) {
  if (c.command == "classify") return run_classify(c);
  if (c.command == "g-table") return run_g_table(c);
  if (c.command == "bound") return run_bound(c);
  if (c.command == "simulate") return run_simulate(c);
  if (c.command == "verify-example") return run_verify_example(c);
  if (c.command == "harness") return run_harness(c);
  throw std::invalid_argument("unknown command '" + c.command + "'");
}

// ---------------------------------------------------------------------------
// Sweeps

void bind_parameter(Config& c, const std::string& name, const std::string& value) {
  parse_number(value);
  c.params.erase(std::remove_if(c.params.begin(), c.params.end(),
                                [&](const std::string& p) { return split_assignment(p).first == name; }),
                 c.params.end());
  c.params.push_back(name + "=" + value);
}

void assign(Config& c, const std::string& name, const std::string& value) {
  if (name == "u0") c.u0 = parse_number(value);
  else if (name == "k") {
    if (c.command == "bound") c.k_bound = parse_number(value);
    else c.k = value;
  } else if (name == "nu") {
    // nu is both an option and the usual log-power exponent in --g
    c.nu = parse_number(value);
    bind_parameter(c, name, value);
  } else if (name == "c0") c.c0 = parse_number(value);
  else if (name == "r") c.r = parse_number(value);
  else if (name == "m") c.m = static_cast<int>(parse_number(value));
  else if (name == "n") c.n = static_cast<int>(parse_number(value));
  else if (name == "A") c.A = parse_number(value);
  else if (name == "C") c.C = parse_number(value);
  else if (name == "tol") c.tol = parse_number(value);
  else if (name == "r-max") c.r_max = parse_number(value);
  else bind_parameter(c, name, value);  // an expression parameter such as lambda
}

struct SweepPoint {
  std::vector<std::pair<std::string, std::string>> values;
  Config config;
};

std::vector<SweepPoint> expand(const Config& base) {
  std::vector<SweepPoint> points{{{}, base}};
  for (const auto& s : base.sweeps) {
    auto [name, list] = split_assignment(s);
    auto values = split(list, ',');
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        SweepPoint q = p;
        q.values.emplace_back(name, v);
        assign(q.config, name, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

struct JobOutcome {
  JobResult result;
  std::string error;
};

JobOutcome guarded(const Config& c) {
  JobOutcome o;
  try {
    o.result = execute(c);
  } catch (const std::exception& e) {
    o.error = e.what();
    o.result.code = 1;
  }
  return o;
}

std::vector<JobOutcome> run_pool(const std::vector<SweepPoint>& points, int jobs) {
  std::vector<JobOutcome> results(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) results[i] = guarded(points[i].config);
  };
  int threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

std::string prefix_rows(const std::string& csv, const std::string& prefix, bool keep_header) {
  std::istringstream in(csv);
  std::string line, out;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      if (!keep_header) continue;
    }
    out += prefix + line + "\n";
  }
  return out;
}

std::string timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--g", c.g, "Nonlinearity g(zeta), e.g. \"zeta^2\" or \"zeta*ln(2+zeta)^nu\"");
  sub->add_option("--m", c.m, "Order m of the operator")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--n", c.n, "Dimension n")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--A", c.A, "Coefficient bound A (reported only)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--param", c.params, "Expression parameter name=value (repeatable)");
  sub->add_option("--tol", c.tol, "Relative tolerance of the improper integrals")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output file (default: standard output)");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--sweep", c.sweeps, "Sweep name=v1,v2,... over u0, k, nu, c0, r, m, n, A, C, tol, r-max or an "
                                       "expression parameter (repeatable: cartesian product)");
}

void add_simulation(CLI::App* sub, Config& c) {
  sub->add_option("--u0", c.u0, "Initial value u(0)")->capture_default_str();
  sub->add_option("--r-max", c.r_max, "Outer radius")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--rtol", c.rtol, "Integrator relative tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--cascade", c.cascade, "Initial values Delta^j u(0), j = 1..m/2-1 (default 0)")->delimiter(',');
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Liouville-type theorems for higher-order inequalities: classification, G tables, decay bounds, "
               "radial simulation and proof-machinery checks",
               "liouville"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(LIOUVILLE_VERSION_STRING));

  auto* classify_cmd = app.add_subcommand("classify", "Decide which theorems apply to (g, m, n)");
  add_common(classify_cmd, c);

  auto* table = app.add_subcommand("g-table", "Tabulate G(t) on a log grid");
  add_common(table, c);
  table->add_option("--t-min", c.t_min, "Smallest t")->check(CLI::PositiveNumber)->capture_default_str();
  table->add_option("--t-max", c.t_max, "Largest t")->check(CLI::PositiveNumber)->capture_default_str();
  table->add_option("--count", c.count, "Number of grid points")->check(CLI::Range(2, 100000))->capture_default_str();

  auto* bound = app.add_subcommand("bound", "Mean bound C G^-1(k r), or the decay curve over --r-grid");
  add_common(bound, c);
  bound->add_option("--r", c.r, "Radius")->check(CLI::PositiveNumber);
  bound->add_option("--r-grid", c.r_grid, "Radii as v1,v2,... or lo:hi:count");
  bound->add_option("--C", c.C, "Constant C")->check(CLI::PositiveNumber)->capture_default_str();
  bound->add_option("--k", c.k_bound, "Constant k")->check(CLI::PositiveNumber)->capture_default_str();
  bound->add_option("--eps", c.eps, "Decay threshold")->check(CLI::PositiveNumber)->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Integrate the radial equation outward from r = 0");
  add_common(simulate, c);
  add_simulation(simulate, c);

  auto* verify = app.add_subcommand("verify-example", "Check the explicit positive solution exp(exp(k sqrt(1+r^2)))");
  add_common(verify, c);
  verify->add_option("--nu", c.nu, "Exponent nu of the logarithm")->capture_default_str();
  verify->add_option("--c0", c.c0, "Coefficient c0")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--k", c.k, "Profile constant k, or auto")->capture_default_str();
  verify->add_option("--r-grid", c.r_grid, "Radii as v1,v2,... or lo:hi:count (default: certified range)");

  auto* harness = app.add_subcommand("harness", "Check one of the proof inequalities on a simulated profile");
  add_common(harness, c);
  add_simulation(harness, c);
  harness->add_option("--lemma", c.lemma, "31 annulus ratio, 33 doubling sequence, 34 integral comparison, "
                                          "35 tail bound")
      ->check(CLI::IsMember({31, 33, 34, 35}))
      ->capture_default_str();
  harness->add_option("--r", c.r, "Base radius (default: half the profile range)")->check(CLI::PositiveNumber);
  harness->add_option("--r1", c.r1, "Inner radius for lemma 31 (default r/2)")->check(CLI::PositiveNumber);
  harness->add_option("--r2", c.r2, "Outer radius for lemma 31 (default r)")->check(CLI::PositiveNumber);
  harness->add_option("--psi", c.psi, "psi(zeta) for lemma 34")->capture_default_str();
  harness->add_option("--gamma", c.gamma, "gamma(zeta) for lemma 34")->capture_default_str();
  harness->add_option("--theta", c.theta, "theta > 1 for lemma 34")->capture_default_str();
  harness->add_option("--alpha", c.alpha, "alpha in (0,1] for lemma 34")->capture_default_str();
  harness->add_option("--nu", c.nu, "nu > 1 for lemma 34")->capture_default_str();
  harness->add_option("--M1", c.M1, "Lower limit M1 for lemma 34")->capture_default_str();
  harness->add_option("--M2", c.M2, "Upper limit M2 for lemma 34")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    std::vector<SweepPoint> points = expand(c);
    std::vector<JobOutcome> results = run_pool(points, c.jobs);
    const bool sweeping = !c.sweeps.empty();

    int code = 0;
    for (const auto& r : results) {
      if (r.result.code == 1) code = 1;
      else if (r.result.code == 2 && code == 0) code = 2;
    }

    std::string payload;
    if (c.format == "json") {
      Json doc;
      if (!sweeping) {
        if (!results[0].error.empty()) {
          err << "error: " << results[0].error << "\n";
          return 1;
        }
        doc = results[0].result.body;
      } else {
        Json sweep = Json::array();
        for (const auto& s : c.sweeps) sweep.push_back(s);
        doc["sweep"] = sweep;
        Json rs = Json::array();
        for (std::size_t i = 0; i < points.size(); ++i) {
          Json entry;
          Json values = Json::object();
          for (const auto& [k, v] : points[i].values) values[k] = v;
          entry["values"] = values;
          entry["exit_code"] = results[i].result.code;
          if (results[i].error.empty()) entry["result"] = results[i].result.body;
          else entry["error"] = results[i].error;
          rs.push_back(entry);
        }
        doc["results"] = rs;
      }
      doc["config-echo"] = config_echo(c);
      payload = dump(doc) + "\n";
    } else {
      if (!sweeping) {
        if (!results[0].error.empty()) {
          err << "error: " << results[0].error << "\n";
          return 1;
        }
        payload = results[0].result.csv;
      } else {
        bool header_done = false;
        std::string names;
        for (const auto& [k, v] : points[0].values) names += k + ",";
        for (std::size_t i = 0; i < points.size(); ++i) {
          if (!results[i].error.empty()) {
            err << "error in sweep point " << i << ": " << results[i].error << "\n";
            continue;
          }
          std::string prefix;
          for (const auto& [k, v] : points[i].values) prefix += v + ",";
          if (!header_done) {
            std::string csv = results[i].result.csv;
            auto nl = csv.find('\n');
            payload += names + csv.substr(0, nl) + "\n";
            header_done = true;
          }
          payload += prefix_rows(results[i].result.csv, prefix, false);
        }
      }
    }

    if (c.out.empty()) {
      out << payload;
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open output file " + c.out);
      f << payload;
      if (!f) throw std::runtime_error("failed writing " + c.out);
      Json meta;
      meta["timestamp"] = timestamp();
      meta["arguments"] = args;
      meta["config-echo"] = config_echo(c);
      if (!sweeping && c.command == "simulate" && results[0].error.empty()) {
        meta["profile"] = results[0].result.body["profile"];
      }
      std::ofstream m(c.out + ".meta.json", std::ios::binary);
      if (!m) throw std::runtime_error("cannot open " + c.out + ".meta.json");
      m << dump(meta) << "\n";
    }
    if (sweeping) {
      for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].error.empty() && c.format == "json") err << "error in sweep point " << i << ": "
                                                                 << results[i].error << "\n";
      }
    }
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace liouville::cli
