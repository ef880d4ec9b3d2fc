// Command-line front end: density/CDF tabulation, quantiles, alpha
// classification, trig-product rate traces, coefficient tables, Monte
// Carlo experiments, and a self-verification suite.
//
// Exit codes: 0 success, 2 validation/parse failure, 3 a tabulated value
// did not converge and --strict was given, 4 hypothesis violation
// (convergent mode with a witnessed super-exponentially approximable
// alpha).

#include <cstdio>
#include <cstdlib>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stablesup/coefficients.hpp"
#include "stablesup/density.hpp"
#include "stablesup/errors.hpp"
#include "stablesup/liouville.hpp"
#include "stablesup/oracle.hpp"
#include "stablesup/real_spec.hpp"
#include "stablesup/stable_params.hpp"
#include "stablesup/trig_product.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace stablesup;

// ---------------------------------------------------------------------------
// run configuration (flags and config-file keys share these names)

struct RunCfg {
  std::string alpha;
  double rho = std::numeric_limits<double>::quiet_NaN();
  std::string x;            // grid spec start:stop:count
  std::string u;            // probability grid spec
  std::string spacing = "log";
  std::string mode = "auto";
  double eps = 1e-10;
  std::string format = "csv";
  std::uint64_t seed = 1;
  long depth = 40;
  long long kmax = 100000;
  long paths = 10000;
  long steps = 500;
  std::string kind = "a";
  double T = 10.0;
  std::string trig = "sec";
  std::string suite = "core";
  std::string out;
  bool strict = false;
  bool full_trace = false;
};

// ---------------------------------------------------------------------------
// formatting helpers

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt_double(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

/// Row-oriented table rendered as CSV (header + one line per row) or as
/// a JSON array of objects with identical keys, in column order.
struct Emitter {
  std::vector<std::string> cols;
  ordered_json rows = ordered_json::array();

  void row(std::initializer_list<std::pair<const char*, ordered_json>> kv) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : kv) {
      if (rows.empty() && cols.size() < kv.size()) cols.push_back(k);
      obj[k] = v;
    }
    rows.push_back(std::move(obj));
  }

  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      os << rows.dump(2) << "\n";
      return;
    }
    for (size_t i = 0; i < cols.size(); ++i)
      os << (i ? "," : "") << cols[i];
    os << "\n";
    for (const auto& r : rows) {
      for (size_t i = 0; i < cols.size(); ++i)
        os << (i ? "," : "") << csv_cell(r.at(cols[i]));
      os << "\n";
    }
  }
};

// ---------------------------------------------------------------------------
// grid specs

std::vector<double> parse_grid(const std::string& spec, const std::string& spacing) {
  double start = 0, stop = 0;
  long count = 0;
  {
    std::istringstream ss(spec);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
        !std::getline(ss, c) || c.find(':') != std::string::npos)
      raise(errc::parse, "grid spec must be start:stop:count");
    try {
      start = std::stod(a);
      stop = std::stod(b);
      count = std::stol(c);
    } catch (const std::exception&) {
      raise(errc::parse, "grid spec must be start:stop:count with numeric fields");
    }
  }
  if (count < 1) raise(errc::validation, "grid count must be >= 1");
  if (spacing != "log" && spacing != "linear")
    raise(errc::validation, "spacing must be log or linear");
  if (spacing == "log" && (start <= 0 || stop <= 0))
    raise(errc::validation, "log spacing requires positive endpoints");

  std::vector<double> g;
  if (count == 1) {
    g.push_back(start);
    return g;
  }
  for (long i = 0; i < count; ++i) {
    const double t = double(i) / double(count - 1);
    g.push_back(spacing == "log" ? start * std::pow(stop / start, t)
                                 : start + (stop - start) * t);
  }
  return g;
}

// ---------------------------------------------------------------------------
// config file: plain key=value lines, keys identical to long flag names;
// values act as defaults, explicit flags override them

void apply_config(RunCfg* cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::validation, "cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      raise(errc::parse, "config line " + std::to_string(lineno) +
                             " is not key=value");
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    try {
      if (key == "alpha") cfg->alpha = val;
      else if (key == "rho") cfg->rho = std::stod(val);
      else if (key == "x") cfg->x = val;
      else if (key == "u") cfg->u = val;
      else if (key == "spacing") cfg->spacing = val;
      else if (key == "mode") cfg->mode = val;
      else if (key == "eps") cfg->eps = std::stod(val);
      else if (key == "format") cfg->format = val;
      else if (key == "seed") cfg->seed = std::stoull(val);
      else if (key == "depth") cfg->depth = std::stol(val);
      else if (key == "kmax") cfg->kmax = std::stoll(val);
      else if (key == "paths") cfg->paths = std::stol(val);
      else if (key == "steps") cfg->steps = std::stol(val);
      else if (key == "kind") cfg->kind = val;
      else if (key == "T") cfg->T = std::stod(val);
      else if (key == "trig") cfg->trig = val;
      else if (key == "suite") cfg->suite = val;
      else if (key == "out") cfg->out = val;
      else if (key == "strict") cfg->strict = (val == "true" || val == "1");
      else raise(errc::validation, "unknown config key: " + key);
    } catch (const std::invalid_argument&) {
      raise(errc::parse, "bad value for config key " + key);
    } catch (const std::out_of_range&) {
      raise(errc::parse, "bad value for config key " + key);
    }
  }
}

// ---------------------------------------------------------------------------
// parameter assembly

RealSpec parse_alpha(const RunCfg& cfg) {
  if (cfg.alpha.empty()) raise(errc::validation, "--alpha is required");
  RealSpec a = RealSpec::parse(cfg.alpha);
  if (a.is_decimal_literal())
    std::cerr << "note: alpha given as a bare decimal is treated as a "
                 "truncated window onto an irrational; arithmetic verdicts "
                 "apply only to that window\n";
  return a;
}

StableParams make_params(const RunCfg& cfg) {
  if (std::isnan(cfg.rho)) raise(errc::validation, "--rho is required");
  return StableParams(parse_alpha(cfg), cfg.rho, size_t(cfg.depth));
}

EvalMode parse_mode(const std::string& m) {
  if (m == "auto" || m == "automatic") return EvalMode::automatic;
  if (m == "convergent") return EvalMode::convergent;
  if (m == "asymptotic") return EvalMode::asymptotic;
  raise(errc::validation, "mode must be auto, convergent, or asymptotic");
}

/// Output sink: stdout by default, --out FILE otherwise.  A relative
/// --out lands in $STABLESUP_OUTDIR when that variable is set.
class Sink {
 public:
  explicit Sink(const std::string& out) {
    if (out.empty()) return;
    std::string path = out;
    const char* dir = std::getenv("STABLESUP_OUTDIR");
    if (dir && *dir && out.front() != '/')
      path = std::string(dir) + "/" + out;
    file_.open(path);
    if (!file_) raise(errc::validation, "cannot open output file: " + path);
    use_file_ = true;
  }
  std::ostream& os() { return use_file_ ? file_ : std::cout; }

 private:
  std::ofstream file_;
  bool use_file_ = false;
};

// ---------------------------------------------------------------------------
// subcommand bodies; each returns the process exit code

int tabulate_density(const RunCfg& cfg, bool as_cdf) {
  StableParams P = make_params(cfg);
  if (cfg.x.empty()) raise(errc::validation, "--x is required");
  const std::vector<double> grid = parse_grid(cfg.x, cfg.spacing);
  const EvalMode mode = parse_mode(cfg.mode);

  Emitter em;
  bool saw_not_converged = false;
  for (double xv : grid) {
    SeriesResult r = as_cdf ? cdf(P, xv, cfg.eps) : density(P, xv, cfg.eps, mode);
    saw_not_converged |= (r.status == SeriesStatus::not_converged);
    em.row({{"x", xv},
            {as_cdf ? "F" : "p", r.value},
            {"est_error", r.est_error},
            {"status", series_status_name(r.status)}});
  }
  Sink sink(cfg.out);
  em.write(sink.os(), cfg.format);
  return (saw_not_converged && cfg.strict) ? 3 : 0;
}

int run_quantile(const RunCfg& cfg) {
  StableParams P = make_params(cfg);
  if (cfg.u.empty()) raise(errc::validation, "--u is required");
  const std::string spacing = (cfg.spacing == "log") ? "linear" : cfg.spacing;
  Emitter em;
  for (double uv : parse_grid(cfg.u, spacing))
    em.row({{"u", uv}, {"x", quantile(P, uv, cfg.eps)}});
  Sink sink(cfg.out);
  em.write(sink.os(), cfg.format);
  return 0;
}

int run_classify(const RunCfg& cfg) {
  RealSpec a = parse_alpha(cfg);
  LClassification c = classify_L(a, size_t(cfg.depth));
  const char* verdict = c.verdict == LVerdict::in_l_witnessed ? "InL-witnessed"
                        : c.verdict == LVerdict::rational
                            ? "rational"
                            : "NotInL-to-depth";
  Sink sink(cfg.out);
  if (cfg.format == "json") {
    ordered_json j;
    j["alpha"] = a.str();
    j["verdict"] = verdict;
    j["depth_examined"] = c.depth_examined;
    j["witnesses"] = ordered_json::array();
    for (const auto& w : c.witnesses) {
      ordered_json jw;
      jw["n"] = w.n;
      jw["q_n"] = w.q_n.str();
      jw["a_next_bits"] = boost::multiprecision::msb(w.a_next) + 1;
      jw["implied_b"] = w.implied_b;
      j["witnesses"].push_back(std::move(jw));
    }
    j["profile"] = ordered_json::array();
    for (const auto& p : c.profile) {
      ordered_json jp;
      jp["n"] = p.n;
      jp["q"] = p.q.str();
      jp["value"] = p.value;
      j["profile"].push_back(std::move(jp));
    }
    sink.os() << j.dump(2) << "\n";
    return 0;
  }
  Emitter em;
  if (c.witnesses.empty())
    em.row({{"verdict", verdict},
            {"n", nullptr},
            {"q_n", nullptr},
            {"a_next_bits", nullptr},
            {"implied_b", nullptr}});
  for (const auto& w : c.witnesses)
    em.row({{"verdict", verdict},
            {"n", w.n},
            {"q_n", w.q_n.str()},
            {"a_next_bits", boost::multiprecision::msb(w.a_next) + 1},
            {"implied_b", w.implied_b}});
  em.write(sink.os(), cfg.format);
  return 0;
}

int run_lemma1(const RunCfg& cfg) {
  RealSpec a = parse_alpha(cfg);
  TrigKind kind;
  if (cfg.trig == "sec") kind = TrigKind::sec;
  else if (cfg.trig == "csc") kind = TrigKind::csc;
  else raise(errc::validation, "trig must be sec or csc");

  ProductTrace trace = trig_log_product(kind, a, 0.0, cfg.kmax);
  const double ln2 = std::log(2.0);

  Emitter em;
  auto emit = [&](const ProductTrace::Entry& e) {
    em.row({{"k", e.k},
            {"value", e.value},
            {"abs_err_vs_ln2", std::abs(e.value - ln2)}});
  };
  if (cfg.full_trace) {
    for (const auto& e : trace.cumulative) emit(e);
  } else {
    // checkpoints 1, 2, 5, 10, 20, 50, ... plus the final k
    long long next = 1;
    int phase = 0;
    for (const auto& e : trace.cumulative) {
      if (e.k == next || e.k == cfg.kmax) {
        emit(e);
        if (e.k == next) {
          next = (phase == 0) ? next * 2 : (phase == 1) ? next * 5 / 2 : next * 2;
          phase = (phase + 1) % 3;
        }
      }
    }
  }
  Sink sink(cfg.out);
  em.write(sink.os(), cfg.format);
  return 0;
}

int run_table(const RunCfg& cfg) {
  StableParams P = make_params(cfg);
  CoeffKind kind;
  if (cfg.kind == "a") kind = CoeffKind::a;
  else if (cfg.kind == "b") kind = CoeffKind::b;
  else raise(errc::validation, "kind must be a or b");

  CoefficientTable t = build_table(P, kind, cfg.T);
  Emitter em;
  const double ln10 = std::log(10.0);
  for (const auto& [mn, v] : t.entries) {
    ordered_json val;
    if (v.is_zero()) val = 0.0;
    else if (std::abs(v.logabs) < 700.0) val = v.value();
    else val = nullptr;  // magnitude outside double range
    em.row({{"m", mn.first},
            {"n", mn.second},
            {"sign", v.sign},
            {"log10_abs", v.is_zero() ? ordered_json(nullptr)
                                      : ordered_json(v.logabs / ln10)},
            {"value", val}});
  }
  Sink sink(cfg.out);
  em.write(sink.os(), cfg.format);
  return 0;
}

int run_montecarlo(const RunCfg& cfg) {
  StableParams P = make_params(cfg);
  if (cfg.x.empty()) raise(errc::validation, "--x is required");
  McConfig mc;
  mc.paths = cfg.paths;
  mc.steps = cfg.steps;
  mc.seed = cfg.seed;
  mc.grid = parse_grid(cfg.x, cfg.spacing);
  McCdfTable tab = mc_supremum_cdf(P, mc);

  Emitter em;
  for (size_t i = 0; i < tab.x.size(); ++i)
    em.row({{"x", tab.x[i]},
            {"F_emp", tab.f_emp[i]},
            {"stderr", tab.std_error[i]},
            {"F_series", cdf(P, tab.x[i], cfg.eps).value}});
  Sink sink(cfg.out);
  em.write(sink.os(), cfg.format);
  return 0;
}

int run_verify(const RunCfg& cfg) {
  if (cfg.suite != "core")
    raise(errc::validation, "unknown verify suite: " + cfg.suite);
  StableParams P = make_params(cfg);
  Sink sink(cfg.out);
  std::ostream& os = sink.os();
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    os << (ok ? "ok" : "FAIL") << ": " << name << " (" << detail << ")\n";
    if (!ok) ++failures;
  };

  {
    SeriesResult m = total_mass(P, 1e-8);
    const bool ok =
        m.status == SeriesStatus::converged && std::abs(m.value - 1.0) <= 1e-8;
    report("normalization", ok,
           "total mass - 1 = " + fmt_double(m.value - 1.0));
  }
  {
    PoleSpec pole = make_pole(P, PoleSpec::Family::minus, 0, 0);
    const double ref = pole.residue_ref.value();
    const double est = residue_estimate(P, pole);
    const double rel = std::abs(est - ref) / std::abs(ref);
    report("residue", rel <= 1e-2, "rel err = " + fmt_double(rel));
  }
  {
    const double r1 = functional_eq_residual(P, {1.2, 0.0});
    const double r2 = functional_eq_residual(P, {1.2, 0.5});
    report("functional_eq", r1 <= 1e-5 && r2 <= 1e-5,
           "residuals " + fmt_double(r1) + ", " + fmt_double(r2));
  }
  {
    const double xstar = P.alpha_below_one() ? 0.15 : 5.0;
    SeriesResult c = density(P, xstar, cfg.eps, EvalMode::convergent);
    SeriesResult a = density(P, xstar, cfg.eps, EvalMode::asymptotic);
    const double rel = std::abs(c.value - a.value) /
                       std::max(std::abs(c.value), std::abs(a.value));
    const double allow = std::max(1e-4, c.est_error + a.est_error);
    const bool ok = c.status == SeriesStatus::converged && rel <= allow;
    report("cross_regime", ok,
           "x = " + fmt_double(xstar) + ", rel diff = " + fmt_double(rel));
  }
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv) {
  RunCfg cfg;

  // a config file provides defaults; explicit flags override them, so the
  // file is applied before CLI11 binds anything
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) apply_config(&cfg, argv[i + 1]);
    else if (arg.rfind("--config=", 0) == 0) apply_config(&cfg, arg.substr(9));
  }

  CLI::App app{
      "Supremum of a strictly stable process: series evaluation, "
      "Diophantine classification, and validation oracles"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_common = [&](CLI::App* c, bool needs_rho) {
    c->add_option("--alpha", cfg.alpha,
                  "stability index as an exact spec: sqrt:2, "
                  "surd:(p+q*sqrt:d)/r, cf:[a0;a1,...], or a decimal "
                  "(treated as a truncated window)");
    if (needs_rho)
      c->add_option("--rho", cfg.rho, "positivity parameter P(X_1 > 0)");
    c->add_option("--eps", cfg.eps, "relative tolerance (1e-14 .. 1e-2)")->capture_default_str();
    c->add_option("--format", cfg.format, "output format: csv or json")->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", cfg.out,
                  "output file (default stdout); relative paths land in "
                  "$STABLESUP_OUTDIR when set");
    c->add_option("--config", config_path,
                  "key=value file with the same keys as the long flags; "
                  "flags given explicitly override it");
    c->add_flag("--strict", cfg.strict,
                "exit 3 when any tabulated value fails to converge");
    c->add_option("--depth", cfg.depth,
                  "continued-fraction depth for alpha classification")->capture_default_str();
  };

  auto* cmd_density = app.add_subcommand(
      "density", "tabulate the supremum density p(x) on a grid");
  add_common(cmd_density, true);
  cmd_density->add_option("--x", cfg.x, "grid spec start:stop:count");
  cmd_density->add_option("--spacing", cfg.spacing, "grid spacing: log or linear")->capture_default_str();
  cmd_density->add_option(
      "--mode", cfg.mode,
      "evaluation mode: auto, convergent (full summation), or asymptotic "
      "(truncated expansion with error floor)")->capture_default_str();

  auto* cmd_cdf =
      app.add_subcommand("cdf", "tabulate the supremum CDF F(x) on a grid");
  add_common(cmd_cdf, true);
  cmd_cdf->add_option("--x", cfg.x, "grid spec start:stop:count");
  cmd_cdf->add_option("--spacing", cfg.spacing, "grid spacing: log or linear")->capture_default_str();

  auto* cmd_quantile = app.add_subcommand(
      "quantile", "invert the CDF on a grid of probabilities");
  add_common(cmd_quantile, true);
  cmd_quantile->add_option("--u", cfg.u,
                           "probability grid spec start:stop:count, "
                           "each value in (1e-8, 1-1e-8)");
  cmd_quantile->add_option("--spacing", cfg.spacing,
                           "grid spacing: linear (default for u-grids) or log")->capture_default_str();

  auto* cmd_classify = app.add_subcommand(
      "classify",
      "arithmetic classification of alpha: rational, witnessed member of "
      "the super-exponentially approximable set, or clean to depth");
  add_common(cmd_classify, false);

  auto* cmd_lemma1 = app.add_subcommand(
      "lemma1",
      "normalized log trig products (1/k) sum ln|sec or csc(pi l alpha)|; "
      "converges to ln 2 for admissible alpha");
  add_common(cmd_lemma1, false);
  cmd_lemma1->add_option("--trig", cfg.trig, "product kind: sec or csc")->capture_default_str();
  cmd_lemma1->add_option("--kmax", cfg.kmax, "number of factors")->capture_default_str();
  cmd_lemma1->add_flag("--full", cfg.full_trace,
                       "emit every k instead of sparse checkpoints");

  auto* cmd_table = app.add_subcommand(
      "table", "dump the series coefficient table over m + alpha n <= T");
  add_common(cmd_table, true);
  cmd_table->add_option("--kind", cfg.kind,
                        "coefficient family: a (series at 0) or b (series "
                        "at infinity)")->capture_default_str();
  cmd_table->add_option("--T", cfg.T, "shell bound")->capture_default_str();

  auto* cmd_mc = app.add_subcommand(
      "montecarlo",
      "empirical supremum CDF from stable random-walk paths, with the "
      "series CDF alongside");
  add_common(cmd_mc, true);
  cmd_mc->add_option("--x", cfg.x, "grid spec start:stop:count");
  cmd_mc->add_option("--spacing", cfg.spacing, "grid spacing: log or linear")->capture_default_str();
  cmd_mc->add_option("--paths", cfg.paths, "number of simulated paths (>= 1000)")->capture_default_str();
  cmd_mc->add_option("--steps", cfg.steps, "walk steps per path (>= 100)")->capture_default_str();
  cmd_mc->add_option("--seed", cfg.seed,
                     "RNG seed; identical seeds give byte-identical output")->capture_default_str();

  auto* cmd_verify = app.add_subcommand(
      "verify",
      "run the self-check suite (normalization, residue, functional "
      "equation, cross-regime agreement); nonzero exit on any failure");
  add_common(cmd_verify, true);
  cmd_verify->add_option("--suite", cfg.suite, "suite name: core")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help exits 0; any parse failure is 2
  }

  if (cmd_density->parsed()) return tabulate_density(cfg, false);
  if (cmd_cdf->parsed()) return tabulate_density(cfg, true);
  if (cmd_quantile->parsed()) return run_quantile(cfg);
  if (cmd_classify->parsed()) return run_classify(cfg);
  if (cmd_lemma1->parsed()) return run_lemma1(cfg);
  if (cmd_table->parsed()) return run_table(cfg);
  if (cmd_mc->parsed()) return run_montecarlo(cfg);
  if (cmd_verify->parsed()) return run_verify(cfg);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == errc::hypothesis ? 4 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 2;
  }
}
