// irf: command-line front end over the C API.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irf/irf.h"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitLemma = 3;
constexpr int kExitInternal = 4;

// Raised for bad option values and failed library calls; carries the exit code.
struct CliFailure : std::runtime_error {
  int code;
  CliFailure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

int exit_code_for(irf_status s) {
  switch (s) {
    case IRF_OK: return kExitOk;
    case IRF_ERR_LEMMA_VIOLATION:
    case IRF_ERR_STRUCTURAL: return kExitLemma;
    case IRF_ERR_INTERNAL: return kExitInternal;
    default: return kExitPrecondition;
  }
}

void check(irf_status s) {
  if (s != IRF_OK)
    throw CliFailure(exit_code_for(s), std::string(irf_status_name(s)) + ": " + irf_last_error());
}

[[noreturn]] void bad_value(const std::string& msg) { throw CliFailure(kExitPrecondition, "invalid-argument: " + msg); }

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { irf_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct DistDeleter {
  void operator()(irf_dist* d) const { irf_dist_destroy(d); }
};
struct CdfDeleter {
  void operator()(irf_cdf* c) const { irf_cdf_destroy(c); }
};
struct GraphDeleter {
  void operator()(irf_graph* g) const { irf_graph_destroy(g); }
};
struct RateDeleter {
  void operator()(irf_rate_report* r) const { irf_rate_destroy(r); }
};
using DistPtr = std::unique_ptr<irf_dist, DistDeleter>;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t.empty()) bad_value(what + " is empty");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) bad_value(what + " is not a finite number: '" + text + "'");
  return v;
}

int significant_digits(const std::string& text) {
  int count = 0;
  bool started = false;
  for (char c : text) {
    if (c == 'e' || c == 'E') break;
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (c != '0') started = true;
    if (started) ++count;
  }
  return count;
}

struct ResolvedAlpha {
  double value = 0.0;
  std::string source;
};

ResolvedAlpha resolve_alpha(const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  if (s == "inv-sqrt2") {
    v = std::numbers::sqrt2 / 2.0;
  } else if (s == "golden-conj") {
    v = std::numbers::phi - 1.0;
  } else if (s == "e-minus-2") {
    v = std::numbers::e - 2.0;
  } else {
    v = parse_double(s, "alpha");
    if (significant_digits(s) < 15)
      std::cerr << "warning: alpha '" << s
                << "' has fewer than 15 significant digits; orbit results are precision-sensitive\n";
  }
  if (!(v > 0.0 && v < 1.0)) bad_value("alpha must lie in (0,1), got " + s);
  return {v, s};
}

struct ResolvedDist {
  std::vector<double> support;
  std::vector<double> weights;
  std::string text;
  std::optional<double> alpha;
};

// "two-point:<alpha>" or "p1:w1,p2:w2,...".
ResolvedDist resolve_dist(const std::string& text) {
  ResolvedDist d;
  d.text = text;
  const std::string prefix = "two-point:";
  if (text.rfind(prefix, 0) == 0) {
    const ResolvedAlpha a = resolve_alpha(text.substr(prefix.size()));
    d.support = {a.value, 1.0};
    d.weights = {0.5, 0.5};
    d.alpha = a.value;
    return d;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) bad_value("distribution entry '" + item + "' is not point:weight");
    d.support.push_back(parse_double(item.substr(0, colon), "support point"));
    d.weights.push_back(parse_double(item.substr(colon + 1), "weight"));
  }
  if (d.support.empty()) bad_value("distribution '" + text + "' is empty");
  return d;
}

DistPtr make_dist(const ResolvedDist& d) {
  irf_dist* raw = nullptr;
  check(irf_dist_create(d.support.data(), d.weights.data(), d.support.size(), &raw));
  return DistPtr(raw);
}

ordered_json dist_json(const ResolvedDist& d) {
  ordered_json j;
  j["argument"] = d.text;
  j["support"] = d.support;
  j["weights"] = d.weights;
  return j;
}

irf_format parse_format(const std::string& f, std::initializer_list<irf_format> allowed) {
  irf_format out;
  if (f == "json")
    out = IRF_FORMAT_JSON;
  else if (f == "csv")
    out = IRF_FORMAT_CSV;
  else if (f == "dot")
    out = IRF_FORMAT_DOT;
  else
    bad_value("unknown format '" + f + "'");
  if (std::find(allowed.begin(), allowed.end(), out) == allowed.end())
    bad_value("format '" + f + "' is not supported by this subcommand");
  return out;
}

struct Common {
  bool dry_run = false;
  std::string format;
  std::string output;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format, const std::string& formats) {
  c.format = default_format;
  cmd->add_flag("--dry-run", c.dry_run, "Print the resolved configuration as JSON and exit");
  cmd->add_option("--format", c.format, "Output format (" + formats + ")")->capture_default_str();
  cmd->add_option("--output,-o", c.output, "Output file (default: stdout)");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw CliFailure(kExitPrecondition, "cannot open output file '" + c.output + "'");
  out << text;
  if (!out) throw CliFailure(kExitPrecondition, "failed writing '" + c.output + "'");
}

ordered_json config_header(const std::string& command, const Common& c) {
  ordered_json j;
  j["schema"] = 1;
  j["kind"] = "config";
  j["command"] = command;
  j["format"] = c.format;
  j["output"] = c.output.empty() ? "-" : c.output;
  j["threads"] = c.threads;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

irf_trial_plan make_plan(std::uint64_t seed, std::uint64_t trials, std::uint64_t steps, unsigned threads) {
  return irf_trial_plan{seed, trials, steps, threads};
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  void report(const char* what) const {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::fprintf(stderr, "%s: %.3f s\n", what, s);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Either --dist or --alpha; defaults to the uniform law on {alpha, 1}.
ResolvedDist dist_from_options(const std::string& dist, const std::string& alpha) {
  if (!dist.empty()) return resolve_dist(dist);
  return resolve_dist("two-point:" + alpha);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and verify the iterated random function x -> |theta - x|"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(irf_version()));

  std::function<int()> action;

  // simulate
  Common sim_c;
  std::string sim_dist, sim_alpha = "inv-sqrt2";
  double sim_x0 = 0.2;
  std::uint64_t sim_n = 200, sim_trials = 10000, sim_seed = 0;
  auto* sim = app.add_subcommand("simulate", "Empirical law of x_n over independent forward trajectories");
  add_common(sim, sim_c, "json", "json|csv");
  sim->add_option("--dist", sim_dist, "two-point:<alpha> or point:weight,...");
  sim->add_option("--alpha", sim_alpha, "Alpha for the two-point law")->capture_default_str();
  sim->add_option("--x0", sim_x0, "Starting point")->capture_default_str();
  sim->add_option("--n", sim_n, "Number of steps")->capture_default_str();
  sim->add_option("--trials", sim_trials, "Independent trajectories")->capture_default_str();
  sim->add_option("--seed", sim_seed, "Master seed")->required();
  sim->callback([&] {
    action = [&] {
      const ResolvedDist d = dist_from_options(sim_dist, sim_alpha);
      const irf_format fmt = parse_format(sim_c.format, {IRF_FORMAT_JSON, IRF_FORMAT_CSV});
      if (sim_c.dry_run) {
        ordered_json j = config_header("simulate", sim_c);
        j["dist"] = dist_json(d);
        j["x0"] = sim_x0;
        j["n"] = sim_n;
        j["trials"] = sim_trials;
        j["seed"] = sim_seed;
        emit(sim_c, dump(j));
        return kExitOk;
      }
      DistPtr dist = make_dist(d);
      const irf_trial_plan plan = make_plan(sim_seed, sim_trials, sim_n, sim_c.threads);
      Timer t;
      OwnedString out;
      check(irf_ensemble_export(dist.get(), sim_x0, sim_n, &plan, fmt, &out.ptr));
      t.report("simulate runtime");
      emit(sim_c, out.str());
      return kExitOk;
    };
  });

  // stationary
  Common st_c;
  std::string st_dist, st_alpha = "inv-sqrt2";
  std::vector<double> st_eval, st_quantile;
  bool st_check = false;
  std::uint64_t st_samples = 1000000, st_seed = 0;
  auto* st = app.add_subcommand("stationary", "Stationary CDF: export, evaluate, invert, or check by one step");
  add_common(st, st_c, "csv", "csv|json");
  st->add_option("--dist", st_dist, "two-point:<alpha> or point:weight,...");
  st->add_option("--alpha", st_alpha, "Alpha for the two-point law")->capture_default_str();
  st->add_option("--eval", st_eval, "Evaluate the CDF at these points");
  st->add_option("--quantile", st_quantile, "Evaluate the quantile function at these levels");
  st->add_flag("--check", st_check, "Monte Carlo stationarity check (one random step)");
  st->add_option("--samples", st_samples, "Samples for --check")->capture_default_str();
  auto* st_seed_opt = st->add_option("--seed", st_seed, "Master seed (required with --check)");
  st->callback([&] {
    action = [&] {
      const ResolvedDist d = dist_from_options(st_dist, st_alpha);
      const irf_format fmt = parse_format(st_c.format, {IRF_FORMAT_JSON, IRF_FORMAT_CSV});
      if (st_check && st_seed_opt->count() == 0) throw CliFailure(kExitUsage, "--check requires --seed");
      if (st_c.dry_run) {
        ordered_json j = config_header("stationary", st_c);
        j["dist"] = dist_json(d);
        j["eval"] = st_eval;
        j["quantile"] = st_quantile;
        j["check"] = st_check;
        if (st_check) {
          j["samples"] = st_samples;
          j["seed"] = st_seed;
        }
        emit(st_c, dump(j));
        return kExitOk;
      }
      DistPtr dist = make_dist(d);
      if (st_check) {
        const irf_trial_plan plan = make_plan(st_seed, st_samples, 1, st_c.threads);
        Timer t;
        OwnedString json;
        double before = 0, after = 0;
        check(irf_stationarity_check(dist.get(), &plan, &before, &after, &json.ptr));
        t.report("stationarity check runtime");
        if (fmt == IRF_FORMAT_CSV)
          emit(st_c, "samples,ks_before_step,ks_after_step\n" + std::to_string(st_samples) + "," +
                         fmt_double(before) + "," + fmt_double(after) + "\n");
        else
          emit(st_c, json.str());
        return kExitOk;
      }
      irf_cdf* raw = nullptr;
      check(irf_stationary_cdf(dist.get(), &raw));
      std::unique_ptr<irf_cdf, CdfDeleter> cdf(raw);
      if (st_eval.empty() && st_quantile.empty()) {
        OwnedString out;
        check(irf_cdf_export(cdf.get(), fmt, &out.ptr));
        emit(st_c, out.str());
        return kExitOk;
      }
      std::vector<std::pair<double, double>> evals, quants;
      for (double x : st_eval) {
        double v = 0;
        check(irf_cdf_eval(cdf.get(), x, &v));
        evals.emplace_back(x, v);
      }
      for (double u : st_quantile) {
        double v = 0;
        check(irf_cdf_quantile(cdf.get(), u, &v));
        quants.emplace_back(u, v);
      }
      if (fmt == IRF_FORMAT_CSV) {
        std::string out;
        if (!evals.empty()) {
          out += "x,F\n";
          for (auto [x, v] : evals) out += fmt_double(x) + "," + fmt_double(v) + "\n";
        }
        if (!quants.empty()) {
          out += "u,quantile\n";
          for (auto [u, v] : quants) out += fmt_double(u) + "," + fmt_double(v) + "\n";
        }
        emit(st_c, out);
      } else {
        ordered_json j;
        j["schema"] = 1;
        j["kind"] = "cdf_evaluation";
        ordered_json e = ordered_json::array(), q = ordered_json::array();
        for (auto [x, v] : evals) e.push_back({{"x", x}, {"F", v}});
        for (auto [u, v] : quants) q.push_back({{"u", u}, {"quantile", v}});
        j["eval"] = e;
        j["quantile"] = q;
        emit(st_c, dump(j));
      }
      return kExitOk;
    };
  });

  // orbit
  Common or_c;
  std::string or_alpha = "inv-sqrt2";
  double or_x = 0.2;
  std::int64_t or_window = 50;
  auto* orb = app.add_subcommand("orbit", "Orbit graph window: DOT graph or structure statistics");
  add_common(orb, or_c, "dot", "dot|json");
  orb->add_option("--alpha", or_alpha, "Alpha (decimal or preset)")->capture_default_str();
  orb->add_option("--x", or_x, "Base point of the orbit")->capture_default_str();
  orb->add_option("--window", or_window, "Window |n| <= W")->capture_default_str();
  orb->callback([&] {
    action = [&] {
      const ResolvedAlpha a = resolve_alpha(or_alpha);
      const irf_format fmt = parse_format(or_c.format, {IRF_FORMAT_DOT, IRF_FORMAT_JSON});
      if (or_c.dry_run) {
        ordered_json j = config_header("orbit", or_c);
        j["alpha"] = a.value;
        j["x"] = or_x;
        j["window"] = or_window;
        emit(or_c, dump(j));
        return kExitOk;
      }
      int singular = 0;
      check(irf_is_singular(a.value, or_x, or_window, &singular));
      if (singular) std::cerr << "warning: x lies on a singular orbit; coincident labels are drawn dashed\n";
      irf_graph* raw = nullptr;
      check(irf_graph_build(a.value, or_x, or_window, &raw));
      std::unique_ptr<irf_graph, GraphDeleter> graph(raw);
      OwnedString out;
      check(irf_graph_export(graph.get(), fmt, &out.ptr));
      emit(or_c, out.str());
      return kExitOk;
    };
  });

  // contfrac
  Common cf_c;
  std::string cf_alpha = "inv-sqrt2";
  int cf_terms = 20;
  auto* cf = app.add_subcommand("contfrac", "Continued-fraction convergents of alpha");
  add_common(cf, cf_c, "csv", "csv|json");
  cf->add_option("--alpha", cf_alpha, "Alpha (decimal or preset)")->capture_default_str();
  cf->add_option("--terms", cf_terms, "Number of partial quotients after a_0")->capture_default_str();
  cf->callback([&] {
    action = [&] {
      const ResolvedAlpha a = resolve_alpha(cf_alpha);
      const irf_format fmt = parse_format(cf_c.format, {IRF_FORMAT_CSV, IRF_FORMAT_JSON});
      if (cf_c.dry_run) {
        ordered_json j = config_header("contfrac", cf_c);
        j["alpha"] = a.value;
        j["terms"] = cf_terms;
        emit(cf_c, dump(j));
        return kExitOk;
      }
      if (fmt == IRF_FORMAT_CSV) {
        OwnedString out;
        check(irf_contfrac_export(a.value, cf_terms, &out.ptr));
        emit(cf_c, out.str());
        return kExitOk;
      }
      std::vector<irf_convergent> convs(static_cast<std::size_t>(std::max(cf_terms, 0)) + 1);
      std::size_t count = 0;
      check(irf_contfrac(a.value, cf_terms, convs.data(), convs.size(), &count));
      ordered_json j;
      j["schema"] = 1;
      j["kind"] = "convergents";
      j["alpha"] = a.value;
      ordered_json rows = ordered_json::array();
      for (std::size_t i = 0; i < std::min(count, convs.size()); ++i) {
        const irf_convergent& c = convs[i];
        const long double err = std::fabs(static_cast<long double>(c.q) * a.value - static_cast<long double>(c.p));
        rows.push_back({{"n", c.index},
                        {"a_n", c.a},
                        {"p_n", c.p},
                        {"q_n", c.q},
                        {"scaled_error", static_cast<double>(2.0L * c.q * err)}});
      }
      j["convergents"] = rows;
      emit(cf_c, dump(j));
      return kExitOk;
    };
  });

  // closek
  Common ck_c;
  std::string ck_alpha = "inv-sqrt2";
  double ck_x = 0.5;
  std::int64_t ck_q = 17;
  auto* ck = app.add_subcommand("closek", "Smallest k < q with <x - k alpha> < 3/(2q)");
  add_common(ck, ck_c, "json", "json|csv");
  ck->add_option("--alpha", ck_alpha, "Alpha (decimal or preset)")->capture_default_str();
  ck->add_option("--x", ck_x, "Target point in [0,1]")->capture_default_str();
  ck->add_option("--q", ck_q, "Convergent denominator")->capture_default_str();
  ck->callback([&] {
    action = [&] {
      const ResolvedAlpha a = resolve_alpha(ck_alpha);
      const irf_format fmt = parse_format(ck_c.format, {IRF_FORMAT_JSON, IRF_FORMAT_CSV});
      if (ck_c.dry_run) {
        ordered_json j = config_header("closek", ck_c);
        j["alpha"] = a.value;
        j["x"] = ck_x;
        j["q"] = ck_q;
        emit(ck_c, dump(j));
        return kExitOk;
      }
      std::int64_t k = 0;
      double value = 0;
      check(irf_find_close_k(a.value, ck_x, ck_q, &k, &value));
      const double bound = 3.0 / (2.0 * static_cast<double>(ck_q));
      if (fmt == IRF_FORMAT_CSV) {
        emit(ck_c, "k,value,bound\n" + std::to_string(k) + "," + fmt_double(value) + "," + fmt_double(bound) + "\n");
      } else {
        ordered_json j;
        j["schema"] = 1;
        j["kind"] = "close_witness";
        j["alpha"] = a.value;
        j["x"] = ck_x;
        j["q"] = ck_q;
        j["k"] = k;
        j["value"] = value;
        j["bound"] = bound;
        emit(ck_c, dump(j));
      }
      return kExitOk;
    };
  });

  // shrinkword
  Common sw_c;
  std::string sw_alpha = "inv-sqrt2";
  double sw_beta = 1.0, sw_m = 0.5, sw_threshold = 0.01;
  std::size_t sw_max_len = 64;
  auto* sw = app.add_subcommand("shrinkword", "Shortest word over {alpha, beta} driving m below a threshold");
  add_common(sw, sw_c, "json", "json|csv");
  sw->add_option("--alpha", sw_alpha, "First fold point (decimal or preset)")->capture_default_str();
  sw->add_option("--beta", sw_beta, "Second fold point, > alpha")->capture_default_str();
  sw->add_option("--m", sw_m, "Starting value")->capture_default_str();
  sw->add_option("--threshold", sw_threshold, "Target bound")->capture_default_str();
  sw->add_option("--max-len", sw_max_len, "Longest word searched")->capture_default_str();
  sw->callback([&] {
    action = [&] {
      const ResolvedAlpha a = resolve_alpha(sw_alpha);
      const irf_format fmt = parse_format(sw_c.format, {IRF_FORMAT_JSON, IRF_FORMAT_CSV});
      if (sw_c.dry_run) {
        ordered_json j = config_header("shrinkword", sw_c);
        j["alpha"] = a.value;
        j["beta"] = sw_beta;
        j["m"] = sw_m;
        j["threshold"] = sw_threshold;
        j["max_len"] = sw_max_len;
        emit(sw_c, dump(j));
        return kExitOk;
      }
      std::size_t len = 0;
      check(irf_shrink_word(a.value, sw_beta, sw_m, sw_threshold, sw_max_len, nullptr, 0, &len));
      std::vector<double> word(len);
      check(irf_shrink_word(a.value, sw_beta, sw_m, sw_threshold, sw_max_len, word.data(), word.size(), &len));
      std::vector<double> traj(len + 1);
      check(irf_iterate_forward(word.data(), word.size(), sw_m, traj.data()));
      if (fmt == IRF_FORMAT_CSV) {
        std::string out = "step,theta,value\n0,," + fmt_double(traj[0]) + "\n";
        for (std::size_t i = 0; i < len; ++i)
          out += std::to_string(i + 1) + "," + fmt_double(word[i]) + "," + fmt_double(traj[i + 1]) + "\n";
        emit(sw_c, out);
      } else {
        ordered_json j;
        j["schema"] = 1;
        j["kind"] = "shrink_word";
        j["alpha"] = a.value;
        j["beta"] = sw_beta;
        j["m"] = sw_m;
        j["threshold"] = sw_threshold;
        std::string letters;
        for (double w : word) letters += (w == a.value ? 'a' : 'b');
        j["letters"] = letters;
        j["word"] = word;
        j["final_value"] = traj.back();
        emit(sw_c, dump(j));
      }
      return kExitOk;
    };
  });

  // rate
  Common rt_c;
  std::string rt_alpha = "inv-sqrt2";
  std::int64_t rt_qk = 17;
  double rt_eps = 0.5;
  std::uint64_t rt_trials = 200, rt_seed = 0;
  auto* rt = app.add_subcommand("rate", "Backward-iterate contraction within N = ceil(8 q^3 log2 q) steps");
  add_common(rt, rt_c, "json", "json|csv");
  rt->add_option("--alpha", rt_alpha, "Alpha (decimal or preset)")->capture_default_str();
  rt->add_option("--qk", rt_qk, "Convergent denominator q_k of alpha")->capture_default_str();
  rt->add_option("--eps", rt_eps, "Diameter threshold, > 8/q_k")->capture_default_str();
  rt->add_option("--trials", rt_trials, "Independent words")->capture_default_str();
  rt->add_option("--seed", rt_seed, "Master seed")->required();
  rt->callback([&] {
    action = [&] {
      const ResolvedAlpha a = resolve_alpha(rt_alpha);
      const irf_format fmt = parse_format(rt_c.format, {IRF_FORMAT_JSON, IRF_FORMAT_CSV});
      if (rt_c.dry_run) {
        ordered_json j = config_header("rate", rt_c);
        j["alpha"] = a.value;
        j["q_k"] = rt_qk;
        j["epsilon"] = rt_eps;
        std::uint64_t horizon = 0;
        if (irf_rate_horizon(rt_qk, &horizon) == IRF_OK)
          j["N"] = horizon;
        else
          j["N"] = nullptr;
        j["trials"] = rt_trials;
        j["seed"] = rt_seed;
        emit(rt_c, dump(j));
        return kExitOk;
      }
      const irf_trial_plan plan = make_plan(rt_seed, rt_trials, 0, rt_c.threads);
      irf_rate_report* raw = nullptr;
      check(irf_rate_run(a.value, rt_qk, rt_eps, &plan, &raw));
      std::unique_ptr<irf_rate_report, RateDeleter> report(raw);
      irf_rate_summary s{};
      check(irf_rate_summary_get(report.get(), &s));
      std::fprintf(stderr, "rate runtime: %.3f s\n", s.runtime_seconds);
      OwnedString out;
      check(irf_rate_export(report.get(), fmt, &out.ptr));
      emit(rt_c, out.str());
      return kExitOk;
    };
  });

  // walk-oracle
  Common wk_c;
  int wk_min = 1, wk_max = 12;
  auto* wk = app.add_subcommand("walk-oracle", "Exact probability a simple walk of n^3 steps stays within n");
  add_common(wk, wk_c, "csv", "csv|json");
  wk->add_option("--n-min", wk_min, "Smallest n")->capture_default_str();
  wk->add_option("--n-max", wk_max, "Largest n (<= 30)")->capture_default_str();
  wk->callback([&] {
    action = [&] {
      const irf_format fmt = parse_format(wk_c.format, {IRF_FORMAT_CSV, IRF_FORMAT_JSON});
      if (wk_c.dry_run) {
        ordered_json j = config_header("walk-oracle", wk_c);
        j["n_min"] = wk_min;
        j["n_max"] = wk_max;
        emit(wk_c, dump(j));
        return kExitOk;
      }
      OwnedString out;
      check(irf_walk_confinement_export(wk_min, wk_max, fmt, &out.ptr));
      emit(wk_c, out.str());
      return kExitOk;
    };
  });

  // rho-audit
  Common ra_c;
  std::string ra_alpha = "inv-sqrt2";
  double ra_x0 = 0.2;
  std::uint64_t ra_steps = 1000, ra_trials = 100, ra_seed = 0;
  std::vector<std::int64_t> ra_q{7, 17};
  std::int64_t ra_window = 10000;
  auto* ra = app.add_subcommand("rho-audit", "Walk the rho chart: +1/-1 balance and far-small checks");
  add_common(ra, ra_c, "json", "json");
  ra->add_option("--alpha", ra_alpha, "Alpha (decimal or preset)")->capture_default_str();
  ra->add_option("--x0", ra_x0, "Base point, 0 < x0 < min(alpha, 1-alpha)")->capture_default_str();
  ra->add_option("--steps", ra_steps, "Steps per walk")->capture_default_str();
  ra->add_option("--trials", ra_trials, "Independent walks")->capture_default_str();
  ra->add_option("--q", ra_q, "Convergent denominators for the far-small check")->capture_default_str();
  ra->add_option("--window", ra_window, "Orbit graph window")->capture_default_str();
  ra->add_option("--seed", ra_seed, "Master seed")->required();
  ra->callback([&] {
    action = [&] {
      const ResolvedAlpha a = resolve_alpha(ra_alpha);
      parse_format(ra_c.format, {IRF_FORMAT_JSON});
      if (ra_c.dry_run) {
        ordered_json j = config_header("rho-audit", ra_c);
        j["alpha"] = a.value;
        j["x0"] = ra_x0;
        j["steps"] = ra_steps;
        j["trials"] = ra_trials;
        j["q"] = ra_q;
        j["window"] = ra_window;
        j["seed"] = ra_seed;
        emit(ra_c, dump(j));
        return kExitOk;
      }
      const irf_trial_plan plan = make_plan(ra_seed, ra_trials, ra_steps, ra_c.threads);
      Timer t;
      OwnedString out;
      check(irf_rho_audit(a.value, ra_x0, ra_steps, &plan, ra_q.data(), ra_q.size(), ra_window, nullptr,
                          &out.ptr));
      t.report("rho audit runtime");
      emit(ra_c, out.str());
      return kExitOk;
    };
  });

  // bvf-check
  Common bv_c;
  std::string bv_dist, bv_alpha = "inv-sqrt2";
  double bv_x0 = 0.2;
  std::uint64_t bv_n = 50, bv_trials = 100000, bv_seed = 0;
  auto* bv = app.add_subcommand("bvf-check", "Two-sample KS distance between backward and forward iterates");
  add_common(bv, bv_c, "json", "json|csv");
  bv->add_option("--dist", bv_dist, "two-point:<alpha> or point:weight,...");
  bv->add_option("--alpha", bv_alpha, "Alpha for the two-point law")->capture_default_str();
  bv->add_option("--x0", bv_x0, "Starting point")->capture_default_str();
  bv->add_option("--n", bv_n, "Word length")->capture_default_str();
  bv->add_option("--trials", bv_trials, "Words per ensemble")->capture_default_str();
  bv->add_option("--seed", bv_seed, "Master seed")->required();
  bv->callback([&] {
    action = [&] {
      const ResolvedDist d = dist_from_options(bv_dist, bv_alpha);
      const irf_format fmt = parse_format(bv_c.format, {IRF_FORMAT_JSON, IRF_FORMAT_CSV});
      if (bv_c.dry_run) {
        ordered_json j = config_header("bvf-check", bv_c);
        j["dist"] = dist_json(d);
        j["x0"] = bv_x0;
        j["n"] = bv_n;
        j["trials"] = bv_trials;
        j["seed"] = bv_seed;
        emit(bv_c, dump(j));
        return kExitOk;
      }
      DistPtr dist = make_dist(d);
      const irf_trial_plan plan = make_plan(bv_seed, bv_trials, bv_n, bv_c.threads);
      Timer t;
      OwnedString json;
      double ks = 0;
      check(irf_bvf_check(dist.get(), bv_x0, bv_n, &plan, &ks, &json.ptr));
      t.report("bvf check runtime");
      if (fmt == IRF_FORMAT_CSV)
        emit(bv_c, "n,trials,x0,ks\n" + std::to_string(bv_n) + "," + std::to_string(bv_trials) + "," +
                       fmt_double(bv_x0) + "," + fmt_double(ks) + "\n");
      else
        emit(bv_c, json.str());
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const CliFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitInternal;
  }
}
