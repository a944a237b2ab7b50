#include "irf/export.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace irf {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json header(const char* kind) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string label_text(OrbitLabel l) {
  return "(" + std::to_string(l.n) + "," + (l.eps > 0 ? "+1" : "-1") + ")";
}

}  // namespace

std::string cdf_to_csv(const PiecewiseLinearCDF& cdf) {
  std::string out = "x,F\n";
  for (std::size_t i = 0; i < cdf.breakpoints().size(); ++i)
    out += num(cdf.breakpoints()[i]) + "," + num(cdf.values()[i]) + "\n";
  return out;
}

std::string cdf_to_json(const PiecewiseLinearCDF& cdf) {
  ordered_json j = header("piecewise_linear_cdf");
  j["breakpoints"] = cdf.breakpoints();
  j["values"] = cdf.values();
  return dump(j);
}

std::string graph_to_dot(const OrbitGraphWindow& graph) {
  std::ostringstream os;
  os << "digraph orbit {\n";
  os << "  // alpha=" << num(graph.alpha()) << " x=" << num(graph.base_x()) << " window=" << graph.window()
     << "\n";
  os << "  node [shape=box, fontsize=10];\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    os << "  v" << i << " [label=\"" << label_text(graph.label(i)) << "/" << to_string(graph.vertex_class(i))
       << "\"";
    if (graph.coincident(i)) os << ", style=dashed";
    os << "];\n";
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    for (Letter letter : {Letter::Alpha, Letter::One}) {
      const std::int64_t t = graph.target(i, letter);
      if (t == OrbitGraphWindow::kNoVertex) continue;
      os << "  v" << i << " -> v" << t << " [label=\"" << (letter == Letter::Alpha ? "a" : "1") << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string stats_to_json(const StructureStats& stats) {
  ordered_json j = header("structure_stats");
  j["alpha"] = stats.alpha;
  j["counted_vertices"] = stats.counted_vertices;
  j["class_fractions"] = {{"small", stats.small_fraction},
                          {"medium", stats.medium_fraction},
                          {"large", stats.large_fraction}};
  j["run_kind"] = stats.diagonal_runs ? "diagonal_edges_between_boxes" : "boxes_between_diagonal_edges";
  ordered_json hist = ordered_json::object();
  for (const auto& [len, count] : stats.run_histogram) hist[std::to_string(len)] = count;
  j["run_histogram"] = hist;
  j["q"] = stats.q;
  j["r"] = stats.r;
  j["predicted_ratio_q_to_q_plus_1"] = stats.predicted_ratio;
  const auto q_it = stats.run_histogram.find(stats.q);
  const auto q1_it = stats.run_histogram.find(stats.q + 1);
  if (q_it != stats.run_histogram.end() && q1_it != stats.run_histogram.end() && q1_it->second > 0)
    j["observed_ratio_q_to_q_plus_1"] = static_cast<double>(q_it->second) / static_cast<double>(q1_it->second);
  else
    j["observed_ratio_q_to_q_plus_1"] = nullptr;
  return dump(j);
}

std::string convergents_to_csv(double alpha, const std::vector<Convergent>& convs) {
  std::string out = "n,a_n,p_n,q_n,scaled_error\n";
  for (const Convergent& c : convs) {
    out += std::to_string(c.index) + "," + std::to_string(c.a) + "," + std::to_string(c.p) + "," +
           std::to_string(c.q) + "," + num(approximation_quality(alpha, c)) + "\n";
  }
  return out;
}

std::string rate_report_to_json(const RateReport& report) {
  ordered_json j = header("rate_report");
  j["alpha"] = report.alpha;
  j["q_k"] = report.q_k;
  j["epsilon"] = report.epsilon;
  j["N"] = report.horizon;
  j["trials"] = report.trials;
  j["seed"] = report.master_seed;
  j["success_count"] = report.success_count;
  j["success_fraction"] = report.success_fraction();
  if (report.implied_c)
    j["implied_c"] = *report.implied_c;
  else
    j["implied_c"] = nullptr;
  double worst = 0.0;
  for (double d : report.diameters) worst = std::max(worst, d);
  j["max_diameter"] = worst;
  return dump(j);
}

std::string rate_report_to_csv(const RateReport& report) {
  std::string out = "trial,diameter,success\n";
  for (std::size_t t = 0; t < report.diameters.size(); ++t)
    out += std::to_string(t) + "," + num(report.diameters[t]) + "," +
           (report.diameters[t] < report.epsilon ? "1" : "0") + "\n";
  return out;
}

std::string rho_audit_to_json(const RhoAuditReport& report) {
  ordered_json j = header("rho_audit");
  j["alpha"] = report.alpha;
  j["x0"] = report.x0;
  j["steps"] = report.steps;
  j["trials"] = report.trials;
  j["plus_steps"] = report.plus_steps;
  j["minus_steps"] = report.minus_steps;
  j["nonunit_steps"] = report.nonunit_steps;
  if (const auto f = report.plus_fraction())
    j["plus_fraction"] = *f;
  else
    j["plus_fraction"] = nullptr;
  ordered_json fs = ordered_json::array();
  for (const FarSmallAudit& a : report.farsmall)
    fs.push_back({{"q_m", a.q_m}, {"segments", a.segments}, {"violations", a.violations}});
  j["farsmall"] = fs;
  return dump(j);
}

std::string bvf_to_json(const BvfReport& report) {
  ordered_json j = header("bvf_check");
  j["n"] = report.n;
  j["trials"] = report.trials;
  j["x0"] = report.x0;
  j["ks"] = report.ks;
  return dump(j);
}

std::string stationarity_to_json(const StationarityReport& report) {
  ordered_json j = header("stationarity_check");
  j["samples"] = report.samples;
  j["ks_before_step"] = report.ks_before;
  j["ks_after_step"] = report.ks_after;
  return dump(j);
}

std::string ensemble_to_json(const EnsembleSummary& s) {
  ordered_json j = header("ensemble_forward");
  j["x0"] = s.x0;
  j["n"] = s.n;
  j["trials"] = s.trials;
  j["seed"] = s.master_seed;
  j["ks_to_stationary"] = s.ks_to_stationary;
  j["mean"] = s.mean;
  return dump(j);
}

std::string samples_to_csv(const EmpiricalCDF& samples) {
  std::string out = "rank,x\n";
  for (std::size_t i = 0; i < samples.size(); ++i) out += std::to_string(i) + "," + num(samples.sorted()[i]) + "\n";
  return out;
}

std::string confinement_to_csv(const std::vector<std::pair<int, double>>& rows) {
  std::string out = "n,horizon,probability\n";
  for (const auto& [n, p] : rows)
    out += std::to_string(n) + "," + std::to_string(static_cast<long long>(n) * n * n) + "," + num(p) + "\n";
  return out;
}

std::string confinement_to_json(const std::vector<std::pair<int, double>>& rows) {
  ordered_json j = header("walk_confinement");
  ordered_json arr = ordered_json::array();
  for (const auto& [n, p] : rows)
    arr.push_back({{"n", n}, {"horizon", static_cast<long long>(n) * n * n}, {"probability", p}});
  j["rows"] = arr;
  return dump(j);
}

}  // namespace irf
