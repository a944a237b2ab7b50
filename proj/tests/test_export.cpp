#include <sstream>

#include "doctest.h"
#include "irf/export.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace irf;
using oracle::kInvSqrt2;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("export") {

TEST_CASE("CDF serializations") {
  const auto cdf = stationary_cdf(ThetaDist::two_point(kInvSqrt2));
  const auto csv = lines(cdf_to_csv(cdf));
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] == "x,F");
  CHECK(csv[1] == "0,0");
  CHECK(csv[3] == "1,1");
  const json j = json::parse(cdf_to_json(cdf));
  CHECK(j["schema"] == 1);
  CHECK(j["kind"] == "piecewise_linear_cdf");
  CHECK(j["breakpoints"].size() == 3);
  CHECK(j["values"][1].get<double>() == doctest::Approx(z_limit(kInvSqrt2)));
}

TEST_CASE("DOT graph") {
  const auto g = build_graph_window(kInvSqrt2, 0.2, 3);
  const std::string dot = graph_to_dot(g);
  CHECK(dot.rfind("digraph orbit {", 0) == 0);
  CHECK(dot.find("[label=\"(0,+1)/small\"]") != std::string::npos);
  CHECK(dot.find("[label=\"(1,+1)/large\"]") != std::string::npos);
  CHECK(dot.find("[label=\"a\"]") != std::string::npos);
  CHECK(dot.find("[label=\"1\"]") != std::string::npos);
  std::size_t edges = 0;
  for (const auto& l : lines(dot)) edges += l.find("->") != std::string::npos;
  std::size_t expected = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (Letter l : {Letter::Alpha, Letter::One}) expected += g.target(i, l) != OrbitGraphWindow::kNoVertex;
  CHECK(edges == expected);
  CHECK(dot.find("dashed") == std::string::npos);
  CHECK(graph_to_dot(build_graph_window(kInvSqrt2, kInvSqrt2 / 2, 3)).find("dashed") != std::string::npos);
}

TEST_CASE("structure statistics JSON") {
  const auto s = structure_stats(build_graph_window(kInvSqrt2, 0.2, 2000));
  const json j = json::parse(stats_to_json(s));
  CHECK(j["schema"] == 1);
  CHECK(j["kind"] == "structure_stats");
  CHECK(j["q"] == 2);
  CHECK(j["run_histogram"].contains("2"));
  CHECK(j["run_histogram"].contains("3"));
  CHECK(j["observed_ratio_q_to_q_plus_1"].is_number());
  CHECK(j["class_fractions"]["medium"].get<double>() == doctest::Approx(s.medium_fraction));
}

TEST_CASE("convergents CSV") {
  const auto rows = lines(convergents_to_csv(kInvSqrt2, convergents(contfrac_expand(kInvSqrt2, 5))));
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "n,a_n,p_n,q_n,scaled_error");
  CHECK(rows[5].rfind("4,2,12,17,", 0) == 0);
  CHECK(rows[6].rfind("5,2,29,41,", 0) == 0);
}

TEST_CASE("rate report formats") {
  const auto r = rate_experiment(kInvSqrt2, 17, 0.5, {7, 4, 0});
  const std::string text = rate_report_to_json(r);
  const json j = json::parse(text);
  CHECK(j["schema"] == 1);
  CHECK(j["kind"] == "rate_report");
  CHECK(j["N"] == 160654);
  CHECK(j["trials"] == 4);
  CHECK(j["seed"] == 7);
  CHECK(j["implied_c"].is_null());
  CHECK_FALSE(j.contains("runtime_seconds"));
  CHECK(text.back() == '\n');
  const auto csv = lines(rate_report_to_csv(r));
  REQUIRE(csv.size() == 5);
  CHECK(csv[0] == "trial,diameter,success");
  CHECK(csv[1].substr(csv[1].size() - 2) == ",1");
}

TEST_CASE("other reports") {
  const json rho = json::parse(rho_audit_to_json(rho_walk_audit(kInvSqrt2, 0.2, 0, {1, 1, 0}, {})));
  CHECK(rho["kind"] == "rho_audit");
  CHECK(rho["plus_fraction"].is_null());

  const json bvf = json::parse(bvf_to_json(BvfReport{50, 10, 0.2, 0.125}));
  CHECK(bvf["ks"] == 0.125);

  const json st = json::parse(stationarity_to_json(StationarityReport{10, 0.1, 0.2}));
  CHECK(st["ks_after_step"] == 0.2);

  const json ens = json::parse(ensemble_to_json(EnsembleSummary{0.2, 5, 10, 3, 0.1, 0.4}));
  CHECK(ens["kind"] == "ensemble_forward");

  const auto samples = lines(samples_to_csv(EmpiricalCDF({0.5, 0.25})));
  CHECK(samples == std::vector<std::string>{"rank,x", "0,0.25", "1,0.5"});

  const std::vector<std::pair<int, double>> rows{{1, 1.0}, {2, 0.5}};
  CHECK(lines(confinement_to_csv(rows)) == std::vector<std::string>{"n,horizon,probability", "1,1,1", "2,8,0.5"});
  const json wc = json::parse(confinement_to_json(rows));
  CHECK(wc["rows"][1]["horizon"] == 8);
}

}  // TEST_SUITE
