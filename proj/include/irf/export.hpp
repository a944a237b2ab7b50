#pragma once

// Stable text serializations. Every JSON document carries "schema": 1 and a
// "kind" tag; CSV files start with a header row.

#include <string>
#include <vector>

#include "irf/diophantine.hpp"
#include "irf/lab.hpp"
#include "irf/orbit.hpp"
#include "irf/stationary.hpp"

namespace irf {

inline constexpr int kSchemaVersion = 1;

std::string cdf_to_csv(const PiecewiseLinearCDF& cdf);
std::string cdf_to_json(const PiecewiseLinearCDF& cdf);

// Vertices "(n,+1)/small", edges labelled "a" (theta = alpha) or "1".
std::string graph_to_dot(const OrbitGraphWindow& graph);
std::string stats_to_json(const StructureStats& stats);

// Columns n, a_n, p_n, q_n, |alpha - p/q| * 2q^2.
std::string convergents_to_csv(double alpha, const std::vector<Convergent>& convs);

// Wall-clock runtime is deliberately left out so reports are reproducible.
std::string rate_report_to_json(const RateReport& report);
std::string rate_report_to_csv(const RateReport& report);

std::string rho_audit_to_json(const RhoAuditReport& report);
std::string bvf_to_json(const BvfReport& report);
std::string stationarity_to_json(const StationarityReport& report);

struct EnsembleSummary {
  double x0 = 0.0;
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
  double ks_to_stationary = 0.0;
  double mean = 0.0;
};

std::string ensemble_to_json(const EnsembleSummary& summary);
std::string samples_to_csv(const EmpiricalCDF& samples);

std::string confinement_to_csv(const std::vector<std::pair<int, double>>& rows);
std::string confinement_to_json(const std::vector<std::pair<int, double>>& rows);

}  // namespace irf
