#include "irf/irf.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

#include "irf/diophantine.hpp"
#include "irf/export.hpp"
#include "irf/lab.hpp"
#include "irf/orbit.hpp"
#include "irf/stationary.hpp"

struct irf_dist {
  irf::ThetaDist dist;
};

struct irf_cdf {
  irf::PiecewiseLinearCDF cdf;
};

struct irf_graph {
  irf::OrbitGraphWindow graph;
};

struct irf_rate_report {
  irf::RateReport report;
};

namespace {

thread_local std::string g_last_error;

irf_status code_for(irf::ErrorKind kind) {
  switch (kind) {
    case irf::ErrorKind::InvalidArgument: return IRF_ERR_INVALID_ARGUMENT;
    case irf::ErrorKind::Domain: return IRF_ERR_DOMAIN;
    case irf::ErrorKind::Precision: return IRF_ERR_PRECISION;
    case irf::ErrorKind::NotFound: return IRF_ERR_NOT_FOUND;
    case irf::ErrorKind::LemmaViolation: return IRF_ERR_LEMMA_VIOLATION;
    case irf::ErrorKind::Structural: return IRF_ERR_STRUCTURAL;
    case irf::ErrorKind::Overflow: return IRF_ERR_OVERFLOW;
  }
  return IRF_ERR_INTERNAL;
}

template <class Fn>
irf_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return IRF_OK;
  } catch (const irf::Error& e) {
    g_last_error = e.what();
    return code_for(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return IRF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return IRF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return IRF_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) irf::fail(irf::ErrorKind::InvalidArgument, std::string(what) + " must not be NULL");
}

char* to_c_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

irf::TrialPlan to_plan(const irf_trial_plan* plan) {
  require(plan, "plan");
  irf::TrialPlan p{plan->master_seed, plan->trials, plan->steps};
  irf::validate(p);
  return p;
}

// Argument evaluation order is unspecified, so this must not assume to_plan ran first.
unsigned threads_of(const irf_trial_plan* plan) { return plan ? plan->threads : 0; }

irf_vertex_class to_c(irf::VertexClass c) {
  switch (c) {
    case irf::VertexClass::Small: return IRF_VERTEX_SMALL;
    case irf::VertexClass::Medium: return IRF_VERTEX_MEDIUM;
    case irf::VertexClass::Large: return IRF_VERTEX_LARGE;
    case irf::VertexClass::Boundary: return IRF_VERTEX_BOUNDARY;
  }
  return IRF_VERTEX_BOUNDARY;
}

std::span<const double> span_of(const double* data, size_t count) {
  if (count > 0) require(data, "word");
  return {data, count};
}

}  // namespace

extern "C" {

const char* irf_version(void) { return "1.0.0"; }

const char* irf_status_name(irf_status status) {
  switch (status) {
    case IRF_OK: return "ok";
    case IRF_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case IRF_ERR_DOMAIN: return "domain";
    case IRF_ERR_PRECISION: return "precision";
    case IRF_ERR_NOT_FOUND: return "not-found";
    case IRF_ERR_LEMMA_VIOLATION: return "lemma-violation";
    case IRF_ERR_STRUCTURAL: return "structural";
    case IRF_ERR_OVERFLOW: return "overflow";
    case IRF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* irf_last_error(void) { return g_last_error.c_str(); }

void irf_string_free(char* str) { std::free(str); }

irf_status irf_dist_create(const double* support, const double* weights, size_t count, irf_dist** out) {
  return guarded([&] {
    require(out, "out");
    require(support, "support");
    require(weights, "weights");
    *out = new irf_dist{irf::ThetaDist({support, support + count}, {weights, weights + count})};
  });
}

irf_status irf_dist_create_two_point(double alpha, irf_dist** out) {
  return guarded([&] {
    require(out, "out");
    *out = new irf_dist{irf::ThetaDist::two_point(alpha)};
  });
}

void irf_dist_destroy(irf_dist* dist) { delete dist; }

irf_status irf_dist_info(const irf_dist* dist, double* bound, double* mean, int* canonical, double* alpha) {
  return guarded([&] {
    require(dist, "dist");
    if (bound) *bound = dist->dist.bound();
    if (mean) *mean = dist->dist.mean();
    if (canonical) *canonical = dist->dist.is_canonical_two_point() ? 1 : 0;
    if (alpha) *alpha = dist->dist.alpha();
  });
}

irf_status irf_step(double theta, double x, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::step(theta, x);
  });
}

irf_status irf_iterate_forward(const double* word, size_t count, double x0, double* trajectory) {
  return guarded([&] {
    require(trajectory, "trajectory");
    const auto t = irf::iterate_forward(span_of(word, count), x0);
    std::copy(t.begin(), t.end(), trajectory);
  });
}

irf_status irf_fold_backward(const double* word, size_t count, double x, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::fold_backward(span_of(word, count), x);
  });
}

irf_status irf_interval_image(double theta, double lo, double hi, double* out_lo, double* out_hi) {
  return guarded([&] {
    require(out_lo, "out_lo");
    require(out_hi, "out_hi");
    const irf::Interval r = irf::interval_image(theta, irf::make_interval(lo, hi));
    *out_lo = r.lo;
    *out_hi = r.hi;
  });
}

irf_status irf_backward_image(const double* word, size_t count, double lo, double hi, double* out_lo,
                              double* out_hi) {
  return guarded([&] {
    require(out_lo, "out_lo");
    require(out_hi, "out_hi");
    const irf::Interval r = irf::backward_image(span_of(word, count), irf::make_interval(lo, hi));
    *out_lo = r.lo;
    *out_hi = r.hi;
  });
}

irf_status irf_stationary_cdf(const irf_dist* dist, irf_cdf** out) {
  return guarded([&] {
    require(dist, "dist");
    require(out, "out");
    *out = new irf_cdf{irf::stationary_cdf(dist->dist)};
  });
}

void irf_cdf_destroy(irf_cdf* cdf) { delete cdf; }

irf_status irf_cdf_eval(const irf_cdf* cdf, double x, double* out) {
  return guarded([&] {
    require(cdf, "cdf");
    require(out, "out");
    *out = cdf->cdf(x);
  });
}

irf_status irf_cdf_quantile(const irf_cdf* cdf, double u, double* out) {
  return guarded([&] {
    require(cdf, "cdf");
    require(out, "out");
    *out = irf::stationary_quantile(cdf->cdf, u);
  });
}

irf_status irf_cdf_export(const irf_cdf* cdf, irf_format format, char** out) {
  return guarded([&] {
    require(cdf, "cdf");
    require(out, "out");
    if (format == IRF_FORMAT_JSON)
      *out = to_c_string(irf::cdf_to_json(cdf->cdf));
    else if (format == IRF_FORMAT_CSV)
      *out = to_c_string(irf::cdf_to_csv(cdf->cdf));
    else
      irf::fail(irf::ErrorKind::InvalidArgument, "CDF export supports json or csv");
  });
}

irf_status irf_large_count(double alpha, uint64_t n, uint64_t* large, uint64_t* large_and_medium,
                           uint64_t* recurrence) {
  return guarded([&] {
    const irf::LargeCounts c = irf::large_count(alpha, n);
    if (large) *large = c.large;
    if (large_and_medium) *large_and_medium = c.large_and_medium;
    if (recurrence) *recurrence = c.recurrence();
  });
}

irf_status irf_affine_small_vertex(double alpha, uint64_t n, double* a, double* b) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    const irf::AffineInZ v = irf::affine_small_vertex(alpha, n);
    *a = v.a;
    *b = v.b;
  });
}

irf_status irf_z_estimate(double alpha, uint64_t n, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::z_estimate(alpha, n);
  });
}

irf_status irf_label_value(double alpha, double x, int64_t n, int eps, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::label_value(alpha, x, {n, eps});
  });
}

irf_status irf_apply_theta_label(double alpha, double x, int64_t n, int eps, int theta_is_alpha, int64_t* out_n,
                                 int* out_eps) {
  return guarded([&] {
    require(out_n, "out_n");
    require(out_eps, "out_eps");
    const irf::OrbitLabel l =
        irf::apply_theta_label(alpha, x, {n, eps}, theta_is_alpha ? irf::Letter::Alpha : irf::Letter::One);
    *out_n = l.n;
    *out_eps = l.eps;
  });
}

irf_status irf_classify_vertex(double alpha, double value, irf_vertex_class* out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(irf::classify_vertex(alpha, value));
  });
}

irf_status irf_is_singular(double alpha, double x, int64_t window, int* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::is_singular(alpha, x, window) ? 1 : 0;
  });
}

irf_status irf_graph_build(double alpha, double x, int64_t window, irf_graph** out) {
  return guarded([&] {
    require(out, "out");
    *out = new irf_graph{irf::build_graph_window(alpha, x, window)};
  });
}

void irf_graph_destroy(irf_graph* graph) { delete graph; }

irf_status irf_graph_size(const irf_graph* graph, size_t* out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    *out = graph->graph.size();
  });
}

irf_status irf_graph_vertex(const irf_graph* graph, size_t index, int64_t* n, int* eps, double* value,
                            irf_vertex_class* cls) {
  return guarded([&] {
    require(graph, "graph");
    if (index >= graph->graph.size()) irf::fail(irf::ErrorKind::InvalidArgument, "vertex index out of range");
    const irf::OrbitLabel l = graph->graph.label(index);
    if (n) *n = l.n;
    if (eps) *eps = l.eps;
    if (value) *value = graph->graph.value(index);
    if (cls) *cls = to_c(graph->graph.vertex_class(index));
  });
}

irf_status irf_graph_target(const irf_graph* graph, size_t index, int theta_is_alpha, int64_t* target) {
  return guarded([&] {
    require(graph, "graph");
    require(target, "target");
    if (index >= graph->graph.size()) irf::fail(irf::ErrorKind::InvalidArgument, "vertex index out of range");
    *target = graph->graph.target(index, theta_is_alpha ? irf::Letter::Alpha : irf::Letter::One);
  });
}

irf_status irf_graph_stats(const irf_graph* graph, irf_structure_summary* out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    const irf::StructureStats s = irf::structure_stats(graph->graph);
    *out = irf_structure_summary{};
    out->counted_vertices = s.counted_vertices;
    out->small_fraction = s.small_fraction;
    out->medium_fraction = s.medium_fraction;
    out->large_fraction = s.large_fraction;
    out->diagonal_runs = s.diagonal_runs ? 1 : 0;
    out->q = s.q;
    out->r = s.r;
    out->predicted_ratio = s.predicted_ratio;
    for (const auto& [len, count] : s.run_histogram) {
      if (len == s.q)
        out->count_q += count;
      else if (len == s.q + 1)
        out->count_q_plus_1 += count;
      else
        out->count_other += count;
    }
  });
}

irf_status irf_graph_export(const irf_graph* graph, irf_format format, char** out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    if (format == IRF_FORMAT_DOT)
      *out = to_c_string(irf::graph_to_dot(graph->graph));
    else if (format == IRF_FORMAT_JSON)
      *out = to_c_string(irf::stats_to_json(irf::structure_stats(graph->graph)));
    else
      irf::fail(irf::ErrorKind::InvalidArgument, "graph export supports dot or json");
  });
}

irf_status irf_graph_rho(const irf_graph* graph, int64_t base_n, int base_eps, int64_t* rho) {
  return guarded([&] {
    require(graph, "graph");
    require(rho, "rho");
    const irf::RhoChart chart = irf::rho_chart(graph->graph, {base_n, base_eps});
    for (std::size_t i = 0; i < graph->graph.size(); ++i)
      rho[i] = chart.at_index(i).value_or(std::numeric_limits<int64_t>::min());
  });
}

irf_status irf_shrink_word(double alpha, double beta, double m, double threshold, size_t max_len, double* word,
                           size_t capacity, size_t* length) {
  return guarded([&] {
    require(length, "length");
    const irf::ThetaWord w = irf::shrink_word(alpha, beta, m, threshold, max_len);
    *length = w.size();
    if (capacity > 0) require(word, "word");
    std::copy_n(w.begin(), std::min(capacity, w.size()), word);
  });
}

irf_status irf_contfrac(double alpha, int terms, irf_convergent* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(count, "count");
    const auto convs = irf::convergents(irf::contfrac_expand(alpha, terms));
    *count = convs.size();
    if (capacity > 0) require(out, "out");
    for (std::size_t i = 0; i < std::min(capacity, convs.size()); ++i)
      out[i] = irf_convergent{convs[i].index, convs[i].a, convs[i].p, convs[i].q};
  });
}

irf_status irf_reliable_terms(double alpha, int* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::reliable_terms(alpha);
  });
}

irf_status irf_contfrac_export(double alpha, int terms, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c_string(irf::convergents_to_csv(alpha, irf::convergents(irf::contfrac_expand(alpha, terms))));
  });
}

irf_status irf_find_close_k(double alpha, double x, int64_t q, int64_t* k, double* value) {
  return guarded([&] {
    require(k, "k");
    require(value, "value");
    const irf::CloseWitness w = irf::find_close_k(alpha, x, q);
    *k = w.k;
    *value = w.value;
  });
}

irf_status irf_ensemble_forward(const irf_dist* dist, double x0, uint64_t n, const irf_trial_plan* plan,
                                double* sorted) {
  return guarded([&] {
    require(dist, "dist");
    require(sorted, "sorted");
    const irf::EmpiricalCDF e = irf::ensemble_forward(dist->dist, x0, n, to_plan(plan), threads_of(plan));
    std::copy(e.sorted().begin(), e.sorted().end(), sorted);
  });
}

irf_status irf_ensemble_export(const irf_dist* dist, double x0, uint64_t n, const irf_trial_plan* plan,
                               irf_format format, char** out) {
  return guarded([&] {
    require(dist, "dist");
    require(out, "out");
    const irf::TrialPlan p = to_plan(plan);
    const irf::EmpiricalCDF e = irf::ensemble_forward(dist->dist, x0, n, p, threads_of(plan));
    if (format == IRF_FORMAT_CSV) {
      *out = to_c_string(irf::samples_to_csv(e));
    } else if (format == IRF_FORMAT_JSON) {
      irf::EnsembleSummary s;
      s.x0 = x0;
      s.n = n;
      s.trials = p.trials;
      s.master_seed = p.master_seed;
      s.ks_to_stationary = irf::ks_distance(e, irf::stationary_cdf(dist->dist));
      double total = 0.0;
      for (double v : e.sorted()) total += v;
      s.mean = total / static_cast<double>(e.size());
      *out = to_c_string(irf::ensemble_to_json(s));
    } else {
      irf::fail(irf::ErrorKind::InvalidArgument, "ensemble export supports json or csv");
    }
  });
}

irf_status irf_ks_to_stationary(const irf_dist* dist, const double* samples, size_t count, double* out) {
  return guarded([&] {
    require(dist, "dist");
    require(out, "out");
    if (count > 0) require(samples, "samples");
    *out = irf::ks_distance(irf::EmpiricalCDF({samples, samples + count}), irf::stationary_cdf(dist->dist));
  });
}

irf_status irf_ks_two_sample(const double* a, size_t na, const double* b, size_t nb, double* out) {
  return guarded([&] {
    require(out, "out");
    if (na > 0) require(a, "a");
    if (nb > 0) require(b, "b");
    *out = irf::ks_distance(irf::EmpiricalCDF({a, a + na}), irf::EmpiricalCDF({b, b + nb}));
  });
}

irf_status irf_stationarity_check(const irf_dist* dist, const irf_trial_plan* plan, double* ks_before,
                                  double* ks_after, char** json) {
  return guarded([&] {
    require(dist, "dist");
    const irf::StationarityReport r = irf::stationarity_check(dist->dist, to_plan(plan), threads_of(plan));
    if (ks_before) *ks_before = r.ks_before;
    if (ks_after) *ks_after = r.ks_after;
    if (json) *json = to_c_string(irf::stationarity_to_json(r));
  });
}

irf_status irf_bvf_check(const irf_dist* dist, double x0, uint64_t n, const irf_trial_plan* plan, double* ks,
                         char** json) {
  return guarded([&] {
    require(dist, "dist");
    const irf::BvfReport r = irf::bvf_check(dist->dist, x0, n, to_plan(plan), threads_of(plan));
    if (ks) *ks = r.ks;
    if (json) *json = to_c_string(irf::bvf_to_json(r));
  });
}

irf_status irf_backward_diam_ensemble(const irf_dist* dist, uint64_t n, const irf_trial_plan* plan,
                                      double* lengths) {
  return guarded([&] {
    require(dist, "dist");
    require(lengths, "lengths");
    const auto v = irf::backward_diam_ensemble(dist->dist, n, to_plan(plan), threads_of(plan));
    std::copy(v.begin(), v.end(), lengths);
  });
}

irf_status irf_rate_horizon(int64_t q, uint64_t* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::rate_horizon(q);
  });
}

irf_status irf_rate_run(double alpha, int64_t q_k, double epsilon, const irf_trial_plan* plan,
                        irf_rate_report** out) {
  return guarded([&] {
    require(out, "out");
    *out = new irf_rate_report{irf::rate_experiment(alpha, q_k, epsilon, to_plan(plan), threads_of(plan))};
  });
}

void irf_rate_destroy(irf_rate_report* report) { delete report; }

irf_status irf_rate_summary_get(const irf_rate_report* report, irf_rate_summary* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const irf::RateReport& r = report->report;
    *out = irf_rate_summary{r.alpha,
                            r.q_k,
                            r.epsilon,
                            r.horizon,
                            r.trials,
                            r.success_count,
                            r.success_fraction(),
                            r.implied_c ? 1 : 0,
                            r.implied_c.value_or(std::nan("")),
                            r.runtime_seconds};
  });
}

irf_status irf_rate_diameters(const irf_rate_report* report, const double** data, size_t* count) {
  return guarded([&] {
    require(report, "report");
    require(data, "data");
    require(count, "count");
    *data = report->report.diameters.data();
    *count = report->report.diameters.size();
  });
}

irf_status irf_rate_export(const irf_rate_report* report, irf_format format, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    if (format == IRF_FORMAT_JSON)
      *out = to_c_string(irf::rate_report_to_json(report->report));
    else if (format == IRF_FORMAT_CSV)
      *out = to_c_string(irf::rate_report_to_csv(report->report));
    else
      irf::fail(irf::ErrorKind::InvalidArgument, "rate export supports json or csv");
  });
}

irf_status irf_walk_confinement(int n, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = irf::walk_confinement_dp(n);
  });
}

irf_status irf_walk_confinement_export(int n_min, int n_max, irf_format format, char** out) {
  return guarded([&] {
    require(out, "out");
    if (n_min > n_max) irf::fail(irf::ErrorKind::InvalidArgument, "n_min must not exceed n_max");
    std::vector<std::pair<int, double>> rows;
    for (int n = n_min; n <= n_max; ++n) rows.emplace_back(n, irf::walk_confinement_dp(n));
    if (format == IRF_FORMAT_JSON)
      *out = to_c_string(irf::confinement_to_json(rows));
    else if (format == IRF_FORMAT_CSV)
      *out = to_c_string(irf::confinement_to_csv(rows));
    else
      irf::fail(irf::ErrorKind::InvalidArgument, "walk oracle export supports json or csv");
  });
}

irf_status irf_rho_audit(double alpha, double x0, uint64_t steps, const irf_trial_plan* plan,
                         const int64_t* q_values, size_t q_count, int64_t window, irf_rho_audit_summary* summary,
                         char** json) {
  return guarded([&] {
    if (q_count > 0) require(q_values, "q_values");
    const irf::RhoAuditReport r = irf::rho_walk_audit(alpha, x0, steps, to_plan(plan), {q_values, q_count},
                                                      window, threads_of(plan));
    if (summary) {
      *summary = irf_rho_audit_summary{};
      summary->plus_steps = r.plus_steps;
      summary->minus_steps = r.minus_steps;
      summary->nonunit_steps = r.nonunit_steps;
      summary->plus_fraction = r.plus_fraction().value_or(std::nan(""));
      for (const auto& a : r.farsmall) {
        summary->farsmall_segments += a.segments;
        summary->farsmall_violations += a.violations;
      }
    }
    if (json) *json = to_c_string(irf::rho_audit_to_json(r));
  });
}

}  // extern "C"
