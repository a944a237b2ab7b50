#pragma once

// Symbolic dynamics of the two maps f_alpha, f_1 on [0,1]. The orbit of x is
// {<n alpha + eps x> : n in Z, eps = +-1}; each orbit point is named by its
// label (n, eps) and the orbit graph is materialized on the window |n| <= W.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "irf/process.hpp"

namespace irf {

// |n| above this loses the 1e-9 accuracy of <n alpha> in double precision.
inline constexpr std::int64_t kMaxLabelIndex = 1'000'000;
inline constexpr std::int64_t kDefaultWindow = 10'000;

struct OrbitLabel {
  std::int64_t n = 0;
  int eps = 1;
  friend bool operator==(const OrbitLabel&, const OrbitLabel&) = default;
};

enum class Letter { Alpha, One };

inline double letter_value(Letter letter, double alpha) {
  return letter == Letter::Alpha ? alpha : 1.0;
}

enum class VertexClass { Small, Medium, Large, Boundary };

const char* to_string(VertexClass c) noexcept;

double label_value(double alpha, double x, OrbitLabel label);

// Label of f_theta(<n alpha + eps x>), following the orbit automaton:
//   theta = 1:     (n, eps) -> (-n, -eps)
//   theta = alpha: (n, eps) -> (n - 1, eps)      if the value is >= alpha
//                              (1 - n, -eps)     otherwise
OrbitLabel apply_theta_label(double alpha, double x, OrbitLabel label, Letter theta);

// Throws a domain error when the value is within 1e-12 of a class boundary.
VertexClass classify_vertex(double alpha, double value);

// True iff some label with |n| <= window maps x within 1e-10 of one of the
// singular seeds 0, 1/2, alpha/2, (1+alpha)/2.
bool is_singular(double alpha, double x, std::int64_t window);

class OrbitGraphWindow {
 public:
  static constexpr std::int64_t kNoVertex = -1;

  OrbitGraphWindow(double alpha, double base_x, std::int64_t window);

  double alpha() const noexcept { return alpha_; }
  double base_x() const noexcept { return base_x_; }
  std::int64_t window() const noexcept { return window_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::int64_t index(OrbitLabel label) const noexcept;
  OrbitLabel label(std::size_t index) const noexcept;
  bool contains(OrbitLabel label) const noexcept { return index(label) != kNoVertex; }

  double value(std::size_t i) const noexcept { return values_[i]; }
  VertexClass vertex_class(std::size_t i) const noexcept { return classes_[i]; }
  // Another in-window label has the same value (singular orbits only).
  bool coincident(std::size_t i) const noexcept { return coincident_[i]; }
  // Out-edge target for theta, or kNoVertex when it leaves the window.
  std::int64_t target(std::size_t i, Letter theta) const noexcept {
    return theta == Letter::Alpha ? alpha_edge_[i] : one_edge_[i];
  }
  // Vertex at distance > margin from the window edge.
  bool interior(std::size_t i, std::int64_t margin = 2) const noexcept;

  std::vector<std::vector<std::size_t>> undirected_adjacency() const;

 private:
  double alpha_;
  double base_x_;
  std::int64_t window_;
  std::vector<double> values_;
  std::vector<VertexClass> classes_;
  std::vector<bool> coincident_;
  std::vector<std::int64_t> alpha_edge_;
  std::vector<std::int64_t> one_edge_;
};

OrbitGraphWindow build_graph_window(double alpha, double x, std::int64_t window = kDefaultWindow);

// Signed graph distance from a small base vertex v0; positive on the side
// containing the label (n0 + eps0, eps0), i.e. where adding alpha moves.
class RhoChart {
 public:
  RhoChart(OrbitLabel v0, std::int64_t window, std::vector<std::optional<std::int64_t>> rho)
      : v0_(v0), window_(window), rho_(std::move(rho)) {}

  OrbitLabel base() const noexcept { return v0_; }
  std::optional<std::int64_t> at(OrbitLabel label) const noexcept;
  std::optional<std::int64_t> at_index(std::size_t i) const noexcept { return rho_[i]; }
  std::size_t charted() const noexcept;

 private:
  OrbitLabel v0_;
  std::int64_t window_;
  std::vector<std::optional<std::int64_t>> rho_;
};

RhoChart rho_chart(const OrbitGraphWindow& graph, OrbitLabel v0);

// Shortest word over {alpha, beta} driving m below threshold (breadth-first,
// states deduplicated on a 1e-12 grid). Throws not-found past max_len.
ThetaWord shrink_word(double alpha, double beta, double m, double threshold, std::size_t max_len);

struct StructureStats {
  double alpha = 0.0;
  std::uint64_t counted_vertices = 0;
  double small_fraction = 0.0;
  double medium_fraction = 0.0;
  double large_fraction = 0.0;
  // alpha > 1/2: diagonal edges between consecutive boxes.
  // alpha < 1/2: boxes between consecutive diagonal edges.
  bool diagonal_runs = true;
  std::map<std::uint64_t, std::uint64_t> run_histogram;
  // alpha = q(1-alpha) + r (resp. 1-alpha = q alpha + r) and the limiting
  // ratio count(q) : count(q+1).
  std::uint64_t q = 0;
  double r = 0.0;
  double predicted_ratio = 0.0;
};

StructureStats structure_stats(const OrbitGraphWindow& graph);

}  // namespace irf
