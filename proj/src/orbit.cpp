#include "irf/orbit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <unordered_set>

namespace irf {

namespace {

constexpr double kClassTolerance = 1e-12;
constexpr double kSingularTolerance = 1e-10;
constexpr double kCoincidenceTolerance = 1e-10;
constexpr double kBucketScale = 1e12;

double fract(double v) {
  const double f = v - std::floor(v);
  return f >= 1.0 ? 0.0 : f;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0,1)");
}

void check_base(double x) {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorKind::InvalidArgument, "orbit base point must lie in [0,1]");
}

void check_window(std::int64_t window) {
  if (window < 1) fail(ErrorKind::InvalidArgument, "window must be at least 1");
  if (window > kMaxLabelIndex)
    fail(ErrorKind::Precision, "window exceeds the label precision guard of " +
                                   std::to_string(kMaxLabelIndex));
}

VertexClass classify_or_boundary(double alpha, double value) {
  const double lo = std::min(alpha, 1.0 - alpha);
  const double hi = std::max(alpha, 1.0 - alpha);
  if (std::fabs(value - lo) <= kClassTolerance || std::fabs(value - hi) <= kClassTolerance)
    return VertexClass::Boundary;
  if (value < lo) return VertexClass::Small;
  if (value < hi) return VertexClass::Medium;
  return VertexClass::Large;
}

}  // namespace

const char* to_string(VertexClass c) noexcept {
  switch (c) {
    case VertexClass::Small: return "small";
    case VertexClass::Medium: return "medium";
    case VertexClass::Large: return "large";
    case VertexClass::Boundary: return "boundary";
  }
  return "unknown";
}

double label_value(double alpha, double x, OrbitLabel label) {
  check_alpha(alpha);
  check_base(x);
  if (label.eps != 1 && label.eps != -1) fail(ErrorKind::InvalidArgument, "label eps must be +1 or -1");
  if (label.n > kMaxLabelIndex || label.n < -kMaxLabelIndex)
    fail(ErrorKind::Precision, "label index " + std::to_string(label.n) + " exceeds precision guard");
  return fract(static_cast<double>(label.n) * alpha + static_cast<double>(label.eps) * x);
}

OrbitLabel apply_theta_label(double alpha, double x, OrbitLabel label, Letter theta) {
  if (theta == Letter::One) {
    label_value(alpha, x, label);  // validation only
    return {-label.n, -label.eps};
  }
  if (label_value(alpha, x, label) >= alpha) return {label.n - 1, label.eps};
  return {1 - label.n, -label.eps};
}

VertexClass classify_vertex(double alpha, double value) {
  check_alpha(alpha);
  if (!(value >= 0.0 && value < 1.0)) fail(ErrorKind::InvalidArgument, "vertex value must lie in [0,1)");
  const VertexClass c = classify_or_boundary(alpha, value);
  if (c == VertexClass::Boundary) fail(ErrorKind::Domain, "vertex value on a class boundary");
  return c;
}

bool is_singular(double alpha, double x, std::int64_t window) {
  check_alpha(alpha);
  check_base(x);
  check_window(window);
  const std::array<double, 4> seeds{0.0, 0.5, alpha / 2.0, (1.0 + alpha) / 2.0};
  for (std::int64_t n = -window; n <= window; ++n) {
    for (int eps : {1, -1}) {
      const double v = label_value(alpha, x, {n, eps});
      for (double s : seeds) {
        const double d = std::fabs(v - s);
        if (std::min(d, 1.0 - d) <= kSingularTolerance) return true;
      }
    }
  }
  return false;
}

OrbitGraphWindow::OrbitGraphWindow(double alpha, double base_x, std::int64_t window)
    : alpha_(alpha), base_x_(base_x), window_(window) {
  check_alpha(alpha);
  check_base(base_x);
  check_window(window);

  const auto count = static_cast<std::size_t>(2 * (2 * window + 1));
  values_.resize(count);
  classes_.resize(count);
  coincident_.assign(count, false);
  alpha_edge_.resize(count);
  one_edge_.resize(count);

  for (std::size_t i = 0; i < count; ++i) {
    const OrbitLabel l = label(i);
    values_[i] = label_value(alpha, base_x, l);
    classes_[i] = classify_or_boundary(alpha, values_[i]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const OrbitLabel l = label(i);
    one_edge_[i] = index({-l.n, -l.eps});
    const OrbitLabel a = values_[i] >= alpha ? OrbitLabel{l.n - 1, l.eps} : OrbitLabel{1 - l.n, -l.eps};
    alpha_edge_[i] = index(a);
  }

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
  for (std::size_t k = 1; k < count; ++k) {
    if (values_[order[k]] - values_[order[k - 1]] <= kCoincidenceTolerance)
      coincident_[order[k]] = coincident_[order[k - 1]] = true;
  }
  if (count > 1 && 1.0 - values_[order.back()] + values_[order.front()] <= kCoincidenceTolerance)
    coincident_[order.back()] = coincident_[order.front()] = true;
}

std::int64_t OrbitGraphWindow::index(OrbitLabel l) const noexcept {
  if (l.n < -window_ || l.n > window_ || (l.eps != 1 && l.eps != -1)) return kNoVertex;
  return (l.n + window_) * 2 + (l.eps > 0 ? 1 : 0);
}

OrbitLabel OrbitGraphWindow::label(std::size_t i) const noexcept {
  const auto v = static_cast<std::int64_t>(i);
  return {v / 2 - window_, (v % 2) ? 1 : -1};
}

bool OrbitGraphWindow::interior(std::size_t i, std::int64_t margin) const noexcept {
  const std::int64_t n = label(i).n;
  return n >= -window_ + margin && n <= window_ - margin;
}

std::vector<std::vector<std::size_t>> OrbitGraphWindow::undirected_adjacency() const {
  std::vector<std::vector<std::size_t>> adj(size());
  auto link = [&](std::size_t u, std::int64_t v) {
    if (v == kNoVertex) return;
    const auto w = static_cast<std::size_t>(v);
    if (w == u) return;
    if (std::find(adj[u].begin(), adj[u].end(), w) == adj[u].end()) adj[u].push_back(w);
    if (std::find(adj[w].begin(), adj[w].end(), u) == adj[w].end()) adj[w].push_back(u);
  };
  for (std::size_t i = 0; i < size(); ++i) {
    link(i, alpha_edge_[i]);
    link(i, one_edge_[i]);
  }
  return adj;
}

OrbitGraphWindow build_graph_window(double alpha, double x, std::int64_t window) {
  return OrbitGraphWindow(alpha, x, window);
}

std::optional<std::int64_t> RhoChart::at(OrbitLabel l) const noexcept {
  if (l.n < -window_ || l.n > window_ || (l.eps != 1 && l.eps != -1)) return std::nullopt;
  return rho_[static_cast<std::size_t>((l.n + window_) * 2 + (l.eps > 0 ? 1 : 0))];
}

std::size_t RhoChart::charted() const noexcept {
  return static_cast<std::size_t>(std::count_if(rho_.begin(), rho_.end(), [](const auto& r) { return r.has_value(); }));
}

RhoChart rho_chart(const OrbitGraphWindow& graph, OrbitLabel v0) {
  const std::int64_t v0_index = graph.index(v0);
  if (v0_index == OrbitGraphWindow::kNoVertex) fail(ErrorKind::InvalidArgument, "base label outside the window");
  const auto root = static_cast<std::size_t>(v0_index);
  const double v = graph.value(root);
  const double alpha = graph.alpha();
  if (!(v > 0.0 && v < std::min(alpha, 1.0 - alpha)))
    fail(ErrorKind::Domain, "base vertex must satisfy 0 < value < min(alpha, 1 - alpha)");

  const auto adj = graph.undirected_adjacency();
  const std::size_t n = graph.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  // Components of G - v0 seeded from the neighbours of v0.
  std::vector<std::size_t> component(n, kUnset);
  std::size_t components = 0;
  for (std::size_t seed : adj[root]) {
    if (component[seed] != kUnset) continue;
    std::deque<std::size_t> queue{seed};
    component[seed] = components;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t w : adj[u]) {
        if (w == root || component[w] != kUnset) continue;
        component[w] = components;
        queue.push_back(w);
      }
    }
    ++components;
  }
  if (components < 2) fail(ErrorKind::Structural, "base vertex is not a cut vertex of the window");
  if (components > 2) fail(ErrorKind::Structural, "base vertex separates more than two components");

  const std::int64_t right_index = graph.index({v0.n + v0.eps, v0.eps});
  if (right_index == OrbitGraphWindow::kNoVertex || component[static_cast<std::size_t>(right_index)] == kUnset)
    fail(ErrorKind::Structural, "cannot orient the chart: right-hand reference not connected to v0");
  const std::size_t right = component[static_cast<std::size_t>(right_index)];

  std::vector<std::int64_t> dist(n, -1);
  dist[root] = 0;
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[u]) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      queue.push_back(w);
    }
  }

  std::vector<std::optional<std::int64_t>> rho(n);
  rho[root] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == root || dist[i] < 0 || component[i] == kUnset) continue;
    rho[i] = component[i] == right ? dist[i] : -dist[i];
  }
  return RhoChart(v0, graph.window(), std::move(rho));
}

ThetaWord shrink_word(double alpha, double beta, double m, double threshold, std::size_t max_len) {
  if (!(alpha > 0.0 && alpha < beta && std::isfinite(beta)))
    fail(ErrorKind::InvalidArgument, "shrink_word needs 0 < alpha < beta");
  if (!(threshold > 0.0)) fail(ErrorKind::InvalidArgument, "threshold must be positive");
  if (!(m >= 0.0) || !std::isfinite(m)) fail(ErrorKind::InvalidArgument, "start value must be finite and >= 0");
  if (m < threshold) return {};

  struct Node {
    double value;
    std::int64_t parent;
    double theta;
  };
  std::vector<Node> nodes{{m, -1, 0.0}};
  std::unordered_set<long long> seen{std::llround(m * kBucketScale)};
  std::size_t level_begin = 0;
  std::size_t level_end = 1;

  auto reconstruct = [&](std::size_t leaf) {
    ThetaWord word;
    for (auto i = static_cast<std::int64_t>(leaf); nodes[static_cast<std::size_t>(i)].parent >= 0;
         i = nodes[static_cast<std::size_t>(i)].parent)
      word.push_back(nodes[static_cast<std::size_t>(i)].theta);
    std::reverse(word.begin(), word.end());
    return word;
  };

  for (std::size_t depth = 1; depth <= max_len && level_begin < level_end; ++depth) {
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (double theta : {alpha, beta}) {
        const double next = kernel::step(theta, nodes[i].value);
        if (next < threshold) {
          nodes.push_back({next, static_cast<std::int64_t>(i), theta});
          return reconstruct(nodes.size() - 1);
        }
        if (seen.insert(std::llround(next * kBucketScale)).second)
          nodes.push_back({next, static_cast<std::int64_t>(i), theta});
      }
    }
    level_begin = level_end;
    level_end = nodes.size();
  }
  fail(ErrorKind::NotFound, "no word of length <= " + std::to_string(max_len) + " reaches the threshold");
}

StructureStats structure_stats(const OrbitGraphWindow& graph) {
  constexpr std::int64_t kMargin = 2;
  const double alpha = graph.alpha();
  StructureStats stats;
  stats.alpha = alpha;
  stats.diagonal_runs = alpha > 0.5;

  std::uint64_t small = 0, medium = 0, large = 0;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (!graph.interior(i, kMargin)) continue;
    switch (graph.vertex_class(i)) {
      case VertexClass::Small: ++small; break;
      case VertexClass::Medium: ++medium; break;
      case VertexClass::Large: ++large; break;
      case VertexClass::Boundary: break;
    }
  }
  stats.counted_vertices = small + medium + large;
  if (stats.counted_vertices > 0) {
    const auto total = static_cast<double>(stats.counted_vertices);
    stats.small_fraction = static_cast<double>(small) / total;
    stats.medium_fraction = static_cast<double>(medium) / total;
    stats.large_fraction = static_cast<double>(large) / total;
  }

  auto usable = [&](std::int64_t v) {
    return v != OrbitGraphWindow::kNoVertex && graph.interior(static_cast<std::size_t>(v), kMargin);
  };

  for (std::size_t s = 0; s < graph.size(); ++s) {
    if (!graph.interior(s, kMargin) || graph.vertex_class(s) != VertexClass::Small) continue;
    std::uint64_t run = 0;
    std::int64_t cur = static_cast<std::int64_t>(s);
    bool complete = false;
    if (stats.diagonal_runs) {
      // Chain of alpha-folds through medium vertices (flipping by f_1 between
      // folds) until the next small vertex.
      while (true) {
        cur = graph.target(static_cast<std::size_t>(cur), Letter::Alpha);
        if (!usable(cur)) break;
        ++run;
        const VertexClass c = graph.vertex_class(static_cast<std::size_t>(cur));
        if (c == VertexClass::Small) {
          complete = true;
          break;
        }
        if (c != VertexClass::Medium) break;
        cur = graph.target(static_cast<std::size_t>(cur), Letter::One);
        if (!usable(cur) || graph.vertex_class(static_cast<std::size_t>(cur)) != VertexClass::Medium) break;
      }
    } else {
      // Flip to the large corner, then count alpha-translations along the
      // string of boxes until a small corner is reached.
      cur = graph.target(s, Letter::One);
      if (!usable(cur) || graph.vertex_class(static_cast<std::size_t>(cur)) != VertexClass::Large) continue;
      while (true) {
        cur = graph.target(static_cast<std::size_t>(cur), Letter::Alpha);
        if (!usable(cur)) break;
        ++run;
        const VertexClass c = graph.vertex_class(static_cast<std::size_t>(cur));
        if (c == VertexClass::Small) {
          complete = true;
          break;
        }
        if (c != VertexClass::Medium) break;
      }
    }
    // Each run is found from both of its small ends; keep one.
    if (complete && static_cast<std::size_t>(cur) > s) ++stats.run_histogram[run];
  }

  const double big = stats.diagonal_runs ? alpha : 1.0 - alpha;
  const double unit = stats.diagonal_runs ? 1.0 - alpha : alpha;
  stats.q = static_cast<std::uint64_t>(std::floor(big / unit));
  stats.r = big - static_cast<double>(stats.q) * unit;
  stats.predicted_ratio = stats.r > 0.0 ? (unit - stats.r) / stats.r : 0.0;
  return stats;
}

}  // namespace irf
