#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hillspec/spectral.hpp"
#include "hillspec/variational.hpp"
#include "hillspec/parallel.hpp"

namespace hillspec {

namespace {

struct EdgeEvent {
  double lambda;
  bool entering_band;
};

class BandSearch {
 public:
  BandSearch(const MeshHierarchy& meshes, const BandSearchOptions& options)
      : meshes_(meshes), options_(options) {
    level_ = options.level < 0 ? meshes.levels() - 1 : options.level;
    if (level_ >= meshes.levels()) throw std::invalid_argument("ladder level out of range");
  }

  MonodromyCoefficients coefficients(double lambda) const {
    return monodromy_at_level(meshes_, lambda, level_);
  }
  double g(double lambda) const { return coefficients(lambda).discriminant_defect(); }
  double slope(double lambda) const {
    return variational_at_level(meshes_, lambda, level_).derivatives.trace();
  }

  double edge(double lo, double hi, double g_lo) const {
    const auto [a, b] = bisect_sign_change([this](double x) { return g(x); }, lo, hi, g_lo,
                                           options_.edge_tol, options_.trace);
    return 0.5 * (a + b);
  }

  // A band (or gap) narrower than the grid spacing shows up as an interior
  // extremum of g on the samples; find the discriminant's extremum and see
  // whether g crosses zero there.
  void hidden_crossings(double lo, double hi, double g_lo, std::vector<EdgeEvent>& events) const {
    const double s_lo = slope(lo);
    const double s_hi = slope(hi);
    if ((s_lo < 0.0) == (s_hi < 0.0)) return;
    const auto [a, b] = bisect_sign_change([this](double x) { return slope(x); }, lo, hi, s_lo,
                                           options_.edge_tol);
    const double extremum = 0.5 * (a + b);
    const double g_e = g(extremum);
    if ((g_e < 0.0) == (g_lo < 0.0)) return;
    const bool band_outside = g_lo >= 0.0;
    events.push_back({edge(lo, extremum, g_lo), !band_outside});
    events.push_back({edge(extremum, hi, g_e), band_outside});
  }

  EdgeTag tag(double lambda) const { return classify_edge(coefficients(lambda)); }

 private:
  const MeshHierarchy& meshes_;
  const BandSearchOptions& options_;
  int level_ = 0;
};

}  // namespace

std::string_view to_string(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::regular: return "regular";
    case EdgeTag::dirichlet_indeterminate: return "dirichlet_indeterminate";
    case EdgeTag::neumann_indeterminate: return "neumann_indeterminate";
    case EdgeTag::range_limit: return "range_limit";
  }
  return "regular";
}

EdgeTag classify_edge(const MonodromyCoefficients& c) {
  const double v = std::fabs(c.c21);
  const double ux = std::fabs(c.c12);
  const bool dirichlet = v <= kEdgeClassificationTolerance;
  const bool neumann = ux <= kEdgeClassificationTolerance;
  if (dirichlet && neumann) {
    return v <= ux ? EdgeTag::dirichlet_indeterminate : EdgeTag::neumann_indeterminate;
  }
  if (dirichlet) return EdgeTag::dirichlet_indeterminate;
  if (neumann) return EdgeTag::neumann_indeterminate;
  return EdgeTag::regular;
}

BandChart find_bands(const PeriodicPotential& potential, std::pair<double, double> range,
                     const BandSearchOptions& options) {
  return find_bands(MeshHierarchy(potential, options.ladder), range, options);
}

BandChart find_bands(const MeshHierarchy& meshes, std::pair<double, double> range,
                     const BandSearchOptions& options) {
  const auto [lo, hi] = range;
  if (!(lo < hi)) throw std::invalid_argument("band search range must satisfy lo < hi");
  if (options.scan_points < 2) throw std::invalid_argument("scan_points must be >= 2");
  if (!(options.edge_tol > 0.0)) throw std::invalid_argument("edge_tol must be positive");

  const BandSearch search(meshes, options);
  const auto k = static_cast<std::size_t>(options.scan_points);
  std::vector<double> grid(k);
  std::vector<double> g(k);
  for (std::size_t i = 0; i < k; ++i) {
    grid[i] = i + 1 == k ? hi : lo + (hi - lo) * static_cast<double>(i) / (k - 1);
  }
  parallel_for(k, options.threads, [&](std::size_t i) { g[i] = search.g(grid[i]); });

  const auto in_band = [](double v) { return v >= 0.0; };
  std::vector<EdgeEvent> events;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (in_band(g[i]) != in_band(g[i + 1])) {
      events.push_back({search.edge(grid[i], grid[i + 1], g[i]), in_band(g[i + 1])});
    }
  }
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const bool side = in_band(g[i]);
    if (in_band(g[i - 1]) != side || in_band(g[i + 1]) != side) continue;
    const bool toward_zero = side ? (g[i] < g[i - 1] && g[i] <= g[i + 1])
                                  : (g[i] > g[i - 1] && g[i] >= g[i + 1]);
    if (toward_zero) search.hidden_crossings(grid[i - 1], grid[i + 1], g[i - 1], events);
  }
  std::sort(events.begin(), events.end(),
            [](const EdgeEvent& a, const EdgeEvent& b) { return a.lambda < b.lambda; });

  BandChart chart;
  bool inside = in_band(g.front());
  BandEdge start{lo, EdgeTag::range_limit};
  for (const auto& e : events) {
    if (e.entering_band == inside) continue;  // duplicate report of one crossing
    if (e.entering_band) {
      start = {e.lambda, search.tag(e.lambda)};
    } else {
      chart.intervals.push_back({start, {e.lambda, search.tag(e.lambda)}});
    }
    inside = e.entering_band;
  }
  if (inside) chart.intervals.push_back({start, {hi, EdgeTag::range_limit}});

  // Gaps no wider than the edge tolerance are roundoff, not spectrum.
  std::vector<Band> merged;
  for (const auto& b : chart.intervals) {
    if (!merged.empty() && b.left.lambda - merged.back().right.lambda <= options.edge_tol) {
      merged.back().right = b.right;
    } else {
      merged.push_back(b);
    }
  }
  chart.intervals = std::move(merged);
  return chart;
}

}  // namespace hillspec
