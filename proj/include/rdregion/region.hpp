// Trade-off sweeps and rate-distortion region assembly.
//
// Every solve at a trade-off point contributes one supporting hyperplane.
// For a weight vector (s1, s2[, alpha]) the region's support value is the
// smaller of the two decomposition regions' optima, so the emitted
// halfspace family is the per-parameter minimum over regions 1 and 2. The
// point cloud is kept as well; for the CEO problem its lower convex
// envelope D(R1, R2) is computed explicitly.
#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdregion/bt.hpp"
#include "rdregion/ceo.hpp"
#include "rdregion/hull3d.hpp"
#include "rdregion/kernels.hpp"

namespace rdregion::region {

enum class Problem { ceo, bt };

inline const char* to_string(Problem p) { return p == Problem::ceo ? "ceo" : "bt"; }

inline std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> v(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / (n - 1));
  return v;
}

inline std::vector<double> lin_space(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return v;
}

struct SweepGrid {
  /// Trade-off values; used on the diagonal s1 = s2 unless `product`.
  std::vector<double> s_values = log_space(1e-3, 10.0, 30);
  bool product = false;
  /// Distortion weights for the Berger-Tung sweep.
  std::vector<double> alpha_values = lin_space(0.0, 1.0, 11);
  /// Per-solve options; rng_seed is the sweep's base seed.
  SolverOptions solver;
  unsigned threads = 0;
  /// Rounds of warm-start re-solves seeded by better kernels found elsewhere
  /// in the cloud.
  int polish_passes = 8;

  void validate(Problem p) const {
    if (s_values.empty()) throw std::invalid_argument("SweepGrid: s_values is empty");
    for (double s : s_values)
      if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("SweepGrid: s values must be positive");
    if (p == Problem::bt) {
      if (alpha_values.empty()) throw std::invalid_argument("SweepGrid: alpha_values is empty");
      for (double a : alpha_values)
        if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("SweepGrid: alpha values must lie in [0, 1]");
    }
    if (polish_passes < 0) throw std::invalid_argument("SweepGrid: polish_passes must be non-negative");
    solver.validate();
  }
};

struct RegionPoint {
  Problem problem = Problem::ceo;
  int region = 1;
  double s1 = 0.0, s2 = 0.0;
  std::optional<double> alpha;
  double R1 = 0.0, R2 = 0.0;
  /// CEO: the distortion D. BT: D1.
  double D1 = 0.0;
  std::optional<double> D2;
  /// Minimized Lagrangian, bits.
  double objective = 0.0;
  /// Supporting-hyperplane offset recomputed from the tuple.
  double offset = 0.0;
  int iterations = 0;
  bool converged = false;
  EncoderKernels kernels;

  double distortion(std::optional<double> a) const { return a ? *a * D1 + (1.0 - *a) * D2.value_or(0.0) : D1; }
};

/// D + s1 R1 + s2 R2 >= offset (CEO) or
/// alpha D1 + (1 - alpha) D2 + s1 R1 + s2 R2 >= offset (BT).
struct Halfspace {
  double s1 = 0.0, s2 = 0.0;
  std::optional<double> alpha;
  double offset = 0.0;
  /// Index of the point that attains the offset.
  std::size_t point = 0;
};

/// Lower facet of the CEO cloud: D = c0 + c1 R1 + c2 R2 over the triangle.
struct Facet {
  std::array<std::size_t, 3> vertices{};
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

struct RegionHull {
  Problem problem = Problem::ceo;
  std::vector<RegionPoint> points;
  std::vector<Halfspace> halfspaces;
  std::vector<Facet> hull_facets;
};

class EmptyHull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signed slack of `p` against `h`; negative means violated.
inline double slack(const Halfspace& h, const RegionPoint& p) {
  return p.distortion(h.alpha) + h.s1 * p.R1 + h.s2 * p.R2 - h.offset;
}

inline bool satisfies(const Halfspace& h, const RegionPoint& p, double tol) { return slack(h, p) >= -tol; }

/// Whether (R1, R2, D) lies in the halfspace intersection (CEO hulls).
inline bool contains(const RegionHull& hull, double R1, double R2, double D, double tol = 0.0) {
  for (const auto& h : hull.halfspaces)
    if (D + h.s1 * R1 + h.s2 * R2 < h.offset - tol) return false;
  return true;
}

/// Lower convex envelope of the CEO cloud at (R1, R2); nullopt without facets.
inline std::optional<double> envelope_at(const RegionHull& hull, double R1, double R2) {
  if (hull.hull_facets.empty()) return std::nullopt;
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& f : hull.hull_facets) v = std::max(v, f.c0 + f.c1 * R1 + f.c2 * R2);
  return v;
}

namespace detail {

struct Param {
  double s1, s2;
  std::optional<double> alpha;
};

inline std::vector<Param> params_of(const SweepGrid& g, Problem p) {
  std::vector<std::pair<double, double>> ss;
  if (g.product) {
    for (double a : g.s_values)
      for (double b : g.s_values) ss.emplace_back(a, b);
  } else {
    for (double a : g.s_values) ss.emplace_back(a, a);
  }
  std::vector<Param> out;
  if (p == Problem::ceo) {
    for (auto [a, b] : ss) out.push_back({a, b, std::nullopt});
  } else {
    for (double al : g.alpha_values)
      for (auto [a, b] : ss) out.push_back({a, b, al});
  }
  return out;
}

inline RegionPoint from_report(const ceo::CeoSolveReport& r, const Param& p, int region) {
  RegionPoint pt;
  pt.problem = Problem::ceo;
  pt.region = region;
  pt.s1 = p.s1;
  pt.s2 = p.s2;
  pt.R1 = r.tuple.R1;
  pt.R2 = r.tuple.R2;
  pt.D1 = r.tuple.D;
  pt.objective = r.objective;
  pt.offset = r.tuple.D + p.s1 * r.tuple.R1 + p.s2 * r.tuple.R2;
  pt.iterations = r.iterations;
  pt.converged = r.converged;
  pt.kernels = r.kernels;
  return pt;
}

inline RegionPoint from_report(const bt::BtSolveReport& r, const Param& p, int region) {
  RegionPoint pt;
  pt.problem = Problem::bt;
  pt.region = region;
  pt.s1 = p.s1;
  pt.s2 = p.s2;
  pt.alpha = p.alpha;
  pt.R1 = r.tuple.R1;
  pt.R2 = r.tuple.R2;
  pt.D1 = r.tuple.D1;
  pt.D2 = r.tuple.D2;
  pt.objective = r.objective;
  pt.offset = r.weighted_distortion + p.s1 * r.tuple.R1 + p.s2 * r.tuple.R2;
  pt.iterations = r.iterations;
  pt.converged = r.converged;
  pt.kernels = r.kernels;
  return pt;
}

/// Problem-specific solver plumbing used by the generic sweep.
struct CeoOps {
  const ceo::CeoSourceModel& m;
  RegionPoint solve(const Param& p, int region, const SolverOptions& o) const {
    return from_report(ceo::solve(m, {p.s1, p.s2, region}, o), p, region);
  }
  RegionPoint solve_from(const Param& p, int region, const EncoderKernels& k, const SolverOptions& o) const {
    return from_report(ceo::solve_from(m, {p.s1, p.s2, region}, k, o), p, region);
  }
  double value(const Param& p, int region, const EncoderKernels& k) const {
    return ceo::objective_at(m, k, {p.s1, p.s2, region});
  }
};

struct BtOps {
  const bt::BtSourceModel& m;
  RegionPoint solve(const Param& p, int region, const SolverOptions& o) const {
    return from_report(bt::solve_bt(m, {p.s1, p.s2, *p.alpha, region}, o), p, region);
  }
  RegionPoint solve_from(const Param& p, int region, const EncoderKernels& k, const SolverOptions& o) const {
    return from_report(bt::solve_bt_from(m, {p.s1, p.s2, *p.alpha, region}, k, o), p, region);
  }
  double value(const Param& p, int region, const EncoderKernels& k) const {
    return bt::objective_at(m, k, {p.s1, p.s2, *p.alpha, region});
  }
};

/// Re-solves any point whose objective is beaten by another point's kernels
/// evaluated at its own parameters, warm-starting from those kernels.
template <class Ops>
void polish(const Ops& ops, const std::vector<Param>& params, std::vector<RegionPoint>& pts, const SweepGrid& g) {
  const std::size_t n = pts.size();
  for (int pass = 0; pass < g.polish_passes; ++pass) {
    std::vector<std::optional<std::size_t>> donor(n);
    parallel_for(n, g.threads, [&](std::size_t k) {
      const Param& p = params[k / 2];
      const int region = pts[k].region;
      double best = pts[k].objective - 1e-11 * std::max(1.0, std::abs(pts[k].objective));
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        const double v = ops.value(p, region, pts[j].kernels);
        if (v < best) best = v, donor[k] = j;
      }
    });
    if (std::none_of(donor.begin(), donor.end(), [](const auto& d) { return d.has_value(); })) return;
    std::vector<std::optional<RegionPoint>> fresh(n);
    parallel_for(n, g.threads, [&](std::size_t k) {
      if (!donor[k]) return;
      auto r = ops.solve_from(params[k / 2], pts[k].region, pts[*donor[k]].kernels, g.solver);
      if (r.objective < pts[k].objective) fresh[k] = std::move(r);
    });
    for (std::size_t k = 0; k < n; ++k)
      if (fresh[k]) pts[k] = std::move(*fresh[k]);
  }
}

template <class Ops>
std::vector<RegionPoint> sweep_points(const Ops& ops, const std::vector<Param>& params, const SweepGrid& g) {
  std::vector<RegionPoint> pts(params.size() * 2);
  parallel_for(pts.size(), g.threads, [&](std::size_t t) {
    SolverOptions o = g.solver;
    o.rng_seed = derive_seed(g.solver.rng_seed, {static_cast<std::uint64_t>(t)});
    pts[t] = ops.solve(params[t / 2], static_cast<int>(t % 2) + 1, o);
  });
  polish(ops, params, pts, g);
  return pts;
}

/// One halfspace per parameter: the smaller offset of the two regions'
/// converged solves.
inline std::vector<Halfspace> halfspaces_of(const std::vector<Param>& params, const std::vector<RegionPoint>& pts) {
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::optional<std::size_t> best;
    for (std::size_t t : {2 * i, 2 * i + 1})
      if (pts[t].converged && (!best || pts[t].offset < pts[*best].offset)) best = t;
    if (best) hs.push_back({params[i].s1, params[i].s2, params[i].alpha, pts[*best].offset, *best});
  }
  return hs;
}

inline std::vector<Facet> facets_of(const std::vector<RegionPoint>& pts) {
  std::vector<std::size_t> idx;
  std::vector<geom::Vec3> cloud;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].converged) continue;
    const geom::Vec3 v{pts[i].R1, pts[i].R2, pts[i].D1};
    // Drop near-duplicates; they carry no facet information.
    const bool dup = std::any_of(cloud.begin(), cloud.end(), [&](const geom::Vec3& c) { return (c - v).norm() < 1e-9; });
    if (dup) continue;
    idx.push_back(i);
    cloud.push_back(v);
  }
  std::vector<Facet> out;
  for (const auto& f : geom::lower_hull(cloud)) {
    Facet fc;
    for (int k = 0; k < 3; ++k) fc.vertices[k] = idx[f.vertices[k]];
    fc.c0 = f.offset / f.normal.z;
    fc.c1 = -f.normal.x / f.normal.z;
    fc.c2 = -f.normal.y / f.normal.z;
    out.push_back(fc);
  }
  return out;
}

template <class Ops>
RegionHull assemble(Problem problem, const Ops& ops, const SweepGrid& grid) {
  grid.validate(problem);
  const auto params = params_of(grid, problem);
  RegionHull hull;
  hull.problem = problem;
  hull.points = sweep_points(ops, params, grid);
  hull.halfspaces = halfspaces_of(params, hull.points);
  if (hull.halfspaces.empty()) throw EmptyHull("no sweep point converged; the region hull is empty");
  if (problem == Problem::ceo) hull.hull_facets = facets_of(hull.points);
  return hull;
}

}  // namespace detail

/// Solves both regions at every grid point and assembles RD_CEO. Points are
/// ordered by parameter, region 1 before region 2.
inline RegionHull sweep_ceo(const ceo::CeoSourceModel& m, const SweepGrid& grid) {
  return detail::assemble(Problem::ceo, detail::CeoOps{m}, grid);
}

/// Berger-Tung counterpart; parameters run over alpha (outer) then s.
inline RegionHull sweep_bt(const bt::BtSourceModel& m, const SweepGrid& grid) {
  return detail::assemble(Problem::bt, detail::BtOps{m}, grid);
}

struct SlicePoint {
  double R = 0.0;
  double D = 0.0;
};

/// Evenly spaced rates from 0 to the largest single rate in the cloud.
inline std::vector<double> default_rate_grid(const RegionHull& hull, std::size_t n = 101) {
  double rmax = 0.0;
  for (const auto& p : hull.points)
    if (p.converged) rmax = std::max({rmax, p.R1, p.R2});
  return lin_space(0.0, std::max(rmax, 1e-3), n);
}

/// Smallest distortion D with (R, R, D) in the halfspace intersection. For
/// BT hulls `alpha` selects the halfspace family and D is the weighted
/// distortion alpha D1 + (1 - alpha) D2.
inline std::vector<SlicePoint> equal_rate_slice(const RegionHull& hull, const std::vector<double>& rates,
                                                std::optional<double> alpha = std::nullopt) {
  if (hull.halfspaces.empty()) throw EmptyHull("equal_rate_slice: empty hull");
  if ((hull.problem == Problem::bt) != alpha.has_value())
    throw std::invalid_argument("equal_rate_slice: alpha is required for BT hulls and rejected for CEO hulls");
  std::vector<SlicePoint> out;
  out.reserve(rates.size());
  for (double R : rates) {
    double d = 0.0;
    bool any = false;
    for (const auto& h : hull.halfspaces) {
      if (alpha && std::abs(*h.alpha - *alpha) > 1e-12) continue;
      d = std::max(d, h.offset - (h.s1 + h.s2) * R);
      any = true;
    }
    if (!any) throw std::invalid_argument("equal_rate_slice: no halfspace for the requested alpha");
    out.push_back({R, d});
  }
  return out;
}

inline std::vector<SlicePoint> equal_rate_slice(const RegionHull& hull) {
  return equal_rate_slice(hull, default_rate_grid(hull));
}

}  // namespace rdregion::region
