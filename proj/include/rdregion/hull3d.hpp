// Incremental 3-D convex hull, used to extract the lower envelope of a
// rate-distortion point cloud.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

namespace rdregion::geom {

struct Vec3 {
  double x = 0, y = 0, z = 0;
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const { return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x}; }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// Outward-oriented triangular facet; `vertices` index the input points and
/// the supporting plane is normal . p = offset with |normal| = 1.
struct HullFacet {
  std::array<std::size_t, 3> vertices{};
  Vec3 normal;
  double offset = 0.0;
};

namespace detail {

struct Face {
  std::array<std::size_t, 3> v;
  Vec3 n;
  double d;
  bool alive;
};

inline bool make_face(const std::vector<Vec3>& p, std::size_t a, std::size_t b, std::size_t c, Face& f) {
  Vec3 n = (p[b] - p[a]).cross(p[c] - p[a]);
  const double len = n.norm();
  if (len == 0.0) return false;
  n = {n.x / len, n.y / len, n.z / len};
  f = {{a, b, c}, n, n.dot(p[a]), true};
  return true;
}

}  // namespace detail

/// Convex hull facets of `pts`. Points closer than `eps` (relative to the
/// cloud's extent) to an existing facet are treated as coplanar and
/// skipped. Returns an empty list when the cloud spans fewer than three
/// dimensions.
inline std::vector<HullFacet> convex_hull(const std::vector<Vec3>& pts, double rel_eps = 1e-10) {
  const std::size_t n = pts.size();
  if (n < 4) return {};
  double extent = 0.0;
  for (const auto& p : pts) extent = std::max({extent, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  const double eps = rel_eps * std::max(extent, 1.0);

  // Initial tetrahedron from extreme points.
  std::size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (pts[i].x < pts[i0].x) i0 = i;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (pts[i] - pts[i0]).norm();
    if (d > best) best = d, i1 = i;
  }
  if (best <= eps) return {};
  best = -1.0;
  const Vec3 e01 = pts[i1] - pts[i0];
  for (std::size_t i = 0; i < n; ++i) {
    const double d = e01.cross(pts[i] - pts[i0]).norm() / e01.norm();
    if (d > best) best = d, i2 = i;
  }
  if (best <= eps) return {};
  Vec3 nrm = e01.cross(pts[i2] - pts[i0]);
  nrm = {nrm.x / nrm.norm(), nrm.y / nrm.norm(), nrm.z / nrm.norm()};
  best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(nrm.dot(pts[i] - pts[i0]));
    if (d > best) best = d, i3 = i;
  }
  if (best <= eps) return {};

  std::vector<detail::Face> faces;
  const Vec3 centroid{(pts[i0].x + pts[i1].x + pts[i2].x + pts[i3].x) / 4,
                      (pts[i0].y + pts[i1].y + pts[i2].y + pts[i3].y) / 4,
                      (pts[i0].z + pts[i1].z + pts[i2].z + pts[i3].z) / 4};
  auto add_oriented = [&](std::size_t a, std::size_t b, std::size_t c) {
    detail::Face f;
    if (!detail::make_face(pts, a, b, c, f)) return;
    if (f.n.dot(centroid) - f.d > 0) detail::make_face(pts, a, c, b, f);
    faces.push_back(f);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  for (std::size_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    bool any = false;
    for (auto& f : faces) {
      if (!f.alive || f.n.dot(pts[p]) - f.d <= eps) continue;
      any = true;
      f.alive = false;
      for (int e = 0; e < 3; ++e) edges.insert({f.v[e], f.v[(e + 1) % 3]});
    }
    if (!any) continue;
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a})) continue;  // interior edge of the visible patch
      detail::Face f;
      if (detail::make_face(pts, a, b, p, f)) faces.push_back(f);
    }
    faces.erase(std::remove_if(faces.begin(), faces.end(), [](const detail::Face& f) { return !f.alive; }),
                faces.end());
  }

  std::vector<HullFacet> out;
  out.reserve(faces.size());
  for (const auto& f : faces) out.push_back({f.v, f.n, f.d});
  return out;
}

/// Facets whose outward normal points towards -z: the lower envelope of
/// z over (x, y).
inline std::vector<HullFacet> lower_hull(const std::vector<Vec3>& pts, double rel_eps = 1e-10) {
  auto all = convex_hull(pts, rel_eps);
  std::vector<HullFacet> low;
  for (const auto& f : all)
    if (f.normal.z < -1e-9) low.push_back(f);
  return low;
}

}  // namespace rdregion::geom
