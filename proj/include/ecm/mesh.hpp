/// \file mesh.hpp
/// \brief Triangle meshes, STL input, and planar slicing into closed loops.
///
/// Slice segments are keyed by the undirected mesh edge they cross, so
/// chaining never depends on coordinate tolerances: in a watertight mesh
/// every crossing edge is shared by exactly two crossing triangles. Vertices
/// are welded on exact coordinates when reading STL.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ecm/contour.hpp"
#include "ecm/errors.hpp"

namespace ecm {

using Point3 = std::array<double, 3>;

struct TriangleMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<int, 3>> triangles;

  std::pair<double, double> z_extent() const {
    if (vertices.empty()) throw mesh_error("mesh has no vertices");
    double lo = vertices[0][2], hi = vertices[0][2];
    for (const Point3& v : vertices) {
      lo = std::min(lo, v[2]);
      hi = std::max(hi, v[2]);
    }
    return {lo, hi};
  }
};

namespace detail {

inline double triangle_area(const Point3& a, const Point3& b, const Point3& c) {
  const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
  const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
  const double cx = uy * vz - uz * vy;
  const double cy = uz * vx - ux * vz;
  const double cz = ux * vy - uy * vx;
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

class VertexWelder {
 public:
  int index_of(const Point3& p, std::vector<Point3>& verts) {
    auto [it, inserted] = map_.try_emplace(p, static_cast<int>(verts.size()));
    if (inserted) verts.push_back(p);
    return it->second;
  }

 private:
  std::map<Point3, int> map_;
};

inline void push_triangle(TriangleMesh& mesh, VertexWelder& weld, const Point3& a,
                          const Point3& b, const Point3& c) {
  const int ia = weld.index_of(a, mesh.vertices);
  const int ib = weld.index_of(b, mesh.vertices);
  const int ic = weld.index_of(c, mesh.vertices);
  if (ia == ib || ib == ic || ia == ic) return;  // degenerate after welding
  if (triangle_area(a, b, c) <= 0.0) return;
  mesh.triangles.push_back({ia, ib, ic});
}

inline float read_f32(const char* p) {
  float f;
  std::memcpy(&f, p, 4);
  return f;
}

}  // namespace detail

/// Reads binary or text STL; vertices are welded, degenerate facets dropped.
inline TriangleMesh read_stl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw missing_file("cannot open STL file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  TriangleMesh mesh;
  detail::VertexWelder weld;

  bool binary = false;
  if (data.size() >= 84) {
    std::uint32_t count;
    std::memcpy(&count, data.data() + 80, 4);
    if (data.size() == 84 + static_cast<std::size_t>(count) * 50) binary = true;
  }

  if (binary) {
    std::uint32_t count;
    std::memcpy(&count, data.data() + 80, 4);
    for (std::uint32_t i = 0; i < count; ++i) {
      const char* rec = data.data() + 84 + static_cast<std::size_t>(i) * 50;
      Point3 v[3];
      for (int k = 0; k < 3; ++k)
        for (int d = 0; d < 3; ++d)
          v[k][d] = static_cast<double>(detail::read_f32(rec + 12 + 12 * k + 4 * d));
      detail::push_triangle(mesh, weld, v[0], v[1], v[2]);
    }
  } else {
    std::istringstream ss(data);
    std::string tok;
    std::vector<Point3> facet;
    while (ss >> tok) {
      if (tok == "vertex") {
        Point3 p;
        if (!(ss >> p[0] >> p[1] >> p[2])) throw mesh_error("malformed STL vertex in " + path);
        facet.push_back(p);
      } else if (tok == "endfacet") {
        if (facet.size() != 3) throw mesh_error("STL facet without 3 vertices in " + path);
        detail::push_triangle(mesh, weld, facet[0], facet[1], facet[2]);
        facet.clear();
      }
    }
  }
  if (mesh.triangles.empty()) throw mesh_error("STL file has no usable triangles: " + path);
  return mesh;
}

inline void write_stl_binary(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw missing_file("cannot write STL file: " + path);
  char header[80] = {0};
  out.write(header, 80);
  const std::uint32_t count = static_cast<std::uint32_t>(mesh.triangles.size());
  out.write(reinterpret_cast<const char*>(&count), 4);
  for (const auto& tri : mesh.triangles) {
    float rec[12] = {0.0f};  // normal left zero; vertices follow
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 3; ++d)
        rec[3 + 3 * k + d] = static_cast<float>(mesh.vertices[static_cast<std::size_t>(tri[k])][d]);
    out.write(reinterpret_cast<const char*>(rec), 48);
    const std::uint16_t attr = 0;
    out.write(reinterpret_cast<const char*>(&attr), 2);
  }
}

/// Intersects the mesh with the plane at height z and chains the resulting
/// segments into closed loops, oriented counterclockwise. The plane is nudged
/// off any coincident vertex by 1e-9 of the z extent.
inline std::vector<std::vector<Point2>> slice_mesh(const TriangleMesh& mesh, double z) {
  const auto [zlo, zhi] = mesh.z_extent();
  if (!(z > zlo && z < zhi))
    throw invalid_input("slice_mesh: plane must lie strictly inside the mesh z extent");
  const double extent = zhi - zlo;
  double plane = z;
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool hit = false;
    for (const Point3& v : mesh.vertices) {
      if (v[2] == plane) {
        hit = true;
        break;
      }
    }
    if (!hit) break;
    plane += 1e-9 * extent;
  }

  using EdgeKey = std::pair<int, int>;
  std::map<EdgeKey, Point2> cut_points;
  auto cut = [&](int a, int b) -> EdgeKey {
    EdgeKey key{std::min(a, b), std::max(a, b)};
    if (!cut_points.count(key)) {
      const Point3& pa = mesh.vertices[static_cast<std::size_t>(key.first)];
      const Point3& pb = mesh.vertices[static_cast<std::size_t>(key.second)];
      const double f = (plane - pa[2]) / (pb[2] - pa[2]);
      cut_points[key] = {pa[0] + f * (pb[0] - pa[0]), pa[1] + f * (pb[1] - pa[1])};
    }
    return key;
  };

  // one segment per crossing triangle, keyed by its two cut edges
  std::vector<std::pair<EdgeKey, EdgeKey>> segments;
  for (const auto& tri : mesh.triangles) {
    bool above[3];
    for (int k = 0; k < 3; ++k)
      above[k] = mesh.vertices[static_cast<std::size_t>(tri[k])][2] > plane;
    std::vector<EdgeKey> keys;
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (above[k] != above[(k + 1) % 3]) keys.push_back(cut(a, b));
    }
    if (keys.size() == 2) segments.emplace_back(keys[0], keys[1]);
  }
  if (segments.empty()) throw mesh_error("slice_mesh: plane does not cut the mesh");

  // adjacency: every cut edge must belong to exactly two segments
  std::map<EdgeKey, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    incident[segments[s].first].push_back(s);
    incident[segments[s].second].push_back(s);
  }
  std::string gaps;
  for (const auto& [key, segs] : incident) {
    if (segs.size() != 2) {
      const Point2& p = cut_points[key];
      gaps += " (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ")";
    }
  }
  if (!gaps.empty()) throw mesh_error("slice_mesh: mesh is not watertight at" + gaps);

  std::vector<bool> used(segments.size(), false);
  std::vector<std::vector<Point2>> loops;
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    std::vector<Point2> loop;
    std::size_t s = start;
    EdgeKey enter = segments[start].first;
    while (!used[s]) {
      used[s] = true;
      const EdgeKey exit = (segments[s].first == enter) ? segments[s].second : segments[s].first;
      loop.push_back(cut_points[exit]);
      const auto& nbrs = incident[exit];
      s = (nbrs[0] == s) ? nbrs[1] : nbrs[0];
      enter = exit;
    }
    if (loop.size() >= 3) {
      if (polygon_area(loop) < 0.0) std::reverse(loop.begin(), loop.end());
      loops.push_back(std::move(loop));
    }
  }
  if (loops.empty()) throw mesh_error("slice_mesh: no closed loops at this height");
  return loops;
}

/// Cleans a loop: drops consecutive duplicates and exact repeats, orients the
/// traversal counterclockwise, and rotates it to start at the vertex with
/// the lexicographically smallest (y, x).
inline std::vector<Point2> preprocess_polyline(const std::vector<Point2>& points) {
  if (points.size() < 3) throw invalid_input("preprocess_polyline: need at least 3 points");
  std::vector<Point2> clean;
  clean.reserve(points.size());
  for (const Point2& p : points) {
    if (!clean.empty() && std::hypot(p[0] - clean.back()[0], p[1] - clean.back()[1]) < 1e-9)
      continue;
    clean.push_back(p);
  }
  while (clean.size() > 1 &&
         std::hypot(clean.front()[0] - clean.back()[0], clean.front()[1] - clean.back()[1]) < 1e-9)
    clean.pop_back();
  if (clean.size() < 3) throw invalid_input("preprocess_polyline: degenerate contour");

  if (polygon_area(clean) < 0.0) std::reverse(clean.begin(), clean.end());

  std::size_t best = 0;
  for (std::size_t i = 1; i < clean.size(); ++i) {
    if (clean[i][1] < clean[best][1] ||
        (clean[i][1] == clean[best][1] && clean[i][0] < clean[best][0]))
      best = i;
  }
  std::rotate(clean.begin(), clean.begin() + static_cast<std::ptrdiff_t>(best), clean.end());
  return clean;
}

/// Selects the maximum-area loop as the product boundary and resamples it by
/// arc length onto the uniform t-grid in canonical orientation.
inline ContourLayer extract_external_contour(const std::vector<std::vector<Point2>>& loops,
                                             double z, std::size_t grid_size) {
  if (loops.empty()) throw invalid_input("extract_external_contour: no loops");
  std::size_t best = 0;
  double best_area = -1.0;
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const double a = std::fabs(polygon_area(loops[i]));
    if (a > best_area) {
      best_area = a;
      best = i;
    }
  }
  return resample_closed_polygon(preprocess_polyline(loops[best]), z, grid_size);
}

/// Right prism over a closed polygon cross-section, with fan caps.
inline TriangleMesh make_prism(const std::vector<Point2>& polygon, double z0, double z1) {
  TriangleMesh mesh;
  const int m = static_cast<int>(polygon.size());
  for (const Point2& p : polygon) mesh.vertices.push_back({p[0], p[1], z0});
  for (const Point2& p : polygon) mesh.vertices.push_back({p[0], p[1], z1});
  for (int i = 0; i < m; ++i) {
    const int j = (i + 1) % m;
    mesh.triangles.push_back({i, j, m + j});
    mesh.triangles.push_back({i, m + j, m + i});
  }
  for (int i = 1; i + 1 < m; ++i) {
    mesh.triangles.push_back({0, i + 1, i});
    mesh.triangles.push_back({m, m + i, m + i + 1});
  }
  return mesh;
}

/// Torus around the z axis; its equator plane cuts two nested loops.
inline TriangleMesh make_torus(double major, double minor, int n_theta, int n_phi) {
  TriangleMesh mesh;
  for (int i = 0; i < n_theta; ++i) {
    const double th = 2.0 * std::numbers::pi * i / n_theta;
    for (int j = 0; j < n_phi; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / n_phi;
      const double r = major + minor * std::cos(ph);
      mesh.vertices.push_back({r * std::cos(th), r * std::sin(th), minor * std::sin(ph)});
    }
  }
  auto at = [&](int i, int j) { return (i % n_theta) * n_phi + (j % n_phi); };
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const int a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

}  // namespace ecm
