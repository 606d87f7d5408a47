#include "optcert/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace optcert {

Mesh build_uniform(int n) {
  if (n < 2) {
    throw std::invalid_argument("build_uniform: need n >= 2, got " + std::to_string(n));
  }
  Mesh mesh;
  mesh.n = n;
  mesh.h = std::sqrt(2.0) / n;

  const int np = n + 1;
  mesh.nodes.reserve(static_cast<std::size_t>(np) * np);
  mesh.boundary_mask.reserve(static_cast<std::size_t>(np) * np);
  for (int iy = 0; iy < np; ++iy) {
    for (int ix = 0; ix < np; ++ix) {
      mesh.nodes.push_back({static_cast<double>(ix) / n, static_cast<double>(iy) / n});
      const bool bdry = ix == 0 || ix == n || iy == 0 || iy == n;
      mesh.boundary_mask.push_back(bdry ? 1 : 0);
    }
  }

  // Each cell is split along the diagonal from its lower-left corner to its
  // upper-right corner; both triangles are counterclockwise.
  mesh.triangles.reserve(2u * n * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int ll = mesh.node_index(ix, iy);
      const int lr = mesh.node_index(ix + 1, iy);
      const int ur = mesh.node_index(ix + 1, iy + 1);
      const int ul = mesh.node_index(ix, iy + 1);
      mesh.triangles.push_back({{ll, lr, ur}});
      mesh.triangles.push_back({{ll, ur, ul}});
    }
  }
  return mesh;
}

std::vector<int> interior_nodes(const Mesh& mesh) {
  std::vector<int> out;
  out.reserve(mesh.node_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    if (!mesh.boundary_mask[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

Region Region::box(double x0, double x1, double y0, double y1) {
  if (x1 < x0 || y1 < y0) {
    throw std::invalid_argument("Region::box: empty box (upper corner below lower corner)");
  }
  Region r;
  r.kind = Kind::box;
  r.x0 = x0;
  r.x1 = x1;
  r.y0 = y0;
  r.y1 = y1;
  return r;
}

Region Region::predicate(std::function<bool(double, double)> contains) {
  if (!contains) {
    throw std::invalid_argument("Region::predicate: empty predicate");
  }
  Region r;
  r.kind = Kind::predicate;
  r.contains = std::move(contains);
  return r;
}

namespace {

// Exact closed-triangle vs closed-rectangle intersection via separating axes.
// Candidate axes: the rectangle's two axes and the three edge normals of the
// triangle. Touching counts as intersecting.
bool triangle_box_intersect(const Node& a, const Node& b, const Node& c, double x0, double x1,
                            double y0, double y1) {
  // rectangle axes
  const double tminx = std::min({a.x, b.x, c.x});
  const double tmaxx = std::max({a.x, b.x, c.x});
  if (tmaxx < x0 || tminx > x1) return false;
  const double tminy = std::min({a.y, b.y, c.y});
  const double tmaxy = std::max({a.y, b.y, c.y});
  if (tmaxy < y0 || tminy > y1) return false;

  const Node tri[3] = {a, b, c};
  const Node corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  for (int e = 0; e < 3; ++e) {
    const Node& p = tri[e];
    const Node& q = tri[(e + 1) % 3];
    const double nx = -(q.y - p.y);
    const double ny = q.x - p.x;
    double trilo = 1e300, trihi = -1e300;
    for (const Node& t : tri) {
      const double s = nx * t.x + ny * t.y;
      trilo = std::min(trilo, s);
      trihi = std::max(trihi, s);
    }
    double boxlo = 1e300, boxhi = -1e300;
    for (const Node& t : corners) {
      const double s = nx * t.x + ny * t.y;
      boxlo = std::min(boxlo, s);
      boxhi = std::max(boxhi, s);
    }
    if (trihi < boxlo || trilo > boxhi) return false;
  }
  return true;
}

bool triangle_predicate_intersect(const Node& a, const Node& b, const Node& c,
                                  const std::function<bool(double, double)>& contains) {
  const Node samples[7] = {
      a,
      b,
      c,
      {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
      {0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
      {0.5 * (c.x + a.x), 0.5 * (c.y + a.y)},
      {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0},
  };
  for (const Node& s : samples) {
    if (contains(s.x, s.y)) return true;
  }
  return false;
}

}  // namespace

ConstraintNodeSet constraint_nodes(const Mesh& mesh, const Region& region) {
  ConstraintNodeSet set;
  set.region = region;

  switch (region.kind) {
    case Region::Kind::none:
      return set;
    case Region::Kind::all_interior:
      set.indices = interior_nodes(mesh);
      return set;
    case Region::Kind::box:
    case Region::Kind::predicate:
      break;
  }

  std::vector<unsigned char> mark(mesh.node_count(), 0);
  for (const Triangle& t : mesh.triangles) {
    const Node& a = mesh.nodes[t.v[0]];
    const Node& b = mesh.nodes[t.v[1]];
    const Node& c = mesh.nodes[t.v[2]];
    bool hit = false;
    if (region.kind == Region::Kind::box) {
      hit = triangle_box_intersect(a, b, c, region.x0, region.x1, region.y0, region.y1);
    } else {
      hit = triangle_predicate_intersect(a, b, c, region.contains);
    }
    if (hit) {
      mark[t.v[0]] = mark[t.v[1]] = mark[t.v[2]] = 1;
    }
  }
  for (std::size_t i = 0; i < mark.size(); ++i) {
    if (mark[i]) set.indices.push_back(static_cast<int>(i));
  }
  return set;
}

void export_nodes_csv(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_nodes_csv: cannot open " + path);
  out << "x,y,flag\n";
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    out << mesh.nodes[i].x << ',' << mesh.nodes[i].y << ',' << int(mesh.boundary_mask[i]) << '\n';
  }
}

void export_triangles_csv(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_triangles_csv: cannot open " + path);
  out << "i,j,k\n";
  for (const Triangle& t : mesh.triangles) {
    out << t.v[0] << ',' << t.v[1] << ',' << t.v[2] << '\n';
  }
}

}  // namespace optcert
