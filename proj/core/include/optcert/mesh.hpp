#pragma once

// Uniform triangulation of the unit square (0,1)^2: an n-by-n grid of squares,
// each split along its lower-left to upper-right diagonal. All solver and
// experiment code works on this mesh family.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace optcert {

struct Node {
  double x;
  double y;
};

struct Triangle {
  std::array<int, 3> v;  // counterclockwise vertex indices
};

struct Mesh {
  int n = 0;                          // subdivisions per side
  std::vector<Node> nodes;            // (n+1)^2 points, row-major from (0,0)
  std::vector<Triangle> triangles;    // 2*n^2 triangles
  std::vector<unsigned char> boundary_mask;  // 1 iff node lies on the boundary
  double h = 0.0;                     // longest edge length, sqrt(2)/n

  std::size_t node_count() const { return nodes.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  int node_index(int ix, int iy) const { return iy * (n + 1) + ix; }
};

// Builds the uniform mesh with n >= 2 subdivisions per side.
Mesh build_uniform(int n);

// Node indices not on the boundary, ascending.
std::vector<int> interior_nodes(const Mesh& mesh);

// Descriptor of the closed region where nodal state constraints are imposed.
struct Region {
  enum class Kind { none, all_interior, box, predicate };

  Kind kind = Kind::none;
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;            // box corners
  std::function<bool(double, double)> contains;     // predicate membership

  static Region none() { return Region{}; }
  static Region all_interior() {
    Region r;
    r.kind = Kind::all_interior;
    return r;
  }
  static Region box(double x0, double x1, double y0, double y1);
  static Region predicate(std::function<bool(double, double)> contains);
};

struct ConstraintNodeSet {
  std::vector<int> indices;  // sorted, deduplicated node indices
  Region region;
};

// Vertices of every triangle meeting the region. Box regions use an exact
// triangle/rectangle intersection test; predicate regions sample vertices,
// edge midpoints and the centroid. all_interior returns the interior nodes
// directly (the constraints-everywhere reading used by the experiments).
ConstraintNodeSet constraint_nodes(const Mesh& mesh, const Region& region);

// Plain-text exports for plotting: "x,y,flag" per node, "i,j,k" per triangle.
void export_nodes_csv(const Mesh& mesh, const std::string& path);
void export_triangles_csv(const Mesh& mesh, const std::string& path);

}  // namespace optcert
