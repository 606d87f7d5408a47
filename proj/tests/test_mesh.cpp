#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "optcert/mesh.hpp"

namespace {

double signed_area(const optcert::Mesh& m, const optcert::Triangle& t) {
  const optcert::Node& a = m.nodes[t.v[0]];
  const optcert::Node& b = m.nodes[t.v[1]];
  const optcert::Node& c = m.nodes[t.v[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace

TEST_CASE("uniform mesh counts and coordinates") {
  for (int n : {2, 3, 8}) {
    const optcert::Mesh m = optcert::build_uniform(n);
    CHECK(m.n == n);
    CHECK(m.node_count() == static_cast<std::size_t>((n + 1) * (n + 1)));
    CHECK(m.triangle_count() == static_cast<std::size_t>(2 * n * n));
    CHECK(m.h == doctest::Approx(std::sqrt(2.0) / n).epsilon(1e-15));

    // Row-major node layout from the origin.
    for (int iy = 0; iy <= n; ++iy) {
      for (int ix = 0; ix <= n; ++ix) {
        const optcert::Node& nd = m.nodes[m.node_index(ix, iy)];
        CHECK(nd.x == doctest::Approx(static_cast<double>(ix) / n).epsilon(1e-15));
        CHECK(nd.y == doctest::Approx(static_cast<double>(iy) / n).epsilon(1e-15));
      }
    }
  }
  CHECK_THROWS_AS(optcert::build_uniform(1), std::invalid_argument);
  CHECK_THROWS_AS(optcert::build_uniform(0), std::invalid_argument);
}

TEST_CASE("triangles are counterclockwise and tile the square") {
  const optcert::Mesh m = optcert::build_uniform(5);
  double total = 0.0;
  for (const optcert::Triangle& t : m.triangles) {
    const double area = signed_area(m, t);
    CHECK(area > 0.0);
    CHECK(area == doctest::Approx(0.5 / 25.0).epsilon(1e-13));
    total += area;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("node valences match the lower-left diagonal pattern") {
  const int n = 6;
  const optcert::Mesh m = optcert::build_uniform(n);
  std::vector<int> valence(m.node_count(), 0);
  for (const optcert::Triangle& t : m.triangles)
    for (int v : t.v) ++valence[v];

  // Diagonal corners (0,0) and (1,1) sit on the split diagonal of their
  // square and touch two triangles; the other two corners touch one.
  CHECK(valence[m.node_index(0, 0)] == 2);
  CHECK(valence[m.node_index(n, n)] == 2);
  CHECK(valence[m.node_index(n, 0)] == 1);
  CHECK(valence[m.node_index(0, n)] == 1);

  // Non-corner boundary nodes touch three triangles, interior nodes six.
  for (int i = 1; i < n; ++i) {
    CHECK(valence[m.node_index(i, 0)] == 3);
    CHECK(valence[m.node_index(i, n)] == 3);
    CHECK(valence[m.node_index(0, i)] == 3);
    CHECK(valence[m.node_index(n, i)] == 3);
  }
  for (int iy = 1; iy < n; ++iy)
    for (int ix = 1; ix < n; ++ix) CHECK(valence[m.node_index(ix, iy)] == 6);
}

TEST_CASE("boundary mask and interior nodes agree") {
  const int n = 4;
  const optcert::Mesh m = optcert::build_uniform(n);
  const std::vector<int> interior = optcert::interior_nodes(m);
  CHECK(interior.size() == static_cast<std::size_t>((n - 1) * (n - 1)));
  CHECK(std::is_sorted(interior.begin(), interior.end()));
  std::vector<bool> is_interior(m.node_count(), false);
  for (int i : interior) is_interior[i] = true;
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    const optcert::Node& nd = m.nodes[i];
    const bool on_bdry = nd.x == 0.0 || nd.x == 1.0 || nd.y == 0.0 || nd.y == 1.0;
    CHECK(static_cast<bool>(m.boundary_mask[i]) == on_bdry);
    CHECK(is_interior[i] == !on_bdry);
  }
}

TEST_CASE("mesh refinement is nested") {
  // Every coarse node must reappear at the same coordinates after doubling n,
  // which is what makes coarse-to-fine comparisons meaningful.
  const optcert::Mesh coarse = optcert::build_uniform(4);
  const optcert::Mesh fine = optcert::build_uniform(8);
  for (int iy = 0; iy <= 4; ++iy) {
    for (int ix = 0; ix <= 4; ++ix) {
      const optcert::Node& c = coarse.nodes[coarse.node_index(ix, iy)];
      const optcert::Node& f = fine.nodes[fine.node_index(2 * ix, 2 * iy)];
      CHECK(c.x == doctest::Approx(f.x).epsilon(1e-15));
      CHECK(c.y == doctest::Approx(f.y).epsilon(1e-15));
    }
  }
}

TEST_CASE("constraint node selection") {
  const int n = 4;
  const optcert::Mesh m = optcert::build_uniform(n);

  const optcert::ConstraintNodeSet none = optcert::constraint_nodes(m, optcert::Region::none());
  CHECK(none.indices.empty());

  const optcert::ConstraintNodeSet all =
      optcert::constraint_nodes(m, optcert::Region::all_interior());
  CHECK(all.indices == optcert::interior_nodes(m));

  // A box covering one interior cell pulls in the vertices of every triangle
  // touching it, including boundary vertices of those triangles.
  const optcert::ConstraintNodeSet box =
      optcert::constraint_nodes(m, optcert::Region::box(0.25, 0.5, 0.25, 0.5));
  CHECK(std::is_sorted(box.indices.begin(), box.indices.end()));
  CHECK(std::adjacent_find(box.indices.begin(), box.indices.end()) == box.indices.end());
  CHECK(std::binary_search(box.indices.begin(), box.indices.end(), m.node_index(1, 1)));
  CHECK(std::binary_search(box.indices.begin(), box.indices.end(), m.node_index(2, 2)));
  CHECK_FALSE(std::binary_search(box.indices.begin(), box.indices.end(), m.node_index(4, 4)));

  // Predicate region equivalent to the same box selects the same nodes.
  const optcert::ConstraintNodeSet pred = optcert::constraint_nodes(
      m, optcert::Region::predicate([](double x, double y) {
        return x >= 0.25 && x <= 0.5 && y >= 0.25 && y <= 0.5;
      }));
  CHECK(pred.indices == box.indices);
}
