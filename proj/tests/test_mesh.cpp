#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "cauchycr/mesh.hpp"
#include "cauchycr/util.hpp"

using namespace cauchycr;

namespace {

int interior_count(const Mesh& m) {
  int n = 0;
  for (const auto& f : m.faces)
    if (!f.boundary()) ++n;
  return n;
}

double total_area(const Mesh& m) {
  double a = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) a += m.tri(t).area;
  return a;
}

} // namespace

TEST_CASE("smallest mesh: 2 triangles, 5 faces, 1 interior face") {
  const Mesh m = build_structured(Rect(M_PI, 1.0), 1, 1, 0.0, 0);
  CHECK(m.n_triangles() == 2);
  CHECK(m.n_faces() == 5);
  CHECK(interior_count(m) == 1);
}

TEST_CASE("4x2 mesh counts match the enumeration oracle") {
  const Mesh m = build_structured(Rect(M_PI, 1.0), 4, 2, 0.0, 0);
  const int t = 2 * 4 * 2;
  const int b = 2 * (4 + 2);
  CHECK(m.n_triangles() == t);
  CHECK(m.n_boundary_faces == b);
  CHECK(m.n_faces() == (3 * t + b) / 2);
}

TEST_CASE("areas sum to the rectangle area") {
  for (auto [nx, ny, jit] : {std::tuple{3, 5, 0.0}, {8, 4, 0.25}, {16, 10, 0.1}}) {
    const Mesh m = build_structured(Rect(M_PI, 1.0), nx, ny, jit, 42);
    CHECK(std::abs(total_area(m) - M_PI) <= 1e-12 * M_PI);
  }
}

TEST_CASE("jittered 32x10 mesh has controlled h_max") {
  const Mesh m = build_structured(Rect(M_PI, 1.0), 32, 10, 0.2, 7);
  double h = 0.0;
  for (int t = 0; t < m.n_triangles(); ++t) h = std::max(h, m.tri(t).diameter);
  CHECK(m.h_max == h);
  const double base = std::hypot(M_PI / 32.0, 0.1);
  CHECK(m.h_max >= base);
  CHECK(m.h_max <= 1.3 * base);
}

TEST_CASE("boundary vertices are never jittered") {
  const Mesh a = build_structured(Rect(2.0, 1.0), 6, 4, 0.0, 0);
  const Mesh b = build_structured(Rect(2.0, 1.0), 6, 4, 0.29, 123);
  for (int i = 0; i < a.n_vertices(); ++i) {
    const auto &pa = a.vertex(i), &pb = b.vertex(i);
    const bool boundary = pa[0] == 0.0 || pa[0] == 2.0 || pa[1] == 0.0 || pa[1] == 1.0;
    if (boundary) {
      CHECK(pa[0] == pb[0]);
      CHECK(pa[1] == pb[1]);
    }
  }
}

TEST_CASE("interior normals point from first adjacent triangle to second") {
  const Mesh m = build_structured(Rect(M_PI, 1.0), 5, 3, 0.15, 9);
  for (const auto& f : m.faces) {
    if (f.boundary()) continue;
    CHECK(f.tri[0] < f.tri[1]);
    auto cen = [&](int t) {
      const auto& v = m.tri(t).v;
      return std::array<double, 2>{
          (m.vertex(v[0])[0] + m.vertex(v[1])[0] + m.vertex(v[2])[0]) / 3.0,
          (m.vertex(v[0])[1] + m.vertex(v[1])[1] + m.vertex(v[2])[1]) / 3.0};
    };
    const auto c0 = cen(f.tri[0]), c1 = cen(f.tri[1]);
    CHECK(f.normal[0] * (c1[0] - c0[0]) + f.normal[1] * (c1[1] - c0[1]) > 0.0);
  }
}

TEST_CASE("boundary normals point outward and h_F <= h_kappa") {
  const Mesh m = build_structured(Rect(M_PI, 1.0), 6, 4, 0.2, 3);
  for (const auto& f : m.faces) {
    for (int s = 0; s < (f.boundary() ? 1 : 2); ++s)
      CHECK(f.length <= m.tri(f.tri[static_cast<std::size_t>(s)]).diameter);
    if (!f.boundary()) continue;
    const auto mid = std::array<double, 2>{0.5 * (m.vertex(f.v[0])[0] + m.vertex(f.v[1])[0]),
                                           0.5 * (m.vertex(f.v[0])[1] + m.vertex(f.v[1])[1])};
    // stepping outward must leave the rectangle
    const double eps = 1e-8;
    const double x = mid[0] + eps * f.normal[0], y = mid[1] + eps * f.normal[1];
    CHECK((x < 0.0 || x > M_PI || y < 0.0 || y > 1.0));
  }
}

TEST_CASE("unit normals have unit length") {
  const Mesh m = build_structured(Rect(1.0, 1.0), 3, 3, 0.2, 11);
  for (const auto& f : m.faces)
    CHECK(std::abs(std::hypot(f.normal[0], f.normal[1]) - 1.0) <= 1e-14);
}

TEST_CASE("hadamard tagging on 4x2") {
  const Mesh m = tag_boundary_hadamard(build_structured(Rect(M_PI, 1.0), 4, 2, 0.0, 0));
  CHECK(m.count_tagged(BoundaryPart::GammaC) == 4);
  CHECK(m.count_tagged(BoundaryPart::GammaDOnly) == 4);
  CHECK(m.count_tagged(BoundaryPart::GammaDPrime) == 4);
}

TEST_CASE("hadamard tagging on 1x1") {
  const Mesh m = tag_boundary_hadamard(build_structured(Rect(M_PI, 1.0), 1, 1, 0.0, 0));
  CHECK(m.count_tagged(BoundaryPart::GammaC) == 1);
  CHECK(m.count_tagged(BoundaryPart::GammaDOnly) == 2);
  CHECK(m.count_tagged(BoundaryPart::GammaDPrime) == 1);
}

TEST_CASE("tagging the whole boundary GammaC is rejected") {
  Mesh m = build_structured(Rect(M_PI, 1.0), 2, 2, 0.0, 0);
  CHECK_THROWS_AS(
      tag_boundary(std::move(m), [](double, double) { return BoundaryPart::GammaC; }),
      ValidationError);
}

TEST_CASE("predicates must cover the boundary") {
  Mesh m = build_structured(Rect(M_PI, 1.0), 2, 2, 0.0, 0);
  CHECK_THROWS_AS(tag_boundary(std::move(m),
                               [](double, double y) -> std::optional<BoundaryPart> {
                                 if (y == 0.0) return BoundaryPart::GammaC;
                                 return std::nullopt;
                               }),
                  ValidationError);
}

TEST_CASE("bad build parameters are rejected") {
  CHECK_THROWS_AS(Rect(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(build_structured(Rect(1.0, 1.0), 0, 1, 0.0, 0), ValidationError);
  CHECK_THROWS_AS(build_structured(Rect(1.0, 1.0), 2, 2, 0.3, 0), ValidationError);
  CHECK_THROWS_AS(build_structured(Rect(1.0, 1.0), 2, 2, -0.1, 0), ValidationError);
}

TEST_CASE("text round-trip is lossless") {
  const Mesh m = tag_boundary_hadamard(build_structured(Rect(M_PI, 1.0), 7, 5, 0.22, 31));
  std::stringstream ss;
  write_mesh_text(m, ss);
  const Mesh r = read_mesh_text(ss);
  REQUIRE(r.n_vertices() == m.n_vertices());
  REQUIRE(r.n_triangles() == m.n_triangles());
  REQUIRE(r.n_faces() == m.n_faces());
  for (int i = 0; i < m.n_vertices(); ++i) {
    CHECK(r.vertex(i)[0] == m.vertex(i)[0]);
    CHECK(r.vertex(i)[1] == m.vertex(i)[1]);
  }
  for (int f = 0; f < m.n_faces(); ++f) {
    CHECK(r.face(f).v == m.face(f).v);
    CHECK(r.face(f).tag == m.face(f).tag);
  }
  CHECK(r.h_max == m.h_max);
}

TEST_CASE("deterministic rebuild: same seed, same mesh") {
  const Mesh a = build_structured(Rect(M_PI, 1.0), 9, 6, 0.2, 77);
  const Mesh b = build_structured(Rect(M_PI, 1.0), 9, 6, 0.2, 77);
  for (int i = 0; i < a.n_vertices(); ++i) {
    CHECK(a.vertex(i)[0] == b.vertex(i)[0]);
    CHECK(a.vertex(i)[1] == b.vertex(i)[1]);
  }
}
