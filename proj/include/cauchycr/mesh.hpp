#ifndef CAUCHYCR_MESH_HPP
#define CAUCHYCR_MESH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cauchycr/quadrature.hpp"

namespace cauchycr {

/// Rectangle (0, x_max) x (0, y_max).
struct Rect {
  double x_max;
  double y_max;
  Rect(double xm, double ym);
};

/// Boundary decomposition. GammaC is the Cauchy part (both Dirichlet and
/// flux data), GammaDOnly the rest of the Dirichlet part, GammaDPrime the
/// data-free remainder. Derived sets: GammaD = GammaC + GammaDOnly,
/// GammaCPrime = GammaDOnly + GammaDPrime.
enum class BoundaryPart : std::uint8_t { GammaC = 0, GammaDOnly = 1, GammaDPrime = 2 };

inline bool in_gamma_c(BoundaryPart p) { return p == BoundaryPart::GammaC; }
inline bool in_gamma_d(BoundaryPart p) {
  return p == BoundaryPart::GammaC || p == BoundaryPart::GammaDOnly;
}
inline bool in_gamma_c_prime(BoundaryPart p) { return p != BoundaryPart::GammaC; }
inline bool in_gamma_d_prime(BoundaryPart p) { return p == BoundaryPart::GammaDPrime; }

struct Face {
  std::array<int, 2> v;        // endpoint vertex indices
  std::array<int, 2> tri;      // adjacent triangles; tri[1] = -1 on the boundary
  std::array<int, 2> local;    // local face index (0..2) within each adjacent triangle
  std::array<double, 2> normal; // unit n_F; outward on the boundary, else tri[0] -> tri[1]
  double length;               // h_F
  std::optional<BoundaryPart> tag;

  bool boundary() const { return tri[1] < 0; }
};

/// Per-triangle geometry cache. Vertices are stored counter-clockwise;
/// grad_phi[i] is the (constant) gradient of the face-i basis function
/// phi_i = 1 - 2*lambda_i, lambda_i the barycentric opposite face i.
struct TriGeom {
  std::array<int, 3> v;
  std::array<int, 3> face;     // global face index of local face i (opposite vertex i)
  std::array<std::array<double, 2>, 3> grad_lambda;
  std::array<std::array<double, 2>, 3> grad_phi;
  double area;
  double diameter;             // h_kappa
};

/// Conforming triangulation of a rectangle. Immutable after construction;
/// safe for concurrent reads.
struct Mesh {
  Rect rect{1.0, 1.0};
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Face> faces;
  std::vector<TriGeom> tri_geom;
  double h_max = 0.0;
  int n_boundary_faces = 0;

  const std::array<double, 2>& vertex(int i) const { return vertices[static_cast<std::size_t>(i)]; }
  const Face& face(int f) const { return faces[static_cast<std::size_t>(f)]; }
  const TriGeom& tri(int t) const { return tri_geom[static_cast<std::size_t>(t)]; }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }

  std::array<double, 2> face_midpoint(int f) const;
  /// Barycentric coordinates of (x,y) with respect to triangle t.
  std::array<double, 3> barycentric(int t, double x, double y) const;

  std::vector<QuadPoint> face_rule(int f, int degree) const;
  std::vector<QuadPoint> tri_rule(int t, int degree) const;

  /// Count of boundary faces carrying the given tag.
  int count_tagged(BoundaryPart p) const;
};

/// Criss-cross triangulation of `rect` with nx-by-ny cells, each split along
/// a diagonal alternating with cell parity. Interior vertices are displaced
/// by at most jitter*min(dx,dy) using a deterministic stream from `seed`;
/// boundary vertices never move. jitter in [0, 0.3). Throws ValidationError
/// on bad parameters or if jitter keeps producing inverted triangles.
Mesh build_structured(const Rect& rect, int nx, int ny, double jitter, std::uint64_t seed);

/// Predicate tagging: returns the part for a boundary face with the given
/// midpoint, or nullopt to leave it untagged (an error).
using TagPredicate = std::function<std::optional<BoundaryPart>(double x, double y)>;

/// Tags y=0 as GammaC, x=0 and x=x_max as GammaDOnly, y=y_max as GammaDPrime.
Mesh tag_boundary_hadamard(Mesh mesh);
/// Tags every boundary face through `pred` (applied to face midpoints).
/// Rejects layouts with an untagged face or with GammaC or GammaDPrime empty.
Mesh tag_boundary(Mesh mesh, const TagPredicate& pred);

/// Line-oriented text export: header, `v x y`, `t i j k`, `b faceIdx tag`
/// lines. Coordinates at 17 significant digits; round-trip is lossless.
void write_mesh_text(const Mesh& mesh, std::ostream& os);
Mesh read_mesh_text(std::istream& is);

} // namespace cauchycr

#endif
