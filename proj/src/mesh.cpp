#include "cauchycr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "cauchycr/util.hpp"

namespace cauchycr {

Rect::Rect(double xm, double ym) : x_max(xm), y_max(ym) {
  if (!(xm > 0.0) || !(ym > 0.0)) throw ValidationError("Rect: sides must be positive");
}

namespace {

double cross2(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

std::array<double, 2> centroid(const Mesh& m, int t) {
  const auto& v = m.tri_geom[static_cast<std::size_t>(t)].v;
  return {(m.vertex(v[0])[0] + m.vertex(v[1])[0] + m.vertex(v[2])[0]) / 3.0,
          (m.vertex(v[0])[1] + m.vertex(v[1])[1] + m.vertex(v[2])[1]) / 3.0};
}

// Fill tri_geom, faces, h_max from vertices + triangles. Triangles are
// normalized counter-clockwise in place so local face enumeration (and
// therefore face indexing) is reproducible from the connectivity alone.
void finalize(Mesh& m) {
  m.tri_geom.clear();
  m.faces.clear();
  m.tri_geom.reserve(m.triangles.size());

  for (auto& t : m.triangles) {
    const auto &a = m.vertices[static_cast<std::size_t>(t[0])],
               &b = m.vertices[static_cast<std::size_t>(t[1])],
               &c = m.vertices[static_cast<std::size_t>(t[2])];
    const double area2 = cross2({b[0] - a[0], b[1] - a[1]}, {c[0] - a[0], c[1] - a[1]});
    if (area2 < 0.0) std::swap(t[1], t[2]);
  }

  std::map<std::pair<int, int>, int> face_of_edge;
  m.h_max = 0.0;
  for (int ti = 0; ti < m.n_triangles(); ++ti) {
    const auto& t = m.triangles[static_cast<std::size_t>(ti)];
    TriGeom g;
    g.v = t;
    const auto &A = m.vertex(t[0]), &B = m.vertex(t[1]), &C = m.vertex(t[2]);
    const double area2 = cross2({B[0] - A[0], B[1] - A[1]}, {C[0] - A[0], C[1] - A[1]});
    if (!(area2 > 0.0)) throw ValidationError("mesh: degenerate triangle " + std::to_string(ti));
    g.area = 0.5 * area2;
    const std::array<std::array<double, 2>, 3> P = {A, B, C};
    for (int i = 0; i < 3; ++i) {
      const auto& p1 = P[static_cast<std::size_t>((i + 1) % 3)];
      const auto& p2 = P[static_cast<std::size_t>((i + 2) % 3)];
      const std::array<double, 2> u = {p2[0] - p1[0], p2[1] - p1[1]};
      g.grad_lambda[static_cast<std::size_t>(i)] = {-u[1] / area2, u[0] / area2};
      g.grad_phi[static_cast<std::size_t>(i)] = {2.0 * u[1] / area2, -2.0 * u[0] / area2};
    }
    g.diameter = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto& p1 = P[static_cast<std::size_t>(i)];
      const auto& p2 = P[static_cast<std::size_t>((i + 1) % 3)];
      g.diameter = std::max(g.diameter, std::hypot(p2[0] - p1[0], p2[1] - p1[1]));
    }
    m.h_max = std::max(m.h_max, g.diameter);

    for (int i = 0; i < 3; ++i) {
      const int va = t[(i + 1) % 3], vb = t[(i + 2) % 3];
      const auto key = std::minmax(va, vb);
      auto it = face_of_edge.find(key);
      if (it == face_of_edge.end()) {
        Face f;
        f.v = {va, vb};
        f.tri = {ti, -1};
        f.local = {i, -1};
        f.length = std::hypot(m.vertex(vb)[0] - m.vertex(va)[0], m.vertex(vb)[1] - m.vertex(va)[1]);
        f.normal = {0.0, 0.0};
        g.face[static_cast<std::size_t>(i)] = m.n_faces();
        face_of_edge.emplace(key, m.n_faces());
        m.faces.push_back(f);
      } else {
        Face& f = m.faces[static_cast<std::size_t>(it->second)];
        if (f.tri[1] >= 0) throw ValidationError("mesh: face shared by more than two triangles");
        f.tri[1] = ti;
        f.local[1] = i;
        g.face[static_cast<std::size_t>(i)] = it->second;
      }
    }
    m.tri_geom.push_back(g);
  }

  m.n_boundary_faces = 0;
  for (auto& f : m.faces) {
    const auto &pa = m.vertex(f.v[0]), &pb = m.vertex(f.v[1]);
    std::array<double, 2> n = {(pb[1] - pa[1]) / f.length, -(pb[0] - pa[0]) / f.length};
    const auto c0 = centroid(m, f.tri[0]);
    const std::array<double, 2> mid = {0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])};
    if (f.boundary()) {
      ++m.n_boundary_faces;
      // outward: away from the adjacent centroid
      if (n[0] * (mid[0] - c0[0]) + n[1] * (mid[1] - c0[1]) < 0.0) n = {-n[0], -n[1]};
    } else {
      // from first adjacent triangle to second
      const auto c1 = centroid(m, f.tri[1]);
      if (n[0] * (c1[0] - c0[0]) + n[1] * (c1[1] - c0[1]) < 0.0) n = {-n[0], -n[1]};
    }
    f.normal = n;
  }

  if (2 * m.n_faces() != 3 * m.n_triangles() + m.n_boundary_faces)
    throw ValidationError("mesh: face count violates the Euler relation");
}

} // namespace

std::array<double, 2> Mesh::face_midpoint(int f) const {
  const Face& F = face(f);
  const auto &a = vertex(F.v[0]), &b = vertex(F.v[1]);
  return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
}

std::array<double, 3> Mesh::barycentric(int t, double x, double y) const {
  const TriGeom& g = tri(t);
  const auto& A = vertex(g.v[0]);
  std::array<double, 3> lam;
  lam[1] = g.grad_lambda[1][0] * (x - A[0]) + g.grad_lambda[1][1] * (y - A[1]);
  lam[2] = g.grad_lambda[2][0] * (x - A[0]) + g.grad_lambda[2][1] * (y - A[1]);
  lam[0] = 1.0 - lam[1] - lam[2];
  return lam;
}

std::vector<QuadPoint> Mesh::face_rule(int f, int degree) const {
  const Face& F = face(f);
  return face_quadrature(vertex(F.v[0]), vertex(F.v[1]), degree);
}

std::vector<QuadPoint> Mesh::tri_rule(int t, int degree) const {
  const TriGeom& g = tri(t);
  return triangle_quadrature(vertex(g.v[0]), vertex(g.v[1]), vertex(g.v[2]), degree);
}

int Mesh::count_tagged(BoundaryPart p) const {
  int n = 0;
  for (const auto& f : faces)
    if (f.tag && *f.tag == p) ++n;
  return n;
}

Mesh build_structured(const Rect& rect, int nx, int ny, double jitter, std::uint64_t seed) {
  if (nx < 1 || ny < 1) throw ValidationError("build_structured: nx, ny must be >= 1");
  if (jitter < 0.0 || jitter >= 0.3)
    throw ValidationError("build_structured: jitter must lie in [0, 0.3)");

  const double dx = rect.x_max / nx, dy = rect.y_max / ny;
  const double amp = jitter * std::min(dx, dy);

  const int nvx = nx + 1;
  auto vid = [nvx](int i, int j) { return j * nvx + i; };

  for (int attempt = 0; attempt < 32; ++attempt) {
    Mesh m;
    m.rect = rect;
    m.vertices.resize(static_cast<std::size_t>(nvx * (ny + 1)));
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        double x = i * dx, y = j * dy;
        if (amp > 0.0 && i > 0 && i < nx && j > 0 && j < ny) {
          const auto v = static_cast<std::uint64_t>(vid(i, j));
          const auto salt = static_cast<std::uint64_t>(2 * attempt);
          double ux = hash_unit(seed, v, salt), uy = hash_unit(seed, v, salt + 1);
          const double r = std::hypot(ux, uy);
          if (r > 1.0) {
            ux /= r;
            uy /= r;
          }
          x += amp * ux;
          y += amp * uy;
        }
        m.vertices[static_cast<std::size_t>(vid(i, j))] = {x, y};
      }
    }
    m.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        if ((i + j) % 2 == 0) {
          m.triangles.push_back({v00, v10, v11});
          m.triangles.push_back({v00, v11, v01});
        } else {
          m.triangles.push_back({v00, v10, v01});
          m.triangles.push_back({v10, v11, v01});
        }
      }
    }

    bool ok = true;
    const double min_area = 1e-9 * dx * dy;
    for (const auto& t : m.triangles) {
      const auto &a = m.vertex(t[0]), &b = m.vertex(t[1]), &c = m.vertex(t[2]);
      // signed: the grid is built counter-clockwise, a sign flip is an inversion
      const double area2 = cross2({b[0] - a[0], b[1] - a[1]}, {c[0] - a[0], c[1] - a[1]});
      if (area2 < 2.0 * min_area) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      if (amp == 0.0) throw ValidationError("build_structured: degenerate cell");
      continue; // re-sample the jitter stream
    }
    finalize(m);
    return m;
  }
  throw ValidationError("build_structured: jitter kept producing inverted triangles");
}

Mesh tag_boundary_hadamard(Mesh mesh) {
  const double xm = mesh.rect.x_max, ym = mesh.rect.y_max;
  const double tol = 1e-12 * std::max(xm, ym);
  return tag_boundary(std::move(mesh), [=](double x, double y) -> std::optional<BoundaryPart> {
    if (std::abs(y) < tol) return BoundaryPart::GammaC;
    if (std::abs(x) < tol || std::abs(x - xm) < tol) return BoundaryPart::GammaDOnly;
    if (std::abs(y - ym) < tol) return BoundaryPart::GammaDPrime;
    return std::nullopt;
  });
}

Mesh tag_boundary(Mesh mesh, const TagPredicate& pred) {
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    Face& f = mesh.faces[static_cast<std::size_t>(fi)];
    if (!f.boundary()) {
      f.tag.reset();
      continue;
    }
    const auto mid = mesh.face_midpoint(fi);
    const auto tag = pred(mid[0], mid[1]);
    if (!tag) throw ValidationError("tag_boundary: untagged boundary face " + std::to_string(fi));
    f.tag = *tag;
  }
  if (mesh.count_tagged(BoundaryPart::GammaC) == 0)
    throw ValidationError("tag_boundary: GammaC is empty");
  if (mesh.count_tagged(BoundaryPart::GammaDPrime) == 0)
    throw ValidationError("tag_boundary: GammaD covers the whole boundary (GammaD' empty)");
  return mesh;
}

void write_mesh_text(const Mesh& mesh, std::ostream& os) {
  int ntagged = 0;
  for (const auto& f : mesh.faces)
    if (f.tag) ++ntagged;
  os << "ncmesh 1\n";
  os << mesh.n_vertices() << ' ' << mesh.n_triangles() << ' ' << ntagged << '\n';
  for (const auto& v : mesh.vertices)
    os << "v " << format_g17(v[0]) << ' ' << format_g17(v[1]) << '\n';
  for (const auto& t : mesh.triangles) os << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  static const char* tag_name = "CDP";
  for (int fi = 0; fi < mesh.n_faces(); ++fi) {
    const Face& f = mesh.face(fi);
    if (f.tag) os << "b " << fi << ' ' << tag_name[static_cast<int>(*f.tag)] << '\n';
  }
}

Mesh read_mesh_text(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "ncmesh" || version != 1)
    throw ValidationError("read_mesh_text: bad header");
  int nv = 0, nt = 0, nb = 0;
  if (!(is >> nv >> nt >> nb) || nv < 3 || nt < 1)
    throw ValidationError("read_mesh_text: bad counts");
  Mesh m;
  m.vertices.resize(static_cast<std::size_t>(nv));
  m.triangles.resize(static_cast<std::size_t>(nt));
  std::string kind;
  for (int i = 0; i < nv; ++i) {
    if (!(is >> kind >> m.vertices[static_cast<std::size_t>(i)][0] >>
          m.vertices[static_cast<std::size_t>(i)][1]) ||
        kind != "v")
      throw ValidationError("read_mesh_text: bad vertex line");
  }
  for (int i = 0; i < nt; ++i) {
    auto& t = m.triangles[static_cast<std::size_t>(i)];
    if (!(is >> kind >> t[0] >> t[1] >> t[2]) || kind != "t")
      throw ValidationError("read_mesh_text: bad triangle line");
    for (int k : t)
      if (k < 0 || k >= nv) throw ValidationError("read_mesh_text: vertex index out of range");
  }
  double xm = 0.0, ym = 0.0;
  for (const auto& v : m.vertices) {
    xm = std::max(xm, v[0]);
    ym = std::max(ym, v[1]);
  }
  m.rect = Rect(xm, ym);
  finalize(m);
  for (int i = 0; i < nb; ++i) {
    int fi = 0;
    char tag = 0;
    if (!(is >> kind >> fi >> tag) || kind != "b" || fi < 0 || fi >= m.n_faces())
      throw ValidationError("read_mesh_text: bad tag line");
    auto& f = m.faces[static_cast<std::size_t>(fi)];
    if (!f.boundary()) throw ValidationError("read_mesh_text: tag on interior face");
    switch (tag) {
      case 'C': f.tag = BoundaryPart::GammaC; break;
      case 'D': f.tag = BoundaryPart::GammaDOnly; break;
      case 'P': f.tag = BoundaryPart::GammaDPrime; break;
      default: throw ValidationError("read_mesh_text: unknown tag");
    }
  }
  return m;
}

} // namespace cauchycr
