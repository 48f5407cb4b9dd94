#include "cauchycr/space.hpp"

#include <cmath>
#include <ostream>

namespace cauchycr {

Space::Space(const Mesh& mesh, std::set<BoundaryPart> essential)
    : mesh_(&mesh), essential_(std::move(essential)) {
  dof_of_face_.assign(static_cast<std::size_t>(mesh.n_faces()), -1);
  for (int f = 0; f < mesh.n_faces(); ++f) {
    const Face& F = mesh.face(f);
    const bool constrained = F.tag && essential_.count(*F.tag) > 0;
    if (!constrained) {
      dof_of_face_[static_cast<std::size_t>(f)] = n_dofs_++;
      face_of_dof_.push_back(f);
    }
  }
}

std::array<double, 3> basis_eval(const Mesh& mesh, int t, int lf, double x, double y) {
  const auto lam = mesh.barycentric(t, x, y);
  const auto& g = mesh.tri(t).grad_phi[static_cast<std::size_t>(lf)];
  return {1.0 - 2.0 * lam[static_cast<std::size_t>(lf)], g[0], g[1]};
}

double FEFunction::eval_on_tri(int t, double x, double y) const {
  const Mesh& m = space->mesh();
  const auto lam = m.barycentric(t, x, y);
  const auto& g = m.tri(t);
  double v = 0.0;
  for (int a = 0; a < 3; ++a)
    v += face_value(g.face[static_cast<std::size_t>(a)]) *
         (1.0 - 2.0 * lam[static_cast<std::size_t>(a)]);
  return v;
}

std::array<double, 2> FEFunction::grad_on_tri(int t) const {
  const auto& g = space->mesh().tri(t);
  std::array<double, 2> grad = {0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    const double c = face_value(g.face[static_cast<std::size_t>(a)]);
    grad[0] += c * g.grad_phi[static_cast<std::size_t>(a)][0];
    grad[1] += c * g.grad_phi[static_cast<std::size_t>(a)][1];
  }
  return grad;
}

FEFunction interpolate(const Space& space, const ScalarField& v, int face_degree) {
  const Mesh& m = space.mesh();
  FEFunction fe(space);
  for (int f = 0; f < m.n_faces(); ++f) {
    const int d = space.dof_of_face(f);
    if (d < 0) continue;
    double sum = 0.0;
    for (const auto& q : m.face_rule(f, face_degree)) sum += q.w * v(q.x, q.y);
    fe.coeff[static_cast<std::size_t>(d)] = sum / m.face(f).length;
  }
  return fe;
}

double jump_mean(const FEFunction& fe, int f) {
  const Mesh& m = fe.space->mesh();
  const Face& F = m.face(f);
  const auto mid = m.face_midpoint(f);
  // traces are affine along the face, so the midpoint value is the mean
  const double v0 = fe.eval_on_tri(F.tri[0], mid[0], mid[1]);
  if (F.boundary()) return v0;
  return v0 - fe.eval_on_tri(F.tri[1], mid[0], mid[1]);
}

std::vector<double> trace_values(const FEFunction& fe, int f, int side,
                                 const std::vector<double>& s_params) {
  const Mesh& m = fe.space->mesh();
  const Face& F = m.face(f);
  if (side < 0 || side > 1 || (side == 1 && F.boundary()))
    throw ValidationError("trace_values: invalid side for face");
  const int t = F.tri[static_cast<std::size_t>(side)];
  const auto &a = m.vertex(F.v[0]), &b = m.vertex(F.v[1]);
  std::vector<double> out;
  out.reserve(s_params.size());
  for (double s : s_params)
    out.push_back(fe.eval_on_tri(t, a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])));
  return out;
}

double VertexField::eval_on_tri(int t, double x, double y) const {
  const auto lam = mesh->barycentric(t, x, y);
  const auto& v = mesh->tri(t).v;
  return lam[0] * values[static_cast<std::size_t>(v[0])] +
         lam[1] * values[static_cast<std::size_t>(v[1])] +
         lam[2] * values[static_cast<std::size_t>(v[2])];
}

std::array<double, 2> VertexField::grad_on_tri(int t) const {
  const auto& g = mesh->tri(t);
  std::array<double, 2> grad = {0.0, 0.0};
  for (int a = 0; a < 3; ++a) {
    const double c = values[static_cast<std::size_t>(g.v[static_cast<std::size_t>(a)])];
    grad[0] += c * g.grad_lambda[static_cast<std::size_t>(a)][0];
    grad[1] += c * g.grad_lambda[static_cast<std::size_t>(a)][1];
  }
  return grad;
}

VertexField conforming_part(const FEFunction& fe, const std::set<BoundaryPart>& zero_on) {
  const Mesh& m = fe.space->mesh();
  VertexField out;
  out.mesh = &m;
  out.values.assign(static_cast<std::size_t>(m.n_vertices()), 0.0);
  std::vector<int> card(static_cast<std::size_t>(m.n_vertices()), 0);

  for (int t = 0; t < m.n_triangles(); ++t) {
    const auto& v = m.tri(t).v;
    for (int a = 0; a < 3; ++a) {
      const int vi = v[static_cast<std::size_t>(a)];
      const auto& p = m.vertex(vi);
      out.values[static_cast<std::size_t>(vi)] += fe.eval_on_tri(t, p[0], p[1]);
      ++card[static_cast<std::size_t>(vi)];
    }
  }
  for (int i = 0; i < m.n_vertices(); ++i)
    out.values[static_cast<std::size_t>(i)] /= card[static_cast<std::size_t>(i)];

  // zero on the closure: every endpoint of a face tagged with a zero_on part
  for (const auto& f : m.faces) {
    if (!f.tag || zero_on.count(*f.tag) == 0) continue;
    out.values[static_cast<std::size_t>(f.v[0])] = 0.0;
    out.values[static_cast<std::size_t>(f.v[1])] = 0.0;
  }
  return out;
}

void write_fefunction_csv(const FEFunction& fe, std::ostream& os) {
  const Mesh& m = fe.space->mesh();
  os << "face_index,midpoint_x,midpoint_y,coefficient\n";
  for (int d = 0; d < fe.space->n_dofs(); ++d) {
    const int f = fe.space->face_of_dof(d);
    const auto mid = m.face_midpoint(f);
    os << f << ',' << format_g17(mid[0]) << ',' << format_g17(mid[1]) << ','
       << format_g17(fe.coeff[static_cast<std::size_t>(d)]) << '\n';
  }
}

} // namespace cauchycr
