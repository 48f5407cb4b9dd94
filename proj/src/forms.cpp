#include "cauchycr/forms.hpp"

#include <algorithm>
#include <cmath>

namespace cauchycr {

StabParams::StabParams(double gv, double gw, double gbc) : gamma_v(gv), gamma_w(gw), gamma_bc(gbc) {
  if (!(gv > 0.0) || !(gw > 0.0) || !(gbc > 0.0))
    throw ValidationError("StabParams: stabilization parameters must be strictly positive");
}

namespace {

struct VecEntry {
  int idx;
  double val;
};

// Canonical accumulation: identical bytes for any generation order.
std::vector<double> gather(int n, std::vector<VecEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const VecEntry& a, const VecEntry& b) {
    if (a.idx != b.idx) return a.idx < b.idx;
    return a.val < b.val;
  });
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const auto& e : entries) out[static_cast<std::size_t>(e.idx)] += e.val;
  return out;
}

// Runs body(item, sink) for item in [0, n), collecting sink payloads from all
// threads. Ordering of the collected vector is irrelevant downstream (both
// gather and CsrMatrix::from_triplets canonicalize).
template <class T, class Body>
std::vector<T> collect(std::size_t n, Exec exec, Body&& body) {
  std::vector<T> out;
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<T> local;
#pragma omp for schedule(static) nowait
      for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i), local);
#pragma omp critical(cauchycr_collect)
      out.insert(out.end(), local.begin(), local.end());
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i, out);
  }
  return out;
}

void require_same_mesh(const Space& a, const Space& b) {
  if (!a.same_mesh(b)) throw ValidationError("forms: spaces live on different meshes");
}

// Trace of local basis `a` of triangle `t` at a point on a face.
double trace_phi(const Mesh& m, int t, int a, double x, double y) {
  const auto lam = m.barycentric(t, x, y);
  return 1.0 - 2.0 * lam[static_cast<std::size_t>(a)];
}

enum class FaceSet { InteriorAndGammaD, InteriorOnly, InteriorAndGammaCPrime };

bool face_in_set(const Face& f, FaceSet set) {
  if (!f.boundary()) return true;
  switch (set) {
    case FaceSet::InteriorOnly: return false;
    case FaceSet::InteriorAndGammaD: return f.tag && in_gamma_d(*f.tag);
    case FaceSet::InteriorAndGammaCPrime: return f.tag && in_gamma_c_prime(*f.tag);
  }
  return false;
}

// gamma h_F^-1 [u][v] over the given face set, identical trial/test space.
CsrMatrix assemble_jump_penalty(const Space& space, double gamma, FaceSet set,
                                const QuadDegrees& quad, Exec exec) {
  const Mesh& m = space.mesh();
  auto trips = collect<Triplet>(
      static_cast<std::size_t>(m.n_faces()), exec, [&](std::size_t fi, std::vector<Triplet>& sink) {
        const Face& f = m.face(static_cast<int>(fi));
        if (!face_in_set(f, set)) return;
        const auto block =
            face_jump_block(m, static_cast<int>(fi), gamma / f.length, quad.face_form);
        const int nloc = f.boundary() ? 3 : 6;
        std::array<int, 6> dof{};
        for (int k = 0; k < nloc; ++k) {
          const int t = f.tri[static_cast<std::size_t>(k / 3)];
          const int gf = m.tri(t).face[static_cast<std::size_t>(k % 3)];
          dof[static_cast<std::size_t>(k)] = space.dof_of_face(gf);
        }
        for (int a = 0; a < nloc; ++a) {
          if (dof[static_cast<std::size_t>(a)] < 0) continue;
          for (int b = 0; b < nloc; ++b) {
            if (dof[static_cast<std::size_t>(b)] < 0) continue;
            sink.push_back({dof[static_cast<std::size_t>(a)], dof[static_cast<std::size_t>(b)],
                            block[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]});
          }
        }
      });
  return CsrMatrix::from_triplets(space.n_dofs(), space.n_dofs(), std::move(trips));
}

// gamma h_F^-1 u v over boundary faces of the given part set (single-sided).
CsrMatrix assemble_boundary_mass(const Space& space, double gamma,
                                 bool (*part_pred)(BoundaryPart), const QuadDegrees& quad,
                                 Exec exec) {
  const Mesh& m = space.mesh();
  auto trips = collect<Triplet>(
      static_cast<std::size_t>(m.n_faces()), exec, [&](std::size_t fi, std::vector<Triplet>& sink) {
        const Face& f = m.face(static_cast<int>(fi));
        if (!f.boundary() || !f.tag || !part_pred(*f.tag)) return;
        const int t = f.tri[0];
        const auto rule = m.face_rule(static_cast<int>(fi), quad.face_form);
        const double w_fac = gamma / f.length;
        std::array<int, 3> dof{};
        for (int a = 0; a < 3; ++a)
          dof[static_cast<std::size_t>(a)] = space.dof_of_face(m.tri(t).face[static_cast<std::size_t>(a)]);
        for (const auto& q : rule) {
          std::array<double, 3> tr{};
          for (int a = 0; a < 3; ++a) tr[static_cast<std::size_t>(a)] = trace_phi(m, t, a, q.x, q.y);
          for (int a = 0; a < 3; ++a) {
            if (dof[static_cast<std::size_t>(a)] < 0) continue;
            for (int b = 0; b < 3; ++b) {
              if (dof[static_cast<std::size_t>(b)] < 0) continue;
              sink.push_back({dof[static_cast<std::size_t>(a)], dof[static_cast<std::size_t>(b)],
                              w_fac * q.w * tr[static_cast<std::size_t>(a)] * tr[static_cast<std::size_t>(b)]});
            }
          }
        }
      });
  return CsrMatrix::from_triplets(space.n_dofs(), space.n_dofs(), std::move(trips));
}

} // namespace

std::array<std::array<double, 6>, 6> face_jump_block(const Mesh& m, int f, double factor,
                                                     int degree) {
  const Face& F = m.face(f);
  const int nloc = F.boundary() ? 3 : 6;
  std::array<std::array<double, 6>, 6> block{};
  const auto rule = m.face_rule(f, degree);
  for (const auto& q : rule) {
    std::array<double, 6> J{};
    for (int a = 0; a < 3; ++a) J[static_cast<std::size_t>(a)] = trace_phi(m, F.tri[0], a, q.x, q.y);
    if (!F.boundary())
      for (int a = 0; a < 3; ++a)
        J[static_cast<std::size_t>(3 + a)] = -trace_phi(m, F.tri[1], a, q.x, q.y);
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b)
        block[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
            factor * q.w * J[static_cast<std::size_t>(a)] * J[static_cast<std::size_t>(b)];
  }
  return block;
}

CsrMatrix assemble_volume_stiffness(const Space& trial, const Space& test, Exec exec) {
  require_same_mesh(trial, test);
  const Mesh& m = trial.mesh();
  auto trips = collect<Triplet>(
      static_cast<std::size_t>(m.n_triangles()), exec,
      [&](std::size_t ti, std::vector<Triplet>& sink) {
        const TriGeom& g = m.tri(static_cast<int>(ti));
        for (int a = 0; a < 3; ++a) {
          const int i = test.dof_of_face(g.face[static_cast<std::size_t>(a)]);
          if (i < 0) continue;
          for (int b = 0; b < 3; ++b) {
            const int j = trial.dof_of_face(g.face[static_cast<std::size_t>(b)]);
            if (j < 0) continue;
            const double k = g.area * (g.grad_phi[static_cast<std::size_t>(a)][0] *
                                           g.grad_phi[static_cast<std::size_t>(b)][0] +
                                       g.grad_phi[static_cast<std::size_t>(a)][1] *
                                           g.grad_phi[static_cast<std::size_t>(b)][1]);
            sink.push_back({i, j, k});
          }
        }
      });
  return CsrMatrix::from_triplets(test.n_dofs(), trial.n_dofs(), std::move(trips));
}

CsrMatrix assemble_a(const Space& space_v, const Space& space_w, BcPath path,
                     const QuadDegrees& quad, Exec exec) {
  require_same_mesh(space_v, space_w);
  if (path == BcPath::Strong) return assemble_volume_stiffness(space_v, space_w, exec);

  if (!space_v.essential_part().empty() || !space_w.essential_part().empty())
    throw ValidationError("assemble_a: weak path requires unconstrained spaces");
  const Mesh& m = space_v.mesh();

  CsrMatrix vol = assemble_volume_stiffness(space_v, space_w, exec);
  auto trips = collect<Triplet>(
      static_cast<std::size_t>(m.n_faces()), exec, [&](std::size_t fi, std::vector<Triplet>& sink) {
        const Face& f = m.face(static_cast<int>(fi));
        if (!f.boundary() || !f.tag) return;
        const int t = f.tri[0];
        const TriGeom& g = m.tri(t);
        const auto rule = m.face_rule(static_cast<int>(fi), quad.face_form);
        std::array<int, 3> dv{}, dw{};
        std::array<double, 3> dn{};
        for (int a = 0; a < 3; ++a) {
          dv[static_cast<std::size_t>(a)] = space_v.dof_of_face(g.face[static_cast<std::size_t>(a)]);
          dw[static_cast<std::size_t>(a)] = space_w.dof_of_face(g.face[static_cast<std::size_t>(a)]);
          dn[static_cast<std::size_t>(a)] =
              g.grad_phi[static_cast<std::size_t>(a)][0] * f.normal[0] +
              g.grad_phi[static_cast<std::size_t>(a)][1] * f.normal[1];
        }
        for (const auto& q : rule) {
          std::array<double, 3> tr{};
          for (int a = 0; a < 3; ++a) tr[static_cast<std::size_t>(a)] = trace_phi(m, t, a, q.x, q.y);
          if (in_gamma_c_prime(*f.tag)) {
            // - (grad u . n) w
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b)
                sink.push_back({dw[static_cast<std::size_t>(a)], dv[static_cast<std::size_t>(b)],
                                -q.w * dn[static_cast<std::size_t>(b)] * tr[static_cast<std::size_t>(a)]});
          }
          if (in_gamma_d(*f.tag)) {
            // - (grad w . n) u
            for (int a = 0; a < 3; ++a)
              for (int b = 0; b < 3; ++b)
                sink.push_back({dw[static_cast<std::size_t>(a)], dv[static_cast<std::size_t>(b)],
                                -q.w * dn[static_cast<std::size_t>(a)] * tr[static_cast<std::size_t>(b)]});
          }
        }
      });
  for (int r = 0; r < vol.rows(); ++r)
    for (int k = vol.row_ptr()[static_cast<std::size_t>(r)];
         k < vol.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k)
      trips.push_back({r, vol.col_idx()[static_cast<std::size_t>(k)],
                       vol.values()[static_cast<std::size_t>(k)]});
  return CsrMatrix::from_triplets(space_w.n_dofs(), space_v.n_dofs(), std::move(trips));
}

CsrMatrix assemble_s_v(const Space& space_v, const StabParams& params, const QuadDegrees& quad,
                       Exec exec) {
  return assemble_jump_penalty(space_v, params.gamma_v, FaceSet::InteriorAndGammaD, quad, exec);
}

CsrMatrix assemble_s_w(const Space& space_w, const StabParams& params, StabKind kind, BcPath path,
                       const QuadDegrees& quad, Exec exec) {
  if (kind == StabKind::GradLS) {
    CsrMatrix vol = assemble_volume_stiffness(space_w, space_w, exec);
    std::vector<Triplet> trips;
    trips.reserve(vol.nnz());
    for (int r = 0; r < vol.rows(); ++r)
      for (int k = vol.row_ptr()[static_cast<std::size_t>(r)];
           k < vol.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k)
        trips.push_back({r, vol.col_idx()[static_cast<std::size_t>(k)],
                         params.gamma_w * vol.values()[static_cast<std::size_t>(k)]});
    CsrMatrix scaled =
        CsrMatrix::from_triplets(space_w.n_dofs(), space_w.n_dofs(), std::move(trips));
    if (path == BcPath::Strong) return scaled;
    CsrMatrix bc = assemble_boundary_mass(space_w, params.gamma_bc, in_gamma_c_prime, quad, exec);
    std::vector<Triplet> merged;
    merged.reserve(scaled.nnz() + bc.nnz());
    for (const CsrMatrix* mm : {&scaled, &bc})
      for (int r = 0; r < mm->rows(); ++r)
        for (int k = mm->row_ptr()[static_cast<std::size_t>(r)];
             k < mm->row_ptr()[static_cast<std::size_t>(r) + 1]; ++k)
          merged.push_back({r, mm->col_idx()[static_cast<std::size_t>(k)],
                            mm->values()[static_cast<std::size_t>(k)]});
    return CsrMatrix::from_triplets(space_w.n_dofs(), space_w.n_dofs(), std::move(merged));
  }

  // JumpPenalty
  if (path == BcPath::Strong)
    return assemble_jump_penalty(space_w, params.gamma_w, FaceSet::InteriorAndGammaCPrime, quad,
                                 exec);
  CsrMatrix interior =
      assemble_jump_penalty(space_w, params.gamma_w, FaceSet::InteriorOnly, quad, exec);
  CsrMatrix bc = assemble_boundary_mass(space_w, params.gamma_bc, in_gamma_c_prime, quad, exec);
  std::vector<Triplet> merged;
  merged.reserve(interior.nnz() + bc.nnz());
  for (const CsrMatrix* mm : {&interior, &bc})
    for (int r = 0; r < mm->rows(); ++r)
      for (int k = mm->row_ptr()[static_cast<std::size_t>(r)];
           k < mm->row_ptr()[static_cast<std::size_t>(r) + 1]; ++k)
        merged.push_back({r, mm->col_idx()[static_cast<std::size_t>(k)],
                          mm->values()[static_cast<std::size_t>(k)]});
  return CsrMatrix::from_triplets(space_w.n_dofs(), space_w.n_dofs(), std::move(merged));
}

std::vector<double> assemble_load(const Space& space_w, const ProblemData& data,
                                  const QuadDegrees& quad, BcPath path, bool perturbed,
                                  Exec exec) {
  if (perturbed && (!data.delta_f && !data.delta_psi))
    throw ValidationError("assemble_load: perturbed load requested without delta data");
  const Mesh& m = space_w.mesh();

  auto vol_entries = collect<VecEntry>(
      static_cast<std::size_t>(m.n_triangles()), exec,
      [&](std::size_t ti, std::vector<VecEntry>& sink) {
        const TriGeom& g = m.tri(static_cast<int>(ti));
        const auto rule = m.tri_rule(static_cast<int>(ti), quad.tri_data);
        for (const auto& q : rule) {
          double fv = data.f(q.x, q.y);
          if (perturbed && data.delta_f) fv += (*data.delta_f)(q.x, q.y);
          if (fv == 0.0) continue;
          const auto lam = m.barycentric(static_cast<int>(ti), q.x, q.y);
          for (int a = 0; a < 3; ++a) {
            const int i = space_w.dof_of_face(g.face[static_cast<std::size_t>(a)]);
            if (i < 0) continue;
            sink.push_back({i, q.w * fv * (1.0 - 2.0 * lam[static_cast<std::size_t>(a)])});
          }
        }
      });

  auto face_entries = collect<VecEntry>(
      static_cast<std::size_t>(m.n_faces()), exec, [&](std::size_t fi, std::vector<VecEntry>& sink) {
        const Face& f = m.face(static_cast<int>(fi));
        if (!f.boundary() || !f.tag) return;
        const int t = f.tri[0];
        const TriGeom& g = m.tri(t);
        std::array<int, 3> dw{};
        for (int a = 0; a < 3; ++a)
          dw[static_cast<std::size_t>(a)] = space_w.dof_of_face(g.face[static_cast<std::size_t>(a)]);

        if (in_gamma_c(*f.tag)) {
          for (const auto& q : m.face_rule(static_cast<int>(fi), quad.face_data)) {
            double pv = data.psi(q.x, q.y);
            if (perturbed && data.delta_psi) pv += (*data.delta_psi)(q.x, q.y);
            if (pv == 0.0) continue;
            for (int a = 0; a < 3; ++a) {
              if (dw[static_cast<std::size_t>(a)] < 0) continue;
              sink.push_back({dw[static_cast<std::size_t>(a)],
                              q.w * pv * trace_phi(m, t, a, q.x, q.y)});
            }
          }
        }
        if (path == BcPath::Weak && in_gamma_d(*f.tag)) {
          // Nitsche data term: - (grad w . n) g
          for (const auto& q : m.face_rule(static_cast<int>(fi), quad.face_data)) {
            const double gv = data.g(q.x, q.y);
            if (gv == 0.0) continue;
            for (int a = 0; a < 3; ++a) {
              if (dw[static_cast<std::size_t>(a)] < 0) continue;
              const double dn = g.grad_phi[static_cast<std::size_t>(a)][0] * f.normal[0] +
                                g.grad_phi[static_cast<std::size_t>(a)][1] * f.normal[1];
              sink.push_back({dw[static_cast<std::size_t>(a)], -q.w * gv * dn});
            }
          }
        }
      });

  vol_entries.insert(vol_entries.end(), face_entries.begin(), face_entries.end());
  return gather(space_w.n_dofs(), std::move(vol_entries));
}

std::vector<double> assemble_dirichlet_rhs(const Space& space_v, const ProblemData& data,
                                           const StabParams& params, const QuadDegrees& quad,
                                           BcPath path, Exec exec) {
  if (path == BcPath::Strong)
    return std::vector<double>(static_cast<std::size_t>(space_v.n_dofs()), 0.0);
  const Mesh& m = space_v.mesh();
  auto entries = collect<VecEntry>(
      static_cast<std::size_t>(m.n_faces()), exec, [&](std::size_t fi, std::vector<VecEntry>& sink) {
        const Face& f = m.face(static_cast<int>(fi));
        if (!f.boundary() || !f.tag || !in_gamma_d(*f.tag)) return;
        const int t = f.tri[0];
        const TriGeom& g = m.tri(t);
        const double fac = params.gamma_v / f.length;
        for (const auto& q : m.face_rule(static_cast<int>(fi), quad.face_data)) {
          const double gv = data.g(q.x, q.y);
          if (gv == 0.0) continue;
          for (int a = 0; a < 3; ++a) {
            const int i = space_v.dof_of_face(g.face[static_cast<std::size_t>(a)]);
            if (i < 0) continue;
            sink.push_back({i, fac * q.w * gv * trace_phi(m, t, a, q.x, q.y)});
          }
        }
      });
  return gather(space_v.n_dofs(), std::move(entries));
}

} // namespace cauchycr
