#include "cauchycr/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace cauchycr {

SubdomainSpec::SubdomainSpec(double z) : zeta(z) {
  if (!(z > 0.0) || z > 1.0) throw ValidationError("SubdomainSpec: zeta must lie in (0, 1]");
}

namespace {

using Poly = std::vector<std::array<double, 2>>;

// triangle ∩ {y <= c}, Sutherland-Hodgman against a single plane
Poly clip_below(const std::array<std::array<double, 2>, 3>& tri, double c) {
  Poly out;
  for (int i = 0; i < 3; ++i) {
    const auto& p = tri[static_cast<std::size_t>(i)];
    const auto& q = tri[static_cast<std::size_t>((i + 1) % 3)];
    const bool pin = p[1] <= c, qin = q[1] <= c;
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = (c - p[1]) / (q[1] - p[1]);
      out.push_back({p[0] + t * (q[0] - p[0]), c});
    }
  }
  return out;
}

// integral of fn over tri(t) ∩ {y <= cut}; cut >= y_max integrates the element
template <class Fn>
double integrate_clipped(const Mesh& m, int t, double cut, int degree, Fn&& fn) {
  const auto& g = m.tri(t);
  const std::array<std::array<double, 2>, 3> tri = {m.vertex(g.v[0]), m.vertex(g.v[1]),
                                                    m.vertex(g.v[2])};
  const bool whole = tri[0][1] <= cut && tri[1][1] <= cut && tri[2][1] <= cut;
  double s = 0.0;
  if (whole) {
    for (const auto& q : m.tri_rule(t, degree)) s += q.w * fn(q.x, q.y);
    return s;
  }
  const Poly poly = clip_below(tri, cut);
  if (poly.size() < 3) return 0.0;
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const double a2 = (poly[k][0] - poly[0][0]) * (poly[k + 1][1] - poly[0][1]) -
                      (poly[k + 1][0] - poly[0][0]) * (poly[k][1] - poly[0][1]);
    if (std::abs(a2) < 1e-300) continue;
    for (const auto& q : triangle_quadrature(poly[0], poly[k], poly[k + 1], degree))
      s += q.w * fn(q.x, q.y);
  }
  return s;
}

} // namespace

double error_l2_relative(const FEFunction& u_h, const ScalarField& u_exact,
                         const SubdomainSpec& sub, int degree, Exec exec) {
  const Mesh& m = u_h.space->mesh();
  const double cut = sub.zeta * m.rect.y_max;
  const auto n = static_cast<std::size_t>(m.n_triangles());
  const double num2 = deterministic_sum(n, exec, [&](std::size_t t) {
    return integrate_clipped(m, static_cast<int>(t), cut, degree, [&](double x, double y) {
      const double d = u_exact(x, y) - u_h.eval_on_tri(static_cast<int>(t), x, y);
      return d * d;
    });
  });
  const double den2 = deterministic_sum(n, exec, [&](std::size_t t) {
    return integrate_clipped(m, static_cast<int>(t), cut, degree, [&](double x, double y) {
      const double v = u_exact(x, y);
      return v * v;
    });
  });
  if (!(den2 > 0.0))
    throw ValidationError("error_l2_relative: exact solution vanishes on the subdomain");
  return std::sqrt(num2 / den2);
}

double l2_error(const FEFunction& u_h, const ScalarField& u_exact, int degree, Exec exec) {
  const Mesh& m = u_h.space->mesh();
  const double s =
      deterministic_sum(static_cast<std::size_t>(m.n_triangles()), exec, [&](std::size_t t) {
        double acc = 0.0;
        for (const auto& q : m.tri_rule(static_cast<int>(t), degree)) {
          const double d = u_exact(q.x, q.y) - u_h.eval_on_tri(static_cast<int>(t), q.x, q.y);
          acc += q.w * d * d;
        }
        return acc;
      });
  return std::sqrt(s);
}

double h1_semi_error(const FEFunction& u_h, const GradField& grad_exact, int degree, Exec exec) {
  const Mesh& m = u_h.space->mesh();
  const double s =
      deterministic_sum(static_cast<std::size_t>(m.n_triangles()), exec, [&](std::size_t t) {
        const auto gh = u_h.grad_on_tri(static_cast<int>(t));
        double acc = 0.0;
        for (const auto& q : m.tri_rule(static_cast<int>(t), degree)) {
          const auto ge = grad_exact(q.x, q.y);
          const double dx = ge[0] - gh[0], dy = ge[1] - gh[1];
          acc += q.w * (dx * dx + dy * dy);
        }
        return acc;
      });
  return std::sqrt(s);
}

double fe_l2_norm(const FEFunction& fe, int degree, Exec exec) {
  const Mesh& m = fe.space->mesh();
  const double s =
      deterministic_sum(static_cast<std::size_t>(m.n_triangles()), exec, [&](std::size_t t) {
        double acc = 0.0;
        for (const auto& q : m.tri_rule(static_cast<int>(t), degree)) {
          const double v = fe.eval_on_tri(static_cast<int>(t), q.x, q.y);
          acc += q.w * v * v;
        }
        return acc;
      });
  return std::sqrt(s);
}

double fe_h1_seminorm(const FEFunction& fe, Exec exec) {
  const Mesh& m = fe.space->mesh();
  const double s =
      deterministic_sum(static_cast<std::size_t>(m.n_triangles()), exec, [&](std::size_t t) {
        const auto g = fe.grad_on_tri(static_cast<int>(t));
        return m.tri(static_cast<int>(t)).area * (g[0] * g[0] + g[1] * g[1]);
      });
  return std::sqrt(s);
}

double fe_h1_norm(const FEFunction& fe, int degree, Exec exec) {
  const double l2 = fe_l2_norm(fe, degree, exec);
  const double h1 = fe_h1_seminorm(fe, exec);
  return std::sqrt(l2 * l2 + h1 * h1);
}

double l2_diff(const FEFunction& fe, const VertexField& vf, int degree, Exec exec) {
  const Mesh& m = fe.space->mesh();
  const double s =
      deterministic_sum(static_cast<std::size_t>(m.n_triangles()), exec, [&](std::size_t t) {
        double acc = 0.0;
        for (const auto& q : m.tri_rule(static_cast<int>(t), degree)) {
          const double d = fe.eval_on_tri(static_cast<int>(t), q.x, q.y) -
                           vf.eval_on_tri(static_cast<int>(t), q.x, q.y);
          acc += q.w * d * d;
        }
        return acc;
      });
  return std::sqrt(s);
}

double exact_energy(int n, double a_n) {
  if (n < 1) throw ValidationError("exact_energy: n must be >= 1");
  return std::abs(a_n) * std::sqrt(M_PI / 2.0 * std::sinh(2.0 * n) / (2.0 * n));
}

double stab_seminorm(const CsrMatrix& s, const std::vector<double>& c) {
  const double q = s.bilinear(c, c);
  return std::sqrt(std::max(0.0, q));
}

double weighted_grad_norm(const FEFunction& fe, Exec exec) {
  const Mesh& m = fe.space->mesh();
  const double s =
      deterministic_sum(static_cast<std::size_t>(m.n_triangles()), exec, [&](std::size_t t) {
        const auto& g = m.tri(static_cast<int>(t));
        const auto gr = fe.grad_on_tri(static_cast<int>(t));
        return g.diameter * g.diameter * g.area * (gr[0] * gr[0] + gr[1] * gr[1]);
      });
  return std::sqrt(s);
}

double grad_jump_norm(const FEFunction& fe, Exec exec) {
  const Mesh& m = fe.space->mesh();
  const double s =
      deterministic_sum(static_cast<std::size_t>(m.n_faces()), exec, [&](std::size_t fi) {
        const Face& f = m.face(static_cast<int>(fi));
        if (f.boundary() && !(f.tag && in_gamma_c(*f.tag))) return 0.0;
        const auto g0 = fe.grad_on_tri(f.tri[0]);
        double jump = g0[0] * f.normal[0] + g0[1] * f.normal[1];
        if (!f.boundary()) {
          const auto g1 = fe.grad_on_tri(f.tri[1]);
          jump -= g1[0] * f.normal[0] + g1[1] * f.normal[1];
        }
        return f.length * (f.length * jump * jump); // h_F * ||[..]||_F^2, constant jump
      });
  return std::sqrt(s);
}

double triple_norm(const FEFunction& u_part, const FEFunction& z_part, const StabParams& params,
                   StabKind kind, BcPath path, Exec exec) {
  const CsrMatrix s_v = assemble_s_v(*u_part.space, params, {}, exec);
  const CsrMatrix s_w = assemble_s_w(*z_part.space, params, kind, path, {}, exec);
  const double sg = std::sqrt(params.gamma_v);
  return sg * weighted_grad_norm(u_part, exec) + sg * grad_jump_norm(u_part, exec) +
         stab_seminorm(s_v, u_part.coeff) + stab_seminorm(s_w, z_part.coeff);
}

double data_oscillation(const Mesh& mesh, const ScalarField& psi, int degree, Exec exec) {
  const double s =
      deterministic_sum(static_cast<std::size_t>(mesh.n_faces()), exec, [&](std::size_t fi) {
        const Face& f = mesh.face(static_cast<int>(fi));
        if (!f.boundary() || !f.tag || !in_gamma_c(*f.tag)) return 0.0;
        double m0 = 0.0, m2 = 0.0;
        for (const auto& q : mesh.face_rule(static_cast<int>(fi), degree)) {
          const double v = psi(q.x, q.y);
          m0 += q.w * v;
          m2 += q.w * v * v;
        }
        const double mean = m0 / f.length;
        return f.length * std::max(0.0, m2 - f.length * mean * mean);
      });
  return std::sqrt(s);
}

namespace {

double field_l2(const Mesh& m, const ScalarField& f, int degree, Exec exec) {
  return std::sqrt(
      deterministic_sum(static_cast<std::size_t>(m.n_triangles()), exec, [&](std::size_t t) {
        double acc = 0.0;
        for (const auto& q : m.tri_rule(static_cast<int>(t), degree)) {
          const double v = f(q.x, q.y);
          acc += q.w * v * v;
        }
        return acc;
      }));
}

} // namespace

double eta(const FEFunction& u_h, const FEFunction& z_h, const ProblemData& data,
           const StabParams& params, StabKind kind, BcPath path, const QuadDegrees& quad,
           Exec exec) {
  const Mesh& m = u_h.space->mesh();
  const double f_l2 = field_l2(m, data.f, quad.tri_data, exec);
  const CsrMatrix s_v = assemble_s_v(*u_h.space, params, quad, exec);
  const CsrMatrix s_w = assemble_s_w(*z_h.space, params, kind, path, quad, exec);
  return m.h_max * f_l2 + stab_seminorm(s_v, u_h.coeff) / std::sqrt(params.gamma_v) +
         std::sqrt(params.gamma_w) * stab_seminorm(s_w, z_h.coeff) +
         data_oscillation(m, data.psi, quad.face_data, exec);
}

double eta_delta(const FEFunction& u_h, const FEFunction& z_h, const ProblemData& data,
                 const StabParams& params, StabKind kind, BcPath path, double delta_norm,
                 const QuadDegrees& quad, Exec exec) {
  const Mesh& m = u_h.space->mesh();
  const double f_l2 = field_l2(m, data.f, quad.tri_data, exec);
  const CsrMatrix s_v = assemble_s_v(*u_h.space, params, quad, exec);
  const CsrMatrix s_w = assemble_s_w(*z_h.space, params, kind, path, quad, exec);
  return m.h_max * f_l2 + stab_seminorm(s_v, u_h.coeff) + stab_seminorm(s_w, z_h.coeff) +
         data_oscillation(m, data.psi, quad.face_data, exec) + delta_norm;
}

double perturbation_norm(const std::optional<ScalarField>& delta_f,
                         const std::optional<ScalarField>& delta_psi, const Mesh& mesh,
                         const QuadDegrees& quad, Exec exec) {
  double out = 0.0;
  if (delta_f) {
    const double df = field_l2(mesh, *delta_f, quad.tri_data, exec);
    out += (mesh.h_max + 1.0) * df; // h||df|| + ||df||_W' surrogate
  }
  if (delta_psi) {
    const double dp = std::sqrt(deterministic_sum(
        static_cast<std::size_t>(mesh.n_faces()), exec, [&](std::size_t fi) {
          const Face& f = mesh.face(static_cast<int>(fi));
          if (!f.boundary() || !f.tag || !in_gamma_c(*f.tag)) return 0.0;
          double acc = 0.0;
          for (const auto& q : mesh.face_rule(static_cast<int>(fi), quad.face_data)) {
            const double v = (*delta_psi)(q.x, q.y);
            acc += q.w * v * v;
          }
          return acc;
        }));
    out += (std::sqrt(mesh.h_max) + 1.0) * dp; // h^(1/2)||dpsi|| + H^(-1/2) surrogate
  }
  return out;
}

} // namespace cauchycr
