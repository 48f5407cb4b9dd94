#ifndef CAUCHYCR_ANALYSIS_HPP
#define CAUCHYCR_ANALYSIS_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cauchycr/forms.hpp"
#include "cauchycr/space.hpp"

namespace cauchycr {

/// Gradient field R^2 -> R^2 (exact-solution gradients).
using GradField = std::function<std::array<double, 2>(double, double)>;

/// Subdomain (0, x_max) x (0, zeta*y_max).
struct SubdomainSpec {
  double zeta;
  explicit SubdomainSpec(double z);
};

/// Norms, errors and indicator values for one solved run.
struct ErrorReport {
  std::vector<std::pair<double, double>> rel_l2; // (zeta, relative L2 error), sorted
  double h1_semi_error = 0.0;    // ||grad(u - u_h)||_h over Omega
  double broken_h1_error = 0.0;  // (||u - u_h||^2 + ||grad(u - u_h)||_h^2)^(1/2)
  double s_v_seminorm = 0.0;     // |u_h|_{s_V}
  double s_w_norm = 0.0;         // ||z_h||_{s_W}
  double triple_norm = 0.0;      // |||(r_h u - u_h, z_h)|||
  double hf_term = 0.0;          // h_max ||f||_Omega
  double data_osc = 0.0;         // (sum_F h_F inf_a ||psi - a||_F^2)^(1/2) over GammaC
  double eta = 0.0;
  std::optional<double> eta_delta;
  std::optional<double> perturbation_norm;
  double exact_h1_semi = 0.0;    // E
};

/// Relative L2 error ||u - u_h|| / ||u|| over Omega_zeta. Elements crossing
/// the line y = zeta*y_max are clipped exactly, so jittered interiors are
/// integrated correctly. Throws on a vanishing denominator.
double error_l2_relative(const FEFunction& u_h, const ScalarField& u_exact,
                         const SubdomainSpec& sub, int degree = 6, Exec exec = Exec::Serial);

/// ||u - u_h|| over Omega (broken L2).
double l2_error(const FEFunction& u_h, const ScalarField& u_exact, int degree = 6,
                Exec exec = Exec::Serial);
/// ||grad(u) - grad(u_h)||_h over Omega.
double h1_semi_error(const FEFunction& u_h, const GradField& grad_exact, int degree = 6,
                     Exec exec = Exec::Serial);

/// Broken norms of discrete fields (property tests, conforming-part bounds).
double fe_l2_norm(const FEFunction& fe, int degree = 6, Exec exec = Exec::Serial);
double fe_h1_seminorm(const FEFunction& fe, Exec exec = Exec::Serial);
double fe_h1_norm(const FEFunction& fe, int degree = 6, Exec exec = Exec::Serial);
/// ||fe - vf|| over Omega.
double l2_diff(const FEFunction& fe, const VertexField& vf, int degree = 6,
               Exec exec = Exec::Serial);

/// |u_n|_{H1(Omega)} for the Hadamard solution u_n = A n^-1 sin(nx) sinh(ny)
/// on (0,pi)x(0,1): A * sqrt(pi/2 * sinh(2n)/(2n)).
double exact_energy(int n, double a_n);

/// sqrt(c^T S c) with S one of the stabilization matrices.
double stab_seminorm(const CsrMatrix& s, const std::vector<double>& c);

/// ||h grad v||_h with the per-element diameter as weight.
double weighted_grad_norm(const FEFunction& fe, Exec exec = Exec::Serial);
/// (sum_{F in F_i + F_GammaC} h_F ||[n_F . grad v]||_F^2)^(1/2).
double grad_jump_norm(const FEFunction& fe, Exec exec = Exec::Serial);

/// Mesh-dependent norm gamma_V^(1/2) ||h grad v||_h + gamma_V^(1/2) * grad
/// jump + |v|_{s_V}, composed with ||z||_{s_W} of the given variant.
double triple_norm(const FEFunction& u_part, const FEFunction& z_part, const StabParams& params,
                   StabKind kind, BcPath path = BcPath::Strong, Exec exec = Exec::Serial);

/// Data oscillation of psi over GammaC: the optimal constant per face is the
/// face mean. Returns the square-rooted h_F-weighted sum.
double data_oscillation(const Mesh& mesh, const ScalarField& psi, int degree = 9,
                        Exec exec = Exec::Serial);

/// A posteriori indicator (C = 1):
///   eta = h||f|| + gamma_V^(-1/2)|u_h|_{s_V} + gamma_W^(1/2)||z_h||_{s_W} + osc.
double eta(const FEFunction& u_h, const FEFunction& z_h, const ProblemData& data,
           const StabParams& params, StabKind kind, BcPath path, const QuadDegrees& quad = {},
           Exec exec = Exec::Serial);

/// Perturbed-data indicator (C = 1), unweighted seminorm combination:
///   eta_delta = h||f|| + |u_h|_{s_V} + ||z_h||_{s_W} + osc + delta_norm.
double eta_delta(const FEFunction& u_h, const FEFunction& z_h, const ProblemData& data,
                 const StabParams& params, StabKind kind, BcPath path, double delta_norm,
                 const QuadDegrees& quad = {}, Exec exec = Exec::Serial);

/// h-weighted dual norm of the data perturbation,
///   h||df|| + ||df||_W' + h^(1/2)||dpsi||_GammaC + ||dpsi||_H^(-1/2),
/// with the dual norms replaced by their L2 upper-bound surrogates.
double perturbation_norm(const std::optional<ScalarField>& delta_f,
                         const std::optional<ScalarField>& delta_psi, const Mesh& mesh,
                         const QuadDegrees& quad = {}, Exec exec = Exec::Serial);

} // namespace cauchycr

#endif
