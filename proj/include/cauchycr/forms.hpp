#ifndef CAUCHYCR_FORMS_HPP
#define CAUCHYCR_FORMS_HPP

#include <array>
#include <optional>

#include "cauchycr/parallel.hpp"
#include "cauchycr/space.hpp"
#include "cauchycr/sparse.hpp"

namespace cauchycr {

/// Dual stabilization operator: GradLS penalizes the broken gradient of the
/// dual variable; JumpPenalty penalizes its face jumps (adjoint consistent).
enum class StabKind { GradLS, JumpPenalty };

/// Boundary-condition imposition: Strong pins face means on the essential
/// parts of V_h/W_h; Weak keeps the unconstrained space and imposes the
/// conditions through consistency terms and penalties.
enum class BcPath { Strong, Weak };

struct StabParams {
  double gamma_v;
  double gamma_w;
  double gamma_bc;

  StabParams(double gv, double gw, double gbc);

  /// Proxy for the inf-sup smallness condition gamma_v*gamma_w <= (C_i c_T)^-2
  /// with the (unknown) constants replaced by 1. Diagnostic only.
  bool smallness_proxy_ok() const { return gamma_v * gamma_w <= 1.0; }
};

struct ProblemData {
  ScalarField f;    // volume source
  ScalarField psi;  // flux datum on GammaC
  ScalarField g;    // Dirichlet datum on GammaD
  std::optional<ScalarField> delta_f;
  std::optional<ScalarField> delta_psi;
};

struct QuadDegrees {
  int face_data = 9; // data terms on faces (psi, g, delta_psi)
  int tri_data = 6;  // data terms on triangles (f, delta_f)
  int face_form = 3; // products of affine traces (penalties, mass, Nitsche)
  int error = 6;     // error/norm quadrature in the analysis module
};

/// Broken stiffness sum_k \int_k grad(trial) . grad(test); rows are test
/// DOFs, columns trial DOFs. Exact (constant gradients).
CsrMatrix assemble_volume_stiffness(const Space& trial, const Space& test,
                                    Exec exec = Exec::Serial);

/// a_h for the chosen path: Strong is the broken stiffness between V_h and
/// W_h; Weak subtracts the boundary consistency terms
/// \int_{F in GammaC'} (grad u . n) w and \int_{F in GammaD} (grad w . n) u
/// and requires both spaces unconstrained. Entry (i,j) = a_h(phi_j, phi_i).
CsrMatrix assemble_a(const Space& space_v, const Space& space_w, BcPath path,
                     const QuadDegrees& quad = {}, Exec exec = Exec::Serial);

/// Primal stabilization: gamma_v h_F^-1 [u][v] over interior and GammaD faces.
CsrMatrix assemble_s_v(const Space& space_v, const StabParams& params,
                       const QuadDegrees& quad = {}, Exec exec = Exec::Serial);

/// Dual stabilization, four variants (kind x path):
///   GradLS strong:      gamma_w * broken stiffness
///   GradLS weak:        gamma_w * broken stiffness + gamma_bc h^-1 mass on GammaC'
///   JumpPenalty strong:  gamma_w h^-1 [z][w] on interior + GammaC' faces
///   JumpPenalty weak:    gamma_w h^-1 [z][w] interior + gamma_bc h^-1 z w on GammaC'
CsrMatrix assemble_s_w(const Space& space_w, const StabParams& params, StabKind kind,
                       BcPath path, const QuadDegrees& quad = {}, Exec exec = Exec::Serial);

/// l(w) = (f, w) + (psi, w)_{GammaC}; with perturbed=true adds
/// (delta_f, w) + (delta_psi, w)_{GammaC} and requires the delta callables.
/// For the weak path the Nitsche data term -sum_{F in GammaD} \int (grad w . n) g
/// is included.
std::vector<double> assemble_load(const Space& space_w, const ProblemData& data,
                                  const QuadDegrees& quad, BcPath path, bool perturbed,
                                  Exec exec = Exec::Serial);

/// Right side of the v-equation: sum_{F in GammaD} gamma_v h_F^-1 \int g v for
/// the weak path; zero for the strong path (homogeneous essential data).
std::vector<double> assemble_dirichlet_rhs(const Space& space_v, const ProblemData& data,
                                           const StabParams& params, const QuadDegrees& quad,
                                           BcPath path, Exec exec = Exec::Serial);

/// Local face penalty block factor * \int_F J_a J_b with J the jump of the
/// broken basis [tri0: 0..2 | tri1: 3..5] (single-sided trace on boundary
/// faces). This is the kernel behind s_V/s_W; exposed so tests can drive it
/// with genuinely discontinuous per-element data that no valid FEFunction
/// can represent.
std::array<std::array<double, 6>, 6> face_jump_block(const Mesh& mesh, int f, double factor,
                                                     int degree);

} // namespace cauchycr

#endif
