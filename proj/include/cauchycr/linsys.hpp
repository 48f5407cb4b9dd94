#ifndef CAUCHYCR_LINSYS_HPP
#define CAUCHYCR_LINSYS_HPP

#include <string>
#include <utility>
#include <vector>

#include "cauchycr/sparse.hpp"
#include "cauchycr/util.hpp"

namespace cauchycr {

enum class SolveMethod { DirectLU, KrylovILU };

struct SolveReport {
  double residual_norm = 0.0; // ||M x - b||_2 recomputed after the solve
  int iterations = 0;         // 0 for the direct solver
  SolveMethod method = SolveMethod::DirectLU;
  double wall_time = 0.0;     // seconds
  bool converged = true;
  std::string note;
};

/// Pieces of the coupled system
///   a_h(u_h, w_h) - s_W(z_h, w_h) = rhs_w(w_h)
///   a_h(v_h, z_h) + s_V(u_h, v_h) = rhs_v(v_h)
/// A has one row per W-test DOF and one column per V-trial DOF.
struct BlockSystem {
  CsrMatrix a;
  CsrMatrix s_v;
  CsrMatrix s_w;
  std::vector<double> rhs_w;
  std::vector<double> rhs_v;

  int n_u() const { return a.cols(); }
  int n_z() const { return a.rows(); }
};

/// Monolithic form M = [[A, -S_W], [S_V, A^T]], b = [rhs_w; rhs_v].
/// Unknown ordering: all u-DOFs, then all z-DOFs, face-index order within.
std::pair<CsrMatrix, std::vector<double>> build_block(const BlockSystem& sys);

/// Solve M x = b. DirectLU uses a pivoted sparse LU; KrylovILU restarted
/// GMRES with an incomplete-LU preconditioner, stopping at relative residual
/// tol. Throws SolverError on singular factorization; iterative stagnation is
/// reported through SolveReport.converged/note instead.
std::pair<std::vector<double>, SolveReport> solve(const CsrMatrix& m, const std::vector<double>& b,
                                                  SolveMethod method, double tol = 1e-10);

} // namespace cauchycr

#endif
