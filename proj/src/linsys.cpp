#include "cauchycr/linsys.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

namespace cauchycr {

std::pair<CsrMatrix, std::vector<double>> build_block(const BlockSystem& sys) {
  const int nu = sys.n_u(), nz = sys.n_z();
  if (sys.s_v.rows() != nu || sys.s_v.cols() != nu || sys.s_w.rows() != nz ||
      sys.s_w.cols() != nz || static_cast<int>(sys.rhs_w.size()) != nz ||
      static_cast<int>(sys.rhs_v.size()) != nu)
    throw ValidationError("build_block: inconsistent block dimensions");

  std::vector<Triplet> trips;
  trips.reserve(2 * sys.a.nnz() + sys.s_v.nnz() + sys.s_w.nnz());
  auto each = [](const CsrMatrix& m, auto&& fn) {
    for (int r = 0; r < m.rows(); ++r)
      for (int k = m.row_ptr()[static_cast<std::size_t>(r)];
           k < m.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k)
        fn(r, m.col_idx()[static_cast<std::size_t>(k)], m.values()[static_cast<std::size_t>(k)]);
  };
  each(sys.a, [&](int r, int c, double v) {
    trips.push_back({r, c, v});               // A
    trips.push_back({nz + c, nu + r, v});     // A^T
  });
  each(sys.s_w, [&](int r, int c, double v) { trips.push_back({r, nu + c, -v}); });
  each(sys.s_v, [&](int r, int c, double v) { trips.push_back({nz + r, c, v}); });

  std::vector<double> b(static_cast<std::size_t>(nu + nz));
  std::copy(sys.rhs_w.begin(), sys.rhs_w.end(), b.begin());
  std::copy(sys.rhs_v.begin(), sys.rhs_v.end(), b.begin() + nz);
  return {CsrMatrix::from_triplets(nu + nz, nu + nz, std::move(trips)), std::move(b)};
}

namespace {

Eigen::SparseMatrix<double> to_eigen(const CsrMatrix& m) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.nnz());
  for (int r = 0; r < m.rows(); ++r)
    for (int k = m.row_ptr()[static_cast<std::size_t>(r)];
         k < m.row_ptr()[static_cast<std::size_t>(r) + 1]; ++k)
      trips.emplace_back(r, m.col_idx()[static_cast<std::size_t>(k)],
                         m.values()[static_cast<std::size_t>(k)]);
  Eigen::SparseMatrix<double> out(m.rows(), m.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

double recompute_residual(const CsrMatrix& m, const std::vector<double>& x,
                          const std::vector<double>& b) {
  const auto mx = m.multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double r = mx[i] - b[i];
    s += r * r;
  }
  return std::sqrt(s);
}

} // namespace

std::pair<std::vector<double>, SolveReport> solve(const CsrMatrix& m, const std::vector<double>& b,
                                                  SolveMethod method, double tol) {
  if (m.rows() != m.cols()) throw ValidationError("solve: matrix must be square");
  if (static_cast<int>(b.size()) != m.rows())
    throw ValidationError("solve: right side size mismatch");
  if (method == SolveMethod::KrylovILU && !(tol > 0.0))
    throw ValidationError("solve: iterative tolerance must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::SparseMatrix<double> a = to_eigen(m);
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));

  SolveReport report;
  report.method = method;
  Eigen::VectorXd x;

  if (method == SolveMethod::DirectLU) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
      throw SolverError(
          "solve: singular LU factorization (stabilization disabled or boundary tagging broken?)");
    x = lu.solve(rhs);
    report.iterations = 0;
  } else {
    Eigen::GMRES<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> gmres;
    gmres.preconditioner().setDroptol(1e-7);
    gmres.preconditioner().setFillfactor(30);
    gmres.set_restart(100);
    gmres.setMaxIterations(2000);
    gmres.setTolerance(tol);
    gmres.compute(a);
    if (gmres.info() != Eigen::Success)
      throw SolverError("solve: incomplete-LU preconditioner setup failed");
    x = gmres.solve(rhs);
    report.iterations = static_cast<int>(gmres.iterations());
    if (gmres.info() != Eigen::Success) {
      report.converged = false;
      report.note = "gmres stagnated at relative residual " + format_g17(gmres.error());
    }
  }

  std::vector<double> out(x.data(), x.data() + x.size());
  report.residual_norm = recompute_residual(m, out, b);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(out), report};
}

} // namespace cauchycr
