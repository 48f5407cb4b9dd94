#ifndef CAUCHYCR_HARNESS_HPP
#define CAUCHYCR_HARNESS_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cauchycr/analysis.hpp"
#include "cauchycr/linsys.hpp"

namespace cauchycr {

enum class PerturbMode { DeterministicSine, SeededNoise };

struct Perturbation {
  double epsilon = 0.0;
  PerturbMode mode = PerturbMode::DeterministicSine;
  int m = 7; // frequency of the sine perturbation
};

/// One Hadamard-problem run on (0,pi)x(0,1) with psi = A_n sin(n x), f = 0,
/// g = 0 and exact solution u_n = A_n n^-1 sin(nx) sinh(ny).
struct RunConfig {
  int n = 1;
  double a_n = 1.0;
  double h = 0.1;
  std::optional<int> nx; // explicit grid override
  std::optional<int> ny;
  double jitter = 0.0;
  std::uint64_t seed = 0;
  StabKind stab = StabKind::JumpPenalty;
  BcPath bc = BcPath::Weak;
  double gamma_v = 0.01;
  double gamma_w = 0.01;
  double gamma_bc = 100.0;
  std::vector<double> zetas = {0.125, 0.25, 0.5, 1.0};
  SolveMethod solver = SolveMethod::DirectLU;
  double tol = 1e-10;
  QuadDegrees quad;
  std::optional<Perturbation> perturbation;
  Exec exec = Exec::Parallel;

  StabParams params() const { return StabParams(gamma_v, gamma_w, gamma_bc); }
};

/// Canonical key=value serialization (config.lock contents) and its hash.
std::string canonical_config(const RunConfig& cfg);
std::string config_digest(const RunConfig& cfg);

/// Throws ValidationError on inconsistent settings. Grid resolution: nx from
/// h unless overridden; ny snapped to the smallest multiple compatible with
/// the zeta list (every zeta*ny must be integral).
void validate(const RunConfig& cfg);
std::pair<int, int> grid_for(const RunConfig& cfg);

/// Everything a run produces; spaces point into `mesh`, fields into spaces.
struct RunArtifacts {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<Space> space_v;
  std::unique_ptr<Space> space_w;
  ProblemData data;
  BlockSystem sys;
  std::unique_ptr<FEFunction> u_h;
  std::unique_ptr<FEFunction> z_h;
  SolveReport solve_report;
};

/// Hadamard data set for a config (includes the perturbation when present).
ProblemData hadamard_data(const RunConfig& cfg, const Mesh& mesh);
ScalarField hadamard_exact(int n, double a_n);
GradField hadamard_exact_grad(int n, double a_n);

/// Assemble and solve; no error evaluation.
RunArtifacts solve_hadamard(const RunConfig& cfg);

/// Full run: build, solve, evaluate every reported quantity.
std::pair<ErrorReport, SolveReport> run_single(const RunConfig& cfg);

struct RunRow {
  RunConfig cfg;
  int nx = 0;
  int ny = 0;
  double h_max = 0.0;
  int n_u = 0;
  int n_z = 0;
  ErrorReport err;
  SolveReport slv;
};

struct RateFit {
  double slope = 0.0;
  double residual = 0.0; // RMS of the least-squares fit residuals
};

struct StudyResult {
  std::vector<RunRow> rows;
  std::vector<std::pair<double, RateFit>> rates_per_zeta; // (zeta, fit), >= 3 levels only
  std::optional<RateFit> stab_decay;                      // fit of |u|_sV + ||z||_sW vs h
};

/// Called after each completed run so partial output can be flushed.
using RowSink = std::function<void(const RunRow&)>;

/// One run per mesh size; needs >= 3 levels. Rates are least-squares slopes
/// of log(err) against log(h_max).
StudyResult run_convergence(const RunConfig& base, const std::vector<double>& h_list,
                            const RowSink& on_row = {});

enum class SweepAxis { GammaVW, GammaV, GammaW, GammaBc, Epsilon };
SweepAxis sweep_axis_from_string(const std::string& s);
std::string to_string(SweepAxis a);

/// One run per value at the base mesh.
StudyResult run_sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values,
                      const RowSink& on_row = {});

/// (epsilon, h) grid of perturbed runs. GradLS is the variant the perturbed
/// analysis covers; returns true in `jump_warning` when the base asks for
/// JumpPenalty instead.
StudyResult run_perturbed(const RunConfig& base, const std::vector<double>& epsilons,
                          const std::vector<double>& h_list, bool* jump_warning = nullptr,
                          const RowSink& on_row = {});

/// results.csv serialization. The column set is fixed by the base config's
/// zeta list; every row carries the full config digest. Deterministic bytes.
std::string csv_header(const RunConfig& base);
std::string csv_row(const RunRow& row);

/// rates.csv serialization.
std::string rates_csv(const StudyResult& study);

} // namespace cauchycr

#endif
