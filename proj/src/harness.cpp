#include "cauchycr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace cauchycr {

namespace {

const char* to_string(StabKind k) { return k == StabKind::GradLS ? "ls" : "jump"; }
const char* to_string(BcPath p) { return p == BcPath::Strong ? "strong" : "weak"; }
const char* to_string(SolveMethod m) { return m == SolveMethod::DirectLU ? "lu" : "krylov"; }
const char* to_string(PerturbMode m) {
  return m == PerturbMode::DeterministicSine ? "sine" : "noise";
}

std::vector<double> sorted_zetas(const RunConfig& cfg) {
  auto z = cfg.zetas;
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

// smallest L <= 1000 with L*zeta integral for every zeta
int zeta_lcm(const std::vector<double>& zetas) {
  for (int L = 1; L <= 1000; ++L) {
    bool ok = true;
    for (double z : zetas) {
      const double Lz = L * z;
      if (std::abs(Lz - std::round(Lz)) > 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return L;
  }
  throw ValidationError("zeta list is incompatible with structured meshing (denominator > 1000)");
}

RateFit ols_fit(const std::vector<double>& h, const std::vector<double>& e) {
  const std::size_t n = h.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(h[i]);
    y[i] = std::log(e[i]);
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (my + fit.slope * (x[i] - mx));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

} // namespace

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "n=" << cfg.n << '\n';
  os << "a_n=" << format_g17(cfg.a_n) << '\n';
  os << "h=" << format_g17(cfg.h) << '\n';
  const auto [nx, ny] = grid_for(cfg);
  os << "nx=" << nx << '\n' << "ny=" << ny << '\n';
  os << "jitter=" << format_g17(cfg.jitter) << '\n';
  os << "seed=" << cfg.seed << '\n';
  os << "stab=" << to_string(cfg.stab) << '\n';
  os << "bc=" << to_string(cfg.bc) << '\n';
  os << "gamma_v=" << format_g17(cfg.gamma_v) << '\n';
  os << "gamma_w=" << format_g17(cfg.gamma_w) << '\n';
  os << "gamma_bc=" << format_g17(cfg.gamma_bc) << '\n';
  os << "zetas=";
  const auto z = sorted_zetas(cfg);
  for (std::size_t i = 0; i < z.size(); ++i) os << (i ? "," : "") << format_g17(z[i]);
  os << '\n';
  os << "solver=" << to_string(cfg.solver) << '\n';
  os << "tol=" << format_g17(cfg.tol) << '\n';
  os << "quad_face_data=" << cfg.quad.face_data << '\n';
  os << "quad_tri_data=" << cfg.quad.tri_data << '\n';
  os << "quad_face_form=" << cfg.quad.face_form << '\n';
  os << "quad_error=" << cfg.quad.error << '\n';
  if (cfg.perturbation) {
    os << "perturb_epsilon=" << format_g17(cfg.perturbation->epsilon) << '\n';
    os << "perturb_mode=" << to_string(cfg.perturbation->mode) << '\n';
    os << "perturb_m=" << cfg.perturbation->m << '\n';
  }
  return os.str();
}

std::string config_digest(const RunConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical_config(cfg))));
  return buf;
}

std::pair<int, int> grid_for(const RunConfig& cfg) {
  if (!(cfg.h > 0.0)) throw ValidationError("config: h must be positive");
  const int nx = cfg.nx ? *cfg.nx : std::max(1, static_cast<int>(std::lround(M_PI / cfg.h)));
  int ny;
  if (cfg.ny) {
    ny = *cfg.ny;
  } else {
    const int L = zeta_lcm(sorted_zetas(cfg));
    ny = L * std::max(1, static_cast<int>(std::lround(1.0 / (L * cfg.h))));
  }
  if (nx < 1 || ny < 1) throw ValidationError("config: grid must have at least one cell per side");
  return {nx, ny};
}

void validate(const RunConfig& cfg) {
  if (cfg.n < 1) throw ValidationError("config: n must be >= 1");
  if (cfg.zetas.empty()) throw ValidationError("config: zeta list must not be empty");
  for (double z : cfg.zetas)
    if (!(z > 0.0) || z > 1.0) throw ValidationError("config: zeta values must lie in (0, 1]");
  if (cfg.jitter < 0.0 || cfg.jitter >= 0.3)
    throw ValidationError("config: jitter must lie in [0, 0.3)");
  if (!(cfg.tol > 0.0)) throw ValidationError("config: tol must be positive");
  if (cfg.perturbation && cfg.perturbation->epsilon < 0.0)
    throw ValidationError("config: perturbation epsilon must be >= 0");
  if (cfg.perturbation && cfg.perturbation->m < 1)
    throw ValidationError("config: perturbation frequency m must be >= 1");
  cfg.params(); // positivity
  const auto [nx, ny] = grid_for(cfg);
  (void)nx;
  for (double z : cfg.zetas) {
    const double nz = ny * z;
    if (std::abs(nz - std::round(nz)) > 1e-9)
      throw ValidationError("config: zeta=" + format_g17(z) + " does not align with ny=" +
                            std::to_string(ny) + " (zeta*ny must be integral)");
  }
}

ScalarField hadamard_exact(int n, double a_n) {
  return [n, a_n](double x, double y) { return a_n / n * std::sin(n * x) * std::sinh(n * y); };
}

GradField hadamard_exact_grad(int n, double a_n) {
  return [n, a_n](double x, double y) -> std::array<double, 2> {
    return {a_n * std::cos(n * x) * std::sinh(n * y), a_n * std::sin(n * x) * std::cosh(n * y)};
  };
}

ProblemData hadamard_data(const RunConfig& cfg, const Mesh& mesh) {
  ProblemData data;
  data.f = [](double, double) { return 0.0; };
  const int n = cfg.n;
  const double a = cfg.a_n;
  data.psi = [n, a](double x, double) { return a * std::sin(n * x); };
  data.g = [](double, double) { return 0.0; };
  if (cfg.perturbation) {
    const Perturbation& p = *cfg.perturbation;
    if (p.mode == PerturbMode::DeterministicSine) {
      const double eps = p.epsilon;
      const int m = p.m;
      data.delta_psi = [eps, m](double x, double) { return eps * std::sin(m * x); };
    } else {
      // piecewise-constant noise per GammaC face, deterministic in the seed
      auto intervals = std::make_shared<std::vector<std::array<double, 3>>>(); // x0, x1, value
      for (int f = 0; f < mesh.n_faces(); ++f) {
        const Face& F = mesh.face(f);
        if (!F.boundary() || !F.tag || !in_gamma_c(*F.tag)) continue;
        const double x0 = std::min(mesh.vertex(F.v[0])[0], mesh.vertex(F.v[1])[0]);
        const double x1 = std::max(mesh.vertex(F.v[0])[0], mesh.vertex(F.v[1])[0]);
        intervals->push_back(
            {x0, x1, p.epsilon * hash_unit(cfg.seed, static_cast<std::uint64_t>(f), 0x6e6f6973)});
      }
      std::sort(intervals->begin(), intervals->end());
      data.delta_psi = [intervals](double x, double) {
        auto it = std::upper_bound(intervals->begin(), intervals->end(),
                                   std::array<double, 3>{x, 1e300, 0.0});
        if (it != intervals->begin()) --it;
        return (*it)[2];
      };
    }
    data.delta_f = [](double, double) { return 0.0; };
  }
  return data;
}

RunArtifacts solve_hadamard(const RunConfig& cfg) {
  validate(cfg);
  const auto [nx, ny] = grid_for(cfg);
  RunArtifacts art;
  art.mesh = std::make_unique<Mesh>(
      tag_boundary_hadamard(build_structured(Rect(M_PI, 1.0), nx, ny, cfg.jitter, cfg.seed)));
  if (cfg.bc == BcPath::Strong) {
    art.space_v = std::make_unique<Space>(
        *art.mesh, std::set<BoundaryPart>{BoundaryPart::GammaC, BoundaryPart::GammaDOnly});
    art.space_w = std::make_unique<Space>(
        *art.mesh, std::set<BoundaryPart>{BoundaryPart::GammaDOnly, BoundaryPart::GammaDPrime});
  } else {
    art.space_v = std::make_unique<Space>(*art.mesh);
    art.space_w = std::make_unique<Space>(*art.mesh);
  }
  art.data = hadamard_data(cfg, *art.mesh);
  const StabParams params = cfg.params();
  const bool perturbed = cfg.perturbation && cfg.perturbation->epsilon != 0.0;

  art.sys.a = assemble_a(*art.space_v, *art.space_w, cfg.bc, cfg.quad, cfg.exec);
  art.sys.s_v = assemble_s_v(*art.space_v, params, cfg.quad, cfg.exec);
  art.sys.s_w = assemble_s_w(*art.space_w, params, cfg.stab, cfg.bc, cfg.quad, cfg.exec);
  art.sys.rhs_w = assemble_load(*art.space_w, art.data, cfg.quad, cfg.bc, perturbed, cfg.exec);
  art.sys.rhs_v =
      assemble_dirichlet_rhs(*art.space_v, art.data, params, cfg.quad, cfg.bc, cfg.exec);

  auto [m, b] = build_block(art.sys);
  auto [x, report] = solve(m, b, cfg.solver, cfg.tol);
  if (!report.converged)
    throw SolverError("solve_hadamard: iterative solver stagnated: " + report.note);
  art.solve_report = report;

  art.u_h = std::make_unique<FEFunction>(*art.space_v);
  art.z_h = std::make_unique<FEFunction>(*art.space_w);
  std::copy(x.begin(), x.begin() + art.sys.n_u(), art.u_h->coeff.begin());
  std::copy(x.begin() + art.sys.n_u(), x.end(), art.z_h->coeff.begin());
  return art;
}

namespace {

ErrorReport evaluate(const RunConfig& cfg, const RunArtifacts& art) {
  ErrorReport rep;
  const auto exact = hadamard_exact(cfg.n, cfg.a_n);
  const auto exact_grad = hadamard_exact_grad(cfg.n, cfg.a_n);
  const Exec ex = cfg.exec;

  for (double z : sorted_zetas(cfg))
    rep.rel_l2.emplace_back(
        z, error_l2_relative(*art.u_h, exact, SubdomainSpec(z), cfg.quad.error, ex));

  rep.h1_semi_error = h1_semi_error(*art.u_h, exact_grad, cfg.quad.error, ex);
  const double l2 = l2_error(*art.u_h, exact, cfg.quad.error, ex);
  rep.broken_h1_error = std::sqrt(l2 * l2 + rep.h1_semi_error * rep.h1_semi_error);

  rep.s_v_seminorm = stab_seminorm(art.sys.s_v, art.u_h->coeff);
  rep.s_w_norm = stab_seminorm(art.sys.s_w, art.z_h->coeff);

  FEFunction mu = interpolate(*art.space_v, exact, cfg.quad.face_data);
  for (std::size_t i = 0; i < mu.coeff.size(); ++i) mu.coeff[i] -= art.u_h->coeff[i];
  rep.triple_norm = triple_norm(mu, *art.z_h, cfg.params(), cfg.stab, cfg.bc, ex);

  const Mesh& mesh = *art.mesh;
  rep.hf_term = 0.0; // f == 0 for the Hadamard family
  rep.data_osc = data_oscillation(mesh, art.data.psi, cfg.quad.face_data, ex);
  const StabParams params = cfg.params();
  rep.eta = rep.hf_term + rep.s_v_seminorm / std::sqrt(params.gamma_v) +
            std::sqrt(params.gamma_w) * rep.s_w_norm + rep.data_osc;
  if (cfg.perturbation) {
    rep.perturbation_norm =
        perturbation_norm(art.data.delta_f, art.data.delta_psi, mesh, cfg.quad, ex);
    rep.eta_delta = rep.hf_term + rep.s_v_seminorm + rep.s_w_norm + rep.data_osc +
                    *rep.perturbation_norm;
  }
  rep.exact_h1_semi = exact_energy(cfg.n, cfg.a_n);
  return rep;
}

RunRow make_row(const RunConfig& cfg) {
  RunRow row;
  row.cfg = cfg;
  const auto [nx, ny] = grid_for(cfg);
  row.nx = nx;
  row.ny = ny;
  RunArtifacts art = solve_hadamard(cfg);
  row.h_max = art.mesh->h_max;
  row.n_u = art.sys.n_u();
  row.n_z = art.sys.n_z();
  row.err = evaluate(cfg, art);
  row.slv = art.solve_report;
  return row;
}

} // namespace

std::pair<ErrorReport, SolveReport> run_single(const RunConfig& cfg) {
  const RunArtifacts art = solve_hadamard(cfg);
  return {evaluate(cfg, art), art.solve_report};
}

StudyResult run_convergence(const RunConfig& base, const std::vector<double>& h_list,
                            const RowSink& on_row) {
  if (h_list.size() < 3)
    throw ValidationError("run_convergence: at least 3 mesh levels are required");
  StudyResult study;
  for (double h : h_list) {
    RunConfig cfg = base;
    cfg.h = h;
    study.rows.push_back(make_row(cfg));
    if (on_row) on_row(study.rows.back());
  }
  std::vector<double> hs;
  for (const auto& r : study.rows) hs.push_back(r.h_max);
  for (std::size_t zi = 0; zi < study.rows.front().err.rel_l2.size(); ++zi) {
    std::vector<double> errs;
    for (const auto& r : study.rows) errs.push_back(r.err.rel_l2[zi].second);
    study.rates_per_zeta.emplace_back(study.rows.front().err.rel_l2[zi].first, ols_fit(hs, errs));
  }
  std::vector<double> stab;
  for (const auto& r : study.rows) stab.push_back(r.err.s_v_seminorm + r.err.s_w_norm);
  study.stab_decay = ols_fit(hs, stab);
  return study;
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "gamma-vw") return SweepAxis::GammaVW;
  if (s == "gamma-v") return SweepAxis::GammaV;
  if (s == "gamma-w") return SweepAxis::GammaW;
  if (s == "gamma-bc") return SweepAxis::GammaBc;
  if (s == "epsilon") return SweepAxis::Epsilon;
  throw ValidationError("unknown sweep axis '" + s +
                        "' (expected gamma-vw|gamma-v|gamma-w|gamma-bc|epsilon)");
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::GammaVW: return "gamma-vw";
    case SweepAxis::GammaV: return "gamma-v";
    case SweepAxis::GammaW: return "gamma-w";
    case SweepAxis::GammaBc: return "gamma-bc";
    case SweepAxis::Epsilon: return "epsilon";
  }
  return "?";
}

StudyResult run_sweep(const RunConfig& base, SweepAxis axis, const std::vector<double>& values,
                      const RowSink& on_row) {
  if (values.empty()) throw ValidationError("run_sweep: value list must not be empty");
  StudyResult study;
  for (double v : values) {
    RunConfig cfg = base;
    switch (axis) {
      case SweepAxis::GammaVW: cfg.gamma_v = cfg.gamma_w = v; break;
      case SweepAxis::GammaV: cfg.gamma_v = v; break;
      case SweepAxis::GammaW: cfg.gamma_w = v; break;
      case SweepAxis::GammaBc: cfg.gamma_bc = v; break;
      case SweepAxis::Epsilon:
        if (!cfg.perturbation) cfg.perturbation = Perturbation{};
        cfg.perturbation->epsilon = v;
        break;
    }
    study.rows.push_back(make_row(cfg));
    if (on_row) on_row(study.rows.back());
  }
  return study;
}

StudyResult run_perturbed(const RunConfig& base, const std::vector<double>& epsilons,
                          const std::vector<double>& h_list, bool* jump_warning,
                          const RowSink& on_row) {
  if (epsilons.empty()) throw ValidationError("run_perturbed: epsilon list must not be empty");
  if (h_list.empty()) throw ValidationError("run_perturbed: h list must not be empty");
  if (jump_warning) *jump_warning = base.stab == StabKind::JumpPenalty;
  StudyResult study;
  for (double eps : epsilons) {
    for (double h : h_list) {
      RunConfig cfg = base;
      if (!cfg.perturbation) cfg.perturbation = Perturbation{};
      cfg.perturbation->epsilon = eps;
      cfg.h = h;
      study.rows.push_back(make_row(cfg));
      if (on_row) on_row(study.rows.back());
    }
  }
  return study;
}

std::string csv_header(const RunConfig& base) {
  std::ostringstream os;
  os << "digest,n,a_n,h_target,nx,ny,h_max,jitter,seed,stab,bc,gamma_v,gamma_w,gamma_bc,solver,"
        "tol,eps,pert_mode,pert_m,n_dofs_u,n_dofs_z";
  for (double z : sorted_zetas(base)) os << ",rel_l2_z" << format_g17(z);
  os << ",h1_semi_err,broken_h1_err,s_v,s_w,triple_norm,hf,data_osc,eta,eta_delta,pert_norm,"
        "stop_lhs,exact_E,iterations,residual\n";
  return os.str();
}

std::string csv_row(const RunRow& row) {
  std::ostringstream os;
  const RunConfig& c = row.cfg;
  os << config_digest(c) << ',' << c.n << ',' << format_g17(c.a_n) << ',' << format_g17(c.h)
     << ',' << row.nx << ',' << row.ny << ',' << format_g17(row.h_max) << ','
     << format_g17(c.jitter) << ',' << c.seed << ',' << to_string(c.stab) << ','
     << to_string(c.bc) << ',' << format_g17(c.gamma_v) << ',' << format_g17(c.gamma_w) << ','
     << format_g17(c.gamma_bc) << ',' << to_string(c.solver) << ',' << format_g17(c.tol) << ',';
  if (c.perturbation)
    os << format_g17(c.perturbation->epsilon) << ',' << to_string(c.perturbation->mode) << ','
       << c.perturbation->m;
  else
    os << ",,";
  os << ',' << row.n_u << ',' << row.n_z;
  for (const auto& [z, e] : row.err.rel_l2) os << ',' << format_g17(e);
  os << ',' << format_g17(row.err.h1_semi_error) << ',' << format_g17(row.err.broken_h1_error)
     << ',' << format_g17(row.err.s_v_seminorm) << ',' << format_g17(row.err.s_w_norm) << ','
     << format_g17(row.err.triple_norm) << ',' << format_g17(row.err.hf_term) << ','
     << format_g17(row.err.data_osc) << ',' << format_g17(row.err.eta) << ',';
  if (row.err.eta_delta) os << format_g17(*row.err.eta_delta);
  os << ',';
  if (row.err.perturbation_norm) os << format_g17(*row.err.perturbation_norm);
  const double stop_lhs =
      row.err.hf_term + row.err.s_v_seminorm + row.err.s_w_norm + row.err.data_osc;
  os << ',' << format_g17(stop_lhs) << ',' << format_g17(row.err.exact_h1_semi) << ','
     << row.slv.iterations << ',' << format_g17(row.slv.residual_norm) << '\n';
  return os.str();
}

std::string rates_csv(const StudyResult& study) {
  std::ostringstream os;
  os << "series,slope,fit_residual\n";
  for (const auto& [z, fit] : study.rates_per_zeta)
    os << "rel_l2_z" << format_g17(z) << ',' << format_g17(fit.slope) << ','
       << format_g17(fit.residual) << '\n';
  if (study.stab_decay)
    os << "stab_decay," << format_g17(study.stab_decay->slope) << ','
       << format_g17(study.stab_decay->residual) << '\n';
  return os.str();
}

} // namespace cauchycr
