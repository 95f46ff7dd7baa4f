#include "quantreg/state_evolution.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace quantreg {

SEState make_se_state(double V, double E, int t, const ModelParams& p) {
  SEState s;
  s.V = V;
  s.E = E;
  s.t = t;
  const double denom = 1.0 + V;
  s.xi = std::sqrt(p.alpha * p.alpha * p.rho + p.alpha * (p.sigma2 + std::max(E, 0.0))) / denom;
  s.Lambda = p.lambda_eff() + p.alpha / denom;
  return s;
}

SEState se_step(const SEState& s, const ModelParams& p, const Codebook& cb) {
  const FieldContext ctx{s.xi, s.Lambda};
  const double v_next = gauss_chi(ctx, cb);
  // E' = rho - 2 rho alpha/(1+V) * int Dz d(phi*)/d(xi z) + int Dz phi*^2
  const double e_next =
      p.rho - 2.0 * p.rho * p.alpha / (1.0 + s.V) * v_next + gauss_second_moment(ctx, cb);
  return make_se_state(v_next, e_next, s.t + 1, p);
}

SETrajectory se_run(const ModelParams& p, const Codebook& cb, const SEOptions& opts) {
  p.validate();
  if (opts.max_iter < 1) throw std::invalid_argument("se_run: max_iter must be >= 1");
  SETrajectory traj;
  SEState s = make_se_state(opts.V0, opts.E0 < 0.0 ? p.rho : opts.E0, 0, p);
  traj.states.push_back(s);
  const double gamma = opts.damping;
  for (int it = 1; it <= opts.max_iter; ++it) {
    const SEState raw = se_step(s, p, cb);
    traj.residual = std::max(std::abs(raw.V - s.V), std::abs(raw.E - s.E));
    s = make_se_state(gamma * raw.V + (1.0 - gamma) * s.V, gamma * raw.E + (1.0 - gamma) * s.E,
                      it, p);
    traj.states.push_back(s);
    traj.iterations = it;
    if (!std::isfinite(s.V) || !std::isfinite(s.E) || std::abs(s.E) > 1e12) {
      traj.converged = false;
      return traj;
    }
    if (traj.residual < opts.tol) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

double amp_fixed_point_stability(const SEState& s, const ModelParams& p, const Codebook& cb) {
  const double denom = (1.0 + s.V) * (1.0 + s.V);
  return p.alpha / denom * gauss_at_integral(FieldContext{s.xi, s.Lambda}, cb);
}

std::string se_csv_header() { return "t,V,E,xi,Lambda"; }

std::string se_csv_row(const SEState& s) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g", s.t, s.V, s.E, s.xi, s.Lambda);
  return buf;
}

}  // namespace quantreg
