#pragma once

#include <vector>

#include "quantreg/replica.hpp"

namespace quantreg {

// Macroscopic AMP trajectory: V tracks the mean denoiser derivative, E the
// mean squared estimation error. xi and Lambda are the induced effective
// field scale and curvature of this state.
struct SEState {
  double V = 0.0;
  double E = 0.0;
  int t = 0;
  double xi = 0.0;
  double Lambda = 0.0;
};

struct SEOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  double V0 = 0.0;
  double E0 = -1.0;  // negative means "use rho"
  double damping = 1.0;
};

struct SETrajectory {
  std::vector<SEState> states;  // states[0] is the initial condition
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  const SEState& back() const { return states.back(); }
};

// fill xi = sqrt(alpha^2 rho + alpha (sigma2 + E)) / (1+V), Lambda = lambda + alpha/(1+V)
SEState make_se_state(double V, double E, int t, const ModelParams& p);

SEState se_step(const SEState& s, const ModelParams& p, const Codebook& cb);

SETrajectory se_run(const ModelParams& p, const Codebook& cb, const SEOptions& opts = {});

// alpha/(1+V)^2 * int Dz (d phi*(xi z, Lambda)/du)^2 at a fixed point; equals
// the replica stability value under V <-> chi, E <-> Q - 2m + rho.
double amp_fixed_point_stability(const SEState& s, const ModelParams& p, const Codebook& cb);

std::string se_csv_header();
std::string se_csv_row(const SEState& s);

}  // namespace quantreg
