#pragma once

#include <string>

#include "quantreg/codebook.hpp"
#include "quantreg/gaussian.hpp"

namespace quantreg {

// The random-design ensemble: sample ratio alpha = M/N, teacher variance rho,
// noise variance sigma2, ridge coefficient lambda.
struct ModelParams {
  double alpha = 1.0;
  double rho = 1.0;
  double sigma2 = 0.0;
  double lambda = 0.0;

  void validate() const;
  // lambda = 0 is replaced by a small floor so theta_hat stays positive
  double lambda_eff() const { return lambda > 1e-8 ? lambda : 1e-8; }
};

struct SaddleState {
  double Q = 0.0;
  double m = 0.0;
  double chi = 0.0;
  double Q_hat = 0.0;
  double m_hat = 0.0;
  double chi_hat = 0.0;
  double h = 0.0;
  double theta_hat = 0.0;
};

enum class Phase { RS, RSB, NonConverged };
std::string to_string(Phase phase);

struct SolveOptions {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 100000;
  // default start: Q = rho, m = 0.5*rho, chi = 0.5
  bool has_init = false;
  SaddleState init{};
};

struct ReplicaSolution {
  SaddleState state;
  double gen_error = 0.0;
  double stability = 0.0;  // LHS of the RS local-stability condition
  Phase phase = Phase::NonConverged;
  int iterations = 0;
  double residual = 0.0;
};

// E_g = (Q - 2m + rho + sigma2) / 2
double gen_error(const SaddleState& s, const ModelParams& p);

// One update of the order parameters (conjugates, then Gaussian averages),
// mixed with the previous state by the damping factor.
SaddleState saddle_step(const SaddleState& s, const ModelParams& p, const Codebook& cb,
                        double damping = 0.5);

// Damped fixed-point iteration of the saddle system; classifies RS/RSB from
// the stability value at the fixed point. Never throws on non-convergence.
ReplicaSolution solve(const ModelParams& p, const Codebook& cb, const SolveOptions& opts = {});

// Same system with the identity denoiser phi*(u) = u/theta_hat (no
// quantization); the ridge-regression baseline.
ReplicaSolution ridge_saddle(const ModelParams& p, const SolveOptions& opts = {});

// one row per solution: scheme,n_p,b,omega,alpha,rho,sigma2,lambda,Q,m,chi,E_g,stability,phase,iters,residual
std::string solution_csv_header();
std::string solution_csv_row(const ReplicaSolution& sol, const ModelParams& p,
                             const std::string& scheme, int n_p, double b, double omega);

}  // namespace quantreg
