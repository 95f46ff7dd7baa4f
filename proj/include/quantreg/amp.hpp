#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quantreg/codebook.hpp"
#include "quantreg/dataset.hpp"

namespace quantreg {

struct AMPConfig {
  double lambda = 0.0;
  double beta = 100.0;     // denoiser temperature
  int t_max = 1000;
  double damping = 0.7;    // applied to m_bar and v
  double tol = 1e-8;       // on (1/N) ||m_bar^t - m_bar^{t-1}||^2
  double anneal = 1.0;     // per-iteration multiplier on beta (1 = off)
  double beta_max = 1e8;   // annealing cap
  std::uint64_t seed = 0;

  double beta_at(int t) const;
  void validate() const;
};

struct AMPState {
  Eigen::VectorXd m_bar;     // N
  Eigen::VectorXd v;         // N
  Eigen::VectorXd V_mu;      // M
  Eigen::VectorXd theta_mu;  // M
  Eigen::VectorXd Sigma;     // N
  Eigen::VectorXd R;         // N
  int t = 0;
};

struct AMPTrajectoryPoint {
  int t;
  double V_mean;  // (1/N) sum_i v_i
  double E_emp;   // (1/N) ||w0 - m_bar||^2
};

struct AMPResult {
  std::vector<double> w_hat;  // every component on a codebook level
  double gen_error = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<AMPTrajectoryPoint> trajectory;
};

// m_bar^0 ~ N(0,1) per component (stream from cfg.seed), v^0 = 1,
// V^0 = theta^0 = 0, Sigma^0 from the algorithm's own update line.
AMPState amp_init(const Dataset& d, const AMPConfig& cfg);

// One sweep of the message-passing updates; aborts with a diagnostic on
// non-finite propagation.
AMPState amp_step(const AMPState& s, const Dataset& d, const Codebook& cb, const AMPConfig& cfg);

AMPResult amp_run(const Dataset& d, const Codebook& cb, const AMPConfig& cfg);

// (sigma2 + ||w_hat - w0||^2 / N) / 2
double empirical_gen_error(std::span<const double> w_hat, std::span<const double> w0,
                           double sigma2);

// 0.5 ||y - X phi(w)||^2 + (lambda/2) ||phi(w)||^2
double energy(std::span<const double> w, const Dataset& d, const Codebook& cb, double lambda);

}  // namespace quantreg
