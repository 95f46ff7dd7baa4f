#include "quantreg/replica.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace quantreg {

namespace {
constexpr double kDivergenceCap = 1e12;
constexpr double kMinDampingFactor = 1.0 / 256.0;

bool diverged(const SaddleState& s) {
  if (!std::isfinite(s.Q) || !std::isfinite(s.m) || !std::isfinite(s.chi)) return true;
  return std::abs(s.Q) > kDivergenceCap || std::abs(s.m) > kDivergenceCap ||
         std::abs(s.chi) > kDivergenceCap;
}

SaddleState default_init(const ModelParams& p) {
  SaddleState s;
  s.Q = p.rho;
  s.m = 0.5 * p.rho;
  s.chi = 0.5;
  return s;
}

void fill_conjugates(SaddleState& s, const ModelParams& p) {
  s.Q_hat = s.m_hat = p.alpha / (1.0 + s.chi);
  s.chi_hat = std::max(
      p.alpha * (s.Q - 2.0 * s.m + p.rho + p.sigma2) / ((1.0 + s.chi) * (1.0 + s.chi)), 0.0);
  s.theta_hat = s.Q_hat + p.lambda_eff();
  s.h = std::sqrt(s.m_hat * s.m_hat * p.rho + s.chi_hat);
}

// shared driver for the quantized and ridge systems: `update` maps a state
// with conjugates filled to raw (Q, m, chi); `stability_integral` evaluates
// int Dz (d phi*/du)^2 at the fixed point.
template <typename Update, typename StabilityIntegral>
ReplicaSolution iterate_saddle(const ModelParams& p, const SolveOptions& opts, Update update,
                               StabilityIntegral stability_integral) {
  p.validate();
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  ReplicaSolution sol;
  SaddleState s = opts.has_init ? opts.init : default_init(p);
  double gamma = opts.damping;
  double prev_residual = std::numeric_limits<double>::infinity();
  int rising = 0;
  bool converged = false;

  for (int it = 1; it <= opts.max_iter; ++it) {
    fill_conjugates(s, p);
    const auto [q_new, m_new, chi_new] = update(s);
    const double residual =
        std::max({std::abs(q_new - s.Q), std::abs(m_new - s.m), std::abs(chi_new - s.chi)});
    s.Q = gamma * q_new + (1.0 - gamma) * s.Q;
    s.m = gamma * m_new + (1.0 - gamma) * s.m;
    s.chi = gamma * chi_new + (1.0 - gamma) * s.chi;
    sol.iterations = it;
    sol.residual = residual;
    if (diverged(s)) {
      sol.state = s;
      sol.phase = Phase::NonConverged;
      return sol;
    }
    if (residual < opts.tol) {
      converged = true;
      break;
    }
    // a discrete denoiser can make the damped map oscillate; back off
    if (residual > prev_residual) {
      if (++rising >= 20) {
        gamma = std::max(gamma * 0.5, opts.damping * kMinDampingFactor);
        rising = 0;
      }
    } else {
      rising = 0;
    }
    prev_residual = residual;
  }

  fill_conjugates(s, p);
  sol.state = s;
  sol.gen_error = gen_error(s, p);
  sol.stability = p.alpha / ((1.0 + s.chi) * (1.0 + s.chi)) * stability_integral(s);
  sol.phase = !converged ? Phase::NonConverged : (sol.stability < 1.0 ? Phase::RS : Phase::RSB);
  return sol;
}

}  // namespace

void ModelParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be nonnegative");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::RS: return "RS";
    case Phase::RSB: return "RSB";
    default: return "NonConverged";
  }
}

double gen_error(const SaddleState& s, const ModelParams& p) {
  return 0.5 * (s.Q - 2.0 * s.m + p.rho + p.sigma2);
}

SaddleState saddle_step(const SaddleState& s, const ModelParams& p, const Codebook& cb,
                        double damping) {
  SaddleState next = s;
  fill_conjugates(next, p);
  const FieldContext ctx{next.h, next.theta_hat};
  const double q_new = gauss_second_moment(ctx, cb);
  const double chi_new = gauss_chi(ctx, cb);
  const double m_new = next.m_hat * p.rho * chi_new;
  next.Q = damping * q_new + (1.0 - damping) * s.Q;
  next.m = damping * m_new + (1.0 - damping) * s.m;
  next.chi = damping * chi_new + (1.0 - damping) * s.chi;
  return next;
}

ReplicaSolution solve(const ModelParams& p, const Codebook& cb, const SolveOptions& opts) {
  return iterate_saddle(
      p, opts,
      [&](const SaddleState& s) {
        const FieldContext ctx{s.h, s.theta_hat};
        const double chi_new = gauss_chi(ctx, cb);
        return std::tuple{gauss_second_moment(ctx, cb), s.m_hat * p.rho * chi_new, chi_new};
      },
      [&](const SaddleState& s) {
        return gauss_at_integral(FieldContext{s.h, s.theta_hat}, cb);
      });
}

ReplicaSolution ridge_saddle(const ModelParams& p, const SolveOptions& opts) {
  return iterate_saddle(
      p, opts,
      [&](const SaddleState& s) {
        // identity denoiser: chi = 1/theta, Q = (h/theta)^2, m = m_hat*rho/theta
        const double chi_new = 1.0 / s.theta_hat;
        const double q_new = (s.h / s.theta_hat) * (s.h / s.theta_hat);
        return std::tuple{q_new, s.m_hat * p.rho / s.theta_hat, chi_new};
      },
      [&](const SaddleState& s) {
        // (d phi*/du)^2 = 1/theta^2 pointwise
        return 1.0 / (s.theta_hat * s.theta_hat);
      });
}

std::string solution_csv_header() {
  return "scheme,n_p,b,omega,alpha,rho,sigma2,lambda,Q,m,chi,E_g,stability,phase,iters,residual";
}

std::string solution_csv_row(const ReplicaSolution& sol, const ModelParams& p,
                             const std::string& scheme, int n_p, double b, double omega) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%d,%.17g",
                scheme.c_str(), n_p, b, omega, p.alpha, p.rho, p.sigma2, p.lambda, sol.state.Q,
                sol.state.m, sol.state.chi, sol.gen_error, sol.stability,
                to_string(sol.phase).c_str(), sol.iterations, sol.residual);
  return buf;
}

}  // namespace quantreg
