#include "quantreg/amp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "quantreg/gaussian.hpp"
#include "quantreg/rng.hpp"

namespace quantreg {

namespace {
constexpr std::uint64_t kStreamInit = 101;  // m_bar^0 stream id
}

double AMPConfig::beta_at(int t) const {
  if (anneal == 1.0) return beta;
  return std::min(beta * std::pow(anneal, t), beta_max);
}

void AMPConfig::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("AMPConfig: beta must be positive");
  if (t_max < 1) throw std::invalid_argument("AMPConfig: t_max must be >= 1");
  if (!(damping > 0.0) || damping > 1.0)
    throw std::invalid_argument("AMPConfig: damping must be in (0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("AMPConfig: tol must be positive");
  if (anneal < 1.0) throw std::invalid_argument("AMPConfig: anneal must be >= 1");
  if (lambda < 0.0) throw std::invalid_argument("AMPConfig: lambda must be nonnegative");
}

namespace {

void check_dims(const Dataset& d) {
  if (d.M < 1 || d.N < 1) throw std::invalid_argument("amp: dataset must have M >= 1, N >= 1");
  if (d.X.rows() != d.M || d.X.cols() != d.N || d.y.size() != d.M)
    throw std::invalid_argument("amp: dataset dimensions do not match");
}

// one sweep given the precomputed squared design matrix
AMPState step_impl(const AMPState& s, const Dataset& d, const Eigen::MatrixXd& X2,
                   const Codebook& cb, const AMPConfig& cfg) {
  const int t = s.t + 1;
  const double beta = cfg.beta_at(t);

  AMPState next;
  next.t = t;
  next.V_mu = X2 * s.v;
  const Eigen::ArrayXd vp1_prev = s.V_mu.array() + 1.0;
  const Eigen::ArrayXd inv_vp1 = 1.0 / (next.V_mu.array() + 1.0);
  next.Sigma = (X2.transpose() * inv_vp1.matrix()).array().max(1e-300).inverse();
  next.theta_mu = d.X * s.m_bar -
                  (next.V_mu.array() * (d.y - s.theta_mu).array() / vp1_prev).matrix();
  next.R = s.m_bar + (next.Sigma.array() *
                      (d.X.transpose() * ((d.y - next.theta_mu).array() / vp1_prev).matrix())
                          .array())
                         .matrix();

  next.m_bar.resize(d.N);
  next.v.resize(d.N);
  for (int i = 0; i < d.N; ++i) {
    const FieldContext ctx{1.0, cfg.lambda + 1.0 / next.Sigma[i]};
    const auto [mean, dmean] = phi_beta(next.R[i] / next.Sigma[i], ctx, cb, beta);
    next.m_bar[i] = cfg.damping * mean + (1.0 - cfg.damping) * s.m_bar[i];
    next.v[i] = cfg.damping * dmean + (1.0 - cfg.damping) * s.v[i];
    if (!std::isfinite(next.m_bar[i]) || !std::isfinite(next.v[i]))
      throw std::runtime_error("amp_step: non-finite value at iteration " + std::to_string(t) +
                               ", component " + std::to_string(i));
  }
  return next;
}

}  // namespace

AMPState amp_init(const Dataset& d, const AMPConfig& cfg) {
  check_dims(d);
  cfg.validate();
  AMPState s;
  s.t = 0;
  CounterRng rng(cfg.seed, kStreamInit);
  s.m_bar.resize(d.N);
  for (int i = 0; i < d.N; ++i) s.m_bar[i] = rng.normal();
  s.v = Eigen::VectorXd::Ones(d.N);
  s.V_mu = Eigen::VectorXd::Zero(d.M);
  s.theta_mu = Eigen::VectorXd::Zero(d.M);
  // Sigma^0 from its own update line at V^0 = 0
  s.Sigma = (d.X.cwiseAbs2().transpose() * Eigen::VectorXd::Ones(d.M))
                .array()
                .max(1e-300)
                .inverse();
  s.R = s.m_bar;
  return s;
}

AMPState amp_step(const AMPState& s, const Dataset& d, const Codebook& cb, const AMPConfig& cfg) {
  check_dims(d);
  cfg.validate();
  return step_impl(s, d, d.X.cwiseAbs2(), cb, cfg);
}

AMPResult amp_run(const Dataset& d, const Codebook& cb, const AMPConfig& cfg) {
  AMPState s = amp_init(d, cfg);
  const Eigen::MatrixXd X2 = d.X.cwiseAbs2();

  AMPResult res;
  res.trajectory.reserve(cfg.t_max);
  for (int t = 1; t <= cfg.t_max; ++t) {
    AMPState next = step_impl(s, d, X2, cb, cfg);
    const double diff = (next.m_bar - s.m_bar).squaredNorm() / d.N;
    s = std::move(next);
    res.iterations = t;
    res.trajectory.push_back(
        {t, s.v.mean(), (d.w0 - s.m_bar).squaredNorm() / d.N});
    if (diff < cfg.tol) {
      res.converged = true;
      break;
    }
  }

  res.w_hat.resize(d.N);
  for (int i = 0; i < d.N; ++i) {
    const FieldContext ctx{1.0, cfg.lambda + 1.0 / s.Sigma[i]};
    res.w_hat[i] = phi_star(s.R[i] / s.Sigma[i], ctx, cb);
  }
  res.gen_error = empirical_gen_error(res.w_hat, {d.w0.data(), static_cast<std::size_t>(d.N)},
                                      d.sigma2);
  return res;
}

double empirical_gen_error(std::span<const double> w_hat, std::span<const double> w0,
                           double sigma2) {
  if (w_hat.size() != w0.size())
    throw std::invalid_argument("empirical_gen_error: length mismatch");
  double sq = 0.0;
  for (std::size_t i = 0; i < w_hat.size(); ++i) {
    const double diff = w_hat[i] - w0[i];
    sq += diff * diff;
  }
  return 0.5 * (sigma2 + sq / static_cast<double>(w_hat.size()));
}

double energy(std::span<const double> w, const Dataset& d, const Codebook& cb, double lambda) {
  if (static_cast<int>(w.size()) != d.N) throw std::invalid_argument("energy: length mismatch");
  Eigen::VectorXd q(d.N);
  for (int i = 0; i < d.N; ++i) q[i] = cb.quantize(w[i]);
  return 0.5 * (d.y - d.X * q).squaredNorm() + 0.5 * lambda * q.squaredNorm();
}

}  // namespace quantreg
