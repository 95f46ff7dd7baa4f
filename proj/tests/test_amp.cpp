#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "quantreg/amp.hpp"
#include "quantreg/gaussian.hpp"
#include "quantreg/replica.hpp"
#include "quantreg/rng.hpp"
#include "quantreg/state_evolution.hpp"

using namespace quantreg;

namespace {

// the 3x2 instance behind the frozen single-sweep reference values
// (tests/tools/gen_reference_values.py)
Dataset fixture_3x2() {
  Dataset d;
  d.N = 2;
  d.M = 3;
  d.rho = 1.0;
  d.sigma2 = 0.0;
  d.X.resize(3, 2);
  d.X << 0.6, -0.2, 0.1, 0.7, -0.5, 0.4;
  d.y.resize(3);
  d.y << 0.25, -0.6, 0.9;
  d.w0.resize(2);
  d.w0 << 0.4, -0.9;
  return d;
}

}  // namespace

TEST_CASE("first sweep with v = 0 zeroes every V_mu") {
  const Dataset d = fixture_3x2();
  const Codebook cb = Codebook::uniform(2, 1.0);
  AMPConfig cfg;
  cfg.lambda = 0.1;
  AMPState s = amp_init(d, cfg);
  s.v.setZero();
  const AMPState next = amp_step(s, d, cb, cfg);
  CHECK(next.V_mu.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one sweep matches the 50-digit transcription") {
  const Dataset d = fixture_3x2();
  const Codebook cb = Codebook::uniform(2, 1.0);
  AMPConfig cfg;
  cfg.lambda = 0.1;
  cfg.beta = 50.0;
  cfg.damping = 0.7;

  AMPState s = amp_init(d, cfg);
  s.m_bar << 0.3, -0.8;  // fixture initial estimate
  s.v.setOnes();
  const AMPState n = amp_step(s, d, cb, cfg);

  CHECK(n.V_mu[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(n.V_mu[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(n.V_mu[2] == doctest::Approx(0.41).epsilon(1e-15));
  CHECK(n.Sigma[0] == doctest::Approx(2.266985162386880426294).epsilon(1e-14));
  CHECK(n.Sigma[1] == doctest::Approx(2.133500497168302278328).epsilon(1e-14));
  CHECK(n.theta_mu[0] == doctest::Approx(0.24).epsilon(1e-14));
  CHECK(n.theta_mu[1] == doctest::Approx(-0.23).epsilon(1e-14));
  CHECK(n.theta_mu[2] == doctest::Approx(-0.839).epsilon(1e-14));
  CHECK(n.R[0] == doctest::Approx(-1.741420138729385823878).epsilon(1e-14));
  CHECK(n.R[1] == doctest::Approx(0.1272193160693441701613).epsilon(1e-13));
  CHECK(n.m_bar[0] == doctest::Approx(-0.6099999999890435786842).epsilon(1e-14));
  CHECK(n.m_bar[1] == doctest::Approx(-0.2399907937369197285282).epsilon(1e-13));
  CHECK(n.v[0] == doctest::Approx(0.3000000005478210657795).epsilon(1e-13));
  CHECK(n.v[1] == doctest::Approx(0.3004626813739745165104).epsilon(1e-13));
}

TEST_CASE("N = M = 1 with y = 0 settles on the zero level at zero energy") {
  Dataset d;
  d.N = d.M = 1;
  d.rho = 1.0;
  d.sigma2 = 0.0;
  d.X.resize(1, 1);
  d.X << 1.0;
  d.y.resize(1);
  d.y << 0.0;
  d.w0.resize(1);
  d.w0 << 0.0;
  const Codebook cb = Codebook::uniform(2, 1.0);
  AMPConfig cfg;
  cfg.lambda = 0.0;
  cfg.seed = 3;
  cfg.anneal = 1.05;
  cfg.beta_max = 1e6;
  const AMPResult res = amp_run(d, cb, cfg);
  CHECK(res.w_hat[0] == 0.0);
  CHECK(energy(res.w_hat, d, cb, 0.0) == 0.0);
}

TEST_CASE("reported estimate lies exactly on codebook levels") {
  const Dataset d = generate(60, 80, 1.0, 0.01, 11);
  const Codebook cb = Codebook::non_uniform(5, 2.0);
  AMPConfig cfg;
  cfg.lambda = 0.01;
  cfg.seed = 4;
  const AMPResult res = amp_run(d, cb, cfg);
  for (double w : res.w_hat)
    CHECK(std::find(cb.levels().begin(), cb.levels().end(), w) != cb.levels().end());
}

TEST_CASE("seed determinism") {
  const Dataset d = generate(40, 56, 1.0, 0.01, 21);
  const Codebook cb = Codebook::uniform(4, 1.5);
  AMPConfig cfg;
  cfg.lambda = 0.01;
  cfg.seed = 77;
  const AMPResult a = amp_run(d, cb, cfg);
  const AMPResult b = amp_run(d, cb, cfg);
  CHECK(a.w_hat == b.w_hat);
  CHECK(a.gen_error == b.gen_error);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
    CHECK(a.trajectory[i].V_mean == b.trajectory[i].V_mean);
    CHECK(a.trajectory[i].E_emp == b.trajectory[i].E_emp);
  }
}

TEST_CASE("empirical_gen_error") {
  const std::vector<double> w0{0.5, -0.5, 1.0, -1.0};
  CHECK(empirical_gen_error(w0, w0, 0.3) == doctest::Approx(0.15));
  const std::vector<double> zero(4, 0.0);
  // ||w0||^2/N = 0.625
  CHECK(empirical_gen_error(zero, w0, 0.1) == doctest::Approx(0.5 * (0.625 + 0.1)));
  CHECK_THROWS_AS(empirical_gen_error(zero, std::vector<double>{1.0}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("empirical_gen_error agrees with a fresh-sample Monte Carlo") {
  const int N = 50;
  const Dataset d = generate(N, 10, 1.0, 0.04, 31);
  const Codebook cb = Codebook::uniform(4, 2.0);
  std::vector<double> w_hat(N);
  for (int i = 0; i < N; ++i) w_hat[i] = cb.quantize(d.w0[i] + 0.3);
  const double formula =
      empirical_gen_error(w_hat, {d.w0.data(), static_cast<std::size_t>(N)}, d.sigma2);

  CounterRng rng(55, 9);
  double acc = 0.0;
  const int draws = 100000;
  const double sq_n = 1.0 / std::sqrt(static_cast<double>(N));
  for (int t = 0; t < draws; ++t) {
    double dot = 0.0;
    for (int i = 0; i < N; ++i) dot += sq_n * rng.normal() * (w_hat[i] - d.w0[i]);
    const double eps = std::sqrt(d.sigma2) * rng.normal();
    acc += 0.5 * (dot - eps) * (dot - eps);
  }
  CHECK(acc / draws == doctest::Approx(formula).epsilon(0.01));
}

TEST_CASE("energy") {
  const Dataset d = fixture_3x2();
  const Codebook cb = Codebook::uniform(2, 1.0);
  // frozen transcription value for phi(m_bar^0) = (0, -1)
  CHECK(energy(std::vector<double>{0.3, -0.8}, d, cb, 0.1) ==
        doctest::Approx(0.90125).epsilon(1e-15));
  // y = 0 and phi(w) = 0
  Dataset z = d;
  z.y.setZero();
  CHECK(energy(std::vector<double>{0.1, -0.2}, z, cb, 0.3) == 0.0);
  CHECK_THROWS_AS(energy(std::vector<double>{1.0}, d, cb, 0.0), std::invalid_argument);

  // residual reduces to the regularizer when the teacher is representable
  const Dataset clean = generate(20, 30, 1.0, 0.0, 8);
  const Codebook fine = Codebook::uniform(4094, 40.0);
  std::vector<double> w0(clean.w0.data(), clean.w0.data() + 20);
  const double e = energy(w0, clean, fine, 0.05);
  Eigen::VectorXd q(20);
  for (int i = 0; i < 20; ++i) q[i] = fine.quantize(w0[i]);
  CHECK(e == doctest::Approx(0.5 * 0.05 * q.squaredNorm()).epsilon(1e-3));
}

TEST_CASE("noiseless overdetermined run reaches the scalar quantization floor") {
  // sigma2 = 0, alpha = 3, fine codebook: the error is pure quantization error
  const int N = 400, M = 1200;
  const Dataset d = generate(N, M, 1.0, 0.0, 91);
  const Codebook cb = Codebook::uniform(62, 5.0);
  AMPConfig cfg;
  cfg.lambda = 1e-6;
  cfg.seed = 91;
  cfg.anneal = 1.03;
  cfg.beta_max = 3e4;
  cfg.damping = 0.5;
  cfg.t_max = 500;
  const AMPResult res = amp_run(d, cb, cfg);

  const double floor = gauss_quadrature(
      [&](double z) {
        const double diff = cb.quantize(z) - z;  // rho = 1
        return diff * diff;
      },
      cb.thresholds(), 32);
  CHECK(res.gen_error <= 0.5 * floor * 1.15);
  CHECK(res.gen_error >= 0.5 * floor * 0.5);
}

TEST_CASE("AMP beats the null estimator on most RS instances") {
  const Codebook cb = Codebook::uniform(6, 2.0);
  int wins = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const Dataset d = generate(50, 70, 1.0, 0.01, 1000 + t);
    AMPConfig cfg;
    cfg.lambda = 0.01;
    cfg.seed = 1000 + t;
    cfg.anneal = 1.03;
    cfg.beta_max = 3e4;
    cfg.damping = 0.5;
    const AMPResult res = amp_run(d, cb, cfg);
    const std::vector<double> null_w(50, 0.0);
    if (energy(res.w_hat, d, cb, cfg.lambda) <= energy(null_w, d, cb, cfg.lambda)) ++wins;
  }
  CHECK(wins >= static_cast<int>(0.95 * trials));
}

TEST_CASE("trajectory tracks state evolution in the RS phase") {
  const ModelParams p{.alpha = 1.4, .rho = 1.0, .sigma2 = 1e-4, .lambda = 0.01};
  const int N = 2500;
  const Codebook cb = Codebook::uniform(6, 3.0);
  const Dataset d = generate(N, 3500, p.rho, p.sigma2, 17);
  const double beta = 20.0;  // smooth denoiser: v_i concentrates at this size
  AMPConfig cfg;
  cfg.lambda = p.lambda;
  cfg.seed = 17;
  cfg.damping = 1.0;  // undamped: the bare dynamics that SE describes
  cfg.beta = beta;
  cfg.t_max = 12;
  cfg.tol = 1e-30;
  const AMPResult res = amp_run(d, cb, cfg);

  // state evolution of the same smoothed denoiser, integrals by quadrature
  // (independent of the closed forms and of the AMP loop)
  double V = 1.0;          // v^0 = 1
  double E = p.rho + 1.0;  // m_bar^0 ~ N(0,1) independent of w0
  for (int t = 1; t <= 10; ++t) {
    const SEState field = make_se_state(V, E, t, p);
    const FieldContext ctx{1.0, field.Lambda};
    std::vector<double> breaks;
    for (double c : cb.thresholds()) {
      const double zk = field.Lambda * c / field.xi;
      // resolve the smoothed jumps, width ~ 1/(beta * gap * xi) in z
      for (int j = -24; j <= 24; ++j) breaks.push_back(zk + j * 0.02);
    }
    const double v_next = gauss_quadrature(
        [&](double z) { return phi_beta(field.xi * z, ctx, cb, beta).dmean_du; }, breaks, 32);
    const double q_next = gauss_quadrature(
        [&](double z) {
          const double mean = phi_beta(field.xi * z, ctx, cb, beta).mean;
          return mean * mean;
        },
        breaks, 32);
    const double m_next = gauss_quadrature(
        [&](double z) { return z * phi_beta(field.xi * z, ctx, cb, beta).mean; }, breaks, 32) /
        field.xi;
    E = p.rho - 2.0 * p.rho * p.alpha / (1.0 + V) * m_next + q_next;
    V = v_next;
    if (t >= 4) {
      const auto& amp_pt = res.trajectory[t - 1];
      REQUIRE(amp_pt.t == t);
      CHECK(std::abs(amp_pt.V_mean - V) / V < 0.05);
      CHECK(std::abs(amp_pt.E_emp - E) / E < 0.05);
    }
  }
}

TEST_CASE("validation") {
  const Dataset d = fixture_3x2();
  const Codebook cb = Codebook::uniform(2, 1.0);
  AMPConfig bad;
  bad.beta = -1.0;
  CHECK_THROWS_AS(amp_run(d, cb, bad), std::invalid_argument);
  Dataset empty = d;
  empty.M = 0;
  empty.X.resize(0, 2);
  empty.y.resize(0);
  CHECK_THROWS_AS(amp_run(empty, cb, AMPConfig{}), std::invalid_argument);
}
