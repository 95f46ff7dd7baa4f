#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "quantreg/rng.hpp"
#include "quantreg/state_evolution.hpp"

using namespace quantreg;

TEST_CASE("initial state") {
  const ModelParams p{.alpha = 1.4, .rho = 1.0, .sigma2 = 1e-4, .lambda = 0.01};
  const SEState s = make_se_state(0.0, p.rho, 0, p);
  CHECK(s.xi ==
        doctest::Approx(std::sqrt(p.alpha * p.alpha * p.rho + p.alpha * (p.sigma2 + p.rho))));
  CHECK(s.Lambda == doctest::Approx(p.lambda + p.alpha));
}

TEST_CASE("fixed point matches the replica solution") {
  const ModelParams p{.alpha = 1.4, .rho = 1.0, .sigma2 = 1e-4, .lambda = 0.01};
  const Codebook cb = Codebook::uniform(6, 3.0);
  SEOptions opts;
  opts.tol = 1e-12;
  const SETrajectory traj = se_run(p, cb, opts);
  REQUIRE(traj.converged);
  SolveOptions ropts;
  ropts.tol = 1e-12;
  const ReplicaSolution rep = solve(p, cb, ropts);
  REQUIRE(rep.phase != Phase::NonConverged);

  const SEState& fix = traj.back();
  CHECK(std::abs(fix.V - rep.state.chi) <= 1e-8);
  CHECK(std::abs(fix.E - (rep.state.Q - 2.0 * rep.state.m + p.rho)) <= 1e-8);
  // induced field parameters coincide with the replica ones
  CHECK(fix.xi == doctest::Approx(rep.state.h).epsilon(1e-7));
  CHECK(fix.Lambda == doctest::Approx(rep.state.theta_hat).epsilon(1e-7));
  // AMP linear stability equals the replica stability value
  CHECK(amp_fixed_point_stability(fix, p, cb) == doctest::Approx(rep.stability).epsilon(1e-7));
}

TEST_CASE("correspondence on a random parameter grid") {
  CounterRng rng(31, 0);
  int checked = 0;
  for (int i = 0; i < 25 && checked < 12; ++i) {
    const ModelParams p{.alpha = 0.5 + 2.5 * rng.uniform(),
                        .rho = 1.0,
                        .sigma2 = 1e-4 + rng.uniform(),
                        .lambda = 0.01 + 0.3 * rng.uniform()};
    const int n_p = 2 + static_cast<int>(rng.next_u64() % 6);
    const Codebook cb = Codebook::uniform(n_p, 0.5 + 4.0 * rng.uniform());
    SEOptions opts;
    opts.tol = 1e-12;
    SolveOptions ropts;
    ropts.tol = 1e-12;
    const SETrajectory traj = se_run(p, cb, opts);
    const ReplicaSolution rep = solve(p, cb, ropts);
    if (!traj.converged || rep.phase == Phase::NonConverged) continue;
    ++checked;
    CHECK(std::abs(traj.back().V - rep.state.chi) <= 1e-8);
    CHECK(std::abs(traj.back().E - (rep.state.Q - 2.0 * rep.state.m + p.rho)) <= 1e-8);
  }
  CHECK(checked >= 8);
}

TEST_CASE("noise blows up the error fixed point") {
  const Codebook cb = Codebook::uniform(4, 2.0);
  double prev = 0.0;
  for (double sigma2 : {0.01, 1.0, 100.0, 10000.0}) {
    const ModelParams p{.alpha = 1.5, .rho = 1.0, .sigma2 = sigma2, .lambda = 0.1};
    const SETrajectory traj = se_run(p, cb);
    REQUIRE(traj.converged);
    CHECK(traj.back().E > prev);
    prev = traj.back().E;
  }
  CHECK(prev > 1.0);  // far beyond rho: noise dominated
}

TEST_CASE("near-identity denoiser trajectory is monotone from the cold start") {
  // wide fine codebook approximates the ridge denoiser
  const ModelParams p{.alpha = 2.0, .rho = 1.0, .sigma2 = 0.5, .lambda = 0.1};
  const Codebook cb = Codebook::uniform(4000, 50.0);
  const SETrajectory traj = se_run(p, cb);
  REQUIRE(traj.converged);
  for (std::size_t i = 1; i < traj.states.size(); ++i)
    CHECK(traj.states[i].E <= traj.states[i - 1].E + 1e-10);
}

TEST_CASE("options and errors") {
  const ModelParams p{.alpha = 1.0, .rho = 1.0, .sigma2 = 0.1, .lambda = 0.1};
  const Codebook cb = Codebook::uniform(2, 1.0);
  SEOptions bad;
  bad.max_iter = 0;
  CHECK_THROWS_AS(se_run(p, cb, bad), std::invalid_argument);

  SEOptions one;
  one.max_iter = 3;
  one.tol = 1e-18;
  const SETrajectory traj = se_run(p, cb, one);
  CHECK(!traj.converged);
  CHECK(traj.states.size() == 4);  // initial state plus three iterates
  CHECK(traj.states[0].t == 0);
  CHECK(traj.states[3].t == 3);
}

TEST_CASE("csv") {
  const ModelParams p{.alpha = 1.0, .rho = 1.0, .sigma2 = 0.1, .lambda = 0.1};
  const SEState s = make_se_state(0.25, 0.5, 3, p);
  CHECK(se_csv_header() == "t,V,E,xi,Lambda");
  CHECK(se_csv_row(s).find("3,0.25,0.5,") == 0);
}
