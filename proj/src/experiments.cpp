#include "quantreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "quantreg/dataset.hpp"

namespace quantreg {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return mix(master ^ mix(index + 0x9E3779B97F4A7C15ull));
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("sweep: grid must be sorted");
  if (axis != SweepAxis::Bits && np_list.empty())
    throw std::invalid_argument("sweep: need at least one n_p value");
  if (schemes.empty()) throw std::invalid_argument("sweep: need at least one scheme");
}

void write_rows_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << solution_csv_header() << "\n";
  for (const auto& r : rows)
    out << solution_csv_row(r.sol, r.params, r.scheme, r.n_p, r.b, r.omega) << "\n";
}

int PhaseDiagramResult::count(Phase phase) const {
  return static_cast<int>(
      std::count_if(cells.begin(), cells.end(),
                    [phase](const PhaseCell& c) { return c.sol.phase == phase; }));
}

PhaseDiagramResult phase_diagram(const std::vector<int>& np_list,
                                 const std::vector<double>& omega_grid, const ModelParams& p,
                                 QuantScheme scheme, const SolveOptions& opts) {
  if (np_list.empty() || omega_grid.empty())
    throw std::invalid_argument("phase_diagram: empty grid");
  PhaseDiagramResult out;
  out.np_list = np_list;
  out.omega_grid = omega_grid;
  out.cells.reserve(np_list.size() * omega_grid.size());
  for (int n_p : np_list) {
    SolveOptions cell_opts = opts;
    for (double omega : omega_grid) {
      const Codebook cb = Codebook::make(scheme, n_p, omega);
      const ReplicaSolution sol = solve(p, cb, cell_opts);
      if (sol.phase != Phase::NonConverged) {
        cell_opts.has_init = true;  // continuation along omega
        cell_opts.init = sol.state;
      }
      out.cells.push_back({n_p, omega, sol});
    }
  }
  return out;
}

namespace {

SweepRow make_row(const std::string& scheme, int n_p, double omega, const ModelParams& p,
                  ReplicaSolution sol) {
  SweepRow row;
  row.scheme = scheme;
  row.n_p = n_p;
  row.b = n_p > 0 ? bits_of(n_p) : 0.0;
  row.omega = omega;
  row.params = p;
  row.sol = std::move(sol);
  return row;
}

}  // namespace

std::vector<SweepRow> omega_sweep(const SweepSpec& spec) {
  spec.validate();
  if (spec.axis != SweepAxis::Omega) throw std::invalid_argument("omega_sweep: wrong axis");
  std::vector<SweepRow> rows;
  for (QuantScheme scheme : spec.schemes) {
    for (int n_p : spec.np_list) {
      SolveOptions opts = spec.solver;
      for (double omega : spec.grid) {
        const Codebook cb = Codebook::make(scheme, n_p, omega);
        const ReplicaSolution sol = solve(spec.fixed, cb, opts);
        if (spec.warm_start && sol.phase != Phase::NonConverged) {
          opts.has_init = true;
          opts.init = sol.state;
        }
        rows.push_back(make_row(to_string(scheme), n_p, omega, spec.fixed, sol));
      }
    }
  }
  return rows;
}

GridPeak find_peak(const std::vector<double>& xs, const std::vector<double>& ys) {
  GridPeak peak;
  std::size_t best = xs.size();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!std::isfinite(ys[i])) continue;
    if (best == xs.size() || ys[i] > ys[best]) best = i;
  }
  if (best == xs.size()) return peak;
  peak.valid = true;
  peak.x_grid = peak.x = xs[best];
  peak.value = ys[best];
  if (best > 0 && best + 1 < ys.size() && std::isfinite(ys[best - 1]) &&
      std::isfinite(ys[best + 1])) {
    // parabola through the three points around the peak
    const double x0 = xs[best - 1], x1 = xs[best], x2 = xs[best + 1];
    const double y0 = ys[best - 1], y1 = ys[best], y2 = ys[best + 1];
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0);
    if (curv < 0.0) {
      const double x_ref = 0.5 * (x0 + x1) - d0 / (2.0 * curv);
      if (x_ref >= x0 && x_ref <= x2) peak.x = x_ref;
    }
  }
  return peak;
}

AlphaSweepResult alpha_sweep(const SweepSpec& spec) {
  spec.validate();
  if (spec.axis != SweepAxis::Alpha) throw std::invalid_argument("alpha_sweep: wrong axis");
  AlphaSweepResult out;

  for (QuantScheme scheme : spec.schemes) {
    for (int n_p : spec.np_list) {
      const Codebook cb = Codebook::make(scheme, n_p, spec.omega);
      SolveOptions opts = spec.solver;
      std::vector<double> xs, ys;
      for (double alpha : spec.grid) {
        ModelParams p = spec.fixed;
        p.alpha = alpha;
        const ReplicaSolution sol = solve(p, cb, opts);
        if (spec.warm_start && sol.phase != Phase::NonConverged) {
          opts.has_init = true;
          opts.init = sol.state;
        }
        xs.push_back(alpha);
        ys.push_back(sol.phase == Phase::NonConverged ? std::nan("") : sol.gen_error);
        out.rows.push_back(make_row(to_string(scheme), n_p, spec.omega, p, sol));
      }
      out.peaks.push_back({to_string(scheme), n_p, spec.omega, find_peak(xs, ys)});
    }
  }

  std::vector<double> xs, ys;
  for (double alpha : spec.grid) {
    ModelParams p = spec.fixed;
    p.alpha = alpha;
    const ReplicaSolution sol = ridge_saddle(p, spec.solver);
    xs.push_back(alpha);
    ys.push_back(sol.phase == Phase::NonConverged ? std::nan("") : sol.gen_error);
    out.rows.push_back(make_row("ridge", 0, 0.0, p, sol));
  }
  out.ridge_peak = find_peak(xs, ys);
  return out;
}

std::vector<SweepRow> bits_sweep(const SweepSpec& spec) {
  if (spec.grid.empty() && spec.np_list.empty())
    throw std::invalid_argument("bits_sweep: empty n_p list");
  if (spec.schemes.empty()) throw std::invalid_argument("bits_sweep: need a scheme");
  std::vector<int> nps = spec.np_list;
  if (nps.empty())
    for (double g : spec.grid) nps.push_back(static_cast<int>(std::lround(g)));

  std::vector<SweepRow> rows;
  for (QuantScheme scheme : spec.schemes) {
    SolveOptions opts = spec.solver;
    for (int n_p : nps) {
      const Codebook cb = Codebook::make(scheme, n_p, spec.omega);
      const ReplicaSolution sol = solve(spec.fixed, cb, opts);
      if (spec.warm_start && sol.phase != Phase::NonConverged) {
        opts.has_init = true;
        opts.init = sol.state;
      }
      rows.push_back(make_row(to_string(scheme), n_p, spec.omega, spec.fixed, sol));
    }
  }
  rows.push_back(make_row("ridge", 0, 0.0, spec.fixed, ridge_saddle(spec.fixed, spec.solver)));
  return rows;
}

EnsembleSummary amp_ensemble(const ModelParams& p, const Codebook& cb, int n_runs, int N,
                             const AMPConfig& cfg, int threads) {
  if (n_runs < 1 || N < 1) throw std::invalid_argument("amp_ensemble: bad n_runs/N");
  const int M = static_cast<int>(std::lround(p.alpha * N));
  if (M < 1) throw std::invalid_argument("amp_ensemble: alpha*N rounds to zero samples");

  struct RunOut {
    double gen_error = 0.0;
    int iterations = 0;
    bool converged = false;
  };
  std::vector<RunOut> outs(n_runs);
  auto run_one = [&](int run) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(run));
    const Dataset data = generate(N, M, p.rho, p.sigma2, seed);
    AMPConfig run_cfg = cfg;
    run_cfg.seed = seed;
    run_cfg.lambda = p.lambda;
    const AMPResult res = amp_run(data, cb, run_cfg);
    outs[run] = {res.gen_error, res.iterations, res.converged};
  };

  if (threads <= 1) {
    for (int run = 0; run < n_runs; ++run) run_one(run);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int run = next.fetch_add(1); run < n_runs; run = next.fetch_add(1)) run_one(run);
      });
    for (auto& th : pool) th.join();
  }

  EnsembleSummary s;
  s.n_runs = n_runs;
  for (const RunOut& o : outs) {
    s.run_gen_errors.push_back(o.gen_error);
    s.run_iterations.push_back(o.iterations);
    if (o.converged) ++s.n_converged;
  }

  double mean = 0.0;
  for (double e : s.run_gen_errors) mean += e;
  mean /= n_runs;
  s.mean_gen_error = mean;
  if (n_runs >= 2) {
    double var = 0.0;
    for (double e : s.run_gen_errors) var += (e - mean) * (e - mean);
    var /= (n_runs - 1);
    s.stderr_gen_error = std::sqrt(var / n_runs);
  }

  const ReplicaSolution replica = solve(p, cb);
  s.replica_gen_error = replica.gen_error;
  s.replica_phase = replica.phase;
  if (s.stderr_gen_error)
    s.agree = std::abs(mean - s.replica_gen_error) <= 3.0 * *s.stderr_gen_error;
  return s;
}

std::string ensemble_json(const EnsembleSummary& s) {
  nlohmann::json j;
  j["n_runs"] = s.n_runs;
  j["n_converged"] = s.n_converged;
  j["mean_gen_error"] = s.mean_gen_error;
  if (s.stderr_gen_error)
    j["stderr_gen_error"] = *s.stderr_gen_error;
  else
    j["stderr_gen_error"] = nullptr;
  j["replica_gen_error"] = s.replica_gen_error;
  j["replica_phase"] = to_string(s.replica_phase);
  j["agree"] = s.agree;
  j["run_gen_errors"] = s.run_gen_errors;
  j["run_iterations"] = s.run_iterations;
  return j.dump(2);
}

}  // namespace quantreg
