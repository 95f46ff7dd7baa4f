#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "quantreg/amp.hpp"
#include "quantreg/codebook.hpp"
#include "quantreg/replica.hpp"

namespace quantreg {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

enum class SweepAxis { Omega, Alpha, Bits, Lambda, Sigma2 };

struct SweepSpec {
  SweepAxis axis = SweepAxis::Omega;
  std::vector<double> grid;          // sorted axis values
  std::vector<int> np_list;          // one curve per n_p (axis values for Bits)
  ModelParams fixed;                 // alpha/rho/sigma2/lambda not swept
  std::vector<QuantScheme> schemes;
  bool warm_start = true;
  double omega = 1.0;                // fixed omega for Alpha/Bits/Lambda/Sigma2 sweeps
  SolveOptions solver;

  void validate() const;
};

struct SweepRow {
  std::string scheme;  // "uniform", "nonuniform" or "ridge"
  int n_p = 0;
  double b = 0.0;
  double omega = 0.0;
  ModelParams params;
  ReplicaSolution sol;
};

void write_rows_csv(const std::vector<SweepRow>& rows, std::ostream& out);

struct PhaseCell {
  int n_p;
  double omega;
  ReplicaSolution sol;
};

struct PhaseDiagramResult {
  std::vector<int> np_list;
  std::vector<double> omega_grid;
  std::vector<PhaseCell> cells;  // row-major: np outer, omega inner
  int count(Phase phase) const;
};

// One replica solution per (n_p, omega) cell, warm-started along omega.
PhaseDiagramResult phase_diagram(const std::vector<int>& np_list,
                                 const std::vector<double>& omega_grid, const ModelParams& p,
                                 QuantScheme scheme, const SolveOptions& opts = {});

std::vector<SweepRow> omega_sweep(const SweepSpec& spec);

struct GridPeak {
  double x = 0.0;      // parabola-refined location
  double x_grid = 0.0; // argmax grid point
  double value = 0.0;
  bool valid = false;
};

GridPeak find_peak(const std::vector<double>& xs, const std::vector<double>& ys);

struct AlphaSweepResult {
  std::vector<SweepRow> rows;  // quantized curves plus "ridge" rows
  struct CurvePeak {
    std::string scheme;
    int n_p;
    double omega;
    GridPeak peak;
  };
  std::vector<CurvePeak> peaks;
  GridPeak ridge_peak;
};

AlphaSweepResult alpha_sweep(const SweepSpec& spec);

// rows per integer n_p for every scheme plus a matching ridge reference row
std::vector<SweepRow> bits_sweep(const SweepSpec& spec);

struct EnsembleSummary {
  int n_runs = 0;
  int n_converged = 0;
  double mean_gen_error = 0.0;
  std::optional<double> stderr_gen_error;  // absent for n_runs < 2
  double replica_gen_error = 0.0;
  Phase replica_phase = Phase::NonConverged;
  bool agree = false;  // |mean - replica| <= 3 * stderr
  std::vector<double> run_gen_errors;
  std::vector<int> run_iterations;
};

// n_runs independent datasets and AMP runs at size N, M = round(alpha*N);
// per-run seeds derived from (cfg.seed, run index). Runs are independent and
// may execute on `threads` workers; results are gathered in run order, so the
// summary does not depend on scheduling.
EnsembleSummary amp_ensemble(const ModelParams& p, const Codebook& cb, int n_runs, int N,
                             const AMPConfig& cfg, int threads = 1);

std::string ensemble_json(const EnsembleSummary& s);

}  // namespace quantreg
