// quantreg: replica saddle points, state evolution, AMP and enumeration
// oracles for quantized linear regression, with CSV/JSON sweep output.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "quantreg/experiments.hpp"
#include "quantreg/oracle.hpp"
#include "quantreg/state_evolution.hpp"

namespace qr = quantreg;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 2;
constexpr int kExitNotConverged = 3;

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n == 1) return {lo};
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, l0 + (l1 - l0) * i / (n - 1)));
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

// config JSON supplies defaults; explicit command-line flags win
class ConfigLayer {
public:
  ConfigLayer(CLI::App* app, std::string path) : app_(app) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    in >> cfg_;
  }

  template <typename T>
  void get(const std::string& flag, const std::string& key, T& value) const {
    if (!cfg_.contains(key)) return;
    if (app_->count(flag) > 0) return;
    value = cfg_.at(key).get<T>();
  }

private:
  CLI::App* app_;
  json cfg_;
};

struct OutStream {
  explicit OutStream(const std::string& path) {
    if (!path.empty()) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw std::invalid_argument("cannot open output: " + path);
    }
  }
  std::ostream& get() { return file ? *file : std::cout; }
  std::unique_ptr<std::ofstream> file;
};

struct ModelFlags {
  double alpha = 1.0, rho = 1.0, sigma2 = 0.0, lambda = 0.0;
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "sample ratio M/N");
    cmd->add_option("--rho", rho, "teacher variance");
    cmd->add_option("--sigma2", sigma2, "noise variance");
    cmd->add_option("--lambda", lambda, "ridge coefficient");
    cmd->add_option("--config", config, "JSON config file (flags override)");
  }

  qr::ModelParams resolve(CLI::App* cmd) const {
    ConfigLayer cfg(cmd, config);
    qr::ModelParams p{alpha, rho, sigma2, lambda};
    cfg.get("--alpha", "alpha", p.alpha);
    cfg.get("--rho", "rho", p.rho);
    cfg.get("--sigma2", "sigma2", p.sigma2);
    cfg.get("--lambda", "lambda", p.lambda);
    return p;
  }
};

struct CodebookFlags {
  std::string scheme = "uniform";
  int n_p = 6;
  double omega = 1.0;

  void attach(CLI::App* cmd, bool allow_ridge = false) {
    cmd->add_option("--scheme", scheme,
                    allow_ridge ? "uniform | nonuniform | ridge" : "uniform | nonuniform");
    cmd->add_option("--np", n_p, "number of subintervals n_p");
    cmd->add_option("--omega", omega, "clipping range");
  }

  void overlay(CLI::App* cmd, const std::string& config) {
    ConfigLayer cfg(cmd, config);
    cfg.get("--scheme", "scheme", scheme);
    cfg.get("--np", "np", n_p);
    cfg.get("--omega", "omega", omega);
  }

  qr::Codebook build() const {
    return qr::Codebook::make(qr::scheme_from_string(scheme), n_p, omega);
  }
};

int cmd_solve(CLI::App* cmd, const ModelFlags& mf, CodebookFlags& cbf, const std::string& out,
              bool strict) {
  const qr::ModelParams p = mf.resolve(cmd);
  cbf.overlay(cmd, mf.config);
  OutStream os(out);

  qr::ReplicaSolution sol;
  std::string scheme = cbf.scheme;
  int n_p = cbf.n_p;
  double b = 0.0, omega = 0.0;
  if (cbf.scheme == "ridge") {
    sol = qr::ridge_saddle(p);
    n_p = 0;
  } else {
    const qr::Codebook cb = cbf.build();
    sol = qr::solve(p, cb);
    b = cb.bits();
    omega = cb.omega();
  }
  os.get() << qr::solution_csv_header() << "\n"
           << qr::solution_csv_row(sol, p, scheme, n_p, b, omega) << "\n";
  if (strict && sol.phase == qr::Phase::NonConverged) return kExitNotConverged;
  return kExitOk;
}

struct GridFlags {
  double omega_min = 0.1, omega_max = 10.0;
  int omega_points = 60;
  std::string np_list = "1,2,3,4,5,6,7,8";

  void attach(CLI::App* cmd) {
    cmd->add_option("--omega-min", omega_min);
    cmd->add_option("--omega-max", omega_max);
    cmd->add_option("--omega-points", omega_points);
    cmd->add_option("--np-list", np_list, "comma separated n_p values");
  }
};

int cmd_phase(CLI::App* cmd, const ModelFlags& mf, GridFlags& gf, const std::string& scheme_name,
              const std::string& out, bool strict) {
  const qr::ModelParams p = mf.resolve(cmd);
  {
    ConfigLayer cfg(cmd, mf.config);
    cfg.get("--omega-min", "omega_min", gf.omega_min);
    cfg.get("--omega-max", "omega_max", gf.omega_max);
    cfg.get("--omega-points", "omega_points", gf.omega_points);
    cfg.get("--np-list", "np_list", gf.np_list);
  }
  const auto nps = parse_int_list(gf.np_list);
  const auto omegas = logspace(gf.omega_min, gf.omega_max, gf.omega_points);
  const auto diagram =
      qr::phase_diagram(nps, omegas, p, qr::scheme_from_string(scheme_name));

  OutStream os(out);
  os.get() << qr::solution_csv_header() << "\n";
  for (const auto& cell : diagram.cells)
    os.get() << qr::solution_csv_row(cell.sol, p, scheme_name, cell.n_p, qr::bits_of(cell.n_p),
                                     cell.omega)
             << "\n";
  if (strict && diagram.count(qr::Phase::NonConverged) > 0) return kExitNotConverged;
  return kExitOk;
}

std::vector<qr::QuantScheme> parse_schemes(const std::string& text) {
  std::vector<qr::QuantScheme> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(qr::scheme_from_string(tok));
  return out;
}

int sweep_exit(const std::vector<qr::SweepRow>& rows, bool strict) {
  if (!strict) return kExitOk;
  for (const auto& r : rows)
    if (r.sol.phase == qr::Phase::NonConverged) return kExitNotConverged;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"typical-case theory and finite-size simulation of quantized linear regression"};
  app.require_subcommand(1);
  app.fallthrough();  // global --out/--strict may appear after the subcommand

  std::string out;
  bool strict = false;
  app.add_option("--out", out, "output path (default stdout)")->capture_default_str();
  app.add_flag("--strict", strict, "exit 3 when a solver fails to converge");

  ModelFlags mf;
  CodebookFlags cbf;
  GridFlags gf;

  // solve
  auto* c_solve = app.add_subcommand("solve", "single replica saddle point");
  mf.attach(c_solve);
  cbf.attach(c_solve, /*allow_ridge=*/true);

  // phase
  auto* c_phase = app.add_subcommand("phase", "RS/RSB phase diagram on the b-omega plane");
  mf.attach(c_phase);
  gf.attach(c_phase);
  std::string phase_scheme = "uniform";
  c_phase->add_option("--scheme", phase_scheme, "uniform | nonuniform");

  // sweep-omega
  auto* c_somega = app.add_subcommand("sweep-omega", "generalization error vs omega");
  mf.attach(c_somega);
  gf.attach(c_somega);
  std::string somega_schemes = "uniform,nonuniform";
  c_somega->add_option("--schemes", somega_schemes, "comma separated scheme list");

  // sweep-alpha
  auto* c_salpha = app.add_subcommand("sweep-alpha", "double descent: error vs alpha");
  mf.attach(c_salpha);
  std::string salpha_schemes = "uniform";
  std::string salpha_nps = "6";
  double alpha_min = 0.5, alpha_max = 2.0;
  int alpha_points = 76;
  double salpha_omega = 2.0;
  std::string peaks_out;
  c_salpha->add_option("--schemes", salpha_schemes);
  c_salpha->add_option("--np-list", salpha_nps);
  c_salpha->add_option("--alpha-min", alpha_min);
  c_salpha->add_option("--alpha-max", alpha_max);
  c_salpha->add_option("--alpha-points", alpha_points);
  c_salpha->add_option("--omega", salpha_omega);
  c_salpha->add_option("--peaks-out", peaks_out, "write peak locations JSON here");

  // sweep-bits
  auto* c_sbits = app.add_subcommand("sweep-bits", "error vs bits with ridge reference");
  mf.attach(c_sbits);
  std::string sbits_schemes = "uniform,nonuniform";
  std::string sbits_nps = "1,2,3,4,5,6,8,10,14,20,30,40,62";
  double sbits_omega = 2.0;
  c_sbits->add_option("--schemes", sbits_schemes);
  c_sbits->add_option("--np-list", sbits_nps);
  c_sbits->add_option("--omega", sbits_omega);

  // se
  auto* c_se = app.add_subcommand("se", "state evolution trajectory");
  mf.attach(c_se);
  cbf.attach(c_se);
  int se_max_iter = 100000;
  c_se->add_option("--max-iter", se_max_iter);

  // amp / amp-ensemble shared flags
  auto* c_amp = app.add_subcommand("amp", "one finite-size AMP run");
  auto* c_ens = app.add_subcommand("amp-ensemble", "seeded AMP ensemble vs replica theory");
  int amp_n = 2500;
  std::uint64_t amp_seed = 0;
  double amp_beta = 100.0, amp_damping = 0.7, amp_tol = 1e-8, amp_anneal = 1.0,
         amp_beta_max = 1e8;
  int amp_tmax = 1000;
  int ens_runs = 100;
  std::string amp_traj_out, amp_dataset, amp_save_dataset;
  for (CLI::App* c : {c_amp, c_ens}) {
    mf.attach(c);
    cbf.attach(c);
    c->add_option("--n", amp_n, "parameter dimension N (M = round(alpha*N))");
    c->add_option("--seed", amp_seed);
    c->add_option("--beta", amp_beta, "denoiser temperature");
    c->add_option("--damping", amp_damping);
    c->add_option("--tol", amp_tol);
    c->add_option("--t-max", amp_tmax);
    c->add_option("--anneal", amp_anneal, "per-iteration beta multiplier");
    c->add_option("--beta-max", amp_beta_max);
  }
  c_amp->add_option("--traj-out", amp_traj_out, "per-iteration CSV t,V_mean,E_emp");
  c_amp->add_option("--dataset", amp_dataset, "load a dataset fixture instead of generating");
  c_amp->add_option("--save-dataset", amp_save_dataset, "write the generated fixture");
  int ens_threads = 1;
  c_ens->add_option("--runs", ens_runs);
  c_ens->add_option("--threads", ens_threads, "worker threads (results are gathered in run order)");

  // oracle
  auto* c_oracle = app.add_subcommand("oracle", "exhaustive minimizer on a tiny instance");
  mf.attach(c_oracle);
  cbf.attach(c_oracle);
  int oracle_n = 6, oracle_m = 9;
  std::uint64_t oracle_seed = 0;
  std::string oracle_dataset;
  bool oracle_with_ridge = false;
  c_oracle->add_option("--n", oracle_n);
  c_oracle->add_option("--m", oracle_m);
  c_oracle->add_option("--seed", oracle_seed);
  c_oracle->add_option("--dataset", oracle_dataset, "load a dataset fixture");
  c_oracle->add_flag("--with-ridge", oracle_with_ridge, "also report the exact ridge solution");

  // dataset
  auto* c_data = app.add_subcommand("dataset", "generate a fixture CSV");
  mf.attach(c_data);
  int data_n = 8, data_m = 12;
  std::uint64_t data_seed = 0;
  c_data->add_option("--n", data_n);
  c_data->add_option("--m", data_m);
  c_data->add_option("--seed", data_seed);

  // plot
  auto* c_plot = app.add_subcommand("plot", "render a sweep CSV as a line-chart SVG");
  std::string plot_csv, plot_x = "omega", plot_y = "E_g";
  bool plot_logx = false, plot_logy = false;
  c_plot->add_option("csv", plot_csv, "input CSV")->required();
  c_plot->add_option("--x", plot_x, "x column");
  c_plot->add_option("--y", plot_y, "y column");
  c_plot->add_flag("--logx", plot_logx);
  c_plot->add_flag("--logy", plot_logy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    if (c_solve->parsed()) return cmd_solve(c_solve, mf, cbf, out, strict);

    if (c_phase->parsed()) return cmd_phase(c_phase, mf, gf, phase_scheme, out, strict);

    if (c_somega->parsed()) {
      qr::SweepSpec spec;
      spec.axis = qr::SweepAxis::Omega;
      spec.fixed = mf.resolve(c_somega);
      {
        ConfigLayer cfg(c_somega, mf.config);
        cfg.get("--omega-min", "omega_min", gf.omega_min);
        cfg.get("--omega-max", "omega_max", gf.omega_max);
        cfg.get("--omega-points", "omega_points", gf.omega_points);
        cfg.get("--np-list", "np_list", gf.np_list);
        cfg.get("--schemes", "schemes", somega_schemes);
      }
      spec.grid = logspace(gf.omega_min, gf.omega_max, gf.omega_points);
      spec.np_list = parse_int_list(gf.np_list);
      spec.schemes = parse_schemes(somega_schemes);
      const auto rows = qr::omega_sweep(spec);
      OutStream os(out);
      qr::write_rows_csv(rows, os.get());
      return sweep_exit(rows, strict);
    }

    if (c_salpha->parsed()) {
      qr::SweepSpec spec;
      spec.axis = qr::SweepAxis::Alpha;
      spec.fixed = mf.resolve(c_salpha);
      spec.grid = linspace(alpha_min, alpha_max, alpha_points);
      spec.np_list = parse_int_list(salpha_nps);
      spec.schemes = parse_schemes(salpha_schemes);
      spec.omega = salpha_omega;
      const auto res = qr::alpha_sweep(spec);
      OutStream os(out);
      qr::write_rows_csv(res.rows, os.get());
      json pk;
      pk["ridge_peak"] = {{"alpha", res.ridge_peak.x}, {"value", res.ridge_peak.value},
                          {"valid", res.ridge_peak.valid}};
      pk["curves"] = json::array();
      for (const auto& c : res.peaks)
        pk["curves"].push_back({{"scheme", c.scheme},
                                {"np", c.n_p},
                                {"omega", c.omega},
                                {"alpha", c.peak.x},
                                {"value", c.peak.value},
                                {"valid", c.peak.valid}});
      if (!peaks_out.empty()) {
        std::ofstream pf(peaks_out);
        pf << pk.dump(2) << "\n";
      } else {
        std::cerr << pk.dump(2) << "\n";
      }
      return sweep_exit(res.rows, strict);
    }

    if (c_sbits->parsed()) {
      qr::SweepSpec spec;
      spec.axis = qr::SweepAxis::Bits;
      spec.fixed = mf.resolve(c_sbits);
      spec.np_list = parse_int_list(sbits_nps);
      spec.grid = {0.0};  // unused for the bits axis
      spec.schemes = parse_schemes(sbits_schemes);
      spec.omega = sbits_omega;
      const auto rows = qr::bits_sweep(spec);
      OutStream os(out);
      qr::write_rows_csv(rows, os.get());
      return sweep_exit(rows, strict);
    }

    if (c_se->parsed()) {
      const qr::ModelParams p = mf.resolve(c_se);
      cbf.overlay(c_se, mf.config);
      qr::SEOptions opts;
      opts.max_iter = se_max_iter;
      const auto traj = qr::se_run(p, cbf.build(), opts);
      OutStream os(out);
      os.get() << qr::se_csv_header() << "\n";
      for (const auto& s : traj.states) os.get() << qr::se_csv_row(s) << "\n";
      if (strict && !traj.converged) return kExitNotConverged;
      return kExitOk;
    }

    if (c_amp->parsed() || c_ens->parsed()) {
      CLI::App* c = c_amp->parsed() ? c_amp : c_ens;
      const qr::ModelParams p = mf.resolve(c);
      cbf.overlay(c, mf.config);
      const qr::Codebook cb = cbf.build();
      qr::AMPConfig cfg;
      cfg.lambda = p.lambda;
      cfg.beta = amp_beta;
      cfg.damping = amp_damping;
      cfg.tol = amp_tol;
      cfg.t_max = amp_tmax;
      cfg.anneal = amp_anneal;
      cfg.beta_max = amp_beta_max;
      cfg.seed = amp_seed;

      if (c_ens->parsed()) {
        const auto summary = qr::amp_ensemble(p, cb, ens_runs, amp_n, cfg, ens_threads);
        OutStream os(out);
        os.get() << qr::ensemble_json(summary) << "\n";
        if (strict && summary.n_converged < summary.n_runs) return kExitNotConverged;
        return kExitOk;
      }

      qr::Dataset data;
      if (!amp_dataset.empty()) {
        data = qr::load_csv(amp_dataset);
      } else {
        const int M = static_cast<int>(std::lround(p.alpha * amp_n));
        data = qr::generate(amp_n, M, p.rho, p.sigma2, amp_seed);
      }
      if (!amp_save_dataset.empty()) qr::save_csv(data, amp_save_dataset);
      const auto res = qr::amp_run(data, cb, cfg);
      if (!amp_traj_out.empty()) {
        std::ofstream tf(amp_traj_out);
        tf << "t,V_mean,E_emp\n";
        char buf[128];
        for (const auto& pt : res.trajectory) {
          std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", pt.t, pt.V_mean, pt.E_emp);
          tf << buf;
        }
      }
      json j;
      j["seed"] = cfg.seed;
      j["converged"] = res.converged;
      j["iterations"] = res.iterations;
      j["gen_error"] = res.gen_error;
      OutStream os(out);
      os.get() << j.dump(2) << "\n";
      if (strict && !res.converged) return kExitNotConverged;
      return kExitOk;
    }

    if (c_oracle->parsed()) {
      const qr::ModelParams p = mf.resolve(c_oracle);
      cbf.overlay(c_oracle, mf.config);
      const qr::Codebook cb = cbf.build();
      qr::Dataset data;
      if (!oracle_dataset.empty())
        data = qr::load_csv(oracle_dataset);
      else
        data = qr::generate(oracle_n, oracle_m, p.rho, p.sigma2, oracle_seed);
      const auto res = qr::enumerate_min(data, cb, p.lambda);
      json j;
      j["energy"] = res.energy;
      j["w_hat"] = res.w_hat;
      j["gen_error"] = qr::empirical_gen_error(
          res.w_hat, {data.w0.data(), static_cast<std::size_t>(data.N)}, data.sigma2);
      if (oracle_with_ridge) {
        const Eigen::VectorXd w = qr::ridge_exact(data, p.lambda_eff());
        j["ridge_w"] = std::vector<double>(w.data(), w.data() + w.size());
      }
      OutStream os(out);
      os.get() << j.dump(2) << "\n";
      return kExitOk;
    }

    if (c_data->parsed()) {
      const qr::ModelParams p = mf.resolve(c_data);
      const auto data = qr::generate(data_n, data_m, p.rho, p.sigma2, data_seed);
      OutStream os(out);
      qr::save_csv(data, os.get());
      return kExitOk;
    }

    if (c_plot->parsed()) {
      extern int render_svg(const std::string& csv_path, const std::string& x_col,
                            const std::string& y_col, bool logx, bool logy,
                            const std::string& out_path);
      return render_svg(plot_csv, plot_x, plot_y, plot_logx, plot_logy, out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
