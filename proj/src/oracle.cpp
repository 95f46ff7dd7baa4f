#include "quantreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quantreg {

EnumResult enumerate_min(const Dataset& d, const Codebook& cb, double lambda) {
  if (d.N < 1 || d.M < 1) throw std::invalid_argument("enumerate_min: empty instance");
  const auto& levels = cb.levels();
  const int base = static_cast<int>(levels.size());
  if (d.N * std::log(static_cast<double>(base)) > std::log(1e8))
    throw std::invalid_argument("enumerate_min: search space exceeds 1e8 states");

  // odometer over level indices; residual r = y - X d kept incrementally
  std::vector<int> idx(d.N, 0);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(d.N, levels[0]);
  Eigen::VectorXd r = d.y - d.X * w;
  double reg = d.N * levels[0] * levels[0];

  auto total_energy = [&] { return 0.5 * r.squaredNorm() + 0.5 * lambda * reg; };

  std::vector<int> best_idx = idx;
  double best_energy = total_energy();

  while (true) {
    // advance the odometer (digit 0 fastest)
    int pos = 0;
    while (pos < d.N) {
      const double old = levels[idx[pos]];
      if (idx[pos] + 1 < base) {
        ++idx[pos];
        const double neu = levels[idx[pos]];
        r -= d.X.col(pos) * (neu - old);
        reg += neu * neu - old * old;
        break;
      }
      idx[pos] = 0;
      r -= d.X.col(pos) * (levels[0] - old);
      reg += levels[0] * levels[0] - old * old;
      ++pos;
    }
    if (pos == d.N) break;  // wrapped around

    const double e = total_energy();
    if (e < best_energy ||
        (e == best_energy && std::lexicographical_compare(idx.begin(), idx.end(),
                                                          best_idx.begin(), best_idx.end()))) {
      best_energy = e;
      best_idx = idx;
    }
  }

  EnumResult out;
  out.w_hat.resize(d.N);
  for (int i = 0; i < d.N; ++i) out.w_hat[i] = levels[best_idx[i]];
  // recompute exactly at the winner; the incremental residual drifts at ~1e-12
  Eigen::VectorXd wb = Eigen::Map<Eigen::VectorXd>(out.w_hat.data(), d.N);
  out.energy = 0.5 * (d.y - d.X * wb).squaredNorm() + 0.5 * lambda * wb.squaredNorm();
  return out;
}

Eigen::VectorXd ridge_exact(const Dataset& d, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("ridge_exact: lambda must be nonnegative");
  const Eigen::MatrixXd gram =
      d.X.transpose() * d.X + lambda * Eigen::MatrixXd::Identity(d.N, d.N);
  const Eigen::VectorXd rhs = d.X.transpose() * d.y;
  const Eigen::VectorXd w = gram.ldlt().solve(rhs);
  const double resid = (gram * w - rhs).norm();
  if (!(resid <= 1e-8 * std::max(rhs.norm(), 1e-300)))
    throw std::runtime_error("ridge_exact: singular or ill-conditioned system");
  return w;
}

}  // namespace quantreg
