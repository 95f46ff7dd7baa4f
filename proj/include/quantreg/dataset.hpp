#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace quantreg {

// One synthetic instance of the teacher model y = X w0 + eps with
// X entries ~ N(0, 1/N), w0 ~ N(0, rho), eps ~ N(0, sigma2).
struct Dataset {
  Eigen::MatrixXd X;   // M x N
  Eigen::VectorXd y;   // M
  Eigen::VectorXd w0;  // N
  double rho = 1.0;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  int N = 0;
  int M = 0;
};

// Deterministic in the seed; w0, X (row-major order) and eps are drawn from
// disjoint counter streams so they can be reproduced independently.
Dataset generate(int N, int M, double rho, double sigma2, std::uint64_t seed);

// Fixture format: "N,M,rho,sigma2,seed" header + value line, then the w0 row,
// the y row, and M rows of X, all comma separated at full precision.
void save_csv(const Dataset& d, std::ostream& out);
void save_csv(const Dataset& d, const std::string& path);
Dataset load_csv(std::istream& in);
Dataset load_csv(const std::string& path);

}  // namespace quantreg
