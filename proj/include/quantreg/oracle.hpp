#pragma once

#include <vector>

#include "quantreg/codebook.hpp"
#include "quantreg/dataset.hpp"

namespace quantreg {

struct EnumResult {
  std::vector<double> w_hat;  // entries on codebook levels
  double energy = 0.0;
};

// Exhaustive global minimizer of 0.5||y - X d||^2 + (lambda/2)||d||^2 over
// d in levels^N. Requires (n_p+1)^N <= 1e8. Equal-energy ties resolve to the
// lexicographically smallest level-index vector.
EnumResult enumerate_min(const Dataset& d, const Codebook& cb, double lambda);

// (X^T X + lambda I) w = X^T y via LDLT; rejects systems whose residual
// exceeds 1e-8 * ||X^T y||.
Eigen::VectorXd ridge_exact(const Dataset& d, double lambda);

}  // namespace quantreg
