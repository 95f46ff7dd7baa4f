#pragma once

#include <span>
#include <string>
#include <vector>

namespace quantreg {

enum class QuantScheme { Uniform, NonUniform };

std::string to_string(QuantScheme scheme);
QuantScheme scheme_from_string(const std::string& name);

// Threshold/jump pairs (c_k, d_k - d_{k-1}) describing the staircase
// structure of the quantization map; the gaps sum to 2*omega.
struct JumpComb {
  std::vector<double> thresholds;
  std::vector<double> gaps;
  std::size_t size() const { return thresholds.size(); }
};

// A symmetric quantizer codebook: n_p + 1 sorted levels spanning [-omega, omega]
// with midpoint decision thresholds. Immutable after construction.
class Codebook {
public:
  static Codebook uniform(int n_p, double omega);
  static Codebook non_uniform(int n_p, double omega);
  static Codebook make(QuantScheme scheme, int n_p, double omega);

  const std::vector<double>& levels() const { return levels_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  int n_p() const { return n_p_; }
  double omega() const { return omega_; }
  QuantScheme scheme() const { return scheme_; }
  double bits() const;

  // Nearest level, clipping to [-omega, omega]. Exact-threshold ties go to
  // the level of smaller magnitude; the symmetric tie at 0 (odd n_p) goes to
  // the positive level.
  double quantize(double w) const;
  std::vector<double> quantize(std::span<const double> w) const;

  JumpComb jumps() const;

  std::string to_json() const;
  static Codebook from_json(const std::string& text);

private:
  Codebook(QuantScheme scheme, int n_p, double omega, std::vector<double> levels);

  std::vector<double> levels_;
  std::vector<double> thresholds_;
  int n_p_;
  double omega_;
  QuantScheme scheme_;
};

// b = log2(n_p + 2); n_p is the primitive, b the reported axis
double bits_of(int n_p);
int np_of_bits(double b);

}  // namespace quantreg
