#include "quantreg/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace quantreg {

std::string to_string(QuantScheme scheme) {
  return scheme == QuantScheme::Uniform ? "uniform" : "nonuniform";
}

QuantScheme scheme_from_string(const std::string& name) {
  if (name == "uniform") return QuantScheme::Uniform;
  if (name == "nonuniform" || name == "non-uniform") return QuantScheme::NonUniform;
  throw std::invalid_argument("unknown quantization scheme: " + name);
}

namespace {

void check_args(int n_p, double omega) {
  if (n_p < 1) throw std::invalid_argument("n_p must be >= 1");
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("omega must be positive and finite");
}

// mirror the positive half so that d_k == -d_{n_p-k} exactly
std::vector<double> mirror(const std::vector<double>& pos, bool has_zero) {
  std::vector<double> levels;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) levels.push_back(-*it);
  if (has_zero) levels.push_back(0.0);
  for (double v : pos) levels.push_back(v);
  return levels;
}

}  // namespace

Codebook::Codebook(QuantScheme scheme, int n_p, double omega, std::vector<double> levels)
    : levels_(std::move(levels)), n_p_(n_p), omega_(omega), scheme_(scheme) {
  thresholds_.resize(n_p_);
  for (int k = 1; k <= n_p_; ++k)
    thresholds_[k - 1] = 0.5 * (levels_[k - 1] + levels_[k]);
}

Codebook Codebook::uniform(int n_p, double omega) {
  check_args(n_p, omega);
  std::vector<double> pos;
  for (int k = n_p / 2 + 1; k <= n_p; ++k)
    pos.push_back(k == n_p ? omega : (2 * k - n_p) * omega / n_p);
  return Codebook(QuantScheme::Uniform, n_p, omega, mirror(pos, n_p % 2 == 0));
}

Codebook Codebook::non_uniform(int n_p, double omega) {
  check_args(n_p, omega);
  std::vector<double> pos;
  if (n_p % 2 == 1) {
    // central subinterval [-d0, d0], per-half widths doubling outward:
    // positive edges d0 * (2^{j+2} - 3), j = 0 .. (n_p-1)/2
    const double scale = std::exp2((n_p + 3) / 2) - 3.0;  // omega / d0
    const int half = (n_p - 1) / 2;
    for (int j = 0; j <= half; ++j)
      pos.push_back(j == half ? omega : omega * (std::exp2(j + 2) - 3.0) / scale);
    return Codebook(QuantScheme::NonUniform, n_p, omega, mirror(pos, false));
  }
  // even n_p: edge at 0, per-half widths 2*d0, 4*d0, ...:
  // positive edges d0 * (2^{j+1} - 2), j = 1 .. n_p/2
  const double scale = std::exp2((n_p + 2) / 2) - 2.0;
  const int half = n_p / 2;
  for (int j = 1; j <= half; ++j)
    pos.push_back(j == half ? omega : omega * (std::exp2(j + 1) - 2.0) / scale);
  return Codebook(QuantScheme::NonUniform, n_p, omega, mirror(pos, true));
}

Codebook Codebook::make(QuantScheme scheme, int n_p, double omega) {
  return scheme == QuantScheme::Uniform ? uniform(n_p, omega) : non_uniform(n_p, omega);
}

double Codebook::bits() const { return bits_of(n_p_); }

double Codebook::quantize(double w) const {
  if (!std::isfinite(w)) throw std::invalid_argument("quantize: non-finite input");
  const auto hi = std::lower_bound(levels_.begin(), levels_.end(), w);
  if (hi == levels_.begin()) return levels_.front();
  if (hi == levels_.end()) return levels_.back();
  const double above = *hi;
  const double below = *(hi - 1);
  const double d_lo = w - below;
  const double d_hi = above - w;
  if (d_lo < d_hi) return below;
  if (d_hi < d_lo) return above;
  // equidistant: smaller magnitude wins, the symmetric pair resolves positive
  if (std::abs(below) < std::abs(above)) return below;
  if (std::abs(above) < std::abs(below)) return above;
  return above;
}

std::vector<double> Codebook::quantize(std::span<const double> w) const {
  std::vector<double> out(w.size());
  std::transform(w.begin(), w.end(), out.begin(), [this](double x) { return quantize(x); });
  return out;
}

JumpComb Codebook::jumps() const {
  JumpComb comb;
  comb.thresholds = thresholds_;
  comb.gaps.resize(n_p_);
  for (int k = 0; k < n_p_; ++k) comb.gaps[k] = levels_[k + 1] - levels_[k];
  return comb;
}

std::string Codebook::to_json() const {
  nlohmann::json j;
  j["scheme"] = to_string(scheme_);
  j["n_p"] = n_p_;
  j["omega"] = omega_;
  j["levels"] = levels_;
  j["thresholds"] = thresholds_;
  return j.dump();
}

Codebook Codebook::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  return make(scheme_from_string(j.at("scheme").get<std::string>()),
              j.at("n_p").get<int>(), j.at("omega").get<double>());
}

double bits_of(int n_p) {
  if (n_p < 1) throw std::invalid_argument("n_p must be >= 1");
  return std::log2(static_cast<double>(n_p) + 2.0);
}

int np_of_bits(double b) {
  const double raw = std::exp2(b);
  const long long n = std::llround(raw) - 2;
  if (n < 1) throw std::invalid_argument("bits must be >= log2(3)");
  return static_cast<int>(n);
}

}  // namespace quantreg
