#include "quantreg/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace quantreg {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kInvSqrt2 = 0.7071067811865475244008444;
constexpr double kZCut = 12.0;  // N(0,1) mass beyond 12 is ~1.8e-33
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_interval(double a, double b) {
  if (b <= a) return 0.0;
  // 0.5*(erfc(a/sqrt2) - erfc(b/sqrt2)) keeps absolute accuracy in the tails
  return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
}

double phi_star(double u, const FieldContext& ctx, const Codebook& cb) {
  return cb.quantize(u / ctx.theta_hat);
}

PosteriorMoment phi_beta(double u, const FieldContext& ctx, const Codebook& cb, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("phi_beta: beta must be positive");
  const auto& levels = cb.levels();
  double a_max = -std::numeric_limits<double>::infinity();
  std::vector<double> a(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double d = levels[i];
    a[i] = -beta * (0.5 * ctx.theta_hat * d * d - u * d);
    a_max = std::max(a_max, a[i]);
  }
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double w = std::exp(a[i] - a_max);
    z += w;
    m1 += w * levels[i];
    m2 += w * levels[i] * levels[i];
  }
  m1 /= z;
  m2 /= z;
  return {m1, beta * std::max(m2 - m1 * m1, 0.0)};
}

double gauss_second_moment(const FieldContext& ctx, const Codebook& cb) {
  const auto& levels = cb.levels();
  const auto& c = cb.thresholds();
  const double s = ctx.theta_hat / ctx.h;
  double acc = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double lo = (k == 0) ? -std::numeric_limits<double>::infinity() : s * c[k - 1];
    const double hi = (k == c.size()) ? std::numeric_limits<double>::infinity() : s * c[k];
    acc += levels[k] * levels[k] * normal_interval(lo, hi);
  }
  return acc;
}

double gauss_chi(const FieldContext& ctx, const Codebook& cb) {
  const auto& levels = cb.levels();
  const auto& c = cb.thresholds();
  const double s = ctx.theta_hat / ctx.h;
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    acc += (levels[k + 1] - levels[k]) * normal_pdf(s * c[k]);
  return acc / ctx.h;
}

double gauss_at_integral(const FieldContext& ctx, const Codebook& cb) {
  const auto& levels = cb.levels();
  const auto& c = cb.thresholds();
  const double s = ctx.theta_hat / ctx.h;
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double gap = levels[k + 1] - levels[k];
    acc += gap * gap * normal_pdf(s * c[k]);
  }
  return acc / ctx.h;
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n
void legendre_rule(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace

double gauss_quadrature(const std::function<double(double)>& f,
                        std::span<const double> breakpoints, int nodes) {
  if (nodes < 16) throw std::invalid_argument("gauss_quadrature: nodes must be >= 16");
  std::vector<double> pts{-kZCut, kZCut};
  for (double b : breakpoints)
    if (b > -kZCut && b < kZCut) pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  std::vector<double> gx, gw;
  legendre_rule(nodes, gx, gw);

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i];
    const double b = pts[i + 1];
    if (b - a < 1e-14) continue;
    // cap panel width so wide gaps between breakpoints stay resolved
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 1.0)));
    const double step = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * step;
      const double mid = lo + 0.5 * step;
      const double half = 0.5 * step;
      for (int q = 0; q < nodes; ++q) {
        const double z = mid + half * gx[q];
        total += half * gw[q] * f(z) * normal_pdf(z);
      }
    }
  }
  return total;
}

double gauss_quadrature(const std::function<double(double)>& f, int nodes) {
  return gauss_quadrature(f, std::span<const double>{}, nodes);
}

}  // namespace quantreg
