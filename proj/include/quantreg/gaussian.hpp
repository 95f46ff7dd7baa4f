#pragma once

#include <functional>
#include <span>

#include "quantreg/codebook.hpp"

namespace quantreg {

double normal_pdf(double x);
double normal_cdf(double x);
// P(a < z < b) for standard normal z, accurate in both tails
double normal_interval(double a, double b);

// Effective scalar-problem context: field scale h and curvature theta_hat.
struct FieldContext {
  double h;
  double theta_hat;
};

// argmin over levels of 0.5*theta_hat*d^2 - u*d; equals quantize(u/theta_hat)
double phi_star(double u, const FieldContext& ctx, const Codebook& cb);

struct PosteriorMoment {
  double mean;
  double dmean_du;  // beta * posterior variance, always >= 0
};

// Finite-temperature posterior over the levels with energy
// 0.5*theta_hat*d^2 - u*d at inverse temperature beta.
PosteriorMoment phi_beta(double u, const FieldContext& ctx, const Codebook& cb, double beta);

// E[ phi_star(h z)^2 ] over z ~ N(0,1)
double gauss_second_moment(const FieldContext& ctx, const Codebook& cb);

// E[ d(phi_star)/d(hz) ]: the jump comb against the normal density,
// (1/h) * sum_k gap_k * pdf(theta_hat * c_k / h)
double gauss_chi(const FieldContext& ctx, const Codebook& cb);

// E[ (d(phi_star)/d(hz))^2 ] under the squared-jump comb evaluation,
// (1/h) * sum_k gap_k^2 * pdf(theta_hat * c_k / h)
double gauss_at_integral(const FieldContext& ctx, const Codebook& cb);

// Quadrature of int Dz f(z) by Gauss-Legendre panels between breakpoints
// (clipped to [-12, 12]); >= 10 digits for piecewise-smooth f. Independent
// of the closed forms above.
double gauss_quadrature(const std::function<double(double)>& f,
                        std::span<const double> breakpoints, int nodes = 24);
double gauss_quadrature(const std::function<double(double)>& f, int nodes = 24);

}  // namespace quantreg
