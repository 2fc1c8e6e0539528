#pragma once

namespace fraclat::special {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 6.28318530717958647692;

double zeta(double s);

// k - 2*pi*round(k / 2pi), lands in [-pi, pi].
double reduce_angle(double k);

double bernoulli_number(int n);

// B_n(x); with drop_constant the B_n(0) = B_n term is omitted, which gives
// B_n(x) - B_n(0) without cancellation near x = 0.
double bernoulli_polynomial(int n, double x, bool drop_constant = false);

double harmonic(int n);

// Gamma(a) / Gamma(b), stable for large arguments.
double gamma_ratio(double a, double b);

// 2 Gamma(-s) cos(pi s / 2), the small-k amplitude of the power-law gap.
double riesz_amplitude(double s);

struct Series {
  double value = 0.0;
  double tail_bound = 0.0;
};

// C_p(k) = sum_{n>=1} cos(n k) / n^p for p > 1 and |k| <= pi, from the
// expansion of Re Li_p(e^{ik}) about k = 0. drop_constant removes zeta(p),
// i.e. returns C_p(k) - C_p(0).
Series cosine_polylog(double p, double k, bool drop_constant = false);

}  // namespace fraclat::special
