#include "fraclat/special.hpp"

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclat/errors.hpp"

namespace fraclat::special {

namespace {

bool is_integer(double x) { return std::floor(x) == x; }

// Ratio of consecutive expansion terms tends to (k / 2pi)^2; the remainder
// after a term of size |t| is bounded by a geometric tail with some slack.
double geometric_tail(double last_term, double k) {
  const double rho = std::min(0.95, 1.5 * (k / two_pi) * (k / two_pi));
  return 2.0 * std::abs(last_term) * rho / (1.0 - rho);
}

}  // namespace

double zeta(double s) {
  if (s == 1.0) throw DomainError("zeta: pole at s = 1");
  if (s < 0 && is_integer(s) && std::fmod(-s, 2.0) == 0.0) return 0.0;
  return boost::math::zeta(s);
}

double reduce_angle(double k) {
  if (!std::isfinite(k)) throw DomainError("reduce_angle: non-finite wavenumber");
  if (std::abs(k) <= pi) return k;
  const double r = k - two_pi * std::round(k / two_pi);
  return std::clamp(r, -pi, pi);
}

double bernoulli_number(int n) {
  if (n < 0) throw DomainError("bernoulli_number: negative index");
  if (n == 0) return 1.0;
  if (n == 1) return -0.5;
  if (n % 2) return 0.0;
  return boost::math::bernoulli_b2n<double>(n / 2);
}

double bernoulli_polynomial(int n, double x, bool drop_constant) {
  // sum_{j} C(n, j) B_j x^{n-j}, Horner in x from the B_0 end.
  double acc = 0.0;
  double binom = 1.0;
  const int last = drop_constant ? n - 1 : n;
  for (int j = 0; j <= last; ++j) {
    acc = acc * x + binom * bernoulli_number(j);
    binom = binom * (n - j) / (j + 1);
  }
  if (drop_constant) acc *= x;
  return acc;
}

double harmonic(int n) {
  double h = 0.0;
  for (int i = n; i >= 1; --i) h += 1.0 / i;
  return h;
}

double gamma_ratio(double a, double b) { return boost::math::tgamma_ratio(a, b); }

double riesz_amplitude(double s) {
  if (s <= 0 || is_integer(s)) throw DomainError("riesz_amplitude: s must be positive and non-integer");
  return 2.0 * boost::math::tgamma(-s) * std::cos(pi * s / 2.0);
}

Series cosine_polylog(double p, double k, bool drop_constant) {
  if (!(p > 1.0)) throw DomainError("cosine_polylog: order must exceed 1");
  k = std::abs(reduce_angle(k));
  if (k == 0.0) return {drop_constant ? 0.0 : zeta(p), 0.0};

  constexpr double rel_tol = 1e-17;
  constexpr int max_terms = 90;
  const double s = p - 1.0;
  const double k2 = k * k;

  double sum = 0.0;
  double comp = 0.0;
  auto add = [&](double t) {  // Neumaier
    const double y = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - y) + t;
    else
      comp += (t - y) + sum;
    sum = y;
  };

  if (!is_integer(p)) {
    add(boost::math::tgamma(-s) * std::cos(pi * s / 2.0) * std::pow(k, s));
    double power = 1.0;  // k^{2m} / (2m)!
    double last = 0.0;
    int small = 0;
    for (int m = 0; m < max_terms; ++m) {
      if (m > 0) power *= k2 / ((2.0 * m - 1.0) * (2.0 * m));
      if (m == 0 && drop_constant) continue;
      const double t = zeta(p - 2.0 * m) * power * (m % 2 ? -1.0 : 1.0);
      add(t);
      last = t;
      if (std::abs(t) < rel_tol * std::abs(sum + comp)) {
        if (++small >= 2) break;
      } else {
        small = 0;
      }
    }
    return {sum + comp, geometric_tail(last, k)};
  }

  // Integer order: the j = p-1 term carries the logarithm (p-1 even) or the
  // |k|^{p-1} kink (p-1 odd); every other even j contributes zeta(p-j).
  const int ip = static_cast<int>(p);
  const int js = ip - 1;
  double power = 1.0;  // k^j / j!
  double last = 0.0;
  int small = 0;
  for (int j = 0; j < 2 * max_terms; ++j) {
    if (j > 0) power *= k / j;
    double t = 0.0;
    if (j == js) {
      if (js % 2 == 0)
        t = ((js / 2) % 2 ? -1.0 : 1.0) * power * (harmonic(js) - std::log(k));
      else
        t = (((js + 1) / 2) % 2 ? -1.0 : 1.0) * (pi / 2.0) * power;
    } else if (j % 2 == 0) {
      if (j == 0 && drop_constant) continue;
      t = ((j / 2) % 2 ? -1.0 : 1.0) * zeta(p - j) * power;
    } else {
      continue;
    }
    add(t);
    if (j > js) {
      last = t;
      if (std::abs(t) < rel_tol * std::abs(sum + comp)) {
        if (++small >= 2) break;
      } else if (t != 0.0) {
        small = 0;
      }
    }
  }
  return {sum + comp, geometric_tail(last, k)};
}

}  // namespace fraclat::special
