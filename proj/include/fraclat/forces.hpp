#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fraclat {

// f(u) inside the interaction sum.
struct IdentityMap {};
struct SquareMap {};  // f(u) = u^2
struct QuadraticShift {
  double gprime;  // f(u) = u - g' u^2
};
using Nonlinearity = std::variant<IdentityMap, SquareMap, QuadraticShift>;

double apply(const Nonlinearity& f, double u);
std::complex<double> apply(const Nonlinearity& f, std::complex<double> u);
bool is_identity(const Nonlinearity& f);
// coefficients (c1, c2) of f(u) = c1 u + c2 u^2
std::pair<double, double> quadratic_coefficients(const Nonlinearity& f);

// identity | square | quadshift:g=0.1
Nonlinearity parse_nonlinearity(std::string_view text);
std::string to_string(const Nonlinearity& f);

// On-site force F(u).
struct NoForce {};
struct LinearForce {
  double c;  // F = c u
};
struct CubicForce {
  double b;  // F = b u^3
};
struct PolynomialForce {
  std::vector<double> coeffs;  // F = sum_i coeffs[i] u^i
};
using OnSiteForce = std::variant<NoForce, LinearForce, CubicForce, PolynomialForce>;

// F as sum_i c_i u^i
std::vector<double> polynomial_coefficients(const OnSiteForce& force);
double evaluate(const OnSiteForce& force, double u);
std::complex<double> evaluate(const OnSiteForce& force, std::complex<double> u);
// V(u) with F = -V', V(0) = 0
double potential(const OnSiteForce& force, double u);
bool is_none(const OnSiteForce& force);

// none | linear:c=-1 | cubic:b=0.5 | poly:0,1,0,-0.2
OnSiteForce parse_force(std::string_view text);
std::string to_string(const OnSiteForce& force);

}  // namespace fraclat
