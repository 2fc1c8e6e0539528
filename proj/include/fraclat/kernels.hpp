#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <variant>

namespace fraclat::kernels {

// J(n) = |n|^{-(s+1)}
struct PowerLaw {
  double s;
};
// J(n) = (-1)^n / n^2
struct AlternatingInverseSquare {};
// J(n) = (-1)^n / (Gamma(1 + alpha/2 + n) Gamma(1 + alpha/2 - n))
struct Gruenwald {
  double alpha;
};
// J(n) = (-1)^n / (a^2 - n^2)
struct AlternatingRational {
  double a;
};
// J(n) = 1 / |n|!
struct InverseFactorial {};
// J(+-1) = 1, zero otherwise
struct NearestNeighbor {};
// Defined by its spectrum: spectrum_gap(k) = amplitude * |k|^alpha on |k| <= pi.
struct IdealSpectral {
  double alpha;
  double amplitude;
};

using Family = std::variant<PowerLaw, AlternatingInverseSquare, Gruenwald, AlternatingRational,
                            InverseFactorial, NearestNeighbor, IdealSpectral>;

enum class FamilyTag {
  PowerLaw,
  AlternatingInverseSquare,
  Gruenwald,
  AlternatingRational,
  InverseFactorial,
  NearestNeighbor,
  IdealSpectral
};

// A symmetric coupling J(n) = J(-n). Construction validates parameters.
class InteractionKernel {
 public:
  InteractionKernel(Family family);  // NOLINT(google-explicit-constructor)

  static InteractionKernel power_law(double s) { return {PowerLaw{s}}; }
  static InteractionKernel alternating_inverse_square() { return {AlternatingInverseSquare{}}; }
  static InteractionKernel gruenwald(double alpha) { return {Gruenwald{alpha}}; }
  static InteractionKernel alternating_rational(double a) { return {AlternatingRational{a}}; }
  static InteractionKernel inverse_factorial() { return {InverseFactorial{}}; }
  static InteractionKernel nearest_neighbor() { return {NearestNeighbor{}}; }
  static InteractionKernel ideal_spectral(double alpha, double amplitude) {
    return {IdealSpectral{alpha, amplitude}};
  }

  // powerlaw:s=1.5, gruenwald:alpha=1.5, altinvsq, altrational:a=0.3,
  // invfactorial, nearest, idealspectral:alpha=1.5,amplitude=-3.3423
  static InteractionKernel parse(std::string_view text);
  std::string to_string() const;

  const Family& family() const { return family_; }
  FamilyTag tag() const;

 private:
  Family family_;
};

struct SpectrumSample {
  double k = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;
};

double kernel_value(const InteractionKernel& kernel, long n);

// sum_{n != 0} J(n) = spectrum at k = 0.
double kernel_sum(const InteractionKernel& kernel);

// 2 sum_{n>=1} J(n) cos(n k); k is reduced mod 2pi first.
SpectrumSample spectrum(const InteractionKernel& kernel, double k);

// spectrum(k) - spectrum(0), evaluated without forming the difference.
double spectrum_gap(const InteractionKernel& kernel, double k);

// Compensated partial sum over 1 <= n <= terms with a rigorous remainder
// bound. Not available for IdealSpectral (its J(n) is itself a quadrature).
SpectrumSample spectrum_by_summation(const InteractionKernel& kernel, double k, long terms);

// (1/pi) int_0^pi f(k) cos(n k) dk with 20-point Gauss-Legendre panels,
// geometrically graded toward k = 0 so that |k|^alpha-type kinks are
// integrated at full order. quadrature_points sets the number of nodes of the
// coarse rule; the result is the fine rule (twice the panels) and
// QuadratureError is raised when the two differ by more than 1e-8.
double kernel_from_spectrum(const std::function<double(double)>& spectrum_fn, long n,
                            int quadrature_points);

}  // namespace fraclat::kernels
