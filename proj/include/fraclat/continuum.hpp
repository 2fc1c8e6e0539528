#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fraclat/forces.hpp"

namespace fraclat::continuum {

using cplx = std::complex<double>;

struct Field {
  std::vector<cplx> values;
  double length = 0.0;
  double t = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  double dx() const { return length / static_cast<double>(values.size()); }
};

Field make_field(std::span<const double> samples, double length);
Field make_field(const std::function<cplx(double)>& profile, int n, double length);
// (2pi/L) * {0, 1, ..., N/2-1, -N/2, ..., -1}
std::vector<double> wavenumbers(int n, double length);

// u_tt = GA d^alpha f(u) + F(u)   (alpha = 2 is the classical second derivative)
struct FractionalWave {
  double alpha = 2.0;
  double ga = 1.0;
  Nonlinearity f = IdentityMap{};
  OnSiteForce force = NoForce{};
};
// u_t = GA d^alpha f(u) + F(u)
struct FractionalDiffusion {
  double alpha = 2.0;
  double ga = 1.0;
  Nonlinearity f = IdentityMap{};
  OnSiteForce force = NoForce{};
};
// u_t = -G1 u u_x + G2 u_xx, or with the dissipative term G_alpha d^alpha u
struct Burgers {
  double g1 = 1.0;
  double g2 = 0.0;
  std::optional<double> alpha;  // set: fractional dissipation of this order with coefficient g2
};
// u_t = G1 u u_x - G3 u_xxx, or with -G3 d_x d^alpha u
struct KdV {
  double g1 = 1.0;
  double g3 = 1.0;
  std::optional<double> alpha;
};
// u_tt = G2 u_xx + G4 u_xxxx - g' G2 (u^2)_xx
struct Boussinesq {
  double g2 = 1.0;
  double g4 = 0.0;
  double gprime = 0.0;
};
// u_t = -i (G |k|^alpha + omega0) u - i b |u|^2 u in Fourier form; complex b adds
// Ginzburg-Landau gain or damping
struct FractionalNLS {
  double alpha = 2.0;
  double g = 1.0;
  double omega0 = 0.0;
  cplx b = 0.0;
};

using PdeSpec = std::variant<FractionalWave, FractionalDiffusion, Burgers, KdV, Boussinesq, FractionalNLS>;

std::string family_name(const PdeSpec& spec);
bool is_second_order(const PdeSpec& spec);
bool is_linear(const PdeSpec& spec);
void validate(const PdeSpec& spec);

// F^{-1}{ -|k|^alpha F{u} }
Field riesz_derivative(const Field& field, double alpha);

// Shifted Gruenwald-Letnikov weights g_j = (-1)^j binom(alpha, j), j < count.
std::vector<double> gl_weights(double alpha, int count);

// Real-space Riesz derivative -(D+ + D-)/(2 cos(pi alpha/2)) with shifted
// Gruenwald-Letnikov sums, first order in dx, periodic samples.
std::vector<double> riesz_gl_reference(std::span<const double> samples, double alpha, double dx);

// Linear mode multiplier; second-order families act on u_tt.
cplx continuum_dispersion(const PdeSpec& spec, double k);

struct SecondOrderState {
  Field u;
  Field w;  // u_t
};

struct EvolveOptions {
  // called once when dt exceeds the explicit stability estimate of the nonlinear part
  std::function<void(const std::string&)> warn;
  // called after every `every` steps with (step, field)
  std::function<void(long, const Field&)> observer;
  long every = 1;
};

// Second-order families start from rest (u_t = 0).
Field evolve(const PdeSpec& spec, const Field& field, double dt, long steps, const EvolveOptions& options = {});
SecondOrderState evolve(const PdeSpec& spec, const SecondOrderState& state, double dt, long steps,
                        const EvolveOptions& options = {});

// Evaluates the trigonometric interpolant of a periodic field at n equispaced
// points (n a power of two; coarser grids are exact subsamples).
Field resample(const Field& field, int n);

double l2_norm(std::span<const cplx> v);

}  // namespace fraclat::continuum
