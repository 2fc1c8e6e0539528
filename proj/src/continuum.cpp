#include "fraclat/continuum.hpp"

#include <algorithm>
#include <cmath>

#include "fraclat/errors.hpp"
#include "fraclat/fft.hpp"
#include "fraclat/special.hpp"

namespace fraclat::continuum {

using special::pi;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr cplx I{0.0, 1.0};

void check_grid(int n, double length) {
  if (!fft::is_power_of_two(n) || n < 2) throw DomainError("field size must be a power of two >= 2");
  if (!(length > 0) || !std::isfinite(length)) throw DomainError("domain length must be positive");
}

void check_order(double alpha, const char* who) {
  if (!(alpha > 0 && alpha <= 2)) throw DomainError(std::string(who) + ": alpha must lie in (0, 2]");
}

double abs_pow(double k, double alpha) {
  const double a = std::abs(k);
  return alpha == 2.0 ? a * a : std::pow(a, alpha);
}

// Everything the integrator needs about one PDE on one grid.
class Problem {
 public:
  Problem(const PdeSpec& spec, int n, double length)
      : spec_(spec), n_(n), length_(length), k_(wavenumbers(n, length)), fft_(n), lambda_(static_cast<size_t>(n)) {
    second_ = is_second_order(spec);
    for (int j = 0; j < n; ++j) lambda_[j] = linear_multiplier(j);
    mask_.assign(static_cast<size_t>(n), true);
    for (int j = 0; j < n; ++j) {
      const int m = j < n / 2 ? j : j - n;
      mask_[j] = 3 * std::abs(m) < n;  // 2/3 rule: keep |m| < N/3
    }
    active_ = nonlinear_present();
  }

  bool second_order() const { return second_; }
  bool nonlinear() const { return active_; }
  const std::vector<cplx>& lambda() const { return lambda_; }
  int size() const { return n_; }

  void to_fourier(std::span<const cplx> u, std::span<cplx> uh) { fft_.forward(u, uh); }
  void to_physical(std::span<const cplx> uh, std::span<cplx> u) {
    fft_.inverse(uh, u);
    const double inv = 1.0 / n_;
    for (auto& x : u) x *= inv;
  }

  // Nonlinear right-hand side in Fourier space for the equation of u
  // (first order) or of u_t (second order).
  void nonlinear_rhs(std::span<const cplx> uh, std::span<cplx> out) {
    std::fill(out.begin(), out.end(), cplx{});
    if (!active_) return;
    std::vector<cplx> ud(uh.begin(), uh.end());
    for (int j = 0; j < n_; ++j)
      if (!mask_[j]) ud[j] = 0.0;
    std::vector<cplx> u(static_cast<size_t>(n_)), prod(static_cast<size_t>(n_)), ph(static_cast<size_t>(n_));
    to_physical(ud, u);

    auto forward_masked = [&](std::vector<cplx>& p, std::vector<cplx>& res) {
      fft_.forward(p, res);
      for (int j = 0; j < n_; ++j)
        if (!mask_[j]) res[j] = 0.0;
    };

    auto wave_like = [&](double ga, double alpha, const Nonlinearity& f, const OnSiteForce& force) {
      const double c2 = quadratic_coefficients(f).second;
      if (c2 != 0.0) {
        for (int i = 0; i < n_; ++i) prod[i] = u[i] * u[i];
        forward_masked(prod, ph);
        for (int j = 0; j < n_; ++j) out[j] += ga * c2 * (-abs_pow(k_[j], alpha)) * ph[j];
      }
      auto coeffs = polynomial_coefficients(force);
      if (coeffs.size() > 1) coeffs[1] = 0.0;  // handled exactly in the linear part
      bool any = false;
      for (double c : coeffs) any = any || c != 0.0;
      if (!any) return;
      for (int i = 0; i < n_; ++i) {
        cplx acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u[i] + *it;
        prod[i] = acc;
      }
      forward_masked(prod, ph);
      for (int j = 0; j < n_; ++j) out[j] += ph[j];
    };

    std::visit(overloaded{
                   [&](const FractionalWave& s) { wave_like(s.ga, s.alpha, s.f, s.force); },
                   [&](const FractionalDiffusion& s) { wave_like(s.ga, s.alpha, s.f, s.force); },
                   [&](const Burgers& s) {
                     for (int i = 0; i < n_; ++i) prod[i] = u[i] * u[i];
                     forward_masked(prod, ph);
                     for (int j = 0; j < n_; ++j) out[j] = -0.5 * s.g1 * I * odd_k(j) * ph[j];
                   },
                   [&](const KdV& s) {
                     for (int i = 0; i < n_; ++i) prod[i] = u[i] * u[i];
                     forward_masked(prod, ph);
                     for (int j = 0; j < n_; ++j) out[j] = 0.5 * s.g1 * I * odd_k(j) * ph[j];
                   },
                   [&](const Boussinesq& s) {
                     for (int i = 0; i < n_; ++i) prod[i] = u[i] * u[i];
                     forward_masked(prod, ph);
                     for (int j = 0; j < n_; ++j) out[j] = s.gprime * s.g2 * k_[j] * k_[j] * ph[j];
                   },
                   [&](const FractionalNLS& s) {
                     for (int i = 0; i < n_; ++i) prod[i] = std::norm(u[i]) * u[i];
                     forward_masked(prod, ph);
                     for (int j = 0; j < n_; ++j) out[j] = -I * s.b * ph[j];
                   },
               },
               spec_);
  }

  // Rough explicit-stability rate of the nonlinear part for the given field.
  double nonlinear_rate(std::span<const cplx> u) const {
    if (!active_) return 0.0;
    double umax = 0.0;
    for (auto x : u) umax = std::max(umax, std::abs(x));
    const double kmax = pi * n_ / length_;
    return std::visit(overloaded{
                          [&](const FractionalWave& s) {
                            return std::sqrt(std::abs(s.ga) * 2.0 * umax * abs_pow(kmax, s.alpha));
                          },
                          [&](const FractionalDiffusion& s) {
                            return std::abs(s.ga) * 2.0 * umax * abs_pow(kmax, s.alpha);
                          },
                          [&](const Burgers& s) { return std::abs(s.g1) * umax * kmax; },
                          [&](const KdV& s) { return std::abs(s.g1) * umax * kmax; },
                          [&](const Boussinesq& s) { return std::sqrt(std::abs(s.gprime * s.g2) * 2.0 * umax) * kmax; },
                          [&](const FractionalNLS& s) { return std::abs(s.b) * umax * umax; },
                      },
                      spec_);
  }

 private:
  // wavenumber for odd-symmetry operators, with the Nyquist mode removed
  double odd_k(int j) const { return j == n_ / 2 ? 0.0 : k_[j]; }

  cplx linear_multiplier(int j) const {
    const double k = k_[j];
    return std::visit(overloaded{
                          [&](const FractionalWave& s) {
                            return cplx(-s.ga * quadratic_coefficients(s.f).first * abs_pow(k, s.alpha) +
                                        linear_force(s.force));
                          },
                          [&](const FractionalDiffusion& s) {
                            return cplx(-s.ga * quadratic_coefficients(s.f).first * abs_pow(k, s.alpha) +
                                        linear_force(s.force));
                          },
                          [&](const Burgers& s) { return cplx(-s.g2 * abs_pow(k, s.alpha.value_or(2.0))); },
                          [&](const KdV& s) {
                            const double kk = odd_k(j);
                            return I * s.g3 * kk * abs_pow(kk, s.alpha.value_or(2.0));
                          },
                          [&](const Boussinesq& s) { return cplx(-s.g2 * k * k + s.g4 * k * k * k * k); },
                          [&](const FractionalNLS& s) { return -I * (s.g * abs_pow(k, s.alpha) + s.omega0); },
                      },
                      spec_);
  }

  static double linear_force(const OnSiteForce& f) {
    const auto c = polynomial_coefficients(f);
    return c.size() > 1 ? c[1] : 0.0;
  }

  bool nonlinear_present() const {
    return std::visit(overloaded{
                          [](const FractionalWave& s) { return nonlinear_parts(s.f, s.force); },
                          [](const FractionalDiffusion& s) { return nonlinear_parts(s.f, s.force); },
                          [](const Burgers& s) { return s.g1 != 0.0; },
                          [](const KdV& s) { return s.g1 != 0.0; },
                          [](const Boussinesq& s) { return s.gprime * s.g2 != 0.0; },
                          [](const FractionalNLS& s) { return s.b != 0.0; },
                      },
                      spec_);
  }

  static bool nonlinear_parts(const Nonlinearity& f, const OnSiteForce& force) {
    if (quadratic_coefficients(f).second != 0.0) return true;
    const auto c = polynomial_coefficients(force);
    for (size_t i = 0; i < c.size(); ++i)
      if (i != 1 && c[i] != 0.0) return true;
    return false;
  }

  PdeSpec spec_;
  int n_;
  double length_;
  std::vector<double> k_;
  fft::ComplexFFT fft_;
  std::vector<cplx> lambda_;
  std::vector<bool> mask_;
  bool second_ = false;
  bool active_ = false;
};

// Exact linear propagator over a time tau, per mode.
struct Propagator {
  bool second = false;
  std::vector<cplx> e;                 // first order: exp(lambda tau)
  std::vector<cplx> c, s, ls;          // second order: [[c, s], [ls, c]]

  Propagator(const std::vector<cplx>& lambda, bool second_order, double tau) : second(second_order) {
    const size_t n = lambda.size();
    if (!second) {
      e.resize(n);
      for (size_t j = 0; j < n; ++j) e[j] = std::exp(lambda[j] * tau);
      return;
    }
    c.resize(n);
    s.resize(n);
    ls.resize(n);
    for (size_t j = 0; j < n; ++j) {
      const double l = lambda[j].real();
      if (l < 0) {
        const double w = std::sqrt(-l);
        c[j] = std::cos(w * tau);
        s[j] = std::sin(w * tau) / w;
        ls[j] = -w * std::sin(w * tau);
      } else if (l > 0) {
        const double m = std::sqrt(l);
        c[j] = std::cosh(m * tau);
        s[j] = std::sinh(m * tau) / m;
        ls[j] = m * std::sinh(m * tau);
      } else {
        c[j] = 1.0;
        s[j] = tau;
        ls[j] = 0.0;
      }
    }
  }

  // y has N (first order) or 2N (u then w) entries.
  void apply(std::span<const cplx> y, std::span<cplx> out) const {
    if (!second) {
      for (size_t j = 0; j < e.size(); ++j) out[j] = e[j] * y[j];
      return;
    }
    const size_t n = c.size();
    for (size_t j = 0; j < n; ++j) {
      const cplx u = y[j], w = y[n + j];
      out[j] = c[j] * u + s[j] * w;
      out[n + j] = ls[j] * u + c[j] * w;
    }
  }
};

struct Integrator {
  Problem& p;
  Propagator full, half;
  size_t dim;

  Integrator(Problem& problem, double h)
      : p(problem),
        full(problem.lambda(), problem.second_order(), h),
        half(problem.lambda(), problem.second_order(), 0.5 * h),
        dim(static_cast<size_t>(problem.size()) * (problem.second_order() ? 2 : 1)) {}

  // Nonlinear term of the first-order system: (0, n(u)) or n(u).
  void rhs(std::span<const cplx> y, std::span<cplx> out) {
    const size_t n = static_cast<size_t>(p.size());
    if (p.second_order()) {
      std::fill(out.begin(), out.begin() + static_cast<long>(n), cplx{});
      p.nonlinear_rhs(y.subspan(0, n), out.subspan(n, n));
    } else {
      p.nonlinear_rhs(y, out);
    }
  }

  // Lawson (integrating-factor) RK4 step.
  void step(std::vector<cplx>& y, double h) {
    if (!p.nonlinear()) {
      std::vector<cplx> out(dim);
      full.apply(y, out);
      y.swap(out);
      return;
    }
    std::vector<cplx> k1(dim), k2(dim), k3(dim), k4(dim), a(dim), b(dim), ey(dim), ehy(dim);
    rhs(y, k1);
    for (size_t i = 0; i < dim; ++i) a[i] = y[i] + 0.5 * h * k1[i];
    half.apply(a, b);
    rhs(b, k2);
    half.apply(y, ehy);
    for (size_t i = 0; i < dim; ++i) a[i] = ehy[i] + 0.5 * h * k2[i];
    rhs(a, k3);
    full.apply(y, ey);
    half.apply(k3, b);
    for (size_t i = 0; i < dim; ++i) a[i] = ey[i] + h * b[i];
    rhs(a, k4);
    full.apply(k1, a);
    for (size_t i = 0; i < dim; ++i) k2[i] += k3[i];
    half.apply(k2, b);
    for (size_t i = 0; i < dim; ++i) y[i] = ey[i] + h / 6.0 * (a[i] + 2.0 * b[i] + k4[i]);
  }
};

SecondOrderState run(const PdeSpec& spec, const Field& u0, const Field* w0, double dt, long steps,
                     const EvolveOptions& opt) {
  validate(spec);
  const int n = u0.size();
  check_grid(n, u0.length);
  if (w0 && (w0->size() != n || w0->length != u0.length)) throw DomainError("evolve: u and u_t grids differ");
  if (!std::isfinite(dt) || dt <= 0) throw DomainError("evolve: dt must be positive");
  if (steps < 0) throw DomainError("evolve: steps must be nonnegative");
  if (steps == 0) {
    SecondOrderState same{u0, w0 ? *w0 : Field{std::vector<cplx>(static_cast<size_t>(n)), u0.length, u0.t}};
    if (opt.observer) opt.observer(0, same.u);
    return same;
  }

  Problem p(spec, n, u0.length);
  const size_t nn = static_cast<size_t>(n);
  std::vector<cplx> y(nn * (p.second_order() ? 2 : 1));
  p.to_fourier(u0.values, std::span<cplx>(y).subspan(0, nn));
  if (p.second_order() && w0) p.to_fourier(w0->values, std::span<cplx>(y).subspan(nn, nn));

  if (opt.warn && p.nonlinear()) {
    const double rate = p.nonlinear_rate(u0.values);
    if (rate * dt > 2.8)
      opt.warn("evolve: dt = " + std::to_string(dt) + " exceeds the explicit stability estimate " +
               std::to_string(2.8 / rate) + " of the nonlinear term");
  }

  Integrator integ(p, dt);
  SecondOrderState out{Field{std::vector<cplx>(nn), u0.length, u0.t}, Field{std::vector<cplx>(nn), u0.length, u0.t}};
  auto unpack = [&](double t) {
    p.to_physical(std::span<const cplx>(y).subspan(0, nn), out.u.values);
    out.u.t = t;
    if (p.second_order()) {
      p.to_physical(std::span<const cplx>(y).subspan(nn, nn), out.w.values);
    }
    out.w.t = t;
  };
  const long every = std::max(1L, opt.every);
  if (opt.observer) {
    unpack(u0.t);
    opt.observer(0, out.u);
  }
  for (long step = 0; step < steps; ++step) {
    integ.step(y, dt);
    for (const auto& x : y)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw InstabilityError("evolve: non-finite spectral coefficient", step);
    if (opt.observer && (step + 1) % every == 0) {
      unpack(u0.t + dt * static_cast<double>(step + 1));
      opt.observer(step + 1, out.u);
    }
  }
  unpack(u0.t + dt * static_cast<double>(steps));
  return out;
}

}  // namespace

Field make_field(std::span<const double> samples, double length) {
  Field f;
  f.values.assign(samples.begin(), samples.end());
  f.length = length;
  check_grid(f.size(), length);
  return f;
}

Field make_field(const std::function<cplx(double)>& profile, int n, double length) {
  check_grid(n, length);
  Field f;
  f.length = length;
  f.values.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) f.values[i] = profile(length * i / n);
  return f;
}

std::vector<double> wavenumbers(int n, double length) {
  std::vector<double> k(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) k[j] = 2.0 * pi / length * (j < n / 2 ? j : j - n);
  return k;
}

std::string family_name(const PdeSpec& spec) {
  return std::visit(overloaded{
                        [](const FractionalWave&) { return "wave"; },
                        [](const FractionalDiffusion&) { return "diffusion"; },
                        [](const Burgers&) { return "burgers"; },
                        [](const KdV&) { return "kdv"; },
                        [](const Boussinesq&) { return "boussinesq"; },
                        [](const FractionalNLS&) { return "nls"; },
                    },
                    spec);
}

bool is_second_order(const PdeSpec& spec) {
  return std::holds_alternative<FractionalWave>(spec) || std::holds_alternative<Boussinesq>(spec);
}

bool is_linear(const PdeSpec& spec) {
  Problem p(spec, 2, 1.0);
  return !p.nonlinear();
}

void validate(const PdeSpec& spec) {
  auto finite = [](double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(std::string("pde: ") + what + " must be finite");
  };
  std::visit(overloaded{
                 [&](const FractionalWave& s) {
                   check_order(s.alpha, "wave");
                   finite(s.ga, "ga");
                 },
                 [&](const FractionalDiffusion& s) {
                   check_order(s.alpha, "diffusion");
                   finite(s.ga, "ga");
                 },
                 [&](const Burgers& s) {
                   if (s.alpha) check_order(*s.alpha, "burgers");
                   finite(s.g1, "g1");
                   finite(s.g2, "g2");
                 },
                 [&](const KdV& s) {
                   if (s.alpha) check_order(*s.alpha, "kdv");
                   finite(s.g1, "g1");
                   finite(s.g3, "g3");
                 },
                 [&](const Boussinesq& s) {
                   finite(s.g2, "g2");
                   finite(s.g4, "g4");
                   finite(s.gprime, "gprime");
                 },
                 [&](const FractionalNLS& s) {
                   check_order(s.alpha, "nls");
                   finite(s.g, "g");
                   finite(s.omega0, "omega0");
                   finite(s.b.real(), "b");
                   finite(s.b.imag(), "b");
                 },
             },
             spec);
}

Field riesz_derivative(const Field& field, double alpha) {
  check_order(alpha, "riesz_derivative");
  const int n = field.size();
  check_grid(n, field.length);
  fft::ComplexFFT fft(n);
  const auto k = wavenumbers(n, field.length);
  std::vector<cplx> uh(static_cast<size_t>(n));
  fft.forward(field.values, uh);
  for (int j = 0; j < n; ++j) uh[j] *= -abs_pow(k[j], alpha) / n;
  Field out{std::vector<cplx>(static_cast<size_t>(n)), field.length, field.t};
  fft.inverse(uh, out.values);
  return out;
}

std::vector<double> gl_weights(double alpha, int count) {
  std::vector<double> w(static_cast<size_t>(std::max(count, 0)));
  if (count > 0) w[0] = 1.0;
  for (int j = 1; j < count; ++j) w[j] = w[j - 1] * (1.0 - (alpha + 1.0) / j);
  return w;
}

std::vector<double> riesz_gl_reference(std::span<const double> samples, double alpha, double dx) {
  if (!(alpha > 1 && alpha < 2)) throw DomainError("riesz_gl_reference: alpha must lie in (1, 2)");
  if (std::abs(alpha - 1.0) < 0.05) throw DomainError("riesz_gl_reference: alpha too close to 1");
  if (!(dx > 0)) throw DomainError("riesz_gl_reference: dx must be positive");
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw DomainError("riesz_gl_reference: need at least two samples");

  // Wrap the slowly decaying weight tail onto the ring, then remove the
  // truncation remainder so that the weights annihilate constants.
  const long terms = 200L * n;
  std::vector<double> wrapped(static_cast<size_t>(n), 0.0);
  double w = 1.0;
  for (long j = 0; j < terms; ++j) {
    if (j > 0) w *= 1.0 - (alpha + 1.0) / static_cast<double>(j);
    wrapped[static_cast<size_t>(j % n)] += w;
  }
  double total = 0.0;
  for (double x : wrapped) total += x;
  for (double& x : wrapped) x -= total / n;

  const double scale = -std::pow(dx, -alpha) / (2.0 * std::cos(pi * alpha / 2.0));
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double left = 0.0, right = 0.0;
    for (int r = 0; r < n; ++r) {
      // D+ uses u_{i-r+1}, D- uses u_{i+r-1}
      left += wrapped[r] * samples[static_cast<size_t>(((i - r + 1) % n + n) % n)];
      right += wrapped[r] * samples[static_cast<size_t>(((i + r - 1) % n + n) % n)];
    }
    out[i] = scale * (left + right);
  }
  return out;
}

cplx continuum_dispersion(const PdeSpec& spec, double k) {
  validate(spec);
  return std::visit(overloaded{
                        [&](const FractionalWave& s) {
                          return cplx(-s.ga * quadratic_coefficients(s.f).first * abs_pow(k, s.alpha) +
                                      (polynomial_coefficients(s.force).size() > 1
                                           ? polynomial_coefficients(s.force)[1]
                                           : 0.0));
                        },
                        [&](const FractionalDiffusion& s) {
                          return cplx(-s.ga * quadratic_coefficients(s.f).first * abs_pow(k, s.alpha) +
                                      (polynomial_coefficients(s.force).size() > 1
                                           ? polynomial_coefficients(s.force)[1]
                                           : 0.0));
                        },
                        [&](const Burgers& s) { return cplx(-s.g2 * abs_pow(k, s.alpha.value_or(2.0))); },
                        [&](const KdV& s) { return I * s.g3 * k * abs_pow(k, s.alpha.value_or(2.0)); },
                        [&](const Boussinesq& s) { return cplx(-s.g2 * k * k + s.g4 * k * k * k * k); },
                        [&](const FractionalNLS& s) { return -I * (s.g * abs_pow(k, s.alpha) + s.omega0); },
                    },
                    spec);
}

Field evolve(const PdeSpec& spec, const Field& field, double dt, long steps, const EvolveOptions& options) {
  return run(spec, field, nullptr, dt, steps, options).u;
}

SecondOrderState evolve(const PdeSpec& spec, const SecondOrderState& state, double dt, long steps,
                        const EvolveOptions& options) {
  return run(spec, state.u, &state.w, dt, steps, options);
}

Field resample(const Field& field, int n) {
  const int m = field.size();
  check_grid(m, field.length);
  check_grid(n, field.length);
  if (n == m) return field;
  Field out{std::vector<cplx>(static_cast<size_t>(n)), field.length, field.t};
  if (n < m) {
    // the interpolant reproduces the samples on the fine grid
    const int stride = m / n;
    for (int i = 0; i < n; ++i) out.values[i] = field.values[static_cast<size_t>(i * stride)];
    return out;
  }
  fft::ComplexFFT small(m), large(n);
  std::vector<cplx> a(static_cast<size_t>(m)), b(static_cast<size_t>(n), cplx{});
  small.forward(field.values, a);
  for (int j = 0; j < m / 2; ++j) b[j] = a[j];
  for (int j = 1; j < m / 2; ++j) b[n - j] = a[m - j];
  b[m / 2] = 0.5 * a[m / 2];
  b[n - m / 2] = 0.5 * a[m / 2];
  large.inverse(b, out.values);
  for (auto& x : out.values) x /= static_cast<double>(m);
  return out;
}

double l2_norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (auto x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

}  // namespace fraclat::continuum
