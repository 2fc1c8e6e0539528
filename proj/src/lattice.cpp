#include "fraclat/lattice.hpp"

#include <cmath>

#include "fraclat/errors.hpp"
#include "fraclat/fft.hpp"
#include "fraclat/special.hpp"

namespace fraclat::lattice {

namespace {

void require_finite(std::span<const double> a, const char* what) {
  for (double x : a)
    if (!std::isfinite(x)) throw InstabilityError(std::string("non-finite ") + what, 0);
}

double neumaier_sum(std::span<const double> a) {
  double sum = 0.0, comp = 0.0;
  for (double t : a) {
    const double y = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - y) + t : (t - y) + sum;
    sum = y;
  }
  return sum + comp;
}

}  // namespace

std::string to_string(InteractionForm f) { return f == InteractionForm::Invariant ? "invariant" : "noninvariant"; }
std::string to_string(TimeOrder o) { return o == TimeOrder::First ? "first" : "second"; }
std::string to_string(RingCoupling r) { return r == RingCoupling::Periodized ? "periodized" : "truncated"; }

void LatticeConfig::validate() const {
  if (!fft::is_power_of_two(n_sites) || n_sites < 16)
    throw DomainError("n_sites must be a power of two >= 16 (got " + std::to_string(n_sites) + ")");
  if (!(dx > 0) || !std::isfinite(dx)) throw DomainError("dx must be positive");
  if (!std::isfinite(coupling)) throw DomainError("coupling must be finite");
}

LatticeState rest_state(const LatticeConfig& config, std::vector<double> u) {
  if (static_cast<int>(u.size()) != config.n_sites) throw DomainError("rest_state: size mismatch");
  LatticeState s;
  s.v.assign(u.size(), 0.0);
  s.u = std::move(u);
  return s;
}

RingInteraction::RingInteraction(const kernels::InteractionKernel& kernel, int n, RingCoupling ring)
    : n_(n), c_(static_cast<size_t>(n), 0.0), fft_(std::make_unique<fft::RealFFT>(n)) {
  if (!fft::is_power_of_two(n) || n < 2) throw DomainError("RingInteraction: size must be a power of two");
  const int half = n / 2;
  work_.resize(static_cast<size_t>(half + 1));
  if (ring == RingCoupling::Periodized) {
    // c = inverse DFT of the chain spectrum sampled at the ring modes; the
    // spectrum includes every periodic image of J.
    for (int j = 0; j <= half; ++j)
      work_[j] = kernels::spectrum(kernel, special::two_pi * j / n).value;
    fft_->inverse(work_, c_);
    for (double& x : c_) x /= n;
    // exact mirror symmetry
    for (int r = 1; r < half; ++r) c_[n - r] = c_[r] = 0.5 * (c_[r] + c_[n - r]);
  } else {
    for (int r = 1; r <= half; ++r) {
      const double j = kernels::kernel_value(kernel, r);
      c_[r] = j;
      c_[n - r] = j;
    }
  }
  sum_ = neumaier_sum(c_);
  fft_->forward(c_, work_);
  chat_.resize(static_cast<size_t>(half + 1));
  for (int j = 0; j <= half; ++j) chat_[j] = work_[j].real();
}

RingInteraction::~RingInteraction() = default;

void RingInteraction::apply(std::span<const double> f, InteractionForm form, std::span<double> out) {
  fft_->forward(f, work_);
  for (int j = 0; j <= n_ / 2; ++j) work_[j] *= chat_[j];
  fft_->inverse(work_, out);
  const double inv = 1.0 / n_;
  if (form == InteractionForm::Invariant) {
    for (int i = 0; i < n_; ++i) out[i] = f[i] * sum_ - out[i] * inv;
  } else {
    for (int i = 0; i < n_; ++i) out[i] = -out[i] * inv;
  }
}

Chain::Chain(LatticeConfig config) : cfg_((config.validate(), std::move(config))), ring_(cfg_.kernel, cfg_.n_sites, cfg_.ring) {}

std::vector<double> Chain::interaction(std::span<const double> u) {
  const int n = cfg_.n_sites;
  if (static_cast<int>(u.size()) != n) throw DomainError("interaction: state size mismatch");
  std::vector<double> f(u.begin(), u.end());
  if (!is_identity(cfg_.nonlinearity))
    for (double& x : f) x = fraclat::apply(cfg_.nonlinearity, x);
  std::vector<double> out(static_cast<size_t>(n));
  ring_.apply(f, cfg_.form, out);
  return out;
}

std::vector<double> Chain::rhs(std::span<const double> u) {
  auto a = interaction(u);
  const bool forced = !is_none(cfg_.force);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] *= cfg_.coupling;
    if (forced) a[i] += evaluate(cfg_.force, u[i]);
  }
  return a;
}

LatticeState Chain::step_second_order(const LatticeState& s, double dt) {
  const size_t n = s.u.size();
  LatticeState out = s;
  const auto a0 = rhs(s.u);
  for (size_t i = 0; i < n; ++i) {
    out.v[i] = s.v[i] + 0.5 * dt * a0[i];
    out.u[i] = s.u[i] + dt * out.v[i];
  }
  const auto a1 = rhs(out.u);
  for (size_t i = 0; i < n; ++i) out.v[i] += 0.5 * dt * a1[i];
  out.t = s.t + dt;
  require_finite(out.u, "displacement");
  require_finite(out.v, "velocity");
  return out;
}

LatticeState Chain::step_first_order(const LatticeState& s, double dt) {
  const size_t n = s.u.size();
  std::vector<double> tmp(n);
  const auto k1 = rhs(s.u);
  for (size_t i = 0; i < n; ++i) tmp[i] = s.u[i] + 0.5 * dt * k1[i];
  const auto k2 = rhs(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = s.u[i] + 0.5 * dt * k2[i];
  const auto k3 = rhs(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = s.u[i] + dt * k3[i];
  const auto k4 = rhs(tmp);
  LatticeState out = s;
  for (size_t i = 0; i < n; ++i) out.u[i] = s.u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  out.t = s.t + dt;
  require_finite(out.u, "displacement");
  return out;
}

LatticeState Chain::step(const LatticeState& s, double dt) {
  return cfg_.order == TimeOrder::Second ? step_second_order(s, dt) : step_first_order(s, dt);
}

double Chain::mode_multiplier(int j) const {
  const auto chat = ring_.coupling_spectrum();
  if (j < 0 || j >= static_cast<int>(chat.size())) throw DomainError("mode_multiplier: mode index out of range");
  const double lin = quadratic_coefficients(cfg_.nonlinearity).first;
  const double base = cfg_.form == InteractionForm::Invariant ? ring_.coupling_sum() - chat[j] : -chat[j];
  double lambda = cfg_.coupling * lin * base;
  const auto coeffs = polynomial_coefficients(cfg_.force);
  if (coeffs.size() > 1) lambda += coeffs[1];
  return lambda;
}

double Chain::max_rate() const {
  double m = 0.0;
  for (int j = 0; j <= cfg_.n_sites / 2; ++j) m = std::max(m, std::abs(mode_multiplier(j)));
  return cfg_.order == TimeOrder::Second ? std::sqrt(m) : m;
}

double Chain::stability_limit() const {
  const double r = max_rate();
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return (cfg_.order == TimeOrder::Second ? 2.0 : 2.78) / r;
}

double Chain::energy(const LatticeState& s) {
  if (!is_identity(cfg_.nonlinearity))
    throw UnsupportedError("lattice_energy: no conserved energy for a nonlinear interaction map");
  const auto in = interaction(s.u);
  std::vector<double> terms(s.u.size());
  for (size_t i = 0; i < s.u.size(); ++i)
    terms[i] = 0.5 * s.v[i] * s.v[i] - 0.5 * cfg_.coupling * s.u[i] * in[i] + potential(cfg_.force, s.u[i]);
  return neumaier_sum(terms);
}

LatticeState Chain::run(LatticeState s, double dt, long steps,
                        const std::function<void(long, const LatticeState&)>& observer, long every) {
  if (static_cast<int>(s.u.size()) != cfg_.n_sites) throw DomainError("run: state size mismatch");
  if (s.v.size() != s.u.size()) s.v.assign(s.u.size(), 0.0);
  if (every < 1) every = 1;
  if (observer) observer(0, s);
  const bool verlet = cfg_.order == TimeOrder::Second;
  std::vector<double> acc;
  if (verlet) acc = rhs(s.u);
  const size_t n = s.u.size();
  for (long step = 0; step < steps; ++step) {
    try {
      if (verlet) {
        // same arithmetic as step_second_order, reusing the end-of-step force
        for (size_t i = 0; i < n; ++i) {
          s.v[i] += 0.5 * dt * acc[i];
          s.u[i] += dt * s.v[i];
        }
        acc = rhs(s.u);
        for (size_t i = 0; i < n; ++i) s.v[i] += 0.5 * dt * acc[i];
        s.t += dt;
        require_finite(s.u, "displacement");
        require_finite(s.v, "velocity");
      } else {
        s = step_first_order(s, dt);
      }
    } catch (const InstabilityError& e) {
      throw InstabilityError(e.reason(), step);
    }
    if (observer && (step + 1) % every == 0) observer(step + 1, s);
  }
  return s;
}

std::vector<double> interaction_term(const LatticeConfig& config, std::span<const double> u) {
  Chain chain(config);
  return chain.interaction(u);
}

LatticeState step_second_order(const LatticeConfig& config, const LatticeState& s, double dt) {
  Chain chain(config);
  return chain.step_second_order(s, dt);
}

LatticeState step_first_order(const LatticeConfig& config, const LatticeState& s, double dt) {
  Chain chain(config);
  return chain.step_first_order(s, dt);
}

double discrete_dispersion(const kernels::InteractionKernel& kernel, double g, double dx, double k) {
  const double kd = k * dx;
  if (std::abs(kd) > special::pi * (1.0 + 1e-12))
    throw DomainError("discrete_dispersion: |k dx| must not exceed pi");
  return -g * kernels::spectrum_gap(kernel, kd);
}

double lattice_energy(const LatticeConfig& config, const LatticeState& s) {
  Chain chain(config);
  return chain.energy(s);
}

double measure_frequency(std::span<const double> series, double dt) {
  std::vector<double> crossings;
  for (size_t i = 1; i < series.size(); ++i) {
    const double a = series[i - 1], b = series[i];
    if ((a < 0 && b >= 0) || (a > 0 && b <= 0)) {
      if (a == b) continue;
      crossings.push_back(dt * (static_cast<double>(i - 1) + a / (a - b)));
    }
  }
  if (crossings.size() < 3) throw DomainError("measure_frequency: fewer than three zero crossings");
  const double span = crossings.back() - crossings.front();
  return special::pi * static_cast<double>(crossings.size() - 1) / span;
}

}  // namespace fraclat::lattice
