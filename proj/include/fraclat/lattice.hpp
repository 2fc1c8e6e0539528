#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fraclat/forces.hpp"
#include "fraclat/kernels.hpp"

namespace fraclat::fft {
class RealFFT;
}

namespace fraclat::lattice {

// Invariant: I_n = sum_m J(n-m) [f(u_n) - f(u_m)].  NonInvariant: I_n = -sum_m J(n-m) f(u_m).
enum class InteractionForm { Invariant, NonInvariant };
enum class TimeOrder { First, Second };

// How the infinite chain is closed into a ring of N sites.
//  Periodized: c_r = sum_q J(r + qN), the ring sees the infinite-chain
//              spectrum exactly at every ring wavenumber.
//  Truncated:  c_r = J(r) for 1 <= r < N/2, mirrored, with the r = N/2 term
//              counted once.
enum class RingCoupling { Periodized, Truncated };

std::string to_string(InteractionForm f);
std::string to_string(TimeOrder o);
std::string to_string(RingCoupling r);

// Sign convention: with g and the Invariant form, ring mode k obeys
// u'' = lambda u with lambda = -g * spectrum_gap(k dx). Modes oscillate when
// g * A > 0 for the small-k amplitude A: power laws (A < 0) and nearest
// neighbour (A = -1) need g < 0, Gruenwald (A > 0) needs g > 0.
struct LatticeConfig {
  int n_sites = 64;
  double dx = 1.0;
  double coupling = -1.0;
  kernels::InteractionKernel kernel = kernels::InteractionKernel::nearest_neighbor();
  InteractionForm form = InteractionForm::Invariant;
  Nonlinearity nonlinearity = IdentityMap{};
  OnSiteForce force = NoForce{};
  TimeOrder order = TimeOrder::Second;
  RingCoupling ring = RingCoupling::Periodized;

  void validate() const;
  double circumference() const { return n_sites * dx; }
};

struct LatticeState {
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;
};

LatticeState rest_state(const LatticeConfig& config, std::vector<double> u);

// Ring couplings c_r and the FFT convolution that applies them.
class RingInteraction {
 public:
  RingInteraction(const kernels::InteractionKernel& kernel, int n_sites, RingCoupling ring);
  ~RingInteraction();
  RingInteraction(const RingInteraction&) = delete;
  RingInteraction& operator=(const RingInteraction&) = delete;

  int size() const { return n_; }
  // c_r for r = 0..N-1 (c_0 holds the periodic self-image sum, which cancels
  // in the invariant form).
  std::span<const double> couplings() const { return c_; }
  double coupling_sum() const { return sum_; }
  // DFT of c at ring modes j = 0..N/2 (real by symmetry).
  std::span<const double> coupling_spectrum() const { return chat_; }

  // Interaction term without the factor g, for already-mapped f(u).
  void apply(std::span<const double> f, InteractionForm form, std::span<double> out);

 private:
  int n_;
  std::vector<double> c_;
  std::vector<double> chat_;
  double sum_ = 0.0;
  std::unique_ptr<fft::RealFFT> fft_;
  std::vector<std::complex<double>> work_;
};

// A simulation engine for one configuration. Owns FFT workspaces, so one
// Chain must not be stepped from two threads at the same time.
class Chain {
 public:
  explicit Chain(LatticeConfig config);

  const LatticeConfig& config() const { return cfg_; }
  RingInteraction& ring() { return ring_; }

  std::vector<double> interaction(std::span<const double> u);
  // g I(u) + F(u)
  std::vector<double> rhs(std::span<const double> u);

  // velocity Verlet; a negative dt runs the step backwards
  LatticeState step_second_order(const LatticeState& s, double dt);
  // classical RK4 on u' = g I(u) + F(u)
  LatticeState step_first_order(const LatticeState& s, double dt);
  LatticeState step(const LatticeState& s, double dt);

  // Ring mode multiplier for mode index j (0 <= j <= N/2), linear part only.
  double mode_multiplier(int j) const;
  // max over ring modes of sqrt|lambda| (second order) or |lambda| (first order)
  double max_rate() const;
  // Verlet: 2 / omega_max. RK4: 2.78 / max|lambda|.
  double stability_limit() const;

  double energy(const LatticeState& s);

  // Advances `steps` steps; observer(step_index, state) is called for the
  // initial state and then every `every` steps. Non-finite values raise
  // InstabilityError carrying the failing step index.
  LatticeState run(LatticeState s, double dt, long steps,
                   const std::function<void(long, const LatticeState&)>& observer = {}, long every = 1);

 private:
  LatticeConfig cfg_;
  RingInteraction ring_;
};

std::vector<double> interaction_term(const LatticeConfig& config, std::span<const double> u);
LatticeState step_second_order(const LatticeConfig& config, const LatticeState& s, double dt);
LatticeState step_first_order(const LatticeConfig& config, const LatticeState& s, double dt);

// lambda(k) = g [spectrum(0) - spectrum(k dx)] on the infinite chain, |k dx| <= pi.
double discrete_dispersion(const kernels::InteractionKernel& kernel, double g, double dx, double k);

// H = sum v^2/2 - (g/2) sum u_n I_n(u) + sum V(u_n); Identity nonlinearity only.
double lattice_energy(const LatticeConfig& config, const LatticeState& s);

// Angular frequency from zero crossings of a sampled oscillation.
double measure_frequency(std::span<const double> series, double dt);

}  // namespace fraclat::lattice
