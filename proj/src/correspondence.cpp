#include "fraclat/correspondence.hpp"

#include <cmath>
#include <limits>

#include "fraclat/errors.hpp"
#include "fraclat/parallel.hpp"
#include "fraclat/special.hpp"

namespace fraclat::correspondence {

namespace {

bool analytic_leading(const alpha::AlphaEstimate& e) {
  return e.model == alpha::Model::Analytic || e.model == alpha::Model::HighOrder;
}

void require_alpha_interaction(const alpha::AlphaEstimate& e) {
  if (e.verdict != alpha::Verdict::AlphaInteraction)
    throw DomainError("correspondence: estimate is " + alpha::to_string(e.verdict) + ", not an alpha-interaction");
}

double leading_order(const alpha::AlphaEstimate& e) { return analytic_leading(e) ? 2.0 : e.alpha; }

double relative_l2(std::span<const double> a, std::span<const double> ref) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - ref[i]) * (a[i] - ref[i]);
    den += ref[i] * ref[i];
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

double continuum_coupling(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate) {
  return config.coupling * std::pow(std::abs(config.dx), std::min(leading_order(estimate), 2.0));
}

continuum::PdeSpec map_to_continuum(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate) {
  config.validate();
  require_alpha_interaction(estimate);
  if (config.form != lattice::InteractionForm::Invariant)
    throw UnsupportedError("map_to_continuum: non-invariant coupling has no finite continuum limit");
  double order = 2.0;
  if (!analytic_leading(estimate)) {
    if (std::abs(estimate.alpha - 1.0) < 1e-6)
      throw IntegerOrderBoundaryError("map_to_continuum: alpha = 1 is an integer-order boundary");
    if (estimate.alpha >= 2.0)
      throw IntegerOrderBoundaryError("map_to_continuum: fractional fit reached the alpha = 2 boundary");
    order = estimate.alpha;
  }
  const double ga = config.coupling * std::pow(config.dx, order) * estimate.amplitude;
  if (config.order == lattice::TimeOrder::Second)
    return continuum::FractionalWave{order, ga, config.nonlinearity, config.force};
  return continuum::FractionalDiffusion{order, ga, config.nonlinearity, config.force};
}

double crossover_wavenumber(const kernels::InteractionKernel& kernel, const alpha::AlphaEstimate& estimate,
                            double dx) {
  if (!(dx > 0)) throw DomainError("crossover_wavenumber: dx must be positive");
  if (auto p = std::get_if<kernels::PowerLaw>(&kernel.family());
      p && p->s > 0 && p->s < 2 && std::floor(p->s) != p->s && estimate.model == alpha::Model::Fractional)
    return alpha::crossover_scale(estimate, dx);

  const double order = leading_order(estimate);
  const double a = estimate.amplitude;
  constexpr int samples = 4000;
  const double lo = 1e-6, hi = special::pi;
  for (int i = 0; i < samples; ++i) {
    const double kd = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
    const double lead = a * std::pow(kd, order);
    if (std::abs(kernels::spectrum_gap(kernel, kd) - lead) > 0.05 * std::abs(lead)) return kd / dx;
  }
  return special::pi / dx;
}

CorrespondenceReport compare_dispersion(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate,
                                        double k_max_fraction, int points) {
  if (!(k_max_fraction > 0 && k_max_fraction <= 1))
    throw DomainError("compare_dispersion: k_max_fraction must lie in (0, 1]");
  if (points < 2) throw DomainError("compare_dispersion: need at least two points");
  CorrespondenceReport r;
  r.kind = "dispersion";
  r.abscissa_name = "k";
  r.norm_name = "max-relative";
  r.lattice = config;
  r.estimate = estimate;
  r.pde = map_to_continuum(config, estimate);
  r.crossover_k0 = crossover_wavenumber(config.kernel, estimate, config.dx);

  const double k_top = std::min(k_max_fraction * r.crossover_k0, special::pi / config.dx);
  const double k_bottom = k_top * 1e-3;
  for (int i = 0; i < points; ++i) {
    const double k = i + 1 == points ? k_top : k_bottom * std::pow(k_top / k_bottom, static_cast<double>(i) / (points - 1));
    const double ld = lattice::discrete_dispersion(config.kernel, config.coupling, config.dx, k);
    const double lc = continuum::continuum_dispersion(r.pde, k).real();
    const double err = std::abs(ld - lc) / std::abs(lc);
    r.abscissa.push_back(k);
    r.discrete_values.push_back(ld);
    r.continuum_values.push_back(lc);
    r.errors.push_back(err);
    r.error_norm = std::max(r.error_norm, err);
  }
  return r;
}

CorrespondenceReport compare_evolution(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate,
                                       const std::function<double(double)>& initial_profile,
                                       const EvolutionOptions& opt) {
  if (opt.levels < 3) throw DomainError("compare_evolution: need at least three refinement levels");
  if (!(opt.t_final > 0)) throw DomainError("compare_evolution: t_final must be positive");
  if (!(opt.cfl > 0 && opt.cfl <= 1)) throw DomainError("compare_evolution: cfl must lie in (0, 1]");

  CorrespondenceReport r;
  r.kind = "evolution";
  r.abscissa_name = "x";
  r.norm_name = "relative-L2";
  r.lattice = config;
  r.estimate = estimate;
  r.pde = map_to_continuum(config, estimate);
  r.crossover_k0 = crossover_wavenumber(config.kernel, estimate, config.dx);

  const double length = config.circumference();
  const double order = std::min(leading_order(estimate), 2.0);
  const double big_g = continuum_coupling(config, estimate);

  // The continuum modes must not grow: lambda(k) <= 0 on the reference grid.
  const int n_ref = config.n_sites << opt.levels;
  for (double k : continuum::wavenumbers(n_ref, length)) {
    if (continuum::continuum_dispersion(r.pde, k).real() > 0)
      throw DomainError("compare_evolution: mapped equation has growing modes (unstable sign regime)");
  }

  std::vector<lattice::LatticeConfig> cfgs(static_cast<size_t>(opt.levels));
  for (int l = 0; l < opt.levels; ++l) {
    auto& c = cfgs[l];
    c = config;
    c.n_sites = config.n_sites << l;
    c.dx = length / c.n_sites;
    c.coupling = big_g * std::pow(c.dx, -order);
  }

  // Reference solution.
  continuum::Field u0 = continuum::make_field([&](double x) { return continuum::cplx(initial_profile(x)); }, n_ref,
                                              length);
  continuum::Field ref;
  if (continuum::is_linear(r.pde)) {
    ref = continuum::evolve(r.pde, u0, opt.t_final, 1);
  } else {
    lattice::Chain finest(cfgs.back());
    const long steps = static_cast<long>(std::ceil(opt.t_final / (opt.cfl * finest.stability_limit())));
    ref = continuum::evolve(r.pde, u0, opt.t_final / static_cast<double>(steps), steps);
  }

  std::vector<std::vector<double>> lattice_u(cfgs.size()), reference_u(cfgs.size());
  std::vector<double> errors(cfgs.size());
  parallel_for(cfgs.size(), opt.threads, [&](size_t l) {
    lattice::Chain chain(cfgs[l]);
    const int n = cfgs[l].n_sites;
    std::vector<double> u(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) u[i] = initial_profile(length * i / n);
    const double limit = chain.stability_limit();
    const long steps = std::isfinite(limit) ? std::max(1L, static_cast<long>(std::ceil(opt.t_final / (opt.cfl * limit)))) : 1L;
    const double dt = opt.t_final / static_cast<double>(steps);
    lattice::LatticeState s;
    try {
      s = chain.run(lattice::rest_state(cfgs[l], std::move(u)), dt, steps);
    } catch (const InstabilityError& e) {
      throw InstabilityError("level " + std::to_string(l) + ": " + e.reason(), e.step());
    }
    const auto restricted = continuum::resample(ref, n);
    std::vector<double> rr(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rr[i] = restricted.values[i].real();
    errors[l] = relative_l2(s.u, rr);
    lattice_u[l] = std::move(s.u);
    reference_u[l] = std::move(rr);
  });

  for (int l = 0; l < opt.levels; ++l) {
    r.level_dx.push_back(cfgs[l].dx);
    r.level_errors.push_back(errors[l]);
    if (l > 0) {
      const double ratio = errors[l - 1] / errors[l];
      r.convergence_orders.push_back(errors[l] > 0 && errors[l - 1] > 0 ? std::log2(ratio)
                                                                        : std::numeric_limits<double>::quiet_NaN());
    }
  }
  const auto& fine = cfgs.back();
  for (int i = 0; i < fine.n_sites; ++i) {
    r.abscissa.push_back(length * i / fine.n_sites);
    r.discrete_values.push_back(lattice_u.back()[i]);
    r.continuum_values.push_back(reference_u.back()[i]);
    r.errors.push_back(std::abs(lattice_u.back()[i] - reference_u.back()[i]));
  }
  r.error_norm = errors.back();
  return r;
}

DivergenceResult divergence_demo(double alpha, double g_alpha, std::span<const double> dx_list) {
  if (!(alpha > 0 && alpha < 2) || std::abs(alpha - 1.0) < 1e-12)
    throw DomainError("divergence_demo: alpha must lie in (0, 2) and differ from 1");
  if (!(g_alpha > 0)) throw DomainError("divergence_demo: G_alpha must be positive");
  if (dx_list.size() < 4) throw DomainError("divergence_demo: need at least four dx values");
  for (size_t i = 0; i < dx_list.size(); ++i) {
    if (!(dx_list[i] > 0)) throw DomainError("divergence_demo: dx values must be positive");
    if (i > 0 && !(dx_list[i] < dx_list[i - 1])) throw DomainError("divergence_demo: dx values must decrease");
  }
  if (dx_list.front() / dx_list.back() < 100.0) throw DomainError("divergence_demo: dx values must span two decades");

  const auto kernel = kernels::InteractionKernel::power_law(alpha);
  const double z = special::zeta(alpha + 1.0);
  DivergenceResult out;
  std::vector<double> xs, ys;
  for (double dx : dx_list) {
    const double g = g_alpha * std::pow(dx, -alpha);
    const double term = 2.0 * g * z;
    out.dx.push_back(dx);
    out.noninvariant_terms.push_back(term);
    out.invariant_terms.push_back(g * kernels::spectrum_gap(kernel, 0.0));
    xs.push_back(std::log(dx));
    ys.push_back(std::log(term));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / m;
    my += ys[i] / m;
  }
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

}  // namespace fraclat::correspondence
