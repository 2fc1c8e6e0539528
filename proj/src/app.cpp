#include "fraclat/app.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>

#include "fraclat/alpha_classifier.hpp"
#include "fraclat/continuum.hpp"
#include "fraclat/correspondence.hpp"
#include "fraclat/errors.hpp"
#include "fraclat/fft.hpp"
#include "fraclat/io.hpp"
#include "fraclat/kernels.hpp"
#include "fraclat/lattice.hpp"
#include "fraclat/special.hpp"

namespace fraclat::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json numbers(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json estimate_json(const alpha::AlphaEstimate& e) {
  return json{{"alpha", number(e.alpha)},
              {"amplitude", number(e.amplitude)},
              {"residual", number(e.fit_residual)},
              {"alpha_uncertainty", number(e.alpha_uncertainty)},
              {"verdict", alpha::to_string(e.verdict)},
              {"model", alpha::to_string(e.model)},
              {"k_window", {e.k_window.first, e.k_window.second}}};
}

json lattice_json(const lattice::LatticeConfig& c) {
  return json{{"kernel", c.kernel.to_string()},
              {"n_sites", c.n_sites},
              {"dx", c.dx},
              {"g", c.coupling},
              {"form", lattice::to_string(c.form)},
              {"nonlinearity", to_string(c.nonlinearity)},
              {"force", to_string(c.force)},
              {"order", lattice::to_string(c.order)},
              {"ring", lattice::to_string(c.ring)}};
}

json pde_json(const continuum::PdeSpec& spec) {
  json j{{"family", continuum::family_name(spec)}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, continuum::FractionalWave> || std::is_same_v<T, continuum::FractionalDiffusion>) {
          j["alpha"] = p.alpha;
          j["ga"] = p.ga;
          j["nonlinearity"] = to_string(p.f);
          j["force"] = to_string(p.force);
        } else if constexpr (std::is_same_v<T, continuum::Burgers>) {
          j["g1"] = p.g1;
          j["g2"] = p.g2;
          j["alpha"] = p.alpha ? json(*p.alpha) : json(nullptr);
        } else if constexpr (std::is_same_v<T, continuum::KdV>) {
          j["g1"] = p.g1;
          j["g3"] = p.g3;
          j["alpha"] = p.alpha ? json(*p.alpha) : json(nullptr);
        } else if constexpr (std::is_same_v<T, continuum::Boussinesq>) {
          j["g2"] = p.g2;
          j["g4"] = p.g4;
          j["gprime"] = p.gprime;
        } else {
          j["alpha"] = p.alpha;
          j["g"] = p.g;
          j["omega0"] = p.omega0;
          j["b"] = {p.b.real(), p.b.imag()};
        }
      },
      spec);
  return j;
}

config::Profile seeded(config::Profile p, std::uint64_t seed) {
  if (!p.explicit_seed) p.seed = seed;
  return p;
}

alpha::ClassifyOptions window(const config::CompareSection& c, int threads) {
  alpha::ClassifyOptions o;
  o.k_min = c.k_min;
  o.k_max = c.k_max;
  o.n_points = c.window_points;
  o.residual_threshold = c.threshold;
  o.threads = threads;
  return o;
}

class Runner {
 public:
  Runner(const config::RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err), dir_(cfg.output_dir), echo_(config_echo(cfg)) {}

  void dispatch() {
    switch (cfg_.command) {
      case config::Command::KernelSpectrum: kernel_spectrum(); break;
      case config::Command::Classify: classify(); break;
      case config::Command::LatticeRun: lattice_run(); break;
      case config::Command::PdeRun: pde_run(); break;
      case config::Command::CompareDispersion: compare_dispersion(); break;
      case config::Command::CompareEvolution: compare_evolution(); break;
      case config::Command::Divergence: divergence(); break;
    }
  }

 private:
  json meta(json extra = json::object()) const {
    json m{{"command", config::to_string(cfg_.command)}, {"config", echo_}};
    for (auto& [k, v] : extra.items()) m[k] = v;
    return m;
  }

  void csv(const std::string& name, const io::Csv& table, json extra = json::object()) {
    io::write_csv(dir_ / name, table, meta(std::move(extra)));
    written(name);
  }

  void report(const std::string& name, json doc) {
    doc["artifact_version"] = io::artifact_version;
    doc["config"] = echo_;
    io::write_json(dir_ / name, doc);
    written(name);
  }

  void written(const std::string& name) { err_ << "wrote " << (dir_ / name).string() << "\n"; }

  void kernel_spectrum() {
    const auto& s = *cfg_.spectrum;
    const auto& kernel = *s.kernel;
    io::Csv table({"k", "spectrum", "gap", "tail_bound"});
    for (int i = 0; i < s.points; ++i) {
      const double k = s.points == 1 ? s.k_min : s.k_min + (s.k_max - s.k_min) * i / (s.points - 1);
      const auto sample = s.summation ? kernels::spectrum_by_summation(kernel, k, s.terms) : kernels::spectrum(kernel, k);
      const double gap = s.summation ? sample.value - kernels::spectrum_by_summation(kernel, 0.0, s.terms).value
                                     : kernels::spectrum_gap(kernel, k);
      table.row({k, sample.value, gap, sample.tail_bound});
    }
    csv("spectrum.csv", table, json{{"kernel", kernel.to_string()}, {"method", s.summation ? "sum" : "closed"}});
  }

  void classify() {
    const auto& c = *cfg_.classify;
    alpha::ClassifyOptions o;
    o.k_min = c.k_min;
    o.k_max = c.k_max;
    o.n_points = c.points;
    o.residual_threshold = c.threshold;
    o.threads = cfg_.threads;
    const auto est = alpha::classify(*c.kernel, o);
    json doc{{"kernel", c.kernel->to_string()}};
    const json fit = estimate_json(est);
    for (auto& [k, v] : fit.items()) doc[k] = v;
    doc["k0"] = est.verdict == alpha::Verdict::AlphaInteraction
                    ? number(correspondence::crossover_wavenumber(*c.kernel, est, c.dx))
                    : json(nullptr);
    doc["k0_dx"] = c.dx;
    out_ << doc.dump(2) << "\n";
    report("classify.json", doc);
  }

  void lattice_run() {
    const auto& s = *cfg_.lattice;
    lattice::Chain chain(s.lattice);
    const int n = s.lattice.n_sites;
    const double limit = chain.stability_limit();
    double dt = 0;
    if (s.dt) {
      dt = *s.dt;
      if (dt > limit)
        err_ << "warning: dt = " << dt << " exceeds the linear stability limit " << limit << "\n";
    } else {
      if (!std::isfinite(limit)) throw DomainError("lattice.dt: no stability limit to derive dt from; set dt");
      dt = 0.1 * limit;
    }

    const auto profile = seeded(s.initial, cfg_.seed);
    std::vector<double> u0(static_cast<size_t>(n));
    const double length = s.lattice.circumference();
    for (int i = 0; i < n; ++i) u0[i] = profile(i * s.lattice.dx, length);

    bool has_energy = true;
    auto energy = [&](const lattice::LatticeState& st) {
      if (!has_energy) return std::nan("");
      try {
        return chain.energy(st);
      } catch (const UnsupportedError&) {
        has_energy = false;
        return std::nan("");
      }
    };

    io::Csv table({"t", "site_index", "u", "v"});
    std::vector<double> times, energies;
    std::vector<std::vector<double>> amplitude(s.modes.size());
    auto observer = [&](long step, const lattice::LatticeState& st) {
      for (size_t m = 0; m < s.modes.size(); ++m) {
        double a = 0.0;
        for (int i = 0; i < n; ++i) a += st.u[i] * std::cos(special::two_pi * s.modes[m] * i / n);
        amplitude[m].push_back(2.0 * a / n);
      }
      if (step % s.snapshot_every == 0 || step == s.steps) {
        for (int i = 0; i < n; ++i) table.row({st.t, static_cast<double>(i), st.u[i], st.v[i]});
        times.push_back(st.t);
        energies.push_back(energy(st));
      }
    };
    chain.run(lattice::rest_state(s.lattice, std::move(u0)), dt, s.steps, observer, 1);

    json modes = json::array();
    for (size_t m = 0; m < s.modes.size(); ++m) {
      const double lambda = chain.mode_multiplier(s.modes[m]);
      json entry{{"mode", s.modes[m]}, {"k", special::two_pi * s.modes[m] / length}, {"multiplier", lambda}};
      if (s.lattice.order == lattice::TimeOrder::Second) {
        entry["predicted_omega"] = lambda < 0 ? number(std::sqrt(-lambda)) : json(nullptr);
        double measured = std::nan("");
        try {
          measured = lattice::measure_frequency(amplitude[m], dt);
        } catch (const Error&) {
        }
        entry["measured_omega"] = number(measured);
      }
      modes.push_back(entry);
    }
    json summary{{"lattice", lattice_json(s.lattice)},
                 {"dt", dt},
                 {"steps", s.steps},
                 {"stability_limit", number(limit)},
                 {"initial", profile.to_string()},
                 {"times", numbers(times)},
                 {"energy", has_energy ? numbers(energies) : json(nullptr)},
                 {"modes", modes}};
    if (has_energy && !energies.empty() && energies.front() != 0.0)
      summary["energy_relative_change"] = number((energies.back() - energies.front()) / std::abs(energies.front()));
    csv("lattice.csv", table, json{{"lattice", lattice_json(s.lattice)}, {"dt", dt}});
    report("lattice_summary.json", summary);
  }

  void pde_run() {
    const auto& s = *cfg_.pde;
    continuum::validate(s.spec);
    const auto profile = seeded(s.initial, cfg_.seed);
    const auto field = continuum::make_field([&](double x) { return continuum::cplx(profile(x, s.length)); }, s.n, s.length);
    const auto ks = continuum::wavenumbers(s.n, s.length);

    io::Csv table({"t", "x", "re", "im"});
    io::Csv spectra({"t", "k", "abs"});
    fft::ComplexFFT transform(s.n);
    std::vector<continuum::cplx> hat(static_cast<size_t>(s.n));
    auto snapshot = [&](const continuum::Field& f) {
      for (int i = 0; i < s.n; ++i) table.row({f.t, s.length * i / s.n, f.values[i].real(), f.values[i].imag()});
      if (s.spectra) {
        transform.forward(f.values, hat);
        for (int i = 0; i < s.n; ++i) spectra.row({f.t, ks[i], std::abs(hat[i]) / s.n});
      }
    };

    continuum::EvolveOptions o;
    o.warn = [&](const std::string& msg) { err_ << "warning: " << msg << "\n"; };
    o.every = s.snapshot_every;
    long last = -1;
    o.observer = [&](long step, const continuum::Field& f) {
      last = step;
      snapshot(f);
    };
    snapshot(field);
    const auto final_field = continuum::evolve(s.spec, field, s.dt, s.steps, o);
    if (last != s.steps && s.steps > 0) snapshot(final_field);

    json extra{{"pde", pde_json(s.spec)}, {"n", s.n}, {"length", s.length}, {"dt", s.dt}};
    csv("pde.csv", table, extra);
    if (s.spectra) csv("pde_spectrum.csv", spectra, extra);
  }

  alpha::AlphaEstimate lattice_estimate() const {
    return alpha::classify(cfg_.lattice->lattice.kernel, window(*cfg_.compare, cfg_.threads));
  }

  json report_json(const correspondence::CorrespondenceReport& r) const {
    return json{{"kind", r.kind},
                {"norm", r.norm_name},
                {"error_norm", number(r.error_norm)},
                {"crossover_k0", number(r.crossover_k0)},
                {"estimate", estimate_json(r.estimate)},
                {"lattice", lattice_json(r.lattice)},
                {"pde", pde_json(r.pde)},
                {r.abscissa_name == "k" ? "k_values" : "x_values", numbers(r.abscissa)},
                {"discrete_values", numbers(r.discrete_values)},
                {"continuum_values", numbers(r.continuum_values)}};
  }

  void compare_dispersion() {
    const auto& c = *cfg_.compare;
    const auto est = lattice_estimate();
    const auto r = correspondence::compare_dispersion(cfg_.lattice->lattice, est, c.k_max_fraction, c.points);
    io::Csv table({"k", "discrete", "continuum", "relative_error"});
    for (size_t i = 0; i < r.abscissa.size(); ++i)
      table.row({r.abscissa[i], r.discrete_values[i], r.continuum_values[i], r.errors[i]});
    csv("dispersion.csv", table, json{{"norm", r.norm_name}, {"error_norm", number(r.error_norm)}});
    report("report.json", report_json(r));
  }

  void compare_evolution() {
    const auto& c = *cfg_.compare;
    const auto& lat = cfg_.lattice->lattice;
    const auto est = lattice_estimate();
    const auto profile = seeded(c.initial, cfg_.seed);
    const double length = lat.circumference();
    correspondence::EvolutionOptions o;
    o.t_final = c.t_final;
    o.levels = c.levels;
    o.cfl = c.cfl;
    o.threads = cfg_.threads;
    const auto r = correspondence::compare_evolution(lat, est, [&](double x) { return profile(x, length); }, o);

    io::Csv table({"x", "lattice", "continuum", "abs_error"});
    for (size_t i = 0; i < r.abscissa.size(); ++i)
      table.row({r.abscissa[i], r.discrete_values[i], r.continuum_values[i], r.errors[i]});
    io::Csv levels({"n_sites", "dx", "relative_l2_error", "observed_order"});
    for (size_t l = 0; l < r.level_dx.size(); ++l)
      levels.row({std::round(length / r.level_dx[l]), r.level_dx[l], r.level_errors[l],
                  l == 0 ? std::nan("") : r.convergence_orders[l - 1]});
    csv("evolution.csv", table, json{{"t_final", c.t_final}, {"initial", profile.to_string()}});
    csv("evolution_levels.csv", levels, json{{"t_final", c.t_final}});
    json doc = report_json(r);
    doc["t_final"] = c.t_final;
    doc["level_dx"] = numbers(r.level_dx);
    doc["level_errors"] = numbers(r.level_errors);
    doc["convergence_orders"] = numbers(r.convergence_orders);
    report("report.json", doc);
  }

  void divergence() {
    const auto& d = *cfg_.divergence;
    const auto r = correspondence::divergence_demo(d.alpha, d.g_alpha, d.dx);
    io::Csv table({"dx", "noninvariant_term", "invariant_term"});
    for (size_t i = 0; i < r.dx.size(); ++i) table.row({r.dx[i], r.noninvariant_terms[i], r.invariant_terms[i]});
    csv("divergence.csv", table, json{{"alpha", d.alpha}, {"g_alpha", d.g_alpha}});
    report("report.json", json{{"kind", "divergence"},
                               {"alpha", d.alpha},
                               {"g_alpha", d.g_alpha},
                               {"slope", number(r.slope)},
                               {"expected_slope", -d.alpha},
                               {"dx", numbers(r.dx)},
                               {"noninvariant_terms", numbers(r.noninvariant_terms)},
                               {"invariant_terms", numbers(r.invariant_terms)}});
  }

  const config::RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  fs::path dir_;
  json echo_;
};

}  // namespace

json config_echo(const config::RunConfig& cfg) {
  json j{{"command", config::to_string(cfg.command)}, {"seed", cfg.seed}, {"threads", cfg.threads}};
  std::map<std::string, json> sections;
  for (const auto& e : cfg.entries) {
    if (e.section.empty()) {
      if (e.key != "command" && e.key != "seed" && e.key != "threads" && e.key != "output") j[e.key] = e.value;
      continue;
    }
    auto& s = sections[e.section];
    if (s.is_null()) s = json::object();
    s[e.key] = e.value;
  }
  for (auto& [name, s] : sections) j[name] = s;
  return j;
}

int run(const config::RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    Runner(config, out, err).dispatch();
    return ok;
  } catch (const InstabilityError& e) {
    err << "error: numerical instability: " << e.what() << "\n";
    return unstable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace fraclat::app
