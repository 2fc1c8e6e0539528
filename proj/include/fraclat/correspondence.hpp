#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fraclat/alpha_classifier.hpp"
#include "fraclat/continuum.hpp"
#include "fraclat/lattice.hpp"

namespace fraclat::correspondence {

// G_alpha = g |dx|^{min(alpha, 2)}
double continuum_coupling(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate);

// Lattice -> continuum equation with G*A = g |dx|^alpha A. Analytic-leading
// estimates (alpha = 2 with a k^2 amplitude) give the classical equation.
continuum::PdeSpec map_to_continuum(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate);

// k0 in physical units. Power laws use the closed form; other kernels use
// the first k where |gap - A k^alpha| exceeds 5% of A k^alpha (capped at pi/dx).
double crossover_wavenumber(const kernels::InteractionKernel& kernel, const alpha::AlphaEstimate& estimate,
                            double dx);

struct CorrespondenceReport {
  std::string kind;           // dispersion | evolution
  std::string abscissa_name;  // k | x
  std::vector<double> abscissa;
  std::vector<double> discrete_values;
  std::vector<double> continuum_values;
  std::vector<double> errors;  // pointwise, same length as abscissa
  std::string norm_name;       // max-relative | relative-L2
  double error_norm = 0.0;
  double crossover_k0 = 0.0;
  // evolution only: one entry per refinement level
  std::vector<double> level_dx;
  std::vector<double> level_errors;
  std::vector<double> convergence_orders;
  lattice::LatticeConfig lattice;
  continuum::PdeSpec pde;
  alpha::AlphaEstimate estimate;
};

CorrespondenceReport compare_dispersion(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate,
                                        double k_max_fraction, int points = 64);

struct EvolutionOptions {
  double t_final = 1.0;
  int levels = 3;
  // lattice step as a fraction of the stability limit 2/omega_max
  double cfl = 0.05;
  int threads = 1;
};

// Levels keep the circumference and G_alpha fixed and double n_sites; the
// reference PDE runs at twice the finest resolution.
CorrespondenceReport compare_evolution(const lattice::LatticeConfig& config, const alpha::AlphaEstimate& estimate,
                                       const std::function<double(double)>& initial_profile,
                                       const EvolutionOptions& options);

struct DivergenceResult {
  double slope = 0.0;
  std::vector<double> dx;
  std::vector<double> noninvariant_terms;  // 2 g zeta(alpha+1)
  std::vector<double> invariant_terms;     // g (J(0) - J(0)) = 0
};

DivergenceResult divergence_demo(double alpha, double g_alpha, std::span<const double> dx_list);

}  // namespace fraclat::correspondence
