#pragma once

#include <functional>
#include <string>
#include <utility>

#include "fraclat/kernels.hpp"

namespace fraclat::alpha {

enum class Verdict { AlphaInteraction, LogDivergent, Inconclusive };

std::string to_string(Verdict v);

// Which asymptotic model won the fit.
enum class Model {
  Analytic,    // k^2 leading, even powers only
  Fractional,  // k^alpha leading, 0 < alpha < 2
  HighOrder,   // k^2 leading with a k^alpha (alpha > 2) correction
  Logarithmic  // k^2 log(1/k) leading
};

std::string to_string(Model m);

struct AlphaEstimate {
  double alpha = 0.0;
  double amplitude = 0.0;
  // RMS of log|model/gap| over the window
  double fit_residual = 0.0;
  double alpha_uncertainty = 0.0;
  std::pair<double, double> k_window{0.0, 0.0};
  Verdict verdict = Verdict::Inconclusive;
  Model model = Model::Analytic;
};

struct ClassifyOptions {
  double k_min = 1e-4;
  double k_max = 1e-1;
  int n_points = 24;
  double residual_threshold = 1e-4;
  int threads = 1;
};

// Fits the small-k gap on geometrically spaced points. For a trial exponent
// the correction coefficients enter linearly, so the exponent is found by a
// one-dimensional search over the residual of the linear sub-problem.
AlphaEstimate classify(const kernels::InteractionKernel& kernel, const ClassifyOptions& options = {});

AlphaEstimate classify_gap(const std::function<double(double)>& gap, const ClassifyOptions& options = {});

// Closed-form small-k amplitude: PowerLaw 0<s<2 -> 2 Gamma(-s) cos(pi s/2),
// PowerLaw s>2 -> -zeta(s-1), Gruenwald -> 1/Gamma(alpha+1).
double reference_amplitude(kernels::FamilyTag family, double order);

// k0 = |A / zeta(alpha-1)|^{1/(2-alpha)} / dx
double crossover_scale(const AlphaEstimate& estimate, double dx);

}  // namespace fraclat::alpha
