#include "fraclat/alpha_classifier.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "fraclat/errors.hpp"
#include "fraclat/parallel.hpp"
#include "fraclat/special.hpp"

namespace fraclat::alpha {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kBadFit = 1e3;

struct Fit {
  double residual = kBadFit;
  VectorXd coef;
};

// Weighted linear least squares with rows scaled by 1/gap, so the fitted
// model is close in relative terms; residual is RMS of log(model/gap).
Fit linear_fit(const MatrixXd& basis, const VectorXd& gap) {
  MatrixXd w = basis.array().colwise() / gap.array();
  VectorXd scale(w.cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    scale(j) = w.col(j).norm();
    if (scale(j) > 0) w.col(j) /= scale(j);
  }
  Fit fit;
  VectorXd c = w.colPivHouseholderQr().solve(VectorXd::Ones(gap.size()));
  for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = scale(j) > 0 ? c(j) / scale(j) : 0.0;
  fit.coef = c;
  const VectorXd model = basis * c;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < gap.size(); ++i) {
    const double ratio = model(i) / gap(i);
    if (!(ratio > 0) || !std::isfinite(ratio)) return fit;
    const double l = std::log(ratio);
    acc += l * l;
  }
  fit.residual = std::sqrt(acc / static_cast<double>(gap.size()));
  return fit;
}

MatrixXd columns(const VectorXd& k, std::initializer_list<double> powers) {
  MatrixXd b(k.size(), static_cast<Eigen::Index>(powers.size()));
  Eigen::Index j = 0;
  for (double p : powers) {
    b.col(j++) = k.array().pow(p).matrix();
  }
  return b;
}

MatrixXd fractional_basis(const VectorXd& k, double a) { return columns(k, {a, a + 2, a + 4, 2, 4, 6}); }
MatrixXd high_basis(const VectorXd& k, double a) { return columns(k, {2, a, a + 2, 4, 6}); }

MatrixXd log_basis(const VectorXd& k) {
  MatrixXd b(k.size(), 5);
  const VectorXd lg = (1.0 / k.array()).log().matrix();
  b.col(0) = (k.array().square() * lg.array()).matrix();
  b.col(1) = k.array().square().matrix();
  b.col(2) = (k.array().pow(4) * lg.array()).matrix();
  b.col(3) = k.array().pow(4).matrix();
  b.col(4) = k.array().pow(6).matrix();
  return b;
}

struct Candidate {
  Model model;
  double alpha = 0.0;
  double amplitude = 0.0;
  double residual = kBadFit;
  double uncertainty = 0.0;
  bool valid = false;
};

// The leading term must carry a real share of the gap at the smallest k;
// otherwise the fit has traded it away against a correction term.
bool significant(double leading_at_kmin, double gap_at_kmin) {
  return std::isfinite(leading_at_kmin) && std::abs(leading_at_kmin) >= 0.1 * std::abs(gap_at_kmin);
}

template <class BasisFn>
Candidate search_exponent(Model model, const VectorXd& k, const VectorXd& gap, double lo, double hi,
                          BasisFn basis, int leading_column, bool leading_is_alpha) {
  auto residual = [&](double a) { return linear_fit(basis(k, a), gap).residual; };
  constexpr int grid = 200;
  int best = 0;
  double best_r = std::numeric_limits<double>::infinity();
  std::vector<double> as(grid);
  for (int i = 0; i < grid; ++i) {
    as[i] = lo + (hi - lo) * i / (grid - 1);
    const double r = residual(as[i]);
    if (r < best_r) {
      best_r = r;
      best = i;
    }
  }
  const double a0 = as[std::max(best - 1, 0)];
  const double a1 = as[std::min(best + 1, grid - 1)];
  std::uintmax_t iters = 500;
  const auto [a_star, r_star] = boost::math::tools::brent_find_minima(residual, a0, a1, 45, iters);

  Candidate c;
  c.model = model;
  c.alpha = leading_is_alpha ? a_star : 2.0;
  const Fit fit = linear_fit(basis(k, a_star), gap);
  c.residual = fit.residual;
  c.amplitude = fit.coef(leading_column);
  const double lead_power = leading_is_alpha ? a_star : 2.0;
  c.valid = c.residual < kBadFit && significant(c.amplitude * std::pow(k(0), lead_power), gap(0));

  if (leading_is_alpha) {
    // Residual is V-shaped around the optimum; its slope converts the floor
    // residual into an exponent uncertainty.
    const double h = 1e-5;
    const double up = residual(std::min(a_star + h, hi));
    const double dn = residual(std::max(a_star - h, lo));
    const double slope = (0.5 * (up + dn) - r_star) / h;
    const double tol = std::ldexp(std::abs(a_star), -44);
    c.uncertainty = slope > 0 ? 3.0 * r_star / slope + tol : hi - lo;
  }
  return c;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::AlphaInteraction: return "AlphaInteraction";
    case Verdict::LogDivergent: return "LogDivergent";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(Model m) {
  switch (m) {
    case Model::Analytic: return "analytic";
    case Model::Fractional: return "fractional";
    case Model::HighOrder: return "high-order";
    case Model::Logarithmic: return "logarithmic";
  }
  return "?";
}

AlphaEstimate classify_gap(const std::function<double(double)>& gap_fn, const ClassifyOptions& opt) {
  if (!(opt.k_min > 0 && opt.k_min < opt.k_max && opt.k_max <= 0.5))
    throw DomainError("classify: window must satisfy 0 < k_min < k_max <= 0.5");
  if (opt.n_points < 8) throw DomainError("classify: n_points must be >= 8");

  const int n = opt.n_points;
  VectorXd k(n), gap(n);
  const double ratio = std::log(opt.k_max / opt.k_min);
  for (int i = 0; i < n; ++i) k(i) = opt.k_min * std::exp(ratio * i / (n - 1));
  k(n - 1) = opt.k_max;
  parallel_for(static_cast<std::size_t>(n), opt.threads, [&](std::size_t i) { gap(i) = gap_fn(k(i)); });

  int pos = 0, neg = 0;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(gap(i))) throw DomainError("classify: gap is not finite at k = " + std::to_string(k(i)));
    if (std::abs(gap(i)) < 1e-300)
      throw UnderflowError("classify: |gap| < 1e-300 at k = " + std::to_string(k(i)));
    (gap(i) > 0 ? pos : neg)++;
  }
  if (pos && neg)
    throw SignChangeError("classify: gap changes sign inside the window (" + std::to_string(pos) + " positive, " +
                          std::to_string(neg) + " negative)");

  AlphaEstimate est;
  est.k_window = {opt.k_min, opt.k_max};

  std::vector<Candidate> power;
  {
    const Fit fit = linear_fit(columns(k, {2, 4, 6, 8}), gap);
    Candidate c{Model::Analytic, 2.0, fit.coef(0), fit.residual, 0.0, false};
    c.valid = fit.residual < kBadFit && significant(c.amplitude * k(0) * k(0), gap(0));
    power.push_back(c);
  }
  power.push_back(search_exponent(Model::Fractional, k, gap, 1e-3, 1.98, fractional_basis, 0, true));
  power.push_back(search_exponent(Model::HighOrder, k, gap, 2.02, 3.98, high_basis, 0, false));
  power.push_back(search_exponent(Model::HighOrder, k, gap, 4.02, 5.98, high_basis, 0, false));

  // Analytic leading behaviour is the default; a fitted exponent must beat
  // it by an order of magnitude to be preferred.
  std::optional<Candidate> best;
  if (power[0].valid) best = power[0];
  for (std::size_t i = 1; i < power.size(); ++i) {
    const Candidate& c = power[i];
    if (!c.valid) continue;
    const double bar = best ? (best->model == Model::Analytic ? best->residual / 10.0 : best->residual) : kBadFit;
    if (c.residual < bar) best = c;
  }

  const Fit log_fit = linear_fit(log_basis(k), gap);
  const double log_lead = log_fit.coef(0) * k(0) * k(0) * std::log(1.0 / k(0));
  const bool log_valid = log_fit.residual < kBadFit && significant(log_lead, gap(0));
  const double best_power_r = best ? best->residual : kBadFit;

  if (log_valid && log_fit.residual * 10.0 < best_power_r) {
    est.alpha = 2.0;
    est.amplitude = log_fit.coef(0);
    est.fit_residual = log_fit.residual;
    est.model = Model::Logarithmic;
    est.verdict = Verdict::LogDivergent;
    return est;
  }

  if (!best) {
    // Nothing credible: report the lowest-residual attempt.
    Candidate fallback = power[0];
    for (const auto& c : power)
      if (c.residual < fallback.residual) fallback = c;
    best = fallback;
  }
  est.alpha = best->alpha;
  est.amplitude = best->amplitude;
  est.fit_residual = best->residual;
  est.alpha_uncertainty = best->uncertainty;
  est.model = best->model;
  const bool ok = best->valid && est.fit_residual <= opt.residual_threshold && std::isfinite(est.amplitude) &&
                  est.amplitude != 0.0 && est.alpha > 0;
  est.verdict = ok ? Verdict::AlphaInteraction : Verdict::Inconclusive;
  if (!(est.alpha > 0)) est.alpha = 2.0;
  return est;
}

AlphaEstimate classify(const kernels::InteractionKernel& kernel, const ClassifyOptions& options) {
  return classify_gap([&kernel](double k) { return kernels::spectrum_gap(kernel, k); }, options);
}

double reference_amplitude(kernels::FamilyTag family, double order) {
  using kernels::FamilyTag;
  if (!(order > 0) || !std::isfinite(order)) throw DomainError("reference_amplitude: order must be positive");
  switch (family) {
    case FamilyTag::PowerLaw:
      if (std::floor(order) == order)
        throw DomainError("reference_amplitude: integer power-law order is a pole of the closed form");
      if (order < 2) return special::riesz_amplitude(order);
      return -special::zeta(order - 1.0);
    case FamilyTag::Gruenwald:
      return 1.0 / boost::math::tgamma(order + 1.0);
    default:
      throw DomainError("reference_amplitude: no closed-form amplitude for this family");
  }
}

double crossover_scale(const AlphaEstimate& e, double dx) {
  if (!(dx > 0)) throw DomainError("crossover_scale: dx must be positive");
  if (!(e.alpha > 0 && e.alpha < 2))
    throw DomainError("crossover_scale: no crossover for alpha outside (0, 2)");
  if (std::abs(e.alpha - 1.0) < 1e-12) throw DomainError("crossover_scale: alpha = 1 is excluded");
  if (!std::isfinite(e.amplitude) || e.amplitude == 0.0)
    throw DomainError("crossover_scale: amplitude must be finite and nonzero");
  const double z = special::zeta(e.alpha - 1.0);
  return std::pow(std::abs(e.amplitude / z), 1.0 / (2.0 - e.alpha)) / dx;
}

}  // namespace fraclat::alpha
