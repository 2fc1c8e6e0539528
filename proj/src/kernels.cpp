#include "fraclat/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <vector>

#include "fraclat/errors.hpp"
#include "fraclat/special.hpp"

namespace fraclat::kernels {

using special::pi;
using special::two_pi;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_integer(double x) { return std::floor(x) == x; }

bool finite_positive(double x) { return std::isfinite(x) && x > 0; }

// Odd integer s up to 19 uses the Bernoulli polynomial B_{s+1}.
bool bernoulli_branch(double s, int& two_m) {
  if (!is_integer(s) || s > 19) return false;
  const int is = static_cast<int>(s);
  if (is % 2 == 0) return false;
  two_m = is + 1;
  return true;
}

// 2 sum cos(nk)/n^{2m} = (-1)^{m-1} (2pi)^{2m} / (2m)! * B_{2m}(k / 2pi), 0 <= k <= 2pi
double bernoulli_spectrum(int two_m, double ka, bool drop_constant) {
  const int m = two_m / 2;
  const double pref = ((m - 1) % 2 ? -1.0 : 1.0) * std::pow(two_pi, two_m) /
                      boost::math::factorial<double>(static_cast<unsigned>(two_m));
  return pref * special::bernoulli_polynomial(two_m, ka / two_pi, drop_constant);
}

double gruenwald_value(double alpha, long n) {
  const double beta = alpha / 2.0;
  const double a2 = beta + 1.0 - static_cast<double>(n);
  if (a2 <= 0 && is_integer(a2)) return 0.0;
  if (a2 > 0) {
    const double sign = n % 2 ? -1.0 : 1.0;
    return sign / (boost::math::tgamma(beta + 1.0 + n) * boost::math::tgamma(a2));
  }
  // Reflection of 1/Gamma(a2) for negative non-integer a2.
  const double nd = static_cast<double>(n);
  return -std::sin(pi * beta) / pi * boost::math::tgamma_delta_ratio(nd - beta, 2.0 * beta + 1.0);
}

double parse_number(std::string_view text, std::string_view key) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw DomainError("kernel spec: bad number '" + std::string(text) + "' for " + std::string(key));
  return v;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

InteractionKernel::InteractionKernel(Family family) : family_(family) {
  std::visit(overloaded{
                 [](const PowerLaw& p) {
                   if (!finite_positive(p.s)) throw DomainError("PowerLaw: s must be positive");
                 },
                 [](const Gruenwald& g) {
                   if (!finite_positive(g.alpha)) throw DomainError("Gruenwald: alpha must be positive");
                 },
                 [](const AlternatingRational& r) {
                   if (!std::isfinite(r.a) || is_integer(r.a))
                     throw DomainError("AlternatingRational: a must be a non-integer real");
                 },
                 [](const IdealSpectral& i) {
                   if (!finite_positive(i.alpha)) throw DomainError("IdealSpectral: alpha must be positive");
                   if (!std::isfinite(i.amplitude) || i.amplitude == 0.0)
                     throw DomainError("IdealSpectral: amplitude must be finite and nonzero");
                 },
                 [](const auto&) {},
             },
             family_);
}

FamilyTag InteractionKernel::tag() const { return static_cast<FamilyTag>(family_.index()); }

InteractionKernel InteractionKernel::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string name(text.substr(0, colon));
  std::map<std::string, double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw DomainError("kernel spec: expected key=value, got '" + std::string(item) + "'");
      const std::string key(item.substr(0, eq));
      if (params.count(key)) throw DomainError("kernel spec: duplicate parameter " + key);
      params[key] = parse_number(item.substr(eq + 1), key);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto take = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end()) throw DomainError("kernel spec '" + name + "': missing parameter " + key);
    const double v = it->second;
    params.erase(it);
    return v;
  };
  auto done = [&](InteractionKernel k) {
    if (!params.empty())
      throw DomainError("kernel spec '" + name + "': unknown parameter " + params.begin()->first);
    return k;
  };
  if (name == "powerlaw") return done(power_law(take("s")));
  if (name == "gruenwald") return done(gruenwald(take("alpha")));
  if (name == "altinvsq") return done(alternating_inverse_square());
  if (name == "altrational") return done(alternating_rational(take("a")));
  if (name == "invfactorial") return done(inverse_factorial());
  if (name == "nearest") return done(nearest_neighbor());
  if (name == "idealspectral") {
    const double a = take("alpha");
    return done(ideal_spectral(a, take("amplitude")));
  }
  throw DomainError("kernel spec: unknown kernel family '" + name + "'");
}

std::string InteractionKernel::to_string() const {
  return std::visit(overloaded{
                        [](const PowerLaw& p) { return "powerlaw:s=" + fmt(p.s); },
                        [](const AlternatingInverseSquare&) { return std::string("altinvsq"); },
                        [](const Gruenwald& g) { return "gruenwald:alpha=" + fmt(g.alpha); },
                        [](const AlternatingRational& r) { return "altrational:a=" + fmt(r.a); },
                        [](const InverseFactorial&) { return std::string("invfactorial"); },
                        [](const NearestNeighbor&) { return std::string("nearest"); },
                        [](const IdealSpectral& i) {
                          return "idealspectral:alpha=" + fmt(i.alpha) + ",amplitude=" + fmt(i.amplitude);
                        },
                    },
                    family_);
}

double kernel_value(const InteractionKernel& kernel, long n) {
  if (n == 0) throw DomainError("kernel_value: self-coupling n = 0 is excluded");
  n = n < 0 ? -n : n;
  const double nd = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const PowerLaw& p) { return std::pow(nd, -(p.s + 1.0)); },
          [&](const AlternatingInverseSquare&) { return (n % 2 ? -1.0 : 1.0) / (nd * nd); },
          [&](const Gruenwald& g) { return gruenwald_value(g.alpha, n); },
          [&](const AlternatingRational& r) { return (n % 2 ? -1.0 : 1.0) / (r.a * r.a - nd * nd); },
          [&](const InverseFactorial&) {
            return n > 170 ? 0.0 : 1.0 / boost::math::factorial<double>(static_cast<unsigned>(n));
          },
          [&](const NearestNeighbor&) { return n == 1 ? 1.0 : 0.0; },
          [&](const IdealSpectral& i) {
            const double a = i.alpha, amp = i.amplitude;
            const int points = static_cast<int>(std::max<long>(1024, 40 * n));
            return kernel_from_spectrum([a, amp](double k) { return amp * std::pow(k, a); }, n, points);
          },
      },
      kernel.family());
}

double kernel_sum(const InteractionKernel& kernel) {
  return std::visit(overloaded{
                        [](const PowerLaw& p) { return 2.0 * special::zeta(1.0 + p.s); },
                        [](const AlternatingInverseSquare&) { return -pi * pi / 6.0; },
                        [](const Gruenwald& g) {
                          const double r = 1.0 / boost::math::tgamma(1.0 + g.alpha / 2.0);
                          return -r * r;
                        },
                        [](const AlternatingRational& r) {
                          return pi / (r.a * std::sin(pi * r.a)) - 1.0 / (r.a * r.a);
                        },
                        [](const InverseFactorial&) { return 2.0 * (std::exp(1.0) - 1.0); },
                        [](const NearestNeighbor&) { return 2.0; },
                        [](const IdealSpectral&) { return 0.0; },
                    },
                    kernel.family());
}

SpectrumSample spectrum(const InteractionKernel& kernel, double k) {
  const double ka = std::abs(special::reduce_angle(k));
  SpectrumSample out{k, 0.0, 0.0};
  std::visit(overloaded{
                 [&](const PowerLaw& p) {
                   int two_m = 0;
                   if (bernoulli_branch(p.s, two_m)) {
                     out.value = bernoulli_spectrum(two_m, ka, false);
                   } else {
                     const auto series = special::cosine_polylog(p.s + 1.0, ka);
                     out.value = 2.0 * series.value;
                     out.tail_bound = 2.0 * series.tail_bound;
                   }
                 },
                 [&](const AlternatingInverseSquare&) { out.value = 0.5 * ka * ka - pi * pi / 6.0; },
                 [&](const Gruenwald&) { out.value = spectrum_gap(kernel, ka) + kernel_sum(kernel); },
                 [&](const AlternatingRational& r) {
                   out.value = pi * std::cos(r.a * ka) / (r.a * std::sin(pi * r.a)) - 1.0 / (r.a * r.a);
                 },
                 [&](const InverseFactorial&) {
                   out.value = 2.0 * (std::exp(std::cos(ka)) * std::cos(std::sin(ka)) - 1.0);
                 },
                 [&](const NearestNeighbor&) { out.value = 2.0 * std::cos(ka); },
                 [&](const IdealSpectral& i) { out.value = i.amplitude * std::pow(ka, i.alpha); },
             },
             kernel.family());
  return out;
}

double spectrum_gap(const InteractionKernel& kernel, double k) {
  const double ka = std::abs(special::reduce_angle(k));
  if (ka == 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const PowerLaw& p) {
            int two_m = 0;
            if (bernoulli_branch(p.s, two_m)) return bernoulli_spectrum(two_m, ka, true);
            return 2.0 * special::cosine_polylog(p.s + 1.0, ka, true).value;
          },
          [&](const AlternatingInverseSquare&) { return 0.5 * ka * ka; },
          [&](const Gruenwald& g) {
            return std::pow(2.0 * std::sin(ka / 2.0), g.alpha) / boost::math::tgamma(g.alpha + 1.0);
          },
          [&](const AlternatingRational& r) {
            const double h = std::sin(r.a * ka / 2.0);
            return -2.0 * pi * h * h / (r.a * std::sin(pi * r.a));
          },
          [&](const InverseFactorial&) {
            const double h = std::sin(ka / 2.0);
            const double c = std::cos(std::sin(ka));
            const double hs = std::sin(std::sin(ka) / 2.0);
            return 2.0 * std::exp(1.0) * (std::expm1(-2.0 * h * h) * c - 2.0 * hs * hs);
          },
          [&](const NearestNeighbor&) {
            const double h = std::sin(ka / 2.0);
            return -4.0 * h * h;
          },
          [&](const IdealSpectral& i) { return i.amplitude * std::pow(ka, i.alpha); },
      },
      kernel.family());
}

SpectrumSample spectrum_by_summation(const InteractionKernel& kernel, double k, long terms) {
  if (terms < 1) throw DomainError("spectrum_by_summation: need at least one term");
  if (kernel.tag() == FamilyTag::IdealSpectral)
    throw UnsupportedError("spectrum_by_summation: IdealSpectral has no direct series");

  double sum = 0.0, comp = 0.0;
  for (long n = 1; n <= terms; ++n) {
    const double t = kernel_value(kernel, n) * std::cos(static_cast<double>(n) * k);
    const double y = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - y) + t;
    else
      comp += (t - y) + sum;
    sum = y;
  }

  // Remainder of sum_{n>N} a_n cos(nk) with |a_n| eventually monotone:
  // Abel summation gives |a_{N+1}| / |sin(k'/2)| where k' = k (+pi for
  // alternating signs); the absolute tail gives the k-independent bound.
  const double N = static_cast<double>(terms);
  const double kr = special::reduce_angle(k);
  const double inf = std::numeric_limits<double>::infinity();
  auto abel = [&](double next, bool alternating) {
    const double d = alternating ? std::abs(std::cos(kr / 2.0)) : std::abs(std::sin(kr / 2.0));
    return d > 0 ? std::abs(next) / d : inf;
  };
  double tail = std::visit(
      overloaded{
          [&](const PowerLaw& p) {
            return std::min(abel(std::pow(N + 1.0, -(p.s + 1.0)), false), std::pow(N, -p.s) / p.s);
          },
          [&](const AlternatingInverseSquare&) { return std::min(abel(1.0 / ((N + 1) * (N + 1)), true), 1.0 / N); },
          [&](const Gruenwald& g) {
            if (N < g.alpha / 2.0 + 2.0) return inf;
            const double next = gruenwald_value(g.alpha, terms + 1);
            return std::min(abel(next, false), 2.0 * std::abs(gruenwald_value(g.alpha, terms)) * N / g.alpha);
          },
          [&](const AlternatingRational& r) {
            const double a = std::abs(r.a);
            if (N < a + 1.0) return inf;
            return std::min(abel(1.0 / ((N + 1) * (N + 1) - a * a), true), 1.0 / (N - a));
          },
          [&](const InverseFactorial&) {
            return N > 170 ? 0.0 : 2.0 / boost::math::factorial<double>(static_cast<unsigned>(terms + 1));
          },
          [&](const NearestNeighbor&) { return 0.0; },
          [&](const IdealSpectral&) { return inf; },
      },
      kernel.family());
  return {k, 2.0 * (sum + comp), 2.0 * tail};
}

double kernel_from_spectrum(const std::function<double(double)>& spectrum_fn, long n, int quadrature_points) {
  if (n == 0) throw DomainError("kernel_from_spectrum: n must be nonzero");
  if (quadrature_points < 64) throw DomainError("kernel_from_spectrum: quadrature_points must be >= 64");
  const double nd = std::abs(static_cast<double>(n));

  constexpr double sigma = 0.15;
  constexpr int grading_levels = 14;
  using Rule = boost::math::quadrature::gauss<double, 20>;

  auto integrate = [&](int refine) {
    std::vector<std::pair<double, double>> panels;
    double lo = pi * std::pow(sigma, grading_levels);
    panels.emplace_back(0.0, lo);
    for (int j = grading_levels - 1; j >= 1; --j) {
      const double hi = pi * std::pow(sigma, j);
      panels.emplace_back(lo, hi);
      lo = hi;
    }
    const int uniform = refine * std::max(1, quadrature_points / 20);
    const double w = (pi - lo) / uniform;
    for (int i = 0; i < uniform; ++i) panels.emplace_back(lo + i * w, i + 1 == uniform ? pi : lo + (i + 1) * w);

    auto f = [&](double k) { return spectrum_fn(k) * std::cos(nd * k); };
    double sum = 0.0, comp = 0.0;
    for (auto [a, b] : panels) {
      // keep a few nodes per oscillation of cos(n k)
      const int sub = refine * std::max(1, static_cast<int>(std::ceil(nd * (b - a) / 3.0)));
      const double h = (b - a) / sub;
      for (int i = 0; i < sub; ++i) {
        const double t = Rule::integrate(f, a + i * h, i + 1 == sub ? b : a + (i + 1) * h);
        const double y = sum + t;
        if (std::abs(sum) >= std::abs(t))
          comp += (sum - y) + t;
        else
          comp += (t - y) + sum;
        sum = y;
      }
    }
    return (sum + comp) / pi;
  };

  const double coarse = integrate(1);
  const double fine = integrate(2);
  if (!std::isfinite(fine) || std::abs(fine - coarse) > 1e-8)
    throw QuadratureError("kernel_from_spectrum: Richardson estimate " + std::to_string(std::abs(fine - coarse)) +
                          " exceeds 1e-8 at n = " + std::to_string(n));
  return fine;
}

}  // namespace fraclat::kernels
