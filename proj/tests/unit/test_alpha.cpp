#include <doctest.h>

#include <cmath>
#include <random>

#include "fraclat/alpha_classifier.hpp"
#include "fraclat/errors.hpp"
#include "fraclat/special.hpp"

using namespace fraclat;
using alpha::Verdict;
using kernels::FamilyTag;
using kernels::InteractionKernel;

TEST_SUITE("alpha") {
  TEST_CASE("classify examples") {
    auto e = alpha::classify(InteractionKernel::power_law(0.5));
    CHECK(e.verdict == Verdict::AlphaInteraction);
    CHECK(std::abs(e.alpha - 0.5) <= 0.01);
    CHECK(e.amplitude == doctest::Approx(-5.013257).epsilon(0.01));

    e = alpha::classify(InteractionKernel::gruenwald(1.5));
    CHECK(e.verdict == Verdict::AlphaInteraction);
    CHECK(std::abs(e.alpha - 1.5) <= 0.01);
    CHECK(e.amplitude == doctest::Approx(0.752253).epsilon(0.01));

    e = alpha::classify(InteractionKernel::power_law(3.0));
    CHECK(e.verdict == Verdict::AlphaInteraction);
    CHECK(e.alpha == 2.0);
    CHECK(e.amplitude == doctest::Approx(-1.644934).epsilon(0.01));

    CHECK(alpha::classify(InteractionKernel::power_law(2.0)).verdict == Verdict::LogDivergent);

    e = alpha::classify(InteractionKernel::nearest_neighbor());
    CHECK(e.verdict == Verdict::AlphaInteraction);
    CHECK(e.alpha == 2.0);
    CHECK(e.amplitude == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(e.model == alpha::Model::Analytic);

    e = alpha::classify(InteractionKernel::inverse_factorial());
    CHECK(e.alpha == 2.0);
    CHECK(e.amplitude == doctest::Approx(-2.0 * std::exp(1.0)).epsilon(1e-6));
  }

  TEST_CASE("IdealSpectral is recovered almost exactly") {
    for (double a : {0.3, 0.7, 1.2, 1.8}) {
      CAPTURE(a);
      const double amp = -1.7;
      const auto e = alpha::classify(InteractionKernel::ideal_spectral(a, amp));
      CHECK(e.verdict == Verdict::AlphaInteraction);
      CHECK(std::abs(e.alpha - a) <= 1e-3);
      CHECK(std::abs(e.amplitude / amp - 1.0) <= 1e-3);
    }
  }

  TEST_CASE("random non-integer power laws match the reference amplitude") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> dist(0.05, 1.95);
    int drawn = 0;
    while (drawn < 20) {
      const double s = dist(rng);
      if (std::abs(s - 1.0) < 0.05) continue;
      ++drawn;
      CAPTURE(s);
      const auto e = alpha::classify(InteractionKernel::power_law(s));
      CHECK(e.verdict == Verdict::AlphaInteraction);
      CHECK(std::abs(e.alpha - s) <= 0.01);
      CHECK(std::abs(e.amplitude / alpha::reference_amplitude(FamilyTag::PowerLaw, s) - 1.0) <= 0.01);
    }
  }

  TEST_CASE("halving k_max moves alpha by less than the reported uncertainty") {
    const InteractionKernel ks[] = {InteractionKernel::power_law(0.5), InteractionKernel::power_law(1.5),
                                    InteractionKernel::power_law(1.25), InteractionKernel::gruenwald(0.5),
                                    InteractionKernel::gruenwald(1.5), InteractionKernel::ideal_spectral(0.7, -2.0)};
    for (const auto& k : ks) {
      CAPTURE(k.to_string());
      const auto wide = alpha::classify(k);
      alpha::ClassifyOptions narrow;
      narrow.k_max = 0.05;
      const auto tight = alpha::classify(k, narrow);
      REQUIRE(wide.verdict == Verdict::AlphaInteraction);
      CHECK(std::abs(wide.alpha - tight.alpha) <= std::max(wide.alpha_uncertainty, tight.alpha_uncertainty));
    }
  }

  TEST_CASE("verdict invariants hold across the catalogue") {
    const InteractionKernel ks[] = {InteractionKernel::power_law(0.5),  InteractionKernel::power_law(1.0),
                                    InteractionKernel::power_law(2.0),  InteractionKernel::power_law(2.5),
                                    InteractionKernel::power_law(4.0),  InteractionKernel::alternating_inverse_square(),
                                    InteractionKernel::gruenwald(1.0),  InteractionKernel::alternating_rational(0.3),
                                    InteractionKernel::inverse_factorial(), InteractionKernel::nearest_neighbor()};
    for (const auto& k : ks) {
      CAPTURE(k.to_string());
      alpha::ClassifyOptions opt;
      const auto e = alpha::classify(k, opt);
      CHECK(e.alpha > 0);
      CHECK(e.fit_residual >= 0);
      CHECK(e.k_window.first == opt.k_min);
      CHECK(e.k_window.second == opt.k_max);
      if (e.verdict == Verdict::AlphaInteraction) {
        CHECK(e.fit_residual <= opt.residual_threshold);
        CHECK(std::isfinite(e.amplitude));
        CHECK(e.amplitude != 0.0);
      }
    }
  }

  TEST_CASE("a tight threshold downgrades to Inconclusive") {
    alpha::ClassifyOptions opt;
    opt.residual_threshold = 0.0;
    const auto e = alpha::classify(InteractionKernel::power_law(0.5), opt);
    CHECK(e.verdict == Verdict::Inconclusive);
    CHECK(e.alpha > 0);
  }

  TEST_CASE("classify errors") {
    CHECK_THROWS_AS(alpha::classify_gap([](double k) { return k < 0.01 ? -k : k; }), SignChangeError);
    CHECK_THROWS_AS(alpha::classify_gap([](double) { return 1e-310; }), UnderflowError);
    CHECK_THROWS_AS(alpha::classify_gap([](double) { return NAN; }), DomainError);
    alpha::ClassifyOptions bad;
    bad.k_max = 0.6;
    CHECK_THROWS_AS(alpha::classify(InteractionKernel::nearest_neighbor(), bad), DomainError);
    bad = {};
    bad.k_min = 0.2;
    CHECK_THROWS_AS(alpha::classify(InteractionKernel::nearest_neighbor(), bad), DomainError);
    bad = {};
    bad.n_points = 7;
    CHECK_THROWS_AS(alpha::classify(InteractionKernel::nearest_neighbor(), bad), DomainError);
  }

  TEST_CASE("classify_gap on a synthetic two-term gap") {
    const auto e = alpha::classify_gap([](double k) { return -2.0 * std::pow(k, 0.8) + 3.0 * k * k; });
    CHECK(e.verdict == Verdict::AlphaInteraction);
    CHECK(e.alpha == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(e.amplitude == doctest::Approx(-2.0).epsilon(1e-6));
  }

  TEST_CASE("reference_amplitude examples") {
    CHECK(alpha::reference_amplitude(FamilyTag::PowerLaw, 0.5) == doctest::Approx(-5.013257).epsilon(1e-6));
    CHECK(alpha::reference_amplitude(FamilyTag::Gruenwald, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(alpha::reference_amplitude(FamilyTag::Gruenwald, 1.5) == doctest::Approx(0.752253).epsilon(1e-6));
    CHECK(alpha::reference_amplitude(FamilyTag::PowerLaw, 2.5) == doctest::Approx(-2.612375).epsilon(1e-6));
    CHECK_THROWS_AS(alpha::reference_amplitude(FamilyTag::PowerLaw, 1.0), DomainError);
    CHECK_THROWS_AS(alpha::reference_amplitude(FamilyTag::PowerLaw, 2.0), DomainError);
    CHECK_THROWS_AS(alpha::reference_amplitude(FamilyTag::PowerLaw, -0.5), DomainError);
    CHECK_THROWS_AS(alpha::reference_amplitude(FamilyTag::NearestNeighbor, 2.0), DomainError);
  }

  TEST_CASE("crossover_scale examples") {
    alpha::AlphaEstimate e;
    e.alpha = 1.5;
    e.amplitude = -3.342253;
    CHECK(alpha::crossover_scale(e, 0.01) == doctest::Approx(523.8).epsilon(1e-3));
    CHECK(alpha::crossover_scale(e, 0.001) == doctest::Approx(10.0 * alpha::crossover_scale(e, 0.01)).epsilon(1e-14));
    e.alpha = 0.5;
    e.amplitude = -5.013257;
    CHECK(alpha::crossover_scale(e, 1.0) == doctest::Approx(8.35).epsilon(2e-3));
    e.alpha = 2.0;
    CHECK_THROWS_AS(alpha::crossover_scale(e, 1.0), DomainError);
    e.alpha = 1.0;
    CHECK_THROWS_AS(alpha::crossover_scale(e, 1.0), DomainError);
    e.alpha = 1.5;
    CHECK_THROWS_AS(alpha::crossover_scale(e, 0.0), DomainError);
  }

  TEST_CASE("verdict and model names") {
    CHECK(alpha::to_string(Verdict::AlphaInteraction) == "AlphaInteraction");
    CHECK(alpha::to_string(Verdict::LogDivergent) == "LogDivergent");
    CHECK(alpha::to_string(Verdict::Inconclusive) == "Inconclusive");
    CHECK(alpha::to_string(alpha::Model::HighOrder) == "high-order");
  }
}
