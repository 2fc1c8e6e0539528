#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "fraclat/continuum.hpp"
#include "fraclat/errors.hpp"

using namespace fraclat;
using namespace fraclat::continuum;
using oracle::pi;

namespace {

const cplx I{0.0, 1.0};

Field plane_wave(int n, double length, int j) {
  return make_field([&](double x) { return std::exp(I * (2.0 * pi * j * x / length)); }, n, length);
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (auto v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_SUITE("continuum") {
  TEST_CASE("riesz_derivative examples") {
    const auto u = plane_wave(64, 2.0 * pi, 2);
    const auto d = riesz_derivative(u, 1.5);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(d.values[i] + std::pow(2.0, 1.5) * u.values[i]) <= 1e-12);

    const auto c = riesz_derivative(make_field([](double) { return cplx(4.2); }, 32, 3.0), 0.7);
    CHECK(max_abs(c) <= 1e-14);

    const auto s = riesz_derivative(make_field([](double x) { return cplx(std::sin(x)); }, 32, 2.0 * pi), 2.0);
    for (int i = 0; i < 32; ++i) CHECK(std::abs(s.values[i] + std::sin(2.0 * pi * i / 32)) <= 1e-13);

    CHECK_THROWS_AS(riesz_derivative(u, 0.0), DomainError);
    CHECK_THROWS_AS(riesz_derivative(u, 2.5), DomainError);
  }

  TEST_CASE("riesz_derivative agrees with a direct DFT") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> nd;
    std::vector<cplx> x(64);
    for (auto& v : x) v = {nd(rng), nd(rng)};
    Field f{x, 5.0, 0.0};
    const double a = 1.3;
    const auto got = riesz_derivative(f, a);
    auto spec = oracle::dft(x, -1);
    const auto k = wavenumbers(64, 5.0);
    for (int m = 0; m < 64; ++m) spec[m] *= -std::pow(std::abs(k[m]), a) / 64.0;
    const auto want = oracle::dft(spec, +1);
    CHECK(oracle::relative_l2(got.values, want) <= 1e-13);
  }

  TEST_CASE("wavenumbers ordering") {
    const auto k = wavenumbers(8, 2.0 * pi);
    const double want[] = {0, 1, 2, 3, -4, -3, -2, -1};
    for (int i = 0; i < 8; ++i) CHECK(k[i] == doctest::Approx(want[i]));
  }

  TEST_CASE("Gruenwald-Letnikov reference") {
    const auto w = gl_weights(1.5, 4);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(-1.5));
    CHECK(w[2] == doctest::Approx(0.375));
    CHECK(w[3] == doctest::Approx(0.0625));

    std::vector<double> flat(256, 2.0);
    for (double v : riesz_gl_reference(flat, 1.5, 0.1)) CHECK(std::abs(v) <= 1e-10);

    // cosine mode: error against the spectral operator shrinks about linearly
    double prev = 0.0;
    for (int n : {256, 512, 1024}) {
      const double L = 2.0 * pi, dx = L / n;
      std::vector<double> u(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) u[i] = std::cos(3.0 * i * dx);
      const auto gl = riesz_gl_reference(u, 1.5, dx);
      std::vector<double> exact(u.size());
      for (int i = 0; i < n; ++i) exact[i] = -std::pow(3.0, 1.5) * u[i];
      const double err = oracle::relative_l2(gl, exact);
      if (n == 1024) CHECK(err <= 1e-2);
      if (prev > 0) CHECK(prev / err == doctest::Approx(2.0).epsilon(0.15));
      prev = err;
    }

    // alpha -> 2: the stencil approaches [1, -2, 1] / dx^2
    std::vector<double> impulse(64, 0.0);
    impulse[10] = 1.0;
    const auto st = riesz_gl_reference(impulse, 1.999, 1.0);
    CHECK(st[10] == doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(st[9] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(st[11] == doctest::Approx(1.0).epsilon(1e-3));
    for (int i = 0; i < 64; ++i)
      if (std::abs(i - 10) > 1) CHECK(std::abs(st[i]) <= 1e-3);

    CHECK_THROWS_AS(riesz_gl_reference(flat, 1.02, 0.1), DomainError);
    CHECK_THROWS_AS(riesz_gl_reference(flat, 2.0, 0.1), DomainError);
    CHECK_THROWS_AS(riesz_gl_reference(flat, 1.5, 0.0), DomainError);
  }

  TEST_CASE("evolve examples") {
    const auto u0 = make_field([](double x) { return cplx(std::cos(x)); }, 32, 2.0 * pi);
    const auto same = evolve(Burgers{1.0, 0.1, {}}, u0, 0.01, 0);
    CHECK(oracle::relative_l2(same.values, u0.values) == 0.0);

    const auto heat = evolve(Burgers{0.0, 1.0, {}}, u0, 0.01, 100);
    for (int i = 0; i < 32; ++i) CHECK(std::abs(heat.values[i] - std::exp(-1.0) * u0.values[i]) <= 1e-10);
    CHECK(heat.t == doctest::Approx(1.0));

    const auto w0 = plane_wave(32, 2.0 * pi, 1);
    const double g3 = 0.7;
    const auto kdv = evolve(KdV{0.0, g3, {}}, w0, 0.01, 100);
    for (int i = 0; i < 32; ++i) {
      CHECK(std::abs(std::abs(kdv.values[i]) - 1.0) <= 1e-12);
      CHECK(std::abs(kdv.values[i] - w0.values[i] * std::exp(I * g3 * 1.0)) <= 1e-12);
    }

    const auto m2 = make_field([](double x) { return cplx(std::cos(2.0 * x)); }, 32, 2.0 * pi);
    const auto frac = evolve(FractionalDiffusion{1.5, 1.0, IdentityMap{}, NoForce{}}, m2, 0.05, 20);
    for (int i = 0; i < 32; ++i) CHECK(std::abs(frac.values[i] - std::exp(-std::pow(2.0, 1.5)) * m2.values[i]) <= 1e-12);
  }

  TEST_CASE("continuum_dispersion examples") {
    CHECK(continuum_dispersion(FractionalWave{1.5, -1.0, IdentityMap{}, NoForce{}}, 4.0).real() == doctest::Approx(8.0));
    CHECK(continuum_dispersion(FractionalWave{1.5, 1.0, IdentityMap{}, NoForce{}}, 4.0).real() == doctest::Approx(-8.0));
    CHECK(continuum_dispersion(FractionalDiffusion{0.5, 2.0, IdentityMap{}, NoForce{}}, 4.0).real() ==
          doctest::Approx(-4.0));
    CHECK(continuum_dispersion(KdV{1.0, 2.0, {}}, 3.0) == cplx(0.0, 54.0));
    CHECK(continuum_dispersion(Boussinesq{1.0, -0.01, 0.3}, 2.0).real() == doctest::Approx(-4.0 - 0.16));
    const auto nls = continuum_dispersion(FractionalNLS{1.5, 2.0, 0.5, 0.0}, 4.0);
    CHECK(nls.real() == 0.0);
    CHECK(nls.imag() == doctest::Approx(-(16.0 + 0.5)));
  }

  TEST_CASE("one linear step equals the analytic multiplier") {
    const int n = 64;
    const double L = 7.0;
    std::mt19937_64 rng(29);
    std::vector<double> samples(n);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& s : samples) s = u(rng);
    const auto f = make_field(samples, L);
    const auto k = wavenumbers(n, L);
    const double dt = 0.37;

    const PdeSpec first[] = {FractionalDiffusion{1.3, 0.8, IdentityMap{}, NoForce{}}, Burgers{0.0, 0.2, {}},
                             Burgers{0.0, 0.2, 1.4}, FractionalNLS{1.7, 1.1, 0.3, 0.0}};
    for (const auto& spec : first) {
      CAPTURE(family_name(spec));
      REQUIRE(is_linear(spec));
      auto hat = oracle::dft(f.values, -1);
      for (int m = 0; m < n; ++m) {
        // Nyquist handling is the solver's business for odd operators; these are even
        hat[m] *= std::exp(continuum_dispersion(spec, k[m]) * dt) / static_cast<double>(n);
      }
      const auto want = oracle::dft(hat, +1);
      const auto got = evolve(spec, f, dt, 1);
      CHECK(oracle::relative_l2(got.values, want) <= 1e-12);
    }

    const PdeSpec second[] = {FractionalWave{1.5, 0.9, IdentityMap{}, NoForce{}}, Boussinesq{1.2, -0.01, 0.0}};
    for (const auto& spec : second) {
      CAPTURE(family_name(spec));
      REQUIRE(is_second_order(spec));
      auto hat = oracle::dft(f.values, -1);
      for (int m = 0; m < n; ++m) {
        const double lam = continuum_dispersion(spec, k[m]).real();
        const double w = std::sqrt(std::abs(lam));
        const double c = lam < 0 ? std::cos(w * dt) : (lam > 0 ? std::cosh(w * dt) : 1.0);
        hat[m] *= c / static_cast<double>(n);
      }
      const auto want = oracle::dft(hat, +1);
      const auto got = evolve(spec, f, dt, 1);
      CHECK(oracle::relative_l2(got.values, want) <= 1e-12);
    }
  }

  TEST_CASE("NLS plane wave picks up the nonlinear phase") {
    const double g = 1.0, w0 = 0.2, a = 0.5;
    const cplx b = 0.8;
    const int j = 3;
    const double L = 2.0 * pi;
    auto f = plane_wave(32, L, j);
    for (auto& v : f.values) v *= a;
    const double t = 1.0;
    const auto out = evolve(FractionalNLS{1.5, g, w0, b}, f, 0.01, 100);
    const double phase = -(g * std::pow(j, 1.5) + w0 + b.real() * a * a) * t;
    for (int i = 0; i < 32; ++i) CHECK(std::abs(out.values[i] - f.values[i] * std::exp(I * phase)) <= 1e-10);
  }

  TEST_CASE("Burgers and KdV conserve mass") {
    const int n = 128;
    const double L = 2.0 * pi;
    const auto f = make_field([](double x) { return cplx(std::sin(x) + 0.3 * std::cos(2 * x) + 0.2); }, n, L);
    auto mass = [&](const Field& x) {
      double m = 0.0;
      for (auto v : x.values) m += v.real();
      return m * x.dx();
    };
    const double m0 = mass(f);
    for (const PdeSpec& spec : {PdeSpec{Burgers{1.0, 0.05, {}}}, PdeSpec{KdV{1.0, 0.02, {}}}, PdeSpec{Burgers{1.0, 0.05, 1.5}}}) {
      CAPTURE(family_name(spec));
      const auto out = evolve(spec, f, 1e-3, 300);
      CHECK(std::abs(mass(out) - m0) <= 1e-10);
    }
  }

  TEST_CASE("real equations keep real fields real") {
    const auto f = make_field([](double x) { return cplx(std::exp(std::sin(x))); }, 64, 2.0 * pi);
    for (const PdeSpec& spec : {PdeSpec{KdV{1.0, 0.05, {}}}, PdeSpec{KdV{1.0, 0.05, 1.5}}, PdeSpec{Burgers{1.0, 0.1, {}}},
                                PdeSpec{Boussinesq{1.0, -0.01, 0.1}}}) {
      CAPTURE(family_name(spec));
      const auto out = evolve(spec, f, 1e-3, 200);
      double im = 0.0;
      for (auto v : out.values) im = std::max(im, std::abs(v.imag()));
      CHECK(im <= 1e-12);
    }
  }

  TEST_CASE("second-order state form: velocity is carried") {
    const double L = 2.0 * pi;
    const auto u0 = make_field([](double) { return cplx(0.0); }, 32, L);
    const auto w0 = make_field([](double x) { return cplx(std::cos(x)); }, 32, L);
    const auto out = evolve(FractionalWave{2.0, 1.0, IdentityMap{}, NoForce{}}, SecondOrderState{u0, w0}, 0.01, 100);
    for (int i = 0; i < 32; ++i) {
      const double x = L * i / 32;
      CHECK(std::abs(out.u.values[i] - std::sin(1.0) * std::cos(x)) <= 1e-12);
      CHECK(std::abs(out.w.values[i] - std::cos(1.0) * std::cos(x)) <= 1e-12);
    }
  }

  TEST_CASE("blow-up surfaces as InstabilityError with a step index") {
    const auto f = make_field([](double x) { return cplx(1.0 + 0.1 * std::cos(x)); }, 32, 2.0 * pi);
    const FractionalNLS gain{2.0, 1.0, 0.0, cplx(0.0, 5.0)};  // Im b > 0: |u|^2 u gain, finite-time blow-up
    try {
      evolve(gain, f, 0.01, 100000);
      FAIL("expected InstabilityError");
    } catch (const InstabilityError& e) {
      CHECK(e.step() >= 0);
      CHECK(e.step() < 100000);
    }
  }

  TEST_CASE("a too-large dt triggers the warning callback") {
    const auto f = make_field([](double x) { return cplx(std::sin(x)); }, 64, 2.0 * pi);
    int warnings = 0;
    EvolveOptions opt;
    opt.warn = [&](const std::string&) { ++warnings; };
    evolve(Burgers{5.0, 0.0, {}}, f, 1.0, 1, opt);
    CHECK(warnings == 1);
  }

  TEST_CASE("resample is exact for band-limited fields") {
    const auto fine = make_field([](double x) { return cplx(std::cos(3 * x) + 0.5 * std::sin(x)); }, 64, 2.0 * pi);
    const auto coarse = resample(fine, 16);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(coarse.values[i] - fine.values[4 * i]) <= 1e-14);
    const auto up = resample(coarse, 128);
    for (int i = 0; i < 128; ++i) {
      const double x = 2.0 * pi * i / 128;
      CHECK(std::abs(up.values[i] - (std::cos(3 * x) + 0.5 * std::sin(x))) <= 1e-13);
    }
  }

  TEST_CASE("specification validation") {
    CHECK_THROWS_AS(validate(FractionalWave{2.5, 1.0, IdentityMap{}, NoForce{}}), DomainError);
    CHECK_THROWS_AS(validate(FractionalDiffusion{0.0, 1.0, IdentityMap{}, NoForce{}}), DomainError);
    CHECK_THROWS_AS(validate(Burgers{1.0, NAN, {}}), DomainError);
    CHECK_NOTHROW(validate(KdV{1.0, 0.02, {}}));
    CHECK_THROWS_AS(make_field([](double) { return cplx(0); }, 30, 1.0), DomainError);
    CHECK_THROWS_AS(make_field([](double) { return cplx(0); }, 32, -1.0), DomainError);
    const auto f = plane_wave(32, 1.0, 1);
    CHECK_THROWS_AS(evolve(Burgers{}, f, 0.0, 1), DomainError);
    CHECK_THROWS_AS(evolve(Burgers{}, f, 0.1, -1), DomainError);
    CHECK(family_name(PdeSpec{Boussinesq{}}) == "boussinesq");
  }
}
