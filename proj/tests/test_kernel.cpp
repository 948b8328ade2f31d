#include "doctest.h"
#include "oracles.hpp"

#include "lplab/kernel.hpp"

using namespace lplab;

TEST_CASE("poissonQ symbol matches its closed form") {
  const KernelSpec Q = make_builtin("poissonQ");
  CHECK(Q({0.0, 0.0}) == Complex(0.0));
  for (double r : {1e-3, 0.1, 0.5, 1.0, 3.0}) {
    CHECK(Q({r, 0.0}).real() == doctest::Approx(-2.0 * kPi * r * std::exp(-2.0 * kPi * r)).epsilon(1e-14));
    CHECK(Q({-r, 0.0}) == Q({r, 0.0}));
    CHECK(Q({0.6 * r, 0.8 * r}).real() == doctest::Approx(Q({r, 0.0}).real()).epsilon(1e-14));
  }
  CHECK(Q({1.0 / (2.0 * kPi), 0.0}).real() == doctest::Approx(-std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("annulus bump plateau and support") {
  const KernelSpec b = make_builtin("annulus_bump");
  CHECK(b({1.5, 0.0}).real() == 1.0);
  CHECK(b({1.0, 0.0}).real() == 1.0);
  CHECK(b({2.0, 0.0}).real() == 1.0);
  CHECK(b({0.4, 0.0}) == Complex(0.0));
  CHECK(b({0.5, 0.0}) == Complex(0.0));
  CHECK(b({4.0, 0.0}) == Complex(0.0));
  CHECK(b({0.0, 0.0}) == Complex(0.0));
  const double mid = b({0.75, 0.0}).real();
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
}

TEST_CASE("unknown builtin") { CHECK_THROWS_AS(make_builtin("nope"), Error); }

TEST_CASE("catalog lists the builtins") {
  std::vector<std::string> names;
  for (const auto& k : builtin_catalog()) names.push_back(k.name);
  for (const char* want : {"poissonQ", "mexican_hat", "annulus_bump", "gaussian"}) {
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
    CHECK_NOTHROW(make_builtin(want));
  }
}

TEST_CASE("sampled gaussian kernel") {
  const Grid g(1, 1024, 16.0);
  const SampledField k = sample_kernel(make_builtin("gaussian"), g, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) err = std::max(err, std::abs(k[i] - std::exp(-kPi * g.coordinate(i) * g.coordinate(i))));
  CHECK(err <= 1e-10);
  CHECK_THROWS_AS(sample_kernel(make_builtin("gaussian"), g, 0.0), Error);
  CHECK_THROWS_AS(sample_kernel(make_builtin("gaussian"), g, -1.0), Error);
}

TEST_CASE("dilated kernel spectra are related by xi -> 2 xi") {
  const Grid g(1, 256, 8.0);
  const KernelSpec Q = make_builtin("poissonQ");
  const SpectralField s1 = to_spectrum(sample_kernel(Q, g, 1.0));
  const SpectralField s2 = to_spectrum(sample_kernel(Q, g, 2.0));
  const std::size_t c = 128;
  for (std::size_t m = 1; m < 60; ++m) {
    CHECK(std::abs(s2[c + m] - s1[c + 2 * m]) <= 1e-12);
    CHECK(std::abs(s2[c - m] - s1[c - 2 * m]) <= 1e-12);
  }
}

TEST_CASE("sampled Q has zero mean") {
  const Grid g(1, 8192, 256.0);
  const SampledField q = sample_kernel(make_builtin("poissonQ"), g, 1.0);
  Complex sum = 0.0;
  for (const auto& v : q.values()) sum += v;
  CHECK(std::abs(sum * g.spacing()) <= 1e-8);
}

TEST_CASE("radial symbols give radial kernels") {
  const Grid g(2, 128, 8.0);
  for (const char* name : {"poissonQ", "mexican_hat", "annulus_bump"}) {
    const SampledField k = sample_kernel(make_builtin(name), g, 1.0);
    const std::size_t n = 128, c = 64;
    double err = 0.0;
    for (std::size_t iy = 1; iy < n; ++iy) {
      for (std::size_t ix = 1; ix < n; ++ix) {
        const Complex v = k[iy * n + ix];
        err = std::max(err, std::abs(v - k[ix * n + iy]));
        err = std::max(err, std::abs(v - k[iy * n + (2 * c - ix)]));
        err = std::max(err, std::abs(v - k[(2 * c - iy) * n + ix]));
      }
    }
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("cancellation") {
  const CheckResult q = check_cancellation(make_builtin("poissonQ"));
  CHECK(q.pass);
  CHECK(q.value == 0.0);
  const CheckResult g = check_cancellation(make_builtin("gaussian"));
  CHECK_FALSE(g.pass);
  CHECK(g.value == doctest::Approx(1.0));
  CHECK(check_cancellation(make_builtin("mexican_hat")).pass);
}

TEST_CASE("non-degeneracy of Q equals 1/e") {
  const ScaleGrid t = ScaleGrid::log_uniform(1e-4, 1e4, 801);
  const NondegeneracyResult r1 = check_nondegeneracy({make_builtin("poissonQ")}, t, 1, 2);
  CHECK(std::abs(r1.infimum - std::exp(-1.0)) <= 1e-6);
  const NondegeneracyResult r2 = check_nondegeneracy({make_builtin("poissonQ")}, t, 2, 16);
  for (double v : r2.per_direction) CHECK(std::abs(v - std::exp(-1.0)) <= 1e-6);
}

TEST_CASE("non-degeneracy of a gaussian difference against a 1-D scan") {
  const double expect = oracle::scan_max(
      [](double s) { return std::exp(-kPi * s * s) - std::exp(-4.0 * kPi * s * s); }, 1e-3, 1e2);
  const ScaleGrid t = ScaleGrid::log_uniform(1e-4, 1e4, 801);
  const NondegeneracyResult r = check_nondegeneracy({make_builtin("gaussian_difference")}, t, 1, 2);
  CHECK(std::abs(r.infimum - expect) <= 1e-6);
  CHECK(r.infimum > 0.0);
}

TEST_CASE("non-degeneracy of the zero symbol and an empty family") {
  const ScaleGrid t = ScaleGrid::log_uniform(1e-4, 1e4, 201);
  const KernelSpec zero = make_custom("zero", [](const Point&) { return Complex(0.0); }, true);
  CHECK(check_nondegeneracy({zero}, t, 1, 2).infimum == 0.0);
  CHECK_THROWS_AS(check_nondegeneracy(KernelFamily{}, t, 1, 2), Error);
}

TEST_CASE("non-degeneracy is invariant under dilation of the symbol") {
  const ScaleGrid t = ScaleGrid::log_uniform(1e-4, 1e4, 801);
  const KernelSpec k = make_builtin("gaussian_difference");
  const double base = check_nondegeneracy({k}, t, 1, 2).infimum;
  for (double lambda : {0.3, 2.0, 7.0}) {
    CHECK(std::abs(check_nondegeneracy({make_dilated(k, lambda)}, t, 1, 2).infimum - base) <= 1e-6);
  }
}

TEST_CASE("decay class") {
  const std::vector<double> radii{2, 4, 8, 16, 32, 64};
  const DecayResult q = check_decay_class(make_builtin("poissonQ"), {2, 3.0, 1.0}, radii, 1);
  CHECK(q.pass);
  CHECK(q.multi_indices.size() == 3);
  CHECK(check_decay_class(make_builtin("poissonQ"), {2, 3.0, 1.0}, radii, 2).pass);
  CHECK(check_decay_class(make_builtin("annulus_bump"), {3, 10.0, 1.0}, radii, 1).pass);
  CHECK(check_decay_class(make_builtin("annulus_bump"), {2, 5.0, 1.0}, radii, 2).pass);

  const KernelSpec inv = make_custom(
      "inverse", [](const Point& xi) { return Complex(norm(xi) > 1.0 ? 1.0 / norm(xi) : 1.0); }, true);
  const DecayResult bad = check_decay_class(inv, {0, 2.0, 1.0}, radii, 1);
  CHECK_FALSE(bad.pass);
  CHECK(bad.slopes[0] == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(check_decay_class(inv, {0, 0.9, 1.0}, radii, 1).pass);

  CHECK_THROWS_AS(check_decay_class(inv, {0, 1.0, 4.0}, radii, 1), Error);
}

TEST_CASE("low-frequency growth") {
  const GrowthResult q = check_low_frequency_growth(make_builtin("poissonQ"));
  CHECK(q.pass);
  CHECK(q.epsilon == doctest::Approx(1.0).epsilon(0.05));
  const GrowthResult m = check_low_frequency_growth(make_builtin("mexican_hat"));
  CHECK(m.pass);
  CHECK(m.epsilon == doctest::Approx(2.0).epsilon(0.05));
  const GrowthResult g = check_low_frequency_growth(make_builtin("gaussian"));
  CHECK_FALSE(g.pass);
  CHECK(std::abs(g.epsilon) <= 0.05);
  const KernelSpec zero = make_custom("zero", [](const Point&) { return Complex(0.0); });
  CHECK_THROWS_AS(check_low_frequency_growth(zero), Error);
}

TEST_CASE("derivative and multiplier symbols") {
  const KernelSpec Q = make_builtin("poissonQ");
  const KernelSpec dQ = make_derivative(Q, 0);
  const Point xi{0.3, 0.0};
  CHECK(std::abs(dQ(xi) - Complex(0.0, 2.0 * kPi * 0.3) * Q(xi)) <= 1e-15);
  CHECK(std::abs(make_xi_multiplier(1)({0.2, 0.5}) - Complex(0.0, kPi)) <= 1e-15);
  CHECK(make_constant_multiplier(2.5)({9.0, 1.0}) == Complex(2.5));
  const KernelSpec r = make_reflected_conjugate(dQ);
  CHECK(std::abs(r(xi) - std::conj(dQ(xi))) <= 1e-15);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}
