#include "doctest.h"
#include "oracles.hpp"

#include "lplab/field.hpp"

using namespace lplab;

namespace {

double gaussian(const Point& x) { return std::exp(-kPi * (x[0] * x[0] + x[1] * x[1])); }

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(1, 1024, 16.0);
  CHECK(g.spacing() == doctest::Approx(1.0 / 32.0));
  CHECK(g.coordinate(512) == 0.0);
  CHECK(g.frequency_coordinate(512) == 0.0);
  CHECK(g.frequency_coordinate(513) == doctest::Approx(1.0 / 32.0));
  CHECK(g.periodic_offset(1000) == -24);
  CHECK_THROWS_AS(Grid(3, 16, 1.0), Error);
  CHECK_THROWS_AS(Grid(1, 100, 1.0), Error);
  CHECK_THROWS_AS(Grid(1, 16, -1.0), Error);

  const Grid g2(2, 8, 2.0);
  const Point p = g2.point(8 * 3 + 5);
  CHECK(p[0] == doctest::Approx(g2.coordinate(5)));
  CHECK(p[1] == doctest::Approx(g2.coordinate(3)));
}

TEST_CASE("gaussian is its own transform") {
  const Grid g(1, 1024, 16.0);
  const SpectralField s = to_spectrum(SampledField::from_function(g, [](const Point& x) { return gaussian(x); }));
  double err = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, std::abs(s[i] - gaussian(s.frequency(i))));
  CHECK(err <= 1e-10);

  const Grid g2(2, 128, 8.0);
  const SpectralField s2 = to_spectrum(SampledField::from_function(g2, [](const Point& x) { return gaussian(x); }));
  double err2 = 0.0;
  for (std::size_t i = 0; i < s2.size(); ++i) err2 = std::max(err2, std::abs(s2[i] - gaussian(s2.frequency(i))));
  CHECK(err2 <= 1e-10);
}

TEST_CASE("spectrum agrees with a direct Riemann sum") {
  const Grid g(1, 256, 8.0);
  const SampledField f = oracle::seeded_wave_packet(g, 7);
  const SpectralField s = to_spectrum(f);
  for (std::size_t i : {0ul, 77ul, 128ul, 140ul, 200ul}) {
    CHECK(std::abs(s[i] - oracle::direct_dft(f, s.frequency(i)[0])) <= 1e-11);
  }
}

TEST_CASE("zero field has zero spectrum and back") {
  const Grid g(1, 64, 4.0);
  const SpectralField s = to_spectrum(SampledField(g));
  for (const auto& v : s.values()) CHECK(v == Complex(0.0));
  const SampledField f = from_spectrum(SpectralField(g));
  for (const auto& v : f.values()) CHECK(v == Complex(0.0));
}

TEST_CASE("modulation theorem") {
  const Grid g(1, 1024, 16.0);
  const SampledField f = SampledField::from_function(
      g, [](const Point& x) { return gaussian(x) * std::cos(2.0 * kPi * x[0]); });
  const SpectralField s = to_spectrum(f);
  double err = 0.0, peak = 0.0, at = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double xi = s.frequency(i)[0];
    const double expect = 0.5 * (std::exp(-kPi * (xi - 1) * (xi - 1)) + std::exp(-kPi * (xi + 1) * (xi + 1)));
    err = std::max(err, std::abs(s[i] - expect));
    if (xi > 0 && std::abs(s[i]) > peak) {
      peak = std::abs(s[i]);
      at = xi;
    }
  }
  CHECK(err <= 1e-10);
  CHECK(at == doctest::Approx(1.0).epsilon(0.04));
}

TEST_CASE("round trip and inverse of a gaussian spectrum") {
  const Grid g(2, 64, 4.0);
  const SampledField f = oracle::seeded_wave_packet(g, 3);
  const SampledField back = from_spectrum(to_spectrum(f));
  CHECK(max_abs_diff(back.values(), f.values()) <= 1e-12 * f.max_abs());

  const Grid g1(1, 1024, 16.0);
  const SampledField h = from_spectrum(SpectralField::from_symbol(g1, [](const Point& xi) { return gaussian(xi); }));
  double err = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) err = std::max(err, std::abs(h[i] - gaussian(g1.point(i))));
  CHECK(err <= 1e-10);
}

TEST_CASE("lp norms") {
  const Grid g(1, 1024, 16.0);
  const SampledField f = SampledField::from_function(g, [](const Point& x) { return gaussian(x); });
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-6));
  CHECK(lp_norm(SampledField(g), 2.0) == 0.0);
  CHECK(lp_norm(SampledField(g), 0.5) == 0.0);
  CHECK_THROWS_AS(lp_norm(f, 0.0), Error);

  const auto bump = [](double x) { return std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; };
  const double mass = oracle::simpson(bump, -1.0, 1.0, 200000);
  const SampledField b = SampledField::from_function(g, [&](const Point& x) { return bump(x[0]) / mass; });
  CHECK(lp_norm(b, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("weighted lp norm") {
  const Grid g(1, 1024, 16.0);
  const SampledField f = SampledField::from_function(g, [](const Point& x) { return gaussian(x); });
  const SampledField one = SampledField::from_function(g, [](const Point&) { return 1.0; });
  for (double p : {0.5, 1.0, 2.0, 3.0}) CHECK(weighted_lp_norm(f, one, p) == lp_norm(f, p));
  CHECK(weighted_lp_norm(SampledField(g), one, 2.0) == 0.0);

  const SampledField w = SampledField::from_function(g, [](const Point& x) { return 1.0 + x[0] * x[0]; });
  const double expect = std::sqrt(
      oracle::simpson([](double x) { return std::exp(-2.0 * kPi * x * x) * (1.0 + x * x); }, -16.0, 16.0, 400000));
  CHECK(weighted_lp_norm(f, w, 2.0) == doctest::Approx(expect).epsilon(1e-8));

  SampledField neg = one;
  neg[10] = -1.0;
  CHECK_THROWS_AS(weighted_lp_norm(f, neg, 2.0), Error);
  CHECK_THROWS_AS(weighted_lp_norm(f, SampledField(Grid(1, 512, 16.0)), 2.0), Error);
}

TEST_CASE("scale integral") {
  const ScaleGrid dense = ScaleGrid::log_uniform(1e-3, 1e2, 4001);
  std::vector<double> zero(dense.size(), 0.0), u(dense.size());
  CHECK(scale_integral(zero, dense, 2.0) == 0.0);
  for (std::size_t k = 0; k < dense.size(); ++k) u[k] = dense[k] * std::exp(-dense[k]);
  CHECK(scale_integral(u, dense, 2.0) == doctest::Approx(0.5).epsilon(1e-3));

  const double rho = 0.8;
  const std::size_t K = 37;
  const ScaleGrid geo = ScaleGrid::geometric(10.0, rho, K);
  std::vector<double> ones(K, 1.0);
  CHECK(std::abs(scale_integral(ones, geo, 1.0) - K * std::log(1.0 / rho)) <= 1e-12);

  CHECK_THROWS_AS(scale_integral(ones, geo, 0.0), Error);
  CHECK_THROWS_AS(scale_integral(ones, geo, -1.0), Error);
  CHECK_THROWS_AS(ScaleGrid::explicit_list({}), Error);
}

TEST_CASE("parseval, shift invariance and homogeneity") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Grid g(1, 512, 16.0);
    const SampledField f = oracle::seeded_wave_packet(g, seed);
    CHECK(lp_norm(to_spectrum(f), 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-10));

    SampledField shifted(g);
    for (std::size_t i = 0; i < g.size(); ++i) shifted[(i + 37 * seed) % g.size()] = f[i];
    for (double p : {0.5, 1.0, 2.0}) {
      CHECK(lp_norm(shifted, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-14));
      const Complex c(-1.5, 2.0);
      CHECK(lp_norm(c * f, p) == doctest::Approx(std::abs(c) * lp_norm(f, p)).epsilon(1e-13));
    }
  }
}
