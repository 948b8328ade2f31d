#include "doctest.h"
#include "oracles.hpp"

#include "lplab/transforms.hpp"

using namespace lplab;

namespace {

// f^ = the bump supported in 1 < |xi| < 2.
SampledField band_one_two(const Grid& g, std::uint64_t seed) {
  const KernelSpec band = make_builtin("annulus_bump", {1.0, 1.2, 1.8, 2.0});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  const double x0 = shift(rng), x1 = shift(rng);
  return from_spectrum(SpectralField::from_symbol(g, [&](const Point& xi) {
    const Complex b = band(xi);
    if (b == 0.0) return Complex(0.0);
    return b * (std::polar(1.0, -2.0 * kPi * x0 * xi[0]) - 0.5 * std::polar(1.0, -2.0 * kPi * x1 * xi[0]));
  }));
}

double bump_energy() {
  const KernelSpec b = make_builtin("annulus_bump");
  return oracle::log_scale_integral([&](double t) { return std::norm(b({t, 0.0})); }, std::log(0.4), std::log(5.0));
}

double rel_l2(const SampledField& a, const SampledField& b) { return lp_norm(a - b, 2.0) / lp_norm(b, 2.0); }

}  // namespace

TEST_CASE("scale transform basics") {
  const Grid g(1, 1024, 16.0);
  const ScaleGrid scales = ScaleGrid::log_uniform(1e-3, 10.0, 32);
  const ScaleField zero = scale_transform(SampledField(g), make_builtin("poissonQ"), scales);
  for (const auto& v : zero.values()) CHECK(v == Complex(0.0));

  const SampledField f = oracle::seeded_wave_packet(g, 1);
  const ScaleField E = scale_transform(f, make_builtin("gaussian"), scales);
  CHECK(rel_l2(E.slice_field(scales.size() - 1), f) <= 1e-3);

  const SampledField gauss = SampledField::from_function(g, [](const Point& x) { return std::exp(-kPi * x[0] * x[0]); });
  const ScaleField Eq = scale_transform(gauss, make_builtin("poissonQ"), ScaleGrid::explicit_list({1.0, 0.5}));
  const SpectralField s = to_spectrum(Eq.slice_field(0));
  const std::size_t at = 512 + 32;
  CHECK(s.frequency(at)[0] == 1.0);
  CHECK(std::abs(s[at] - (-2.0 * kPi * std::exp(-2.0 * kPi) * std::exp(-kPi))) <= 1e-12);
}

TEST_CASE("g function of zero and the Plancherel constant of Q") {
  const Grid g(1, 4096, 64.0);
  const ScaleGrid scales = ScaleGrid::log_uniform(1e-4, 1e2, 256);
  const KernelSpec Q = make_builtin("poissonQ");
  CHECK(g_function(SampledField(g), Q, scales).max_abs() == 0.0);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SampledField f = oracle::seeded_wave_packet(g, seed);
    CHECK(lp_norm(g_function(f, Q, scales), 2.0) / lp_norm(f, 2.0) == doctest::Approx(0.5).epsilon(0.01));
  }
}

TEST_CASE("calderon multipliers") {
  // int (2 pi s e^{-2 pi s})^2 ds/s = 1/4.
  CHECK(calderon_multiplier(make_builtin("poissonQ"), {0.3, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(calderon_multiplier(make_builtin("poissonQ"), {-2.0, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(calderon_multiplier(make_builtin("annulus_bump"), {1.0, 0.0}) == doctest::Approx(bump_energy()).epsilon(1e-10));
  CHECK(calderon_multiplier(make_builtin("poissonQ"), {0.0, 0.0}) == 0.0);

  const KernelSpec n1 = normalize_calderon(make_builtin("annulus_bump"), 1);
  CHECK(calderon_multiplier(n1, {1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(calderon_multiplier(n1, {-0.2, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  const KernelSpec n2 = normalize_calderon(make_builtin("poissonQ"), 2);
  CHECK(calderon_multiplier(n2, {0.6, 0.8}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(normalize_calderon(make_derivative(make_builtin("poissonQ"), 0), 2), Error);
}

TEST_CASE("square function identity at q = 2") {
  const Grid g(1, 2048, 32.0);
  const ScaleGrid scales = ScaleGrid::log_uniform(1e-4, 1e2, 256);
  const double energy[] = {0.25, bump_energy()};
  const KernelSpec kernels[] = {make_builtin("poissonQ"), make_builtin("annulus_bump")};
  for (int k = 0; k < 2; ++k) {
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      const SampledField f = oracle::seeded_wave_packet(g, seed);
      const double lhs = std::pow(lp_norm(g_function(f, kernels[k], scales), 2.0), 2.0);
      const double rhs = energy[k] * std::pow(lp_norm(to_spectrum(f), 2.0), 2.0);
      CHECK(lhs == doctest::Approx(rhs).epsilon(0.005));
    }
  }
}

TEST_CASE("g function is dilation covariant") {
  const Grid g(1, 1024, 16.0);
  const double lambda = 2.0;
  const SampledField f = oracle::seeded_wave_packet(g, 5);
  const SampledField fl(g.dilated(lambda), std::vector<Complex>(f.values().begin(), f.values().end()));
  const ScaleGrid scales = ScaleGrid::geometric(64.0, std::exp2(-1.0 / 8.0), 120);
  const SampledField a = g_function(f, make_builtin("poissonQ"), scales);
  const SampledField b = g_function(fl, make_builtin("poissonQ"), scales.scaled(1.0 / lambda));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-8 * a.max_abs());
}

TEST_CASE("g function commutes with periodic shifts") {
  const Grid g(1, 512, 16.0);
  const SampledField f = oracle::seeded_wave_packet(g, 6);
  const std::size_t m = 77;
  SampledField shifted(g);
  for (std::size_t i = 0; i < g.size(); ++i) shifted[(i + m) % g.size()] = f[i];
  const ScaleGrid scales = ScaleGrid::log_uniform(1e-3, 10.0, 64);
  for (double q : {1.0, 2.0}) {
    const SampledField a = g_function(f, make_builtin("poissonQ"), scales, q);
    const SampledField b = g_function(shifted, make_builtin("poissonQ"), scales, q);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(b[(i + m) % g.size()] - a[i]) <= 1e-12 * a.max_abs());
  }
}

TEST_CASE("discrete square function") {
  const Grid g(1, 2048, 32.0);
  const KernelSpec psi = make_builtin("annulus_bump");
  CHECK(g_discrete(SampledField(g), psi, 0.5, -5, 5).max_abs() == 0.0);
  CHECK_THROWS_AS(g_discrete(SampledField(g), psi, 1.0, 0, 1), Error);
  CHECK_THROWS_AS(g_discrete(SampledField(g), psi, 0.5, 1, 0), Error);

  const SampledField f = band_one_two(g, 3);
  for (long j : {-10L, -6L, -4L, 4L, 6L, 10L}) CHECK(g_discrete(f, psi, 0.5, j, j).max_abs() <= 1e-14);
  const SampledField inner = g_discrete(f, psi, 0.5, -3, 3);
  const SampledField outer = g_discrete(f, psi, 0.5, -10, 10);
  CHECK(inner.max_abs() > 0.1);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(inner[i] - outer[i]) <= 1e-14);
}

TEST_CASE("discrete square function approaches the continuous one") {
  const Grid g(1, 2048, 32.0);
  const KernelSpec Q = make_builtin("poissonQ");
  const double b = 0.99;
  const long j_lo = static_cast<long>(std::ceil(std::log(100.0) / std::log(b)));
  const long j_hi = static_cast<long>(std::floor(std::log(1e-4) / std::log(b)));
  const SampledField f = oracle::seeded_wave_packet(g, 2);
  SampledField d = g_discrete(f, Q, b, j_lo, j_hi);
  d *= std::sqrt(std::log(1.0 / b));
  const SampledField c = g_function(f, Q, ScaleGrid::log_uniform(std::pow(b, j_hi), std::pow(b, j_lo), 4000));
  CHECK(rel_l2(d.modulus(), c) <= 0.02);
}

TEST_CASE("synthesis") {
  const Grid g(1, 1024, 16.0);
  const ScaleGrid scales = ScaleGrid::geometric(1200.0, std::exp2(-1.0 / 8.0), 180);
  const KernelSpec psi = normalize_calderon(make_builtin("annulus_bump"), 1);
  CHECK(synthesize(ScaleField(g, scales), psi, 1e-3).max_abs() == 0.0);
  CHECK_THROWS_AS(synthesize(ScaleField(g, ScaleGrid::log_uniform(0.1, 10.0, 16)), psi, 1e-3), Error);
  CHECK_THROWS_AS(synthesize(ScaleField(g, scales), psi, 1.5), Error);

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SampledField f = oracle::seeded_wave_packet(g, seed);
    const ScaleField h = scale_transform(f, make_reflected_conjugate(psi), scales);
    CHECK(rel_l2(synthesize(h, psi, 1e-3), f) <= 1e-3);
  }

  // One scale inside (eps, 1/eps).
  const ScaleGrid two = ScaleGrid::explicit_list({20.0, 1.0, 0.01});
  ScaleField h(g, two);
  const SampledField slice = oracle::seeded_wave_packet(g, 9);
  h.set_slice(1, slice);
  const SampledField out = synthesize(h, psi, 0.1);
  SampledField expect = scale_transform(slice, psi, ScaleGrid::explicit_list({1.0, 0.5})).slice_field(0);
  expect *= two.log_weight(1);
  CHECK(lp_norm(out - expect, 2.0) <= 1e-13 * lp_norm(expect, 2.0));
}

TEST_CASE("atoms") {
  const Grid g(1, 1024, 16.0);
  const ScaleGrid scales = ScaleGrid::geometric(64.0, std::exp2(-0.25), 64);
  const Cube cube{{0.5, 0.0}, 2.0};
  const Atom a = make_atom(g, scales, cube, 1.0, 7);
  CHECK(a.moment_order == 0);
  const AtomVerdict v = validate_atom(a);
  CHECK(v.pass);
  CHECK(v.support_residual <= 1e-14);
  CHECK(v.size_ratio == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(v.moment_residual <= 1e-10);
  for (std::size_t k = 0; k < scales.size(); ++k) {
    Complex mean = 0.0;
    for (const auto& x : a.values.slice(k)) mean += x;
    double mass = 0.0;
    for (const auto& x : a.values.slice(k)) mass += std::abs(x);
    CHECK(std::abs(mean) <= 1e-10 * std::max(mass, 1e-300));
  }

  Atom doubled = a;
  doubled.values *= 2.0;
  const AtomVerdict dv = validate_atom(doubled);
  CHECK_FALSE(dv.pass);
  CHECK(dv.size_ratio == doctest::Approx(1.8).epsilon(1e-12));

  const Atom moved = make_atom(g, scales, {{-9.0, 0.0}, 2.0}, 1.0, 7);
  const AtomVerdict mv = validate_atom(moved);
  CHECK(mv.pass);
  CHECK(mv.size_ratio == doctest::Approx(v.size_ratio).epsilon(1e-12));

  const Atom half = make_atom(g, scales, cube, 0.5, 3);
  CHECK(half.moment_order == 1);
  CHECK(validate_atom(half).pass);
  CHECK(atom_moment_order(2, 0.5) == 2);
  CHECK(atom_moment_order(1, 0.3) == 2);

  const Grid g2(2, 128, 8.0);
  const Atom a2 = make_atom(g2, ScaleGrid::geometric(16.0, 0.5, 12), {{1.0, -1.0}, 3.0}, 0.5, 5);
  CHECK(a2.moment_order == 2);
  CHECK(validate_atom(a2).pass);

  CHECK_THROWS_AS(make_atom(g, scales, {{0.0, 0.0}, 4.0 * g.spacing()}, 1.0, 1), Error);
  CHECK_THROWS_AS(make_atom(g, scales, {{15.5, 0.0}, 2.0}, 1.0, 1), Error);
  CHECK_THROWS_AS(make_atom(g, scales, cube, 1.5, 1), Error);
}

TEST_CASE("maximal square function against an annulus square function") {
  // ||(int sup_s |Phi_s * psi_t * f|^2 dt/t)^(1/2)||_p <= C ||g_eta(f)||_p.
  const Grid g(1, 1024, 32.0);
  const KernelSpec psi = make_builtin("annulus_bump", {1.0, 1.2, 1.8, 2.0});
  const KernelSpec eta = make_builtin("annulus_bump");
  const ScaleGrid scales = ScaleGrid::geometric(16.0, std::exp2(-0.25), 40);
  const GrandMaxConfig gm = GrandMaxConfig::default_for(g);
  for (double p : {1.0, 2.0}) {
    std::vector<double> C;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const SampledField f = oracle::seeded_wave_packet(g, seed);
      const ScaleField E = scale_transform(f, psi, scales);
      std::vector<double> acc(g.size(), 0.0);
      for (std::size_t k = 0; k < scales.size(); ++k) {
        const SampledField m = grand_max(E.slice_field(k), gm);
        for (std::size_t i = 0; i < g.size(); ++i) acc[i] += std::norm(m[i]) * scales.log_weight(k);
      }
      SampledField lhs(g);
      for (std::size_t i = 0; i < g.size(); ++i) lhs[i] = std::sqrt(acc[i]);
      C.push_back(lp_norm(lhs, p) / lp_norm(g_function(f, eta, scales), p));
    }
    const double hi = *std::max_element(C.begin(), C.end()), lo = *std::min_element(C.begin(), C.end());
    CAPTURE(p);
    CHECK(std::isfinite(hi));
    CHECK(hi / lo <= 3.0);
  }
}
