#include "doctest.h"
#include "oracles.hpp"

#include "lplab/maximal.hpp"
#include "lplab/transforms.hpp"

using namespace lplab;

namespace {

SampledField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  SampledField f(g);
  for (auto& v : f.values()) v = Complex(d(rng), d(rng));
  return f;
}

std::vector<double> moduli(const SampledField& f) {
  std::vector<double> m;
  for (const auto& v : f.values()) m.push_back(std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("peetre of a constant") {
  const Grid g(1, 128, 4.0);
  SampledField f(g);
  for (auto& v : f.values()) v = Complex(0.0, -2.5);
  const SampledField p = peetre_max(f, {2.0, 3.0});
  for (const auto& v : p.values()) CHECK(v.real() == 2.5);
  const Grid g2(2, 16, 2.0);
  SampledField f2(g2);
  for (auto& v : f2.values()) v = 1.5;
  const SampledField p2 = peetre_max(f2, {1.0, 1.0});
  for (const auto& v : p2.values()) CHECK(v.real() == 1.5);
}

TEST_CASE("peetre of a spike") {
  const Grid g(1, 128, 4.0);
  SampledField f(g);
  const std::size_t y0 = 40;
  f[y0] = 1.0;
  const double N = 1.5, R = 2.0;
  const SampledField p = peetre_max(f, {N, R});
  for (std::size_t x = 0; x < g.size(); ++x) {
    const double dist = g.spacing() * static_cast<double>(std::abs(g.periodic_offset(static_cast<long>(x) - static_cast<long>(y0))));
    CHECK(p[x].real() == doctest::Approx(std::pow(1.0 + R * dist, -N)).epsilon(1e-15));
  }
}

TEST_CASE("peetre agrees with brute force") {
  const Grid g(1, 64, 2.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SampledField f = random_field(g, seed);
    const std::vector<Complex> vals(f.values().begin(), f.values().end());
    for (double N : {0.5, 2.0}) {
      for (double R : {0.3, 4.0}) {
        const SampledField p = peetre_max(f, {N, R});
        const auto ref = oracle::brute_peetre_1d(vals, g.spacing(), N, R);
        for (std::size_t i = 0; i < g.size(); ++i) {
          CHECK(p[i].real() == doctest::Approx(ref[i]).epsilon(1e-14));
          CHECK(p[i].real() >= std::abs(f[i]));
        }
      }
    }
  }
}

TEST_CASE("hardy-littlewood basics") {
  const Grid g(1, 256, 8.0);
  SampledField one(g);
  for (auto& v : one.values()) v = 1.0;
  const SampledField m1 = hl_max(one);
  for (const auto& v : m1.values()) CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));

  const Grid g2(2, 32, 4.0);
  SampledField one2(g2);
  for (auto& v : one2.values()) v = 1.0;
  const SampledField m2 = hl_max(one2);
  for (const auto& v : m2.values()) CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));

  const Grid big(1, 1024, 16.0);
  SampledField ind(big);
  for (std::size_t i = 0; i < big.size(); ++i) {
    const double x = big.coordinate(i);
    if (x >= 0.0 && x < 1.0) ind[i] = 1.0;
  }
  const SampledField m = hl_max(ind);
  const std::size_t at3 = static_cast<std::size_t>((3.0 + 16.0) / big.spacing());
  CHECK(big.coordinate(at3) == 3.0);
  CHECK(std::abs(m[at3].real() - 1.0 / 3.0) <= 2.0 * big.spacing());
}

TEST_CASE("hardy-littlewood agrees with brute force and dominates |f|") {
  const Grid g(1, 64, 2.0);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SampledField f = random_field(g, seed);
    const SampledField m = hl_max(f);
    const auto ref = oracle::brute_hl_1d(moduli(f));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(m[i].real() == doctest::Approx(ref[i]).epsilon(1e-12));
      CHECK(m[i].real() >= std::abs(f[i]));
    }
  }
  const Grid g2(2, 16, 2.0);
  const SampledField f2 = random_field(g2, 9);
  const SampledField m2 = hl_max(f2);
  for (std::size_t i = 0; i < g2.size(); ++i) CHECK(m2[i].real() >= std::abs(f2[i]));
}

TEST_CASE("hardy-littlewood is monotone") {
  for (int dim : {1, 2}) {
    const Grid g(dim, dim == 1 ? 128 : 16, 4.0);
    const SampledField f = random_field(g, 5);
    SampledField smaller(g);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) smaller[i] = u(rng) * f[i];
    const SampledField a = hl_max(f), b = hl_max(smaller);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[i].real() >= b[i].real());
  }
}

TEST_CASE("grand maximal function") {
  const Grid g(1, 1024, 16.0);
  const GrandMaxConfig cfg = GrandMaxConfig::default_for(g);
  CHECK(grand_max(SampledField(g), cfg).max_abs() == 0.0);

  const SampledField f = oracle::seeded_wave_packet(g, 2);
  const SampledField gm = grand_max(f, cfg);
  const ScaleField smallest = scale_transform(f, cfg.mollifier, ScaleGrid::explicit_list({2.0 * cfg.scales.t_min(), cfg.scales.t_min()}));
  const auto slice = smallest.slice(1);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(gm[i].real() >= std::abs(slice[i]));

  const SampledField gauss = SampledField::from_function(g, [](const Point& x) { return std::exp(-kPi * x[0] * x[0]); });
  const GrandMaxConfig fine{make_builtin("gaussian"), ScaleGrid::log_uniform(1e-4, 16.0, 64)};
  CHECK(grand_max(gauss, fine)[512].real() == doctest::Approx(1.0).epsilon(1e-6));

  const GrandMaxConfig bad{make_builtin("poissonQ"), cfg.scales};
  CHECK_THROWS_AS(grand_max(f, bad), Error);
}

TEST_CASE("grand maximal function is dilation covariant") {
  const Grid g(1, 1024, 16.0);
  const double lambda = 2.0;
  const Grid gl = g.dilated(lambda);
  const SampledField f = oracle::seeded_wave_packet(g, 4);
  SampledField fl(gl, std::vector<Complex>(f.values().begin(), f.values().end()));
  const ScaleGrid scales = ScaleGrid::geometric(8.0, std::exp2(-1.0 / 8.0), 96);
  const SampledField a = grand_max(f, {make_builtin("gaussian"), scales});
  const SampledField b = grand_max(fl, {make_builtin("gaussian"), scales.scaled(1.0 / lambda)});
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
}

TEST_CASE("peetre monotone in N and R") {
  const Grid g(1, 256, 8.0);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const SampledField f = oracle::seeded_wave_packet(g, seed);
    const SampledField base = peetre_max(f, {1.0, 1.0});
    const SampledField moreN = peetre_max(f, {2.0, 1.0});
    const SampledField moreR = peetre_max(f, {1.0, 2.0});
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(moreN[i].real() <= base[i].real());
      CHECK(moreR[i].real() <= base[i].real());
    }
  }
}

TEST_CASE("gradient modulus") {
  const Grid g(1, 512, 16.0);
  const SampledField f = SampledField::from_function(g, [](const Point& x) { return std::exp(-kPi * x[0] * x[0]); });
  const SampledField d = gradient_modulus(f);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i);
    err = std::max(err, std::abs(d[i].real() - std::abs(2.0 * kPi * x * std::exp(-kPi * x * x))));
  }
  CHECK(err <= 1e-10);
}

TEST_CASE("peetre pointwise bound") {
  const Grid g(1, 512, 16.0);
  SampledField one(g);
  for (auto& v : one.values()) v = 1.0;
  const double r = 0.5, N = 1.0 / r;
  for (const auto& b : peetre_bound_check(one, 1.0, r, {1.0, 0.5, 0.25})) {
    CHECK(b.c_min <= std::pow(b.delta, N) * (1.0 + 1e-12));
  }

  SampledField train = SampledField::from_function(g, [](const Point& x) {
    double s = 0.0;
    for (int k = -3; k <= 3; ++k) s += std::exp(-4.0 * kPi * (x[0] - 3.0 * k) * (x[0] - 3.0 * k));
    return Complex(s);
  });
  const auto bounds = peetre_bound_check(train, 1.0, r, {1.0, 0.5, 0.25});
  double lo = 1e300, hi = 0.0;
  for (const auto& b : bounds) {
    CHECK(std::isfinite(b.c_min));
    lo = std::min(lo, b.c_min);
    hi = std::max(hi, b.c_min);
  }
  // One constant serves every delta: the measured constant stays bounded as delta shrinks.
  CHECK(lo > 0.0);
  CHECK(hi <= 1.0);
  for (std::size_t k = 1; k < bounds.size(); ++k) CHECK(bounds[k].c_min <= bounds[k - 1].c_min * (1.0 + 1e-12));

  const double lambda = 2.0;
  SampledField dilated(g.dilated(lambda), std::vector<Complex>(train.values().begin(), train.values().end()));
  const auto scaled = peetre_bound_check(dilated, lambda, r, {1.0, 0.5, 0.25});
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    CHECK(scaled[k].c_min == doctest::Approx(bounds[k].c_min).epsilon(1e-8));
  }
  CHECK_THROWS_AS(peetre_bound_check(train, 1.0, r, {0.0}), Error);
}

TEST_CASE("peetre of the scale field against the maximal function of its powers") {
  // int (E(.,t)**_{N,1/t})^q dt/t <= C int M(|E(.,t)|^r)^(q/r) dt/t, r = n/N.
  const Grid g(1, 512, 16.0);
  const double N = 2.0, r = 0.5, q = 2.0;
  const ScaleGrid scales = ScaleGrid::geometric(8.0, std::exp2(-0.25), 29);
  const KernelSpec Q = make_builtin("poissonQ");
  std::vector<double> C;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SampledField f = oracle::seeded_wave_packet(g, seed);
    const ScaleField E = scale_transform(f, Q, scales);
    std::vector<double> lhs(g.size(), 0.0), rhs(g.size(), 0.0);
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const SampledField Ek = E.slice_field(k);
      const SampledField pm = peetre_max(Ek, {N, 1.0 / scales[k]});
      SampledField powered(g);
      for (std::size_t i = 0; i < g.size(); ++i) powered[i] = std::pow(std::abs(Ek[i]), r);
      const SampledField m = hl_max(powered);
      for (std::size_t i = 0; i < g.size(); ++i) {
        lhs[i] += std::pow(pm[i].real(), q) * scales.log_weight(k);
        rhs[i] += std::pow(m[i].real(), q / r) * scales.log_weight(k);
      }
    }
    const double rmax = *std::max_element(rhs.begin(), rhs.end());
    double c = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (rhs[i] > 1e-8 * rmax) c = std::max(c, lhs[i] / rhs[i]);
    }
    C.push_back(c);
  }
  const double hi = *std::max_element(C.begin(), C.end()), lo = *std::min_element(C.begin(), C.end());
  CHECK(std::isfinite(hi));
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 3.0);
}
