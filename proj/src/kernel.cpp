#include "lplab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numerics.hpp"

namespace lplab {

namespace {

constexpr Complex kI{0.0, 1.0};

double param(const std::vector<double>& params, std::size_t i, double fallback) {
  return i < params.size() ? params[i] : fallback;
}

double annulus_profile(double r, double a, double b, double c, double d) {
  if (r <= a || r >= d) return 0.0;
  return smooth_step((r - a) / (b - a)) * smooth_step((d - r) / (d - c));
}

}  // namespace

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double up = std::exp(-1.0 / s);
  const double down = std::exp(-1.0 / (1.0 - s));
  return up / (up + down);
}

double KernelFamily::symbol_sum(const Point& xi, double p) const {
  double sum = 0.0;
  for (const auto& m : members) {
    const double a = std::abs(m(xi));
    sum += p == 1.0 ? a : (p == 2.0 ? a * a : std::pow(a, p));
  }
  return sum;
}

std::vector<BuiltinInfo> builtin_catalog() {
  return {
      {"poissonQ", "Q = d/dt P(.,t) at t=1; symbol -2 pi s|xi| exp(-2 pi s|xi|)", {1.0}},
      {"gaussian", "unit-mass Gaussian; symbol exp(-pi w^2 |xi|^2)", {1.0}},
      {"mexican_hat", "negative Laplacian of a Gaussian; symbol 4 pi^2 s^2|xi|^2 exp(-pi s^2|xi|^2)", {1.0}},
      {"annulus_bump", "C-infinity radial bump, 1 on [b,c], supported in (a,d)", {0.5, 1.0, 2.0, 4.0}},
      {"gaussian_difference", "symbol exp(-pi|xi|^2) - exp(-4 pi|xi|^2)", {}},
      {"bessel_gradient", "d_axis of a Bessel potential; symbol 2 pi i xi_axis (1+4 pi^2|xi|^2)^(-(1+tau)/2)", {1.0, 0.0}},
  };
}

KernelSpec make_builtin(const std::string& name, const std::vector<double>& params) {
  KernelSpec k;
  k.name = name;
  if (name == "poissonQ") {
    const double s = param(params, 0, 1.0);
    if (!(s > 0.0)) throw Error("poissonQ scale must be positive");
    k.symbol = [s](const Point& xi) {
      const double r = 2.0 * kPi * s * norm(xi);
      return Complex(-r * std::exp(-r), 0.0);
    };
    k.radial = true;
    return k;
  }
  if (name == "gaussian") {
    const double w = param(params, 0, 1.0);
    if (!(w > 0.0)) throw Error("gaussian width must be positive");
    k.symbol = [w](const Point& xi) {
      const double r = w * norm(xi);
      return Complex(std::exp(-kPi * r * r), 0.0);
    };
    k.radial = true;
    return k;
  }
  if (name == "mexican_hat") {
    const double s = param(params, 0, 1.0);
    if (!(s > 0.0)) throw Error("mexican_hat scale must be positive");
    k.symbol = [s](const Point& xi) {
      const double r2 = s * s * (xi[0] * xi[0] + xi[1] * xi[1]);
      return Complex(4.0 * kPi * kPi * r2 * std::exp(-kPi * r2), 0.0);
    };
    k.radial = true;
    return k;
  }
  if (name == "annulus_bump") {
    const double a = param(params, 0, 0.5), b = param(params, 1, 1.0);
    const double c = param(params, 2, 2.0), d = param(params, 3, 4.0);
    if (!(0.0 <= a && a < b && b <= c && c < d)) throw Error("annulus_bump needs 0 <= a < b <= c < d");
    k.symbol = [a, b, c, d](const Point& xi) { return Complex(annulus_profile(norm(xi), a, b, c, d), 0.0); };
    k.radial = true;
    return k;
  }
  if (name == "gaussian_difference") {
    k.symbol = [](const Point& xi) {
      const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
      return Complex(std::exp(-kPi * r2) - std::exp(-4.0 * kPi * r2), 0.0);
    };
    k.radial = true;
    return k;
  }
  if (name == "bessel_gradient") {
    const double tau = param(params, 0, 1.0);
    const int axis = static_cast<int>(param(params, 1, 0.0));
    if (!(tau >= 0.0)) throw Error("bessel_gradient tau must be nonnegative");
    if (axis != 0 && axis != 1) throw Error("bessel_gradient axis must be 0 or 1");
    k.symbol = [tau, axis](const Point& xi) {
      const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
      return 2.0 * kPi * kI * xi[axis] * std::pow(1.0 + 4.0 * kPi * kPi * r2, -0.5 * (1.0 + tau));
    };
    k.claimed_decay = DecaySpec{4, tau, 1.0};
    return k;
  }
  throw Error("unknown builtin kernel: " + name);
}

KernelSpec make_xi_multiplier(int axis) {
  if (axis != 0 && axis != 1) throw Error("axis must be 0 or 1");
  KernelSpec k;
  k.name = "xi_" + std::to_string(axis);
  k.symbol = [axis](const Point& xi) { return 2.0 * kPi * kI * xi[axis]; };
  k.multiplier = true;
  return k;
}

KernelSpec make_constant_multiplier(Complex c) {
  KernelSpec k;
  k.name = "constant";
  k.symbol = [c](const Point&) { return c; };
  k.multiplier = true;
  k.radial = true;
  return k;
}

KernelSpec make_derivative(const KernelSpec& base, int axis) {
  if (axis != 0 && axis != 1) throw Error("axis must be 0 or 1");
  KernelSpec k;
  k.name = "d" + std::to_string(axis) + "_" + base.name;
  k.symbol = [s = base.symbol, axis](const Point& xi) { return 2.0 * kPi * kI * xi[axis] * s(xi); };
  return k;
}

KernelSpec make_dilated(const KernelSpec& base, double lambda) {
  if (!(lambda > 0.0)) throw Error("dilation must be positive");
  KernelSpec k = base;
  k.name = base.name + "@" + std::to_string(lambda);
  k.symbol = [s = base.symbol, lambda](const Point& xi) { return s({lambda * xi[0], lambda * xi[1]}); };
  return k;
}

KernelSpec make_reflected_conjugate(const KernelSpec& base) {
  KernelSpec k = base;
  k.name = "conj_" + base.name;
  k.symbol = [s = base.symbol](const Point& xi) { return std::conj(s(xi)); };
  return k;
}

KernelSpec make_custom(std::string name, Symbol symbol, bool radial) {
  KernelSpec k;
  k.name = std::move(name);
  k.symbol = std::move(symbol);
  k.radial = radial;
  return k;
}

SampledField sample_kernel(const KernelSpec& k, const Grid& grid, double t) {
  if (!(t > 0.0)) throw Error("kernel scale t must be positive");
  SpectralField spectrum(grid);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const Point xi = grid.frequency(i);
    spectrum[i] = k({t * xi[0], t * xi[1]});
  }
  return from_spectrum(spectrum);
}

CheckResult check_cancellation(const KernelSpec& k) {
  const double residual = std::abs(k({0.0, 0.0}));
  return {residual <= 1e-12, residual};
}

std::vector<Point> sample_directions(int dimension, int count) {
  if (dimension == 1) return {{1.0, 0.0}, {-1.0, 0.0}};
  if (dimension != 2) throw Error("dimension must be 1 or 2");
  if (count < 1) throw Error("need at least one direction");
  std::vector<Point> dirs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double a = 2.0 * kPi * i / count;
    dirs[static_cast<std::size_t>(i)] = {std::cos(a), std::sin(a)};
  }
  return dirs;
}

NondegeneracyResult check_nondegeneracy(const KernelFamily& family, const ScaleGrid& t_range,
                                        int dimension, int directions) {
  if (family.size() == 0) throw Error("empty kernel family");
  if (directions < 1) throw Error("need at least one direction");
  if (t_range.t_max() / t_range.t_min() < 1e4 * (1.0 - 1e-12)) {
    throw Error("scale range must span at least four decades");
  }
  NondegeneracyResult result;
  result.infimum = std::numeric_limits<double>::infinity();
  const std::size_t count = t_range.size();
  for (const Point& e : sample_directions(dimension, directions)) {
    auto along = [&](double log_t) {
      const double t = std::exp(log_t);
      return family.symbol_sum({t * e[0], t * e[1]}, 1.0);
    };
    std::size_t best = 0;
    double best_value = -1.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double v = along(std::log(t_range[k]));
      if (v > best_value) {
        best_value = v;
        best = k;
      }
    }
    double best_t = t_range[best];
    if (best_value > 0.0) {
      const double lo = std::log(t_range[std::min(best + 1, count - 1)]);
      const double hi = std::log(t_range[best == 0 ? 0 : best - 1]);
      const double u = detail::golden_maximize(along, lo, hi);
      if (along(u) > best_value) {
        best_value = along(u);
        best_t = std::exp(u);
      }
    }
    result.per_direction.push_back(best_value);
    result.argmax_scale.push_back(best_t);
    result.infimum = std::min(result.infimum, best_value);
  }
  return result;
}

namespace {

// Fourth-order central difference along `axis`.
Complex central_difference(const std::function<Complex(const Point&)>& g, const Point& xi, int axis,
                           double h) {
  auto shifted = [&](double s) {
    Point p = xi;
    p[static_cast<std::size_t>(axis)] += s * h;
    return g(p);
  };
  return (shifted(-2.0) - 8.0 * shifted(-1.0) + 8.0 * shifted(1.0) - shifted(2.0)) / (12.0 * h);
}

Complex partial(const Symbol& s, std::array<int, 2> gamma, const Point& xi, double h) {
  for (int axis = 0; axis < 2; ++axis) {
    if (gamma[static_cast<std::size_t>(axis)] > 0) {
      std::array<int, 2> lower = gamma;
      --lower[static_cast<std::size_t>(axis)];
      return central_difference([&](const Point& p) { return partial(s, lower, p, h); }, xi, axis, h);
    }
  }
  return s(xi);
}

}  // namespace

DecayResult check_decay_class(const KernelSpec& k, const DecaySpec& decay,
                              const std::vector<double>& probe_radii, int dimension) {
  if (decay.l < 0 || decay.tau < 0.0) throw Error("decay class needs l >= 0 and tau >= 0");
  if (probe_radii.size() < 2) throw Error("need at least two probe radii");
  for (double r : probe_radii) {
    if (!(r > decay.neighborhood_radius)) throw Error("probe radii must exceed the neighborhood radius");
  }
  const std::vector<Point> dirs = sample_directions(dimension, 16);

  DecayResult result;
  result.pass = true;
  result.worst_excess = -std::numeric_limits<double>::infinity();
  for (int order = 0; order <= decay.l; ++order) {
    for (int g0 = order; g0 >= 0; --g0) {
      const int g1 = order - g0;
      if (dimension == 1 && g1 > 0) continue;
      const std::array<int, 2> gamma{g0, g1};

      std::vector<double> log_r, log_m;
      double tail = 0.0;
      for (double r : probe_radii) {
        const double h = 1e-3 * r;
        if (!(h > std::numeric_limits<double>::min()) || r + h == r) {
          throw Error("finite-difference step underflow");
        }
        double m = 0.0;
        for (const Point& e : dirs) m = std::max(m, std::abs(partial(k.symbol, gamma, {r * e[0], r * e[1]}, h)));
        tail = m;
        if (m > 0.0 && std::isfinite(m)) {
          log_r.push_back(std::log(r));
          log_m.push_back(std::log(m));
        }
      }
      double slope = -std::numeric_limits<double>::infinity();
      if (tail > 0.0) {
        if (log_r.size() < 2) throw Error("too few nonvanishing probes to fit a slope");
        slope = detail::fit_slope(log_r, log_m);
      }
      const double excess = slope + decay.tau + order;
      result.slopes.push_back(slope);
      result.multi_indices.push_back(gamma);
      result.worst_excess = std::max(result.worst_excess, excess);
      if (excess > 0.1) result.pass = false;
    }
  }
  return result;
}

GrowthResult check_low_frequency_growth(const KernelSpec& k) {
  // Fit over [1e-4, 1e-2]: on [1e-4, 1e-1] the exp(-2 pi|xi|) factor of Q
  // already bends the fitted slope by about 6%.
  constexpr int kSamples = 64;
  std::vector<double> lx, ly;
  for (int i = 0; i < kSamples; ++i) {
    const double r = 1e-4 * std::pow(1e2, static_cast<double>(i) / (kSamples - 1));
    const double v = std::abs(k({r, 0.0}));
    if (v > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(v));
    }
  }
  if (lx.size() < 2) throw Error("symbol vanishes on the low-frequency probe ray");
  const double eps = detail::fit_slope(lx, ly);
  return {eps >= 0.1, eps};
}

}  // namespace lplab
