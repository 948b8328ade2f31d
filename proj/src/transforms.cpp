#include "lplab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lplab {

// --- ScaleField -----------------------------------------------------------------

ScaleField::ScaleField(Grid grid, ScaleGrid scales)
    : grid_(grid), scales_(std::move(scales)), values_(grid_.size() * scales_.size()) {}

ScaleField::ScaleField(Grid grid, ScaleGrid scales, std::vector<Complex> values)
    : grid_(grid), scales_(std::move(scales)), values_(std::move(values)) {
  if (values_.size() != grid_.size() * scales_.size()) throw Error("scale field size mismatch");
}

std::span<const Complex> ScaleField::slice(std::size_t k) const {
  return std::span<const Complex>(values_).subspan(k * grid_.size(), grid_.size());
}

std::span<Complex> ScaleField::slice(std::size_t k) {
  return std::span<Complex>(values_).subspan(k * grid_.size(), grid_.size());
}

SampledField ScaleField::slice_field(std::size_t k) const {
  const auto s = slice(k);
  return SampledField(grid_, std::vector<Complex>(s.begin(), s.end()));
}

void ScaleField::set_slice(std::size_t k, const SampledField& f) {
  if (!(f.grid() == grid_)) throw Error("grid mismatch");
  std::copy(f.values().begin(), f.values().end(), slice(k).begin());
}

SampledField ScaleField::scale_norm(double q) const {
  if (!(q > 0.0)) throw Error("exponent q must be positive");
  SampledField out(grid_);
  std::vector<double> acc(grid_.size(), 0.0);
  for (std::size_t k = 0; k < scale_count(); ++k) {
    const auto s = slice(k);
    const double w = scales_.log_weight(k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      acc[i] += (q == 2.0 ? std::norm(s[i]) : std::pow(std::abs(s[i]), q)) * w;
    }
  }
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = std::pow(acc[i], 1.0 / q);
  return out;
}

ScaleField& ScaleField::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

// --- square functions -------------------------------------------------------------

ScaleField scale_transform(const SampledField& f, const KernelSpec& psi, const ScaleGrid& scales) {
  const SpectralField spectrum = to_spectrum(f);
  ScaleField out(f.grid(), scales);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < static_cast<long>(scales.size()); ++k) {
    SpectralField s = spectrum;
    s.apply(psi.symbol, scales[static_cast<std::size_t>(k)]);
    out.set_slice(static_cast<std::size_t>(k), from_spectrum(s));
  }
  return out;
}

namespace {

// Accumulates sum_k weight_k |f * psi_{t_k}|^q without storing the scale field.
// Scales are processed in fixed blocks and summed in scale order, so the result
// does not depend on the thread count.
SampledField power_sum(const SampledField& f, const KernelSpec& psi, std::span<const double> scales,
                       std::span<const double> weights, double q) {
  if (!(q > 0.0)) throw Error("exponent q must be positive");
  constexpr std::size_t kBlock = 16;
  const SpectralField spectrum = to_spectrum(f);
  const std::size_t size = f.size();
  std::vector<double> acc(size, 0.0);
  std::vector<double> block(kBlock * size);
  for (std::size_t first = 0; first < scales.size(); first += kBlock) {
    const std::size_t count = std::min(kBlock, scales.size() - first);
#pragma omp parallel for schedule(dynamic)
    for (long b = 0; b < static_cast<long>(count); ++b) {
      const std::size_t k = first + static_cast<std::size_t>(b);
      SpectralField s = spectrum;
      s.apply(psi.symbol, scales[k]);
      const SampledField e = from_spectrum(s);
      double* out = block.data() + static_cast<std::size_t>(b) * size;
      for (std::size_t i = 0; i < size; ++i) {
        out[i] = (q == 2.0 ? std::norm(e[i]) : std::pow(std::abs(e[i]), q)) * weights[k];
      }
    }
    for (std::size_t b = 0; b < count; ++b) {
      const double* in = block.data() + b * size;
      for (std::size_t i = 0; i < size; ++i) acc[i] += in[i];
    }
  }
  SampledField out(f.grid());
  for (std::size_t i = 0; i < size; ++i) out[i] = std::pow(acc[i], 1.0 / q);
  return out;
}

}  // namespace

SampledField g_function(const SampledField& f, const KernelSpec& psi, const ScaleGrid& scales, double q) {
  return power_sum(f, psi, scales.scales(), scales.log_weights(), q);
}

SampledField g_discrete(const SampledField& f, const KernelSpec& psi, double b, long j_lo, long j_hi,
                        double q) {
  if (!(b > 0.0 && b < 1.0)) throw Error("b must lie in (0,1)");
  if (j_hi < j_lo) throw Error("empty j range");
  std::vector<double> scales, weights;
  for (long j = j_lo; j <= j_hi; ++j) {
    scales.push_back(std::pow(b, static_cast<double>(j)));
    weights.push_back(1.0);
  }
  return power_sum(f, psi, scales, weights, q);
}

SampledField synthesize(const ScaleField& h, const KernelSpec& psi, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0,1)");
  const ScaleGrid& scales = h.scales();
  if (scales.t_min() > epsilon * (1.0 + 1e-9) || scales.t_max() < (1.0 / epsilon) * (1.0 - 1e-9)) {
    throw Error("scale grid does not cover (epsilon, 1/epsilon)");
  }
  SpectralField total(h.grid());
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const double t = scales[k];
    if (!(t > epsilon && t < 1.0 / epsilon)) continue;
    SpectralField s = to_spectrum(h.slice_field(k));
    s.apply(psi.symbol, t);
    const double w = scales.log_weight(k);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += w * s[i];
  }
  return from_spectrum(total);
}

double calderon_multiplier(const KernelSpec& k, const Point& xi) {
  const double r = norm(xi);
  if (r == 0.0) return 0.0;
  const Point e{xi[0] / r, xi[1] / r};
  // int |k^(e^u e)|^2 du, composite Simpson on a wide window in u = log t.
  constexpr double lo = -46.0, hi = 12.0;
  constexpr int n = 1 << 16;
  const double step = (hi - lo) / n;
  auto f = [&](double u) {
    const double t = std::exp(u);
    return std::norm(k({t * e[0], t * e[1]}));
  };
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(lo + i * step);
  return sum * step / 3.0;
}

KernelSpec normalize_calderon(const KernelSpec& k, int dimension) {
  if (dimension == 2 && !k.radial) throw Error("Calderon normalization in 2-D needs a radial symbol");
  const double plus = calderon_multiplier(k, {1.0, 0.0});
  const double minus = dimension == 1 ? calderon_multiplier(k, {-1.0, 0.0}) : plus;
  if (!(plus > 0.0 && minus > 0.0)) throw Error("symbol has zero Calderon multiplier");
  KernelSpec out = k;
  out.name = k.name + "_normalized";
  const double sp = 1.0 / std::sqrt(plus), sm = 1.0 / std::sqrt(minus);
  out.symbol = [s = k.symbol, sp, sm](const Point& xi) { return s(xi) * (xi[0] < 0.0 && xi[1] == 0.0 ? sm : sp); };
  return out;
}

// --- atoms ------------------------------------------------------------------------

bool Cube::contains(const Point& x, int dimension) const {
  const double half = 0.5 * side;
  for (int a = 0; a < dimension; ++a) {
    if (std::abs(x[static_cast<std::size_t>(a)] - center[static_cast<std::size_t>(a)]) > half) return false;
  }
  return true;
}

double Cube::volume(int dimension) const { return dimension == 1 ? side : side * side; }

int atom_moment_order(int dimension, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw Error("atom exponent p must lie in (0,1]");
  return static_cast<int>(std::floor(dimension * (1.0 / p - 1.0) + 1e-12));
}

namespace {

std::vector<std::array<int, 2>> multi_indices_up_to(int order, int dimension) {
  std::vector<std::array<int, 2>> out;
  for (int total = 0; total <= order; ++total) {
    for (int g0 = total; g0 >= 0; --g0) {
      const int g1 = total - g0;
      if (dimension == 1 && g1 > 0) continue;
      out.push_back({g0, g1});
    }
  }
  return out;
}

double monomial(const Point& x, const Cube& cube, const std::array<int, 2>& gamma) {
  const double u = (x[0] - cube.center[0]) / cube.side;
  const double v = (x[1] - cube.center[1]) / cube.side;
  return std::pow(u, gamma[0]) * std::pow(v, gamma[1]);
}

// C-infinity window: 1 on the inner half of the cube, 0 outside it.
double cube_window(const Point& x, const Cube& cube, int dimension) {
  double w = 1.0;
  for (int a = 0; a < dimension; ++a) {
    const double u = std::abs(x[static_cast<std::size_t>(a)] - cube.center[static_cast<std::size_t>(a)]) / (0.5 * cube.side);
    w *= smooth_step(2.0 * (1.0 - u));
  }
  return w;
}

}  // namespace

Atom make_atom(const Grid& grid, const ScaleGrid& scales, const Cube& cube, double p, std::uint64_t seed) {
  const int dim = grid.dimension();
  const int order = atom_moment_order(dim, p);
  const double h = grid.spacing();
  if (cube.side < 8.0 * h) throw Error("cube must span at least 8 grid cells per axis");
  for (int a = 0; a < dim; ++a) {
    const double c = cube.center[static_cast<std::size_t>(a)];
    if (c - 0.5 * cube.side < -grid.half_extent() || c + 0.5 * cube.side >= grid.half_extent()) {
      throw Error("cube must lie inside the grid box");
    }
  }

  std::vector<std::size_t> cells;
  std::vector<double> window;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.point(i);
    const double w = cube_window(x, cube, dim);
    if (w > 0.0) {
      cells.push_back(i);
      window.push_back(w);
    }
  }
  const double dv = grid.cell_volume();
  auto inner = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) s += window[c] * u[c] * v[c];
    return s * dv;
  };

  // Orthonormal basis of polynomials of degree <= order in the window inner product.
  std::vector<std::vector<double>> basis;
  for (const auto& gamma : multi_indices_up_to(order, dim)) {
    std::vector<double> m(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) m[c] = monomial(grid.point(cells[c]), cube, gamma);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : basis) {
        const double proj = inner(m, e);
        for (std::size_t c = 0; c < m.size(); ++c) m[c] -= proj * e[c];
      }
    }
    const double nrm = std::sqrt(inner(m, m));
    if (!(nrm > 1e-12)) throw Error("moment projection is ill-conditioned");
    for (auto& v : m) v /= nrm;
    basis.push_back(std::move(m));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  constexpr int kModes = 4;

  Atom atom{cube, p, order, seed, ScaleField(grid, scales)};
  for (std::size_t k = 0; k < scales.size(); ++k) {
    // Scale profile concentrated around t ~ side, Gaussian in log t.
    const double lt = std::log(scales[k] / cube.side);
    const double profile = std::exp(-0.5 * lt * lt);
    std::vector<double> r(cells.size(), 0.0);
    for (int m0 = 0; m0 < kModes; ++m0) {
      for (int m1 = 0; m1 < (dim == 1 ? 1 : kModes); ++m1) {
        const double a = coeff(rng), ph0 = phase(rng), ph1 = phase(rng);
        for (std::size_t c = 0; c < cells.size(); ++c) {
          const Point x = grid.point(cells[c]);
          const double u = (x[0] - cube.center[0]) / cube.side;
          const double v = (x[1] - cube.center[1]) / cube.side;
          r[c] += a * std::cos(2.0 * kPi * (m0 + 1) * u + ph0) * std::cos(2.0 * kPi * m1 * v + ph1);
        }
      }
    }
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : basis) {
        const double proj = inner(r, e);
        for (std::size_t c = 0; c < r.size(); ++c) r[c] -= proj * e[c];
      }
    }
    auto slice = atom.values.slice(k);
    for (std::size_t c = 0; c < cells.size(); ++c) slice[cells[c]] = profile * window[c] * r[c];
  }

  const double target = 0.9 * std::pow(cube.volume(dim), -1.0 / p);
  const double peak = atom.values.scale_norm(2.0).max_abs();
  if (!(peak > 0.0)) throw Error("atom generation produced a zero field");
  atom.values *= target / peak;
  return atom;
}

AtomVerdict validate_atom(const Atom& atom) {
  const ScaleField& a = atom.values;
  const Grid& grid = a.grid();
  const int dim = grid.dimension();
  AtomVerdict v;

  for (std::size_t k = 0; k < a.scale_count(); ++k) {
    const auto s = a.slice(k);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!atom.cube.contains(grid.point(i), dim)) v.support_residual = std::max(v.support_residual, std::abs(s[i]));
    }
  }
  v.size_ratio = a.scale_norm(2.0).max_abs() / std::pow(atom.cube.volume(dim), -1.0 / atom.p);

  const auto gammas = multi_indices_up_to(atom.moment_order, dim);
  for (std::size_t k = 0; k < a.scale_count(); ++k) {
    const auto s = a.slice(k);
    for (const auto& gamma : gammas) {
      Complex moment = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 0.0) continue;
        const double m = monomial(grid.point(i), atom.cube, gamma);
        moment += s[i] * m;
        scale += std::abs(s[i]) * std::abs(m);
      }
      if (scale > 0.0) v.moment_residual = std::max(v.moment_residual, std::abs(moment) / scale);
    }
  }
  v.pass = v.support_residual <= 1e-14 && v.size_ratio <= 1.0 && v.moment_residual <= 1e-10;
  return v;
}

}  // namespace lplab
