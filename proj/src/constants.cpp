#include "lplab/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numerics.hpp"

namespace lplab {

namespace {

std::size_t power_of_two_at_least(double v) {
  std::size_t n = 4;
  while (static_cast<double>(n) < v) n *= 2;
  return n;
}

Grid resolving_grid(int dimension, double inner_radius, double outer_radius) {
  const double half = (dimension == 1 ? 64.0 : 16.0) / inner_radius;
  const double max_spacing = 1.0 / (4.0 * outer_radius);
  return Grid(dimension, power_of_two_at_least(2.0 * half / max_spacing), half);
}

// (1 + |x|)^L |k(x)| from the spectrum of k.
SampledField weighted_modulus(const SpectralField& spectrum, double L) {
  SampledField k = from_spectrum(spectrum);
  const Grid& grid = k.grid();
  for (std::size_t i = 0; i < k.size(); ++i) k[i] = std::pow(1.0 + norm(grid.point(i)), L) * std::abs(k[i]);
  return k;
}

ConstantValue integrate_with_tail(const SampledField& profile, bool check = true) {
  const Grid& grid = profile.grid();
  const std::size_t n = grid.points_per_axis();
  ConstantValue out;
  double edge = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double v = profile[i].real();
    out.value += v;
    const std::size_t ix = i % n, iy = i / n;
    const bool outer = ix == 0 || ix == n - 1 || (grid.dimension() == 2 && (iy == 0 || iy == n - 1));
    if (outer) edge = std::max(edge, v);
  }
  out.value *= grid.cell_volume();
  out.tail = edge * std::pow(2.0 * grid.half_extent(), grid.dimension());
  if (check && out.tail > 0.05 * out.value) throw Error("boundary tail exceeds 5% of the integral; enlarge the box");
  return out;
}

}  // namespace

Grid constants_grid(const PartitionSystem& partition) {
  return resolving_grid(partition.dimension(), partition.r1(), partition.r2());
}

Grid zeta_grid(const PartitionSystem& partition, double J) {
  const double stretch = std::pow(partition.b(), -static_cast<double>(first_index_below(partition.b(), J)));
  return resolving_grid(partition.dimension(), partition.r1() * stretch, partition.r2() * stretch);
}

ConstantsEvaluator::ConstantsEvaluator(PartitionSystem partition, Grid grid)
    : partition_(std::move(partition)), grid_(grid) {
  if (grid_.dimension() != partition_.dimension()) throw Error("grid dimension mismatch");
  if (grid_.spacing() > 1.0 / (4.0 * partition_.r2())) throw Error("grid too coarse for the annulus");
  level(0);
}

ConstantsEvaluator::ConstantsEvaluator(PartitionSystem partition)
    : ConstantsEvaluator(partition, constants_grid(partition)) {}

std::size_t ConstantsEvaluator::max_levels() const { return grid_.dimension() == 1 ? 5 : 2; }

const ConstantsEvaluator::Level& ConstantsEvaluator::level(std::size_t k) const {
  while (levels_.size() <= k) {
    const double factor = std::exp2(static_cast<double>(levels_.size()));
    const Grid g(grid_.dimension(), grid_.points_per_axis() * static_cast<std::size_t>(factor),
                 grid_.half_extent() * factor);
    const SpectralField eta = SpectralField::from_symbol(g, partition_.eta_symbol());
    levels_.push_back({g, std::vector<Complex>(eta.values().begin(), eta.values().end())});
  }
  return levels_[k];
}

SampledField ConstantsEvaluator::profile_on(const Level& lv, const KernelSpec& psi, double t, double L) const {
  if (!(t > 0.0)) throw Error("t must be positive");
  if (!(L >= 0.0)) throw Error("L must be nonnegative");
  SpectralField s(lv.grid, lv.eta);
  const double inv = 1.0 / t;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == 0.0) continue;
    const Point xi = lv.grid.frequency(i);
    s[i] *= psi({inv * xi[0], inv * xi[1]});
  }
  return weighted_modulus(s, L);
}

SampledField ConstantsEvaluator::c0_profile(const KernelSpec& psi, double t, double L) const {
  return profile_on(level(0), psi, t, L);
}

ConstantValue ConstantsEvaluator::c_const(const KernelSpec& psi, long j, double L) const {
  const double t = std::pow(partition_.b(), static_cast<double>(j));
  for (std::size_t k = 0;; ++k) {
    try {
      return integrate_with_tail(profile_on(level(k), psi, t, L));
    } catch (const Error&) {
      if (k + 1 >= max_levels()) throw;
    }
  }
}

ConstantValue ConstantsEvaluator::c_const_unchecked(const KernelSpec& psi, long j, double L) const {
  const double t = std::pow(partition_.b(), static_cast<double>(j));
  return integrate_with_tail(profile_on(level(max_levels() - 1), psi, t, L), false);
}

ConstantValue ConstantsEvaluator::d_const(const KernelSpec& theta, double J, double L) const {
  if (!(L >= 0.0)) throw Error("L must be nonnegative");
  const ZetaSymbol zeta = build_zeta(partition_, J);
  const Grid base = zeta_grid(partition_, J);
  for (std::size_t k = 0;; ++k) {
    const double factor = std::exp2(static_cast<double>(k));
    const Grid grid(base.dimension(), base.points_per_axis() * static_cast<std::size_t>(factor),
                    base.half_extent() * factor);
    const SpectralField s = SpectralField::from_symbol(grid, [&](const Point& xi) {
      const Complex th = theta(xi);
      return th == 0.0 ? Complex(0.0) : zeta(xi) * th;
    });
    try {
      return integrate_with_tail(weighted_modulus(s, L));
    } catch (const Error&) {
      if (k + 1 >= max_levels()) throw;
    }
  }
}

SampledField c0_profile(const PartitionSystem& partition, const KernelSpec& psi, double t, double L,
                        const Grid& grid) {
  return ConstantsEvaluator(partition, grid).c0_profile(psi, t, L);
}

ConstantValue c_const(const PartitionSystem& partition, const KernelSpec& psi, long j, double L) {
  return ConstantsEvaluator(partition).c_const(psi, j, L);
}

ConstantValue d_const(const PartitionSystem& partition, const KernelSpec& theta, double J, double L) {
  return ConstantsEvaluator(partition).d_const(theta, J, L);
}

double fitted_epsilon(const std::map<long, double>& a, double b) {
  if (a.empty()) return std::numeric_limits<double>::infinity();
  const long first = a.begin()->first, last = a.rbegin()->first;
  const long mid = first + (last - first) / 2;
  std::vector<std::pair<long, double>> early, late;
  for (const auto& [j, v] : a) {
    if (!(v > 0.0)) continue;
    (j <= mid ? early : late).emplace_back(j, v);
  }
  if (late.empty()) return std::numeric_limits<double>::infinity();
  if (early.empty()) return -std::numeric_limits<double>::infinity();
  const double log_inv_b = std::log(1.0 / b);
  double eps = std::numeric_limits<double>::infinity();
  for (const auto& [jl, al] : late) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [je, ae] : early) {
      best = std::max(best, std::log(ae / al) / (static_cast<double>(jl - je) * log_inv_b));
    }
    eps = std::min(eps, best);
  }
  return eps;
}

namespace {

constexpr double kNegligible = 1e-30;

// Sweeps j upward. An entry whose tail check fails is kept as the upper bound
// value + tail when that bound is below kNegligible times the running maximum;
// otherwise the sweep stops.
std::map<long, double> sweep(const std::function<double(long)>& value, const std::function<double(long)>& bound,
                             long j_lo, long j_hi, std::string& detail) {
  std::map<long, double> out;
  double peak = 0.0;
  for (long j = j_lo; j <= j_hi; ++j) {
    try {
      out[j] = value(j);
    } catch (const Error& e) {
      const double ub = bound(j);
      if (!(ub <= kNegligible * peak)) {
        detail = "sweep stopped at j = " + std::to_string(j) + ": " + e.what();
        break;
      }
      out[j] = ub;
      if (detail.empty()) detail = "entries from j = " + std::to_string(j) + " below resolution; upper bounds recorded";
    }
    peak = std::max(peak, out[j]);
  }
  return out;
}

}  // namespace

ConstantsReport check_conditions(const PartitionSystem& partition, const KernelSpec& phi, const KernelSpec& psi,
                                 const KernelSpec& theta_multiplier, double A, double N, long j_max) {
  if (!(N > 0.0)) throw Error("N must be positive");
  if (!(A >= 1.0)) throw Error("A must be at least 1");
  const double L = N;
  const int dim = partition.dimension();
  const double b = partition.b();
  const ConstantsEvaluator eval(partition);

  ConstantsReport r;
  r.L = L;
  r.j_max = j_max;

  const GrowthResult growth = check_low_frequency_growth(phi);
  r.verdicts["low_frequency_growth"] = {growth.pass, growth.epsilon, "fitted exponent of |phi^(xi)| near 0"};

  std::vector<KernelSpec> gradient;
  for (int k = 0; k < dim; ++k) gradient.push_back(make_derivative(phi, k));
  {
    Verdict v;
    r.gradient_values = sweep(
        [&](long j) {
          double s = 0.0;
          for (const auto& g : gradient) s += eval.c_const(g, j, L).value;
          return s;
        },
        [&](long j) {
          double s = 0.0;
          for (const auto& g : gradient) {
            const ConstantValue c = eval.c_const_unchecked(g, j, L);
            s += c.value + c.tail;
          }
          return s;
        },
        0, j_max, v.detail);
    std::map<long, double> scaled;
    for (const auto& [j, c] : r.gradient_values) scaled[j] = c * std::pow(b, -L * static_cast<double>(j));
    v.measured = fitted_epsilon(scaled, b);
    v.pass = v.measured > 0.0;
    r.verdicts["gradient_decay"] = v;
  }
  {
    Verdict v;
    try {
      for (int k = 0; k < dim; ++k) r.gradient_D_value += eval.d_const(make_xi_multiplier(k), 1.0, L).value;
      v.pass = std::isfinite(r.gradient_D_value);
    } catch (const Error& e) {
      v.detail = e.what();
    }
    v.measured = r.gradient_D_value;
    r.verdicts["gradient_remainder"] = v;
  }
  {
    Verdict v;
    const long j_begin = first_index_below(b, A);
    r.C_values = sweep([&](long j) { return eval.c_const(psi, j, L).value; },
                       [&](long j) {
                         const ConstantValue c = eval.c_const_unchecked(psi, j, L);
                         return c.value + c.tail;
                       },
                       j_begin, std::max(j_begin, j_max), v.detail);
    v.measured = fitted_epsilon(r.C_values, b);
    v.pass = v.measured > 0.0;
    r.verdicts["psi_decay"] = v;

    std::vector<double> x, y;
    for (const auto& [j, c] : r.C_values) {
      if (!(c > 0.0)) continue;
      x.push_back(static_cast<double>(j) * std::log(b));
      y.push_back(std::log(c));
    }
    r.tau_fit = x.size() >= 2 ? detail::fit_slope(x, y) : 0.0;
    for (long j = j_begin; j < j_begin + 3; ++j) {
      const double t = std::pow(b, static_cast<double>(j));
      r.profile_C0.emplace(t, eval.c0_profile(psi, t, L));
    }
  }
  {
    Verdict v;
    try {
      r.D_value = eval.d_const(theta_multiplier, A, L).value;
      v.pass = std::isfinite(r.D_value);
    } catch (const Error& e) {
      v.detail = e.what();
    }
    v.measured = r.D_value;
    r.verdicts["psi_remainder"] = v;
  }
  return r;
}

}  // namespace lplab
