#include "lplab/calderon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numerics.hpp"

namespace lplab {

namespace {

constexpr double kMergeRatio = 1.5;

// sup over t of sum_i |phi_i^(t e)|^2 along a unit direction.
double squared_peak(const KernelFamily& family, const Point& e, const ScaleGrid& t_grid) {
  auto along = [&](double log_t) {
    const double t = std::exp(log_t);
    return family.symbol_sum({t * e[0], t * e[1]}, 2.0);
  };
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double v = along(std::log(t_grid[k]));
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  if (best_value <= 0.0) return 0.0;
  const double lo = std::log(t_grid[std::min(best + 1, t_grid.size() - 1)]);
  const double hi = std::log(t_grid[best == 0 ? 0 : best - 1]);
  return std::max(best_value, along(detail::golden_maximize(along, lo, hi)));
}

}  // namespace

std::vector<Point> sample_frequencies(int dimension, int directions, double r_lo, double r_hi,
                                      std::size_t count) {
  std::vector<Point> out;
  const auto dirs = sample_directions(dimension, directions);
  out.reserve(dirs.size() * count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const double r = r_lo * std::pow(r_hi / r_lo, f);
    for (const Point& e : dirs) out.push_back({r * e[0], r * e[1]});
  }
  return out;
}

IntervalCover find_intervals(const KernelFamily& family, int dimension, int direction_count,
                             const ScaleGrid& t_grid) {
  if (family.size() == 0) throw Error("empty kernel family");
  const auto dirs = sample_directions(dimension, direction_count);

  IntervalCover cover;
  cover.infimum = std::numeric_limits<double>::infinity();
  for (const Point& e : dirs) cover.infimum = std::min(cover.infimum, squared_peak(family, e, t_grid));
  if (!(cover.infimum > 0.0)) throw Error("kernel family is degenerate on the scale grid");
  cover.threshold = 0.5 * cover.infimum;

  // Widest run of consecutive grid scales above threshold, per direction.
  std::vector<Interval> windows;
  for (const Point& e : dirs) {
    double best_width = 0.0;
    Interval best{};
    std::size_t k = 0;
    const std::size_t count = t_grid.size();
    while (k < count) {
      const auto above = [&](std::size_t i) {
        return family.symbol_sum({t_grid[i] * e[0], t_grid[i] * e[1]}, 2.0) >= cover.threshold;
      };
      if (!above(k)) {
        ++k;
        continue;
      }
      std::size_t end = k;
      while (end + 1 < count && above(end + 1)) ++end;
      const double width = std::log(t_grid[k] / t_grid[end]);
      if (width > best_width) {
        best_width = width;
        best = {t_grid[end], t_grid[k]};
      }
      k = end + 1;
    }
    if (!(best_width > 0.0)) throw Error("no scale window above threshold; family degenerate at grid resolution");
    windows.push_back(best);
  }

  std::sort(windows.begin(), windows.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  Interval current = windows.front();
  for (std::size_t i = 1; i < windows.size(); ++i) {
    const Interval next{std::max(current.lo, windows[i].lo), std::min(current.hi, windows[i].hi)};
    if (next.hi / next.lo >= kMergeRatio) {
      current = next;
    } else {
      cover.intervals.push_back(current);
      current = windows[i];
    }
  }
  cover.intervals.push_back(current);

  cover.b0 = 0.0;
  for (const auto& I : cover.intervals) cover.b0 = std::max(cover.b0, I.lo / I.hi);
  return cover;
}

// --- PartitionSystem --------------------------------------------------------

PartitionSystem PartitionSystem::build(const KernelFamily& family, int dimension, double b,
                                       const IntervalCover& cover) {
  if (family.size() == 0) throw Error("empty kernel family");
  if (cover.intervals.empty()) throw Error("empty interval cover");
  if (!(b >= cover.b0 * (1.0 - 1e-12) && b < 1.0)) throw Error("b must lie in [b0, 1)");
  auto state = std::make_shared<State>();
  state->family = family;
  state->dimension = dimension;
  state->b = b;
  state->b0 = cover.b0;
  state->intervals = cover.intervals;
  state->m = std::numeric_limits<double>::infinity();
  state->H = 0.0;
  for (const auto& I : cover.intervals) {
    state->m = std::min(state->m, I.lo);
    state->H = std::max(state->H, I.hi);
  }
  PartitionSystem system(std::move(state));

  // Psi is b-periodic in log|xi|; one period [m, m/b] on every direction suffices.
  const int directions = dimension == 1 ? 2 : 64;
  for (const Point& xi : sample_frequencies(dimension, directions, system.plateau_lo(),
                                            system.plateau_lo() / b, 257)) {
    if (!(system.normalizer(xi) >= 1e-10)) throw Error("normalizer Psi is singular on the annulus");
  }
  return system;
}

double PartitionSystem::theta(double s) const {
  const double m = state_->m, H = state_->H;
  if (s <= 0.5 * m || s >= 2.0 * H) return 0.0;
  return smooth_step((s - 0.5 * m) / (0.5 * m)) * smooth_step((2.0 * H - s) / H);
}

std::pair<long, long> PartitionSystem::active_range(double radius) const {
  const double log_b = std::log(state_->b);
  const long lo = static_cast<long>(std::floor(std::log(2.0 * state_->H / radius) / log_b));
  const long hi = static_cast<long>(std::ceil(std::log(0.5 * state_->m / radius) / log_b));
  return {lo, hi};
}

double PartitionSystem::normalizer(const Point& xi) const {
  const double r = norm(xi);
  if (r == 0.0) return 0.0;
  const auto [lo, hi] = active_range(r);
  double sum = 0.0;
  for (long j = lo; j <= hi; ++j) {
    const double s = std::pow(state_->b, static_cast<double>(j));
    const double th = theta(s * r);
    if (th == 0.0) continue;
    sum += th * state_->family.symbol_sum({s * xi[0], s * xi[1]}, 2.0);
  }
  return sum;
}

Complex PartitionSystem::eta(const Point& xi, std::size_t member) const {
  const double th = theta(norm(xi));
  if (th == 0.0) return 0.0;
  return th * std::conj(state_->family[member](xi)) / normalizer(xi);
}

Symbol PartitionSystem::eta_symbol(std::size_t member) const {
  return [self = *this, member](const Point& xi) { return self.eta(xi, member); };
}

Complex PartitionSystem::reproducing_sum(const Point& xi) const {
  return reproducing_sum(xi, std::numeric_limits<long>::min(), std::numeric_limits<long>::max());
}

Complex PartitionSystem::reproducing_sum(const Point& xi, long j_min) const {
  return reproducing_sum(xi, j_min, std::numeric_limits<long>::max());
}

Complex PartitionSystem::reproducing_sum(const Point& xi, long j_min, long j_max) const {
  const double r = norm(xi);
  if (r == 0.0) return 0.0;
  auto [lo, hi] = active_range(r);
  lo = std::max(lo, j_min);
  hi = std::min(hi, j_max);
  Complex sum = 0.0;
  for (long j = lo; j <= hi; ++j) {
    const double s = std::pow(state_->b, static_cast<double>(j));
    const Point p{s * xi[0], s * xi[1]};
    if (theta(s * r) == 0.0) continue;
    for (std::size_t i = 0; i < state_->family.size(); ++i) sum += state_->family[i](p) * eta(p, i);
  }
  return sum;
}

// --- zeta and the decomposition ------------------------------------------------

long first_index_below(double b, double J) {
  if (!(J > 0.0)) throw Error("J must be positive");
  // b^j <= J  <=>  j >= log J / log b (log b < 0).
  return static_cast<long>(std::ceil(std::log(J) / std::log(b) - 1e-9));
}

ZetaSymbol build_zeta(const PartitionSystem& partition, double J) {
  const long j_min = first_index_below(partition.b(), J);
  Symbol symbol = [partition, j_min](const Point& xi) {
    if (norm(xi) == 0.0) return Complex(1.0);
    return Complex(1.0) - partition.reproducing_sum(xi, j_min);
  };
  return ZetaSymbol{J, j_min, std::move(symbol), partition};
}

DecompositionResult decompose_psi(const PartitionSystem& partition, const KernelSpec& psi,
                                  const KernelSpec& theta_multiplier, double A, long truncation,
                                  double max_frequency) {
  if (!(A >= 1.0)) throw Error("A must be at least 1");
  if (truncation < 0) throw Error("truncation must be nonnegative");
  if (partition.family().size() != 1) throw Error("decomposition assumes a single kernel (M = 1)");
  const int dim = partition.dimension();
  const int directions = dim == 1 ? 2 : 64;
  const double b = partition.b();

  DecompositionResult out;
  for (const Point& xi : sample_frequencies(dim, directions, 1e-8, partition.r2() / A * (1.0 - 1e-9), 400)) {
    const double d = std::abs(psi(xi) - partition.phi(xi) * theta_multiplier(xi));
    out.near_origin_residual = std::max(out.near_origin_residual, d);
  }
  if (out.near_origin_residual > 1e-8) {
    throw Error("psi^ = phi^ Theta does not hold on |xi| < r2/A");
  }

  out.j_begin = first_index_below(b, A);
  out.j_end = out.j_begin + truncation;
  out.admissible_radius = partition.r1() * std::pow(b, -static_cast<double>(out.j_end));
  const Symbol eta = partition.eta_symbol();
  for (long j = out.j_begin; j <= out.j_end; ++j) {
    const double inv = std::pow(b, -static_cast<double>(j));
    out.alpha_symbols.push_back([psi_s = psi.symbol, eta, inv](const Point& xi) {
      const Complex e = eta(xi);
      if (e == 0.0) return Complex(0.0);
      return psi_s({inv * xi[0], inv * xi[1]}) * e;
    });
  }
  const ZetaSymbol zeta = build_zeta(partition, A);
  out.beta_symbol = [zeta, th = theta_multiplier.symbol](const Point& xi) {
    const Complex z = zeta(xi);
    if (z == 0.0) return Complex(0.0);
    return z * th(xi);
  };

  auto residual_at = [&](const Point& xi) {
    const double r = norm(xi);
    Complex sum = partition.phi(xi) * out.beta_symbol(xi);
    if (r > 0.0) {
      auto [lo, hi] = partition.active_range(r);
      lo = std::max(lo, out.j_begin);
      hi = std::min(hi, out.j_end);
      for (long j = lo; j <= hi; ++j) {
        const double s = std::pow(b, static_cast<double>(j));
        const Point p{s * xi[0], s * xi[1]};
        sum += partition.phi(p) * out.alpha(j)(p);
      }
    }
    return std::abs(psi(xi) - sum);
  };
  out.residual = residual_at({0.0, 0.0});
  for (const Point& xi : sample_frequencies(dim, directions, 1e-6 * partition.r1(), max_frequency, 600)) {
    out.residual = std::max(out.residual, residual_at(xi));
  }
  if (out.residual > 1e-8) throw Error("decomposition residual above 1e-8; truncation too short");
  return out;
}

}  // namespace lplab
