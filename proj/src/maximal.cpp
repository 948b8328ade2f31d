#include "lplab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lplab {

namespace {

struct Offset {
  long dx;
  long dy;
  double damping;  // (1 + R|y|)^-N
};

std::vector<Offset> sorted_offsets(const Grid& grid, const PeetreParams& params) {
  const long n = static_cast<long>(grid.points_per_axis());
  const double h = grid.spacing();
  std::vector<Offset> out;
  if (grid.dimension() == 1) {
    out.reserve(static_cast<std::size_t>(n));
    for (long d = -n / 2; d < n / 2; ++d) {
      out.push_back({d, 0, std::pow(1.0 + params.R * std::abs(d) * h, -params.N)});
    }
  } else {
    out.reserve(static_cast<std::size_t>(n * n));
    for (long dy = -n / 2; dy < n / 2; ++dy) {
      for (long dx = -n / 2; dx < n / 2; ++dx) {
        const double dist = std::hypot(static_cast<double>(dx), static_cast<double>(dy)) * h;
        out.push_back({dx, dy, std::pow(1.0 + params.R * dist, -params.N)});
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Offset& a, const Offset& b) { return a.damping > b.damping; });
  return out;
}

std::size_t wrap(long i, long n) { return static_cast<std::size_t>(((i % n) + n) % n); }

}  // namespace

SampledField peetre_max(const SampledField& F, const PeetreParams& params) {
  if (!(params.N > 0.0) || !(params.R > 0.0)) throw Error("Peetre parameters must be positive");
  const Grid& grid = F.grid();
  const long n = static_cast<long>(grid.points_per_axis());
  std::vector<double> mod(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) mod[i] = std::abs(F[i]);
  const double top = *std::max_element(mod.begin(), mod.end());
  const std::vector<Offset> offsets = sorted_offsets(grid, params);

  SampledField out(grid);
#pragma omp parallel for schedule(dynamic, 64)
  for (long flat = 0; flat < static_cast<long>(F.size()); ++flat) {
    const long ix = grid.dimension() == 1 ? flat : flat % n;
    const long iy = grid.dimension() == 1 ? 0 : flat / n;
    double best = 0.0;
    for (const Offset& o : offsets) {
      if (top * o.damping <= best) break;
      const std::size_t src = grid.dimension() == 1 ? wrap(ix - o.dx, n)
                                                    : wrap(iy - o.dy, n) * static_cast<std::size_t>(n) + wrap(ix - o.dx, n);
      best = std::max(best, mod[src] * o.damping);
    }
    out[static_cast<std::size_t>(flat)] = best;
  }
  return out;
}

namespace {

SampledField hl_max_1d(const SampledField& f) {
  const std::size_t n = f.size();
  std::vector<double> prefix(2 * n + 1, 0.0);
  for (std::size_t i = 0; i < 2 * n; ++i) prefix[i + 1] = prefix[i] + std::abs(f[i % n]);

  // Averages over shrinking balls tend to |f| at every sample; start there so M f >= |f| exactly.
  std::vector<double> best(n);
  for (std::size_t i = 0; i < n; ++i) best[i] = std::abs(f[i]);
  std::vector<double> avg(2 * n);
  for (std::size_t len = 1; len <= n; ++len) {
    const double inv = 1.0 / static_cast<double>(len);
    // avg[s] = mean over cells s .. s+len-1 (periodic), indexed on a doubled line.
    for (std::size_t s = 0; s < 2 * n; ++s) {
      const std::size_t start = s % n;
      avg[s] = (prefix[start + len] - prefix[start]) * inv;
    }
    // best[k] = max over windows containing k: starts in [k-len+1, k].
    std::deque<std::size_t> window;
    for (std::size_t s = n - len + 1; s < 2 * n; ++s) {
      while (!window.empty() && avg[window.back()] <= avg[s]) window.pop_back();
      window.push_back(s);
      if (s < n) continue;
      const std::size_t k = s;  // covers starts k-len+1 .. k on the doubled line
      while (window.front() + len <= k) window.pop_front();
      best[k - n] = std::max(best[k - n], avg[window.front()]);
    }
  }
  SampledField out(f.grid());
  for (std::size_t i = 0; i < n; ++i) out[i] = best[i];
  return out;
}

std::vector<std::pair<long, long>> disc_offsets(int radius) {
  std::vector<std::pair<long, long>> out;
  for (long dy = -radius; dy <= radius; ++dy) {
    for (long dx = -radius; dx <= radius; ++dx) {
      if (dx * dx + dy * dy <= static_cast<long>(radius) * radius) out.emplace_back(dx, dy);
    }
  }
  return out;
}

}  // namespace

std::vector<int> default_disc_radii(std::size_t points_per_axis) {
  std::vector<int> radii;
  const int limit = static_cast<int>(points_per_axis / 2);
  for (int r = 0; r <= limit; ++r) radii.push_back(r);
  return radii;
}

SampledField hl_max(const SampledField& f) {
  if (f.grid().dimension() == 1) return hl_max_1d(f);
  return hl_max(f, default_disc_radii(f.grid().points_per_axis()));
}

SampledField hl_max(const SampledField& f, const std::vector<int>& disc_radii) {
  if (f.grid().dimension() == 1) return hl_max_1d(f);
  const long n = static_cast<long>(f.grid().points_per_axis());
  const std::size_t total = f.size();
  std::vector<double> mod(total);
  for (std::size_t i = 0; i < total; ++i) mod[i] = std::abs(f[i]);

  std::vector<double> best = mod;
  std::vector<double> avg(total);
  for (int radius : disc_radii) {
    if (radius < 0) throw Error("disc radius must be nonnegative");
    const auto disc = disc_offsets(radius);
    const double inv = 1.0 / static_cast<double>(disc.size());
#pragma omp parallel for
    for (long c = 0; c < static_cast<long>(total); ++c) {
      const long cx = c % n, cy = c / n;
      double s = 0.0;
      for (const auto& [dx, dy] : disc) s += mod[wrap(cy + dy, n) * static_cast<std::size_t>(n) + wrap(cx + dx, n)];
      avg[static_cast<std::size_t>(c)] = s * inv;
    }
    // x lies in the disc around c iff c lies in the disc around x.
#pragma omp parallel for
    for (long x = 0; x < static_cast<long>(total); ++x) {
      const long xx = x % n, xy = x / n;
      double m = best[static_cast<std::size_t>(x)];
      for (const auto& [dx, dy] : disc) m = std::max(m, avg[wrap(xy + dy, n) * static_cast<std::size_t>(n) + wrap(xx + dx, n)]);
      best[static_cast<std::size_t>(x)] = m;
    }
  }
  SampledField out(f.grid());
  for (std::size_t i = 0; i < total; ++i) out[i] = best[i];
  return out;
}

GrandMaxConfig GrandMaxConfig::default_for(const Grid& grid) {
  return {make_builtin("gaussian"), ScaleGrid::log_uniform(0.5 * grid.spacing(), grid.half_extent(), 64)};
}

SampledField grand_max(const SampledField& f, const GrandMaxConfig& config) {
  if (std::abs(config.mollifier({0.0, 0.0}) - 1.0) > 1e-12) throw Error("mollifier must have unit mass");
  const SpectralField spectrum = to_spectrum(f);
  const std::size_t count = config.scales.size();
  std::vector<std::vector<double>> per_scale(count);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < static_cast<long>(count); ++k) {
    SpectralField s = spectrum;
    s.apply(config.mollifier.symbol, config.scales[static_cast<std::size_t>(k)]);
    const SampledField smoothed = from_spectrum(s);
    auto& mod = per_scale[static_cast<std::size_t>(k)];
    mod.resize(smoothed.size());
    for (std::size_t i = 0; i < smoothed.size(); ++i) mod[i] = std::abs(smoothed[i]);
  }
  SampledField out(f.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double m = 0.0;
    for (const auto& mod : per_scale) m = std::max(m, mod[i]);
    out[i] = m;
  }
  return out;
}

SampledField gradient_modulus(const SampledField& F) {
  const SpectralField spectrum = to_spectrum(F);
  SampledField out(F.grid());
  for (int axis = 0; axis < F.grid().dimension(); ++axis) {
    SpectralField s = spectrum;
    s.apply(make_xi_multiplier(axis).symbol);
    const SampledField d = from_spectrum(s);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += std::norm(d[i]);
  }
  for (auto& v : out.values()) v = std::sqrt(v.real());
  return out;
}

std::vector<PeetreBound> peetre_bound_check(const SampledField& F, double R, double r,
                                            const std::vector<double>& deltas) {
  if (!(r > 0.0)) throw Error("r must be positive");
  const double N = F.grid().dimension() / r;
  const PeetreParams params{N, R};
  const SampledField lhs = peetre_max(F, params);

  SampledField powered(F.grid());
  for (std::size_t i = 0; i < F.size(); ++i) powered[i] = std::pow(std::abs(F[i]), r);
  const SampledField averaged = hl_max(powered);
  const SampledField grad = peetre_max(gradient_modulus(F), params);

  std::vector<PeetreBound> out;
  for (double delta : deltas) {
    if (!(delta > 0.0 && delta <= 1.0)) throw Error("delta must lie in (0, 1]");
    double c = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
      const double rhs = std::pow(delta, -N) * std::pow(averaged[i].real(), 1.0 / r) + delta / R * grad[i].real();
      if (rhs > 0.0) c = std::max(c, lhs[i].real() / rhs);
    }
    out.push_back({delta, c});
  }
  return out;
}

}  // namespace lplab
