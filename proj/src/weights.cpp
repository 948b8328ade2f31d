#include "lplab/weights.hpp"

#include <algorithm>
#include <cmath>

#include "lplab/maximal.hpp"

namespace lplab {

Weight Weight::power(double a) { return Weight(Kind::power, a, std::nullopt); }

Weight Weight::constant(double c) {
  if (!(c > 0.0)) throw Error("constant weight must be positive");
  return Weight(Kind::constant, c, std::nullopt);
}

Weight Weight::custom(SampledField samples) { return Weight(Kind::custom, 0.0, std::move(samples)); }

double origin_cell_average(const Grid& grid, double a) {
  const int n = grid.dimension();
  if (!(a > -n)) throw Error("power weight |x|^a needs a > -n");
  const double half = 0.5 * grid.spacing();
  if (n == 1) return std::pow(half, a) / (a + 1.0);
  // Eight triangles: int_0^{pi/4} int_0^{half/cos} r^(a+1) dr dtheta each.
  constexpr int steps = 2048;
  const double dtheta = 0.25 * kPi / steps;
  auto f = [&](double th) { return std::pow(half / std::cos(th), a + 2.0) / (a + 2.0); };
  double s = f(0.0) + f(0.25 * kPi);
  for (int i = 1; i < steps; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(i * dtheta);
  return 8.0 * s * dtheta / 3.0 / grid.cell_volume();
}

SampledField Weight::samples(const Grid& grid) const {
  switch (kind_) {
    case Kind::constant:
      return SampledField::from_function(grid, [c = value_](const Point&) { return Complex(c); });
    case Kind::custom:
      if (!(custom_->grid() == grid)) throw Error("custom weight grid mismatch");
      return *custom_;
    case Kind::power: {
      const double origin = origin_cell_average(grid, value_);
      return SampledField::from_function(grid, [a = value_, origin](const Point& x) {
        const double r = norm(x);
        return Complex(r == 0.0 ? origin : std::pow(r, a));
      });
    }
  }
  throw Error("unknown weight kind");
}

namespace {

std::vector<double> positive_samples(const SampledField& w) {
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i].real() > 0.0) || w[i].imag() != 0.0) throw Error("weight must be positive at every grid point");
    out[i] = w[i].real();
  }
  return out;
}

}  // namespace

ApEstimate ap_characteristic(const SampledField& w, double p, const std::vector<double>& ball_radii) {
  if (!(p > 1.0)) throw Error("A_p needs p > 1");
  const std::vector<double> v = positive_samples(w);
  const Grid& grid = w.grid();
  const long n = static_cast<long>(grid.points_per_axis());
  const double h = grid.spacing();
  const double dual = -1.0 / (p - 1.0);
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = std::pow(v[i], dual);

  ApEstimate best;
  for (double radius : ball_radii) {
    if (!(radius >= 0.0)) throw Error("ball radius must be nonnegative");
    const long k = std::lround(radius / h);
    if (2 * k + 1 > n) continue;
    if (grid.dimension() == 1) {
      std::vector<double> pw(v.size() + 1, 0.0), pu(v.size() + 1, 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) {
        pw[i + 1] = pw[i] + v[i];
        pu[i + 1] = pu[i] + u[i];
      }
      const double count = static_cast<double>(2 * k + 1);
      for (long c = k; c + k < n; ++c) {
        const double aw = (pw[static_cast<std::size_t>(c + k + 1)] - pw[static_cast<std::size_t>(c - k)]) / count;
        const double au = (pu[static_cast<std::size_t>(c + k + 1)] - pu[static_cast<std::size_t>(c - k)]) / count;
        const double value = aw * std::pow(au, p - 1.0);
        if (value > best.value) best = {value, {grid.coordinate(static_cast<std::size_t>(c)), 0.0}, static_cast<double>(k) * h};
      }
      continue;
    }
    std::vector<std::pair<long, long>> disc;
    for (long dy = -k; dy <= k; ++dy) {
      for (long dx = -k; dx <= k; ++dx) {
        if (dx * dx + dy * dy <= k * k) disc.emplace_back(dx, dy);
      }
    }
    const double count = static_cast<double>(disc.size());
    std::vector<double> values(static_cast<std::size_t>(n * n), 0.0);
#pragma omp parallel for
    for (long cy = k; cy < n - k; ++cy) {
      for (long cx = k; cx < n - k; ++cx) {
        double sw = 0.0, su = 0.0;
        for (const auto& [dx, dy] : disc) {
          const std::size_t i = static_cast<std::size_t>((cy + dy) * n + cx + dx);
          sw += v[i];
          su += u[i];
        }
        values[static_cast<std::size_t>(cy * n + cx)] = (sw / count) * std::pow(su / count, p - 1.0);
      }
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] > best.value) best = {values[i], grid.point(i), static_cast<double>(k) * h};
    }
  }
  return best;
}

double a1_check(const SampledField& w) {
  const std::vector<double> v = positive_samples(w);
  const SampledField m = hl_max(w);
  double out = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) out = std::max(out, m[i].real() / v[i]);
  return out;
}

}  // namespace lplab
