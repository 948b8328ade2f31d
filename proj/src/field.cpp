#include "lplab/field.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"

namespace lplab {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double sign_of_index(std::size_t i) { return (i & 1U) ? -1.0 : 1.0; }

// (-1)^(ix + iy) checkerboard used to center the DFT.
void apply_checkerboard(std::span<Complex> values, const Grid& grid, double scale) {
  const std::size_t n = grid.points_per_axis();
  if (grid.dimension() == 1) {
    for (std::size_t i = 0; i < n; ++i) values[i] *= scale * sign_of_index(i);
    return;
  }
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) values[iy * n + ix] *= scale * sign_of_index(ix + iy);
  }
}

void require_matching(const Grid& a, const Grid& b) {
  if (!(a == b)) throw Error("grid mismatch");
}

}  // namespace

Grid::Grid(int dimension, std::size_t points_per_axis, double half_extent)
    : dimension_(dimension), n_(points_per_axis), half_extent_(half_extent) {
  if (dimension != 1 && dimension != 2) throw Error("grid dimension must be 1 or 2");
  if (points_per_axis < 4 || !is_power_of_two(points_per_axis)) {
    throw Error("points_per_axis must be a power of two >= 4");
  }
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) throw Error("half_extent must be positive");
}

double Grid::cell_volume() const {
  const double h = spacing();
  return dimension_ == 1 ? h : h * h;
}

double Grid::frequency_cell_volume() const {
  const double d = frequency_spacing();
  return dimension_ == 1 ? d : d * d;
}

std::size_t Grid::size() const { return dimension_ == 1 ? n_ : n_ * n_; }

Point Grid::point(std::size_t flat) const {
  if (dimension_ == 1) return {coordinate(flat), 0.0};
  return {coordinate(flat % n_), coordinate(flat / n_)};
}

Point Grid::frequency(std::size_t flat) const {
  if (dimension_ == 1) return {frequency_coordinate(flat), 0.0};
  return {frequency_coordinate(flat % n_), frequency_coordinate(flat / n_)};
}

long Grid::periodic_offset(long d) const {
  const long n = static_cast<long>(n_);
  d %= n;
  if (d < -n / 2) d += n;
  if (d >= n / 2) d -= n;
  return d;
}

Grid Grid::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw Error("dilation factor must be positive");
  return Grid(dimension_, n_, half_extent_ / lambda);
}

// --- SampledField -----------------------------------------------------------

SampledField::SampledField(Grid grid) : grid_(grid), values_(grid.size()) {}

SampledField::SampledField(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error("field size does not match grid");
}

SampledField SampledField::from_function(const Grid& grid,
                                         const std::function<Complex(const Point&)>& f) {
  SampledField out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.point(i));
  return out;
}

SampledField SampledField::modulus() const {
  SampledField out(grid_);
  for (std::size_t i = 0; i < size(); ++i) out[i] = std::abs(values_[i]);
  return out;
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

SampledField& SampledField::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

SampledField& SampledField::operator+=(const SampledField& other) {
  require_matching(grid_, other.grid_);
  for (std::size_t i = 0; i < size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SampledField& SampledField::operator-=(const SampledField& other) {
  require_matching(grid_, other.grid_);
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SampledField operator*(Complex c, SampledField f) { return f *= c; }
SampledField operator+(SampledField a, const SampledField& b) { return a += b; }
SampledField operator-(SampledField a, const SampledField& b) { return a -= b; }

// --- SpectralField ----------------------------------------------------------

SpectralField::SpectralField(Grid grid) : grid_(grid), values_(grid.size()) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error("spectrum size does not match grid");
}

SpectralField SpectralField::from_symbol(const Grid& grid,
                                         const std::function<Complex(const Point&)>& symbol) {
  SpectralField out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = symbol(grid.frequency(i));
  return out;
}

SpectralField& SpectralField::apply(const std::function<Complex(const Point&)>& symbol,
                                    double scale) {
  for (std::size_t i = 0; i < size(); ++i) {
    const Point xi = grid_.frequency(i);
    values_[i] *= symbol({scale * xi[0], scale * xi[1]});
  }
  return *this;
}

// Forward: f^(xi_k) = h^n (-1)^k DFT[(-1)^m f_m](k); n/2 is even, so the
// centered index and k share parity.
SpectralField to_spectrum(const SampledField& f) {
  const Grid& grid = f.grid();
  std::vector<Complex> data(f.values().begin(), f.values().end());
  apply_checkerboard(data, grid, 1.0);
  detail::fft_inplace(data, grid.dimension(), grid.points_per_axis(), false);
  apply_checkerboard(data, grid, grid.cell_volume());
  return SpectralField(grid, std::move(data));
}

SampledField from_spectrum(const SpectralField& spectrum) {
  const Grid& grid = spectrum.grid();
  std::vector<Complex> data(spectrum.values().begin(), spectrum.values().end());
  apply_checkerboard(data, grid, 1.0);
  detail::fft_inplace(data, grid.dimension(), grid.points_per_axis(), true);
  apply_checkerboard(data, grid, grid.frequency_cell_volume());
  return SampledField(grid, std::move(data));
}

// --- norms ------------------------------------------------------------------

namespace {

double power_sum_norm(std::span<const Complex> values, double measure, double p) {
  if (!(p > 0.0)) throw Error("exponent p must be positive");
  double sum = 0.0;
  if (p == 2.0) {
    for (const auto& v : values) sum += std::norm(v);
  } else {
    for (const auto& v : values) sum += std::pow(std::abs(v), p);
  }
  return std::pow(sum * measure, 1.0 / p);
}

}  // namespace

double lp_norm(const SampledField& f, double p) {
  return power_sum_norm(f.values(), f.grid().cell_volume(), p);
}

double lp_norm(const SpectralField& f, double p) {
  return power_sum_norm(f.values(), f.grid().frequency_cell_volume(), p);
}

double weighted_lp_norm(const SampledField& f, const SampledField& w, double p) {
  if (!(p > 0.0)) throw Error("exponent p must be positive");
  require_matching(f.grid(), w.grid());
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wi = w[i].real();
    if (wi < 0.0 || w[i].imag() != 0.0) throw Error("weight must be real and nonnegative");
    sum += std::pow(std::abs(f[i]), p) * wi;
  }
  return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

// --- ScaleGrid --------------------------------------------------------------

ScaleGrid::ScaleGrid(std::vector<double> scales) : scales_(std::move(scales)) {
  if (scales_.size() < 2) throw Error("a scale grid needs at least two scales");
  for (std::size_t k = 0; k < scales_.size(); ++k) {
    if (!(scales_[k] > 0.0) || !std::isfinite(scales_[k])) throw Error("scales must be positive");
    if (k > 0 && !(scales_[k] < scales_[k - 1])) throw Error("scales must be strictly decreasing");
  }
  const std::size_t count = scales_.size();
  std::vector<double> gaps(count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k) gaps[k] = std::log(scales_[k] / scales_[k + 1]);

  const double first_ratio = scales_[1] / scales_[0];
  bool geometric = true;
  for (std::size_t k = 0; k + 1 < count; ++k) {
    if (std::abs(scales_[k + 1] / scales_[k] - first_ratio) > 1e-12 * first_ratio) geometric = false;
  }
  weights_.resize(count);
  if (geometric) {
    ratio_ = first_ratio;
    std::fill(weights_.begin(), weights_.end(), std::log(1.0 / first_ratio));
    return;
  }
  // Trapezoid in log t, extending the grid by one mirrored gap at each end.
  for (std::size_t k = 0; k < count; ++k) {
    const double left = k == 0 ? gaps.front() : gaps[k - 1];
    const double right = k + 1 == count ? gaps.back() : gaps[k];
    weights_[k] = 0.5 * (left + right);
  }
}

ScaleGrid ScaleGrid::geometric(double t_max, double ratio, std::size_t count) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error("scale ratio must lie in (0,1)");
  if (!(t_max > 0.0)) throw Error("t_max must be positive");
  std::vector<double> s(count);
  for (std::size_t k = 0; k < count; ++k) s[k] = t_max * std::pow(ratio, static_cast<double>(k));
  ScaleGrid out(std::move(s));
  out.ratio_ = ratio;
  std::fill(out.weights_.begin(), out.weights_.end(), std::log(1.0 / ratio));
  return out;
}

ScaleGrid ScaleGrid::log_uniform(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0 && t_max > t_min)) throw Error("need 0 < t_min < t_max");
  if (count < 2) throw Error("a scale grid needs at least two scales");
  const double ratio = std::pow(t_min / t_max, 1.0 / static_cast<double>(count - 1));
  return geometric(t_max, ratio, count);
}

ScaleGrid ScaleGrid::explicit_list(std::vector<double> scales) { return ScaleGrid(std::move(scales)); }

ScaleGrid ScaleGrid::default_for(const Grid& grid, std::size_t count) {
  const double L = grid.half_extent();
  return log_uniform(std::ldexp(L, -10), 2.0 * L, count);
}

ScaleGrid ScaleGrid::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("scale factor must be positive");
  ScaleGrid out = *this;
  for (auto& t : out.scales_) t *= factor;
  return out;
}

double scale_integral(std::span<const double> u, const ScaleGrid& scales, double q) {
  if (!(q > 0.0)) throw Error("exponent q must be positive");
  if (u.size() != scales.size()) throw Error("value count does not match scale grid");
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double a = std::abs(u[k]);
    sum += (q == 2.0 ? a * a : std::pow(a, q)) * scales.log_weight(k);
  }
  return std::pow(sum, 1.0 / q);
}

}  // namespace lplab
