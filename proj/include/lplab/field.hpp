#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lplab {

using Complex = std::complex<double>;

/// A point of R^n (n <= 2). In one dimension the second coordinate is 0.
using Point = std::array<double, 2>;

inline double norm(const Point& p) { return std::hypot(p[0], p[1]); }

constexpr double kPi = 3.14159265358979323846;

/// Thrown on invalid arguments or violated preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform periodic grid on the box [-half_extent, half_extent)^dimension.
///
/// Points are stored row-major: flat = iy * n + ix. The spacing is 2L/n and
/// since n is a power of two, spacing * n reproduces 2L exactly.
class Grid {
 public:
  Grid(int dimension, std::size_t points_per_axis, double half_extent);

  int dimension() const { return dimension_; }
  std::size_t points_per_axis() const { return n_; }
  double half_extent() const { return half_extent_; }
  double spacing() const { return 2.0 * half_extent_ / static_cast<double>(n_); }
  double frequency_spacing() const { return 1.0 / (2.0 * half_extent_); }
  /// Measure of one grid cell, spacing^dimension.
  double cell_volume() const;
  double frequency_cell_volume() const;
  std::size_t size() const;

  double coordinate(std::size_t i) const {
    return -half_extent_ + static_cast<double>(i) * spacing();
  }
  /// Centered frequency of axis index i: (i - n/2) / (2L).
  double frequency_coordinate(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(n_ / 2)) * frequency_spacing();
  }
  Point point(std::size_t flat) const;
  Point frequency(std::size_t flat) const;
  /// Signed minimal periodic offset of axis index difference d, in grid units.
  long periodic_offset(long d) const;

  /// Same grid shape rescaled so that x -> x / lambda.
  Grid dilated(double lambda) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dimension_;
  std::size_t n_;
  double half_extent_;
};

/// Complex samples of a function on a Grid.
class SampledField {
 public:
  explicit SampledField(Grid grid);
  SampledField(Grid grid, std::vector<Complex> values);

  static SampledField from_function(const Grid& grid, const std::function<Complex(const Point&)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  /// Pointwise modulus as a (real) field.
  SampledField modulus() const;
  double max_abs() const;

  SampledField& operator*=(Complex c);
  SampledField& operator+=(const SampledField& other);
  SampledField& operator-=(const SampledField& other);

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

SampledField operator*(Complex c, SampledField f);
SampledField operator+(SampledField a, const SampledField& b);
SampledField operator-(SampledField a, const SampledField& b);

/// Samples of a Fourier transform on the centered frequency grid of a
/// spatial Grid: axis index i holds frequency (i - n/2) / (2L).
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> values);

  static SpectralField from_symbol(const Grid& grid, const std::function<Complex(const Point&)>& symbol);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  std::size_t size() const { return values_.size(); }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }
  Point frequency(std::size_t flat) const { return grid_.frequency(flat); }

  /// Multiplies pointwise by symbol(scale * xi).
  SpectralField& apply(const std::function<Complex(const Point&)>& symbol, double scale = 1.0);

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

/// Riemann-sum approximation of f^(xi) = int f(x) exp(-2 pi i <x, xi>) dx.
SpectralField to_spectrum(const SampledField& f);
/// Exact inverse of to_spectrum.
SampledField from_spectrum(const SpectralField& spectrum);

/// (sum |f|^p h^n)^(1/p); a quasi-norm for p < 1.
double lp_norm(const SampledField& f, double p);
/// Same quadrature on the frequency grid.
double lp_norm(const SpectralField& f, double p);
double weighted_lp_norm(const SampledField& f, const SampledField& w, double p);

/// Scales t_0 > t_1 > ... > 0 with log-trapezoid weights for dt/t.
class ScaleGrid {
 public:
  /// t_k = t_max * ratio^k, k = 0..count-1.
  static ScaleGrid geometric(double t_max, double ratio, std::size_t count);
  /// count log-uniform scales spanning [t_min, t_max].
  static ScaleGrid log_uniform(double t_min, double t_max, std::size_t count);
  static ScaleGrid explicit_list(std::vector<double> scales);
  /// Default range [2^-10 L, 2L] for a grid of half extent L.
  static ScaleGrid default_for(const Grid& grid, std::size_t count = 128);

  std::span<const double> scales() const { return scales_; }
  std::size_t size() const { return scales_.size(); }
  double operator[](std::size_t k) const { return scales_[k]; }
  double t_max() const { return scales_.front(); }
  double t_min() const { return scales_.back(); }
  /// Quadrature weight of scale k for the measure dt/t.
  double log_weight(std::size_t k) const { return weights_[k]; }
  std::span<const double> log_weights() const { return weights_; }
  /// Constant ratio t_{k+1}/t_k, or 0 for an explicit list that is not geometric.
  double ratio() const { return ratio_; }

  ScaleGrid scaled(double factor) const;

 private:
  explicit ScaleGrid(std::vector<double> scales);
  std::vector<double> scales_;
  std::vector<double> weights_;
  double ratio_ = 0.0;
};

/// (sum_k u_k^q w_k)^(1/q), approximating (int u(t)^q dt/t)^(1/q).
double scale_integral(std::span<const double> u, const ScaleGrid& scales, double q);

}  // namespace lplab
