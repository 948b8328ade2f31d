#pragma once

#include <cstdint>
#include <vector>

#include "lplab/kernel.hpp"
#include "lplab/maximal.hpp"

namespace lplab {

/// Function of (x, t) on Grid x ScaleGrid, stored scale-major.
class ScaleField {
 public:
  ScaleField(Grid grid, ScaleGrid scales);
  ScaleField(Grid grid, ScaleGrid scales, std::vector<Complex> values);

  const Grid& grid() const { return grid_; }
  const ScaleGrid& scales() const { return scales_; }
  std::size_t scale_count() const { return scales_.size(); }
  std::span<const Complex> values() const { return values_; }

  std::span<const Complex> slice(std::size_t k) const;
  std::span<Complex> slice(std::size_t k);
  SampledField slice_field(std::size_t k) const;
  void set_slice(std::size_t k, const SampledField& f);

  /// Pointwise (int |u(x,t)|^q dt/t)^(1/q).
  SampledField scale_norm(double q = 2.0) const;

  ScaleField& operator*=(Complex c);

 private:
  Grid grid_;
  ScaleGrid scales_;
  std::vector<Complex> values_;
};

/// E(x, t) = f * psi_t (x), one inverse transform per scale.
ScaleField scale_transform(const SampledField& f, const KernelSpec& psi, const ScaleGrid& scales);

/// g(x) = (int |f * psi_t (x)|^q dt/t)^(1/q).
SampledField g_function(const SampledField& f, const KernelSpec& psi, const ScaleGrid& scales, double q = 2.0);

/// (sum_{j = j_lo..j_hi} |f * psi_{b^j}(x)|^q)^(1/q).
SampledField g_discrete(const SampledField& f, const KernelSpec& psi, double b, long j_lo, long j_hi,
                        double q = 2.0);

/// F(x) = int_eps^{1/eps} int psi_t(x - y) h(y, t) dy dt/t, assembled in the
/// Fourier domain with the log quadrature weights of h's scale grid.
SampledField synthesize(const ScaleField& h, const KernelSpec& psi, double epsilon);

/// int_0^inf |k^(t xi)|^2 dt/t along the direction of xi, by adaptive
/// quadrature in log t. Independent of any scale grid.
double calderon_multiplier(const KernelSpec& k, const Point& xi);

/// psi^ divided by the square root of its Calderon multiplier so that
/// int_0^inf |psi^(t xi)|^2 dt/t = 1. Requires a radial symbol (or n = 1).
KernelSpec normalize_calderon(const KernelSpec& k, int dimension);

/// Cube [center - side/2, center + side/2]^n.
struct Cube {
  Point center{0.0, 0.0};
  double side = 1.0;

  bool contains(const Point& x, int dimension) const;
  double volume(int dimension) const;
};

/// A (p, infinity) atom with values in L^2(dt/t).
struct Atom {
  Cube cube;
  double p = 1.0;
  int moment_order = 0;
  std::uint64_t seed = 0;
  ScaleField values;
};

/// floor(n (1/p - 1)).
int atom_moment_order(int dimension, double p);

/// Smooth seeded random atom: band-limited noise times a C-infinity window of
/// the cube, moments up to atom_moment_order removed by Gram-Schmidt in the
/// window-weighted inner product, then scaled so that
/// sup_x (int |a(x,t)|^2 dt/t)^(1/2) = 0.9 |Q|^(-1/p).
Atom make_atom(const Grid& grid, const ScaleGrid& scales, const Cube& cube, double p, std::uint64_t seed);

struct AtomVerdict {
  bool pass = false;
  /// max |a| outside the cube.
  double support_residual = 0.0;
  /// sup_x (int |a|^2 dt/t)^(1/2) / |Q|^(-1/p); at most 1 for an atom.
  double size_ratio = 0.0;
  /// max over t and gamma of |int a (x-c)^gamma| / int |a| |x-c|^gamma.
  double moment_residual = 0.0;
};

AtomVerdict validate_atom(const Atom& atom);

}  // namespace lplab
