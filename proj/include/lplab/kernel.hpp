#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lplab/field.hpp"

namespace lplab {

/// Fourier symbol xi -> k^(xi).
using Symbol = std::function<Complex(const Point&)>;

/// Membership claim for the decay class B^l_tau: derivatives of the symbol
/// up to order l decay like |xi|^(-tau - |gamma|) away from the origin.
struct DecaySpec {
  int l = 0;
  double tau = 0.0;
  double neighborhood_radius = 1.0;
};

/// A convolution kernel given by its Fourier symbol. Spatial samples are
/// always produced from the symbol by inverse transform.
struct KernelSpec {
  std::string name;
  Symbol symbol;
  std::optional<DecaySpec> claimed_decay;
  /// True for Fourier multipliers (Theta, Xi_k) rather than L^1 kernels.
  bool multiplier = false;
  /// True when symbol(xi) depends on |xi| only.
  bool radial = false;

  Complex operator()(const Point& xi) const { return symbol(xi); }
};

/// phi = (phi^(1), ..., phi^(M)).
struct KernelFamily {
  std::vector<KernelSpec> members;

  KernelFamily() = default;
  KernelFamily(std::initializer_list<KernelSpec> list) : members(list) {}
  explicit KernelFamily(std::vector<KernelSpec> list) : members(std::move(list)) {}

  std::size_t size() const { return members.size(); }
  const KernelSpec& operator[](std::size_t i) const { return members[i]; }
  /// sum_i |phi^(i)^(xi)|^p
  double symbol_sum(const Point& xi, double p = 1.0) const;
};

struct BuiltinInfo {
  std::string name;
  std::string description;
  std::vector<double> default_params;
};

/// Catalog of names accepted by make_builtin.
std::vector<BuiltinInfo> builtin_catalog();

/// Builds a named kernel. Missing trailing parameters take their defaults.
///   poissonQ [scale]                     -2 pi s|xi| exp(-2 pi s|xi|)
///   gaussian [width]                     exp(-pi w^2 |xi|^2)
///   mexican_hat [scale]                  4 pi^2 s^2|xi|^2 exp(-pi s^2|xi|^2)
///   annulus_bump [a, b, c, d]            smooth, 1 on [b,c], supported in (a,d)
///   gaussian_difference []               exp(-pi|xi|^2) - exp(-4 pi|xi|^2)
///   bessel_gradient [tau, axis]          2 pi i xi_axis (1 + 4 pi^2|xi|^2)^(-(1+tau)/2)
KernelSpec make_builtin(const std::string& name, const std::vector<double>& params = {});

/// Theta = Xi_k, the symbol 2 pi i xi_k of d/dx_k (axis 0-based).
KernelSpec make_xi_multiplier(int axis);
/// Theta = c everywhere.
KernelSpec make_constant_multiplier(Complex c);
/// Kernel with symbol 2 pi i xi_k k^(xi), i.e. the derivative d_k k.
KernelSpec make_derivative(const KernelSpec& k, int axis);
/// Kernel with symbol k^(lambda xi).
KernelSpec make_dilated(const KernelSpec& k, double lambda);
/// Kernel with symbol conj(k^(xi)), i.e. x -> conj(k(-x)).
KernelSpec make_reflected_conjugate(const KernelSpec& k);
KernelSpec make_custom(std::string name, Symbol symbol, bool radial = false);

/// C-infinity step: 0 for s <= 0, 1 for s >= 1, built from exp(-1/s).
double smooth_step(double s);

/// Spatial samples of k_t(x) = t^-n k(x/t): inverse transform of symbol(t xi).
SampledField sample_kernel(const KernelSpec& k, const Grid& grid, double t);

struct CheckResult {
  bool pass = false;
  double value = 0.0;
};

/// Residual |symbol(0)|; passes when it is at most 1e-12.
CheckResult check_cancellation(const KernelSpec& k);

/// Unit directions used for ray sampling: +-1 in one dimension, `count`
/// equally spaced angles in two.
std::vector<Point> sample_directions(int dimension, int count);

struct NondegeneracyResult {
  /// min over directions of max over t of sum_j |phi_j^(t xi)|.
  double infimum = 0.0;
  std::vector<double> per_direction;
  std::vector<double> argmax_scale;
};

/// Estimates inf_{xi != 0} sup_{t > 0} sum_j |phi^(j)^(t xi)| over unit
/// directions; the scan over t_range is refined by golden-section search in
/// log t around the best grid scale.
NondegeneracyResult check_nondegeneracy(const KernelFamily& family, const ScaleGrid& t_range,
                                        int dimension, int directions);

struct DecayResult {
  bool pass = false;
  /// Fitted log-log slope per multi-index, in the order of `multi_indices`;
  /// -infinity when the derivative vanishes identically on the outer probes.
  std::vector<double> slopes;
  std::vector<std::array<int, 2>> multi_indices;
  /// Largest slope + tau + |gamma| over all gamma (pass iff <= 0.1).
  double worst_excess = 0.0;
};

/// Finite-difference probe of the decay class B^l_tau on spheres |xi| = r.
DecayResult check_decay_class(const KernelSpec& k, const DecaySpec& decay,
                              const std::vector<double>& probe_radii, int dimension);

struct GrowthResult {
  bool pass = false;
  double epsilon = 0.0;
};

/// Fits |symbol(xi)| ~ |xi|^epsilon along the first axis for small |xi|.
GrowthResult check_low_frequency_growth(const KernelSpec& k);

}  // namespace lplab
