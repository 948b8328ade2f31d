#pragma once

#include <vector>

#include "lplab/kernel.hpp"

namespace lplab {

struct PeetreParams {
  double N = 1.0;
  double R = 1.0;
};

/// F**_{N,R}(x) = sup_y |F(x - y)| / (1 + R|y|)^N over all grid offsets y
/// (minimal periodic distance). Exact: offsets are visited in order of
/// increasing |y| and the scan stops once max|F| (1 + R|y|)^-N cannot exceed
/// the running sup.
SampledField peetre_max(const SampledField& F, const PeetreParams& params);

/// Uncentered Hardy-Littlewood maximal function of |f| over grid-aligned
/// balls containing each point. One dimension: every (periodic) run of cells
/// of length 1..n. Two dimensions: discs centered at grid points with radii
/// given in grid units (all radii up to n/2 by default).
SampledField hl_max(const SampledField& f);
SampledField hl_max(const SampledField& f, const std::vector<int>& disc_radii);

/// Default disc radii (grid units) for two-dimensional hl_max.
std::vector<int> default_disc_radii(std::size_t points_per_axis);

struct GrandMaxConfig {
  KernelSpec mollifier;
  ScaleGrid scales;

  /// Gaussian mollifier with 64 log-spaced scales over [spacing/2, half_extent].
  static GrandMaxConfig default_for(const Grid& grid);
};

/// max over the scale grid of |Phi_t * f|, convolutions done spectrally.
/// The mollifier must have unit mass (symbol(0) = 1).
SampledField grand_max(const SampledField& f, const GrandMaxConfig& config);

/// |grad F| computed with the multipliers 2 pi i xi_k.
SampledField gradient_modulus(const SampledField& F);

struct PeetreBound {
  double delta = 1.0;
  /// Smallest C with F** <= C (delta^-N M(|F|^r)^(1/r) + delta R^-1 |grad F|**).
  double c_min = 0.0;
};

/// Measures the constant in the Peetre pointwise bound with N = n / r.
std::vector<PeetreBound> peetre_bound_check(const SampledField& F, double R, double r,
                                            const std::vector<double>& deltas);

}  // namespace lplab
