#pragma once

#include <map>
#include <string>
#include <vector>

#include "lplab/calderon.hpp"

namespace lplab {

/// A quadrature value with the boundary tail estimate
/// (largest integrand sample on the outermost grid layer times the box measure).
struct ConstantValue {
  double value = 0.0;
  double tail = 0.0;
};

/// Grid for C(psi, j, L): spacing <= 1/(4 r2), half extent about 64/r1
/// (16/r1 in two dimensions).
Grid constants_grid(const PartitionSystem& partition);

/// Grid for D(Theta, J, L), resolving the support of zeta_J^.
Grid zeta_grid(const PartitionSystem& partition, double J);

/// Evaluates C_0, C and D for one partition, caching eta^ on the frequency grid.
/// When the boundary tail check fails, C and D are retried on boxes of twice the
/// half extent at the same spacing (up to 16x in one dimension, 2x in two).
/// Not safe for concurrent use.
class ConstantsEvaluator {
 public:
  ConstantsEvaluator(PartitionSystem partition, Grid grid);
  explicit ConstantsEvaluator(PartitionSystem partition);

  const Grid& grid() const { return grid_; }
  const PartitionSystem& partition() const { return partition_; }

  /// (1 + |x|)^L |int psi^(xi / t) eta^(xi) e^(2 pi i x xi) dxi|.
  SampledField c0_profile(const KernelSpec& psi, double t, double L) const;
  /// C(psi, j, L) = int C_0(psi, b^j, L, x) dx.
  ConstantValue c_const(const KernelSpec& psi, long j, double L) const;
  /// As c_const on the largest box, without the tail check.
  ConstantValue c_const_unchecked(const KernelSpec& psi, long j, double L) const;
  /// D(Theta, J, L) = int (1 + |x|)^L |int zeta_J^(xi) Theta(xi) e^(2 pi i x xi) dxi| dx.
  ConstantValue d_const(const KernelSpec& theta, double J, double L) const;

 private:
  struct Level {
    Grid grid;
    std::vector<Complex> eta;
  };
  const Level& level(std::size_t k) const;
  std::size_t max_levels() const;
  SampledField profile_on(const Level& level, const KernelSpec& psi, double t, double L) const;

  PartitionSystem partition_;
  Grid grid_;
  mutable std::vector<Level> levels_;
};

SampledField c0_profile(const PartitionSystem& partition, const KernelSpec& psi, double t, double L, const Grid& grid);
ConstantValue c_const(const PartitionSystem& partition, const KernelSpec& psi, long j, double L);
ConstantValue d_const(const PartitionSystem& partition, const KernelSpec& theta, double J, double L);

struct Verdict {
  bool pass = false;
  /// Fitted epsilon for the decay conditions, the constant for the remainder ones.
  double measured = 0.0;
  std::string detail;
};

struct ConstantsReport {
  double L = 0.0;
  long j_max = 40;
  /// C_0(psi, t, L, .) at t = b^j for the first three admissible j.
  std::map<double, SampledField> profile_C0;
  /// j -> C(psi, j, L) for b^j <= A.
  std::map<long, double> C_values;
  /// j -> sum_k C(d_k phi, j, L) for j >= 0.
  std::map<long, double> gradient_values;
  double D_value = 0.0;
  /// sum_k D(Xi_k, 1, L).
  double gradient_D_value = 0.0;
  /// Slope of log C(psi, j, L) against j log b over the nonzero entries.
  double tau_fit = 0.0;
  /// Keys: low_frequency_growth, gradient_decay, gradient_remainder,
  /// psi_decay, psi_remainder.
  std::map<std::string, Verdict> verdicts;
};

/// Largest eps > 0 such that sup_j a_j b^(-eps j) over the probed range is
/// attained in its first half. Infinite when the second half vanishes.
double fitted_epsilon(const std::map<long, double>& a, double b);

/// Checks the growth, decay and remainder conditions with L = N over
/// j <= j_max.
ConstantsReport check_conditions(const PartitionSystem& partition, const KernelSpec& phi, const KernelSpec& psi,
                                 const KernelSpec& theta_multiplier, double A, double N, long j_max = 40);

}  // namespace lplab
