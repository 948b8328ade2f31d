#pragma once

#include <memory>
#include <vector>

#include "lplab/kernel.hpp"

namespace lplab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Compact scale intervals on which the squared symbol sum stays above a
/// threshold for every sampled direction, and b0 = max lo/hi.
struct IntervalCover {
  std::vector<Interval> intervals;
  double b0 = 0.0;
  double threshold = 0.0;
  /// inf over directions of sup over t of sum_i |phi_i^(t xi)|^2.
  double infimum = 0.0;
};

/// Greedy interval cover. For each direction the widest run of grid scales
/// with sum_i |phi_i^(t xi)|^2 >= infimum / 2 is taken; overlapping windows of
/// different directions are merged by intersection so that every interval
/// keeps the threshold for each direction it serves.
IntervalCover find_intervals(const KernelFamily& family, int dimension, int direction_count,
                             const ScaleGrid& t_grid);

/// The reproducing system eta of a non-degenerate family phi:
///   eta_i^(xi) = theta(|xi|) conj(phi_i^(xi)) / Psi(xi),
///   Psi(xi)    = sum_j theta(b^j|xi|) sum_i |phi_i^(b^j xi)|^2,
/// where theta is a smooth bump equal to 1 on [m,H] (the hull of the
/// intervals) and supported in [m/2, 2H]. Then sum_j <phi^(b^j xi), eta^(b^j xi)> = 1
/// for xi != 0 and eta^ is supported in r1 = m/2 < |xi| < r2 = 2H.
///
/// Copies share the underlying state.
class PartitionSystem {
 public:
  /// Throws when b is outside [b0, 1) or Psi nearly vanishes on the annulus.
  static PartitionSystem build(const KernelFamily& family, int dimension, double b,
                               const IntervalCover& cover);

  double b() const { return state_->b; }
  double b0() const { return state_->b0; }
  double r1() const { return 0.5 * state_->m; }
  double r2() const { return 2.0 * state_->H; }
  /// Plateau [m, H] of theta.
  double plateau_lo() const { return state_->m; }
  double plateau_hi() const { return state_->H; }
  int dimension() const { return state_->dimension; }
  const std::vector<Interval>& intervals() const { return state_->intervals; }
  const KernelFamily& family() const { return state_->family; }

  double theta(double s) const;
  /// The normalizer Psi(xi); satisfies Psi(b xi) = Psi(xi).
  double normalizer(const Point& xi) const;
  Complex eta(const Point& xi, std::size_t member = 0) const;
  Symbol eta_symbol(std::size_t member = 0) const;
  /// phi^(xi) for the first family member.
  Complex phi(const Point& xi) const { return state_->family[0](xi); }

  /// Inclusive index range of j with b^j |xi| inside supp theta.
  std::pair<long, long> active_range(double radius) const;
  /// sum_j <phi^(b^j xi), eta^(b^j xi)>, over the full finite active range.
  Complex reproducing_sum(const Point& xi) const;
  /// Restricted to j >= j_min.
  Complex reproducing_sum(const Point& xi, long j_min) const;
  /// Restricted to j_min <= j <= j_max.
  Complex reproducing_sum(const Point& xi, long j_min, long j_max) const;

 private:
  struct State {
    KernelFamily family;
    int dimension = 1;
    double b = 0.5;
    double b0 = 0.5;
    double m = 1.0;
    double H = 2.0;
    std::vector<Interval> intervals;
  };
  explicit PartitionSystem(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;
};

/// zeta_J^(xi) = 1 - sum_{j : b^j <= J} phi^(b^j xi) eta^(b^j xi); equals 1 for
/// |xi| < r1/J and 0 for |xi| > r2/J.
struct ZetaSymbol {
  double J = 1.0;
  long j_min = 0;
  Symbol symbol;
  PartitionSystem parent;

  Complex operator()(const Point& xi) const { return symbol(xi); }
};

ZetaSymbol build_zeta(const PartitionSystem& partition, double J);

/// Smallest j with b^j <= J.
long first_index_below(double b, double J);

/// psi^(xi) = sum_{j: b^j <= A} phi^(b^j xi) alpha_j^(b^j xi) + phi^(xi) beta^(xi) with
/// alpha_j^(xi) = psi^(b^-j xi) eta^(xi) and beta^ = zeta_A^ Theta, the j-sum
/// truncated to j_begin <= j <= j_end.
struct DecompositionResult {
  long j_begin = 0;
  long j_end = 0;
  std::vector<Symbol> alpha_symbols;  // index j - j_begin
  Symbol beta_symbol;
  /// sup |psi^ - sum - phi^ beta^| over the sampled frequency box.
  double residual = 0.0;
  /// sup |psi^ - phi^ Theta| over |xi| < r2/A.
  double near_origin_residual = 0.0;
  /// Frequencies up to this radius are reproduced exactly by the truncated sum.
  double admissible_radius = 0.0;

  const Symbol& alpha(long j) const { return alpha_symbols.at(static_cast<std::size_t>(j - j_begin)); }
};

/// Throws when psi^ = phi^ Theta fails on |xi| < r2/A (tol 1e-8) or when the
/// identity residual on |xi| <= max_frequency exceeds 1e-8.
DecompositionResult decompose_psi(const PartitionSystem& partition, const KernelSpec& psi,
                                  const KernelSpec& theta_multiplier, double A, long truncation,
                                  double max_frequency = 64.0);

/// Samples of |xi| along `directions` used for sup-residual checks:
/// `count` log-uniform radii in [r_lo, r_hi].
std::vector<Point> sample_frequencies(int dimension, int directions, double r_lo, double r_hi,
                                      std::size_t count);

}  // namespace lplab
