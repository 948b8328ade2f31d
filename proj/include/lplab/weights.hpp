#pragma once

#include <optional>
#include <vector>

#include "lplab/field.hpp"

namespace lplab {

class Weight {
 public:
  enum class Kind { power, constant, custom };

  /// |x|^a; the cell containing the origin holds the cell average of |x|^a.
  static Weight power(double a);
  static Weight constant(double c);
  static Weight custom(SampledField samples);

  Kind kind() const { return kind_; }
  double exponent() const { return value_; }
  double constant_value() const { return value_; }

  SampledField samples(const Grid& grid) const;

 private:
  Weight(Kind kind, double value, std::optional<SampledField> samples)
      : kind_(kind), value_(value), custom_(std::move(samples)) {}

  Kind kind_;
  double value_;
  std::optional<SampledField> custom_;
};

/// Mean of |x|^a over the grid cell centered at the origin (requires a > -n).
double origin_cell_average(const Grid& grid, double a);

struct ApEstimate {
  double value = 0.0;
  Point center{0.0, 0.0};
  double radius = 0.0;
};

/// sup over balls of (avg_B w)(avg_B w^(-1/(p-1)))^(p-1). Balls are centered at
/// every grid point with radius rounded to whole cells and must lie inside the
/// box; radii that fit nowhere are skipped.
ApEstimate ap_characteristic(const SampledField& w, double p, const std::vector<double>& ball_radii);

/// sup_x hl_max(w)(x) / w(x).
double a1_check(const SampledField& w);

}  // namespace lplab
