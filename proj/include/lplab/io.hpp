#pragma once

#include <string>
#include <vector>

#include "lplab/transforms.hpp"

namespace lplab {

// Binary layout, little-endian:
//   uint32 dimension, uint32 points_per_axis, float64 half_extent,
//   [ScaleField only: uint32 scale count, float64 scales...]
//   complex128 values (scale-major for ScaleField).

void write_field(const std::string& path, const SampledField& f);
SampledField read_field(const std::string& path);

void write_scale_field(const std::string& path, const ScaleField& f);
ScaleField read_scale_field(const std::string& path);

/// Columns index,x,Re,Im in one dimension and index,x,y,Re,Im in two.
void write_field_csv(const std::string& path, const SampledField& f);

/// Plain CSV with a header row; values written with 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace lplab
