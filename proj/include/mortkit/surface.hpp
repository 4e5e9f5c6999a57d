#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mortkit/age_grid.hpp"
#include "mortkit/errors.hpp"

namespace mortkit {

/// Rectangular ages x periods grid of values. The tag keeps death
/// probabilities (QSurface) and central rates (MortalitySurface) from being
/// mixed up; both are immutable after construction.
template <typename Tag>
class Surface {
 public:
  Surface(AgeGrid grid, std::vector<std::string> periods,
          std::vector<double> values, bool open_placeholder)
      : grid_(std::move(grid)),
        periods_(std::move(periods)),
        values_(std::move(values)),
        open_placeholder_(open_placeholder) {
    if (values_.size() != grid_.size() * periods_.size()) {
      throw ValidationError("surface shape mismatch: " +
                            std::to_string(values_.size()) + " values for " +
                            std::to_string(grid_.size()) + " ages x " +
                            std::to_string(periods_.size()) + " periods");
    }
  }

  std::size_t n_ages() const { return grid_.size(); }
  std::size_t n_periods() const { return periods_.size(); }

  double at(std::size_t age, std::size_t period) const {
    return values_[age * n_periods() + period];
  }

  std::span<const double> row(std::size_t age) const {
    return {values_.data() + age * n_periods(), n_periods()};
  }

  std::vector<double> column(std::size_t period) const {
    std::vector<double> out(n_ages());
    for (std::size_t x = 0; x < n_ages(); ++x) out[x] = at(x, period);
    return out;
  }

  const AgeGrid& grid() const { return grid_; }
  const std::vector<std::string>& periods() const { return periods_; }
  const std::vector<double>& values() const { return values_; }

  /// True when the open band held the all-ones marker and still awaits
  /// imputed central rates.
  bool open_placeholder() const { return open_placeholder_; }

 private:
  AgeGrid grid_;
  std::vector<std::string> periods_;
  std::vector<double> values_;
  bool open_placeholder_;
};

/// Interval death probabilities q[x][t] in (0, 1]; q = 1 only in the open row.
using QSurface = Surface<struct QSurfaceTag>;

/// Central death rates m[x][t] > 0 (deaths per person-year).
using MortalitySurface = Surface<struct MortalitySurfaceTag>;

/// Dense row-major matrix used for centered log-rate grids and residuals.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

}  // namespace mortkit
