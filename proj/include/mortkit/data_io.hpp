#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "mortkit/age_grid.hpp"
#include "mortkit/surface.hpp"

namespace mortkit {

struct ParseOptions {
  double infant_separation = kDefaultInfantSeparation;
};

/// Parses a delimited abridged table. The header row carries period labels,
/// the first column age-group labels; every cell must be a probability in
/// (0, 1], with 1 allowed only in the open row. An all-ones open row is
/// flagged as a placeholder to be filled by impute_open_group.
///
/// Throws ValidationError naming the offending cell on non-numeric input,
/// ragged rows, unknown age labels, or out-of-range probabilities.
QSurface parse_abridged_table(std::string_view text, const ParseOptions& opts = {});

/// parse_abridged_table on file contents; missing files raise IoError.
QSurface load_q_csv(const std::filesystem::path& path, const ParseOptions& opts = {});

/// Canonical 5-decimal serialization; parsing then serializing a fixture
/// reproduces it byte for byte.
std::string serialize_q(const QSurface& q);

/// Interval probability -> central rate: m = q / (n - (n - a) q).
/// Throws NumericError when the denominator is not positive.
double q_to_m_cell(double q, double width, double separation);

/// Converts every closed row; open-row cells pass through unchanged
/// (an all-ones placeholder row stays flagged, anything else is taken to
/// already be a central rate).
MortalitySurface q_to_m(const QSurface& q);

/// Replaces the placeholder open row with exp(alpha_open + beta_open * k[t])
/// and clears the flag. `k` must have one entry per period.
MortalitySurface impute_open_group(const MortalitySurface& m, double alpha_open,
                                   double beta_open, std::span<const double> k);

}  // namespace mortkit
