#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mortkit {

/// Average years lived within the first year of life by infants who die in it.
inline constexpr double kDefaultInfantSeparation = 0.3;

/// Separation factor for the 1-4 band. Child deaths concentrate early in
/// the band, well before its midpoint.
inline constexpr double kDefaultChildSeparation = 1.4;

/// One band of an abridged age grid.
struct AgeGroup {
  std::string label;
  double width = 0.0;       // n_x in years; meaningless when open
  double separation = 0.0;  // a_x in years; 0 < a_x < n_x for closed bands
  bool open = false;        // terminal unbounded band
};

/// Ordered abridged age grid: closed bands followed by exactly one open band.
class AgeGrid {
 public:
  /// Empty placeholder; every populated grid goes through the validating
  /// constructor.
  AgeGrid() = default;

  /// Validates and takes ownership of the bands. Throws ValidationError on
  /// duplicate labels, a misplaced open band, or a separation factor outside
  /// (0, width).
  explicit AgeGrid(std::vector<AgeGroup> groups);

  /// The 18-band grid used by the bundled datasets:
  /// 0, 1-4, 5-9, ..., 75-79, 80+.
  static AgeGrid peru(double infant_separation = kDefaultInfantSeparation);

  /// Derives a grid from labels of the form "0", "A-B" or "A+".
  /// Widths come from the label ranges; separation factors default to half
  /// the width, except the infant band (a0) and the 1-4 band.
  static AgeGrid from_labels(const std::vector<std::string>& labels,
                             double infant_separation = kDefaultInfantSeparation);

  std::size_t size() const { return groups_.size(); }
  const AgeGroup& operator[](std::size_t i) const { return groups_[i]; }
  const std::vector<AgeGroup>& groups() const { return groups_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  std::vector<std::string> labels() const;

  bool operator==(const AgeGrid& other) const;

 private:
  std::vector<AgeGroup> groups_;
};

}  // namespace mortkit
