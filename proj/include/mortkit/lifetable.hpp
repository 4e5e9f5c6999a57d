#pragma once

#include <span>
#include <vector>

#include "mortkit/age_grid.hpp"
#include "mortkit/surface.hpp"

namespace mortkit {

/// Abridged period life table. All columns are indexed by age band;
/// lx holds survivors at the band's start age (lx[0] = radix).
struct LifeTable {
  AgeGrid grid;
  std::vector<double> qx;  // interval death probability
  std::vector<double> lx;  // survivors at exact start age
  std::vector<double> dx;  // deaths within the band
  std::vector<double> Lx;  // person-years lived in the band
  std::vector<double> Tx;  // person-years lived above the start age
  std::vector<double> ex;  // life expectancy at the start age, years
};

/// Central rate -> interval probability: q = n m / (1 + (n - a) m).
double q_from_m(double m, double width, double separation);

/// Builds the table for one column of central rates (one per band, all
/// positive, terminal band open). Closed bands use the separation-factor
/// identities; the open band closes with q = 1, L = l/m, e = 1/m.
LifeTable build_life_table(std::span<const double> m, const AgeGrid& grid,
                           double radix = 1.0);

/// Life expectancy for every age band and period: result[x][t].
/// The surface must not carry an unimputed open-row placeholder.
std::vector<std::vector<double>> life_expectancy_profile(const MortalitySurface& m);

/// CSV with columns age,q,l,d,L,T,e at 6-decimal fixed formatting.
std::string serialize_life_table(const LifeTable& table);

}  // namespace mortkit
