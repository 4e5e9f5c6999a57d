#include "mortkit/lifetable.hpp"

#include <cmath>

#include "mortkit/csv.hpp"
#include "mortkit/errors.hpp"

namespace mortkit {

double q_from_m(double m, double width, double separation) {
  return width * m / (1.0 + (width - separation) * m);
}

LifeTable build_life_table(std::span<const double> m, const AgeGrid& grid,
                           double radix) {
  if (m.size() != grid.size()) {
    throw ValidationError("rate column has " + std::to_string(m.size()) +
                          " entries for " + std::to_string(grid.size()) +
                          " age groups");
  }
  if (!(radix > 0.0)) {
    throw ValidationError("radix must be positive");
  }
  const std::size_t n = grid.size();
  LifeTable t{grid, std::vector<double>(n), std::vector<double>(n),
              std::vector<double>(n), std::vector<double>(n),
              std::vector<double>(n), std::vector<double>(n)};

  double l = radix;
  for (std::size_t x = 0; x < n; ++x) {
    const AgeGroup& g = grid[x];
    if (!(m[x] > 0.0) || !std::isfinite(m[x])) {
      throw ValidationError("central rate for '" + g.label +
                            "' must be positive and finite");
    }
    t.lx[x] = l;
    if (g.open) {
      t.qx[x] = 1.0;
      t.dx[x] = l;
      t.Lx[x] = l / m[x];
    } else {
      const double q = q_from_m(m[x], g.width, g.separation);
      if (q >= 1.0) {
        throw NumericError("central rate " + csv::fixed(m[x], 6) + " for '" +
                           g.label + "' exceeds the interval's capacity");
      }
      t.qx[x] = q;
      t.dx[x] = l * q;
      t.Lx[x] = g.width * (l - t.dx[x]) + g.separation * t.dx[x];
      l -= t.dx[x];
    }
  }

  double cum = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    cum += t.Lx[i];
    t.Tx[i] = cum;
    t.ex[i] = t.Tx[i] / t.lx[i];
  }
  return t;
}

std::vector<std::vector<double>> life_expectancy_profile(const MortalitySurface& m) {
  if (m.open_placeholder()) {
    throw ValidationError("open-group placeholder not imputed");
  }
  std::vector<std::vector<double>> e(m.n_ages(),
                                     std::vector<double>(m.n_periods()));
  for (std::size_t t = 0; t < m.n_periods(); ++t) {
    const LifeTable table = build_life_table(m.column(t), m.grid());
    for (std::size_t x = 0; x < m.n_ages(); ++x) e[x][t] = table.ex[x];
  }
  return e;
}

std::string serialize_life_table(const LifeTable& table) {
  std::string out = "age,q,l,d,L,T,e\n";
  for (std::size_t x = 0; x < table.grid.size(); ++x) {
    out += table.grid[x].label;
    for (double v : {table.qx[x], table.lx[x], table.dx[x], table.Lx[x],
                     table.Tx[x], table.ex[x]}) {
      out += ',';
      out += csv::fixed(v, 6);
    }
    out += '\n';
  }
  return out;
}

}  // namespace mortkit
