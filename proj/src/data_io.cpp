#include "mortkit/data_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mortkit/csv.hpp"
#include "mortkit/errors.hpp"

namespace mortkit {

namespace {

std::string cell_name(const std::string& age, const std::string& period) {
  return "row '" + age + "', column '" + period + "'";
}

}  // namespace

QSurface parse_abridged_table(std::string_view text, const ParseOptions& opts) {
  const std::vector<std::string> lines = csv::split_lines(text);
  if (lines.size() < 2) {
    throw ValidationError("table needs a header row and at least one age row");
  }

  const std::vector<std::string> header = csv::split_line(lines[0]);
  if (header.size() < 2) {
    throw ValidationError("header row must list at least one period");
  }
  const std::vector<std::string> periods(header.begin() + 1, header.end());

  std::vector<std::string> age_labels;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      throw ValidationError("blank line at row " + std::to_string(i + 1));
    }
    std::vector<std::string> fields = csv::split_line(lines[i]);
    if (fields.size() != periods.size() + 1) {
      throw ValidationError("ragged row '" + fields[0] + "': expected " +
                            std::to_string(periods.size()) + " values, found " +
                            std::to_string(fields.size() - 1));
    }
    std::vector<double> row(periods.size());
    for (std::size_t j = 0; j < periods.size(); ++j) {
      if (!csv::parse_number(fields[j + 1], row[j])) {
        throw ValidationError("non-numeric cell '" + fields[j + 1] + "' at " +
                              cell_name(fields[0], periods[j]));
      }
    }
    age_labels.push_back(fields[0]);
    rows.push_back(std::move(row));
  }

  AgeGrid grid = AgeGrid::from_labels(age_labels, opts.infant_separation);

  std::vector<double> values;
  values.reserve(rows.size() * periods.size());
  bool open_all_ones = true;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    const bool open = grid[x].open;
    for (std::size_t j = 0; j < periods.size(); ++j) {
      const double q = rows[x][j];
      if (!(q > 0.0) || !std::isfinite(q)) {
        throw ValidationError("probability " + csv::fixed(q, 5) +
                              " out of (0,1] at " + cell_name(age_labels[x], periods[j]));
      }
      if (q > 1.0 || (q == 1.0 && !open)) {
        throw ValidationError("probability " + csv::fixed(q, 5) +
                              " out of range at " + cell_name(age_labels[x], periods[j]) +
                              (open ? "" : " (q = 1 is only valid in the open group)"));
      }
      if (open && q != 1.0) open_all_ones = false;
      values.push_back(q);
    }
  }

  return QSurface(std::move(grid), periods, std::move(values), open_all_ones);
}

QSurface load_q_csv(const std::filesystem::path& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open input file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_abridged_table(buf.str(), opts);
  } catch (const ValidationError& e) {
    throw ValidationError(path.filename().string() + ": " + e.what());
  }
}

std::string serialize_q(const QSurface& q) {
  std::string out = "age";
  for (const std::string& p : q.periods()) {
    out += ',';
    out += p;
  }
  out += '\n';
  for (std::size_t x = 0; x < q.n_ages(); ++x) {
    out += q.grid()[x].label;
    for (std::size_t t = 0; t < q.n_periods(); ++t) {
      out += ',';
      out += csv::fixed(q.at(x, t), 5);
    }
    out += '\n';
  }
  return out;
}

double q_to_m_cell(double q, double width, double separation) {
  const double denom = width - (width - separation) * q;
  if (!(denom > 0.0)) {
    throw NumericError("q = " + csv::fixed(q, 5) +
                       " too large for an interval of width " +
                       csv::fixed(width, 1));
  }
  return q / denom;
}

MortalitySurface q_to_m(const QSurface& q) {
  std::vector<double> values;
  values.reserve(q.n_ages() * q.n_periods());
  for (std::size_t x = 0; x < q.n_ages(); ++x) {
    const AgeGroup& g = q.grid()[x];
    for (std::size_t t = 0; t < q.n_periods(); ++t) {
      if (g.open) {
        values.push_back(q.at(x, t));
        continue;
      }
      try {
        values.push_back(q_to_m_cell(q.at(x, t), g.width, g.separation));
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at " +
                           cell_name(g.label, q.periods()[t]));
      }
    }
  }
  return MortalitySurface(q.grid(), q.periods(), std::move(values),
                          q.open_placeholder());
}

MortalitySurface impute_open_group(const MortalitySurface& m, double alpha_open,
                                   double beta_open, std::span<const double> k) {
  if (!m.open_placeholder()) {
    throw ValidationError("open group carries no placeholder to impute");
  }
  if (k.size() != m.n_periods()) {
    throw ValidationError("index series has " + std::to_string(k.size()) +
                          " entries for " + std::to_string(m.n_periods()) +
                          " periods");
  }
  std::vector<double> values = m.values();
  const std::size_t open = m.n_ages() - 1;
  for (std::size_t t = 0; t < m.n_periods(); ++t) {
    values[open * m.n_periods() + t] = std::exp(alpha_open + beta_open * k[t]);
  }
  return MortalitySurface(m.grid(), m.periods(), std::move(values), false);
}

}  // namespace mortkit
