#include "mortkit/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mortkit/errors.hpp"

namespace mortkit {

namespace {

std::vector<double> rate_column(const LCParams& p, double k) {
  std::vector<double> m(p.alpha.size());
  for (std::size_t x = 0; x < p.alpha.size(); ++x) {
    m[x] = std::exp(p.alpha[x] + p.beta[x] * k);
  }
  return m;
}

std::vector<double> expectancy_at(const LCParams& p, const AgeGrid& grid, double k) {
  return build_life_table(rate_column(p, k), grid).ex;
}

}  // namespace

std::vector<std::vector<double>> project_rates(const LCParams& p, const KForecast& f) {
  std::vector<std::vector<double>> rates(p.alpha.size(),
                                         std::vector<double>(f.khat.size()));
  for (std::size_t h = 0; h < f.khat.size(); ++h) {
    for (std::size_t x = 0; x < p.alpha.size(); ++x) {
      rates[x][h] = std::exp(p.alpha[x] + p.beta[x] * f.khat[h]);
    }
  }
  return rates;
}

std::vector<std::vector<double>> project_life_expectancy(const LCParams& p,
                                                         const KForecast& f,
                                                         const AgeGrid& grid) {
  std::vector<std::vector<double>> e(p.alpha.size(),
                                     std::vector<double>(f.khat.size()));
  for (std::size_t h = 0; h < f.khat.size(); ++h) {
    const std::vector<double> col = expectancy_at(p, grid, f.khat[h]);
    for (std::size_t x = 0; x < p.alpha.size(); ++x) e[x][h] = col[x];
  }
  return e;
}

void le_confidence_interval(const LCParams& p, const KForecast& f,
                            const AgeGrid& grid, double level,
                            std::vector<std::vector<double>>& lo,
                            std::vector<std::vector<double>>& hi) {
  const KInterval band = k_interval(f, level);
  lo.assign(p.alpha.size(), std::vector<double>(f.khat.size()));
  hi.assign(p.alpha.size(), std::vector<double>(f.khat.size()));
  for (std::size_t h = 0; h < f.khat.size(); ++h) {
    // Higher k means higher mortality for beta > 0, so the life-expectancy
    // bounds come from the opposite k endpoints; min/max keeps the bounds
    // ordered even if some beta is negative.
    const std::vector<double> e_at_hi_k = expectancy_at(p, grid, band.hi[h]);
    const std::vector<double> e_at_lo_k = expectancy_at(p, grid, band.lo[h]);
    for (std::size_t x = 0; x < p.alpha.size(); ++x) {
      lo[x][h] = std::min(e_at_hi_k[x], e_at_lo_k[x]);
      hi[x][h] = std::max(e_at_hi_k[x], e_at_lo_k[x]);
    }
  }
}

FitEvaluation fit_evaluation(const MortalitySurface& observed, const LCParams& p,
                             std::span<const std::string> periods) {
  if (observed.open_placeholder()) {
    throw ValidationError("open-group placeholder not imputed");
  }
  FitEvaluation eval;
  eval.periods.assign(periods.begin(), periods.end());
  const std::size_t n = p.alpha.size();
  eval.observed.assign(n, std::vector<double>(periods.size()));
  eval.estimated.assign(n, std::vector<double>(periods.size()));
  eval.difference.assign(n, std::vector<double>(periods.size()));

  for (std::size_t j = 0; j < periods.size(); ++j) {
    const auto& label = periods[j];
    auto obs_it = std::find(observed.periods().begin(), observed.periods().end(), label);
    auto par_it = std::find(p.periods.begin(), p.periods.end(), label);
    if (obs_it == observed.periods().end() || par_it == p.periods.end()) {
      throw ValidationError("unknown period label '" + label + "'");
    }
    const std::size_t to = static_cast<std::size_t>(obs_it - observed.periods().begin());
    const std::size_t tp = static_cast<std::size_t>(par_it - p.periods.begin());

    const std::vector<double> e_obs =
        build_life_table(observed.column(to), observed.grid()).ex;
    const std::vector<double> e_fit =
        expectancy_at(p, observed.grid(), p.k[tp]);
    for (std::size_t x = 0; x < n; ++x) {
      eval.observed[x][j] = e_obs[x];
      eval.estimated[x][j] = e_fit[x];
      eval.difference[x][j] = std::abs(e_obs[x] - e_fit[x]);
    }
  }
  return eval;
}

std::vector<std::string> continue_period_labels(std::span<const std::string> periods,
                                                std::size_t horizon) {
  std::vector<std::string> out;
  out.reserve(horizon);
  int start = 0;
  int span = 5;
  bool parsed = false;
  if (!periods.empty()) {
    const std::string& last = periods.back();
    int end2 = 0;
    if (std::sscanf(last.c_str(), "%4d-%2d", &start, &end2) == 2) {
      parsed = true;
      span = (end2 - start % 100 + 100) % 100;
      if (span <= 0) span = 5;
    }
  }
  for (std::size_t h = 1; h <= horizon; ++h) {
    if (parsed) {
      const int s = start + static_cast<int>(h) * span;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%d-%02d", s, (s + span) % 100);
      out.emplace_back(buf);
    } else {
      out.push_back("t+" + std::to_string(h));
    }
  }
  return out;
}

ProjectionReport make_projection_report(const LCParams& p, const KForecast& f,
                                        const AgeGrid& grid, double level,
                                        std::string provenance) {
  ProjectionReport report;
  report.periods = continue_period_labels(p.periods, f.khat.size());
  report.rates = project_rates(p, f);
  report.life_expectancy = project_life_expectancy(p, f, grid);
  le_confidence_interval(p, f, grid, level, report.ci_lo, report.ci_hi);
  report.confidence = level;
  report.provenance = std::move(provenance);
  return report;
}

}  // namespace mortkit
