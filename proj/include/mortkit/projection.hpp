#pragma once

#include <span>
#include <string>
#include <vector>

#include "mortkit/age_grid.hpp"
#include "mortkit/kt_dynamics.hpp"
#include "mortkit/lc_model.hpp"
#include "mortkit/lifetable.hpp"

namespace mortkit {

/// Projected future mortality: rates, life expectancies and interval bounds
/// per age band and horizon step.
struct ProjectionReport {
  std::vector<std::string> periods;                     // future period labels
  std::vector<std::vector<double>> rates;               // [age][h], per person-year
  std::vector<std::vector<double>> life_expectancy;     // [age][h], years
  std::vector<std::vector<double>> ci_lo;               // [age][h]
  std::vector<std::vector<double>> ci_hi;               // [age][h]
  double confidence = 0.95;
  std::string provenance;
};

/// Observed vs model life expectancy at selected historical periods.
struct FitEvaluation {
  std::vector<std::string> periods;
  std::vector<std::vector<double>> observed;    // [age][period]
  std::vector<std::vector<double>> estimated;   // [age][period]
  std::vector<std::vector<double>> difference;  // absolute differences
};

/// m_hat[x][h] = exp(alpha[x] + beta[x] khat[h]).
std::vector<std::vector<double>> project_rates(const LCParams& p, const KForecast& f);

/// Life expectancy per horizon from the projected rate columns.
std::vector<std::vector<double>> project_life_expectancy(const LCParams& p,
                                                         const KForecast& f,
                                                         const AgeGrid& grid);

/// Interval bounds obtained by pushing the k interval endpoints through the
/// rate -> life-table pipeline. Mortality rises with k wherever beta > 0, so
/// the upper k endpoint yields the lower life-expectancy bound; bounds are
/// ordered per cell regardless.
void le_confidence_interval(const LCParams& p, const KForecast& f,
                            const AgeGrid& grid, double level,
                            std::vector<std::vector<double>>& lo,
                            std::vector<std::vector<double>>& hi);

/// Side-by-side observed and fitted life expectancies at the named periods.
/// Unknown period labels raise ValidationError.
FitEvaluation fit_evaluation(const MortalitySurface& observed, const LCParams& p,
                             std::span<const std::string> periods);

/// Extends quinquennial labels like "2015-20" forward; falls back to
/// "t+1", "t+2", ... when the last label is not of that form.
std::vector<std::string> continue_period_labels(std::span<const std::string> periods,
                                                std::size_t horizon);

/// Bundles rates, life expectancies and intervals for the given forecast.
ProjectionReport make_projection_report(const LCParams& p, const KForecast& f,
                                        const AgeGrid& grid, double level,
                                        std::string provenance);

}  // namespace mortkit
