#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mortkit {

enum class IndexModelKind {
  kRw2,  // second-order random walk, no drift: d2 k_t white noise
  kRwd,  // random walk with drift: d1 k_t = drift + noise
};

/// Fitted time-series model for the mortality index.
struct IndexModel {
  IndexModelKind kind = IndexModelKind::kRw2;
  double sigma = 0.0;   // innovation standard deviation
  double drift = 0.0;   // per-step drift (RWD only)
  std::size_t length = 0;
  double k_last = 0.0;
  double k_prev = 0.0;
};

/// Multi-step forecast of the index, 1-based horizons.
struct KForecast {
  std::vector<double> khat;
  std::vector<double> se;
};

/// Interval bounds per horizon.
struct KInterval {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Fits the second-order random walk: sigma^2 is the mean square of the
/// second differences (divisor T-2, no mean subtraction). Needs T >= 3.
IndexModel fit_rw2(std::span<const double> k);

/// Fits the random walk with drift: drift is the mean first difference,
/// sigma^2 the mean squared deviation of the first differences from it
/// (divisor T-1). Needs T >= 2.
IndexModel fit_rwd(std::span<const double> k);

/// AIC = 2p - 2 lnL on the appropriately differenced series (p = 1 for RW2,
/// 2 for RWD). Returns nullopt when sigma = 0 (degenerate likelihood).
std::optional<double> model_aic(const IndexModel& model, std::span<const double> k);

/// Point forecasts and standard errors for h = 1..horizon.
/// RW2: khat = k_T + h (k_T - k_{T-1}), se = sigma sqrt(h(h+1)(2h+1)/6).
/// RWD: khat = k_T + h drift, se = sigma sqrt(h).
KForecast forecast_k(const IndexModel& model, std::size_t horizon);

/// Normal interval khat +- z se at the given two-sided confidence level.
KInterval k_interval(const KForecast& f, double level);

/// Standard normal quantile (inverse CDF), accurate to well below 1e-8.
double normal_quantile(double p);

}  // namespace mortkit
