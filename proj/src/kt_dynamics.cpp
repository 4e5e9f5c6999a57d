#include "mortkit/kt_dynamics.hpp"

#include <cmath>
#include <string>

#include "mortkit/errors.hpp"

namespace mortkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> differenced(IndexModelKind kind, std::span<const double> k) {
  std::vector<double> d;
  if (kind == IndexModelKind::kRw2) {
    for (std::size_t t = 2; t < k.size(); ++t) {
      d.push_back(k[t] - 2.0 * k[t - 1] + k[t - 2]);
    }
  } else {
    for (std::size_t t = 1; t < k.size(); ++t) {
      d.push_back(k[t] - k[t - 1]);
    }
  }
  return d;
}

}  // namespace

IndexModel fit_rw2(std::span<const double> k) {
  if (k.size() < 3) {
    throw ValidationError("a second-order random walk needs at least 3 observations");
  }
  const std::vector<double> d = differenced(IndexModelKind::kRw2, k);
  double ss = 0.0;
  for (double x : d) ss += x * x;
  IndexModel m;
  m.kind = IndexModelKind::kRw2;
  m.sigma = std::sqrt(ss / static_cast<double>(d.size()));
  m.drift = 0.0;
  m.length = k.size();
  m.k_last = k[k.size() - 1];
  m.k_prev = k[k.size() - 2];
  return m;
}

IndexModel fit_rwd(std::span<const double> k) {
  if (k.size() < 2) {
    throw ValidationError("a random walk with drift needs at least 2 observations");
  }
  const std::vector<double> d = differenced(IndexModelKind::kRwd, k);
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(d.size());
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  IndexModel m;
  m.kind = IndexModelKind::kRwd;
  m.sigma = std::sqrt(ss / static_cast<double>(d.size()));
  m.drift = mean;
  m.length = k.size();
  m.k_last = k[k.size() - 1];
  m.k_prev = k[k.size() - 2];
  return m;
}

std::optional<double> model_aic(const IndexModel& model, std::span<const double> k) {
  if (model.sigma <= 0.0) {
    return std::nullopt;  // zero innovation variance: unbounded likelihood
  }
  const std::vector<double> d = differenced(model.kind, k);
  if (d.empty()) {
    throw ValidationError("series too short to score");
  }
  const double n = static_cast<double>(d.size());
  const double var = model.sigma * model.sigma;
  double ss = 0.0;
  for (double x : d) ss += (x - model.drift) * (x - model.drift);
  const double log_lik = -0.5 * n * std::log(2.0 * kPi * var) - ss / (2.0 * var);
  const double params = (model.kind == IndexModelKind::kRw2) ? 1.0 : 2.0;
  return 2.0 * params - 2.0 * log_lik;
}

KForecast forecast_k(const IndexModel& model, std::size_t horizon) {
  if (horizon < 1) {
    throw ValidationError("forecast horizon must be at least 1");
  }
  KForecast f;
  f.khat.reserve(horizon);
  f.se.reserve(horizon);
  const double slope = model.k_last - model.k_prev;
  for (std::size_t h = 1; h <= horizon; ++h) {
    const double hh = static_cast<double>(h);
    if (model.kind == IndexModelKind::kRw2) {
      f.khat.push_back(model.k_last + hh * slope);
      // Forecast-error variance of the twice-integrated noise:
      // psi-weights 1..h give sigma^2 * h(h+1)(2h+1)/6.
      f.se.push_back(model.sigma * std::sqrt(hh * (hh + 1.0) * (2.0 * hh + 1.0) / 6.0));
    } else {
      f.khat.push_back(model.k_last + hh * model.drift);
      f.se.push_back(model.sigma * std::sqrt(hh));
    }
  }
  return f;
}

KInterval k_interval(const KForecast& f, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ValidationError("confidence level must lie strictly between 0 and 1");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  KInterval band;
  band.lo.reserve(f.khat.size());
  band.hi.reserve(f.khat.size());
  for (std::size_t h = 0; h < f.khat.size(); ++h) {
    band.lo.push_back(f.khat[h] - z * f.se[h]);
    band.hi.push_back(f.khat[h] + z * f.se[h]);
  }
  return band;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("quantile argument must lie strictly between 0 and 1");
  }
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double dd[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
  }

  const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = err * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace mortkit
