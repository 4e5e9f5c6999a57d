#include "mortkit/lc_model.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mortkit/csv.hpp"
#include "mortkit/errors.hpp"

namespace mortkit {

namespace {

constexpr double kLambdaTol = 1e-12;
constexpr int kMaxSweeps = 10000;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void mat_vec(const Matrix& m, std::span<const double> v, std::vector<double>& out) {
  out.assign(m.rows, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) s += m.at(r, c) * v[c];
    out[r] = s;
  }
}

void mat_t_vec(const Matrix& m, std::span<const double> u, std::vector<double>& out) {
  out.assign(m.cols, 0.0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double ur = u[r];
    for (std::size_t c = 0; c < m.cols; ++c) out[c] += m.at(r, c) * ur;
  }
}

double residual_inf(const Matrix& m, double lambda, std::span<const double> u,
                    std::span<const double> v) {
  std::vector<double> mv;
  mat_vec(m, v, mv);
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows; ++r) {
    worst = std::max(worst, std::abs(mv[r] - lambda * u[r]));
  }
  std::vector<double> mtu;
  mat_t_vec(m, u, mtu);
  for (std::size_t c = 0; c < m.cols; ++c) {
    worst = std::max(worst, std::abs(mtu[c] - lambda * v[c]));
  }
  return worst;
}

}  // namespace

std::vector<double> estimate_alpha(const MortalitySurface& m) {
  if (m.n_periods() < 2) {
    throw ValidationError("at least two periods are needed to estimate alpha");
  }
  std::vector<double> alpha(m.n_ages());
  for (std::size_t x = 0; x < m.n_ages(); ++x) {
    double s = 0.0;
    for (std::size_t t = 0; t < m.n_periods(); ++t) s += std::log(m.at(x, t));
    alpha[x] = s / static_cast<double>(m.n_periods());
  }
  return alpha;
}

Matrix center_log_surface(const MortalitySurface& m, std::span<const double> alpha) {
  if (alpha.size() != m.n_ages()) {
    throw ValidationError("alpha column does not match the surface shape");
  }
  Matrix out(m.n_ages(), m.n_periods());
  for (std::size_t x = 0; x < m.n_ages(); ++x) {
    for (std::size_t t = 0; t < m.n_periods(); ++t) {
      out.at(x, t) = std::log(m.at(x, t)) - alpha[x];
    }
  }
  return out;
}

SingularTriplet top_singular_triplet(const Matrix& m) {
  if (m.rows == 0 || m.cols == 0) {
    throw NumericError("singular decomposition of an empty matrix");
  }
  double frob2 = 0.0;
  for (double x : m.data) frob2 += x * x;
  if (frob2 == 0.0) {
    throw NumericError("degenerate input: zero matrix has no singular direction");
  }

  // Uniform positive start on the row side. A centered grid annihilates the
  // uniform column vector, so the column side is unusable as a start.
  std::vector<double> u(m.rows, 1.0 / std::sqrt(static_cast<double>(m.rows)));
  std::vector<double> v;
  std::size_t fallback = 0;
  double lambda = 0.0;
  double lambda_prev = -1.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    mat_t_vec(m, u, v);
    double nv = norm2(v);
    while (nv == 0.0) {
      // Start vector happened to lie in the null space; restart from a
      // canonical basis vector (some row of a nonzero matrix is nonzero).
      if (fallback >= m.rows) {
        throw NumericError("no usable start vector for the power iteration");
      }
      u.assign(m.rows, 0.0);
      u[fallback++] = 1.0;
      mat_t_vec(m, u, v);
      nv = norm2(v);
    }
    for (double& x : v) x /= nv;

    std::vector<double> z;
    mat_vec(m, v, z);
    lambda = norm2(z);
    if (lambda == 0.0) {
      throw NumericError("power iteration collapsed to the null space");
    }
    u = std::move(z);
    for (double& x : u) x /= lambda;

    if (std::abs(lambda - lambda_prev) < kLambdaTol &&
        residual_inf(m, lambda, u, v) <= 1e-10 * std::max(1.0, lambda)) {
      return SingularTriplet{lambda, std::move(u), std::move(v), frob2};
    }
    lambda_prev = lambda;
  }
  throw NumericError(
      "power iteration did not converge after " + std::to_string(kMaxSweeps) +
      " sweeps; residual " +
      csv::fixed(residual_inf(m, lambda, u, v), 12));
}

void normalize_factors(double lambda, std::vector<double> u, std::vector<double> v,
                       std::vector<double>& beta, std::vector<double>& k) {
  double su = std::accumulate(u.begin(), u.end(), 0.0);
  if (su == 0.0) {
    throw NumericError("sum of the left singular vector is zero; "
                       "the normalization sum(beta) = 1 is unidentifiable");
  }
  if (su < 0.0) {
    for (double& x : u) x = -x;
    for (double& x : v) x = -x;
    su = -su;
  }
  beta.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) beta[i] = u[i] / su;
  k.resize(v.size());
  const double scale = lambda * su;
  for (std::size_t j = 0; j < v.size(); ++j) k[j] = scale * v[j];
}

LCParams fit_lc(const MortalitySurface& m) {
  if (m.open_placeholder()) {
    throw ValidationError("open-group placeholder not imputed");
  }
  LCParams p;
  p.grid = m.grid();
  p.periods = m.periods();
  p.alpha = estimate_alpha(m);
  const Matrix centered = center_log_surface(m, p.alpha);
  SingularTriplet triplet = top_singular_triplet(centered);
  normalize_factors(triplet.lambda, std::move(triplet.u), std::move(triplet.v),
                    p.beta, p.k);
  p.lambda1 = triplet.lambda;
  p.frob2 = triplet.frob2;
  p.explained = std::min(1.0, triplet.lambda * triplet.lambda / triplet.frob2);

  // Row centering makes k sum to zero by itself; a violation signals a
  // broken decomposition, not something to repair quietly.
  const double ksum = std::accumulate(p.k.begin(), p.k.end(), 0.0);
  if (std::abs(ksum) > 1e-9 * std::max(1.0, p.lambda1)) {
    throw NumericError("mortality index does not sum to zero (" +
                       csv::fixed(ksum, 12) + ")");
  }
  return p;
}

MortalitySurface fitted_surface(const LCParams& p) {
  std::vector<double> values;
  values.reserve(p.alpha.size() * p.k.size());
  for (std::size_t x = 0; x < p.alpha.size(); ++x) {
    for (std::size_t t = 0; t < p.k.size(); ++t) {
      values.push_back(std::exp(p.alpha[x] + p.beta[x] * p.k[t]));
    }
  }
  return MortalitySurface(p.grid, p.periods, std::move(values), false);
}

Matrix residual_surface(const MortalitySurface& m, const LCParams& p) {
  if (m.n_ages() != p.alpha.size() || m.n_periods() != p.k.size()) {
    throw ValidationError("surface and parameters have different shapes");
  }
  Matrix eps(m.n_ages(), m.n_periods());
  for (std::size_t x = 0; x < m.n_ages(); ++x) {
    for (std::size_t t = 0; t < m.n_periods(); ++t) {
      eps.at(x, t) = std::log(m.at(x, t)) - p.alpha[x] - p.beta[x] * p.k[t];
    }
  }
  return eps;
}

std::string serialize_params(const LCParams& p, int decimals) {
  std::string out = "age,alpha,beta\n";
  for (std::size_t x = 0; x < p.alpha.size(); ++x) {
    out += p.grid[x].label;
    out += ',';
    out += csv::fixed(p.alpha[x], decimals);
    out += ',';
    out += csv::fixed(p.beta[x], decimals);
    out += '\n';
  }
  out += "\nperiod,k\n";
  for (std::size_t t = 0; t < p.k.size(); ++t) {
    out += p.periods[t];
    out += ',';
    out += csv::fixed(p.k[t], decimals);
    out += '\n';
  }
  return out;
}

LCParams parse_params(std::string_view text, double infant_separation) {
  const std::vector<std::string> lines = csv::split_lines(text);
  std::vector<std::string> ages;
  std::vector<std::string> periods;
  LCParams p;
  enum class Section { kNone, kAlphaBeta, kIndex } section = Section::kNone;
  for (const std::string& line : lines) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = csv::split_line(line);
    if (fields[0] == "age") {
      section = Section::kAlphaBeta;
      continue;
    }
    if (fields[0] == "period") {
      section = Section::kIndex;
      continue;
    }
    if (section == Section::kAlphaBeta) {
      double a = 0.0;
      double b = 0.0;
      if (fields.size() != 3 || !csv::parse_number(fields[1], a) ||
          !csv::parse_number(fields[2], b)) {
        throw ValidationError("bad parameter row '" + line + "'");
      }
      ages.push_back(fields[0]);
      p.alpha.push_back(a);
      p.beta.push_back(b);
    } else if (section == Section::kIndex) {
      double k = 0.0;
      if (fields.size() != 2 || !csv::parse_number(fields[1], k)) {
        throw ValidationError("bad index row '" + line + "'");
      }
      periods.push_back(fields[0]);
      p.k.push_back(k);
    } else {
      throw ValidationError("parameter file must start with an age,alpha,beta header");
    }
  }
  if (ages.empty() || periods.empty()) {
    throw ValidationError("parameter file is missing the age or period section");
  }
  p.grid = AgeGrid::from_labels(ages, infant_separation);
  p.periods = std::move(periods);
  return p;
}

LCParams load_params_csv(const std::filesystem::path& path,
                         double infant_separation) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open parameter file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_params(buf.str(), infant_separation);
  } catch (const ValidationError& e) {
    throw ValidationError(path.filename().string() + ": " + e.what());
  }
}

}  // namespace mortkit
