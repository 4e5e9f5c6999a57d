#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mortkit/age_grid.hpp"
#include "mortkit/surface.hpp"

namespace mortkit {

/// Lee-Carter parameters under the identification constraints
/// sum(beta) = 1 and sum(k) = 0, plus rank-1 diagnostics.
struct LCParams {
  AgeGrid grid;
  std::vector<std::string> periods;
  std::vector<double> alpha;  // mean log-rate per age band
  std::vector<double> beta;   // age sensitivity to the index
  std::vector<double> k;      // mortality index per period
  double lambda1 = 0.0;       // top singular value of the centered grid
  double frob2 = 0.0;         // squared Frobenius norm of the centered grid
  double explained = 0.0;     // lambda1^2 / frob2
};

/// Top singular triplet of a matrix, ||u|| = ||v|| = 1, lambda >= 0.
struct SingularTriplet {
  double lambda = 0.0;
  std::vector<double> u;  // left singular vector (rows)
  std::vector<double> v;  // right singular vector (columns)
  double frob2 = 0.0;     // squared Frobenius norm of the input
};

/// Per-row time average of log rates.
std::vector<double> estimate_alpha(const MortalitySurface& m);

/// M[x][t] = ln m[x][t] - alpha[x]; every row of the result sums to zero.
Matrix center_log_surface(const MortalitySurface& m, std::span<const double> alpha);

/// Deterministic alternating power iteration for the dominant singular
/// triplet. Starts from a uniform positive left vector (the rows of a
/// centered grid sum to zero, so a uniform right start would be annihilated),
/// stops when successive lambda estimates agree to 1e-12 and the defining
/// identities M v = lambda u, M^T u = lambda v hold; caps at 10000 sweeps.
/// Throws NumericError on a zero matrix or non-convergence.
SingularTriplet top_singular_triplet(const Matrix& m);

/// Rescales (u, v) into (beta, k): beta = u / sum(u), k = lambda sum(u) v,
/// with the sign fixed so sum(u) > 0. beta k^T reproduces lambda u v^T
/// exactly. Throws NumericError when sum(u) is zero (unidentifiable).
void normalize_factors(double lambda, std::vector<double> u, std::vector<double> v,
                       std::vector<double>& beta, std::vector<double>& k);

/// Full estimation pipeline on an imputed surface. The returned k sums to
/// zero because the centered rows already do; this is asserted rather than
/// re-imposed.
LCParams fit_lc(const MortalitySurface& m);

/// m_hat[x][t] = exp(alpha[x] + beta[x] k[t]).
MortalitySurface fitted_surface(const LCParams& p);

/// Residuals ln m - alpha - beta k; their squared sum equals
/// frob2 - lambda1^2.
Matrix residual_surface(const MortalitySurface& m, const LCParams& p);

/// Parameter CSV: an age,alpha,beta block, a blank line, then period,k.
std::string serialize_params(const LCParams& p, int decimals = 6);
LCParams parse_params(std::string_view text,
                      double infant_separation = kDefaultInfantSeparation);
LCParams load_params_csv(const std::filesystem::path& path,
                         double infant_separation = kDefaultInfantSeparation);

}  // namespace mortkit
