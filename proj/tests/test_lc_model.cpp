#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "mortkit/errors.hpp"
#include "mortkit/lc_model.hpp"
#include "reference_values.hpp"
#include "test_helpers.hpp"

using namespace mortkit;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[0].size(); ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

/// Synthetic exactly-rank-1 surface: ln m = a_x + b_x kappa_t.
MortalitySurface rank1_surface() {
  const AgeGrid grid = AgeGrid::from_labels({"0", "1-4", "5+"});
  const std::vector<std::string> periods = {"p1", "p2", "p3", "p4"};
  const std::vector<double> a = {-3.0, -4.0, -5.0};
  const std::vector<double> b = {0.5, 0.3, 0.2};
  const std::vector<double> kappa = {2.0, 1.0, -1.0, -2.0};
  std::vector<double> values;
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t t = 0; t < kappa.size(); ++t) {
      values.push_back(std::exp(a[x] + b[x] * kappa[t]));
    }
  }
  return MortalitySurface(grid, periods, values, false);
}

}  // namespace

TEST_CASE("alpha is the time average of the log rates") {
  SUBCASE("constant row is exact") {
    const AgeGrid grid = AgeGrid::from_labels({"0", "1+"});
    const std::vector<double> values = {0.02, 0.02, 0.02, 0.3, 0.3, 0.3};
    const MortalitySurface m(grid, {"a", "b", "c"}, values, false);
    const auto alpha = estimate_alpha(m);
    CHECK(alpha[0] == doctest::Approx(std::log(0.02)).epsilon(1e-15));
    CHECK(alpha[1] == doctest::Approx(std::log(0.3)).epsilon(1e-15));
  }
  SUBCASE("fixture rows match the published estimates") {
    const auto alpha_f = estimate_alpha(testutil::observed_m("female"));
    CHECK(std::abs(alpha_f[4] - -6.5770) < 0.005);  // 15-19
    const auto alpha_m = estimate_alpha(testutil::observed_m("male"));
    CHECK(std::abs(alpha_m[9] - -5.1991) < 0.005);  // 40-44
  }
  SUBCASE("needs at least two periods") {
    const AgeGrid grid = AgeGrid::from_labels({"0", "1+"});
    const MortalitySurface m(grid, {"only"}, {0.1, 0.2}, false);
    CHECK_THROWS_AS(estimate_alpha(m), ValidationError);
  }
}

TEST_CASE("centering zeroes every row sum") {
  const MortalitySurface m = testutil::observed_m("female");
  const Matrix centered = center_log_surface(m, estimate_alpha(m));
  for (std::size_t x = 0; x < centered.rows; ++x) {
    double s = 0.0;
    for (std::size_t t = 0; t < centered.cols; ++t) s += centered.at(x, t);
    CHECK(std::abs(s) < 1e-10);
  }
}

TEST_CASE("centering a rank-1 surface recovers the outer product") {
  const MortalitySurface m = rank1_surface();
  const Matrix centered = center_log_surface(m, estimate_alpha(m));
  const std::vector<double> b = {0.5, 0.3, 0.2};
  const std::vector<double> kappa = {2.0, 1.0, -1.0, -2.0};
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t t = 0; t < 4; ++t) {
      CHECK(centered.at(x, t) == doctest::Approx(b[x] * kappa[t]).epsilon(1e-12));
    }
  }
}

TEST_CASE("top singular triplet") {
  SUBCASE("diagonal matrix") {
    const auto t = top_singular_triplet(from_rows({{2, 0}, {0, 1}}));
    CHECK(t.lambda == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(t.u[0]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(t.v[0]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(t.frob2 == doctest::Approx(5.0).epsilon(1e-15));
  }
  SUBCASE("all-ones matrix has the closed-form triplet") {
    const auto t = top_singular_triplet(from_rows({{1, 1}, {1, 1}}));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(t.lambda == doctest::Approx(2.0).epsilon(1e-12));
    for (double x : t.u) CHECK(x == doctest::Approx(inv_sqrt2).epsilon(1e-9));
    for (double x : t.v) CHECK(x == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  }
  SUBCASE("scaled outer product of unit vectors") {
    // 5 * u v^T with ||u|| = ||v|| = 1.
    const std::vector<double> u = {0.6, 0.8};
    const std::vector<double> v = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0)};
    Matrix m(2, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) m.at(r, c) = 5.0 * u[r] * v[c];
    }
    const auto t = top_singular_triplet(m);
    CHECK(t.lambda == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(t.lambda * t.lambda == doctest::Approx(t.frob2).epsilon(1e-12));
  }
  SUBCASE("zero matrix is degenerate") {
    CHECK_THROWS_AS(top_singular_triplet(from_rows({{0, 0}, {0, 0}})), NumericError);
  }
  SUBCASE("defining identities hold on fixture data") {
    const MortalitySurface m = testutil::observed_m("male");
    const Matrix centered = center_log_surface(m, estimate_alpha(m));
    const auto t = top_singular_triplet(centered);
    for (std::size_t r = 0; r < centered.rows; ++r) {
      double mv = 0.0;
      for (std::size_t c = 0; c < centered.cols; ++c) {
        mv += centered.at(r, c) * t.v[c];
      }
      CHECK(std::abs(mv - t.lambda * t.u[r]) < 1e-9);
    }
    for (std::size_t c = 0; c < centered.cols; ++c) {
      double mtu = 0.0;
      for (std::size_t r = 0; r < centered.rows; ++r) {
        mtu += centered.at(r, c) * t.u[r];
      }
      CHECK(std::abs(mtu - t.lambda * t.v[c]) < 1e-9);
    }
  }
  SUBCASE("deterministic across calls") {
    const MortalitySurface m = testutil::observed_m("female");
    const Matrix centered = center_log_surface(m, estimate_alpha(m));
    const auto t1 = top_singular_triplet(centered);
    const auto t2 = top_singular_triplet(centered);
    CHECK(t1.lambda == t2.lambda);
    CHECK(t1.u == t2.u);
    CHECK(t1.v == t2.v);
  }
}

TEST_CASE("factor normalization") {
  std::vector<double> beta;
  std::vector<double> k;
  const std::vector<double> u = {0.6, 0.8};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const std::vector<double> v = {inv_sqrt2, -inv_sqrt2};
  normalize_factors(1.0, u, v, beta, k);
  CHECK(beta[0] == doctest::Approx(0.6 / 1.4).epsilon(1e-14));
  CHECK(beta[1] == doctest::Approx(0.8 / 1.4).epsilon(1e-14));
  CHECK(k[0] == doctest::Approx(1.4 * inv_sqrt2).epsilon(1e-14));
  CHECK(k[1] == doctest::Approx(-1.4 * inv_sqrt2).epsilon(1e-14));
  // beta k^T reproduces lambda u v^T cell by cell.
  for (int x = 0; x < 2; ++x) {
    for (int t = 0; t < 2; ++t) {
      CHECK(beta[x] * k[t] == doctest::Approx(u[x] * v[t]).epsilon(1e-14));
    }
  }

  SUBCASE("sign fixed so the beta mass is positive") {
    std::vector<double> beta2;
    std::vector<double> k2;
    normalize_factors(1.0, {-0.6, -0.8}, {-inv_sqrt2, inv_sqrt2}, beta2, k2);
    CHECK(beta2 == std::vector<double>{beta[0], beta[1]});
    CHECK(k2[0] == doctest::Approx(k[0]).epsilon(1e-14));
  }

  SUBCASE("zero sum is unidentifiable") {
    std::vector<double> b2;
    std::vector<double> k2;
    CHECK_THROWS_AS(normalize_factors(1.0, {inv_sqrt2, -inv_sqrt2}, v, b2, k2),
                    NumericError);
  }
}

TEST_CASE("full fit on fixture data") {
  const LCParams f = fit_lc(testutil::observed_m("female"));
  const LCParams m = fit_lc(testutil::observed_m("male"));

  CHECK(std::abs(f.explained - 0.9873) < 0.002);
  CHECK(std::abs(m.explained - 0.9877) < 0.002);
  CHECK(std::abs(f.k[0] - 15.826) < 0.05);
  CHECK(std::abs(m.beta[0] - 0.0946) < 0.003);

  for (const LCParams* p : {&f, &m}) {
    CHECK(std::abs(std::accumulate(p->beta.begin(), p->beta.end(), 0.0) - 1.0) <
          1e-9);
    CHECK(std::abs(std::accumulate(p->k.begin(), p->k.end(), 0.0)) < 1e-9);
  }
}

TEST_CASE("placeholder surfaces cannot be fitted") {
  CHECK_THROWS_AS(fit_lc(q_to_m(testutil::load_q("female"))), ValidationError);
}

TEST_CASE("exact rank-1 input is fully explained") {
  const LCParams p = fit_lc(rank1_surface());
  CHECK(p.explained == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.beta[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(p.k[0] == doctest::Approx(2.0).epsilon(1e-10));
  const Matrix eps = residual_surface(rank1_surface(), p);
  for (double e : eps.data) CHECK(std::abs(e) < 1e-12);
}

TEST_CASE("fitted surface") {
  SUBCASE("zero index reduces to exp(alpha)") {
    LCParams p;
    p.grid = AgeGrid::from_labels({"0", "1+"});
    p.periods = {"a", "b"};
    p.alpha = {-2.0, -1.0};
    p.beta = {0.6, 0.4};
    p.k = {0.0, 0.0};
    const MortalitySurface m = fitted_surface(p);
    CHECK(m.at(0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(m.at(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  }
  SUBCASE("published parameters reproduce known cells") {
    const MortalitySurface f = fitted_surface(testutil::load_params("female"));
    // Oracle: direct evaluation of exp(alpha + beta k).
    CHECK(f.at(17, 0) ==
          doctest::Approx(std::exp(-1.8416 + 0.0249 * 15.826)).epsilon(1e-12));
    CHECK(f.at(17, 0) == doctest::Approx(0.2351498).epsilon(1e-5));
    const MortalitySurface m = fitted_surface(testutil::load_params("male"));
    CHECK(m.at(0, 13) ==
          doctest::Approx(std::exp(-2.6463 + 0.0946 * -11.853)).epsilon(1e-12));
    CHECK(m.at(0, 13) == doctest::Approx(0.0231076).epsilon(1e-4));
  }
}

TEST_CASE("residual identities") {
  const MortalitySurface m = testutil::observed_m("female");
  const LCParams p = fit_lc(m);
  const Matrix eps = residual_surface(m, p);

  double ss = 0.0;
  for (double e : eps.data) ss += e * e;
  CHECK(ss == doctest::Approx(p.frob2 - p.lambda1 * p.lambda1).epsilon(1e-8));
  CHECK(ss / p.frob2 == doctest::Approx(1.0 - 0.9873).epsilon(0.2));

  // Row sums stay zero: centering is preserved by the rank-1 removal.
  for (std::size_t x = 0; x < eps.rows; ++x) {
    double s = 0.0;
    for (std::size_t t = 0; t < eps.cols; ++t) s += eps.at(x, t);
    CHECK(std::abs(s) < 1e-9);
  }
}

TEST_CASE("fitted rates are invariant under factor rescaling") {
  const LCParams p = fit_lc(testutil::observed_m("male"));
  for (double c : {2.5, -1.0, 0.1}) {
    LCParams scaled = p;
    for (double& b : scaled.beta) b *= c;
    for (double& k : scaled.k) k /= c;
    const MortalitySurface a = fitted_surface(p);
    const MortalitySurface b = fitted_surface(scaled);
    for (std::size_t i = 0; i < a.values().size(); ++i) {
      CHECK(b.values()[i] == doctest::Approx(a.values()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("rank-1 fit beats random rank-1 directions on small grids") {
  std::mt19937 rng(20240815u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m(3, 3);
    for (std::size_t r = 0; r < 3; ++r) {
      double mean = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        m.at(r, c) = gauss(rng);
        mean += m.at(r, c);
      }
      mean /= 3.0;
      for (std::size_t c = 0; c < 3; ++c) m.at(r, c) -= mean;  // center rows
    }
    const auto t = top_singular_triplet(m);
    const double fit_err = t.frob2 - t.lambda * t.lambda;

    for (int cand = 0; cand < 1000; ++cand) {
      std::vector<double> u(3);
      std::vector<double> v(3);
      double nu = 0.0;
      double nv = 0.0;
      for (int i = 0; i < 3; ++i) {
        u[i] = gauss(rng);
        v[i] = gauss(rng);
        nu += u[i] * u[i];
        nv += v[i] * v[i];
      }
      nu = std::sqrt(nu);
      nv = std::sqrt(nv);
      double proj = 0.0;  // optimal scale for fixed directions is u^T M v
      for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
          proj += (u[r] / nu) * m.at(r, c) * (v[c] / nv);
        }
      }
      const double cand_err = t.frob2 - proj * proj;
      CHECK(fit_err <= cand_err + 1e-12);
    }
  }
}
