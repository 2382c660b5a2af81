// Copyright 2026 The Glassbox Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glassbox/linear.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <doctest.h>

#include "glassbox/model_select.hpp"
#include "test_util.hpp"

using namespace glassbox;

namespace {

// Random regression frame with standardized columns (zero mean, unit
// population variance), the setting the analytic lasso threshold assumes.
Frame standardized_frame(Rng& rng, int64_t n, int p, std::vector<double>* beta_out = nullptr) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(p));
  std::vector<double> mean(p, 0.0);
  for (int64_t r = 0; r < n; ++r) {
    for (int c = 0; c < p; ++c) {
      rows[r][c] = rng.normal();
      mean[c] += rows[r][c];
    }
  }
  for (int c = 0; c < p; ++c) {
    mean[c] /= static_cast<double>(n);
    double var = 0.0;
    for (int64_t r = 0; r < n; ++r) {
      rows[r][c] -= mean[c];
      var += rows[r][c] * rows[r][c];
    }
    var /= static_cast<double>(n);
    double s = std::sqrt(var);
    for (int64_t r = 0; r < n; ++r) rows[r][c] /= s;
  }
  std::vector<double> beta(p);
  for (int c = 0; c < p; ++c) beta[c] = rng.uniform(-2.0, 2.0);
  std::vector<double> y(n, 0.0);
  for (int64_t r = 0; r < n; ++r) {
    for (int c = 0; c < p; ++c) y[r] += rows[r][c] * beta[c];
    y[r] += 0.3 * rng.normal();
  }
  if (beta_out != nullptr) *beta_out = beta;
  return testutil::numeric_frame(rows, y);
}

// Independent least-squares oracle on centered data via Eigen.
std::vector<double> ols_oracle(const Frame& f, double* intercept) {
  const int64_t n = f.rows();
  const int p = f.cols();
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (int64_t r = 0; r < n; ++r) {
    for (int c = 0; c < p; ++c) X(r, c) = f.at(r, c);
    y(r) = f.target[r];
  }
  Eigen::RowVectorXd xm = X.colwise().mean();
  double ym = y.mean();
  Eigen::MatrixXd Xc = X.rowwise() - xm;
  Eigen::VectorXd yc = y.array() - ym;
  Eigen::VectorXd beta = Xc.colPivHouseholderQr().solve(yc);
  *intercept = ym - xm * beta;
  return {beta.data(), beta.data() + p};
}

}  // namespace

TEST_CASE("ridge: exact fit y = 2x at lambda 0") {
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  for (int i = 0; i < 10; ++i) {
    rows.push_back({static_cast<double>(i)});
    y.push_back(2.0 * i);
  }
  Frame f = testutil::numeric_frame(rows, y);
  LinearModel m = fit_ridge(f, 0.0);
  CHECK(m.coefficients[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(m.intercept == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("ridge: huge lambda shrinks coefficients to zero, intercept to mean") {
  Rng rng(31);
  Frame f = standardized_frame(rng, 50, 4);
  LinearModel m = fit_ridge(f, 1e12);
  for (double b : m.coefficients) CHECK(std::fabs(b) < 1e-6);
  double mean = 0.0;
  for (double t : f.target) mean += t;
  mean /= static_cast<double>(f.rows());
  CHECK(m.intercept == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("ridge: random 20x5 system matches the direct normal-equation solve") {
  Rng rng(32);
  Frame f = standardized_frame(rng, 20, 5);
  const double lambda = 0.5;
  LinearModel m = fit_ridge(f, lambda);

  Eigen::MatrixXd X(20, 5);
  Eigen::VectorXd y(20);
  for (int64_t r = 0; r < 20; ++r) {
    for (int c = 0; c < 5; ++c) X(r, c) = f.at(r, c);
    y(r) = f.target[r];
  }
  Eigen::RowVectorXd xm = X.colwise().mean();
  Eigen::MatrixXd Xc = X.rowwise() - xm;
  Eigen::VectorXd yc = y.array() - y.mean();
  Eigen::MatrixXd gram = Xc.transpose() * Xc + lambda * Eigen::MatrixXd::Identity(5, 5);
  Eigen::VectorXd beta = gram.fullPivLu().solve(Xc.transpose() * yc);
  for (int c = 0; c < 5; ++c) {
    CHECK(m.coefficients[c] == doctest::Approx(beta(c)).epsilon(1e-9));
  }
}

TEST_CASE("ridge: singular system at lambda 0 returns minimum norm with a diagnostic") {
  // duplicated column makes the system rank-deficient
  std::vector<std::vector<double>> rows;
  std::vector<double> y;
  Rng rng(33);
  for (int i = 0; i < 12; ++i) {
    double v = rng.normal();
    rows.push_back({v, v});
    y.push_back(3.0 * v + 0.01 * rng.normal());
  }
  Frame f = testutil::numeric_frame(rows, y);
  Diagnostics diags;
  LinearModel m = fit_ridge(f, 0.0, &diags);
  CHECK(!diags.empty());
  // minimum-norm solution splits the weight across the clones
  CHECK(m.coefficients[0] == doctest::Approx(m.coefficients[1]).epsilon(1e-6));
}

TEST_CASE("ridge: coefficient norm shrinks monotonically in lambda") {
  Rng rng(34);
  Frame f = standardized_frame(rng, 60, 5);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    LinearModel m = fit_ridge(f, lambda);
    double norm = 0.0;
    for (double b : m.coefficients) norm += b * b;
    CHECK(norm <= prev + 1e-12);
    prev = norm;
  }
}

TEST_CASE("lasso: lambda 0 matches least squares") {
  Rng rng(35);
  Frame f = standardized_frame(rng, 80, 5);
  LinearModel m = fit_lasso(f, 0.0, 1e-10, 5000);
  double intercept = 0.0;
  auto beta = ols_oracle(f, &intercept);
  for (int c = 0; c < 5; ++c) {
    CHECK(m.coefficients[c] == doctest::Approx(beta[c]).epsilon(1e-6));
  }
  CHECK(m.intercept == doctest::Approx(intercept).epsilon(1e-6));
}

TEST_CASE("lasso: lambda past the analytic threshold zeroes every coefficient") {
  Rng rng(36);
  Frame f = standardized_frame(rng, 100, 6);
  // lambda_max = max_j |x_j' y| / n on standardized, centered data
  double ymean = 0.0;
  for (double t : f.target) ymean += t;
  ymean /= static_cast<double>(f.rows());
  double lambda_max = 0.0;
  for (int c = 0; c < f.cols(); ++c) {
    double dot = 0.0;
    for (int64_t r = 0; r < f.rows(); ++r) dot += f.at(r, c) * (f.target[r] - ymean);
    lambda_max = std::max(lambda_max, std::fabs(dot) / static_cast<double>(f.rows()));
  }
  LinearModel m = fit_lasso(f, lambda_max * 1.0000001);
  for (double b : m.coefficients) CHECK(b == 0.0);
}

TEST_CASE("lasso: univariate solution equals the soft-threshold closed form") {
  Rng rng(37);
  const int64_t n = 50;
  std::vector<std::vector<double>> rows(n, std::vector<double>(1));
  std::vector<double> x(n);
  for (int64_t i = 0; i < n; ++i) x[i] = rng.normal();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double& v : x) {
    v -= mean;
    var += v * v;
  }
  var /= n;
  for (double& v : x) v /= std::sqrt(var);
  std::vector<double> y(n);
  for (int64_t i = 0; i < n; ++i) {
    rows[i][0] = x[i];
    y[i] = 1.7 * x[i] + 0.2 * rng.normal();
  }
  Frame f = testutil::numeric_frame(rows, y);

  const double lambda = 0.4;
  LinearModel m = fit_lasso(f, lambda);
  double ymean = 0.0;
  for (double t : y) ymean += t;
  ymean /= n;
  double rho = 0.0;
  for (int64_t i = 0; i < n; ++i) rho += x[i] * (y[i] - ymean);
  rho /= n;
  double expected = rho > lambda ? rho - lambda : (rho < -lambda ? rho + lambda : 0.0);
  CHECK(m.coefficients[0] == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("lasso: objective is non-increasing across coordinate-descent sweeps") {
  Rng rng(38);
  Frame f = standardized_frame(rng, 60, 5);
  const double lambda = 0.2;
  double prev = std::numeric_limits<double>::infinity();
  for (int sweeps = 1; sweeps <= 8; ++sweeps) {
    LinearModel m = fit_lasso(f, lambda, 0.0, sweeps);
    double obj = linear_objective(m, f);
    CHECK(obj <= prev + 1e-10);
    prev = obj;
  }
}

TEST_CASE("lasso: hitting max_iter clears the converged flag") {
  Rng rng(39);
  Frame f = standardized_frame(rng, 60, 5);
  LinearModel m = fit_lasso(f, 0.0, 1e-14, 1);
  CHECK_FALSE(m.converged);
}

TEST_CASE("linear models one-hot expand categorical features") {
  Frame f;
  f.schema.push_back({"num", FeatureKind::kNumeric, {}, -1.0});
  f.schema.push_back({"cat", FeatureKind::kCategorical, {"a", "b", "c"}, -1.0});
  // target depends on the level
  std::vector<std::vector<double>> rows = {{1, 0}, {2, 1}, {3, 2}, {4, 0}, {5, 1}, {6, 2}};
  std::vector<double> y = {1, 4, 9, 1.5, 4.2, 9.3};
  for (size_t r = 0; r < rows.size(); ++r) {
    f.row_ids.push_back("r" + std::to_string(r));
    f.data.insert(f.data.end(), rows[r].begin(), rows[r].end());
    f.target.push_back(y[r]);
  }
  LinearModel m = fit_ridge(f, 0.01);
  CHECK(m.coefficients.size() == 4);  // 1 numeric + 3 indicators
  CHECK(m.column_names[1] == "cat=a");
}

TEST_CASE("cross-validated lambda returns a grid value deterministically") {
  Rng rng(40);
  Frame f = standardized_frame(rng, 120, 4);
  double a = cv_select_lambda(f, '2', default_lambda_grid(), 5, 7);
  double b = cv_select_lambda(f, '2', default_lambda_grid(), 5, 7);
  CHECK(a == b);
  const auto& grid = default_lambda_grid();
  CHECK(std::find(grid.begin(), grid.end(), a) != grid.end());

  // heavy noise and an over-specified grid should avoid the largest penalty
  double c = cv_select_lambda(f, '1', default_lambda_grid(), 5, 7);
  CHECK(std::find(grid.begin(), grid.end(), c) != grid.end());
}
