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

#include <cmath>

#include <Eigen/Dense>

namespace glassbox {

namespace {

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
as_matrix(const Design& d) {
  return {d.matrix().data(), d.rows(), d.cols()};
}

}  // namespace

double LinearModel::predict(std::span<const double> raw_row, const Design& design) const {
  std::vector<double> expanded(design.cols());
  design.expand_row(raw_row, expanded.data());
  double acc = intercept;
  for (size_t j = 0; j < coefficients.size(); ++j) acc += coefficients[j] * expanded[j];
  return acc;
}

std::vector<double> LinearModel::predict_frame(const Frame& frame) const {
  if (schema_hash != 0 && frame.schema_hash() != schema_hash) {
    throw ValidationError("linear model schema hash mismatch");
  }
  Design d = Design::build(frame);
  if (static_cast<size_t>(d.cols()) != coefficients.size()) {
    throw ValidationError("linear model expects " + std::to_string(coefficients.size()) +
                          " design columns, frame expands to " + std::to_string(d.cols()));
  }
  std::vector<double> out(frame.rows());
  for (int64_t r = 0; r < frame.rows(); ++r) {
    double acc = intercept;
    for (int c = 0; c < d.cols(); ++c) acc += coefficients[c] * d.at(r, c);
    out[r] = acc;
  }
  return out;
}

LinearModel fit_ridge(const Frame& frame, double lambda, Diagnostics* diags) {
  if (lambda < 0.0) throw ValidationError("ridge lambda must be non-negative");
  if (frame.rows() == 0) throw ValidationError("cannot fit on an empty frame");
  Design d = Design::build(frame);
  auto X = as_matrix(d);
  Eigen::Map<const Eigen::VectorXd> y(frame.target.data(), frame.rows());

  const Eigen::RowVectorXd xmean = X.colwise().mean();
  const double ymean = y.mean();
  Eigen::MatrixXd Xc = X.rowwise() - xmean;
  Eigen::VectorXd yc = y.array() - ymean;

  Eigen::VectorXd beta;
  if (lambda == 0.0) {
    // Minimum-norm least squares; rank deficiency is reported, not fatal.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xc, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    beta = svd.solve(yc);
    if (svd.rank() < Xc.cols() && diags != nullptr) {
      diags->push_back({"ridge", 0,
                        "singular system at lambda=0 (rank " + std::to_string(svd.rank()) +
                            " of " + std::to_string(Xc.cols()) +
                            "); returning minimum-norm solution"});
    }
  } else {
    Eigen::MatrixXd gram = Xc.transpose() * Xc;
    gram.diagonal().array() += lambda;
    beta = gram.ldlt().solve(Xc.transpose() * yc);
  }

  LinearModel m;
  m.regularization = '2';
  m.lambda = lambda;
  m.coefficients.assign(beta.data(), beta.data() + beta.size());
  m.intercept = ymean - xmean * beta;
  m.column_names = d.names();
  m.schema_hash = frame.schema_hash();
  return m;
}

LinearModel fit_lasso(const Frame& frame, double lambda, double tol, int max_iter) {
  if (lambda < 0.0) throw ValidationError("lasso lambda must be non-negative");
  if (frame.rows() == 0) throw ValidationError("cannot fit on an empty frame");
  Design d = Design::build(frame);
  const int64_t n = d.rows();
  const int p = d.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  // Standardize columns; constant columns are frozen at zero.
  std::vector<double> mean(p, 0.0), scale(p, 1.0);
  std::vector<double> z(static_cast<size_t>(n) * p);
  for (int j = 0; j < p; ++j) {
    double mu = 0.0;
    for (int64_t i = 0; i < n; ++i) mu += d.at(i, j);
    mu *= inv_n;
    double var = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      double v = d.at(i, j) - mu;
      var += v * v;
    }
    var *= inv_n;
    mean[j] = mu;
    scale[j] = var > 0.0 ? std::sqrt(var) : 0.0;
    const double inv_s = scale[j] > 0.0 ? 1.0 / scale[j] : 0.0;
    for (int64_t i = 0; i < n; ++i) z[i * p + j] = (d.at(i, j) - mu) * inv_s;
  }
  double ymean = 0.0;
  for (int64_t i = 0; i < n; ++i) ymean += frame.target[i];
  ymean *= inv_n;

  std::vector<double> beta(p, 0.0);
  std::vector<double> resid(n);
  for (int64_t i = 0; i < n; ++i) resid[i] = frame.target[i] - ymean;

  auto soft = [](double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
  };

  bool converged = false;
  int sweeps = 0;
  for (int it = 0; it < max_iter && !converged; ++it) {
    double max_delta = 0.0;
    for (int j = 0; j < p; ++j) {
      if (scale[j] == 0.0) continue;
      double rho = 0.0;
      const double* zj = z.data() + j;
      for (int64_t i = 0; i < n; ++i) rho += zj[i * p] * resid[i];
      rho = rho * inv_n + beta[j];  // standardized columns have unit second moment
      double nb = soft(rho, lambda);
      double delta = nb - beta[j];
      if (delta != 0.0) {
        for (int64_t i = 0; i < n; ++i) resid[i] -= delta * zj[i * p];
        beta[j] = nb;
        max_delta = std::max(max_delta, std::fabs(delta));
      }
    }
    ++sweeps;
    if (max_delta < tol) converged = true;
  }

  LinearModel m;
  m.regularization = '1';
  m.lambda = lambda;
  m.converged = converged;
  m.coefficients.resize(p);
  double dot = 0.0;
  for (int j = 0; j < p; ++j) {
    m.coefficients[j] = scale[j] > 0.0 ? beta[j] / scale[j] : 0.0;
    dot += m.coefficients[j] * mean[j];
  }
  m.intercept = ymean - dot;
  m.column_names = d.names();
  m.schema_hash = frame.schema_hash();
  (void)sweeps;
  return m;
}

double linear_objective(const LinearModel& model, const Frame& frame) {
  auto pred = model.predict_frame(frame);
  double rss = 0.0;
  for (int64_t i = 0; i < frame.rows(); ++i) {
    double e = pred[i] - frame.target[i];
    rss += e * e;
  }
  const double n = static_cast<double>(frame.rows());
  if (model.regularization == '1') {
    double l1 = 0.0;
    for (double b : model.coefficients) l1 += std::fabs(b);
    return rss / (2.0 * n) + model.lambda * l1;
  }
  double l2 = 0.0;
  for (double b : model.coefficients) l2 += b * b;
  return 0.5 * rss + 0.5 * model.lambda * l2;
}

}  // namespace glassbox
