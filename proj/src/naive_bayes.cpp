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

#include "glassbox/naive_bayes.hpp"

#include <algorithm>
#include <cmath>

namespace glassbox {

namespace {
constexpr double kVarFloor = 1e-9;
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
}  // namespace

NBModel fit_nb(const Frame& frame, double alpha) {
  if (!frame.classification || frame.num_classes < 2) {
    throw ValidationError("naive bayes needs a classification frame");
  }
  if (alpha <= 0.0) throw ValidationError("naive bayes smoothing alpha must be positive");
  if (frame.rows() == 0) throw ValidationError("cannot fit on an empty frame");

  const int K = frame.num_classes;
  NBModel m;
  m.alpha = alpha;
  m.num_classes = K;
  m.schema_hash = frame.schema_hash();

  std::vector<int64_t> class_count(K, 0);
  for (double t : frame.target) ++class_count[static_cast<int>(t)];
  m.log_priors.resize(K);
  for (int k = 0; k < K; ++k) {
    // Smoothed priors keep log-space finite when a class is absent.
    m.log_priors[k] = std::log((class_count[k] + alpha) /
                               (frame.rows() + alpha * K));
  }

  for (int c = 0; c < frame.cols(); ++c) {
    m.feature_cols.push_back(c);
    const auto& f = frame.schema[c];
    if (f.kind == FeatureKind::kCategorical) {
      const int L = static_cast<int>(f.levels.size());
      NBModel::CatFeature cf;
      cf.log_prob.assign(K, std::vector<double>(L + 1, 0.0));
      std::vector<std::vector<int64_t>> counts(K, std::vector<int64_t>(L + 1, 0));
      for (int64_t r = 0; r < frame.rows(); ++r) {
        int k = static_cast<int>(frame.target[r]);
        double v = frame.at(r, c);
        int lev = v < 0 ? L : static_cast<int>(v);  // -1 missing is its own slot
        ++counts[k][lev];
      }
      // Slot L holds both missing (-1) and unseen levels, so every value has
      // a strictly positive smoothed probability and the L+1 slots normalize.
      for (int k = 0; k < K; ++k) {
        double denom = static_cast<double>(class_count[k]) + alpha * (L + 1);
        for (int lev = 0; lev <= L; ++lev) {
          cf.log_prob[k][lev] = std::log((counts[k][lev] + alpha) / denom);
        }
      }
      m.cat_slot.push_back(static_cast<int>(m.cats.size()));
      m.num_slot.push_back(-1);
      m.cats.push_back(std::move(cf));
    } else {
      NBModel::NumFeature nf;
      nf.mean.assign(K, 0.0);
      nf.var.assign(K, 0.0);
      std::vector<int64_t> n(K, 0);
      for (int64_t r = 0; r < frame.rows(); ++r) {
        int k = static_cast<int>(frame.target[r]);
        nf.mean[k] += frame.at(r, c);
        ++n[k];
      }
      for (int k = 0; k < K; ++k) {
        if (n[k] > 0) nf.mean[k] /= static_cast<double>(n[k]);
      }
      for (int64_t r = 0; r < frame.rows(); ++r) {
        int k = static_cast<int>(frame.target[r]);
        double v = frame.at(r, c) - nf.mean[k];
        nf.var[k] += v * v;
      }
      for (int k = 0; k < K; ++k) {
        nf.var[k] = n[k] > 0 ? std::max(kVarFloor, nf.var[k] / static_cast<double>(n[k]))
                             : 1.0;
      }
      m.cat_slot.push_back(-1);
      m.num_slot.push_back(static_cast<int>(m.nums.size()));
      m.nums.push_back(std::move(nf));
    }
  }
  return m;
}

std::vector<double> NBModel::predict_proba(std::span<const double> raw_row) const {
  const int K = num_classes;
  std::vector<double> logp = log_priors;
  for (size_t fi = 0; fi < feature_cols.size(); ++fi) {
    const int c = feature_cols[fi];
    const double v = raw_row[c];
    if (cat_slot[fi] >= 0) {
      const auto& cf = cats[cat_slot[fi]];
      const int L = static_cast<int>(cf.log_prob[0].size()) - 1;
      int lev;
      if (v < 0) {
        lev = L;  // missing slot
      } else if (v < L) {
        lev = static_cast<int>(v);
      } else {
        lev = L;  // unseen level -> smoothing floor slot
      }
      for (int k = 0; k < K; ++k) logp[k] += cf.log_prob[k][lev];
    } else {
      const auto& nf = nums[num_slot[fi]];
      for (int k = 0; k < K; ++k) {
        double d = v - nf.mean[k];
        logp[k] += -0.5 * (kLogTwoPi + std::log(nf.var[k]) + d * d / nf.var[k]);
      }
    }
  }
  double mx = *std::max_element(logp.begin(), logp.end());
  double total = 0.0;
  std::vector<double> out(K);
  for (int k = 0; k < K; ++k) {
    out[k] = std::exp(logp[k] - mx);
    total += out[k];
  }
  for (double& p : out) p /= total;
  return out;
}

double NBModel::predict(std::span<const double> raw_row) const {
  auto p = predict_proba(raw_row);
  return static_cast<double>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<double> NBModel::predict_frame(const Frame& frame) const {
  if (frame.schema_hash() != schema_hash) {
    throw ValidationError("naive bayes model schema hash mismatch");
  }
  std::vector<double> out(frame.rows());
  for (int64_t r = 0; r < frame.rows(); ++r) out[r] = predict(frame.row(r));
  return out;
}

}  // namespace glassbox
