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

#ifndef GLASSBOX_SHAP_HPP
#define GLASSBOX_SHAP_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "glassbox/frame.hpp"
#include "glassbox/gbdt.hpp"

namespace glassbox {

// Cooperative game with players 0..players-1; value takes a subset bitmask.
struct CoalitionGame {
  int players = 0;
  std::function<double(uint32_t)> value;
};

// Exact enumeration of the Shapley value: the average additional value the
// player brings to a coalition, weighted over all orderings. Guarded to
// players <= 20; larger games belong to tree_shap.
double exact_shapley(const CoalitionGame& game, int player);

// Path-dependent expectation of the ensemble margin: features in the subset
// follow the row, the rest flow down splits in proportion to node covers.
// This is the value function the exact oracle and tree_shap agree on.
double tree_value_function(const Ensemble& ensemble, std::span<const double> row,
                           uint32_t subset_mask, int class_id = 0);

// Per-row attributions in margin space; multiclass models carry one base and
// one phi vector per class. base + sum(phi) reproduces the margin (local
// accuracy) to ~1e-12 relative.
struct Explanation {
  std::string row_id;
  std::vector<double> base;               // per class
  std::vector<double> margin;             // per class model output
  std::vector<std::vector<double>> phi;   // [class][feature]

  int classes() const { return static_cast<int>(base.size()); }
};

Explanation tree_shap(const Ensemble& ensemble, std::span<const double> row);

std::vector<Explanation> explain_frame(const Ensemble& ensemble, const Frame& frame);

// Symmetric per-row interaction matrix per class: off-diagonals hold the
// halved pairwise interaction, diagonals the main effect; each row of the
// matrix sums back to that feature's phi.
struct InteractionValues {
  int features = 0;
  std::vector<std::vector<double>> phi;  // [class][i * features + j]

  double at(int class_id, int i, int j) const {
    return phi[class_id][static_cast<size_t>(i) * features + j];
  }
};

InteractionValues shap_interactions(const Ensemble& ensemble, std::span<const double> row);

// Interventional partial dependence of the class margin over the background
// sample, evaluated at the given single or pair values. Matches the naive
// substitute-and-predict computation.
std::vector<double> partial_dependence(const Ensemble& ensemble, int class_id,
                                       std::span<const int> features,
                                       const std::vector<std::array<double, 2>>& values,
                                       const Frame& background);

// Friedman's H for the feature pair over a sample: the share of joint
// partial-dependence variance not explained additively.
double h_statistic(const Ensemble& ensemble, int j, int k, const Frame& sample,
                   int class_id = 0, bool* degenerate = nullptr);

struct ImportanceEntry {
  std::string feature;
  int feature_index = 0;
  double mean_abs_shap = 0.0;
};

// Mean |phi| ranking, descending; class_id -1 averages across classes.
// All-zero columns rank last with ties broken by feature order.
std::vector<ImportanceEntry> importance(std::span<const Explanation> explanations,
                                        const Ensemble& ensemble, int class_id = -1);

struct BeeswarmRecord {
  std::string row_id;
  int feature = 0;
  double shap = 0.0;
  double raw = 0.0;
  double color = 0.0;  // per-feature min-max of raw over the sample
  bool missing = false;
};

std::vector<BeeswarmRecord> value_plot_data(std::span<const Explanation> explanations,
                                            const Frame& frame, const Ensemble& ensemble,
                                            int class_id = 0);

struct DependenceData {
  std::string feature;
  std::string partner;
  double h = 0.0;
  bool h_degenerate = false;
  struct Record {
    std::string row_id;
    double x = 0.0;
    double shap = 0.0;
    double partner_value = 0.0;
    bool partner_missing = false;
  };
  std::vector<Record> records;
};

// Scatter of phi vs raw value, colored by the feature's strongest H partner
// (searched over a seeded subsample capped at h_sample_cap rows).
DependenceData dependence_data(const Ensemble& ensemble,
                               std::span<const Explanation> explanations, const Frame& frame,
                               const std::string& feature, int class_id = 0,
                               int64_t h_sample_cap = 500, uint64_t seed = 0);

struct DecisionPath {
  double base = 0.0;
  double output = 0.0;
  struct Step {
    std::string feature;
    double raw = 0.0;
    double shap = 0.0;
    double cumulative = 0.0;
  };
  std::vector<Step> steps;  // ascending |phi|, cumulative ends at output
};

DecisionPath decision_plot_data(const Explanation& explanation, std::span<const double> row,
                                const Ensemble& ensemble, int class_id = 0);

}  // namespace glassbox

#endif  // GLASSBOX_SHAP_HPP
