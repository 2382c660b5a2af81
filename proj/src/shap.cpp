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

#include "glassbox/shap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "glassbox/common.hpp"
#include "glassbox/design.hpp"
#include "glassbox/rng.hpp"

namespace glassbox {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double exact_shapley(const CoalitionGame& game, int player) {
  const int n = game.players;
  if (n < 1 || n > 20) {
    throw ValidationError("exact Shapley enumeration is limited to 20 players; "
                          "use tree_shap for larger feature sets");
  }
  if (player < 0 || player >= n) throw ValidationError("player index out of range");

  // weight of a coalition of size s: s!(n-s-1)!/n! = 1 / (n * C(n-1, s))
  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s) weight[s] = 1.0 / (n * binomial(n - 1, s));

  const uint32_t full = n >= 32 ? 0xffffffffu : ((1u << n) - 1u);
  const uint32_t pbit = 1u << player;
  double phi = 0.0;
  // enumerate subsets of the other players by iterating all masks without p
  for (uint32_t m = 0;; m = ((m | pbit) + 1) & ~pbit) {
    int s = std::popcount(m);
    phi += weight[s] * (game.value(m | pbit) - game.value(m));
    if (m == (full & ~pbit)) break;
  }
  return phi;
}

namespace {

double tree_subset_expectation(const Ensemble& ens, const Tree& tree, int node,
                               std::span<const double> row, uint32_t mask) {
  const TreeNode& nd = tree.nodes[node];
  if (nd.is_leaf()) return nd.value;
  if (mask & (1u << nd.feature)) {
    const double v = row[nd.feature];
    bool left;
    if (v == ens.missing_codes[nd.feature]) {
      left = nd.default_left;
    } else if (nd.categorical) {
      left = std::binary_search(nd.left_levels.begin(), nd.left_levels.end(),
                                static_cast<int>(v));
    } else {
      left = v <= nd.threshold;
    }
    return tree_subset_expectation(ens, tree, left ? nd.left : nd.right, row, mask);
  }
  const double cl = tree.nodes[nd.left].cover;
  const double cr = tree.nodes[nd.right].cover;
  const double total = nd.cover;
  if (total <= 0.0 || cl < 0.0 || cr < 0.0) {
    throw InternalError("invalid tree: non-positive cover at node " + std::to_string(node));
  }
  return (cl * tree_subset_expectation(ens, tree, nd.left, row, mask) +
          cr * tree_subset_expectation(ens, tree, nd.right, row, mask)) /
         total;
}

}  // namespace

double tree_value_function(const Ensemble& ens, std::span<const double> row,
                           uint32_t subset_mask, int class_id) {
  if (ens.num_features() > 32) {
    throw ValidationError("tree_value_function subset masks support up to 32 features");
  }
  double acc = ens.base_score[class_id];
  const int K = ens.num_class;
  for (size_t t = class_id; t < ens.trees.size(); t += K) {
    acc += ens.learning_rate * tree_subset_expectation(ens, ens.trees[t], 0, row, subset_mask);
  }
  return acc;
}

namespace {

// Lundberg's path-dependent algorithm. The unique path records, per feature
// encountered on the way down, the fraction of subsets flowing when the
// feature is excluded (zero_fraction, cover ratios) or included
// (one_fraction, the row's own routing), plus the permutation weights.
struct PathElement {
  int feature_index;
  double zero_fraction;
  double one_fraction;
  double pweight;
};

void extend_path(PathElement* path, int unique_depth, double zero_fraction,
                 double one_fraction, int feature_index) {
  path[unique_depth] = {feature_index, zero_fraction, one_fraction,
                        unique_depth == 0 ? 1.0 : 0.0};
  for (int i = unique_depth - 1; i >= 0; --i) {
    path[i + 1].pweight += one_fraction * path[i].pweight * (i + 1) / (unique_depth + 1.0);
    path[i].pweight = zero_fraction * path[i].pweight * (unique_depth - i) / (unique_depth + 1.0);
  }
}

void unwind_path(PathElement* path, int unique_depth, int path_index) {
  const double one_fraction = path[path_index].one_fraction;
  const double zero_fraction = path[path_index].zero_fraction;
  double next_one_portion = path[unique_depth].pweight;
  for (int i = unique_depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = path[i].pweight;
      path[i].pweight = next_one_portion * (unique_depth + 1.0) / ((i + 1) * one_fraction);
      next_one_portion = tmp - path[i].pweight * zero_fraction * (unique_depth - i) /
                                   (unique_depth + 1.0);
    } else {
      path[i].pweight = path[i].pweight * (unique_depth + 1.0) /
                        (zero_fraction * (unique_depth - i));
    }
  }
  for (int i = path_index; i < unique_depth; ++i) {
    path[i].feature_index = path[i + 1].feature_index;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

double unwound_path_sum(const PathElement* path, int unique_depth, int path_index) {
  const double one_fraction = path[path_index].one_fraction;
  const double zero_fraction = path[path_index].zero_fraction;
  double next_one_portion = path[unique_depth].pweight;
  double total = 0.0;
  for (int i = unique_depth - 1; i >= 0; --i) {
    if (one_fraction != 0.0) {
      const double tmp = next_one_portion * (unique_depth + 1.0) / ((i + 1) * one_fraction);
      total += tmp;
      next_one_portion =
          path[i].pweight - tmp * zero_fraction * ((unique_depth - i) / (unique_depth + 1.0));
    } else if (zero_fraction != 0.0) {
      total += (path[i].pweight / zero_fraction) / ((unique_depth - i) / (unique_depth + 1.0));
    }
  }
  return total;
}

struct ShapWalker {
  const Ensemble& ens;
  const Tree& tree;
  std::span<const double> row;
  double* phi;          // per-feature accumulation
  int condition;        // 0 none, +1 feature on, -1 feature off
  int condition_feature;

  int hot_child(int node) const {
    const TreeNode& nd = tree.nodes[node];
    const double v = row[nd.feature];
    bool left;
    if (v == ens.missing_codes[nd.feature]) {
      left = nd.default_left;
    } else if (nd.categorical) {
      left = std::binary_search(nd.left_levels.begin(), nd.left_levels.end(),
                                static_cast<int>(v));
    } else {
      left = v <= nd.threshold;
    }
    return left ? nd.left : nd.right;
  }

  void recurse(int node, int unique_depth, PathElement* parent_path, double parent_zero_fraction,
               double parent_one_fraction, int parent_feature_index,
               double condition_fraction) {
    if (condition_fraction == 0.0) return;
    const TreeNode& nd = tree.nodes[node];

    PathElement* path = parent_path + unique_depth + 1;
    std::copy(parent_path, parent_path + unique_depth + 1, path);
    if (condition == 0 || condition_feature != parent_feature_index) {
      extend_path(path, unique_depth, parent_zero_fraction, parent_one_fraction,
                  parent_feature_index);
    }

    if (nd.is_leaf()) {
      for (int i = 1; i <= unique_depth; ++i) {
        const double w = unwound_path_sum(path, unique_depth, i);
        const PathElement& el = path[i];
        phi[el.feature_index] +=
            w * (el.one_fraction - el.zero_fraction) * nd.value * condition_fraction;
      }
      return;
    }

    const int hot = hot_child(node);
    const int cold = hot == nd.left ? nd.right : nd.left;
    const double w = nd.cover;
    if (w <= 0.0) {
      throw InternalError("invalid tree: non-positive cover at node " + std::to_string(node));
    }
    const double hot_zero_fraction = tree.nodes[hot].cover / w;
    const double cold_zero_fraction = tree.nodes[cold].cover / w;
    double incoming_zero_fraction = 1.0;
    double incoming_one_fraction = 1.0;

    // Repeated feature on the path: undo the earlier extension and carry its
    // fractions into this node's extension.
    int path_index = 0;
    for (; path_index <= unique_depth; ++path_index) {
      if (path[path_index].feature_index == nd.feature) break;
    }
    if (path_index != unique_depth + 1) {
      incoming_zero_fraction = path[path_index].zero_fraction;
      incoming_one_fraction = path[path_index].one_fraction;
      unwind_path(path, unique_depth, path_index);
      unique_depth -= 1;
    }

    double hot_condition_fraction = condition_fraction;
    double cold_condition_fraction = condition_fraction;
    if (condition > 0 && nd.feature == condition_feature) {
      cold_condition_fraction = 0.0;
      unique_depth -= 1;
    } else if (condition < 0 && nd.feature == condition_feature) {
      hot_condition_fraction *= hot_zero_fraction;
      cold_condition_fraction *= cold_zero_fraction;
      unique_depth -= 1;
    }

    recurse(hot, unique_depth + 1, path, hot_zero_fraction * incoming_zero_fraction,
            incoming_one_fraction, nd.feature, hot_condition_fraction);
    recurse(cold, unique_depth + 1, path, cold_zero_fraction * incoming_zero_fraction, 0.0,
            nd.feature, cold_condition_fraction);
  }
};

double tree_mean_value(const Tree& tree, int node = 0) {
  const TreeNode& nd = tree.nodes[node];
  if (nd.is_leaf()) return nd.value;
  const double total = nd.cover;
  if (total <= 0.0) {
    throw InternalError("invalid tree: non-positive cover at node " + std::to_string(node));
  }
  return (tree.nodes[nd.left].cover * tree_mean_value(tree, nd.left) +
          tree.nodes[nd.right].cover * tree_mean_value(tree, nd.right)) /
         total;
}

// Single-class phi; condition 0 computes plain SHAP values.
void shap_values_for_class(const Ensemble& ens, std::span<const double> row, int class_id,
                           int condition, int condition_feature, double* phi) {
  const int F = ens.num_features();
  std::fill(phi, phi + F, 0.0);
  const int K = ens.num_class;
  std::vector<double> tree_phi(F);
  for (size_t t = class_id; t < ens.trees.size(); t += K) {
    const Tree& tree = ens.trees[t];
    std::fill(tree_phi.begin(), tree_phi.end(), 0.0);
    if (tree.nodes[0].is_leaf()) continue;  // constant tree contributes only to the base
    const int maxd = tree.max_depth() + 2;
    std::vector<PathElement> path_data((maxd * (maxd + 1)) / 2 + maxd);
    // The artificial root path element uses feature index F (never matched).
    ShapWalker walker{ens, tree, row, tree_phi.data(), condition, condition_feature};
    walker.recurse(0, 0, path_data.data(), 1.0, 1.0, F + 1, 1.0);
    for (int f = 0; f < F; ++f) phi[f] += ens.learning_rate * tree_phi[f];
  }
}

}  // namespace

Explanation tree_shap(const Ensemble& ens, std::span<const double> row) {
  const int F = ens.num_features();
  const int K = ens.num_class;
  Explanation ex;
  ex.base.resize(K);
  ex.margin.resize(K);
  ex.phi.assign(K, std::vector<double>(F, 0.0));
  for (int k = 0; k < K; ++k) {
    double base = ens.base_score[k];
    for (size_t t = k; t < ens.trees.size(); t += K) {
      base += ens.learning_rate * tree_mean_value(ens.trees[t]);
    }
    ex.base[k] = base;
    ex.margin[k] = ens.margin(row, k);
    shap_values_for_class(ens, row, k, 0, -1, ex.phi[k].data());
  }
  return ex;
}

std::vector<Explanation> explain_frame(const Ensemble& ens, const Frame& frame) {
  ens.check_frame(frame);
  std::vector<Explanation> out(frame.rows());
  parallel_for(frame.rows(), [&](int64_t lo, int64_t hi) {
    for (int64_t r = lo; r < hi; ++r) {
      out[r] = tree_shap(ens, frame.row(r));
      out[r].row_id = frame.row_ids[r];
    }
  }, 256);
  return out;
}

InteractionValues shap_interactions(const Ensemble& ens, std::span<const double> row) {
  const int F = ens.num_features();
  const int K = ens.num_class;
  InteractionValues out;
  out.features = F;
  out.phi.assign(K, std::vector<double>(static_cast<size_t>(F) * F, 0.0));

  std::vector<double> base_phi(F), on(F), off(F);
  for (int k = 0; k < K; ++k) {
    auto& m = out.phi[k];
    shap_values_for_class(ens, row, k, 0, -1, base_phi.data());
    for (int i = 0; i < F; ++i) {
      shap_values_for_class(ens, row, k, +1, i, on.data());
      shap_values_for_class(ens, row, k, -1, i, off.data());
      for (int j = 0; j < F; ++j) {
        if (j == i) continue;
        m[static_cast<size_t>(i) * F + j] = (on[j] - off[j]) / 2.0;
      }
    }
    // Exact symmetry, then diagonals absorb the remainder so each row sums
    // back to phi.
    for (int i = 0; i < F; ++i) {
      for (int j = i + 1; j < F; ++j) {
        double v = 0.5 * (m[static_cast<size_t>(i) * F + j] + m[static_cast<size_t>(j) * F + i]);
        m[static_cast<size_t>(i) * F + j] = v;
        m[static_cast<size_t>(j) * F + i] = v;
      }
    }
    for (int i = 0; i < F; ++i) {
      double offsum = 0.0;
      for (int j = 0; j < F; ++j) {
        if (j != i) offsum += m[static_cast<size_t>(i) * F + j];
      }
      m[static_cast<size_t>(i) * F + i] = base_phi[i] - offsum;
    }
  }
  return out;
}

namespace {

// Exact interventional PD over a background sample: evaluation points and
// background rows both flow down a tree at once; at a node splitting on a
// PD feature, the value slice partitions; at any other node, the row slice
// partitions by the background rows' own values.
struct PdWalker {
  const Ensemble& ens;
  const Tree& tree;
  std::span<const int> features;                    // 1 or 2 PD features
  const std::vector<std::array<double, 2>>& values;  // evaluation points
  const Frame& background;
  std::vector<int>* value_idx;  // permuted in place
  std::vector<int64_t>* rows;   // permuted in place
  std::vector<double>* out;     // per evaluation point accumulation

  int pd_slot(int feature) const {
    for (size_t s = 0; s < features.size(); ++s) {
      if (features[s] == feature) return static_cast<int>(s);
    }
    return -1;
  }

  void walk(int node, size_t vlo, size_t vhi, size_t rlo, size_t rhi) {
    if (vlo >= vhi || rlo >= rhi) return;
    const TreeNode& nd = tree.nodes[node];
    if (nd.is_leaf()) {
      const double add = nd.value * static_cast<double>(rhi - rlo);
      for (size_t i = vlo; i < vhi; ++i) (*out)[(*value_idx)[i]] += add;
      return;
    }
    auto goes_left = [&](double v) {
      if (v == ens.missing_codes[nd.feature]) return nd.default_left;
      if (nd.categorical) {
        return std::binary_search(nd.left_levels.begin(), nd.left_levels.end(),
                                  static_cast<int>(v));
      }
      return v <= nd.threshold;
    };
    const int slot = pd_slot(nd.feature);
    if (slot >= 0) {
      auto mid = std::stable_partition(
          value_idx->begin() + vlo, value_idx->begin() + vhi,
          [&](int vi) { return goes_left(values[vi][slot]); });
      const size_t vm = static_cast<size_t>(mid - value_idx->begin());
      walk(nd.left, vlo, vm, rlo, rhi);
      walk(nd.right, vm, vhi, rlo, rhi);
    } else {
      auto mid = std::stable_partition(
          rows->begin() + rlo, rows->begin() + rhi,
          [&](int64_t r) { return goes_left(background.at(r, nd.feature)); });
      const size_t rm = static_cast<size_t>(mid - rows->begin());
      walk(nd.left, vlo, vhi, rlo, rm);
      walk(nd.right, vlo, vhi, rm, rhi);
    }
  }
};

}  // namespace

std::vector<double> partial_dependence(const Ensemble& ens, int class_id,
                                       std::span<const int> features,
                                       const std::vector<std::array<double, 2>>& values,
                                       const Frame& background) {
  if (features.empty() || features.size() > 2) {
    throw ValidationError("partial dependence supports 1 or 2 features");
  }
  if (background.rows() == 0) throw ValidationError("partial dependence needs a sample");
  const int64_t m = background.rows();
  std::vector<double> out(values.size(), 0.0);

  std::vector<int> value_idx(values.size());
  std::vector<int64_t> rows(m);
  const int K = ens.num_class;
  for (size_t t = class_id; t < ens.trees.size(); t += K) {
    std::iota(value_idx.begin(), value_idx.end(), 0);
    std::iota(rows.begin(), rows.end(), 0);
    PdWalker w{ens, ens.trees[t], features, values, background, &value_idx, &rows, &out};
    w.walk(0, 0, values.size(), 0, m);
  }
  const double inv = 1.0 / static_cast<double>(m);
  for (double& v : out) {
    v = ens.base_score[class_id] + ens.learning_rate * v * inv;
  }
  return out;
}

double h_statistic(const Ensemble& ens, int j, int k, const Frame& sample, int class_id,
                   bool* degenerate) {
  if (j == k) throw ValidationError("h statistic needs two distinct features");
  if (sample.rows() == 0) throw ValidationError("h statistic needs a nonempty sample");
  const int64_t m = sample.rows();

  std::vector<std::array<double, 2>> vj(m), vk(m), vjk(m);
  for (int64_t i = 0; i < m; ++i) {
    vj[i] = {sample.at(i, j), 0.0};
    vk[i] = {sample.at(i, k), 0.0};
    vjk[i] = {sample.at(i, j), sample.at(i, k)};
  }
  const int fj[] = {j};
  const int fk[] = {k};
  const int fjk[] = {j, k};
  auto pd_j = partial_dependence(ens, class_id, fj, vj, sample);
  auto pd_k = partial_dependence(ens, class_id, fk, vk, sample);
  auto pd_jk = partial_dependence(ens, class_id, fjk, vjk, sample);

  auto center = [m](std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(m);
    for (double& x : v) x -= mean;
  };
  center(pd_j);
  center(pd_k);
  center(pd_jk);

  double num = 0.0, denom = 0.0;
  for (int64_t i = 0; i < m; ++i) {
    double d = pd_jk[i] - pd_j[i] - pd_k[i];
    num += d * d;
    denom += pd_jk[i] * pd_jk[i];
  }
  if (degenerate != nullptr) *degenerate = false;
  if (denom < 1e-12) {
    if (degenerate != nullptr) *degenerate = true;
    return 0.0;
  }
  return std::sqrt(std::max(0.0, num / denom));
}

std::vector<ImportanceEntry> importance(std::span<const Explanation> explanations,
                                        const Ensemble& ensemble, int class_id) {
  if (explanations.empty()) throw ValidationError("importance needs explanations");
  const int F = ensemble.num_features();
  std::vector<ImportanceEntry> out(F);
  for (int f = 0; f < F; ++f) {
    out[f].feature = ensemble.schema[f].name;
    out[f].feature_index = f;
  }
  int64_t terms = 0;
  for (const auto& ex : explanations) {
    for (int k = 0; k < ex.classes(); ++k) {
      if (class_id >= 0 && k != class_id) continue;
      for (int f = 0; f < F; ++f) out[f].mean_abs_shap += std::fabs(ex.phi[k][f]);
      ++terms;
    }
  }
  for (auto& e : out) e.mean_abs_shap /= static_cast<double>(terms);
  std::stable_sort(out.begin(), out.end(), [](const ImportanceEntry& a, const ImportanceEntry& b) {
    return a.mean_abs_shap > b.mean_abs_shap;
  });
  return out;
}

std::vector<BeeswarmRecord> value_plot_data(std::span<const Explanation> explanations,
                                            const Frame& frame, const Ensemble& ensemble,
                                            int class_id) {
  if (explanations.size() != static_cast<size_t>(frame.rows())) {
    throw ValidationError("explanations/frame row count mismatch");
  }
  const int F = ensemble.num_features();
  std::vector<double> lo(F, std::numeric_limits<double>::infinity());
  std::vector<double> hi(F, -std::numeric_limits<double>::infinity());
  for (int64_t r = 0; r < frame.rows(); ++r) {
    for (int f = 0; f < F; ++f) {
      double v = frame.at(r, f);
      if (v == ensemble.missing_codes[f]) continue;
      lo[f] = std::min(lo[f], v);
      hi[f] = std::max(hi[f], v);
    }
  }
  std::vector<BeeswarmRecord> out;
  out.reserve(static_cast<size_t>(frame.rows()) * F);
  for (int64_t r = 0; r < frame.rows(); ++r) {
    for (int f = 0; f < F; ++f) {
      BeeswarmRecord rec;
      rec.row_id = frame.row_ids[r];
      rec.feature = f;
      rec.shap = explanations[r].phi[class_id][f];
      rec.raw = frame.at(r, f);
      rec.missing = rec.raw == ensemble.missing_codes[f];
      if (rec.missing || !(hi[f] > lo[f])) {
        rec.color = rec.missing ? -1.0 : 0.5;
      } else {
        rec.color = (rec.raw - lo[f]) / (hi[f] - lo[f]);
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

DependenceData dependence_data(const Ensemble& ensemble,
                               std::span<const Explanation> explanations, const Frame& frame,
                               const std::string& feature, int class_id, int64_t h_sample_cap,
                               uint64_t seed) {
  const int j = frame.feature_index(feature);
  if (j < 0) throw ValidationError("unknown feature '" + feature + "'");
  if (explanations.size() != static_cast<size_t>(frame.rows())) {
    throw ValidationError("explanations/frame row count mismatch");
  }

  // Seeded subsample for the H search.
  Frame sample;
  if (frame.rows() > h_sample_cap) {
    std::vector<int64_t> idx(frame.rows());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed ^ 0x4a5u);
    rng.shuffle(idx);
    idx.resize(h_sample_cap);
    std::sort(idx.begin(), idx.end());
    sample = subset_frame(frame, idx);
  } else {
    sample = frame;
  }

  DependenceData out;
  out.feature = feature;
  int best_k = -1;
  double best_h = -1.0;
  bool best_degenerate = true;
  for (int k = 0; k < frame.cols(); ++k) {
    if (k == j) continue;
    bool deg = false;
    double h = h_statistic(ensemble, j, k, sample, class_id, &deg);
    if (h > best_h) {
      best_h = h;
      best_k = k;
      best_degenerate = deg;
    }
  }
  out.partner = frame.schema[best_k].name;
  out.h = best_h;
  out.h_degenerate = best_degenerate;

  out.records.reserve(frame.rows());
  for (int64_t r = 0; r < frame.rows(); ++r) {
    DependenceData::Record rec;
    rec.row_id = frame.row_ids[r];
    rec.x = frame.at(r, j);
    rec.shap = explanations[r].phi[class_id][j];
    rec.partner_value = frame.at(r, best_k);
    rec.partner_missing = rec.partner_value == ensemble.missing_codes[best_k];
    out.records.push_back(std::move(rec));
  }
  return out;
}

DecisionPath decision_plot_data(const Explanation& explanation, std::span<const double> row,
                                const Ensemble& ensemble, int class_id) {
  const int F = ensemble.num_features();
  DecisionPath out;
  out.base = explanation.base[class_id];
  out.output = explanation.margin[class_id];

  std::vector<int> order(F);
  std::iota(order.begin(), order.end(), 0);
  const auto& phi = explanation.phi[class_id];
  std::stable_sort(order.begin(), order.end(), [&phi](int a, int b) {
    return std::fabs(phi[a]) < std::fabs(phi[b]);
  });

  double acc = out.base;
  for (int f : order) {
    DecisionPath::Step s;
    s.feature = ensemble.schema[f].name;
    s.raw = row[f];
    s.shap = phi[f];
    acc += phi[f];
    s.cumulative = acc;
    out.steps.push_back(std::move(s));
  }
  return out;
}

}  // namespace glassbox
