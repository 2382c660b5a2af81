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

#ifndef GLASSBOX_FRAME_HPP
#define GLASSBOX_FRAME_HPP

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "glassbox/tables.hpp"

namespace glassbox {

enum class FeatureKind { kNumeric, kCategorical };

struct FeatureDesc {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  std::vector<std::string> levels;  // categorical only
  double missing_code = -1.0;

  int level_index(const std::string& value) const;  // -1 when unknown
};

// Immutable numeric feature matrix with its schema. Categorical cells hold
// level indices (or -1); numeric cells are finite, with -1 reserved for
// "no data" where the source uses that convention.
class Frame {
 public:
  std::vector<FeatureDesc> schema;
  std::vector<std::string> row_ids;
  std::vector<double> data;    // row-major, rows() x cols()
  std::vector<double> target;
  std::string target_name = "target";
  bool classification = false;
  int num_classes = 0;

  int64_t rows() const { return static_cast<int64_t>(target.size()); }
  int cols() const { return static_cast<int>(schema.size()); }
  double at(int64_t r, int c) const { return data[r * cols() + c]; }
  std::span<const double> row(int64_t r) const {
    return {data.data() + r * cols(), static_cast<size_t>(cols())};
  }
  int feature_index(const std::string& name) const;  // -1 when absent

  uint64_t schema_hash() const;
  void validate() const;  // throws InternalError on contract breaches

  void save(const std::string& csv_path, const std::string& schema_path) const;
  static Frame load(const std::string& csv_path, const std::string& schema_path);
};

// One row per paid order line; target = ordered quantity. Channel comes from
// the deduplicated histories (order events). Feature layout follows the
// sales-model variable list; see README for the exact column set.
Frame build_sales_frame(const RawTables& tables, const std::vector<ClickHistory>& deduped,
                        Diagnostics* diags);

// One row per order line whose SKU is present in sku_labels (SKUs lacking
// either attribute carry no label and are dropped, without imputation);
// target = the SKU's cluster label. The two clustered attributes are
// excluded from the features.
Frame build_choice_frame(const RawTables& tables,
                         const std::unordered_map<std::string, int>& sku_labels, int num_classes,
                         const std::vector<ClickHistory>& deduped, Diagnostics* diags);

}  // namespace glassbox

#endif  // GLASSBOX_FRAME_HPP
