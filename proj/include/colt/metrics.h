// Copyright 2026 The colt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLT_METRICS_H_
#define COLT_METRICS_H_

#include <cstddef>
#include <span>

#include "colt/taxonomy.h"

namespace colt {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct SetCounts {
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t overlap = 0;
};

// Precision, recall and F1 at ancestor, edge and node granularity.
struct MetricsReport {
  PRF ancestor;
  PRF edge;
  PRF node;
  SetCounts ancestor_counts;
  SetCounts edge_counts;
  SetCounts node_counts;
  std::size_t taxonomies = 1;  // number of reports folded in
};

// P = overlap/predicted, R = overlap/gold, F1 = 2PR/(P+R) or 0 when P+R = 0.
// An empty predicted set gives P = 0 and an empty gold set R = 0, except that
// two empty sets agree perfectly (all ones).
PRF prf_from_counts(const SetCounts& c);

// Entities match by normalized key.
MetricsReport evaluate(const Taxonomy& pred, const Taxonomy& gold);

enum class Averaging {
  kMacro,  // mean of per-taxonomy values
  kMicro,  // values recomputed from summed counts
};

// Counts are summed in both modes. Throws EmptyReportList.
MetricsReport aggregate(std::span<const MetricsReport> reports,
                        Averaging mode = Averaging::kMacro);

}  // namespace colt

#endif  // COLT_METRICS_H_
