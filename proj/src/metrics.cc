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

#include "colt/metrics.h"

#include <algorithm>
#include <iterator>
#include <set>
#include <string>

namespace colt {

PRF prf_from_counts(const SetCounts& c) {
  if (c.predicted == 0 && c.gold == 0) return {1.0, 1.0, 1.0};
  PRF out;
  if (c.predicted > 0) {
    out.precision = static_cast<double>(c.overlap) / static_cast<double>(c.predicted);
  }
  if (c.gold > 0) {
    out.recall = static_cast<double>(c.overlap) / static_cast<double>(c.gold);
  }
  double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

namespace {

template <typename Set>
SetCounts count(const Set& pred, const Set& gold) {
  SetCounts c{pred.size(), gold.size(), 0};
  for (const auto& x : pred) c.overlap += gold.count(x);
  return c;
}

std::set<std::string> node_keys(const Taxonomy& t) {
  std::set<std::string> out;
  for (const auto& n : t.nodes()) out.insert(n.key());
  return out;
}

}  // namespace

MetricsReport evaluate(const Taxonomy& pred, const Taxonomy& gold) {
  MetricsReport r;
  r.ancestor_counts = count(ancestor_closure(pred), ancestor_closure(gold));
  r.edge_counts = count(pred.edge_set(), gold.edge_set());
  r.node_counts = count(node_keys(pred), node_keys(gold));
  r.ancestor = prf_from_counts(r.ancestor_counts);
  r.edge = prf_from_counts(r.edge_counts);
  r.node = prf_from_counts(r.node_counts);
  return r;
}

MetricsReport aggregate(std::span<const MetricsReport> reports,
                        Averaging mode) {
  if (reports.empty()) {
    throw Error(ErrorCode::kEmptyReportList, "no reports to aggregate");
  }
  MetricsReport out;
  out.taxonomies = 0;
  auto add_counts = [](SetCounts& into, const SetCounts& c) {
    into.predicted += c.predicted;
    into.gold += c.gold;
    into.overlap += c.overlap;
  };
  auto add_prf = [](PRF& into, const PRF& p) {
    into.precision += p.precision;
    into.recall += p.recall;
    into.f1 += p.f1;
  };
  for (const auto& r : reports) {
    add_counts(out.ancestor_counts, r.ancestor_counts);
    add_counts(out.edge_counts, r.edge_counts);
    add_counts(out.node_counts, r.node_counts);
    add_prf(out.ancestor, r.ancestor);
    add_prf(out.edge, r.edge);
    add_prf(out.node, r.node);
    out.taxonomies += r.taxonomies;
  }
  if (mode == Averaging::kMicro) {
    out.ancestor = prf_from_counts(out.ancestor_counts);
    out.edge = prf_from_counts(out.edge_counts);
    out.node = prf_from_counts(out.node_counts);
    return out;
  }
  const double n = static_cast<double>(reports.size());
  for (PRF* p : {&out.ancestor, &out.edge, &out.node}) {
    p->precision /= n;
    p->recall /= n;
    p->f1 /= n;
  }
  return out;
}

}  // namespace colt
