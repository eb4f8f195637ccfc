//
// Copyright 2026 The Urania Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "urania/privacy_ledger.hpp"

#include <algorithm>
#include <map>

namespace urania {

void PrivacyLedger::record(LedgerEntry entry) {
  if (entry.mechanism_id.empty()) {
    throw ParameterError("ledger: mechanism_id must be non-empty");
  }
  if (entry.epsilon < 0.0) throw ParameterError("ledger: epsilon must be >= 0");
  if (entry.delta < 0.0 || entry.delta > 1.0) {
    throw ParameterError("ledger: delta must lie in [0, 1]");
  }
  if (entry.mode == CompositionMode::kParallelWithinGroup && entry.group_id.empty()) {
    throw ParameterError("ledger: parallel entries need a group_id");
  }
  entries_.push_back(std::move(entry));
}

namespace {

BudgetReport aggregate(const std::vector<LedgerEntry>& entries) {
  BudgetReport report;

  // Parallel groups collapse to the max epsilon/delta of their members; the
  // group line is labeled by its smallest mechanism_id so the report is a
  // pure function of the entry multiset.
  std::map<std::string, BudgetLine> groups;
  std::vector<BudgetLine> lines;
  for (const auto& e : entries) {
    if (e.mode == CompositionMode::kParallelWithinGroup) {
      auto [it, inserted] = groups.try_emplace(e.group_id,
                                               BudgetLine{e.mechanism_id, e.epsilon, e.delta});
      if (!inserted) {
        auto& g = it->second;
        g.mechanism_id = std::min(g.mechanism_id, e.mechanism_id);
        g.epsilon = std::max(g.epsilon, e.epsilon);
        g.delta = std::max(g.delta, e.delta);
      }
    } else {
      lines.push_back({e.mechanism_id, e.epsilon, e.delta});
    }
  }
  for (const auto& [_, line] : groups) lines.push_back(line);

  std::sort(lines.begin(), lines.end(), [](const BudgetLine& a, const BudgetLine& b) {
    if (a.mechanism_id != b.mechanism_id) return a.mechanism_id < b.mechanism_id;
    if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
    return a.delta < b.delta;
  });

  // Totals accumulate over the value-sorted multiset in extended precision:
  // permutation-invariant by construction, and recording an extra entry can
  // never tick a total down.
  auto canonical_sum = [](std::vector<double> values) {
    std::sort(values.begin(), values.end());
    long double total = 0.0L;
    for (double v : values) total += v;
    return static_cast<double>(total);
  };
  std::vector<double> epsilons, deltas;
  epsilons.reserve(lines.size());
  deltas.reserve(lines.size());
  for (const auto& line : lines) {
    epsilons.push_back(line.epsilon);
    deltas.push_back(line.delta);
  }
  report.total_epsilon = canonical_sum(std::move(epsilons));
  report.total_delta = std::min(canonical_sum(std::move(deltas)), 1.0);
  report.breakdown = std::move(lines);
  return report;
}

}  // namespace

BudgetReport PrivacyLedger::report() const { return aggregate(entries_); }

BudgetReport PrivacyLedger::report_prefix(const std::string& prefix) const {
  std::vector<LedgerEntry> filtered;
  for (const auto& e : entries_) {
    if (e.mechanism_id.rfind(prefix, 0) == 0) filtered.push_back(e);
  }
  return aggregate(filtered);
}

}  // namespace urania
