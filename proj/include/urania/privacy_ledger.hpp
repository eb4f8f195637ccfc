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

#ifndef URANIA_PRIVACY_LEDGER_HPP_
#define URANIA_PRIVACY_LEDGER_HPP_

#include <string>
#include <vector>

#include "urania/common.hpp"

namespace urania {

enum class CompositionMode {
  kBasic,               // epsilons and deltas add
  kParallelWithinGroup  // entries sharing a group_id compose as the max
};

struct LedgerEntry {
  std::string mechanism_id;
  double epsilon = 0.0;
  double delta = 0.0;
  CompositionMode mode = CompositionMode::kBasic;
  std::string group_id;  // required for parallel mode
};

struct BudgetLine {
  std::string mechanism_id;
  double epsilon = 0.0;
  double delta = 0.0;
};

struct BudgetReport {
  double total_epsilon = 0.0;
  double total_delta = 0.0;
  std::vector<BudgetLine> breakdown;  // sorted; parallel groups collapse to one line
};

// Append-only account of every mechanism invocation. Totals follow basic
// composition (sums) across entries and across parallel groups, with each
// group contributing the max of its members. Aggregation is a pure function
// of the entry multiset, so permuting records leaves the report unchanged.
//
// Single-writer contract: record() needs exclusive access, report() is
// read-only.
class PrivacyLedger {
 public:
  void record(LedgerEntry entry);

  BudgetReport report() const;
  // Report restricted to entries whose mechanism_id starts with `prefix`.
  BudgetReport report_prefix(const std::string& prefix) const;

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<LedgerEntry> entries_;
};

}  // namespace urania

#endif  // URANIA_PRIVACY_LEDGER_HPP_
