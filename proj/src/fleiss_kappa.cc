//
// Copyright 2026 The FENSE Toolkit Authors
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

#include <stdexcept>

#include "fense/benchmark.h"

namespace fense {

// With N items, n raters, column totals T_j and S = sum of squared cell
// counts, kappa = ((S - Nn) Nn - sum T_j^2 (n - 1)) / ((Nn)^2 - sum T_j^2)(n - 1).
KappaResult FleissKappa(const std::vector<std::vector<int>>& counts) {
  if (counts.empty()) throw std::invalid_argument("Fleiss kappa needs at least one item");
  const std::size_t categories = counts.front().size();
  if (categories < 2) {
    throw std::invalid_argument("Fleiss kappa needs at least two categories");
  }
  long long raters = -1;
  std::vector<long long> totals(categories, 0);
  long long sum_sq = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    if (row.size() != categories) {
      throw std::invalid_argument("row " + std::to_string(i) + " has " +
                                  std::to_string(row.size()) + " categories, expected " +
                                  std::to_string(categories));
    }
    long long row_sum = 0;
    for (std::size_t j = 0; j < categories; ++j) {
      if (row[j] < 0) throw std::invalid_argument("negative count in row " + std::to_string(i));
      row_sum += row[j];
      totals[j] += row[j];
      sum_sq += static_cast<long long>(row[j]) * row[j];
    }
    if (raters < 0) raters = row_sum;
    if (row_sum != raters) {
      throw std::invalid_argument("row " + std::to_string(i) + " sums to " +
                                  std::to_string(row_sum) + ", expected " +
                                  std::to_string(raters));
    }
  }
  if (raters < 2) throw std::invalid_argument("Fleiss kappa needs at least 2 raters per item");

  const long long nn = static_cast<long long>(counts.size()) * raters;
  long long totals_sq = 0;
  for (long long t : totals) totals_sq += t * t;
  const long long numerator = (sum_sq - nn) * nn - totals_sq * (raters - 1);
  const long long denominator = (nn * nn - totals_sq) * (raters - 1);
  if (denominator == 0) return {1.0, true};
  return {static_cast<double>(numerator) / static_cast<double>(denominator), false};
}

}  // namespace fense
