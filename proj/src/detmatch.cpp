// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/detmatch.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace grocr {

namespace {

// Potential-based Hungarian method on a square cost matrix, O(n^3).
// Minimizes total cost; returns row -> column. Scan order is fixed so equal
// alternatives resolve to the smallest column index.
std::vector<int> solve_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] >= 1) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

// Moves the matching toward the lexicographically smallest pair sequence
// among equal-weight optima: pairs shift to earlier unmatched rows/columns
// of identical weight, and weight-preserving swaps untangle crossings. Every
// move keeps the total exactly (only bitwise-equal weights are exchanged).
void canonicalize_pairs(const std::vector<std::vector<double>>& w, double tau,
                        std::vector<std::pair<int, int>>& pairs) {
  const int m = static_cast<int>(w.size());
  const int n = m == 0 ? 0 : static_cast<int>(w[0].size());
  std::vector<int> row_match(static_cast<std::size_t>(m), -1);
  std::vector<int> col_match(static_cast<std::size_t>(n), -1);
  const auto rebuild = [&] {
    std::fill(row_match.begin(), row_match.end(), -1);
    std::fill(col_match.begin(), col_match.end(), -1);
    for (const auto& [i, j] : pairs) {
      row_match[static_cast<std::size_t>(i)] = j;
      col_match[static_cast<std::size_t>(j)] = i;
    }
  };
  rebuild();

  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(pairs.begin(), pairs.end());
    for (auto& [i, j] : pairs) {
      const auto wi = static_cast<std::size_t>(i);
      const auto wj = static_cast<std::size_t>(j);
      for (int i2 = 0; i2 < i; ++i2) {
        if (row_match[static_cast<std::size_t>(i2)] == -1 &&
            w[static_cast<std::size_t>(i2)][wj] == w[wi][wj]) {
          i = i2;
          rebuild();
          changed = true;
          break;
        }
      }
      if (changed) break;
      for (int j2 = 0; j2 < j; ++j2) {
        if (col_match[static_cast<std::size_t>(j2)] == -1 &&
            w[wi][static_cast<std::size_t>(j2)] == w[wi][wj]) {
          j = j2;
          rebuild();
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
    if (changed) continue;
    for (std::size_t a = 0; a < pairs.size() && !changed; ++a) {
      for (std::size_t b = a + 1; b < pairs.size() && !changed; ++b) {
        const auto [i1, j1] = pairs[a];
        const auto [i2, j2] = pairs[b];
        if (j2 < j1 &&
            w[static_cast<std::size_t>(i1)][static_cast<std::size_t>(j2)] >= tau &&
            w[static_cast<std::size_t>(i2)][static_cast<std::size_t>(j1)] >= tau &&
            w[static_cast<std::size_t>(i1)][static_cast<std::size_t>(j2)] +
                    w[static_cast<std::size_t>(i2)][static_cast<std::size_t>(j1)] ==
                w[static_cast<std::size_t>(i1)][static_cast<std::size_t>(j1)] +
                    w[static_cast<std::size_t>(i2)][static_cast<std::size_t>(j2)]) {
          pairs[a].second = j2;
          pairs[b].second = j1;
          rebuild();
          changed = true;
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
}

}  // namespace

Matching assign(const std::vector<std::vector<double>>& weights, double tau,
                AssignObjective objective) {
  Matching result;
  result.threshold = tau;
  const int m = static_cast<int>(weights.size());
  const int n = m == 0 ? 0 : static_cast<int>(weights[0].size());
  for (const auto& row : weights) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("assign: ragged weight matrix");
    }
  }
  if (m == 0 || n == 0) return result;

  // For max_pair_count, every admissible weight is lifted by a constant
  // that dwarfs any achievable total, so cardinality dominates and the
  // original weights only break ties.
  const double lift = objective == AssignObjective::max_pair_count
                          ? static_cast<double>(std::min(m, n)) + 1.0
                          : 0.0;

  // Square-pad with zero-weight dummies; sub-threshold pairs also weigh
  // zero so the optimum over the padded matrix equals the optimum over
  // admissible pairs only.
  const int k = std::max(m, n);
  std::vector<std::vector<double>> effective(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (weights[i][j] >= tau) {
        effective[i][j] = lift + weights[i][j];
        cost[i][j] = -effective[i][j];
      }
    }
  }

  const std::vector<int> row_to_col = solve_min_cost(cost);
  for (int i = 0; i < m; ++i) {
    const int j = row_to_col[i];
    if (j >= 0 && j < n && weights[i][j] >= tau) {
      result.pairs.emplace_back(i, j);
    }
  }
  canonicalize_pairs(effective, lift + tau, result.pairs);
  for (const auto& [i, j] : result.pairs) {
    result.total_weight += weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return result;
}

Matching match_boxes(const std::vector<Box>& preds, const std::vector<Box>& gts, double tau,
                     AssignObjective objective) {
  std::vector<std::vector<double>> weights(preds.size(), std::vector<double>(gts.size(), 0.0));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      weights[i][j] = iou(preds[i], gts[j]);
    }
  }
  return assign(weights, tau, objective);
}

DetectionScores detection_scores(const std::vector<Box>& preds, const std::vector<Box>& gts,
                                 double tau) {
  DetectionScores s;
  if (preds.empty() && gts.empty()) {
    s.precision = 1.0;
    s.recall = 1.0;
    s.f1 = 1.0;
    return s;
  }
  const Matching m = match_boxes(preds, gts, tau);
  s.tp = static_cast<int>(m.pairs.size());
  s.fp = static_cast<int>(preds.size()) - s.tp;
  s.fn = static_cast<int>(gts.size()) - s.tp;
  s.precision = static_cast<double>(s.tp) / std::max(1, s.tp + s.fp);
  s.recall = gts.empty() ? 1.0 : static_cast<double>(s.tp) / static_cast<double>(gts.size());
  s.f1 = 2.0 * s.precision * s.recall / std::max(1.0, s.precision + s.recall);
  return s;
}

}  // namespace grocr
