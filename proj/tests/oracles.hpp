// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations used only as test oracles. Everything here is
// deliberately naive and independent of the library's code paths.

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "grocr/geometry.hpp"

namespace oracle {

// Full-matrix Levenshtein over char32_t sequences.
inline std::int64_t lev_full_matrix(const std::u32string& a, const std::u32string& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<std::vector<std::int64_t>> d(m + 1, std::vector<std::int64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  }
  return d[m][n];
}

// IoU by counting shared unit pixels on the integer grid.
inline double raster_iou(const grocr::Box& a, const grocr::Box& b) {
  const int x_lo = std::min(a.x1, b.x1);
  const int x_hi = std::max(a.x2, b.x2);
  const int y_lo = std::min(a.y1, b.y1);
  const int y_hi = std::max(a.y2, b.y2);
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  for (int y = y_lo; y < y_hi; ++y) {
    for (int x = x_lo; x < x_hi; ++x) {
      const bool in_a = x >= a.x1 && x < a.x2 && y >= a.y1 && y < a.y2;
      const bool in_b = x >= b.x1 && x < b.x2 && y >= b.y1 && y < b.y2;
      if (in_a && in_b) ++inter;
      if (in_a || in_b) ++uni;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline double raster_coverage(const grocr::Box& inner, const grocr::Box& region) {
  std::int64_t inter = 0;
  std::int64_t inner_area = 0;
  for (int y = inner.y1; y < inner.y2; ++y) {
    for (int x = inner.x1; x < inner.x2; ++x) {
      ++inner_area;
      if (x >= region.x1 && x < region.x2 && y >= region.y1 && y < region.y2) ++inter;
    }
  }
  return inner_area == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(inner_area);
}

// Exhaustive maximum total weight over one-to-one assignments restricted to
// pairs with weight >= tau. Rows recurse; columns may stay unused.
inline double assign_brute_force(const std::vector<std::vector<double>>& weights, double tau) {
  const std::size_t m = weights.size();
  const std::size_t n = m == 0 ? 0 : weights[0].size();
  std::vector<char> used(n, 0);
  double best = 0.0;
  const auto recurse = [&](auto&& self, std::size_t row, double acc) -> void {
    if (row == m) {
      best = std::max(best, acc);
      return;
    }
    self(self, row + 1, acc);  // leave this row unmatched
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j] && weights[row][j] >= tau) {
        used[j] = 1;
        self(self, row + 1, acc + weights[row][j]);
        used[j] = 0;
      }
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

}  // namespace oracle
