// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/text2d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grocr/textnorm.hpp"
#include "grocr/utf8.hpp"

namespace grocr {

namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

double mean_center_y(const std::vector<GroundedSpan>& lines, const std::vector<std::size_t>& row) {
  double sum = 0.0;
  for (std::size_t idx : row) sum += lines[idx].bbox.center_y();
  return sum / static_cast<double>(row.size());
}

}  // namespace

const Text2dConfig& text2d_config() {
  static const Text2dConfig config;
  return config;
}

LayoutStats estimate_layout(const std::vector<GroundedSpan>& lines, const ImageDims& dims) {
  const Text2dConfig& cfg = text2d_config();
  LayoutStats stats;
  stats.median_line_height = cfg.default_line_height;
  stats.char_density = cfg.default_char_density;

  if (!lines.empty()) {
    std::vector<int> heights;
    heights.reserve(lines.size());
    for (const auto& line : lines) heights.push_back(line.bbox.height());
    std::sort(heights.begin(), heights.end());
    const std::size_t mid = heights.size() / 2;
    stats.median_line_height = heights.size() % 2
                                   ? static_cast<double>(heights[mid])
                                   : 0.5 * (heights[mid - 1] + heights[mid]);

    std::int64_t total_chars = 0;
    std::int64_t total_width = 0;
    for (const auto& line : lines) {
      const std::u32string text = decode_utf8(normalize(line.text));
      if (text.empty()) continue;
      total_chars += static_cast<std::int64_t>(text.size());
      total_width += line.bbox.width();
    }
    if (total_chars > 0 && total_width > 0) {
      stats.char_density = static_cast<double>(total_chars) / static_cast<double>(total_width);
    }
  }

  stats.chars_per_row =
      std::max(1, static_cast<int>(std::ceil(dims.width * stats.char_density)));
  return stats;
}

std::vector<std::vector<std::size_t>> group_rows(const std::vector<GroundedSpan>& lines,
                                                 const LayoutStats& stats) {
  const Text2dConfig& cfg = text2d_config();
  std::vector<std::size_t> order(lines.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lines[a].bbox.center_y() < lines[b].bbox.center_y();
  });

  const double tolerance = cfg.row_merge_factor * stats.median_line_height;
  std::vector<std::vector<std::size_t>> rows;
  double anchor = 0.0;
  for (std::size_t idx : order) {
    const double center = lines[idx].bbox.center_y();
    if (rows.empty() || center - anchor > tolerance) {
      rows.push_back({idx});
      anchor = center;
    } else {
      rows.back().push_back(idx);
    }
  }
  for (auto& row : rows) {
    std::stable_sort(row.begin(), row.end(), [&](std::size_t a, std::size_t b) {
      if (lines[a].bbox.x1 != lines[b].bbox.x1) return lines[a].bbox.x1 < lines[b].bbox.x1;
      return a < b;
    });
  }
  return rows;
}

std::vector<GroundedSpan> order_lines_2d(const std::vector<GroundedSpan>& lines,
                                         const LayoutStats& stats) {
  std::vector<GroundedSpan> ordered;
  ordered.reserve(lines.size());
  for (const auto& row : group_rows(lines, stats)) {
    for (std::size_t idx : row) ordered.push_back(lines[idx]);
  }
  return ordered;
}

std::string render_text2d(const std::vector<GroundedSpan>& lines, const ImageDims& dims) {
  if (lines.empty()) return "";
  const Text2dConfig& cfg = text2d_config();
  const LayoutStats stats = estimate_layout(lines, dims);
  const auto rows = group_rows(lines, stats);

  std::vector<std::u32string> grid;
  std::vector<double> row_centers;
  for (const auto& row : rows) {
    std::u32string out;
    for (std::size_t idx : row) {
      const std::u32string text = decode_utf8(normalize(lines[idx].text));
      if (text.empty()) continue;
      const int desired = round_half_up(lines[idx].bbox.x1 * stats.char_density);
      // Same-row neighbors keep at least one separating space; a collision
      // shifts the later line right to the first free column.
      const std::size_t col = out.empty()
                                  ? static_cast<std::size_t>(std::max(0, desired))
                                  : std::max(static_cast<std::size_t>(std::max(0, desired)),
                                             out.size() + 1);
      out.resize(col, U' ');
      out.append(text);
    }
    if (out.empty()) continue;  // rows with no visible text vanish
    grid.push_back(std::move(out));
    row_centers.push_back(mean_center_y(lines, row));
  }
  if (grid.empty()) return "";

  std::u32string result;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    if (r > 0) {
      const double gap = row_centers[r] - row_centers[r - 1];
      const double unit = cfg.blank_line_factor * stats.median_line_height;
      int blanks = unit > 0.0 ? static_cast<int>(std::floor(gap / unit)) : 0;
      blanks = std::clamp(blanks, 0, cfg.max_blank_lines);
      result.push_back(U'\n');
      result.append(static_cast<std::size_t>(blanks), U'\n');
    }
    // Placement never appends trailing spaces, but trim to keep the output
    // contract independent of that detail.
    std::u32string& row = grid[r];
    while (!row.empty() && row.back() == U' ') row.pop_back();
    result.append(row);
  }
  while (!result.empty() && result.back() == U'\n') result.pop_back();
  return encode_utf8(result);
}

}  // namespace grocr
