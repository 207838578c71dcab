// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grocr/geometry.hpp"

namespace grocr {

/// Grid-scale parameters estimated from the line set.
struct LayoutStats {
  double median_line_height = 1.0;
  double char_density = 0.125;  // characters per pixel of box width
  int chars_per_row = 1;
};

/// The fixed constants behind the notional character grid. The underlying
/// construction says "proportional" and "a small maximum" without numbers;
/// these pins make the rendering reproducible and testable.
struct Text2dConfig {
  double row_merge_factor = 0.5;   // same row when centers differ <= factor * median height
  double blank_line_factor = 1.5;  // one blank line per factor * median height of vertical gap
  int max_blank_lines = 3;
  double default_line_height = 1.0;
  double default_char_density = 0.125;
};

const Text2dConfig& text2d_config();

/// Median box height, characters-per-pixel density over lines with nonempty
/// normalized text, and the derived row width. Empty input gives the
/// documented defaults.
LayoutStats estimate_layout(const std::vector<GroundedSpan>& lines, const ImageDims& dims);

/// Row clustering: indices grouped into rows top-to-bottom, left-to-right
/// within each row. A line joins the current row when its vertical center is
/// within row_merge_factor * median height of the row's first line.
std::vector<std::vector<std::size_t>> group_rows(const std::vector<GroundedSpan>& lines,
                                                 const LayoutStats& stats);

/// 2D reading order: rows by mean center top-to-bottom, x1 within a row,
/// input index as the final tie-break.
std::vector<GroundedSpan> order_lines_2d(const std::vector<GroundedSpan>& lines,
                                         const LayoutStats& stats);

/// Renders lines onto the notional character grid: left edges map to columns
/// via char_density, same-row lines keep at least one separating space,
/// large vertical gaps become up to max_blank_lines blank lines. Trailing
/// spaces and trailing blank rows are trimmed. Deterministic; empty input
/// gives the empty string.
std::string render_text2d(const std::vector<GroundedSpan>& lines, const ImageDims& dims);

}  // namespace grocr
