// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace grocr {

/// Axis-aligned pixel rectangle [x1,y1,x2,y2], origin top-left,
/// x right-increasing, y down-increasing. Invariant: x1 < x2 and y1 < y2.
struct Box {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  bool operator==(const Box&) const = default;

  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }
};

struct ImageDims {
  int width = 1;
  int height = 1;

  bool operator==(const ImageDims&) const = default;
};

/// A transcript paired with its bounding box (line/paragraph/word granularity).
struct GroundedSpan {
  std::string text;
  Box bbox;

  bool operator==(const GroundedSpan&) const = default;
};

/// Rounds to nearest integer (half away from zero becomes half up here since
/// coordinates are clamped to be non-negative afterwards), clamps into
/// [0,W]x[0,H], and drops boxes with non-positive width or height.
/// Throws std::invalid_argument on non-finite coordinates.
std::optional<Box> clip_box(const std::array<double, 4>& raw, const ImageDims& dims);

/// Area in pixels^2.
std::int64_t area(const Box& b);

/// Intersection area; 0 when disjoint.
std::int64_t intersection_area(const Box& a, const Box& b);

/// Intersection over union, in [0,1].
double iou(const Box& a, const Box& b);

/// area(inner ∩ region) / area(inner), in [0,1].
double coverage(const Box& inner, const Box& region);

}  // namespace grocr
