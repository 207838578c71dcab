// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace grocr {

namespace {

// Fractional model coordinates round half-up before clamping.
int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace

std::optional<Box> clip_box(const std::array<double, 4>& raw, const ImageDims& dims) {
  for (double v : raw) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("clip_box: non-finite coordinate");
    }
  }
  Box b;
  b.x1 = std::clamp(round_half_up(raw[0]), 0, dims.width);
  b.y1 = std::clamp(round_half_up(raw[1]), 0, dims.height);
  b.x2 = std::clamp(round_half_up(raw[2]), 0, dims.width);
  b.y2 = std::clamp(round_half_up(raw[3]), 0, dims.height);
  if (b.x1 >= b.x2 || b.y1 >= b.y2) {
    return std::nullopt;
  }
  return b;
}

std::int64_t area(const Box& b) {
  return static_cast<std::int64_t>(b.x2 - b.x1) * static_cast<std::int64_t>(b.y2 - b.y1);
}

std::int64_t intersection_area(const Box& a, const Box& b) {
  const std::int64_t w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const std::int64_t h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0 || h <= 0) return 0;
  return w * h;
}

double iou(const Box& a, const Box& b) {
  const std::int64_t inter = intersection_area(a, b);
  if (inter == 0) return 0.0;
  const std::int64_t uni = area(a) + area(b) - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double coverage(const Box& inner, const Box& region) {
  const std::int64_t inter = intersection_area(inner, region);
  if (inter == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(area(inner));
}

}  // namespace grocr
