// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "grocr/geometry.hpp"

namespace grocr {

/// Mean per-pair CER over box-matched prediction/reference text pairs.
/// Both sides empty -> 0; any other zero-match configuration -> 1.
double mcer_at(const std::vector<GroundedSpan>& preds, const std::vector<GroundedSpan>& gts,
               double tau);

/// Deterministic reading order: y1 of the top edge, then x1 left-to-right,
/// then input index (stable).
std::vector<GroundedSpan> e2e_reading_order(std::vector<GroundedSpan> spans);

/// CER between the layout-sensitive page linearizations of both span sets:
/// each side passes through e2e_reading_order then render_text2d, then CER
/// in 2D-preserving mode.
double cer_e2e(const std::vector<GroundedSpan>& preds, const std::vector<GroundedSpan>& gts,
               const ImageDims& dims);

}  // namespace grocr
