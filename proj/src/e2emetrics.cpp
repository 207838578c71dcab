// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/e2emetrics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "grocr/detmatch.hpp"
#include "grocr/text2d.hpp"
#include "grocr/textmetrics.hpp"

namespace grocr {

double mcer_at(const std::vector<GroundedSpan>& preds, const std::vector<GroundedSpan>& gts,
               double tau) {
  if (preds.empty() && gts.empty()) return 0.0;
  std::vector<Box> pred_boxes;
  pred_boxes.reserve(preds.size());
  for (const auto& s : preds) pred_boxes.push_back(s.bbox);
  std::vector<Box> gt_boxes;
  gt_boxes.reserve(gts.size());
  for (const auto& s : gts) gt_boxes.push_back(s.bbox);

  const Matching m = match_boxes(pred_boxes, gt_boxes, tau);
  if (m.pairs.empty()) return 1.0;
  double sum = 0.0;
  for (const auto& [pi, gi] : m.pairs) {
    sum += cer(preds[static_cast<std::size_t>(pi)].text, gts[static_cast<std::size_t>(gi)].text);
  }
  return sum / static_cast<double>(m.pairs.size());
}

std::vector<GroundedSpan> e2e_reading_order(std::vector<GroundedSpan> spans) {
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (spans[a].bbox.y1 != spans[b].bbox.y1) return spans[a].bbox.y1 < spans[b].bbox.y1;
    return spans[a].bbox.x1 < spans[b].bbox.x1;
  });
  std::vector<GroundedSpan> out;
  out.reserve(spans.size());
  for (std::size_t idx : order) out.push_back(std::move(spans[idx]));
  return out;
}

double cer_e2e(const std::vector<GroundedSpan>& preds, const std::vector<GroundedSpan>& gts,
               const ImageDims& dims) {
  const std::string page_pred = render_text2d(e2e_reading_order(preds), dims);
  const std::string page_gt = render_text2d(e2e_reading_order(gts), dims);
  return cer(page_pred, page_gt, /*two_d=*/true);
}

}  // namespace grocr
