// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "grocr/geometry.hpp"

namespace grocr {

/// One-to-one matching over (pred-index, gt-index) pairs, each with
/// weight >= threshold. Pairs are sorted by pred index.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  double threshold = 0.5;
  double total_weight = 0.0;
};

struct DetectionScores {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// What the matcher optimizes among admissible pairs. Total affinity is the
/// protocol default; max_pair_count maximizes |M| first and breaks ties by
/// total weight, which can differ when a strong pair blocks several weaker
/// ones.
enum class AssignObjective {
  max_total_weight,
  max_pair_count,
};

/// One-to-one assignment over pairs with weights[i][j] >= tau, optimizing
/// the requested objective. The matrix may be non-square; rows must share
/// one width. Ties between equally good alternatives break toward smaller
/// indices.
Matching assign(const std::vector<std::vector<double>>& weights, double tau,
                AssignObjective objective = AssignObjective::max_total_weight);

/// assign() applied to the pairwise IoU matrix of P x G.
Matching match_boxes(const std::vector<Box>& preds, const std::vector<Box>& gts, double tau,
                     AssignObjective objective = AssignObjective::max_total_weight);

/// TP/FP/FN and precision/recall/F1 at threshold tau, including the
/// empty-set conventions: (1,1,1) when both sides are empty, Rec=1/Prec=0
/// when only predictions exist, Rec=0 when only ground truth exists. The F1
/// denominator is guarded as max(1, P+R).
DetectionScores detection_scores(const std::vector<Box>& preds, const std::vector<Box>& gts,
                                 double tau);

}  // namespace grocr
