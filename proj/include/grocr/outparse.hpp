// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grocr/format.hpp"
#include "grocr/geometry.hpp"

namespace grocr {

enum class ParseKind {
  plain_text,
  spans,
  boxes,
  invalid,
};

std::string to_string(ParseKind k);

/// Canonical form of a raw model output. Exactly one payload is populated,
/// matching kind; invalid results always carry a diagnostic.
struct ParsedOutput {
  ParseKind kind = ParseKind::invalid;
  std::string text;
  std::vector<GroundedSpan> spans;
  std::vector<Box> boxes;
  std::vector<std::string> diagnostics;
};

/// Coordinate space of predicted boxes. Some backbones emit coordinates in a
/// normalized [0,1000] frame; those are rescaled to pixels before clipping.
enum class CoordSpace {
  pixel,
  normalized_1000,
};

/// Removes a ``` fence (optional language tag) when the output is wrapped in
/// one, returning the fenced content; otherwise returns the input unchanged.
std::string strip_code_fence(std::string_view raw);

/// Fence-strips, then returns the largest bracket-balanced [...] or {...}
/// substring; when none exists the (fence-stripped) input passes through for
/// plain-text handling.
std::string extract_candidate(std::string_view raw);

struct RepairResult {
  std::optional<nlohmann::json> value;
  std::vector<std::string> notes;
};

/// Deterministic structural repair: single->double quotes, bare keys quoted,
/// trailing commas removed, comments removed, unterminated strings closed at
/// line end, unbalanced brackets closed at the end; then a strict parse.
/// Irreparable input yields an empty value and a diagnostic naming the first
/// unrecoverable position.
RepairResult repair(std::string_view candidate);

/// Key/shape normalization of a repaired value: keys containing "text" or
/// "label" map to text, keys containing "box" map to bbox, bare 4-number
/// lists become boxes, and every box is clipped to the image bounds.
ParsedOutput normalize_records(const nlohmann::json& value, const ImageDims& dims,
                               CoordSpace coords = CoordSpace::pixel);

/// Total pipeline from raw model output to ParsedOutput for the expected
/// output format. Never throws on bad input; failures come back as
/// ParseKind::invalid, which downstream scoring treats as maximal error.
ParsedOutput parse_prediction(std::string_view raw, OutputFormat expected, const ImageDims& dims,
                              CoordSpace coords = CoordSpace::pixel);

}  // namespace grocr
