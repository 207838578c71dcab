// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grocr/format.hpp"
#include "grocr/geometry.hpp"

namespace grocr {

/// Ground-truth annotations for one page at one or more granularities.
struct PageRecord {
  std::string id;
  ImageDims dims;
  std::vector<GroundedSpan> lines;
  std::optional<std::vector<GroundedSpan>> paragraphs;
  std::optional<std::vector<GroundedSpan>> words;
  std::optional<std::string> dataset;
};

using Reference = std::variant<std::string, std::vector<GroundedSpan>, std::vector<Box>>;

/// One evaluable unit. Conditional detection always carries a query and a
/// box output; localized reading always carries a region and a plain-text
/// reference.
struct TaskInstance {
  std::string task_id;
  std::string page_id;
  Family family = Family::reading;
  OutputFormat output_format = OutputFormat::text;
  ImageDims dims;
  std::optional<std::string> query;
  std::optional<Box> region;
  std::string prompt;
  Reference reference;
  std::optional<std::string> dataset;
  // Build-time only; not serialized. Drives the {TARGET} prompt placeholder.
  std::optional<std::string> target_noun;
};

enum class Granularity { lines, paragraphs };

/// Block selection rule for localized reading. IoU against the region is
/// the default; coverage(block, region) is the variant that stays
/// meaningful for small blocks inside large regions.
enum class RegionRule { iou, coverage };

struct TemplateBank {
  std::vector<std::string> determiners;
  std::vector<std::string> nouns;
  std::map<std::string, std::vector<std::string>> templates;  // "family:format" -> templates
};

/// Built-in bank, identical to assets/prompt_templates.json.
const TemplateBank& default_template_bank();

/// Parses the JSON asset format. Throws std::runtime_error when malformed.
TemplateBank template_bank_from_json(std::string_view text);

/// The verbatim system prompt shipped alongside generated task files.
std::string_view system_prompt();

/// One task per requested format. Plain text joins normalized line texts in
/// reading order; text2d renders the layout grid; lines/paragraphs reference
/// the span lists. Requesting paragraphs on a page without paragraph
/// annotations throws std::invalid_argument.
std::vector<TaskInstance> build_reading_tasks(const PageRecord& page,
                                              const std::vector<OutputFormat>& formats);

TaskInstance build_detection_task(const PageRecord& page, Granularity granularity);

/// Positive queries are word-aligned substrings (1-4 words) sampled from
/// normalized line texts; references hold the boxes of every line whose
/// normalized text contains the query. Negatives are random strings verified
/// absent; their reference is an empty box list. Degenerate pages yield
/// fewer tasks plus a diagnostic.
std::vector<TaskInstance> build_conditional_tasks(const PageRecord& page, int n_positive,
                                                  int n_negative, std::uint64_t seed,
                                                  std::vector<std::string>* diagnostics = nullptr);

/// Regions are sampled from the ground-truth boxes of the granularity; the
/// reference joins the normalized texts of every block passing the selection
/// rule at 0.5, in reading order.
std::vector<TaskInstance> build_localized_tasks(const PageRecord& page, Granularity granularity,
                                                int n, std::uint64_t seed,
                                                RegionRule rule = RegionRule::iou);

/// Seeded uniform template choice plus placeholder substitution ({FORMAT},
/// {TARGET}, {q}, {x1}..{y2}, and the determiner/noun image reference).
/// Deterministic given the seed. Throws std::invalid_argument when the bank
/// has no templates for the task's (family, output_format).
std::string render_prompt(const TaskInstance& task, const TemplateBank& bank, std::uint64_t seed);

}  // namespace grocr
