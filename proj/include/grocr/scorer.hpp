// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grocr/outparse.hpp"
#include "grocr/taskgen.hpp"

namespace grocr {

/// IoU threshold used throughout the protocol.
inline constexpr double kIouThreshold = 0.5;

struct TaskResult {
  std::string task_id;
  Family family = Family::reading;
  OutputFormat output_format = OutputFormat::text;
  std::map<std::string, double> metrics;
  ParseKind parse_kind = ParseKind::invalid;
  std::vector<std::string> diagnostics;
  std::optional<std::string> dataset;
};

/// Metric set per (family, output_format):
///   reading text/text2d and localized reading -> cer, wer
///   reading lines/paragraphs -> cer_e2e, mcer (+ f1/recall/precision tallies)
///   detection, conditional detection -> f1, recall, precision
/// Invalid parses take maximal error: all error rates 1, detection scores 0.
/// A parsed kind inconsistent with the task's output format is a programming
/// error and throws std::logic_error.
TaskResult score_task(const TaskInstance& task, const ParsedOutput& parsed);

/// Associative partial sums: merging shard aggregates equals aggregating the
/// whole corpus.
struct MetricSum {
  double sum = 0.0;
  std::int64_t count = 0;
};

struct Aggregates {
  // "family:output_format" -> metric name -> partial sum.
  std::map<std::string, std::map<std::string, MetricSum>> by_group;
  // dataset -> group -> metric -> partial sum.
  std::map<std::string, std::map<std::string, std::map<std::string, MetricSum>>> by_dataset;
  std::int64_t total_tasks = 0;
  std::int64_t invalid_parses = 0;

  void add(const TaskResult& result);
  void merge(const Aggregates& other);
};

Aggregates aggregate(const std::vector<TaskResult>& results);

/// Mean of the four (1 - reading error) scores and the two detection F1
/// values. Inputs outside [0,1] are rejected with std::out_of_range.
double composite(double err_text, double err_text2d, double err_lines, double err_localized,
                 double f1_detection, double f1_conditional);

/// Per-family / per-dataset means plus the composite, for the report file.
/// The default composite is macro over datasets; the micro (per-task)
/// variant is reported alongside.
struct CompositeReport {
  std::map<std::string, std::map<std::string, double>> overall;  // group -> metric -> mean
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> datasets;
  std::optional<double> composite_macro;
  std::optional<double> composite_micro;
  std::string note;  // set when the composite cannot be formed
  std::int64_t total_tasks = 0;
  std::int64_t invalid_parses = 0;
  std::int64_t missing_predictions = 0;

  nlohmann::json to_json() const;
};

CompositeReport build_report(const Aggregates& aggregates, std::int64_t missing_predictions = 0);

}  // namespace grocr
