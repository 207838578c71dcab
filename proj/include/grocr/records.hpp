// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "grocr/scorer.hpp"
#include "grocr/taskgen.hpp"

namespace grocr {

/// Malformed input data (bad schema, duplicate ids, unreadable files).
/// The CLI maps this to exit code 1.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PredictionRecord {
  std::string task_id;
  std::string raw_output;
};

/// Counters from page ingestion; degenerate boxes are dropped silently and
/// tallied here rather than raising.
struct IngestStats {
  std::int64_t pages = 0;
  std::int64_t dropped_boxes = 0;
};

nlohmann::json page_to_json(const PageRecord& page);
nlohmann::json task_to_json(const TaskInstance& task);
nlohmann::json result_to_json(const TaskResult& result);

/// Parsers throw input_error with a line-number prefix supplied by the
/// loaders below.
PageRecord page_from_json(const nlohmann::json& doc, IngestStats* stats = nullptr);
TaskInstance task_from_json(const nlohmann::json& doc);
PredictionRecord prediction_from_json(const nlohmann::json& doc);

/// Line-delimited record readers. Blank lines are ignored. Page ids must be
/// unique; duplicate prediction task_ids are an error.
std::vector<PageRecord> load_pages(std::istream& in, const std::string& source_name,
                                   IngestStats* stats = nullptr);
std::vector<TaskInstance> load_tasks(std::istream& in, const std::string& source_name);
std::vector<PredictionRecord> load_predictions(std::istream& in, const std::string& source_name);

std::vector<PageRecord> load_pages_file(const std::string& path, IngestStats* stats = nullptr);
std::vector<TaskInstance> load_tasks_file(const std::string& path);
std::vector<PredictionRecord> load_predictions_file(const std::string& path);

/// Serializes a reference payload the way a perfect model would answer:
/// plain strings verbatim, span lists as [{"text","bbox"}], box lists as
/// [[x1,y1,x2,y2],...].
std::string reference_as_raw_output(const TaskInstance& task);

}  // namespace grocr
