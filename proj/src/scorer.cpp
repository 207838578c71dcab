// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/scorer.hpp"

#include <stdexcept>

#include "grocr/detmatch.hpp"
#include "grocr/e2emetrics.hpp"
#include "grocr/textmetrics.hpp"

namespace grocr {

namespace {

bool parse_kind_fits(OutputFormat format, ParseKind kind) {
  if (kind == ParseKind::invalid) return true;
  switch (format) {
    case OutputFormat::text:
    case OutputFormat::text2d:
      return kind == ParseKind::plain_text;
    case OutputFormat::lines:
    case OutputFormat::paragraphs:
      return kind == ParseKind::spans;
    case OutputFormat::box:
      return kind == ParseKind::boxes;
  }
  return false;
}

const std::string& reference_text(const TaskInstance& task) {
  const auto* ref = std::get_if<std::string>(&task.reference);
  if (!ref) throw std::logic_error("task " + task.task_id + ": expected a text reference");
  return *ref;
}

const std::vector<GroundedSpan>& reference_spans(const TaskInstance& task) {
  const auto* ref = std::get_if<std::vector<GroundedSpan>>(&task.reference);
  if (!ref) throw std::logic_error("task " + task.task_id + ": expected a span reference");
  return *ref;
}

const std::vector<Box>& reference_boxes(const TaskInstance& task) {
  const auto* ref = std::get_if<std::vector<Box>>(&task.reference);
  if (!ref) throw std::logic_error("task " + task.task_id + ": expected a box reference");
  return *ref;
}

void score_plain_text(const TaskInstance& task, const ParsedOutput& parsed, TaskResult& result) {
  if (parsed.kind == ParseKind::invalid) {
    result.metrics["cer"] = 1.0;
    result.metrics["wer"] = 1.0;
    return;
  }
  const bool two_d = task.output_format == OutputFormat::text2d;
  result.metrics["cer"] = cer(parsed.text, reference_text(task), two_d);
  result.metrics["wer"] = wer(parsed.text, reference_text(task));
}

void score_grounded_reading(const TaskInstance& task, const ParsedOutput& parsed,
                            TaskResult& result) {
  if (parsed.kind == ParseKind::invalid) {
    result.metrics["cer_e2e"] = 1.0;
    result.metrics["mcer"] = 1.0;
    result.metrics["f1"] = 0.0;
    result.metrics["recall"] = 0.0;
    result.metrics["precision"] = 0.0;
    return;
  }
  const auto& refs = reference_spans(task);
  result.metrics["cer_e2e"] = cer_e2e(parsed.spans, refs, task.dims);
  result.metrics["mcer"] = mcer_at(parsed.spans, refs, kIouThreshold);
  std::vector<Box> pred_boxes;
  pred_boxes.reserve(parsed.spans.size());
  for (const auto& s : parsed.spans) pred_boxes.push_back(s.bbox);
  std::vector<Box> ref_boxes;
  ref_boxes.reserve(refs.size());
  for (const auto& s : refs) ref_boxes.push_back(s.bbox);
  const DetectionScores det = detection_scores(pred_boxes, ref_boxes, kIouThreshold);
  result.metrics["f1"] = det.f1;
  result.metrics["recall"] = det.recall;
  result.metrics["precision"] = det.precision;
}

void score_detection(const TaskInstance& task, const ParsedOutput& parsed, TaskResult& result) {
  if (parsed.kind == ParseKind::invalid) {
    result.metrics["f1"] = 0.0;
    result.metrics["recall"] = 0.0;
    result.metrics["precision"] = 0.0;
    return;
  }
  const DetectionScores det = detection_scores(parsed.boxes, reference_boxes(task), kIouThreshold);
  result.metrics["f1"] = det.f1;
  result.metrics["recall"] = det.recall;
  result.metrics["precision"] = det.precision;
}

}  // namespace

TaskResult score_task(const TaskInstance& task, const ParsedOutput& parsed) {
  if (!parse_kind_fits(task.output_format, parsed.kind)) {
    throw std::logic_error("task " + task.task_id + ": parsed output kind " +
                           to_string(parsed.kind) + " does not fit format " +
                           to_string(task.output_format));
  }
  TaskResult result;
  result.task_id = task.task_id;
  result.family = task.family;
  result.output_format = task.output_format;
  result.parse_kind = parsed.kind;
  result.diagnostics = parsed.diagnostics;
  result.dataset = task.dataset;

  switch (task.family) {
    case Family::reading:
      if (task.output_format == OutputFormat::text || task.output_format == OutputFormat::text2d) {
        score_plain_text(task, parsed, result);
      } else {
        score_grounded_reading(task, parsed, result);
      }
      break;
    case Family::localized_reading:
      score_plain_text(task, parsed, result);
      break;
    case Family::detection:
    case Family::conditional_detection:
      score_detection(task, parsed, result);
      break;
  }
  return result;
}

void Aggregates::add(const TaskResult& result) {
  const std::string group = to_string(result.family) + ":" + to_string(result.output_format);
  const std::string dataset = result.dataset.value_or("unlabeled");
  for (const auto& [name, value] : result.metrics) {
    auto& overall = by_group[group][name];
    overall.sum += value;
    overall.count += 1;
    auto& per_dataset = by_dataset[dataset][group][name];
    per_dataset.sum += value;
    per_dataset.count += 1;
  }
  total_tasks += 1;
  if (result.parse_kind == ParseKind::invalid) invalid_parses += 1;
}

void Aggregates::merge(const Aggregates& other) {
  for (const auto& [group, metrics] : other.by_group) {
    for (const auto& [name, sum] : metrics) {
      auto& mine = by_group[group][name];
      mine.sum += sum.sum;
      mine.count += sum.count;
    }
  }
  for (const auto& [dataset, groups] : other.by_dataset) {
    for (const auto& [group, metrics] : groups) {
      for (const auto& [name, sum] : metrics) {
        auto& mine = by_dataset[dataset][group][name];
        mine.sum += sum.sum;
        mine.count += sum.count;
      }
    }
  }
  total_tasks += other.total_tasks;
  invalid_parses += other.invalid_parses;
}

Aggregates aggregate(const std::vector<TaskResult>& results) {
  Aggregates agg;
  for (const auto& result : results) agg.add(result);
  return agg;
}

double composite(double err_text, double err_text2d, double err_lines, double err_localized,
                 double f1_detection, double f1_conditional) {
  const double inputs[] = {err_text, err_text2d, err_lines, err_localized, f1_detection,
                           f1_conditional};
  for (double v : inputs) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::out_of_range("composite: input outside [0,1]");
    }
  }
  return ((1.0 - err_text) + (1.0 - err_text2d) + (1.0 - err_lines) + (1.0 - err_localized) +
          f1_detection + f1_conditional) /
         6.0;
}

namespace {

// The six Table-style composite ingredients: group name and metric.
struct Ingredient {
  const char* group;
  const char* metric;
};
constexpr Ingredient kIngredients[] = {
    {"reading:text", "cer"},           {"reading:text2d", "cer"},
    {"reading:lines", "cer_e2e"},      {"localized_reading:text", "cer"},
    {"detection:box", "f1"},           {"conditional_detection:box", "f1"},
};

std::optional<double> lookup(const std::map<std::string, std::map<std::string, double>>& means,
                             const Ingredient& ing) {
  const auto group_it = means.find(ing.group);
  if (group_it == means.end()) return std::nullopt;
  const auto metric_it = group_it->second.find(ing.metric);
  if (metric_it == group_it->second.end()) return std::nullopt;
  return metric_it->second;
}

std::optional<double> composite_from(
    const std::map<std::string, std::map<std::string, double>>& means, std::string& note) {
  double values[6];
  for (std::size_t i = 0; i < 6; ++i) {
    const auto v = lookup(means, kIngredients[i]);
    if (!v) {
      note = std::string("composite unavailable: no tasks for ") + kIngredients[i].group;
      return std::nullopt;
    }
    values[i] = *v;
  }
  return composite(values[0], values[1], values[2], values[3], values[4], values[5]);
}

std::map<std::string, std::map<std::string, double>> means_of(
    const std::map<std::string, std::map<std::string, MetricSum>>& sums) {
  std::map<std::string, std::map<std::string, double>> means;
  for (const auto& [group, metrics] : sums) {
    for (const auto& [name, sum] : metrics) {
      if (sum.count > 0) means[group][name] = sum.sum / static_cast<double>(sum.count);
    }
  }
  return means;
}

}  // namespace

CompositeReport build_report(const Aggregates& aggregates, std::int64_t missing_predictions) {
  CompositeReport report;
  report.total_tasks = aggregates.total_tasks;
  report.invalid_parses = aggregates.invalid_parses;
  report.missing_predictions = missing_predictions;
  report.overall = means_of(aggregates.by_group);
  for (const auto& [dataset, groups] : aggregates.by_dataset) {
    report.datasets[dataset] = means_of(groups);
  }

  // Macro: unweighted mean over datasets of per-dataset group means.
  std::map<std::string, std::map<std::string, double>> macro;
  {
    std::map<std::string, std::map<std::string, MetricSum>> acc;
    for (const auto& [dataset, groups] : report.datasets) {
      for (const auto& [group, metrics] : groups) {
        for (const auto& [name, value] : metrics) {
          auto& slot = acc[group][name];
          slot.sum += value;
          slot.count += 1;
        }
      }
    }
    macro = means_of(acc);
  }

  std::string note_macro;
  std::string note_micro;
  report.composite_macro = composite_from(macro, note_macro);
  report.composite_micro = composite_from(report.overall, note_micro);
  report.note = note_macro.empty() ? note_micro : note_macro;
  return report;
}

nlohmann::json CompositeReport::to_json() const {
  nlohmann::json doc;
  doc["total_tasks"] = total_tasks;
  doc["invalid_parses"] = invalid_parses;
  doc["missing_predictions"] = missing_predictions;
  doc["overall"] = overall;
  doc["datasets"] = datasets;
  if (composite_macro) {
    doc["composite"] = *composite_macro;
  } else {
    doc["composite"] = nullptr;
  }
  if (composite_micro) {
    doc["composite_micro"] = *composite_micro;
  } else {
    doc["composite_micro"] = nullptr;
  }
  if (!note.empty()) doc["note"] = note;
  return doc;
}

}  // namespace grocr
