// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/records.hpp"

#include <fstream>
#include <istream>
#include <set>

namespace grocr {

using nlohmann::json;

namespace {

json box_to_json(const Box& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }

json span_to_json(const GroundedSpan& s) {
  return json{{"text", s.text}, {"bbox", box_to_json(s.bbox)}};
}

json spans_to_json(const std::vector<GroundedSpan>& spans) {
  json arr = json::array();
  for (const auto& s : spans) arr.push_back(span_to_json(s));
  return arr;
}

json boxes_to_json(const std::vector<Box>& boxes) {
  json arr = json::array();
  for (const auto& b : boxes) arr.push_back(box_to_json(b));
  return arr;
}

std::array<double, 4> coords_from_json(const json& value) {
  if (!value.is_array() || value.size() != 4) {
    throw input_error("bbox must be a 4-element numeric array");
  }
  std::array<double, 4> coords{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!value[i].is_number()) throw input_error("bbox must be a 4-element numeric array");
    coords[i] = value[i].get<double>();
  }
  return coords;
}

Box box_from_json(const json& value) {
  const auto c = coords_from_json(value);
  const Box b{static_cast<int>(c[0]), static_cast<int>(c[1]), static_cast<int>(c[2]),
              static_cast<int>(c[3])};
  if (b.x1 >= b.x2 || b.y1 >= b.y2) throw input_error("degenerate box in record");
  return b;
}

// Ground-truth spans pass through clip_box; degenerate boxes are dropped and
// tallied instead of raising, since source annotations routinely contain them.
std::vector<GroundedSpan> spans_from_json(const json& value, const ImageDims& dims,
                                          IngestStats* stats) {
  if (!value.is_array()) throw input_error("span list must be an array");
  std::vector<GroundedSpan> spans;
  spans.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_object() || !item.contains("text") || !item.contains("bbox")) {
      throw input_error("span records need \"text\" and \"bbox\"");
    }
    if (!item["text"].is_string()) throw input_error("span \"text\" must be a string");
    const auto clipped = clip_box(coords_from_json(item["bbox"]), dims);
    if (!clipped) {
      if (stats) stats->dropped_boxes += 1;
      continue;
    }
    spans.push_back({item["text"].get<std::string>(), *clipped});
  }
  return spans;
}

template <typename Fn>
auto load_lines(std::istream& in, const std::string& source_name, Fn parse_line) {
  std::vector<decltype(parse_line(json{}))> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
      throw input_error(source_name + ":" + std::to_string(line_no) + ": not valid JSON");
    }
    try {
      records.push_back(parse_line(doc));
    } catch (const input_error& e) {
      throw input_error(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const json::exception& e) {
      throw input_error(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw input_error(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  return in;
}

}  // namespace

json page_to_json(const PageRecord& page) {
  json doc;
  doc["id"] = page.id;
  doc["image"] = json{{"width", page.dims.width}, {"height", page.dims.height}};
  doc["lines"] = spans_to_json(page.lines);
  if (page.paragraphs) doc["paragraphs"] = spans_to_json(*page.paragraphs);
  if (page.words) doc["words"] = spans_to_json(*page.words);
  if (page.dataset) doc["dataset"] = *page.dataset;
  return doc;
}

PageRecord page_from_json(const json& doc, IngestStats* stats) {
  PageRecord page;
  if (!doc.is_object()) throw input_error("page record must be an object");
  if (!doc.contains("id") || !doc["id"].is_string() || doc["id"].get<std::string>().empty()) {
    throw input_error("page record needs a nonempty string \"id\"");
  }
  page.id = doc["id"].get<std::string>();
  if (!doc.contains("image") || !doc["image"].is_object()) {
    throw input_error("page record needs an \"image\" object");
  }
  const json& image = doc["image"];
  if (!image.contains("width") || !image.contains("height") ||
      !image["width"].is_number_integer() || !image["height"].is_number_integer()) {
    throw input_error("\"image\" needs integer width and height");
  }
  page.dims.width = image["width"].get<int>();
  page.dims.height = image["height"].get<int>();
  if (page.dims.width < 1 || page.dims.height < 1) {
    throw input_error("image dimensions must be >= 1");
  }
  if (!doc.contains("lines")) throw input_error("page record needs \"lines\"");
  page.lines = spans_from_json(doc["lines"], page.dims, stats);
  if (doc.contains("paragraphs")) {
    page.paragraphs = spans_from_json(doc["paragraphs"], page.dims, stats);
  }
  if (doc.contains("words")) page.words = spans_from_json(doc["words"], page.dims, stats);
  if (doc.contains("dataset")) {
    if (!doc["dataset"].is_string()) throw input_error("\"dataset\" must be a string");
    page.dataset = doc["dataset"].get<std::string>();
  }
  if (stats) stats->pages += 1;
  return page;
}

json task_to_json(const TaskInstance& task) {
  json doc;
  doc["task_id"] = task.task_id;
  doc["page_id"] = task.page_id;
  doc["family"] = to_string(task.family);
  doc["output_format"] = to_string(task.output_format);
  doc["image"] = json{{"width", task.dims.width}, {"height", task.dims.height}};
  doc["prompt"] = task.prompt;
  if (task.query) doc["query"] = *task.query;
  if (task.region) doc["region"] = box_to_json(*task.region);
  if (task.dataset) doc["dataset"] = *task.dataset;
  if (const auto* text = std::get_if<std::string>(&task.reference)) {
    doc["reference"] = *text;
  } else if (const auto* spans = std::get_if<std::vector<GroundedSpan>>(&task.reference)) {
    doc["reference"] = spans_to_json(*spans);
  } else {
    doc["reference"] = boxes_to_json(std::get<std::vector<Box>>(task.reference));
  }
  return doc;
}

TaskInstance task_from_json(const json& doc) {
  TaskInstance task;
  if (!doc.is_object()) throw input_error("task record must be an object");
  for (const char* key : {"task_id", "page_id", "family", "output_format", "prompt"}) {
    if (!doc.contains(key) || !doc[key].is_string()) {
      throw input_error(std::string("task record needs string \"") + key + "\"");
    }
  }
  task.task_id = doc["task_id"].get<std::string>();
  task.page_id = doc["page_id"].get<std::string>();
  task.family = family_from_string(doc["family"].get<std::string>());
  task.output_format = output_format_from_string(doc["output_format"].get<std::string>());
  task.prompt = doc["prompt"].get<std::string>();
  if (!doc.contains("image") || !doc["image"].is_object()) {
    throw input_error("task record needs an \"image\" object with width/height");
  }
  task.dims.width = doc["image"]["width"].get<int>();
  task.dims.height = doc["image"]["height"].get<int>();
  if (task.dims.width < 1 || task.dims.height < 1) {
    throw input_error("task image dimensions must be >= 1");
  }
  if (doc.contains("query")) task.query = doc["query"].get<std::string>();
  if (doc.contains("region")) task.region = box_from_json(doc["region"]);
  if (doc.contains("dataset")) task.dataset = doc["dataset"].get<std::string>();
  if (!doc.contains("reference")) throw input_error("task record needs \"reference\"");
  const json& ref = doc["reference"];
  const bool text_like = task.output_format == OutputFormat::text ||
                         task.output_format == OutputFormat::text2d;
  if (task.family == Family::localized_reading || (task.family == Family::reading && text_like)) {
    if (!ref.is_string()) throw input_error("reference must be a string for this task");
    task.reference = ref.get<std::string>();
  } else if (task.family == Family::reading) {
    IngestStats stats;
    task.reference = spans_from_json(ref, task.dims, &stats);
    if (stats.dropped_boxes > 0) throw input_error("reference contains degenerate boxes");
  } else {
    if (!ref.is_array()) throw input_error("reference must be a box array for this task");
    std::vector<Box> boxes;
    boxes.reserve(ref.size());
    for (const auto& item : ref) boxes.push_back(box_from_json(item));
    task.reference = std::move(boxes);
  }
  if (task.family == Family::conditional_detection && !task.query) {
    throw input_error("conditional detection task needs \"query\"");
  }
  if (task.family == Family::localized_reading && !task.region) {
    throw input_error("localized reading task needs \"region\"");
  }
  return task;
}

PredictionRecord prediction_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("task_id") || !doc["task_id"].is_string() ||
      !doc.contains("raw_output") || !doc["raw_output"].is_string()) {
    throw input_error("prediction record needs string \"task_id\" and \"raw_output\"");
  }
  return {doc["task_id"].get<std::string>(), doc["raw_output"].get<std::string>()};
}

json result_to_json(const TaskResult& result) {
  json doc;
  doc["task_id"] = result.task_id;
  doc["family"] = to_string(result.family);
  doc["output_format"] = to_string(result.output_format);
  doc["metrics"] = result.metrics;
  doc["parse_kind"] = to_string(result.parse_kind);
  if (result.dataset) doc["dataset"] = *result.dataset;
  if (!result.diagnostics.empty()) doc["diagnostics"] = result.diagnostics;
  return doc;
}

std::vector<PageRecord> load_pages(std::istream& in, const std::string& source_name,
                                   IngestStats* stats) {
  auto pages = load_lines(in, source_name, [&](const json& doc) {
    return page_from_json(doc, stats);
  });
  std::set<std::string> ids;
  for (const auto& page : pages) {
    if (!ids.insert(page.id).second) {
      throw input_error(source_name + ": duplicate page id '" + page.id + "'");
    }
  }
  return pages;
}

std::vector<TaskInstance> load_tasks(std::istream& in, const std::string& source_name) {
  return load_lines(in, source_name, [](const json& doc) { return task_from_json(doc); });
}

std::vector<PredictionRecord> load_predictions(std::istream& in, const std::string& source_name) {
  auto preds = load_lines(in, source_name,
                          [](const json& doc) { return prediction_from_json(doc); });
  std::set<std::string> ids;
  for (const auto& pred : preds) {
    if (!ids.insert(pred.task_id).second) {
      throw input_error(source_name + ": duplicate prediction for task '" + pred.task_id + "'");
    }
  }
  return preds;
}

std::vector<PageRecord> load_pages_file(const std::string& path, IngestStats* stats) {
  auto in = open_or_throw(path);
  return load_pages(in, path, stats);
}

std::vector<TaskInstance> load_tasks_file(const std::string& path) {
  auto in = open_or_throw(path);
  return load_tasks(in, path);
}

std::vector<PredictionRecord> load_predictions_file(const std::string& path) {
  auto in = open_or_throw(path);
  return load_predictions(in, path);
}

std::string reference_as_raw_output(const TaskInstance& task) {
  if (const auto* text = std::get_if<std::string>(&task.reference)) {
    return *text;
  }
  if (const auto* spans = std::get_if<std::vector<GroundedSpan>>(&task.reference)) {
    return spans_to_json(*spans).dump();
  }
  return boxes_to_json(std::get<std::vector<Box>>(task.reference)).dump();
}

}  // namespace grocr
