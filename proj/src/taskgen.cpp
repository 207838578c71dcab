// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/taskgen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "grocr/e2emetrics.hpp"
#include "grocr/embedded_assets.hpp"
#include "grocr/rng.hpp"
#include "grocr/text2d.hpp"
#include "grocr/textnorm.hpp"

namespace grocr {

namespace {

constexpr double kRegionThreshold = 0.5;

std::string granularity_name(Granularity g) {
  return g == Granularity::lines ? "lines" : "paragraphs";
}

const std::vector<GroundedSpan>& spans_for(const PageRecord& page, Granularity g) {
  if (g == Granularity::lines) return page.lines;
  if (!page.paragraphs) {
    throw std::invalid_argument("page '" + page.id + "' has no paragraph annotations");
  }
  return *page.paragraphs;
}

std::string joined_reading_text(const std::vector<GroundedSpan>& spans) {
  const std::vector<GroundedSpan> ordered = e2e_reading_order(spans);
  std::string out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i) out.push_back('\n');
    out += normalize(ordered[i].text);
  }
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t sp = s.find(' ', pos);
    if (sp == std::string::npos) {
      words.push_back(s.substr(pos));
      break;
    }
    if (sp > pos) words.push_back(s.substr(pos, sp - pos));
    pos = sp + 1;
  }
  return words;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace

TemplateBank template_bank_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("template bank: ") + e.what());
  }
  TemplateBank bank;
  bank.determiners = doc.at("determiners").get<std::vector<std::string>>();
  bank.nouns = doc.at("nouns").get<std::vector<std::string>>();
  for (const auto& [key, value] : doc.at("templates").items()) {
    bank.templates[key] = value.get<std::vector<std::string>>();
  }
  if (bank.determiners.empty() || bank.nouns.empty()) {
    throw std::runtime_error("template bank: empty determiner or noun list");
  }
  return bank;
}

const TemplateBank& default_template_bank() {
  static const TemplateBank bank = template_bank_from_json(embedded::kPromptTemplatesJson);
  return bank;
}

std::string_view system_prompt() { return embedded::kSystemPrompt; }

std::vector<TaskInstance> build_reading_tasks(const PageRecord& page,
                                              const std::vector<OutputFormat>& formats) {
  std::vector<TaskInstance> tasks;
  for (OutputFormat format : formats) {
    TaskInstance task;
    task.family = Family::reading;
    task.output_format = format;
    task.page_id = page.id;
    task.dims = page.dims;
    task.dataset = page.dataset;
    task.task_id = page.id + ":reading:" + to_string(format);
    switch (format) {
      case OutputFormat::text:
        task.reference = joined_reading_text(page.lines);
        break;
      case OutputFormat::text2d:
        task.reference = render_text2d(page.lines, page.dims);
        break;
      case OutputFormat::lines:
        task.reference = page.lines;
        break;
      case OutputFormat::paragraphs:
        task.reference = spans_for(page, Granularity::paragraphs);
        break;
      case OutputFormat::box:
        throw std::invalid_argument("box is not a reading output format");
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

TaskInstance build_detection_task(const PageRecord& page, Granularity granularity) {
  const auto& spans = spans_for(page, granularity);
  TaskInstance task;
  task.family = Family::detection;
  task.output_format = OutputFormat::box;
  task.page_id = page.id;
  task.dims = page.dims;
  task.dataset = page.dataset;
  task.task_id = page.id + ":detection:" + granularity_name(granularity);
  task.target_noun = granularity == Granularity::lines ? "LINES" : "PARAGRAPHS";
  std::vector<Box> boxes;
  boxes.reserve(spans.size());
  for (const auto& s : spans) boxes.push_back(s.bbox);
  task.reference = std::move(boxes);
  return task;
}

std::vector<TaskInstance> build_conditional_tasks(const PageRecord& page, int n_positive,
                                                  int n_negative, std::uint64_t seed,
                                                  std::vector<std::string>* diagnostics) {
  std::vector<std::string> norm_lines;
  norm_lines.reserve(page.lines.size());
  for (const auto& line : page.lines) norm_lines.push_back(normalize(line.text));

  const auto boxes_containing = [&](const std::string& query) {
    std::vector<Box> hits;
    for (std::size_t i = 0; i < norm_lines.size(); ++i) {
      // Multiple occurrences inside one line still yield one box.
      if (norm_lines[i].find(query) != std::string::npos) hits.push_back(page.lines[i].bbox);
    }
    return hits;
  };

  Rng rng(seed);
  std::vector<TaskInstance> tasks;
  std::vector<std::string> seen;
  int made_positive = 0;
  const int max_attempts = n_positive * 20 + 50;
  for (int attempt = 0; attempt < max_attempts && made_positive < n_positive; ++attempt) {
    if (norm_lines.empty()) break;
    const std::size_t li = rng.below(norm_lines.size());
    const std::vector<std::string> words = split_words(norm_lines[li]);
    if (words.empty()) continue;
    const std::size_t len = 1 + rng.below(std::min<std::size_t>(4, words.size()));
    const std::size_t start = rng.below(words.size() - len + 1);
    std::string query;
    for (std::size_t w = start; w < start + len; ++w) {
      if (w > start) query.push_back(' ');
      query += words[w];
    }
    if (query.empty() || std::find(seen.begin(), seen.end(), query) != seen.end()) continue;
    seen.push_back(query);

    TaskInstance task;
    task.family = Family::conditional_detection;
    task.output_format = OutputFormat::box;
    task.page_id = page.id;
    task.dims = page.dims;
    task.dataset = page.dataset;
    task.task_id = page.id + ":conditional:" + std::to_string(tasks.size());
    task.query = query;
    task.reference = boxes_containing(query);
    tasks.push_back(std::move(task));
    ++made_positive;
  }
  if (made_positive < n_positive && diagnostics) {
    diagnostics->push_back("page '" + page.id + "': only " + std::to_string(made_positive) + "/" +
                           std::to_string(n_positive) + " positive queries available");
  }

  for (int k = 0; k < n_negative; ++k) {
    std::string query;
    bool found = false;
    for (int attempt = 0; attempt < 100 && !found; ++attempt) {
      query.clear();
      const int len = rng.int_in(6, 10);
      for (int c = 0; c < len; ++c) query.push_back(static_cast<char>('a' + rng.below(26)));
      found = true;
      for (const auto& line : norm_lines) {
        if (line.find(query) != std::string::npos) {
          found = false;
          break;
        }
      }
    }
    if (!found) {
      if (diagnostics) diagnostics->push_back("page '" + page.id + "': no absent query found");
      continue;
    }
    TaskInstance task;
    task.family = Family::conditional_detection;
    task.output_format = OutputFormat::box;
    task.page_id = page.id;
    task.dims = page.dims;
    task.dataset = page.dataset;
    task.task_id = page.id + ":conditional:" + std::to_string(tasks.size());
    task.query = query;
    task.reference = std::vector<Box>{};
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<TaskInstance> build_localized_tasks(const PageRecord& page, Granularity granularity,
                                                int n, std::uint64_t seed, RegionRule rule) {
  const auto& blocks = spans_for(page, granularity);
  Rng rng(seed);

  std::vector<std::size_t> pool(blocks.size());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Fisher-Yates, then take the first n regions.
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::swap(pool[i - 1], pool[rng.below(i)]);
  }
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(std::max(0, n)), pool.size());

  std::vector<TaskInstance> tasks;
  for (std::size_t k = 0; k < count; ++k) {
    const Box region = blocks[pool[k]].bbox;
    std::vector<GroundedSpan> selected;
    for (const auto& block : blocks) {
      const double overlap = rule == RegionRule::iou ? iou(block.bbox, region)
                                                     : coverage(block.bbox, region);
      if (overlap >= kRegionThreshold) selected.push_back(block);
    }
    TaskInstance task;
    task.family = Family::localized_reading;
    task.output_format = OutputFormat::text;
    task.page_id = page.id;
    task.dims = page.dims;
    task.dataset = page.dataset;
    task.task_id = page.id + ":localized:" + granularity_name(granularity) + ":" + std::to_string(k);
    task.region = region;
    task.reference = joined_reading_text(selected);
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::string render_prompt(const TaskInstance& task, const TemplateBank& bank, std::uint64_t seed) {
  const std::string key = to_string(task.family) + ":" + to_string(task.output_format);
  const auto it = bank.templates.find(key);
  if (it == bank.templates.end() || it->second.empty()) {
    throw std::invalid_argument("no prompt templates for " + key);
  }
  Rng rng(seed);
  std::string prompt = it->second[rng.below(it->second.size())];
  const std::string image_ref = bank.determiners[rng.below(bank.determiners.size())] + " " +
                                bank.nouns[rng.below(bank.nouns.size())];
  replace_all(prompt, "{IMAGE}", image_ref);
  replace_all(prompt, "{FORMAT}", to_string(task.output_format));
  if (task.target_noun) replace_all(prompt, "{TARGET}", *task.target_noun);
  if (task.query) replace_all(prompt, "{q}", *task.query);
  if (task.region) {
    replace_all(prompt, "{x1}", std::to_string(task.region->x1));
    replace_all(prompt, "{y1}", std::to_string(task.region->y1));
    replace_all(prompt, "{x2}", std::to_string(task.region->x2));
    replace_all(prompt, "{y2}", std::to_string(task.region->y2));
  }
  return prompt;
}

}  // namespace grocr
