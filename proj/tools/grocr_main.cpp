// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0
//
// grocr: grounded OCR evaluation harness.
//
//   grocr make-tasks    build task files from page records
//   grocr score         parse + score raw predictions against a task file
//   grocr text2d        render one page through the layout grid
//   grocr gen-fixtures  emit synthetic page records

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grocr/fixtures.hpp"
#include "grocr/records.hpp"
#include "grocr/rng.hpp"
#include "grocr/scorer.hpp"
#include "grocr/text2d.hpp"
#include "grocr/textnorm.hpp"

namespace {

using namespace grocr;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path);
  return out;
}

// Loads the canonicalization table and template bank at startup. Explicit
// paths win; otherwise the checked-in assets are used when present, falling
// back to the identical built-in copies.
TemplateBank startup_assets(const std::string& charmap_path, const std::string& templates_path) {
  namespace fs = std::filesystem;
  std::string charmap = charmap_path;
#ifdef GROCR_ASSET_DIR
  if (charmap.empty() && fs::exists(fs::path(GROCR_ASSET_DIR) / "charmap.tsv")) {
    charmap = (fs::path(GROCR_ASSET_DIR) / "charmap.tsv").string();
  }
#endif
  if (!charmap.empty()) {
    try {
      set_charmap(charmap_from_tsv(slurp(charmap)));
    } catch (const std::runtime_error& e) {
      throw input_error(std::string("charmap: ") + e.what());
    }
  }

  std::string templates = templates_path;
#ifdef GROCR_ASSET_DIR
  if (templates.empty() && fs::exists(fs::path(GROCR_ASSET_DIR) / "prompt_templates.json")) {
    templates = (fs::path(GROCR_ASSET_DIR) / "prompt_templates.json").string();
  }
#endif
  if (!templates.empty()) {
    try {
      return template_bank_from_json(slurp(templates));
    } catch (const std::runtime_error& e) {
      throw input_error(std::string("templates: ") + e.what());
    }
  }
  return default_template_bank();
}

// Index-ordered worker pool: results land by input index, so output files
// are identical regardless of worker count.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  const int count = std::min<int>(workers, static_cast<int>(std::thread::hardware_concurrency()) * 2 + 2);
  for (int w = 0; w < count; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct MakeTasksOptions {
  std::vector<std::string> pages_paths;
  std::vector<std::string> dataset_labels;
  std::string out_path;
  std::vector<std::string> families{"reading", "detection", "conditional_detection",
                                    "localized_reading"};
  std::vector<std::string> formats{"text", "text2d", "lines"};
  std::string det_granularity = "lines";
  std::string local_granularity = "lines";
  std::string local_rule = "iou";
  int n_conditional_pos = 2;
  int n_conditional_neg = 1;
  int n_localized = 2;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string charmap_path;
  std::string templates_path;
  std::string system_prompt_out;
  bool no_system_prompt = false;
};

Granularity granularity_from(const std::string& name) {
  if (name == "lines") return Granularity::lines;
  if (name == "paragraphs") return Granularity::paragraphs;
  throw input_error("granularity must be 'lines' or 'paragraphs', got '" + name + "'");
}

// A corpus manifest is one or more page files, optionally with a dataset
// label per file. Page ids must stay unique across the whole manifest.
std::vector<PageRecord> load_manifest(const std::vector<std::string>& paths,
                                      const std::vector<std::string>& labels) {
  if (!labels.empty() && labels.size() != paths.size()) {
    throw input_error("--datasets needs one label per --pages file");
  }
  IngestStats ingest;
  std::vector<PageRecord> pages;
  for (std::size_t f = 0; f < paths.size(); ++f) {
    auto part = load_pages_file(paths[f], &ingest);
    if (!labels.empty()) {
      for (auto& page : part) {
        if (!page.dataset) page.dataset = labels[f];  // explicit page labels win
      }
    }
    pages.insert(pages.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  }
  std::set<std::string> ids;
  for (const auto& page : pages) {
    if (!ids.insert(page.id).second) {
      throw input_error("duplicate page id '" + page.id + "' across the manifest");
    }
  }
  if (ingest.dropped_boxes > 0) {
    std::cerr << "note: dropped " << ingest.dropped_boxes << " degenerate ground-truth boxes\n";
  }
  return pages;
}

int run_make_tasks(const MakeTasksOptions& opt) {
  const TemplateBank bank = startup_assets(opt.charmap_path, opt.templates_path);
  const auto pages = load_manifest(opt.pages_paths, opt.dataset_labels);

  std::vector<OutputFormat> reading_formats;
  for (const auto& f : opt.formats) reading_formats.push_back(output_format_from_string(f));
  const Granularity det_gran = granularity_from(opt.det_granularity);
  const Granularity local_gran = granularity_from(opt.local_granularity);
  RegionRule rule;
  if (opt.local_rule == "iou") {
    rule = RegionRule::iou;
  } else if (opt.local_rule == "coverage") {
    rule = RegionRule::coverage;
  } else {
    throw input_error("--local-rule must be 'iou' or 'coverage'");
  }

  const auto wants = [&](const char* family) {
    for (const auto& f : opt.families) {
      if (f == family) return true;
    }
    return false;
  };

  std::vector<std::vector<TaskInstance>> per_page(pages.size());
  std::vector<std::string> diagnostics;
  std::mutex diag_mutex;
  parallel_for(pages.size(), opt.workers, [&](std::size_t i) {
    const PageRecord& page = pages[i];
    const std::uint64_t page_seed = hash_combine(opt.seed, stable_hash64(page.id));
    std::vector<TaskInstance> tasks;
    std::vector<std::string> page_diags;
    if (wants("reading")) {
      auto reading = build_reading_tasks(page, reading_formats);
      tasks.insert(tasks.end(), std::make_move_iterator(reading.begin()),
                   std::make_move_iterator(reading.end()));
    }
    if (wants("detection")) {
      tasks.push_back(build_detection_task(page, det_gran));
    }
    if (wants("conditional_detection")) {
      auto conditional = build_conditional_tasks(
          page, opt.n_conditional_pos, opt.n_conditional_neg,
          hash_combine(page_seed, stable_hash64("conditional")), &page_diags);
      tasks.insert(tasks.end(), std::make_move_iterator(conditional.begin()),
                   std::make_move_iterator(conditional.end()));
    }
    if (wants("localized_reading")) {
      auto localized = build_localized_tasks(page, local_gran, opt.n_localized,
                                             hash_combine(page_seed, stable_hash64("localized")),
                                             rule);
      tasks.insert(tasks.end(), std::make_move_iterator(localized.begin()),
                   std::make_move_iterator(localized.end()));
    }
    for (auto& task : tasks) {
      task.prompt = render_prompt(task, bank, hash_combine(opt.seed, stable_hash64(task.task_id)));
    }
    per_page[i] = std::move(tasks);
    if (!page_diags.empty()) {
      std::lock_guard<std::mutex> lock(diag_mutex);
      diagnostics.insert(diagnostics.end(), page_diags.begin(), page_diags.end());
    }
  });

  auto out = open_out(opt.out_path);
  std::size_t written = 0;
  for (const auto& tasks : per_page) {
    for (const auto& task : tasks) {
      out << task_to_json(task).dump() << '\n';
      ++written;
    }
  }
  for (const auto& diag : diagnostics) std::cerr << "note: " << diag << '\n';

  if (!opt.no_system_prompt) {
    std::filesystem::path prompt_path = opt.system_prompt_out.empty()
        ? std::filesystem::path(opt.out_path).parent_path() / "system_prompt.txt"
        : std::filesystem::path(opt.system_prompt_out);
    auto prompt_out = open_out(prompt_path.string());
    prompt_out << system_prompt();
  }

  std::cerr << "wrote " << written << " tasks for " << pages.size() << " pages to " << opt.out_path
            << '\n';
  return 0;
}

struct ScoreOptions {
  std::string tasks_path;
  std::string predictions_path;
  std::string results_path;
  std::string report_path;
  std::string coords = "pixel";
  int workers = 1;
  std::string charmap_path;
};

int run_score(const ScoreOptions& opt) {
  startup_assets(opt.charmap_path, "");
  CoordSpace coords;
  if (opt.coords == "pixel") {
    coords = CoordSpace::pixel;
  } else if (opt.coords == "normalized:1000") {
    coords = CoordSpace::normalized_1000;
  } else {
    throw input_error("--coords must be 'pixel' or 'normalized:1000'");
  }

  const auto tasks = load_tasks_file(opt.tasks_path);
  const auto predictions = load_predictions_file(opt.predictions_path);

  std::unordered_map<std::string, const std::string*> by_task;
  by_task.reserve(predictions.size());
  for (const auto& pred : predictions) by_task[pred.task_id] = &pred.raw_output;

  std::size_t known = 0;
  std::unordered_map<std::string, bool> task_ids;
  task_ids.reserve(tasks.size());
  for (const auto& task : tasks) task_ids.emplace(task.task_id, true);
  for (const auto& pred : predictions) {
    if (task_ids.count(pred.task_id)) {
      ++known;
    } else {
      std::cerr << "warning: prediction for unknown task '" << pred.task_id << "' ignored\n";
    }
  }

  std::int64_t missing = 0;
  std::vector<TaskResult> results(tasks.size());
  std::atomic<std::int64_t> missing_count{0};
  parallel_for(tasks.size(), opt.workers, [&](std::size_t i) {
    const TaskInstance& task = tasks[i];
    ParsedOutput parsed;
    const auto it = by_task.find(task.task_id);
    if (it == by_task.end()) {
      parsed.kind = ParseKind::invalid;
      parsed.diagnostics = {"missing prediction"};
      missing_count.fetch_add(1);
    } else {
      parsed = parse_prediction(*it->second, task.output_format, task.dims, coords);
    }
    results[i] = score_task(task, parsed);
  });
  missing = missing_count.load();

  auto results_out = open_out(opt.results_path);
  for (const auto& result : results) {
    results_out << result_to_json(result).dump() << '\n';
  }

  const CompositeReport report = build_report(aggregate(results), missing);
  auto report_out = open_out(opt.report_path);
  report_out << report.to_json().dump(2) << '\n';

  std::cerr << "scored " << tasks.size() << " tasks (" << known << " predictions matched, "
            << missing << " missing)\n";
  return 0;
}

int run_text2d(const std::string& pages_path, const std::string& page_id,
               const std::string& charmap_path) {
  startup_assets(charmap_path, "");
  const auto pages = load_pages_file(pages_path);
  for (const auto& page : pages) {
    if (page.id == page_id) {
      std::cout << render_text2d(page.lines, page.dims) << '\n';
      return 0;
    }
  }
  throw input_error("no page with id '" + page_id + "' in " + pages_path);
}

int run_gen_fixtures(std::uint64_t seed, int n, const std::string& out_path) {
  if (n < 0) throw input_error("--n must be >= 0");
  const auto pages = generate_fixture_pages(seed, n);
  auto out = open_out(out_path);
  for (const auto& page : pages) {
    out << page_to_json(page).dump() << '\n';
  }
  std::cerr << "wrote " << pages.size() << " pages to " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grounded OCR evaluation toolkit"};
  app.require_subcommand(1);

  MakeTasksOptions make_opt;
  CLI::App* make = app.add_subcommand("make-tasks", "build task files from page records");
  make->add_option("--pages", make_opt.pages_paths, "page record files (JSONL), repeatable")
      ->required();
  make->add_option("--datasets", make_opt.dataset_labels,
                   "dataset label per --pages file (default: labels inside the records)")
      ->delimiter(',');
  make->add_option("--out", make_opt.out_path, "output task file (JSONL)")->required();
  make->add_option("--families", make_opt.families, "task families to build")->delimiter(',');
  make->add_option("--formats", make_opt.formats, "reading output formats")->delimiter(',');
  make->add_option("--det-granularity", make_opt.det_granularity, "detection granularity");
  make->add_option("--local-granularity", make_opt.local_granularity,
                   "localized reading granularity");
  make->add_option("--local-rule", make_opt.local_rule,
                   "localized block selection rule: iou|coverage");
  make->add_option("--n-conditional-pos", make_opt.n_conditional_pos,
                   "positive conditional queries per page");
  make->add_option("--n-conditional-neg", make_opt.n_conditional_neg,
                   "negative conditional queries per page");
  make->add_option("--n-localized", make_opt.n_localized, "localized regions per page");
  make->add_option("--seed", make_opt.seed, "corpus seed");
  make->add_option("--workers", make_opt.workers, "worker threads");
  make->add_option("--charmap", make_opt.charmap_path, "canonicalization table override");
  make->add_option("--templates", make_opt.templates_path, "prompt template bank override");
  make->add_option("--system-prompt-out", make_opt.system_prompt_out,
                   "where to copy the system prompt (default: next to --out)");
  make->add_flag("--no-system-prompt", make_opt.no_system_prompt,
                 "do not emit the system prompt file");

  ScoreOptions score_opt;
  CLI::App* score = app.add_subcommand("score", "score raw predictions against a task file");
  score->add_option("--tasks", score_opt.tasks_path, "task file (JSONL)")->required();
  score->add_option("--predictions", score_opt.predictions_path, "prediction file (JSONL)")
      ->required();
  score->add_option("--results", score_opt.results_path, "per-task results output (JSONL)")
      ->required();
  score->add_option("--report", score_opt.report_path, "report document output (JSON)")
      ->required();
  score->add_option("--coords", score_opt.coords,
                    "coordinate space of predicted boxes: pixel|normalized:1000");
  score->add_option("--workers", score_opt.workers, "worker threads");
  score->add_option("--charmap", score_opt.charmap_path, "canonicalization table override");

  std::string t2d_pages;
  std::string t2d_id;
  std::string t2d_charmap;
  CLI::App* t2d = app.add_subcommand("text2d", "render one page through the layout grid");
  t2d->add_option("--pages", t2d_pages, "page records (JSONL)")->required();
  t2d->add_option("--id", t2d_id, "page id")->required();
  t2d->add_option("--charmap", t2d_charmap, "canonicalization table override");

  std::uint64_t gen_seed = 0;
  int gen_n = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen-fixtures", "emit synthetic page records");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--n", gen_n, "number of pages")->required();
  gen->add_option("--out", gen_out, "output page file (JSONL)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (make->parsed()) return run_make_tasks(make_opt);
    if (score->parsed()) return run_score(score_opt);
    if (t2d->parsed()) return run_text2d(t2d_pages, t2d_id, t2d_charmap);
    if (gen->parsed()) return run_gen_fixtures(gen_seed, gen_n, gen_out);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
