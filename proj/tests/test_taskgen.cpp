// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/taskgen.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

#include "grocr/e2emetrics.hpp"
#include "grocr/fixtures.hpp"
#include "grocr/text2d.hpp"
#include "grocr/textnorm.hpp"

using namespace grocr;

namespace {

PageRecord sample_page() {
  PageRecord page;
  page.id = "p1";
  page.dims = {400, 300};
  page.lines = {
      {"total due 42", {10, 10, 200, 30}},
      {"second line here", {10, 50, 220, 70}},
      {"total again", {10, 90, 150, 110}},
  };
  page.paragraphs = std::vector<GroundedSpan>{
      {"total due 42 second line here", {10, 10, 220, 70}},
      {"total again", {10, 90, 150, 110}},
  };
  return page;
}

}  // namespace

TEST_CASE("build_reading_tasks per format") {
  const PageRecord page = sample_page();
  const auto tasks = build_reading_tasks(page, {OutputFormat::text, OutputFormat::lines});
  REQUIRE(tasks.size() == 2);

  CHECK(tasks[0].family == Family::reading);
  CHECK(tasks[0].output_format == OutputFormat::text);
  CHECK(std::get<std::string>(tasks[0].reference) ==
        "total due 42\nsecond line here\ntotal again");

  CHECK(std::get<std::vector<GroundedSpan>>(tasks[1].reference) == page.lines);

  const auto text2d_task = build_reading_tasks(page, {OutputFormat::text2d});
  CHECK(std::get<std::string>(text2d_task[0].reference) ==
        render_text2d(page.lines, page.dims));
}

TEST_CASE("paragraph reading requires paragraph annotations") {
  PageRecord page = sample_page();
  page.paragraphs.reset();
  CHECK_THROWS_AS(build_reading_tasks(page, {OutputFormat::paragraphs}), std::invalid_argument);
}

TEST_CASE("build_detection_task references boxes only") {
  const PageRecord page = sample_page();
  const TaskInstance lines_task = build_detection_task(page, Granularity::lines);
  CHECK(lines_task.output_format == OutputFormat::box);
  CHECK(std::get<std::vector<Box>>(lines_task.reference).size() == 3);

  const TaskInstance para_task = build_detection_task(page, Granularity::paragraphs);
  CHECK(std::get<std::vector<Box>>(para_task.reference).size() == 2);

  PageRecord empty = page;
  empty.lines.clear();
  CHECK(std::get<std::vector<Box>>(
            build_detection_task(empty, Granularity::lines).reference)
            .empty());
}

TEST_CASE("conditional references cover every matching line") {
  const PageRecord page = sample_page();
  const auto tasks = build_conditional_tasks(page, 4, 2, 7);
  CHECK(!tasks.empty());
  for (const auto& task : tasks) {
    REQUIRE(task.query.has_value());
    const std::string query = normalize(*task.query);
    std::vector<Box> expected;
    for (const auto& line : page.lines) {
      if (normalize(line.text).find(query) != std::string::npos) {
        expected.push_back(line.bbox);
      }
    }
    CHECK(std::get<std::vector<Box>>(task.reference) == expected);
  }
}

TEST_CASE("a query hitting several lines references all of them once each") {
  const PageRecord page = sample_page();
  // "total" appears in lines 0 and 2
  std::vector<Box> expected = {page.lines[0].bbox, page.lines[2].bbox};
  std::vector<Box> hits;
  for (const auto& line : page.lines) {
    if (normalize(line.text).find("total") != std::string::npos) hits.push_back(line.bbox);
  }
  CHECK(hits == expected);

  // a query repeated inside one line still yields a single box
  PageRecord repeat = page;
  repeat.lines[0].text = "total total total";
  const auto tasks = build_conditional_tasks(repeat, 6, 0, 3);
  for (const auto& task : tasks) {
    const auto& boxes = std::get<std::vector<Box>>(task.reference);
    std::set<std::pair<int, int>> origins;
    for (const auto& b : boxes) CHECK(origins.insert({b.x1, b.y1}).second);
  }
}

TEST_CASE("negative conditional tasks reference the empty list") {
  const PageRecord page = sample_page();
  const auto tasks = build_conditional_tasks(page, 0, 3, 11);
  REQUIRE(tasks.size() == 3);
  for (const auto& task : tasks) {
    CHECK(std::get<std::vector<Box>>(task.reference).empty());
    for (const auto& line : page.lines) {
      CHECK(normalize(line.text).find(normalize(*task.query)) == std::string::npos);
    }
  }
}

TEST_CASE("degenerate pages yield fewer conditional tasks with a diagnostic") {
  PageRecord empty;
  empty.id = "empty";
  empty.dims = {100, 100};
  std::vector<std::string> diags;
  const auto tasks = build_conditional_tasks(empty, 2, 1, 5, &diags);
  CHECK(tasks.size() == 1);  // only the negative survives
  CHECK(!diags.empty());
}

TEST_CASE("localized region equal to a block box selects that block") {
  const PageRecord page = sample_page();
  const auto tasks = build_localized_tasks(page, Granularity::lines, 3, 21);
  REQUIRE(tasks.size() == 3);
  for (const auto& task : tasks) {
    REQUIRE(task.region.has_value());
    // brute-force selection with the same rule
    std::vector<GroundedSpan> selected;
    for (const auto& line : page.lines) {
      if (iou(line.bbox, *task.region) >= 0.5) selected.push_back(line);
    }
    std::string expected;
    const auto ordered = e2e_reading_order(selected);
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      if (i) expected.push_back('\n');
      expected += normalize(ordered[i].text);
    }
    CHECK(std::get<std::string>(task.reference) == expected);
    // fixture lines are disjoint, so the region selects exactly itself
    bool is_own_box = false;
    for (const auto& line : page.lines) {
      if (line.bbox == *task.region) is_own_box = true;
    }
    CHECK(is_own_box);
  }
}

TEST_CASE("coverage rule picks up stacked blocks inside a union region") {
  PageRecord page;
  page.id = "stack";
  page.dims = {300, 300};
  page.lines = {{"upper", {0, 0, 100, 20}}, {"lower", {0, 30, 100, 50}}};

  // under the coverage rule a region spanning both lines selects both
  const Box region{0, 0, 100, 50};
  std::vector<GroundedSpan> covered;
  for (const auto& line : page.lines) {
    if (coverage(line.bbox, region) >= 0.5) covered.push_back(line);
  }
  CHECK(covered.size() == 2);
  // while IoU of each line against the union stays below 0.5
  for (const auto& line : page.lines) CHECK(iou(line.bbox, region) < 0.5);
}

TEST_CASE("task generation is deterministic under a fixed seed") {
  const auto pages = generate_fixture_pages(5150, 8);
  for (const auto& page : pages) {
    const auto a = build_conditional_tasks(page, 2, 1, 99);
    const auto b = build_conditional_tasks(page, 2, 1, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].query == b[i].query);
      CHECK(std::get<std::vector<Box>>(a[i].reference) ==
            std::get<std::vector<Box>>(b[i].reference));
    }
    const auto la = build_localized_tasks(page, Granularity::lines, 2, 42);
    const auto lb = build_localized_tasks(page, Granularity::lines, 2, 42);
    REQUIRE(la.size() == lb.size());
    for (std::size_t i = 0; i < la.size(); ++i) {
      CHECK(la[i].region == lb[i].region);
      CHECK(std::get<std::string>(la[i].reference) == std::get<std::string>(lb[i].reference));
    }
  }
}

TEST_CASE("generated references re-validate against their page") {
  for (const auto& page : generate_fixture_pages(616, 10)) {
    std::set<std::pair<int, int>> line_origins;
    for (const auto& line : page.lines) line_origins.insert({line.bbox.x1, line.bbox.y1});
    for (const auto& task : build_conditional_tasks(page, 2, 1, 8)) {
      for (const auto& box : std::get<std::vector<Box>>(task.reference)) {
        CHECK(line_origins.count({box.x1, box.y1}) == 1);
      }
    }
  }
}

TEST_CASE("render_prompt substitutes placeholders deterministically") {
  const PageRecord page = sample_page();
  const TemplateBank& bank = default_template_bank();

  auto reading = build_reading_tasks(page, {OutputFormat::text});
  const std::string p1 = render_prompt(reading[0], bank, 1234);
  CHECK(p1 == render_prompt(reading[0], bank, 1234));
  CHECK(p1.find("{") == std::string::npos);
  CHECK(p1.find("text") != std::string::npos);

  auto conditional = build_conditional_tasks(page, 1, 0, 2);
  REQUIRE(!conditional.empty());
  const std::string p2 = render_prompt(conditional[0], bank, 77);
  CHECK(p2.find(*conditional[0].query) != std::string::npos);

  auto localized = build_localized_tasks(page, Granularity::lines, 1, 3);
  REQUIRE(!localized.empty());
  const std::string p3 = render_prompt(localized[0], bank, 88);
  CHECK(p3.find(std::to_string(localized[0].region->x1)) != std::string::npos);

  const TaskInstance det = build_detection_task(page, Granularity::paragraphs);
  const std::string p4 = render_prompt(det, bank, 99);
  CHECK(p4.find("PARAGRAPHS") != std::string::npos);

  TemplateBank empty_bank;
  empty_bank.determiners = {"this"};
  empty_bank.nouns = {"image"};
  CHECK_THROWS_AS(render_prompt(reading[0], empty_bank, 5), std::invalid_argument);
}

TEST_CASE("system prompt asset is nonempty and stable") {
  CHECK(system_prompt().find("read and localize") != std::string::npos);
  CHECK(system_prompt().find("BOX") != std::string::npos);
}

TEST_CASE("fixture pages satisfy the page-record invariants") {
  for (const auto& page : generate_fixture_pages(99, 50)) {
    CHECK(page.dims.width >= 1);
    CHECK(page.dims.height >= 1);
    const auto check_spans = [&](const std::vector<GroundedSpan>& spans) {
      for (const auto& s : spans) {
        CHECK(s.bbox.x1 < s.bbox.x2);
        CHECK(s.bbox.y1 < s.bbox.y2);
        CHECK(s.bbox.x1 >= 0);
        CHECK(s.bbox.y1 >= 0);
        CHECK(s.bbox.x2 <= page.dims.width);
        CHECK(s.bbox.y2 <= page.dims.height);
        CHECK(normalize(s.text) == s.text);  // normalization-stable texts
      }
    };
    check_spans(page.lines);
    REQUIRE(page.paragraphs.has_value());
    check_spans(*page.paragraphs);
    // distinct line boxes, pairwise below the matching threshold
    for (std::size_t i = 0; i < page.lines.size(); ++i) {
      for (std::size_t j = i + 1; j < page.lines.size(); ++j) {
        CHECK(iou(page.lines[i].bbox, page.lines[j].bbox) < 0.5);
      }
    }
  }
}
