// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#include "grocr/outparse.hpp"

#include <doctest.h>

#include <fstream>

#include "grocr/rng.hpp"

using namespace grocr;
using nlohmann::json;

namespace {
const ImageDims kDims{800, 600};
}

TEST_CASE("strip_code_fence") {
  CHECK(strip_code_fence("```json\n[[1,2,3,4]]\n```") == "[[1,2,3,4]]");
  CHECK(strip_code_fence("```text\nHi\n```") == "Hi");
  CHECK(strip_code_fence("no fences") == "no fences");
  CHECK(strip_code_fence("```\nbody only\n") == "body only\n");
  CHECK(strip_code_fence("prose\n```\ninner\n```\ntrailing") == "inner");
  CHECK(strip_code_fence("```text\n```") == "");
}

TEST_CASE("extract_candidate finds the largest balanced region") {
  CHECK(extract_candidate("```json\n[[1,2,3,4]]\n```") == "[[1,2,3,4]]");
  CHECK(extract_candidate("Sure! Here are the boxes: [[1,2,3,4]]") == "[[1,2,3,4]]");
  CHECK(extract_candidate("no structure here") == "no structure here");
  CHECK(extract_candidate("a [1] then {\"k\": [1,2,3]} wins") == "{\"k\": [1,2,3]}");
  CHECK(extract_candidate("brackets ]] before [[1,2,3,4]]") == "[[1,2,3,4]]");
  CHECK(extract_candidate("text with \"[not this]\" but [5,6]") == "[5,6]");
}

TEST_CASE("repair keeps valid input as a fixed point") {
  const char* valid[] = {
      "[]",
      "[[1,2,3,4]]",
      "[{\"text\":\"a\",\"bbox\":[1,2,3,4]}]",
      "{\"nested\":{\"deep\":[1,[2,[3]]]}}",
      "[1.5, -2e3, true, false, null, \"s\"]",
  };
  for (const char* input : valid) {
    const RepairResult r = repair(input);
    REQUIRE(r.value.has_value());
    CHECK(*r.value == json::parse(input));
  }
}

TEST_CASE("repair handles the documented corruption classes") {
  CHECK(*repair("[[1,2,3,4],]").value == json::parse("[[1,2,3,4]]"));
  CHECK(*repair("[{'text':'a'}]").value == json::parse("[{\"text\":\"a\"}]"));
  CHECK(*repair("[{text: \"a\"}]").value == json::parse("[{\"text\":\"a\"}]"));
  CHECK(*repair("[1,2] // done").value == json::parse("[1,2]"));
  CHECK(*repair("[\"abc").value == json::parse("[\"abc\"]"));
  CHECK(*repair("[[1,2,3,4]").value == json::parse("[[1,2,3,4]]"));
  CHECK(!repair("{{{{").value.has_value());
  CHECK(!repair("prose only").value.has_value());
}

TEST_CASE("repair reports the first unrecoverable position") {
  const RepairResult r = repair("{{{{");
  REQUIRE(!r.value.has_value());
  bool has_position = false;
  for (const auto& note : r.notes) {
    if (note.find("unrecoverable at byte") != std::string::npos) has_position = true;
  }
  CHECK(has_position);
}

TEST_CASE("repair fixture corpus re-parses strictly") {
  std::ifstream in(GROCR_TEST_DATA_DIR "/repair_fixtures.jsonl");
  REQUIRE(in.good());
  std::string line;
  int fixtures = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json fixture = json::parse(line);
    ++fixtures;
    const std::string raw = fixture["raw"].get<std::string>();
    CAPTURE(raw);
    const std::string candidate = extract_candidate(raw);
    const RepairResult r = repair(candidate);
    REQUIRE(r.value.has_value());
    CHECK(*r.value == fixture["expected"]);
    // the repaired value, re-serialized, survives a strict parse
    CHECK(json::parse(r.value->dump()) == *r.value);
  }
  CHECK(fixtures >= 25);
}

TEST_CASE("normalize_records maps key aliases") {
  const json value = json::parse("[{\"label\":\"x\",\"box\":[1,2,3,4]}]");
  const ParsedOutput out = normalize_records(value, kDims);
  REQUIRE(out.kind == ParseKind::spans);
  REQUIRE(out.spans.size() == 1);
  CHECK(out.spans[0].text == "x");
  CHECK(out.spans[0].bbox == Box{1, 2, 3, 4});
}

TEST_CASE("normalize_records key priority prefers exact text over label") {
  const json value = json::parse("[{\"label\":\"no\",\"text\":\"yes\",\"bbox\":[1,2,3,4]}]");
  const ParsedOutput out = normalize_records(value, kDims);
  REQUIRE(out.spans.size() == 1);
  CHECK(out.spans[0].text == "yes");

  const json contains = json::parse("[{\"line_text\":\"yes\",\"label\":\"no\",\"bbox\":[1,2,3,4]}]");
  CHECK(normalize_records(contains, kDims).spans[0].text == "yes");
}

TEST_CASE("normalize_records builds box lists") {
  const json value = json::parse("[[1,2,3,4],[5,6,7,8]]");
  const ParsedOutput out = normalize_records(value, kDims);
  REQUIRE(out.kind == ParseKind::boxes);
  CHECK(out.boxes == std::vector<Box>{{1, 2, 3, 4}, {5, 6, 7, 8}});

  // a bare 4-number list is one box
  const ParsedOutput single = normalize_records(json::parse("[1,2,3,4]"), kDims);
  REQUIRE(single.kind == ParseKind::boxes);
  CHECK(single.boxes == std::vector<Box>{{1, 2, 3, 4}});
}

TEST_CASE("normalize_records clips to image bounds") {
  const json value = json::parse("[{\"text\":\"a\",\"bbox\":[-3,5,99999,40]}]");
  const ParsedOutput out = normalize_records(value, kDims);
  REQUIRE(out.spans.size() == 1);
  CHECK(out.spans[0].bbox == Box{0, 5, 800, 40});
}

TEST_CASE("normalize_records coerces numeric strings with a diagnostic") {
  const json value = json::parse("[{\"text\":\"a\",\"bbox\":[\"12\",\"5\",\"20\",\"9\"]}]");
  const ParsedOutput out = normalize_records(value, kDims);
  REQUIRE(out.spans.size() == 1);
  CHECK(out.spans[0].bbox == Box{12, 5, 20, 9});
  bool noted = false;
  for (const auto& d : out.diagnostics) {
    if (d.find("coerced") != std::string::npos) noted = true;
  }
  CHECK(noted);
}

TEST_CASE("normalize_records drops degenerate boxes with a diagnostic") {
  const json value = json::parse("[[1,2,3,4],[9,9,9,30]]");
  const ParsedOutput out = normalize_records(value, kDims);
  REQUIRE(out.kind == ParseKind::boxes);
  CHECK(out.boxes.size() == 1);
  CHECK(!out.diagnostics.empty());
}

TEST_CASE("nonempty arrays with no usable records are invalid, but [] stays valid") {
  CHECK(normalize_records(json::parse("[[9,9,9,30]]"), kDims).kind == ParseKind::invalid);
  CHECK(normalize_records(json::parse("[{\"text\":\"a\",\"bbox\":[5,5,5,5]}]"), kDims).kind ==
        ParseKind::invalid);
  CHECK(normalize_records(json::parse("[]"), kDims).kind == ParseKind::boxes);
}

TEST_CASE("normalize_records rejects non-record shapes") {
  CHECK(normalize_records(json::parse("{\"a\":1}"), kDims).kind == ParseKind::invalid);
  CHECK(normalize_records(json::parse("[\"a\",\"b\"]"), kDims).kind == ParseKind::invalid);
  CHECK(normalize_records(json::parse("[[1,2,3,4],{\"text\":\"m\"}]"), kDims).kind ==
        ParseKind::invalid);
  CHECK(normalize_records(json::parse("42"), kDims).kind == ParseKind::invalid);
}

TEST_CASE("normalized:1000 coordinates rescale before clipping") {
  const json value = json::parse("[[0,0,500,1000]]");
  const ParsedOutput out = normalize_records(value, kDims, CoordSpace::normalized_1000);
  REQUIRE(out.boxes.size() == 1);
  CHECK(out.boxes[0] == Box{0, 0, 400, 600});
}

TEST_CASE("parse_prediction plain text formats") {
  const ParsedOutput out = parse_prediction("```text\nHi\n```", OutputFormat::text, kDims);
  CHECK(out.kind == ParseKind::plain_text);
  CHECK(out.text == "Hi");
  CHECK(parse_prediction("anything at all", OutputFormat::text2d, kDims).kind ==
        ParseKind::plain_text);
  CHECK(parse_prediction("", OutputFormat::text, kDims).text.empty());
}

TEST_CASE("parse_prediction structured expectations") {
  const ParsedOutput empty_boxes = parse_prediction("[]", OutputFormat::box, kDims);
  CHECK(empty_boxes.kind == ParseKind::boxes);
  CHECK(empty_boxes.boxes.empty());

  // "[]" is a valid empty prediction for lines too
  const ParsedOutput empty_lines = parse_prediction("[]", OutputFormat::lines, kDims);
  CHECK(empty_lines.kind == ParseKind::spans);
  CHECK(empty_lines.spans.empty());

  CHECK(parse_prediction("just prose", OutputFormat::lines, kDims).kind == ParseKind::invalid);

  // bare boxes cannot stand in for text+bbox records
  CHECK(parse_prediction("[[1,2,3,4]]", OutputFormat::lines, kDims).kind == ParseKind::invalid);

  // span records for a box task keep their geometry
  const ParsedOutput demoted =
      parse_prediction("[{\"text\":\"a\",\"bbox\":[1,2,3,4]}]", OutputFormat::box, kDims);
  REQUIRE(demoted.kind == ParseKind::boxes);
  CHECK(demoted.boxes == std::vector<Box>{{1, 2, 3, 4}});
}

TEST_CASE("parse_prediction is total over fuzzed garbage") {
  Rng rng(77);
  static const char pool[] = "[]{}\"':,abc01 \n\t/\\`#-.";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string raw;
    const int len = rng.int_in(0, 40);
    for (int i = 0; i < len; ++i) raw.push_back(pool[rng.below(sizeof(pool) - 1)]);
    for (OutputFormat fmt : {OutputFormat::text, OutputFormat::lines, OutputFormat::box}) {
      const ParsedOutput out = parse_prediction(raw, fmt, kDims);
      const bool exactly_one =
          (out.kind == ParseKind::plain_text) + (out.kind == ParseKind::spans) +
              (out.kind == ParseKind::boxes) + (out.kind == ParseKind::invalid) ==
          1;
      CHECK(exactly_one);
      if (out.kind == ParseKind::invalid) CHECK(!out.diagnostics.empty());
      for (const auto& span : out.spans) {
        CHECK(span.bbox.x1 < span.bbox.x2);
        CHECK(span.bbox.y2 <= kDims.height);
      }
    }
  }
}
