// Copyright 2026 the grocr authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "grocr/taskgen.hpp"

namespace grocr {

/// Synthetic page records for tests and benchmarks: random non-overlapping
/// line layouts (single or two-column), normalization-stable lowercase
/// texts, and paragraph groupings. Deterministic per (seed, index), so
/// generation order cannot change the output.
std::vector<PageRecord> generate_fixture_pages(std::uint64_t seed, int n);

}  // namespace grocr
