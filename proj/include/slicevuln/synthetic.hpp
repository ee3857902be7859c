/*
 * Copyright 2026 The slicevuln Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Synthetic slice corpus with planted vulnerability patterns.
//
// Every sample is built from one template of its kind; the template fixes
// the label, so ground truth holds by construction. Templates come in easy
// and hard flavours: hard templates differ from a template of the
// other class in a single local detail (an off-by-one comparison, a missing
// "- 1", a constant instead of a variable operand). Neutral distractor statements and random names
// surround the planted lines.

#ifndef SLICEVULN_SYNTHETIC_HPP_
#define SLICEVULN_SYNTHETIC_HPP_

#include <cstdint>

#include "slicevuln/corpus.hpp"

namespace slicevuln {

struct SyntheticOptions {
  Manifest counts;
  std::uint64_t seed = 42;
  int min_distractors = 1;
  int max_distractors = 4;
  // Probability that a sample uses a hard template of its class.
  double hard_fraction = 0.2;
};

// Per-(kind, label) counts for a corpus of `total` samples, skewed like
// real vulnerability corpora (non-vulnerable majority, PU the largest kind).
// The default of 2000 yields API 150/350, AU 120/230, PU 250/650, AE 80/170.
Manifest desk_manifest(std::uint64_t total = 2000);

SampleSet generate_synthetic(const SyntheticOptions& opts);

}  // namespace slicevuln

#endif  // SLICEVULN_SYNTHETIC_HPP_
