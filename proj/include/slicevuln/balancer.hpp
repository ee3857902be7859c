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

// Downsampling to class balance.
//
//   H1  per kind: every vulnerable sample plus an equal number of randomly
//       chosen non-vulnerable samples of the same kind.
//   H2  one quota q = min over kinds of the vulnerable count; per kind, q
//       random vulnerable and q random non-vulnerable samples (8q total).
//
// Selection is uniform without replacement from a generator keyed by
// (seed, kind, label) over samples sorted by id, so neither input order nor
// the pool of another kind influences which samples are chosen.

#ifndef SLICEVULN_BALANCER_HPP_
#define SLICEVULN_BALANCER_HPP_

#include <cstdint>
#include <string>
#include <string_view>

#include "slicevuln/corpus.hpp"

namespace slicevuln {

enum class Hypothesis { H1, H2 };

std::string_view to_string(Hypothesis h);
Hypothesis parse_hypothesis(std::string_view name);  // "h1"/"H1"/"h2"/"H2"

struct BalancedSet {
  SampleSet samples;
  Hypothesis hypothesis = Hypothesis::H1;
  std::uint64_t seed = 0;

  // Per-kind (vulnerable, non-vulnerable) counts.
  const Manifest& per_kind_counts() const { return samples.manifest(); }
};

BalancedSet balance_h1(const SampleSet& corpus, std::uint64_t seed);
BalancedSet balance_h2(const SampleSet& corpus, std::uint64_t seed);
BalancedSet balance(const SampleSet& corpus, Hypothesis h, std::uint64_t seed);

// corpus minus balanced, by id, in corpus order. Throws DataError if
// `balanced` holds an id absent from `corpus`.
SampleSet remainder(const SampleSet& corpus, const SampleSet& balanced);

// Sidecar manifest: {"hypothesis", "seed", "total", "per_kind": {...}}.
std::string balanced_manifest_json(const BalancedSet& set);

}  // namespace slicevuln

#endif  // SLICEVULN_BALANCER_HPP_
