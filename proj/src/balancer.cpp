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

#include "slicevuln/balancer.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "json.hpp"
#include "slicevuln/common.hpp"

namespace slicevuln {

std::string_view to_string(Hypothesis h) {
  return h == Hypothesis::H1 ? "H1" : "H2";
}

Hypothesis parse_hypothesis(std::string_view name) {
  if (name == "h1" || name == "H1") return Hypothesis::H1;
  if (name == "h2" || name == "H2") return Hypothesis::H2;
  throw ConfigError("unknown hypothesis '" + std::string(name) +
                    "' (expected h1 or h2)");
}

namespace {

using Pools = std::array<std::array<std::vector<const Sample*>, 2>, kNumKinds>;

Pools sorted_pools(const SampleSet& corpus) {
  Pools pools;
  for (const auto& s : corpus) {
    pools[static_cast<std::size_t>(s.kind)][to_int(s.label)].push_back(&s);
  }
  for (auto& by_label : pools) {
    for (auto& pool : by_label) {
      std::sort(pool.begin(), pool.end(),
                [](const Sample* a, const Sample* b) { return a->id < b->id; });
    }
  }
  return pools;
}

// `count` samples drawn without replacement, returned in id order.
std::vector<const Sample*> draw(const std::vector<const Sample*>& pool,
                                std::size_t count, std::uint64_t seed,
                                Kind kind, Label label) {
  if (count == pool.size()) return pool;
  CounterRng rng(derive_key(seed, 0xba1aULL, static_cast<int>(kind),
                            to_int(label)));
  auto picks = rng.sample_indices(pool.size(), count);
  std::sort(picks.begin(), picks.end());
  std::vector<const Sample*> out;
  out.reserve(count);
  for (auto i : picks) out.push_back(pool[i]);
  return out;
}

BalancedSet assemble(const Pools& pools,
                     const std::array<std::array<std::size_t, 2>, kNumKinds>& quota,
                     Hypothesis h, std::uint64_t seed) {
  std::vector<Sample> chosen;
  for (Kind k : kAllKinds) {
    const auto ki = static_cast<std::size_t>(k);
    for (Label label : {Label::Vulnerable, Label::NonVulnerable}) {
      for (const Sample* s : draw(pools[ki][to_int(label)], quota[ki][to_int(label)],
                                  seed, k, label)) {
        chosen.push_back(*s);
      }
    }
  }
  BalancedSet out;
  out.samples = SampleSet(std::move(chosen));
  out.hypothesis = h;
  out.seed = seed;
  return out;
}

}  // namespace

BalancedSet balance_h1(const SampleSet& corpus, std::uint64_t seed) {
  const Pools pools = sorted_pools(corpus);
  std::array<std::array<std::size_t, 2>, kNumKinds> quota{};
  for (Kind k : kAllKinds) {
    const auto ki = static_cast<std::size_t>(k);
    const std::size_t vul = pools[ki][1].size();
    const std::size_t non = pools[ki][0].size();
    if (non < vul) {
      throw DataError("H1: kind " + std::string(to_string(k)) + " has " +
                      std::to_string(non) + " non-vulnerable samples for " +
                      std::to_string(vul) + " vulnerable");
    }
    quota[ki] = {vul, vul};
  }
  return assemble(pools, quota, Hypothesis::H1, seed);
}

BalancedSet balance_h2(const SampleSet& corpus, std::uint64_t seed) {
  const Pools pools = sorted_pools(corpus);
  std::size_t q = static_cast<std::size_t>(-1);
  for (Kind k : kAllKinds) {
    const auto ki = static_cast<std::size_t>(k);
    if (pools[ki][0].empty() || pools[ki][1].empty()) {
      throw DataError("H2: kind " + std::string(to_string(k)) +
                      " lacks samples of one class");
    }
    q = std::min(q, pools[ki][1].size());
  }
  std::array<std::array<std::size_t, 2>, kNumKinds> quota{};
  for (Kind k : kAllKinds) {
    const auto ki = static_cast<std::size_t>(k);
    if (pools[ki][0].size() < q) {
      throw DataError("H2: kind " + std::string(to_string(k)) + " has " +
                      std::to_string(pools[ki][0].size()) +
                      " non-vulnerable samples, quota is " + std::to_string(q));
    }
    quota[ki] = {q, q};
  }
  return assemble(pools, quota, Hypothesis::H2, seed);
}

BalancedSet balance(const SampleSet& corpus, Hypothesis h, std::uint64_t seed) {
  return h == Hypothesis::H1 ? balance_h1(corpus, seed)
                             : balance_h2(corpus, seed);
}

SampleSet remainder(const SampleSet& corpus, const SampleSet& balanced) {
  for (const auto& s : balanced) {
    if (!corpus.contains(s.id)) {
      throw DataError("remainder: id '" + s.id + "' is not in the corpus");
    }
  }
  std::vector<Sample> rest;
  rest.reserve(corpus.size() - balanced.size());
  for (const auto& s : corpus) {
    if (!balanced.contains(s.id)) rest.push_back(s);
  }
  return SampleSet(std::move(rest));
}

std::string balanced_manifest_json(const BalancedSet& set) {
  nlohmann::ordered_json doc;
  doc["hypothesis"] = std::string(to_string(set.hypothesis));
  doc["seed"] = set.seed;
  doc["total"] = set.samples.size();
  nlohmann::ordered_json per_kind;
  for (Kind k : kAllKinds) {
    per_kind[std::string(to_string(k))] = {
        {"vulnerable", set.per_kind_counts().vulnerable(k)},
        {"non_vulnerable", set.per_kind_counts().non_vulnerable(k)}};
  }
  doc["per_kind"] = per_kind;
  doc["fingerprint"] = hex64(set.samples.fingerprint());
  return doc.dump(2) + "\n";
}

}  // namespace slicevuln
