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

// Error types, deterministic random numbers, hashing and a small parallel
// loop shared by every module.

#ifndef SLICEVULN_COMMON_HPP_
#define SLICEVULN_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slicevuln {

// Malformed input data: bad records, unknown names, unsatisfiable sampling
// requests, checkpoint mismatches.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values during training or gradient checking.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Combines a seed with any number of stream identifiers into one key.
template <typename... Ts>
constexpr std::uint64_t derive_key(std::uint64_t seed, Ts... streams) {
  std::uint64_t key = mix64(seed);
  ((key = mix64(key ^ static_cast<std::uint64_t>(streams))), ...);
  return key;
}

// Counter-based generator: the i-th draw is a pure function of (key, i), so
// streams never depend on how many values another stream consumed. Output is
// identical on every platform, unlike std:: distributions.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }

  // Uniform integer in [0, bound) without modulo bias.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal(double mean, double stddev);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // Returns `count` distinct indices from [0, population) in draw order.
  std::vector<std::size_t> sample_indices(std::size_t population,
                                          std::size_t count);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// 64-bit FNV-1a.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  void update_u64(std::uint64_t value);
  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// processed exactly once; callers write results into pre-sized slots so the
// outcome never depends on `jobs`.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Splits on '\n', dropping one trailing '\r' per line.
std::vector<std::string> split_lines(std::string_view text);

std::string_view trim(std::string_view s);

}  // namespace slicevuln

#endif  // SLICEVULN_COMMON_HPP_
