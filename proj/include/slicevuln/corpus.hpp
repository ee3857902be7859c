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

// Sample data model, on-disk readers/writers and seeded splits.

#ifndef SLICEVULN_CORPUS_HPP_
#define SLICEVULN_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace slicevuln {

// Vulnerability-candidate category of a slice.
enum class Kind : std::uint8_t { API = 0, AU = 1, PU = 2, AE = 3 };

inline constexpr std::array<Kind, 4> kAllKinds = {Kind::API, Kind::AU,
                                                  Kind::PU, Kind::AE};
inline constexpr std::size_t kNumKinds = kAllKinds.size();

std::string_view to_string(Kind kind);
// Throws DataError on anything but the four canonical names.
Kind parse_kind(std::string_view name);

enum class Label : std::uint8_t { NonVulnerable = 0, Vulnerable = 1 };

inline int to_int(Label label) { return static_cast<int>(label); }
Label label_from_int(long long value);

struct Sample {
  std::string id;
  Kind kind = Kind::API;
  Label label = Label::NonVulnerable;
  std::string code;
  std::optional<std::string> source;

  bool operator==(const Sample&) const = default;
};

// Per-(kind, label) counts.
class Manifest {
 public:
  std::uint64_t count(Kind kind, Label label) const {
    return counts_[index(kind)][static_cast<std::size_t>(label)];
  }
  std::uint64_t vulnerable(Kind kind) const {
    return count(kind, Label::Vulnerable);
  }
  std::uint64_t non_vulnerable(Kind kind) const {
    return count(kind, Label::NonVulnerable);
  }
  std::uint64_t kind_total(Kind kind) const {
    return vulnerable(kind) + non_vulnerable(kind);
  }
  std::uint64_t label_total(Label label) const;
  std::uint64_t total() const;

  void add(Kind kind, Label label, std::uint64_t n = 1) {
    counts_[index(kind)][static_cast<std::size_t>(label)] += n;
  }
  void set(Kind kind, Label label, std::uint64_t n) {
    counts_[index(kind)][static_cast<std::size_t>(label)] = n;
  }

  bool operator==(const Manifest&) const = default;

 private:
  static std::size_t index(Kind kind) { return static_cast<std::size_t>(kind); }
  std::array<std::array<std::uint64_t, 2>, kNumKinds> counts_{};
};

// Reads {"API": {"vulnerable": n, "non_vulnerable": m}, ...}. Missing kinds
// count as zero.
Manifest parse_manifest_json(std::string_view json_text);
std::string manifest_to_json(const Manifest& manifest);

// Ordered collection of samples with unique ids. The manifest is maintained
// incrementally on insertion.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::vector<Sample> samples);

  // Throws DataError on a duplicate id or empty code.
  void add(Sample sample);

  const std::vector<Sample>& samples() const { return samples_; }
  const Manifest& manifest() const { return manifest_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  bool contains(std::string_view id) const;
  const Sample* find(std::string_view id) const;

  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  // Order-insensitive content hash over (id, kind, label) of every sample.
  std::uint64_t fingerprint() const;

 private:
  std::vector<Sample> samples_;
  std::unordered_map<std::string, std::size_t> index_;
  Manifest manifest_;
};

// Brute-force recount, independent of the incrementally kept manifest.
Manifest recount(const std::vector<Sample>& samples);

enum class Format { JsonLines, GadgetText };

// Parses canonical JSON-lines: one object per line with id, kind, label (0/1),
// code and optional source. Blank lines are skipped. Errors name the line.
SampleSet parse_jsonl(std::string_view text);

// VulDeePecker-style records: optional "<ordinal> <path> ..." header line,
// slice lines, a 0/1 label line, then a delimiter of at least five dashes.
// The kind is not stored in this format and must be supplied.
SampleSet parse_gadget_text(std::string_view text, Kind kind);

SampleSet load(const std::string& path, Format format,
               Kind gadget_kind = Kind::API);

std::string to_jsonl(const SampleSet& set);
void save(const SampleSet& set, const std::string& path);

struct SplitResult {
  SampleSet train;
  SampleSet test;
};

// Seeded partition. With `stratify`, each (kind, label) cell contributes
// floor(n * (1 - train_fraction)) samples to test and the remainder to train.
// Both halves keep the input order.
SplitResult split(const SampleSet& set, double train_fraction,
                  std::uint64_t seed, bool stratify);

// Samples with placeholder code whose per-cell counts equal `manifest`.
// Ids are "<KIND>-<label>-<index>".
SampleSet synthesize_from_manifest(const Manifest& manifest);

}  // namespace slicevuln

#endif  // SLICEVULN_CORPUS_HPP_
