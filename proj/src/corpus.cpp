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

#include "slicevuln/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "slicevuln/common.hpp"

namespace slicevuln {

using nlohmann::json;

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::API: return "API";
    case Kind::AU: return "AU";
    case Kind::PU: return "PU";
    case Kind::AE: return "AE";
  }
  return "?";
}

Kind parse_kind(std::string_view name) {
  for (Kind k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  throw DataError("unknown kind '" + std::string(name) + "'");
}

Label label_from_int(long long value) {
  if (value == 0) return Label::NonVulnerable;
  if (value == 1) return Label::Vulnerable;
  throw DataError("label must be 0 or 1, got " + std::to_string(value));
}

std::uint64_t Manifest::label_total(Label label) const {
  std::uint64_t sum = 0;
  for (Kind k : kAllKinds) sum += count(k, label);
  return sum;
}

std::uint64_t Manifest::total() const {
  return label_total(Label::Vulnerable) + label_total(Label::NonVulnerable);
}

Manifest parse_manifest_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("manifest: expected an object");
  // Balanced-set sidecars nest the counts under "per_kind".
  const json& counts = doc.contains("per_kind") ? doc.at("per_kind") : doc;
  Manifest m;
  for (const auto& [key, value] : counts.items()) {
    const Kind kind = parse_kind(key);
    try {
      m.set(kind, Label::Vulnerable, value.at("vulnerable").get<std::uint64_t>());
      m.set(kind, Label::NonVulnerable,
            value.at("non_vulnerable").get<std::uint64_t>());
    } catch (const json::exception& e) {
      throw DataError("manifest entry '" + key + "': " + e.what());
    }
  }
  return m;
}

std::string manifest_to_json(const Manifest& manifest) {
  json doc = json::object();
  for (Kind k : kAllKinds) {
    doc[std::string(to_string(k))] = {
        {"vulnerable", manifest.vulnerable(k)},
        {"non_vulnerable", manifest.non_vulnerable(k)}};
  }
  return doc.dump(2) + "\n";
}

SampleSet::SampleSet(std::vector<Sample> samples) {
  samples_.reserve(samples.size());
  index_.reserve(samples.size());
  for (auto& s : samples) add(std::move(s));
}

void SampleSet::add(Sample sample) {
  if (sample.code.empty()) {
    throw DataError("sample '" + sample.id + "' has empty code");
  }
  auto [it, inserted] = index_.emplace(sample.id, samples_.size());
  if (!inserted) throw DataError("duplicate sample id '" + sample.id + "'");
  manifest_.add(sample.kind, sample.label);
  samples_.push_back(std::move(sample));
}

bool SampleSet::contains(std::string_view id) const {
  return index_.find(std::string(id)) != index_.end();
}

const Sample* SampleSet::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &samples_[it->second];
}

std::uint64_t SampleSet::fingerprint() const {
  std::uint64_t acc = mix64(samples_.size());
  for (const auto& s : samples_) {
    Fnv1a h;
    h.update(s.id);
    h.update_u64(static_cast<std::uint64_t>(s.kind) * 2 + to_int(s.label));
    acc += mix64(h.digest());
  }
  return acc;
}

Manifest recount(const std::vector<Sample>& samples) {
  Manifest m;
  for (const auto& s : samples) m.add(s.kind, s.label);
  return m;
}

namespace {

[[noreturn]] void fail_at(std::size_t line_no, const std::string& what) {
  throw DataError("line " + std::to_string(line_no) + ": " + what);
}

Sample sample_from_json(const json& obj, std::size_t line_no) {
  if (!obj.is_object()) fail_at(line_no, "expected a JSON object");
  Sample s;
  try {
    s.id = obj.at("id").get<std::string>();
    s.kind = parse_kind(obj.at("kind").get<std::string>());
    const json& label = obj.at("label");
    if (!label.is_number_integer()) throw DataError("label must be 0 or 1");
    s.label = label_from_int(label.get<long long>());
    s.code = obj.at("code").get<std::string>();
    if (auto it = obj.find("source"); it != obj.end() && !it->is_null()) {
      s.source = it->get<std::string>();
    }
  } catch (const json::exception& e) {
    fail_at(line_no, e.what());
  } catch (const DataError& e) {
    fail_at(line_no, e.what());
  }
  if (s.id.empty()) fail_at(line_no, "empty id");
  return s;
}

bool is_delimiter(std::string_view line) {
  line = trim(line);
  return line.size() >= 5 &&
         std::all_of(line.begin(), line.end(), [](char c) { return c == '-'; });
}

// "<ordinal> <path> ..." as written by the VulDeePecker/SySeVR exporters.
bool is_gadget_header(std::string_view line) {
  line = trim(line);
  std::size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i == 0 || i >= line.size() || line[i] != ' ') return false;
  const std::string_view rest = trim(line.substr(i));
  return !rest.empty() && rest.find('/') != std::string_view::npos;
}

}  // namespace

SampleSet parse_jsonl(std::string_view text) {
  SampleSet set;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      fail_at(line_no, std::string("malformed JSON: ") + e.what());
    }
    Sample s = sample_from_json(obj, line_no);
    try {
      set.add(std::move(s));
    } catch (const DataError& e) {
      fail_at(line_no, e.what());
    }
  }
  return set;
}

SampleSet parse_gadget_text(std::string_view text, Kind kind) {
  SampleSet set;
  const auto lines = split_lines(text);
  std::vector<std::string> record;
  std::size_t record_start = 1;
  std::size_t ordinal = 0;

  auto flush = [&](std::size_t delimiter_line) {
    // Drop blank lines at either end.
    while (!record.empty() && trim(record.back()).empty()) record.pop_back();
    std::size_t first = 0;
    while (first < record.size() && trim(record[first]).empty()) ++first;
    if (first == record.size()) {
      record.clear();
      return;
    }
    ++ordinal;
    Sample s;
    s.kind = kind;
    const std::string_view label_line = trim(record.back());
    if (label_line == "0") {
      s.label = Label::NonVulnerable;
    } else if (label_line == "1") {
      s.label = Label::Vulnerable;
    } else {
      fail_at(delimiter_line - 1, "gadget record (starting at line " +
                                      std::to_string(record_start) +
                                      ") must end with a 0/1 label line");
    }
    std::size_t body_begin = first;
    if (is_gadget_header(record[first])) {
      s.source = std::string(trim(record[first]));
      ++body_begin;
    }
    std::string code;
    for (std::size_t i = body_begin; i + 1 < record.size(); ++i) {
      code += record[i];
      code += '\n';
    }
    if (trim(code).empty()) {
      fail_at(record_start, "gadget record has no code lines");
    }
    s.code = std::move(code);
    s.id = std::string(to_string(kind)) + "-" + std::to_string(ordinal);
    set.add(std::move(s));
    record.clear();
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_delimiter(lines[i])) {
      flush(i + 1);
      record_start = i + 2;
    } else {
      record.push_back(lines[i]);
    }
  }
  flush(lines.size() + 1);
  return set;
}

SampleSet load(const std::string& path, Format format, Kind gadget_kind) {
  const std::string text = read_file(path);
  try {
    return format == Format::JsonLines ? parse_jsonl(text)
                                       : parse_gadget_text(text, gadget_kind);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string to_jsonl(const SampleSet& set) {
  std::string out;
  for (const auto& s : set) {
    json obj = {{"id", s.id},
                {"kind", std::string(to_string(s.kind))},
                {"label", to_int(s.label)},
                {"code", s.code}};
    if (s.source) obj["source"] = *s.source;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void save(const SampleSet& set, const std::string& path) {
  write_file(path, to_jsonl(set));
}

SplitResult split(const SampleSet& set, double train_fraction,
                  std::uint64_t seed, bool stratify) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  if (set.empty()) throw DataError("cannot split an empty sample set");

  // Group indices into cells (a single cell when not stratifying).
  std::array<std::vector<std::size_t>, kNumKinds * 2> cells;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Sample& s = set[i];
    const std::size_t cell =
        stratify ? static_cast<std::size_t>(s.kind) * 2 + to_int(s.label) : 0;
    cells[cell].push_back(i);
  }

  std::vector<bool> in_test(set.size(), false);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& members = cells[c];
    if (members.empty()) continue;
    // Selection depends on ids, not on input order.
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return set[a].id < set[b].id;
    });
    const auto n = static_cast<double>(members.size());
    const auto n_test = static_cast<std::size_t>(
        std::floor(n * (1.0 - train_fraction) + 1e-9));
    CounterRng rng(derive_key(seed, 0x5b117ULL, c));
    rng.shuffle(members);
    for (std::size_t k = 0; k < n_test; ++k) in_test[members[k]] = true;
  }

  SplitResult out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    (in_test[i] ? out.test : out.train).add(set[i]);
  }
  return out;
}

SampleSet synthesize_from_manifest(const Manifest& manifest) {
  std::vector<Sample> samples;
  samples.reserve(manifest.total());
  for (Kind k : kAllKinds) {
    for (Label label : {Label::Vulnerable, Label::NonVulnerable}) {
      const std::uint64_t n = manifest.count(k, label);
      for (std::uint64_t i = 0; i < n; ++i) {
        Sample s;
        s.id = std::string(to_string(k)) + "-" + std::to_string(to_int(label)) +
               "-" + std::to_string(i);
        s.kind = k;
        s.label = label;
        s.code = "/* placeholder */";
        samples.push_back(std::move(s));
      }
    }
  }
  return SampleSet(std::move(samples));
}

}  // namespace slicevuln
