//
// Copyright 2026 The drodp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "drodp/dataset.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "drodp/rng.h"
#include "drodp/textio.h"

namespace drodp {
namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset::Dataset(std::vector<Sample> samples, double imratio)
    : samples_(std::move(samples)), imratio_(imratio) {
  if (samples_.empty()) throw std::invalid_argument("Dataset: n must be >= 1");
  d_feat_ = static_cast<int>(samples_[0].features.size());
  if (d_feat_ < 1) throw std::invalid_argument("Dataset: d_feat must be >= 1");
  for (const Sample& s : samples_) {
    if (s.features.size() != d_feat_) {
      throw std::invalid_argument("Dataset: inconsistent feature dimension");
    }
    if (!s.features.allFinite() || !std::isfinite(s.label)) {
      throw std::invalid_argument("Dataset: non-finite sample component");
    }
    max_feature_norm_ = std::max(max_feature_norm_, s.features.norm());
  }
  if (imratio_ == 0.0) {
    int positives = 0;
    for (const Sample& s : samples_) positives += s.label > 0 ? 1 : 0;
    imratio_ = static_cast<double>(positives) / static_cast<double>(size());
  }
}

Dataset Dataset::ReplaceOne(int index, Sample replacement) const {
  if (index < 0 || index >= size()) {
    throw std::invalid_argument("Dataset::ReplaceOne: index out of range");
  }
  std::vector<Sample> copy = samples_;
  copy[static_cast<size_t>(index)] = std::move(replacement);
  return Dataset(std::move(copy), imratio_);
}

std::string Dataset::ToCsv() const {
  std::string out;
  out += std::to_string(size());
  out += ',';
  out += std::to_string(d_feat_);
  out += ',';
  out += FormatDouble(imratio_);
  out += '\n';
  for (const Sample& s : samples_) {
    out += FormatDouble(s.label);
    for (int j = 0; j < d_feat_; ++j) {
      out += ',';
      out += FormatDouble(s.features[j]);
    }
    out += '\n';
  }
  return out;
}

void Dataset::WriteCsv(const std::string& path) const {
  AtomicWriteFile(path, ToCsv());
}

Dataset Dataset::FromCsvText(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) {
    throw std::invalid_argument("Dataset::FromCsv: empty file");
  }
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() != 3) {
    throw std::invalid_argument("Dataset::FromCsv: header must be n,d_feat,imratio");
  }
  const int n = std::stoi(header[0]);
  const int d = std::stoi(header[1]);
  const double imratio = ParseDouble(header[2]);
  std::vector<Sample> samples;
  samples.reserve(static_cast<size_t>(n));
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitCsvLine(line);
    if (static_cast<int>(fields.size()) != d + 1) {
      throw std::invalid_argument("Dataset::FromCsv: row arity mismatch");
    }
    Sample s;
    s.label = ParseDouble(fields[0]);
    s.features.resize(d);
    for (int j = 0; j < d; ++j) s.features[j] = ParseDouble(fields[j + 1]);
    samples.push_back(std::move(s));
  }
  if (static_cast<int>(samples.size()) != n) {
    throw std::invalid_argument("Dataset::FromCsv: row count disagrees with header");
  }
  return Dataset(std::move(samples), imratio);
}

Dataset Dataset::FromCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("Dataset::FromCsv: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return FromCsvText(buf.str());
}

Dataset MakeImbalancedDataset(int n, int d_feat, double imratio, uint64_t seed) {
  if (n < 1 || d_feat < 1) {
    throw std::invalid_argument("MakeImbalancedDataset: n and d_feat must be >= 1");
  }
  if (!(imratio > 0.0) || imratio > 0.5) {
    throw std::invalid_argument("MakeImbalancedDataset: imratio must be in (0, 0.5]");
  }
  const int positives = static_cast<int>(std::floor(n * imratio));
  if (positives < 1) {
    throw std::invalid_argument("MakeImbalancedDataset: n * imratio must be >= 1");
  }
  constexpr double kMeanScale = 2.0;
  const double mu = kMeanScale / std::sqrt(static_cast<double>(d_feat));
  Rng rng = Rng(seed).Split("dataset");
  std::vector<Sample> samples;
  samples.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool positive = i < positives;
    Sample s;
    s.label = positive ? 1.0 : -1.0;
    s.features.resize(d_feat);
    const double mean = positive ? mu : -mu;
    for (int j = 0; j < d_feat; ++j) s.features[j] = mean + rng.NextGaussian();
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples), imratio);
}

}  // namespace drodp
