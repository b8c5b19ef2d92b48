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

#ifndef DRODP_DATASET_H_
#define DRODP_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace drodp {

struct Sample {
  Eigen::VectorXd features;
  double label = 0.0;  // +1 / -1 for binary tasks
};

// Immutable ordered sample collection; index i identifies sample i for the
// whole lifetime of the dataset.
class Dataset {
 public:
  explicit Dataset(std::vector<Sample> samples, double imratio = 0.0);

  int size() const { return static_cast<int>(samples_.size()); }
  int feature_dim() const { return d_feat_; }
  const Sample& sample(int i) const { return samples_[static_cast<size_t>(i)]; }
  const std::vector<Sample>& samples() const { return samples_; }
  double imratio() const { return imratio_; }
  double max_feature_norm() const { return max_feature_norm_; }

  // Returns a copy with sample `index` replaced (neighboring dataset).
  Dataset ReplaceOne(int index, Sample replacement) const;

  // CSV: first line "n,d_feat,imratio", then one "label,f1,...,fd" row per
  // sample, 17 significant digits.
  std::string ToCsv() const;
  void WriteCsv(const std::string& path) const;
  static Dataset FromCsv(const std::string& path);
  static Dataset FromCsvText(const std::string& text);

 private:
  std::vector<Sample> samples_;
  int d_feat_ = 0;
  double imratio_ = 0.0;
  double max_feature_norm_ = 0.0;
};

// Two fixed class-conditional unit-covariance Gaussians with means
// +/- mu/sqrt(d) * 1 (mu = 2); floor(n * imratio) positive labels, the rest
// negative. Deterministic in `seed`.
Dataset MakeImbalancedDataset(int n, int d_feat, double imratio, uint64_t seed);

}  // namespace drodp

#endif  // DRODP_DATASET_H_
