// Copyright 2026 The milpgnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random source with platform-independent transforms.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not, so uniform reals, bounded
// integers and normals are derived here: uniforms from the top 53 bits,
// integers by rejection, normals by the Box-Muller transform.

#ifndef MILPGNN_RNG_H_
#define MILPGNN_RNG_H_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace milpgnn {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform01();

  // Uniform on {0, ..., n - 1}; n must be positive.
  int64_t UniformInt(int64_t n);

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Normal with mean `mean` and standard deviation `stddev`.
  double Normal(double mean, double stddev);

  // k distinct values from {0, ..., n - 1} in sampling order.
  std::vector<int> SampleDistinct(int k, int n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace milpgnn

#endif  // MILPGNN_RNG_H_
