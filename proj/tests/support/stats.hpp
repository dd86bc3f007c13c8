// Copyright 2026 The edgesched Authors
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

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace stats {

// Upper critical value of chi-square with `df` degrees of freedom at
// alpha = 0.01 (Wilson-Hilferty; z = 2.3263).
inline double chi2_critical_01(std::size_t df) {
  const double k = static_cast<double>(df);
  const double z = 2.326347874;
  const double a = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

struct Chi2 {
  double statistic = 0.0;
  std::size_t df = 0;
};

// Pearson statistic; adjacent bins are pooled until each expects >= 5.
inline Chi2 chi2(const std::vector<double>& observed, const std::vector<double>& probability,
                 double draws) {
  std::vector<double> obs;
  std::vector<double> exp;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o += observed[i];
    e += probability[i] * draws;
    if (e >= 5.0) {
      obs.push_back(o);
      exp.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 && !exp.empty()) {
    obs.back() += o;
    exp.back() += e;
  }
  Chi2 r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  r.df = obs.size() - 1;
  return r;
}

}  // namespace stats
