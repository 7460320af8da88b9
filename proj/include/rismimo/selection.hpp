// Copyright 2026 The rismimo Authors.
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

#ifndef RISMIMO_SELECTION_HPP
#define RISMIMO_SELECTION_HPP

#include <cstdint>
#include <utility>

#include "rismimo/capacity.hpp"

namespace rismimo {

// Incremental greedy on marginal capacity gains, starting from the empty
// set. Ties broken by lowest antenna index.
AntennaSet greedy_select(const ChannelTriple& t, const ReflectionState& r,
                         int cap, double snr);

// Column-space variant used when the effective channel is already assembled.
AntennaSet greedy_select_columns(const Eigen::MatrixXcd& columns, int cap,
                                 double snr);

// True optimum by subset enumeration. Refuses when C(L, cap) exceeds
// budget. Deterministic: ties broken by lexicographic subset order.
// parallel=false keeps the serial reference sweep.
std::pair<AntennaSet, double> exhaustive_select(
    const Eigen::MatrixXcd& columns, int cap, double snr,
    std::uint64_t subset_budget = 1000000, bool parallel = true);

std::pair<AntennaSet, double> exhaustive_select(
    const ChannelTriple& t, const ReflectionState& r, int cap, double snr,
    std::uint64_t subset_budget = 1000000, bool parallel = true);

// Uniform random cap-subset of {0..l-1}.
AntennaSet random_select(int l, int cap, RngStream& rng);

// C(n, k) with saturation at 2^63-1.
std::uint64_t binomial(int n, int k);

}  // namespace rismimo

#endif  // RISMIMO_SELECTION_HPP
