// Copyright 2026 The faultgrover Authors
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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace faultgrover {

/// Raised when an instance is outside an operation's domain (e.g. k = 1 where
/// the non-faulty marked sector is empty, or p in {0, 1} for limit runs).
struct DegenerateInstance : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised on violated numeric preconditions (angles out of range, bad sizes).
struct PreconditionError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Search problem: n items, k marked. Items i_1..i_{k-1} are answered
/// correctly by every query; i_k is skipped by the query with probability
/// fault_prob.
struct SearchSpace {
    std::uint64_t n = 1;
    std::uint64_t k = 1;
    double fault_prob = 0.0;

    SearchSpace() = default;
    SearchSpace(std::uint64_t n_, std::uint64_t k_, double fault_prob_ = 0.0)
        : n(n_), k(k_), fault_prob(fault_prob_) {
        validate();
    }

    void validate() const {
        if (n < 1) {
            throw PreconditionError("SearchSpace: n must be positive");
        }
        if (k < 1 || k > n) {
            throw PreconditionError("SearchSpace: need 1 <= k <= n, got n=" + std::to_string(n) +
                                    " k=" + std::to_string(k));
        }
        if (!(fault_prob >= 0.0 && fault_prob <= 1.0)) {
            throw PreconditionError("SearchSpace: fault_prob must lie in [0, 1]");
        }
    }

    double items() const { return static_cast<double>(n); }
    /// Number of unmarked items, n - k.
    double unmarked() const { return static_cast<double>(n - k); }
    /// Number of non-faulty marked items, k - 1.
    double nonfaulty() const { return static_cast<double>(k - 1); }

    /// Inclination between the fault-free trajectory circle and the equator,
    /// arctan(1/sqrt(k-1)). Undefined for k = 1.
    double inclination() const {
        if (k < 2) {
            throw DegenerateInstance("inclination: undefined for k = 1");
        }
        return std::atan(1.0 / std::sqrt(nonfaulty()));
    }

    SearchSpace with_fault_prob(double p) const { return SearchSpace(n, k, p); }
};

/// Rotation per fault-free step, 2*arcsin(sqrt(k/n)).
inline double grover_angle(const SearchSpace& space) {
    return 2.0 * std::asin(std::sqrt(static_cast<double>(space.k) / space.items()));
}

/// Usual Grover step count (pi/4)*sqrt(n/k), rounded half-up after scaling.
inline std::uint64_t scaled_grover_steps(const SearchSpace& space, double factor) {
    const double t = factor * (std::numbers::pi / 4.0) *
                     std::sqrt(space.items() / static_cast<double>(space.k));
    return static_cast<std::uint64_t>(std::floor(t + 0.5));
}

}  // namespace faultgrover
