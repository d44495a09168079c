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

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "faultgrover/search_space.hpp"

namespace faultgrover {

/// Symmetric pure state: every unmarked item carries alpha, every non-faulty
/// marked item carries beta, the faulty item carries gamma. All amplitudes
/// are real since D, Q and the fault are real and the start state is real.
struct ReducedPureState {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    friend bool operator==(const ReducedPureState&, const ReducedPureState&) = default;
};

/// Image of a ReducedPureState on the unit sphere:
/// (alpha*sqrt(n-k), beta*sqrt(k-1), gamma).
struct SpherePoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double dot(const SpherePoint& o) const { return x * o.x + y * o.y + z * o.z; }
    double distance(const SpherePoint& o) const {
        return std::hypot(x - o.x, y - o.y, z - o.z);
    }
};

/// Measurement distribution over the three item classes.
struct ClassProbabilities {
    double unmarked = 0.0;
    double nonfaulty_marked = 0.0;
    double faulty = 0.0;

    double marked() const { return nonfaulty_marked + faulty; }
    double total() const { return unmarked + nonfaulty_marked + faulty; }
};

inline double norm_squared(const ReducedPureState& s, const SearchSpace& space) {
    return space.unmarked() * s.alpha * s.alpha + space.nonfaulty() * s.beta * s.beta +
           s.gamma * s.gamma;
}

inline ReducedPureState init_uniform(const SearchSpace& space) {
    const double u = 1.0 / std::sqrt(space.items());
    return {u, u, u};
}

/// Inversion about the mean: x -> 2*mu - x for every item amplitude.
inline ReducedPureState apply_diffusion(const ReducedPureState& s, const SearchSpace& space) {
    const double mu =
        (space.unmarked() * s.alpha + space.nonfaulty() * s.beta + s.gamma) / space.items();
    return {2.0 * mu - s.alpha, 2.0 * mu - s.beta, 2.0 * mu - s.gamma};
}

/// Marked-item sign flip. When the fault occurs the faulty item is left alone.
inline ReducedPureState apply_query(const ReducedPureState& s, const SearchSpace&,
                                    bool fault_occurred) {
    return {s.alpha, -s.beta, fault_occurred ? s.gamma : -s.gamma};
}

/// One algorithm step: query (possibly faulty), then diffusion.
inline ReducedPureState step(const ReducedPureState& s, const SearchSpace& space,
                             bool fault_occurred) {
    return apply_diffusion(apply_query(s, space, fault_occurred), space);
}

inline ClassProbabilities measure_probs(const ReducedPureState& s, const SearchSpace& space) {
    return {space.unmarked() * s.alpha * s.alpha, space.nonfaulty() * s.beta * s.beta,
            s.gamma * s.gamma};
}

inline SpherePoint to_sphere(const ReducedPureState& s, const SearchSpace& space) {
    return {s.alpha * std::sqrt(space.unmarked()), s.beta * std::sqrt(space.nonfaulty()),
            s.gamma};
}

/// Inverse of to_sphere. Sectors of weight zero (k = 1 or k = n) come back as 0.
inline ReducedPureState from_sphere(const SpherePoint& p, const SearchSpace& space) {
    const double su = std::sqrt(space.unmarked());
    const double sf = std::sqrt(space.nonfaulty());
    return {su > 0.0 ? p.x / su : 0.0, sf > 0.0 ? p.y / sf : 0.0, p.z};
}

inline ReducedPureState renormalized(const ReducedPureState& s, const SearchSpace& space) {
    const double r = std::sqrt(norm_squared(s, space));
    return {s.alpha / r, s.beta / r, s.gamma / r};
}

/// Counts renormalizations performed by long runs.
struct RenormalizationLog {
    std::uint64_t checks = 0;
    std::uint64_t events = 0;
    double max_deviation = 0.0;
};

inline constexpr std::uint64_t kRenormalizationInterval = 10'000;
inline constexpr double kRenormalizationThreshold = 1e-12;

/// Runs `steps` steps from `start`; `fault_at(t)` decides the fault flag of
/// step t (0-based). Every kRenormalizationInterval steps the norm is checked
/// and restored when it drifted past kRenormalizationThreshold.
template <typename FaultFn>
ReducedPureState evolve(ReducedPureState start, const SearchSpace& space, std::uint64_t steps,
                        FaultFn&& fault_at, RenormalizationLog* log = nullptr) {
    ReducedPureState s = start;
    for (std::uint64_t t = 0; t < steps; ++t) {
        s = step(s, space, static_cast<bool>(fault_at(t)));
        if ((t + 1) % kRenormalizationInterval == 0) {
            const double dev = std::abs(norm_squared(s, space) - 1.0);
            if (log != nullptr) {
                ++log->checks;
                log->max_deviation = std::max(log->max_deviation, dev);
            }
            if (dev > kRenormalizationThreshold) {
                s = renormalized(s, space);
                if (log != nullptr) {
                    ++log->events;
                }
            }
        }
    }
    return s;
}

/// Fault-free run of `steps` steps from the uniform state.
inline ReducedPureState evolve_fault_free(const SearchSpace& space, std::uint64_t steps,
                                          RenormalizationLog* log = nullptr) {
    return evolve(init_uniform(space), space, steps, [](std::uint64_t) { return false; }, log);
}

}  // namespace faultgrover
