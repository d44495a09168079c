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
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "faultgrover/density.hpp"
#include "faultgrover/reduced_state.hpp"
#include "faultgrover/search_space.hpp"

namespace faultgrover {

/// Exact enumeration produced more distinct branches than allowed.
struct BranchExplosion : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Branch {
    double weight = 0.0;
    ReducedPureState state;
    std::uint64_t word_length = 0;  // steps taken
    std::uint64_t fault_count = 0;  // |w| of the first word merged into this branch
};

/// Probability mixture of symmetric pure states indexed by fault words.
struct WeightedMixture {
    std::vector<Branch> branches;

    double total_weight() const {
        double s = 0.0;
        for (const auto& br : branches) {
            s += br.weight;
        }
        return s;
    }
};

namespace detail {

/// Merges branches whose sphere points lie closer than `tol` into the
/// earliest one in enumeration order. Points are bucketed on a grid of cell
/// size tol, so only the 27 neighbouring cells are searched.
inline std::vector<Branch> merge_branches(std::vector<Branch> in, const SearchSpace& space,
                                          double tol) {
    if (!(tol > 0.0) || in.size() < 2) {
        return in;
    }
    using Cell = std::array<std::int64_t, 3>;
    struct CellHash {
        std::size_t operator()(const Cell& c) const noexcept {
            std::uint64_t h = 1469598103934665603ull;
            for (auto v : c) {
                h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };
    std::vector<SpherePoint> pts;
    std::vector<Cell> cells;
    pts.reserve(in.size());
    cells.reserve(in.size());
    std::unordered_map<Cell, std::vector<std::size_t>, CellHash> grid;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const auto p = to_sphere(in[i].state, space);
        const Cell c{static_cast<std::int64_t>(std::floor(p.x / tol)),
                     static_cast<std::int64_t>(std::floor(p.y / tol)),
                     static_cast<std::int64_t>(std::floor(p.z / tol))};
        pts.push_back(p);
        cells.push_back(c);
        grid[c].push_back(i);
    }
    std::vector<char> absorbed(in.size(), 0);
    std::vector<Branch> out;
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (absorbed[i]) {
            continue;
        }
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    const auto it =
                        grid.find({cells[i][0] + dx, cells[i][1] + dy, cells[i][2] + dz});
                    if (it == grid.end()) {
                        continue;
                    }
                    auto& members = it->second;
                    // Drop absorbed entries as we go so dense cells stay cheap.
                    std::size_t live = 0;
                    for (std::size_t j : members) {
                        if (absorbed[j]) {
                            continue;
                        }
                        if (j > i && pts[i].distance(pts[j]) < tol) {
                            in[i].weight += in[j].weight;
                            absorbed[j] = 1;
                            continue;
                        }
                        members[live++] = j;
                    }
                    members.resize(live);
                }
            }
        }
        absorbed[i] = 1;
        out.push_back(in[i]);
    }
    return out;
}

}  // namespace detail

/// Enumerates both fault outcomes at every step. Outcomes of probability zero
/// are dropped. Branches closer than merge_tol on the sphere are merged;
/// merge_tol = 0 keeps every word separate.
inline WeightedMixture evolve_exact(const SearchSpace& space, std::uint64_t t, double merge_tol,
                                    std::size_t max_branches) {
    if (max_branches < 1) {
        throw PreconditionError("evolve_exact: max_branches must be at least 1");
    }
    if (merge_tol < 0.0) {
        throw PreconditionError("evolve_exact: merge_tol must be non-negative");
    }
    const double eps = space.fault_prob;
    WeightedMixture mix;
    mix.branches.push_back({1.0, init_uniform(space), 0, 0});
    for (std::uint64_t step_index = 0; step_index < t; ++step_index) {
        std::vector<Branch> next;
        next.reserve(mix.branches.size() * 2);
        for (const auto& br : mix.branches) {
            if (eps < 1.0) {
                next.push_back({br.weight * (1.0 - eps), step(br.state, space, false),
                                br.word_length + 1, br.fault_count});
            }
            if (eps > 0.0) {
                next.push_back({br.weight * eps, step(br.state, space, true), br.word_length + 1,
                                br.fault_count + 1});
            }
        }
        next = detail::merge_branches(std::move(next), space, merge_tol);
        if (next.size() > max_branches) {
            throw BranchExplosion("evolve_exact: " + std::to_string(next.size()) +
                                  " branches after step " + std::to_string(step_index + 1) +
                                  " exceed max_branches=" + std::to_string(max_branches));
        }
        mix.branches = std::move(next);
    }
    return mix;
}

inline SymmetricDensity mixture_to_density(const WeightedMixture& mix, const SearchSpace&) {
    SymmetricDensity rho;
    for (const auto& br : mix.branches) {
        const auto& s = br.state;
        rho.a += br.weight * s.beta * s.beta;
        rho.a_prime += br.weight * s.beta * s.gamma;
        rho.b += br.weight * s.gamma * s.gamma;
        rho.c += br.weight * s.alpha * s.beta;
        rho.d_prime += br.weight * s.alpha * s.gamma;
        rho.d += br.weight * s.alpha * s.alpha;
    }
    return rho;
}

// ---------------------------------------------------------------------------
// Monte Carlo trajectories
// ---------------------------------------------------------------------------

/// Generator for trajectory `index` of a sweep seeded with `base_seed`. The
/// seed sequence algorithm is fixed by the standard, so streams are
/// reproducible across platforms.
inline std::mt19937_64 trajectory_engine(std::uint64_t base_seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

/// Bernoulli(p) from the top 53 bits of one draw.
inline bool draw_fault(std::mt19937_64& engine, double p) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    return u < p;
}

inline std::vector<bool> sample_fault_word(const SearchSpace& space, std::uint64_t t,
                                           std::uint64_t base_seed, std::uint64_t index = 0) {
    auto engine = trajectory_engine(base_seed, index);
    std::vector<bool> word(t);
    for (std::uint64_t i = 0; i < t; ++i) {
        word[i] = draw_fault(engine, space.fault_prob);
    }
    return word;
}

/// One trajectory with an independent fault draw per step.
inline ReducedPureState sample_trajectory(const SearchSpace& space, std::uint64_t t,
                                          std::uint64_t base_seed, std::uint64_t index = 0) {
    auto engine = trajectory_engine(base_seed, index);
    return evolve(init_uniform(space), space, t,
                  [&](std::uint64_t) { return draw_fault(engine, space.fault_prob); });
}

struct MonteCarloEstimate {
    std::uint64_t samples = 0;
    ClassProbabilities mean;
    ClassProbabilities standard_error;
};

/// Averages the Born probabilities of `samples` trajectories (indices
/// 0..samples-1 under base_seed).
inline MonteCarloEstimate estimate_class_probs(const SearchSpace& space, std::uint64_t t,
                                               std::uint64_t samples, std::uint64_t base_seed) {
    if (samples < 2) {
        throw PreconditionError("estimate_class_probs: need at least two samples");
    }
    // Welford accumulation: identical samples give exactly zero variance.
    std::array<double, 3> mean{}, m2{};
    for (std::uint64_t i = 0; i < samples; ++i) {
        const auto pr = measure_probs(sample_trajectory(space, t, base_seed, i), space);
        const std::array<double, 3> v{pr.unmarked, pr.nonfaulty_marked, pr.faulty};
        const double count = static_cast<double>(i + 1);
        for (std::size_t j = 0; j < 3; ++j) {
            const double delta = v[j] - mean[j];
            mean[j] += delta / count;
            m2[j] += delta * (v[j] - mean[j]);
        }
    }
    const double m = static_cast<double>(samples);
    std::array<double, 3> se{};
    for (std::size_t j = 0; j < 3; ++j) {
        se[j] = std::sqrt(std::max(0.0, m2[j] / (m - 1.0)) / m);
    }
    return {samples, {mean[0], mean[1], mean[2]}, {se[0], se[1], se[2]}};
}

}  // namespace faultgrover
