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
#include <random>

#include "faultgrover/density.hpp"
#include "faultgrover/reduced_state.hpp"

namespace faultgrover::testutil {

/// Random unit-norm symmetric pure state.
inline ReducedPureState random_state(std::mt19937_64& rng, const SearchSpace& space) {
    std::normal_distribution<double> g(0.0, 1.0);
    ReducedPureState s{g(rng), g(rng), g(rng)};
    if (space.k == 1) s.beta = 0.0;
    if (space.k == space.n) s.alpha = 0.0;
    return renormalized(s, space);
}

/// Random valid density: convex combination of random pure states.
inline SymmetricDensity random_density(std::mt19937_64& rng, const SearchSpace& space,
                                       int components = 4) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SymmetricDensity rho;
    double total = 0.0;
    std::vector<double> w(components);
    for (auto& x : w) {
        x = u(rng);
        total += x;
    }
    for (int i = 0; i < components; ++i) {
        const auto p = pure_density(random_state(rng, space));
        const double c = w[i] / total;
        rho.a += c * p.a;
        rho.a_prime += c * p.a_prime;
        rho.b += c * p.b;
        rho.c += c * p.c;
        rho.d_prime += c * p.d_prime;
        rho.d += c * p.d;
    }
    return rho;
}

/// Marked probability of fault-free Grover with k marked items.
inline double closed_form_marked(const SearchSpace& space, std::uint64_t t) {
    const double half = std::asin(std::sqrt(static_cast<double>(space.k) / space.items()));
    const double s = std::sin((2.0 * static_cast<double>(t) + 1.0) * half);
    return s * s;
}

}  // namespace faultgrover::testutil
