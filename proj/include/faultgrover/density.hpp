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

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "faultgrover/reduced_state.hpp"
#include "faultgrover/search_space.hpp"

namespace faultgrover {

/// The six distinct entries of an n x n density matrix that is symmetric
/// under permutations of the non-faulty marked items and of the unmarked
/// items. Index order: non-faulty marked (a), faulty (b), unmarked (d).
///
///   a  : non-faulty x non-faulty      a_prime : non-faulty x faulty
///   b  : faulty x faulty              c       : non-faulty x unmarked
///   d  : unmarked x unmarked          d_prime : faulty x unmarked
struct SymmetricDensity {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d_prime = 0.0;
    double d = 0.0;

    std::array<double, 6> as_array() const { return {a, a_prime, b, c, d_prime, d}; }

    double max_abs_difference(const SymmetricDensity& o) const {
        const auto x = as_array();
        const auto y = o.as_array();
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            m = std::max(m, std::abs(x[i] - y[i]));
        }
        return m;
    }
};

/// 3 x 3 image in the orthonormal basis {|psi+>, |i_k>, |psi->}.
using Reduced3Matrix = Eigen::Matrix3d;

inline double trace(const SymmetricDensity& rho, const SearchSpace& space) {
    return space.nonfaulty() * rho.a + rho.b + space.unmarked() * rho.d;
}

inline SymmetricDensity init_uniform_density(const SearchSpace& space) {
    const double u = 1.0 / space.items();
    return {u, u, u, u, u, u};
}

/// Pure state |s><s| in symmetric form.
inline SymmetricDensity pure_density(const ReducedPureState& s) {
    return {s.beta * s.beta,   s.beta * s.gamma,  s.gamma * s.gamma,
            s.alpha * s.beta,  s.alpha * s.gamma, s.alpha * s.alpha};
}

/// Faulty query channel: (1-p) Q rho Q + p QE rho EQ.
inline SymmetricDensity apply_faulty_query_density(const SymmetricDensity& rho,
                                                   const SearchSpace& space) {
    const double s = 2.0 * space.fault_prob - 1.0;
    return {rho.a, -s * rho.a_prime, rho.b, -rho.c, s * rho.d_prime, rho.d};
}

/// D rho D, entrywise 4V - 2V_i - 2V_j + rho_ij with V_i the row means and V
/// the overall mean.
inline SymmetricDensity apply_diffusion_density(const SymmetricDensity& rho,
                                                const SearchSpace& space) {
    const double n = space.items();
    const double nf = space.nonfaulty();
    const double nu = space.unmarked();
    const double v1 = (nf * rho.a + rho.a_prime + nu * rho.c) / n;
    const double vk = (nf * rho.a_prime + rho.b + nu * rho.d_prime) / n;
    const double vn = (nf * rho.c + rho.d_prime + nu * rho.d) / n;
    const double v = (nf * v1 + vk + nu * vn) / n;
    return {4.0 * v - 4.0 * v1 + rho.a,          4.0 * v - 2.0 * v1 - 2.0 * vk + rho.a_prime,
            4.0 * v - 4.0 * vk + rho.b,          4.0 * v - 2.0 * v1 - 2.0 * vn + rho.c,
            4.0 * v - 2.0 * vk - 2.0 * vn + rho.d_prime, 4.0 * v - 4.0 * vn + rho.d};
}

inline SymmetricDensity step_density(const SymmetricDensity& rho, const SearchSpace& space) {
    return apply_diffusion_density(apply_faulty_query_density(rho, space), space);
}

inline SymmetricDensity evolve_density(SymmetricDensity rho, const SearchSpace& space,
                                       std::uint64_t steps) {
    for (std::uint64_t t = 0; t < steps; ++t) {
        rho = step_density(rho, space);
    }
    return rho;
}

inline ClassProbabilities success_probs(const SymmetricDensity& rho, const SearchSpace& space) {
    return {space.unmarked() * rho.d, space.nonfaulty() * rho.a, rho.b};
}

/// Limiting state: weight 1/3 on each of |psi+>, |i_k>, |psi->.
inline SymmetricDensity limit_state(const SearchSpace& space) {
    if (space.k < 2) {
        throw DegenerateInstance("limit_state: needs k >= 2 (no non-faulty marked items)");
    }
    if (space.n <= space.k) {
        throw DegenerateInstance("limit_state: needs n > k (no unmarked items)");
    }
    return {1.0 / (3.0 * space.nonfaulty()), 0.0, 1.0 / 3.0, 0.0, 0.0,
            1.0 / (3.0 * space.unmarked())};
}

inline Reduced3Matrix reduce3(const SymmetricDensity& rho, const SearchSpace& space) {
    const double nf = space.nonfaulty();
    const double nu = space.unmarked();
    const double ac = std::sqrt(nf * nu) * rho.c;
    const double aa = std::sqrt(nf) * rho.a_prime;
    const double dd = std::sqrt(nu) * rho.d_prime;
    Reduced3Matrix m;
    m << nf * rho.a, aa, ac,
         aa, rho.b, dd,
         ac, dd, nu * rho.d;
    return m;
}

inline Eigen::Vector3d reduced_eigenvalues(const SymmetricDensity& rho, const SearchSpace& space) {
    Eigen::SelfAdjointEigenSolver<Reduced3Matrix> solver(reduce3(rho, space),
                                                         Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

/// Half the sum of absolute eigenvalues of the difference.
inline double trace_distance(const Reduced3Matrix& x, const Reduced3Matrix& y) {
    Eigen::SelfAdjointEigenSolver<Reduced3Matrix> solver(x - y, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance_to_limit(const SymmetricDensity& rho, const SearchSpace& space) {
    return trace_distance(reduce3(rho, space), reduce3(limit_state(space), space));
}

}  // namespace faultgrover
