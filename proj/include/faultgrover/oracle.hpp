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

// Brute-force references on the unreduced n-dimensional space. Dense and
// O(n^3) per step; meant for small instances and test cross-checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "faultgrover/density.hpp"
#include "faultgrover/search_space.hpp"

namespace faultgrover::oracle {

inline constexpr std::uint64_t kMaxFullDimension = 256;
inline constexpr std::uint64_t kMaxEnumerationDimension = 64;
inline constexpr std::uint64_t kMaxEnumerationSteps = 16;
inline constexpr double kPatternTolerance = 1e-8;

/// Raised when a full matrix does not have the symmetric block pattern.
struct PatternViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Item roles in the full basis: 0..k-2 non-faulty marked, k-1 faulty,
/// k..n-1 unmarked.
enum class Role { NonFaulty, Faulty, Unmarked };

inline Role role_of(std::uint64_t i, const SearchSpace& space) {
    if (i + 1 < space.k) {
        return Role::NonFaulty;
    }
    return i + 1 == space.k ? Role::Faulty : Role::Unmarked;
}

struct FullDensity {
    Eigen::MatrixXd matrix;
};

inline void check_dimension(const SearchSpace& space, std::uint64_t cap, const char* who) {
    if (space.n > cap) {
        throw PreconditionError(std::string(who) + ": n=" + std::to_string(space.n) +
                                " exceeds the oracle cap " + std::to_string(cap));
    }
}

inline Eigen::MatrixXd diffusion_matrix(const SearchSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.n);
    Eigen::MatrixXd dm = Eigen::MatrixXd::Constant(n, n, 2.0 / space.items());
    dm.diagonal().array() -= 1.0;
    return dm;
}

/// Diagonal of the query: -1 on the marked items it flips.
inline Eigen::VectorXd query_signs(const SearchSpace& space, bool fault_occurred) {
    const auto n = static_cast<Eigen::Index>(space.n);
    Eigen::VectorXd s = Eigen::VectorXd::Ones(n);
    for (std::uint64_t i = 0; i < space.k; ++i) {
        const bool faulty = role_of(i, space) == Role::Faulty;
        if (!(faulty && fault_occurred)) {
            s(static_cast<Eigen::Index>(i)) = -1.0;
        }
    }
    return s;
}

inline FullDensity full_uniform(const SearchSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.n);
    return {Eigen::MatrixXd::Constant(n, n, 1.0 / space.items())};
}

/// Expands a symmetric 6-tuple into the n x n matrix it stands for.
inline FullDensity expand_symmetric(const SymmetricDensity& rho, const SearchSpace& space) {
    check_dimension(space, kMaxFullDimension, "expand_symmetric");
    const auto n = static_cast<Eigen::Index>(space.n);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Role ri = role_of(static_cast<std::uint64_t>(i), space);
            const Role rj = role_of(static_cast<std::uint64_t>(j), space);
            const auto pair = [&](Role x, Role y) {
                return (ri == x && rj == y) || (ri == y && rj == x);
            };
            double v = 0.0;
            if (pair(Role::NonFaulty, Role::NonFaulty)) v = rho.a;
            else if (pair(Role::NonFaulty, Role::Faulty)) v = rho.a_prime;
            else if (pair(Role::Faulty, Role::Faulty)) v = rho.b;
            else if (pair(Role::NonFaulty, Role::Unmarked)) v = rho.c;
            else if (pair(Role::Faulty, Role::Unmarked)) v = rho.d_prime;
            else v = rho.d;
            m(i, j) = v;
        }
    }
    return {m};
}

/// rho -> D [ (1-p) Q rho Q + p Q_nf rho Q_nf ] D, with Q_nf sparing the
/// faulty item.
inline FullDensity full_step(const FullDensity& rho, const SearchSpace& space) {
    check_dimension(space, kMaxFullDimension, "full_step");
    const Eigen::MatrixXd dm = diffusion_matrix(space);
    const Eigen::VectorXd q_all = query_signs(space, false);
    const Eigen::VectorXd q_nf = query_signs(space, true);
    const double p = space.fault_prob;
    const Eigen::MatrixXd mixed =
        (1.0 - p) * (q_all.asDiagonal() * rho.matrix * q_all.asDiagonal()) +
        p * (q_nf.asDiagonal() * rho.matrix * q_nf.asDiagonal());
    return {dm * mixed * dm};
}

inline FullDensity full_evolve(FullDensity rho, const SearchSpace& space, std::uint64_t steps) {
    for (std::uint64_t t = 0; t < steps; ++t) {
        rho = full_step(rho, space);
    }
    return rho;
}

struct Extraction {
    SymmetricDensity rho;
    double max_spread = 0.0;  // largest deviation of an entry from its role mean
};

/// Role-wise averages of a full matrix; throws PatternViolation when the
/// entries of some role disagree by more than kPatternTolerance.
inline Extraction extract_symmetric(const FullDensity& full, const SearchSpace& space) {
    const auto n = static_cast<Eigen::Index>(space.n);
    if (full.matrix.rows() != n || full.matrix.cols() != n) {
        throw PreconditionError("extract_symmetric: matrix size does not match n");
    }
    // Slots: a, a', b, c, d', d.
    std::array<double, 6> sum{};
    std::array<double, 6> count{};
    const auto slot = [&](Eigen::Index i, Eigen::Index j) -> std::size_t {
        const Role ri = role_of(static_cast<std::uint64_t>(i), space);
        const Role rj = role_of(static_cast<std::uint64_t>(j), space);
        const auto pair = [&](Role x, Role y) {
            return (ri == x && rj == y) || (ri == y && rj == x);
        };
        if (pair(Role::NonFaulty, Role::NonFaulty)) return 0;
        if (pair(Role::NonFaulty, Role::Faulty)) return 1;
        if (pair(Role::Faulty, Role::Faulty)) return 2;
        if (pair(Role::NonFaulty, Role::Unmarked)) return 3;
        if (pair(Role::Faulty, Role::Unmarked)) return 4;
        return 5;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto s = slot(i, j);
            sum[s] += full.matrix(i, j);
            count[s] += 1.0;
        }
    }
    std::array<double, 6> mean{};
    for (std::size_t s = 0; s < 6; ++s) {
        mean[s] = count[s] > 0.0 ? sum[s] / count[s] : 0.0;
    }
    double spread = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            spread = std::max(spread, std::abs(full.matrix(i, j) - mean[slot(i, j)]));
        }
    }
    if (spread > kPatternTolerance) {
        throw PatternViolation("extract_symmetric: within-role spread " + std::to_string(spread) +
                               " exceeds tolerance");
    }
    return {{mean[0], mean[1], mean[2], mean[3], mean[4], mean[5]}, spread};
}

/// Sum over all 2^t fault words of the weighted outer products of the
/// unreduced pure states.
inline FullDensity enumerate_words_full(const SearchSpace& space, std::uint64_t t) {
    check_dimension(space, kMaxEnumerationDimension, "enumerate_words_full");
    if (t > kMaxEnumerationSteps) {
        throw PreconditionError("enumerate_words_full: t exceeds " +
                                std::to_string(kMaxEnumerationSteps));
    }
    const auto n = static_cast<Eigen::Index>(space.n);
    const Eigen::MatrixXd dm = diffusion_matrix(space);
    const Eigen::VectorXd q_all = query_signs(space, false);
    const Eigen::VectorXd q_nf = query_signs(space, true);
    const double eps = space.fault_prob;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);

    const auto visit = [&](const auto& self, const Eigen::VectorXd& psi, double weight,
                           std::uint64_t depth) -> void {
        if (weight == 0.0) {
            return;
        }
        if (depth == t) {
            acc += weight * psi * psi.transpose();
            return;
        }
        self(self, dm * q_all.cwiseProduct(psi), weight * (1.0 - eps), depth + 1);
        self(self, dm * q_nf.cwiseProduct(psi), weight * eps, depth + 1);
    };
    const Eigen::VectorXd psi0 = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(space.items()));
    visit(visit, psi0, 1.0, 0);
    return {acc};
}

/// Eigenvalues in ascending order.
inline Eigen::VectorXd full_eigenvalues(const FullDensity& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rho.matrix, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

/// Full pure-state evolution for a given fault word.
inline Eigen::VectorXd full_pure_evolve(const SearchSpace& space, const std::vector<bool>& word) {
    check_dimension(space, kMaxFullDimension, "full_pure_evolve");
    const auto n = static_cast<Eigen::Index>(space.n);
    const Eigen::MatrixXd dm = diffusion_matrix(space);
    Eigen::VectorXd psi = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(space.items()));
    for (bool fault : word) {
        psi = dm * query_signs(space, fault).cwiseProduct(psi);
    }
    return psi;
}

}  // namespace faultgrover::oracle
