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
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "faultgrover/reduced_state.hpp"
#include "faultgrover/search_space.hpp"

namespace faultgrover {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Right spherical triangles
// ---------------------------------------------------------------------------

/// Sides a, b, c (c opposite the right angle C) and the two remaining
/// angles A, B, all in radians.
struct RightTriangle {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double A = 0.0;
    double B = 0.0;
};

enum class NapierRule { R1, R2, R3, R4, R5, R6, R7, R8, R9, R10 };

inline constexpr NapierRule kAllNapierRules[] = {
    NapierRule::R1, NapierRule::R2, NapierRule::R3, NapierRule::R4, NapierRule::R5,
    NapierRule::R6, NapierRule::R7, NapierRule::R8, NapierRule::R9, NapierRule::R10};

inline std::string to_string(NapierRule r) {
    return "R" + std::to_string(static_cast<int>(r) + 1);
}

namespace detail {

inline double checked_tan(double x) {
    if (x == kPi / 2.0 || x == -kPi / 2.0) {
        throw PreconditionError("napier: tangent argument is pi/2");
    }
    return std::tan(x);
}

inline double checked_cot(double x) {
    if (x == 0.0) {
        throw PreconditionError("napier: cotangent argument is 0");
    }
    return std::cos(x) / std::sin(x);
}

}  // namespace detail

/// Right-hand side of the rule:
///   R1  cos c = cos a cos b       R6  tan b = cos A tan c
///   R2  sin a = sin A sin c       R7  tan a = cos B tan c
///   R3  sin b = sin B sin c       R8  cos A = sin B cos a
///   R4  tan a = tan A sin b       R9  cos B = sin A cos b
///   R5  tan b = tan B sin a       R10 cos c = cot A cot B
inline double napier(NapierRule rule, const RightTriangle& t) {
    using detail::checked_cot;
    using detail::checked_tan;
    switch (rule) {
        case NapierRule::R1: return std::cos(t.a) * std::cos(t.b);
        case NapierRule::R2: return std::sin(t.A) * std::sin(t.c);
        case NapierRule::R3: return std::sin(t.B) * std::sin(t.c);
        case NapierRule::R4: return checked_tan(t.A) * std::sin(t.b);
        case NapierRule::R5: return checked_tan(t.B) * std::sin(t.a);
        case NapierRule::R6: return std::cos(t.A) * checked_tan(t.c);
        case NapierRule::R7: return std::cos(t.B) * checked_tan(t.c);
        case NapierRule::R8: return std::sin(t.B) * std::cos(t.a);
        case NapierRule::R9: return std::sin(t.A) * std::cos(t.b);
        case NapierRule::R10: return checked_cot(t.A) * checked_cot(t.B);
    }
    throw PreconditionError("napier: unknown rule");
}

/// Left-hand side of the rule.
inline double napier_lhs(NapierRule rule, const RightTriangle& t) {
    using detail::checked_tan;
    switch (rule) {
        case NapierRule::R1: return std::cos(t.c);
        case NapierRule::R2: return std::sin(t.a);
        case NapierRule::R3: return std::sin(t.b);
        case NapierRule::R4: return checked_tan(t.a);
        case NapierRule::R5: return checked_tan(t.b);
        case NapierRule::R6: return checked_tan(t.b);
        case NapierRule::R7: return checked_tan(t.a);
        case NapierRule::R8: return std::cos(t.A);
        case NapierRule::R9: return std::cos(t.B);
        case NapierRule::R10: return std::cos(t.c);
    }
    throw PreconditionError("napier_lhs: unknown rule");
}

/// |lhs - rhs| of the rule as written.
inline double napier_raw_residual(NapierRule rule, const RightTriangle& t) {
    return std::abs(napier_lhs(rule, t) - napier(rule, t));
}

/// Residual of the rule with tangents and cotangents multiplied out, so every
/// term is a product of sines and cosines bounded by 1. Equals the raw
/// residual for R1-R3, R8, R9.
inline double napier_residual(NapierRule rule, const RightTriangle& t) {
    const double sa = std::sin(t.a), ca = std::cos(t.a);
    const double sb = std::sin(t.b), cb = std::cos(t.b);
    const double sc = std::sin(t.c), cc = std::cos(t.c);
    const double sA = std::sin(t.A), cA = std::cos(t.A);
    const double sB = std::sin(t.B), cB = std::cos(t.B);
    switch (rule) {
        case NapierRule::R4: return std::abs(sa * cA - sA * sb * ca);
        case NapierRule::R5: return std::abs(sb * cB - sB * sa * cb);
        case NapierRule::R6: return std::abs(sb * cc - cA * sc * cb);
        case NapierRule::R7: return std::abs(sa * cc - cB * sc * ca);
        case NapierRule::R10: return std::abs(cc * sA * sB - cA * cB);
        default: return napier_raw_residual(rule, t);
    }
}

/// Completes a right triangle from the angle A and its adjacent leg b,
/// both in (0, pi/2), using R4, R1, R8 and R9.
inline RightTriangle solve_right_triangle(double A, double b) {
    if (!(A > 0.0 && A < kPi / 2.0 && b > 0.0 && b < kPi / 2.0)) {
        throw PreconditionError("solve_right_triangle: A and b must lie in (0, pi/2)");
    }
    RightTriangle t;
    t.A = A;
    t.b = b;
    t.a = std::atan(std::tan(A) * std::sin(b));
    const double ca = std::cos(t.a);
    const double sa = std::sin(t.a);
    const double cb = std::cos(b);
    const double sb = std::sin(b);
    // atan2 forms stay accurate where acos is ill-conditioned.
    t.c = std::atan2(std::sqrt(sa * sa + ca * ca * sb * sb), ca * cb);
    t.B = std::atan2(std::cos(A) / ca, std::sin(A) * cb);
    return t;
}

// ---------------------------------------------------------------------------
// Fault displacement
// ---------------------------------------------------------------------------

/// Set-back along the fault-free route caused by reflecting a state at
/// latitude a through the equator, where A is the route's inclination:
/// arctan(tan 2a * sqrt(1 - cos^2 A / cos^2 a)). Requires 0 <= a <= A <= pi/4.
inline double fault_displacement(double latitude, double inclination) {
    if (!(inclination >= 0.0 && inclination <= kPi / 4.0)) {
        throw PreconditionError("fault_displacement: inclination must lie in [0, pi/4]");
    }
    if (!(latitude >= 0.0 && latitude <= inclination)) {
        throw PreconditionError("fault_displacement: need 0 <= a <= A");
    }
    const double ca = std::cos(inclination);
    const double cl = std::cos(latitude);
    const double radicand = std::max(0.0, 1.0 - (ca * ca) / (cl * cl));
    return std::atan(std::tan(2.0 * latitude) * std::sqrt(radicand));
}

struct FaultSetbackReport {
    double inclination = 0.0;
    bool passed = true;
    std::uint64_t near_points = 0;  // grid points with a <= min(A, pi/6)
    std::uint64_t far_points = 0;   // grid points with a in (pi/6, A]
    double worst_c_err = 0.0;
    double worst_c_err_latitude = 0.0;
    double worst_remaining_distance = 0.0;  // pi/2 - arcsin(sin a / sin A), far region
};

/// Grid check that every state either suffers a fault set-back of at most
/// pi/4 or already lies within pi/4 of the target meridian.
inline FaultSetbackReport check_fault_setback(double inclination, double grid_step) {
    if (!(inclination > 0.0 && inclination <= kPi / 4.0)) {
        throw PreconditionError("check_fault_setback: inclination must lie in (0, pi/4]");
    }
    if (!(grid_step > 0.0)) {
        throw PreconditionError("check_fault_setback: grid_step must be positive");
    }
    constexpr double kSlack = 1e-12;
    FaultSetbackReport rep;
    rep.inclination = inclination;
    const double near_end = std::min(inclination, kPi / 6.0);
    auto visit_near = [&](double a) {
        const double c_err = fault_displacement(a, inclination);
        ++rep.near_points;
        if (c_err > rep.worst_c_err) {
            rep.worst_c_err = c_err;
            rep.worst_c_err_latitude = a;
        }
        if (c_err > kPi / 4.0 + kSlack) {
            rep.passed = false;
        }
    };
    for (std::uint64_t i = 0;; ++i) {
        const double a = static_cast<double>(i) * grid_step;
        if (a >= near_end) {
            break;
        }
        visit_near(a);
    }
    visit_near(near_end);

    for (std::uint64_t i = 1;; ++i) {
        const double a = kPi / 6.0 + static_cast<double>(i) * grid_step;
        const bool last = a >= inclination;
        const double lat = last ? inclination : a;
        if (lat <= kPi / 6.0) {
            break;
        }
        const double c = std::asin(std::min(1.0, std::sin(lat) / std::sin(inclination)));
        const double remaining = kPi / 2.0 - c;
        ++rep.far_points;
        rep.worst_remaining_distance = std::max(rep.worst_remaining_distance, remaining);
        if (remaining > kPi / 4.0 + kSlack) {
            rep.passed = false;
        }
        if (last) {
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Speeds and step bounds
// ---------------------------------------------------------------------------

/// Lower bound on the per-step advance of any state on meridian b, as a
/// fraction of the fault-free rate:
/// sqrt(1 - sin^2 2A * sin^2 b / (cos^2 A cos^2 b + sin^2 b)).
/// Written with sines and cosines so b = pi/2 needs no special case.
inline double speed_lower(double longitude, double inclination) {
    const double sb = std::sin(longitude);
    const double cb = std::cos(longitude);
    const double cA = std::cos(inclination);
    const double s2A = std::sin(2.0 * inclination);
    const double ratio = (sb * sb) / (cA * cA * cb * cb + sb * sb);
    return std::sqrt(std::max(0.0, 1.0 - s2A * s2A * ratio));
}

/// Same bound projected onto the equator.
inline double projected_speed_lower(double longitude, double inclination) {
    return speed_lower(longitude, inclination) * std::cos(inclination);
}

inline constexpr double kQuadratureAbsTol = 1e-10;

namespace detail {

inline void check_meridian_args(double b_star, double inclination, const char* who) {
    if (!(inclination >= 0.0 && inclination <= kPi / 4.0)) {
        throw PreconditionError(std::string(who) + ": inclination must lie in [0, pi/4]");
    }
    if (!(b_star >= 0.0 && b_star <= kPi / 2.0)) {
        throw PreconditionError(std::string(who) + ": b_star must lie in [0, pi/2]");
    }
    if (inclination == kPi / 4.0 && b_star >= kPi / 2.0) {
        throw PreconditionError(std::string(who) +
                                ": integrand is singular at pi/2 when A = pi/4");
    }
}

}  // namespace detail

/// Adaptive tanh-sinh integral of 1/projected_speed_lower
/// over [0, b_star], i.e. the worst-case step count in units of 1/v_G.
inline double inverse_speed_integral(double b_star, double inclination) {
    detail::check_meridian_args(b_star, inclination, "inverse_speed_integral");
    if (b_star == 0.0) {
        return 0.0;
    }
    auto integrand = [inclination](double b) {
        return 1.0 / projected_speed_lower(b, inclination);
    };
    // Double-exponential nodes cluster at the endpoints, where the integrand
    // peaks as A approaches pi/4 and b_star approaches pi/2.
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    double error = 0.0;
    const double value = integrator.integrate(integrand, 0.0, b_star, 1e-13, &error);
    if (!std::isfinite(value) || error > kQuadratureAbsTol) {
        throw QuadratureError("inverse_speed_integral: no convergence (error estimate " +
                              std::to_string(error) + ")");
    }
    return value;
}

/// Upper bound on the steps any branch needs to reach meridian b_star.
inline double steps_upper_bound(double b_star, double inclination, const SearchSpace& space) {
    return inverse_speed_integral(b_star, inclination) / grover_angle(space);
}

/// Upper bound on how far the fastest branch can be past b_star when the
/// slowest branch reaches it.
inline double meridian_gap(double b_star, double inclination) {
    return std::max(0.0, inverse_speed_integral(b_star, inclination) - b_star);
}

/// Largest inclination in [lo, hi] with meridian_gap(b_star, A) <= gap,
/// assuming the gap grows with A.
inline double inclination_threshold(double b_star, double gap, double lo = 0.0,
                                    double hi = kPi / 4.0, double tol = 1e-14) {
    if (meridian_gap(b_star, hi) <= gap) {
        return hi;
    }
    if (meridian_gap(b_star, lo) > gap) {
        throw PreconditionError("inclination_threshold: gap already exceeded at lower end");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (meridian_gap(b_star, mid) <= gap ? lo : hi) = mid;
    }
    return lo;
}

struct SearchBoundConstants {
    // (i) worst gap at b* = 3pi/8 over the inclination grid [0, 0.1953 pi].
    double wide_b_star = 3.0 * kPi / 8.0;
    double wide_grid_upper = 0.1953 * kPi;
    double wide_grid_step = 1e-3 * kPi;
    double wide_sup_gap = 0.0;
    double wide_sup_gap_at = 0.0;
    bool wide_gap_ok = false;  // wide_sup_gap <= pi/4
    // (ii) single non-faulty marked item: A = pi/4, b* = 0.33 pi.
    double narrow_b_star = 0.33 * kPi;
    double narrow_gap = 0.0;
    double narrow_gap_bound = 0.34 * kPi;
    bool narrow_gap_ok = false;  // narrow_gap <= 0.34 pi
    // (iii) largest A with gap(3pi/8, A) <= pi/4.
    double inclination_threshold = 0.0;
    // (iv) success floors.
    double floor_k3 = 0.0;  // cos^2(pi/8)
    double floor_k2 = 0.0;  // cos^2(0.17 pi)
};

inline SearchBoundConstants search_bound_constants() {
    SearchBoundConstants r;
    for (std::uint64_t i = 0;; ++i) {
        double A = static_cast<double>(i) * r.wide_grid_step;
        const bool last = A >= r.wide_grid_upper;
        if (last) {
            A = r.wide_grid_upper;
        }
        const double g = meridian_gap(r.wide_b_star, A);
        if (g >= r.wide_sup_gap) {
            r.wide_sup_gap = g;
            r.wide_sup_gap_at = A;
        }
        if (last) {
            break;
        }
    }
    r.wide_gap_ok = r.wide_sup_gap <= kPi / 4.0;
    r.narrow_gap = meridian_gap(r.narrow_b_star, kPi / 4.0);
    r.narrow_gap_ok = r.narrow_gap <= r.narrow_gap_bound;
    r.inclination_threshold = inclination_threshold(r.wide_b_star, kPi / 4.0);
    const double c1 = std::cos(kPi / 8.0);
    const double c2 = std::cos(0.17 * kPi);
    r.floor_k3 = c1 * c1;
    r.floor_k2 = c2 * c2;
    return r;
}

// ---------------------------------------------------------------------------
// Coordinates on the sphere
// ---------------------------------------------------------------------------

/// a: latitude above the equator z = 0; b: longitude from (1,0,0) toward
/// (0,1,0); c: great-circle distance from (1,0,0); A: route inclination.
struct GeodesicCoords {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double A = 0.0;
    double r1_residual = 0.0;  // |cos c - cos a cos b|
};

inline GeodesicCoords state_to_geodesic(const SpherePoint& p, const SearchSpace& space) {
    if (space.k < 2) {
        throw DegenerateInstance("state_to_geodesic: needs k >= 2");
    }
    GeodesicCoords g;
    g.a = std::asin(std::clamp(p.z, -1.0, 1.0));
    g.b = std::atan2(p.y, p.x);
    g.c = std::acos(std::clamp(p.x, -1.0, 1.0));
    g.A = space.inclination();
    g.r1_residual = std::abs(std::cos(g.c) - std::cos(g.a) * std::cos(g.b));
    return g;
}

/// Angle travelled along the fault-free route: the rotation angle about the
/// route's axis, measured from (1,0,0) toward (0, cos A, sin A). Fault-free
/// steps advance it by exactly grover_angle.
inline double route_phase(const SpherePoint& p, double inclination) {
    const double along = p.y * std::cos(inclination) + p.z * std::sin(inclination);
    return std::atan2(along, p.x);
}

}  // namespace faultgrover
