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

// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "faultgrover/faultgrover.hpp"

using namespace faultgrover;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<SearchSpace> grid(std::vector<std::uint64_t> ns, std::vector<std::uint64_t> ks,
                              std::vector<double> ps) {
    std::vector<SearchSpace> out;
    for (auto n : ns)
        for (auto k : ks)
            for (auto p : ps) out.emplace_back(n, k, p);
    return out;
}

// 1. Reduced density evolution against the full n x n channel.
Outcome oracle_equivalence() {
    constexpr double tol = 1e-10;
    double worst = 0.0;
    for (const auto& sp : grid({8, 16, 32}, {2, 3, 5}, {0.0, 0.3, 0.7, 1.0})) {
        auto rho = init_uniform_density(sp);
        auto full = oracle::full_uniform(sp);
        for (int t = 0; t <= 50; ++t) {
            const double dev =
                (oracle::expand_symmetric(rho, sp).matrix - full.matrix).cwiseAbs().maxCoeff();
            worst = std::max(worst, dev);
            rho = step_density(rho, sp);
            full = oracle::full_step(full, sp);
        }
    }
    return {worst <= tol, fmt("max entry deviation %.3g over 36 instances x 51 steps (tol %g)",
                              worst, tol)};
}

// 2. Exact branch enumeration reproduces the density.
Outcome mixture_identity() {
    constexpr double tol = 1e-12;
    double worst = 0.0;
    for (const auto& sp : grid({8, 16, 32}, {2, 3, 5}, {0.0, 0.3, 0.7, 1.0})) {
        auto rho = init_uniform_density(sp);
        for (std::uint64_t t = 0; t <= 12; ++t) {
            const auto mix = evolve_exact(sp, t, 0.0, std::size_t{1} << 13);
            worst = std::max(worst, mixture_to_density(mix, sp).max_abs_difference(rho));
            rho = step_density(rho, sp);
        }
    }
    return {worst <= tol, fmt("max parameter deviation %.3g for t <= 12 (tol %g)", worst, tol)};
}

// 3. Success probability after the extended run lengths.
Outcome search_guarantee() {
    const double c = std::cos(pi / 8);
    const double floor_main = c * c - 0.01;
    const double floor_k2 = 0.74 - 0.01;
    const std::vector<double> ps{0.1, 0.3, 0.5, 0.7, 0.9};
    bool ok = true;
    double worst_main = 1.0, worst_k2 = 1.0;
    for (const auto& sp : grid({4096}, {2, 3, 4, 8}, ps)) {
        const bool pair = sp.k == 2;
        const auto t = scaled_grover_steps(sp, pair ? 1.34 : 1.25);
        const double pm = success_probs(evolve_density(init_uniform_density(sp), sp, t), sp).marked();
        double& worst = pair ? worst_k2 : worst_main;
        worst = std::min(worst, pm);
        ok = ok && pm >= (pair ? floor_k2 : floor_main);
    }
    return {ok, fmt("min p_marked %.6f (floor %.6f) for k in {3,4,8}; %.6f (floor %.2f) for k=2",
                    worst_main, floor_main, worst_k2, floor_k2)};
}

// 4. Convergence to the limiting mixed state.
Outcome convergence_to_limit() {
    constexpr double weight_tol = 1e-3;
    constexpr double mass_tol = 2e-3;
    bool ok = true;
    double worst_weight = 0.0, worst_mass = 0.0, worst_ratio = 0.0;
    const std::vector<std::uint64_t> ns{32, 64, 128};
    for (double p : {0.25, 0.5, 0.75}) {
        std::vector<double> crossing;
        for (auto n : ns) {
            const SearchSpace sp(n, 3, p);
            const auto run = converge_to_limit(sp, limit_step_budget(sp));
            ok = ok && run.converged;
            const auto pr = success_probs(run.rho, sp);
            for (double w : {pr.nonfaulty_marked, pr.faulty, pr.unmarked}) {
                worst_weight = std::max(worst_weight, std::abs(w - 1.0 / 3));
            }
            worst_mass = std::max(worst_mass, std::abs(pr.marked() - 2.0 / 3));
            crossing.push_back(static_cast<double>(run.t_final));
        }
        for (std::size_t i = 1; i < ns.size(); ++i) {
            const double growth = crossing[i] / crossing[i - 1];
            const double linear = static_cast<double>(ns[i]) / static_cast<double>(ns[i - 1]);
            worst_ratio = std::max(worst_ratio, growth / linear);
        }
    }
    ok = ok && worst_weight <= weight_tol && worst_mass <= mass_tol && worst_ratio <= 2.0;
    return {ok, fmt("class weights within %.3g of 1/3 (tol %g), marked mass within %.3g of 2/3 "
                    "(tol %g), crossing growth / linear growth <= %.3f (tol 2)",
                    worst_weight, weight_tol, worst_mass, mass_tol, worst_ratio)};
}

double simpson_inverse_speed(double b_star, double A, int panels) {
    const double h = b_star / panels;
    auto f = [A](double b) { return 1.0 / projected_speed_lower(b, A); };
    double acc = f(0.0) + f(b_star);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
    return acc * h / 3.0;
}

// 5. Spherical constants.
Outcome geometry_constants() {
    bool ok = true;
    std::string d;
    const double c_err = fault_displacement(pi / 6, pi / 4);
    const bool c_ok = std::abs(c_err - pi / 4) <= 1e-12;
    d += fmt("c_err - pi/4 = %.3g (tol 1e-12) %s", c_err - pi / 4, c_ok ? "ok" : "FAIL");

    double sup = 0.0;
    for (int i = 0;; ++i) {
        const double A = std::min(i * 1e-3 * pi, 0.1953 * pi);
        sup = std::max(sup, meridian_gap(3 * pi / 8, A));
        if (A >= 0.1953 * pi) break;
    }
    const bool sup_ok = sup <= pi / 4;
    d += fmt("; sup gap(3pi/8, A) = %.10f pi (bound 0.25 pi) %s", sup / pi, sup_ok ? "ok" : "FAIL");

    const double thr = search_bound_constants().inclination_threshold;
    const bool thr_ok = thr >= 0.1950 * pi && thr <= 0.1956 * pi;
    d += fmt("; A* = %.8f pi (range [0.1950, 0.1956] pi) %s", thr / pi, thr_ok ? "ok" : "FAIL");

    const double narrow = meridian_gap(0.33 * pi, pi / 4);
    const bool narrow_ok = narrow <= 0.34 * pi;
    d += fmt("; gap(0.33pi, pi/4) = %.10f pi (bound 0.34 pi) %s", narrow / pi,
             narrow_ok ? "ok" : "FAIL");

    double quad = 0.0;
    for (auto [b, A] : std::vector<std::pair<double, double>>{
             {3 * pi / 8, 0.1953 * pi}, {3 * pi / 8, 0.1 * pi}, {0.33 * pi, pi / 4}, {1.2, 0.0}}) {
        quad = std::max(quad, std::abs(inverse_speed_integral(b, A) -
                                       simpson_inverse_speed(b, A, 1'000'000)));
    }
    const bool quad_ok = quad <= 1e-8;
    d += fmt("; adaptive vs Simpson %.3g (tol 1e-8) %s", quad, quad_ok ? "ok" : "FAIL");
    ok = c_ok && sup_ok && thr_ok && narrow_ok && quad_ok;
    return {ok, d};
}

// 6. Napier's rules on random right triangles.
Outcome napier_rules() {
    constexpr double tol = 1e-12;
    std::mt19937_64 rng(20260);
    std::uniform_real_distribution<double> ang(1e-3, pi / 2 - 1e-3);
    double worst = 0.0, raw = 0.0;
    for (int i = 0; i < 10'000; ++i) {
        const auto t = solve_right_triangle(ang(rng), ang(rng));
        for (auto r : kAllNapierRules) {
            worst = std::max(worst, napier_residual(r, t));
            raw = std::max(raw, napier_raw_residual(r, t) / std::max(1.0, std::abs(napier(r, t))));
        }
    }
    return {worst <= tol,
            fmt("max residual %.3g over 10^4 triangles x R1..R10, tangents multiplied out "
                "(tol %g); raw relative residual %.3g (not asserted)",
                worst, tol, raw)};
}

// 7. Fault-free Grover baseline.
Outcome clean_baseline() {
    constexpr double tol = 1e-9;
    bool ok = true;
    double worst = 0.0, peak = 1.0;
    for (double p : {0.0, 0.5, 1.0}) {
        const SearchSpace sp(1'000'000, 1, p);
        const auto t_peak = static_cast<std::uint64_t>(std::llround(pi / 4 * 1000.0));
        auto s = init_uniform(sp);
        const double half = std::asin(std::sqrt(1e-6));
        for (std::uint64_t t = 0; t <= 2000; ++t) {
            const double pm = measure_probs(s, sp).marked();
            const double ref = std::pow(std::sin((2.0 * t + 1.0) * half), 2);
            worst = std::max(worst, std::abs(pm - ref));
            if (t == t_peak) peak = std::min(peak, pm);
            s = step(s, sp, false);
        }
    }
    ok = worst <= tol && peak >= 0.999;
    return {ok, fmt("p_marked at t=785 is %.9f (floor 0.999); closed-form deviation %.3g (tol %g)",
                    peak, worst, tol)};
}

double stdev(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

// 8. Oscillations die off.
Outcome oscillation_die_off() {
    const SearchSpace sp(512, 3, 0.5);
    const std::uint64_t late = 10 * sp.n;
    std::vector<double> early_w, late_w;
    auto rho = init_uniform_density(sp);
    for (std::uint64_t t = 0; t <= late + 200; ++t) {
        const double pm = success_probs(rho, sp).marked();
        if (t <= 200) early_w.push_back(pm);
        if (t >= late) late_w.push_back(pm);
        rho = step_density(rho, sp);
    }
    const double e = stdev(early_w), l = stdev(late_w);
    return {l < e / 10, fmt("std over [0,200] = %.6g, over [10n,10n+200] = %.6g (ratio %.3g, tol 0.1)",
                            e, l, l / e)};
}

// 9. Sampled trajectories against exact probabilities.
Outcome monte_carlo() {
    ExperimentConfig cfg;
    cfg.experiment = "montecarlo";
    cfg.ns = {256};
    cfg.ks = {3};
    cfg.ps = {0.5};
    cfg.t_max = 40;
    cfg.samples = 100'000;
    cfg.seed = 2026;
    const auto a = run_montecarlo(cfg);
    const auto b = run_montecarlo(cfg);
    const double z = a.table.number(0, "max_z");
    const bool same = render_table(a.table, OutputFormat::Csv) ==
                          render_table(b.table, OutputFormat::Csv) &&
                      render_table(a.table, OutputFormat::Json) ==
                          render_table(b.table, OutputFormat::Json);
    return {z <= kMonteCarloSigmas && same,
            fmt("max |mc - exact| / se = %.3f (tol %.0f); repeated run byte-identical: %s", z,
                kMonteCarloSigmas, same ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"mixture identity", mixture_identity},
        {"search guarantee at 1.25x / 1.34x", search_guarantee},
        {"convergence to the limiting state", convergence_to_limit},
        {"geometry constants", geometry_constants},
        {"Napier rules", napier_rules},
        {"fault-free baseline", clean_baseline},
        {"oscillation die-off", oscillation_die_off},
        {"Monte Carlo consistency", monte_carlo},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
