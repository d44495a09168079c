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
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "faultgrover/density.hpp"
#include "faultgrover/ensemble.hpp"
#include "faultgrover/geometry.hpp"
#include "faultgrover/oracle.hpp"
#include "faultgrover/reduced_state.hpp"
#include "faultgrover/search_space.hpp"
#include "faultgrover/table.hpp"

namespace faultgrover {

/// Invalid experiment configuration (bad grids, missing seed, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::string experiment;
    std::vector<std::uint64_t> ns;
    std::vector<std::uint64_t> ks;
    std::vector<double> ps;
    std::optional<std::uint64_t> t_max;
    std::optional<std::uint64_t> seed;
    std::string out;  // empty: standard output
    OutputFormat format = OutputFormat::Csv;
    bool oracle_check = false;
    std::optional<double> merge_tol;
    std::uint64_t samples = 100'000;
    std::uint64_t max_branches = 1u << 20;
    bool strict = false;
    bool window = false;
};

struct ExperimentResult {
    Table table;
    bool assertions_ok = true;    // every asserted row held
    bool budget_exceeded = false; // a run hit its step budget or branch cap
};

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kOracleCheckTolerance = 1e-10;
inline constexpr std::uint64_t kOracleCheckMaxN = 32;
inline constexpr double kSuccessFloorSlack = 0.01;
inline constexpr double kMonteCarloSigmas = 4.0;
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Grid parsing
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw ConfigError("not a number: '" + s + "'");
    }
    return v;
}

inline std::uint64_t parse_count(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("not a non-negative integer: '" + s + "'");
    }
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ConfigError("integer out of range: '" + s + "'");
    }
}

}  // namespace detail

/// "0.1,0.5" or "lo:hi:step" (inclusive of hi up to rounding), or a mix of
/// comma-separated items of either kind.
inline std::vector<double> parse_real_grid(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : detail::split(text, ',')) {
        const auto parts = detail::split(item, ':');
        if (parts.size() == 1) {
            out.push_back(detail::parse_real(parts[0]));
        } else if (parts.size() == 3) {
            const double lo = detail::parse_real(parts[0]);
            const double hi = detail::parse_real(parts[1]);
            const double st = detail::parse_real(parts[2]);
            if (!(st > 0.0) || hi < lo) {
                throw ConfigError("bad range '" + item + "': need lo <= hi and step > 0");
            }
            const auto count = static_cast<std::uint64_t>(std::floor((hi - lo) / st + 1e-9));
            for (std::uint64_t i = 0; i <= count; ++i) {
                out.push_back(lo + static_cast<double>(i) * st);
            }
        } else {
            throw ConfigError("bad grid item '" + item + "'");
        }
    }
    return out;
}

inline std::vector<std::uint64_t> parse_count_grid(const std::string& text) {
    std::vector<std::uint64_t> out;
    for (const auto& item : detail::split(text, ',')) {
        const auto parts = detail::split(item, ':');
        if (parts.size() == 1) {
            out.push_back(detail::parse_count(parts[0]));
        } else if (parts.size() == 3) {
            const auto lo = detail::parse_count(parts[0]);
            const auto hi = detail::parse_count(parts[1]);
            const auto st = detail::parse_count(parts[2]);
            if (st == 0 || hi < lo) {
                throw ConfigError("bad range '" + item + "': need lo <= hi and step > 0");
            }
            for (auto v = lo; v <= hi; v += st) {
                out.push_back(v);
            }
        } else {
            throw ConfigError("bad grid item '" + item + "'");
        }
    }
    return out;
}

/// Cartesian product of the grids in (n, k, p) order, validated.
inline std::vector<SearchSpace> instances(const ExperimentConfig& cfg) {
    if (cfg.ns.empty() || cfg.ks.empty() || cfg.ps.empty()) {
        throw ConfigError("n, k and p grids must be non-empty");
    }
    std::vector<SearchSpace> out;
    for (auto n : cfg.ns) {
        for (auto k : cfg.ks) {
            for (double p : cfg.ps) {
                if (!(n > k && k >= 1)) {
                    throw ConfigError("need n > k >= 1, got n=" + std::to_string(n) +
                                      " k=" + std::to_string(k));
                }
                if (!(p >= 0.0 && p <= 1.0)) {
                    throw ConfigError("fault probability must lie in [0, 1], got " +
                                      format_real(p));
                }
                out.emplace_back(n, k, p);
            }
        }
    }
    return out;
}

namespace detail {

inline std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

inline double distance_or_nan(const SymmetricDensity& rho, const SearchSpace& space) {
    return space.k >= 2 && space.n > space.k ? trace_distance_to_limit(rho, space) : kNaN;
}

/// Runs the full-matrix oracle next to the reduced evolution.
class OracleShadow {
  public:
    OracleShadow(const SearchSpace& space, bool enabled)
        : space_(space), active_(enabled && space.n <= kOracleCheckMaxN) {
        if (active_) {
            full_ = oracle::full_uniform(space);
        }
    }
    bool active() const { return active_; }
    void advance() {
        if (active_) {
            full_ = oracle::full_step(full_, space_);
        }
    }
    double deviation(const SymmetricDensity& rho) const {
        if (!active_) {
            return kNaN;
        }
        return (full_.matrix - oracle::expand_symmetric(rho, space_).matrix).cwiseAbs().maxCoeff();
    }

  private:
    SearchSpace space_;
    bool active_;
    oracle::FullDensity full_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

/// Class probabilities of the density evolution for t = 0..t_max.
inline ExperimentResult run_probability_curve(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.table.columns = {"n", "k", "p", "t", "p_unmarked", "p_nonfaulty_marked", "p_faulty",
                         "p_marked", "trace_distance_to_limit"};
    if (cfg.oracle_check) {
        res.table.columns.push_back("oracle_max_deviation");
    }
    for (const auto& space : instances(cfg)) {
        const std::uint64_t t_max = cfg.t_max.value_or(4 * scaled_grover_steps(space, 1.0));
        SymmetricDensity rho = init_uniform_density(space);
        detail::OracleShadow shadow(space, cfg.oracle_check);
        for (std::uint64_t t = 0; t <= t_max; ++t) {
            const auto pr = success_probs(rho, space);
            if (std::abs(pr.total() - 1.0) > kRowSumTolerance) {
                res.assertions_ok = false;
            }
            std::vector<Cell> row{detail::as_int(space.n), detail::as_int(space.k),
                                  space.fault_prob, detail::as_int(t), pr.unmarked,
                                  pr.nonfaulty_marked, pr.faulty, pr.marked(),
                                  detail::distance_or_nan(rho, space)};
            if (cfg.oracle_check) {
                const double dev = shadow.deviation(rho);
                if (dev > kOracleCheckTolerance) {
                    res.assertions_ok = false;
                }
                row.emplace_back(dev);
            }
            res.table.add_row(std::move(row));
            if (t < t_max) {
                rho = step_density(rho, space);
                shadow.advance();
            }
        }
    }
    return res;
}

/// Success probability after the extended run lengths used for the
/// O(sqrt(n/k)) search guarantee.
inline ExperimentResult run_success_floor(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.table.columns = {"n",     "k",        "p",     "rule",  "factor", "t",
                         "p_marked", "floor", "slack", "claim", "asserted", "pass"};
    if (cfg.oracle_check) {
        res.table.columns.push_back("oracle_max_deviation");
    }
    const double c1 = std::cos(kPi / 8.0);
    const double c2 = std::cos(0.17 * kPi);
    const double floor_main = c1 * c1;
    const double floor_k2 = c2 * c2;

    for (const auto& space : instances(cfg)) {
        if (space.k < 2) {
            throw ConfigError("theorem1 needs k >= 2");
        }
        struct Rule {
            std::string name;
            double factor;
            std::uint64_t t;
            double floor;
            std::string claim;
            bool asserted;
        };
        std::vector<Rule> rules;
        const bool faulty = space.fault_prob > 0.0;
        const auto t125 = scaled_grover_steps(space, 1.25);
        if (space.k >= 3) {
            rules.push_back({"1.25x", 1.25, t125, floor_main, faulty ? "k>=3 bound" : "fault-free",
                             faulty});
        } else {
            rules.push_back({"1.25x", 1.25, t125, floor_main,
                             faulty ? "k=2 conjecture" : "fault-free", false});
            rules.push_back({"1.34x", 1.34, scaled_grover_steps(space, 1.34), floor_k2,
                             faulty ? "k=2 general bound" : "fault-free", faulty});
        }
        if (cfg.window) {
            const auto tg = scaled_grover_steps(space, 1.0);
            for (auto t = tg; t <= t125; ++t) {
                rules.push_back({"window", static_cast<double>(t) / static_cast<double>(tg), t,
                                 kNaN, "inspection", false});
            }
        }
        std::uint64_t t_needed = 0;
        for (const auto& r : rules) {
            t_needed = std::max(t_needed, r.t);
        }
        std::vector<SymmetricDensity> trajectory;
        std::vector<double> deviations;
        trajectory.reserve(t_needed + 1);
        SymmetricDensity rho = init_uniform_density(space);
        detail::OracleShadow shadow(space, cfg.oracle_check);
        for (std::uint64_t t = 0; t <= t_needed; ++t) {
            trajectory.push_back(rho);
            deviations.push_back(shadow.deviation(rho));
            rho = step_density(rho, space);
            shadow.advance();
        }
        for (const auto& r : rules) {
            const double pm = success_probs(trajectory[r.t], space).marked();
            const bool pass = std::isnan(r.floor) ? true : pm >= r.floor - kSuccessFloorSlack;
            if (r.asserted && !pass) {
                res.assertions_ok = false;
            }
            std::vector<Cell> row{detail::as_int(space.n), detail::as_int(space.k),
                                  space.fault_prob, r.name, r.factor, detail::as_int(r.t), pm,
                                  r.floor, kSuccessFloorSlack, r.claim, r.asserted, pass};
            if (cfg.oracle_check) {
                const double dev = deviations[r.t];
                if (dev > kOracleCheckTolerance) {
                    res.assertions_ok = false;
                }
                row.emplace_back(dev);
            }
            res.table.add_row(std::move(row));
        }
    }
    return res;
}

/// Step budget for convergence to the limiting state.
inline std::uint64_t limit_step_budget(const SearchSpace& space) {
    const double m = std::min(space.fault_prob, 1.0 - space.fault_prob);
    return static_cast<std::uint64_t>(std::ceil(100.0 * space.items() / m));
}

struct LimitRun {
    std::array<std::int64_t, 3> first_below{-1, -1, -1};  // thresholds 1e-1, 1e-2, 1e-3
    bool converged = false;
    std::uint64_t t_final = 0;
    double distance = 0.0;
    SymmetricDensity rho;
    double max_oracle_deviation = kNaN;
};

inline constexpr std::array<double, 3> kLimitThresholds{1e-1, 1e-2, 1e-3};

/// Evolves until the trace distance to the limit drops below 1e-3 or the
/// budget is spent.
inline LimitRun converge_to_limit(const SearchSpace& space, std::uint64_t budget,
                                  bool oracle_check = false) {
    LimitRun run;
    SymmetricDensity rho = init_uniform_density(space);
    detail::OracleShadow shadow(space, oracle_check);
    double worst_dev = shadow.active() ? 0.0 : kNaN;
    for (std::uint64_t t = 0;; ++t) {
        const double dist = trace_distance_to_limit(rho, space);
        if (shadow.active()) {
            worst_dev = std::max(worst_dev, shadow.deviation(rho));
        }
        for (std::size_t i = 0; i < kLimitThresholds.size(); ++i) {
            if (run.first_below[i] < 0 && dist < kLimitThresholds[i]) {
                run.first_below[i] = static_cast<std::int64_t>(t);
            }
        }
        if (dist < kLimitThresholds.back() || t == budget) {
            run.converged = dist < kLimitThresholds.back();
            run.t_final = t;
            run.distance = dist;
            run.rho = rho;
            break;
        }
        rho = step_density(rho, space);
        shadow.advance();
    }
    run.max_oracle_deviation = worst_dev;
    return run;
}

inline ExperimentResult run_limit(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.table.columns = {"n",       "k",       "p",          "budget",       "t_below_1e-1",
                         "t_below_1e-2", "t_below_1e-3", "converged", "t_final",
                         "trace_distance", "a",  "a_prime",    "b",            "c",
                         "d_prime", "d",       "w_nonfaulty", "w_faulty",     "w_unmarked"};
    if (cfg.oracle_check) {
        res.table.columns.push_back("oracle_max_deviation");
    }
    for (const auto& space : instances(cfg)) {
        if (space.k < 2) {
            throw ConfigError("limit needs k >= 2");
        }
        if (!(space.fault_prob > 0.0 && space.fault_prob < 1.0)) {
            throw ConfigError("limit needs 0 < p < 1: the dynamics is unitary at p = 0 and "
                              "undamped at p = 1");
        }
        const auto budget = limit_step_budget(space);
        const auto run = converge_to_limit(space, budget, cfg.oracle_check);
        if (!run.converged) {
            res.budget_exceeded = true;
        }
        const auto pr = success_probs(run.rho, space);
        std::vector<Cell> row{detail::as_int(space.n), detail::as_int(space.k), space.fault_prob,
                              detail::as_int(budget), run.first_below[0], run.first_below[1],
                              run.first_below[2], run.converged, detail::as_int(run.t_final),
                              run.distance, run.rho.a, run.rho.a_prime, run.rho.b, run.rho.c,
                              run.rho.d_prime, run.rho.d, pr.nonfaulty_marked, pr.faulty,
                              pr.unmarked};
        if (cfg.oracle_check) {
            if (run.max_oracle_deviation > kOracleCheckTolerance) {
                res.assertions_ok = false;
            }
            row.emplace_back(run.max_oracle_deviation);
        }
        res.table.add_row(std::move(row));
    }
    return res;
}

/// Geometry bounds behind the search guarantee, one quantity per row.
inline ExperimentResult run_bounds(const ExperimentConfig&) {
    ExperimentResult res;
    res.table.columns = {"quantity", "b_star", "latitude", "A", "value", "bound", "pass"};
    auto add = [&](const std::string& q, double b_star, double lat, double A, double value,
                   double bound, bool pass) {
        if (!pass) {
            res.assertions_ok = false;
        }
        res.table.add_row({q, b_star, lat, A, value, bound, pass});
    };
    const auto consts = search_bound_constants();
    for (std::uint64_t i = 0;; ++i) {
        double A = static_cast<double>(i) * consts.wide_grid_step;
        const bool last = A >= consts.wide_grid_upper;
        if (last) {
            A = consts.wide_grid_upper;
        }
        const double g = meridian_gap(consts.wide_b_star, A);
        add("meridian_gap", consts.wide_b_star, kNaN, A, g, kPi / 4.0, g <= kPi / 4.0);
        if (last) {
            break;
        }
    }
    add("meridian_gap_sup", consts.wide_b_star, kNaN, consts.wide_sup_gap_at, consts.wide_sup_gap,
        kPi / 4.0, consts.wide_gap_ok);
    add("meridian_gap_single_nonfaulty", consts.narrow_b_star, kNaN, kPi / 4.0, consts.narrow_gap,
        consts.narrow_gap_bound, consts.narrow_gap_ok);
    const double thr = consts.inclination_threshold;
    add("inclination_threshold", consts.wide_b_star, kNaN, thr, thr / kPi, 0.1953,
        thr >= 0.1950 * kPi && thr <= 0.1956 * kPi);
    const double c_err = fault_displacement(kPi / 6.0, kPi / 4.0);
    add("fault_displacement", kNaN, kPi / 6.0, kPi / 4.0, c_err, kPi / 4.0,
        std::abs(c_err - kPi / 4.0) <= 1e-12);
    for (std::uint64_t k = 2; k <= 10; ++k) {
        const double A = SearchSpace(k + 1, k).inclination();
        const auto rep = check_fault_setback(A, 1e-3);
        add("fault_setback_worst_c_err", kNaN, rep.worst_c_err_latitude, A, rep.worst_c_err,
            kPi / 4.0, rep.passed);
    }
    add("success_floor_k3", kNaN, kNaN, kNaN, consts.floor_k3, kNaN, true);
    add("success_floor_k2", kNaN, kNaN, kNaN, consts.floor_k2, kNaN, true);
    return res;
}

/// Sampled trajectories against the exact density values.
inline ExperimentResult run_montecarlo(const ExperimentConfig& cfg) {
    if (!cfg.seed) {
        throw ConfigError("montecarlo needs --seed");
    }
    if (cfg.samples < 2) {
        throw ConfigError("montecarlo needs at least two samples");
    }
    ExperimentResult res;
    res.table.columns = {"n",        "k",           "p",           "t",
                         "samples",  "seed",        "mc_unmarked", "se_unmarked",
                         "mc_nonfaulty_marked", "se_nonfaulty_marked", "mc_faulty", "se_faulty",
                         "exact_unmarked", "exact_nonfaulty_marked", "exact_faulty", "max_z"};
    if (cfg.merge_tol) {
        res.table.columns.push_back("branches");
        res.table.columns.push_back("mixture_max_deviation");
    }
    for (const auto& space : instances(cfg)) {
        const std::uint64_t t = cfg.t_max.value_or(scaled_grover_steps(space, 1.0));
        const auto est = estimate_class_probs(space, t, cfg.samples, *cfg.seed);
        const auto rho = evolve_density(init_uniform_density(space), space, t);
        const auto exact = success_probs(rho, space);
        const std::array<double, 3> mc{est.mean.unmarked, est.mean.nonfaulty_marked,
                                       est.mean.faulty};
        const std::array<double, 3> se{est.standard_error.unmarked,
                                       est.standard_error.nonfaulty_marked,
                                       est.standard_error.faulty};
        const std::array<double, 3> ex{exact.unmarked, exact.nonfaulty_marked, exact.faulty};
        double max_z = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            const double diff = std::abs(mc[j] - ex[j]);
            // Zero spread: require agreement to rounding.
            const double z = se[j] > 0.0 ? diff / se[j] : (diff <= 1e-12 ? 0.0 : kNaN);
            max_z = std::isnan(z) || std::isnan(max_z) ? kNaN : std::max(max_z, z);
        }
        if (!(max_z <= kMonteCarloSigmas)) {
            res.assertions_ok = false;
        }
        std::vector<Cell> row{detail::as_int(space.n), detail::as_int(space.k), space.fault_prob,
                              detail::as_int(t), detail::as_int(cfg.samples),
                              detail::as_int(*cfg.seed), mc[0], se[0], mc[1], se[1], mc[2],
                              se[2], ex[0], ex[1], ex[2], max_z};
        if (cfg.merge_tol) {
            try {
                const auto mix = evolve_exact(space, t, *cfg.merge_tol, cfg.max_branches);
                const auto mrho = mixture_to_density(mix, space);
                row.emplace_back(detail::as_int(mix.branches.size()));
                row.emplace_back(mrho.max_abs_difference(rho));
            } catch (const BranchExplosion&) {
                res.budget_exceeded = true;
                row.emplace_back(std::int64_t{-1});
                row.emplace_back(kNaN);
            }
        }
        res.table.add_row(std::move(row));
    }
    return res;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "simulate") return run_probability_curve(cfg);
    if (cfg.experiment == "theorem1") return run_success_floor(cfg);
    if (cfg.experiment == "limit") return run_limit(cfg);
    if (cfg.experiment == "bounds") return run_bounds(cfg);
    if (cfg.experiment == "montecarlo") return run_montecarlo(cfg);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace faultgrover
