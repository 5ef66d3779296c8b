#pragma once

#include <cmath>
#include <thread>
#include <utility>
#include <vector>

#include "dvm/instance.hpp"

namespace dvm {

// Extreme values of |AC| and |CB| compatible with f(AC) = 1-lambda and
// f(CB) = lambda: the set sizes when one side wins every deliberation
// (minima) or none (maxima). The branch point in w is tau(lambda).
struct RangeQuantities {
    Q3 ac_min, ac_max, cb_min, cb_max, tau, eta;
};

inline void require_bounds_domain(const Q3& lambda, const Q3& w) {
    if (!(lambda > Q3(Rat(1, 2)) && lambda < Q3(1)))
        throw DomainError("lambda must lie strictly inside (1/2, 1)");
    if (w.sign() <= 0) throw DomainError("w must be positive");
}

inline RangeQuantities permissible_ranges(const Q3& lambda, const Q3& w) {
    require_bounds_domain(lambda, w);
    const Q3 one(1);
    Q3 lm1 = one - lambda;
    RangeQuantities r;
    r.tau = (Q3(2) * lambda - one) / lm1;
    r.ac_min = lm1 / (one + lambda * w);
    r.cb_max = lambda * (one + w) / (one + lambda * w);
    Q3 cb_low = (lambda - lm1 * w) / (one - lm1 * w);
    Q3 ac_high_low = lm1 / (one - lm1 * w);
    Q3 cb_high = lambda / (one + lm1 * w);
    Q3 ac_high_high = lm1 * (one + w) / (one + lm1 * w);
    int side = (w - r.tau).sign();
    if (side == 0) {
        // Both branches must agree exactly at the breakpoint.
        if (cb_low != cb_high || ac_high_low != ac_high_high)
            throw DomainError("branch mismatch at w = tau(lambda)");
    }
    r.cb_min = side <= 0 ? cb_low : cb_high;
    r.ac_max = side <= 0 ? ac_high_low : ac_high_high;
    r.eta = one - r.cb_min - r.ac_min;
    return r;
}

// Collinear family A-B-C at 0, 1, 2: mass AC_max at B (its (A,C) tie is
// arbitrated toward A), mass CB_min at C; every (C,B) deliberation is a tie
// arbitrated toward C.
inline std::pair<MetricInstance, TieDirectives> instance_collinear(const Q3& lambda, const Q3& w) {
    RangeQuantities r = permissible_ranges(lambda, w);
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::Line, {"A", "B", "C"}, {{Q3(0)}, {Q3(1)}, {Q3(2)}}, {"v_B", "v_C"},
        {r.ac_max, r.cb_min}, {{Q3(1)}, {Q3(2)}});
    TieDirectives ties;
    ties.pref[{0, 0, 2}] = 0;
    ties.delib[{1, 2}] = 2;
    return {std::move(inst), ties};
}

// Co-located family A at 0, B = C at 1: mass AC_min at A, the remainder at
// B. Individual (B,C) ties split so |CB| = CB_max; (A,C) deliberation ties
// go to A, (C,B) deliberation ties to B.
inline std::pair<MetricInstance, TieDirectives> instance_colocated(const Q3& lambda, const Q3& w) {
    RangeQuantities r = permissible_ranges(lambda, w);
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::Line, {"A", "B", "C"}, {{Q3(0)}, {Q3(1)}, {Q3(1)}}, {"v_A", "v_BC"},
        {r.ac_min, Q3(1) - r.ac_min}, {{Q3(0)}, {Q3(1)}});
    TieDirectives ties;
    ties.pref[{0, 1, 2}] = 1;
    ties.pref[{1, 1, 2}] = 2;
    ties.delib[{0, 2}] = 0;
    ties.delib[{1, 2}] = 1;
    return {std::move(inst), ties};
}

// Triangular family in the l1 plane: A=(0,0), B=(1,1), C=(2,0) with clusters
// ACB (mass eta) at (1,0), CBA (mass CB_min) at (2,1), BAC (mass AC_min) at
// (1,1). Preference ties follow the cluster labels; deliberation sums are
// strict everywhere.
inline std::pair<MetricInstance, TieDirectives> instance_triangle(const Q3& lambda, const Q3& w) {
    RangeQuantities r = permissible_ranges(lambda, w);
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::L1Plane, {"A", "B", "C"},
        {{Q3(0), Q3(0)}, {Q3(1), Q3(1)}, {Q3(2), Q3(0)}}, {"ACB", "CBA", "BAC"},
        {r.eta, r.cb_min, r.ac_min}, {{Q3(1), Q3(0)}, {Q3(2), Q3(1)}, {Q3(1), Q3(1)}});
    // The embedding must reproduce the cluster distance table.
    const std::vector<std::vector<Q3>> table = {{Q3(1), Q3(1), Q3(1)},
                                                {Q3(3), Q3(1), Q3(1)},
                                                {Q3(2), Q3(0), Q3(2)}};
    for (int v = 0; v < 3; ++v)
        if (inst.voters[v].dist != table[v])
            throw DomainError("triangular embedding does not match the distance table");
    TieDirectives ties;
    ties.pref[{0, 0, 1}] = 0;
    ties.pref[{0, 0, 2}] = 0;
    ties.pref[{0, 1, 2}] = 2;
    ties.pref[{1, 1, 2}] = 2;
    ties.pref[{2, 0, 2}] = 0;
    return {std::move(inst), ties};
}

// Closed-form distortions of the three families.
inline Q3 closed_form_d(int i, const Q3& lambda, const Q3& w) {
    require_bounds_domain(lambda, w);
    const Q3 one(1);
    Q3 lm1 = one - lambda;
    Q3 tau = (Q3(2) * lambda - one) / lm1;
    bool low = (w - tau).sign() <= 0;
    switch (i) {
        case 1:
            return low ? (one + lambda - Q3(2) * lm1 * w) / (lambda - lm1 * w)
                       : (lambda + one + lm1 * w) / lambda;
        case 2:
            return lambda * (one + w) / lm1;
        case 3: {
            Q3 l2 = lambda * lambda;
            if (low)
                return (Q3(2) + lambda + (l2 + Q3(6) * lambda - Q3(4)) * w -
                        Q3(3) * lambda * lm1 * w * w) /
                       (lambda * (one + w) * (one - lm1 * w));
            return (Q3(2) + lambda + (Q3(3) * l2 - Q3(2) * lambda + Q3(2)) * w +
                    (lambda - l2) * w * w) /
                   (lambda * (one + w) * (one + lm1 * w));
        }
    }
    throw DomainError("closed form index must be 1, 2 or 3");
}

inline Q3 lower_bound_D(const Q3& lambda, const Q3& w) {
    Q3 d = closed_form_d(1, lambda, w);
    d = q3_max(d, closed_form_d(2, lambda, w));
    d = q3_max(d, closed_form_d(3, lambda, w));
    return d;
}

// Float path for grid sweeps; mirrors the closed forms.
namespace bounds_detail {

inline double d1f(double l, double w) {
    double tau = (2 * l - 1) / (1 - l);
    if (w <= tau) return (1 + l - 2 * (1 - l) * w) / (l - (1 - l) * w);
    return (l + 1 + (1 - l) * w) / l;
}
inline double d2f(double l, double w) { return l * (1 + w) / (1 - l); }
inline double d3f(double l, double w) {
    double tau = (2 * l - 1) / (1 - l);
    if (w <= tau)
        return (2 + l + (l * l + 6 * l - 4) * w - 3 * l * (1 - l) * w * w) /
               (l * (1 + w) * (1 - (1 - l) * w));
    return (2 + l + (3 * l * l - 2 * l + 2) * w + (l - l * l) * w * w) /
           (l * (1 + w) * (1 + (1 - l) * w));
}

}  // namespace bounds_detail

struct HeatRow {
    double lambda = 0, w = 0;
    double d1 = 0, d2 = 0, d3 = 0, D = 0;
    int argmax = 1;           // smallest index attaining the max
    bool at_optimum = false;  // the injected exact (lambda*, w*) row
};

struct HeatmapResult {
    std::vector<HeatRow> rows;
    std::size_t argmin = 0;  // row index of the grid minimum of D
};

inline HeatRow heat_row(double l, double w) {
    HeatRow r;
    r.lambda = l;
    r.w = w;
    r.d1 = bounds_detail::d1f(l, w);
    r.d2 = bounds_detail::d2f(l, w);
    r.d3 = bounds_detail::d3f(l, w);
    r.D = std::max(r.d1, std::max(r.d2, r.d3));
    r.argmax = r.D == r.d1 ? 1 : r.D == r.d2 ? 2 : 3;
    return r;
}

// Inclusive grid sweep; the exact optimum (lambda*, w*) is injected as an
// extra row so the sweep always contains the tight point.
inline HeatmapResult heatmap(double l_lo, double l_hi, double w_lo, double w_hi, int steps_l,
                             int steps_w, int jobs = 1, bool inject_optimum = true) {
    if (steps_l < 1 || steps_w < 1) throw DomainError("heatmap needs at least one step per axis");
    HeatmapResult res;
    res.rows.resize(static_cast<std::size_t>(steps_l) * steps_w);
    auto fill = [&](int i0, int i1) {
        for (int i = i0; i < i1; ++i) {
            double l = steps_l == 1 ? l_lo : l_lo + (l_hi - l_lo) * i / (steps_l - 1);
            for (int j = 0; j < steps_w; ++j) {
                double w = steps_w == 1 ? w_lo : w_lo + (w_hi - w_lo) * j / (steps_w - 1);
                res.rows[static_cast<std::size_t>(i) * steps_w + j] = heat_row(l, w);
            }
        }
    };
    if (jobs <= 1) {
        fill(0, steps_l);
    } else {
        std::vector<std::thread> pool;
        int chunk = (steps_l + jobs - 1) / jobs;
        for (int t = 0; t < jobs; ++t) {
            int i0 = t * chunk, i1 = std::min(steps_l, i0 + chunk);
            if (i0 < i1) pool.emplace_back(fill, i0, i1);
        }
        for (auto& th : pool) th.join();
    }
    if (inject_optimum) {
        auto [lambda, w] = canonical_params();
        HeatRow opt = heat_row(lambda.to_double(), w.to_double());
        opt.at_optimum = true;
        res.rows.push_back(opt);
    }
    for (std::size_t i = 1; i < res.rows.size(); ++i)
        if (res.rows[i].D < res.rows[res.argmin].D) res.argmin = i;
    return res;
}

}  // namespace dvm
