#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "dvm/instance.hpp"
#include "dvm/lp.hpp"
#include "dvm/protocol.hpp"

namespace dvm {

// A weighted voter described by its relative preferences toward three
// candidates: x = d(v,C) - d(v,A), y = d(v,B) - d(v,C), and optionally the
// anchor z = d(v,C).
struct XYBlock {
    Rat mass;
    Rat x, y;
    std::optional<Rat> z;
};

struct Norms {
    Rat mx, my, mxy;  // sup norms of X, Y and X+Y over the population

    static Norms of(const std::vector<XYBlock>& blocks) {
        Norms n{Rat(0), Rat(0), Rat(0)};
        for (const auto& b : blocks) {
            n.mx = std::max(n.mx, rat_abs(b.x));
            n.my = std::max(n.my, rat_abs(b.y));
            n.mxy = std::max(n.mxy, rat_abs(b.x + b.y));
        }
        return n;
    }

    bool dominates(const Rat& x, const Rat& y) const {
        return mx >= rat_abs(x) && my >= rat_abs(y) && mxy >= rat_abs(x + y);
    }
};

// Pointwise-minimal feasible d(v,C) given (x, y) and the population norms:
// max{(Mx+x)/2, (My-y)/2, (Mxy+x-y)/2}. Always nonnegative when the norms
// dominate the block.
inline Rat z_min(const Rat& x, const Rat& y, const Norms& norms) {
    if (!norms.dominates(x, y))
        throw NormsDoNotDominate("norms do not dominate block (" + to_string(x) + "," +
                                 to_string(y) + ")");
    Rat z1 = (norms.mx + x) / 2, z2 = (norms.my - y) / 2, z3 = (norms.mxy + x - y) / 2;
    if (z2 > z1) z1 = z2;
    if (z3 > z1) z1 = z3;
    return z1;
}

// Realizes blocks as a three-candidate metric instance: d(A,C) = Mx,
// d(B,C) = My, d(A,B) = Mxy, and voter distances (z-x, z+y, z). Each block
// must carry z >= z_min.
inline MetricInstance realize_metric(const std::vector<XYBlock>& blocks) {
    Norms n = Norms::of(blocks);
    MetricInstance inst;
    inst.candidates = {"A", "B", "C"};
    inst.cand_dist = {{Q3(0), Q3(n.mxy), Q3(n.mx)},
                      {Q3(n.mxy), Q3(0), Q3(n.my)},
                      {Q3(n.mx), Q3(n.my), Q3(0)}};
    int idx = 0;
    for (const auto& b : blocks) {
        if (!b.z) throw InfeasibleZ("block " + std::to_string(idx) + " carries no z");
        if (*b.z < z_min(b.x, b.y, n))
            throw InfeasibleZ("block " + std::to_string(idx) + " has z below z_min");
        VoterBlock v;
        v.name = "b" + std::to_string(idx++);
        v.mass = Q3(b.mass);
        v.dist = {Q3(*b.z - b.x), Q3(*b.z + b.y), Q3(*b.z)};
        inst.voters.push_back(std::move(v));
    }
    return inst;
}

// The linearized distortion functional Phi_R = E[X] + (R+1) E[Y] + R E[Zmin],
// with the norms recomputed from the blocks themselves.
inline Rat phi(const Rat& R, const std::vector<XYBlock>& blocks) {
    Norms n = Norms::of(blocks);
    Rat v = 0;
    for (const auto& b : blocks)
        v += b.mass * (b.x + (R + 1) * b.y + R * z_min(b.x, b.y, n));
    return v;
}

// Pairs the descending order of X-values with the ascending order of
// Y-values, splitting masses as needed so every output block has constant
// (x, y). Both marginals must carry the same total mass.
inline std::vector<XYBlock> counter_monotone_couple(std::vector<std::pair<Rat, Rat>> xs,
                                                    std::vector<std::pair<Rat, Rat>> ys) {
    Rat tx = 0, ty = 0;
    for (const auto& [v, mass] : xs) tx += mass;
    for (const auto& [v, mass] : ys) ty += mass;
    if (tx != ty)
        throw MassMismatch("marginal masses differ: " + to_string(tx) + " vs " + to_string(ty));
    std::stable_sort(xs.begin(), xs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::stable_sort(ys.begin(), ys.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<XYBlock> out;
    std::size_t i = 0, j = 0;
    while (i < xs.size() && j < ys.size()) {
        Rat take = std::min(xs[i].second, ys[j].second);
        if (take > 0) out.push_back({take, xs[i].first, ys[j].first, std::nullopt});
        xs[i].second -= take;
        ys[j].second -= take;
        if (xs[i].second == 0) ++i;
        if (ys[j].second == 0) ++j;
    }
    return out;
}

// Upper envelope of the three planes a+x, b+y, c+x+y. Submodular in (x, y).
inline Rat submodular_envelope(const Rat& a, const Rat& b, const Rat& c, const Rat& x,
                               const Rat& y) {
    Rat p1 = a + x, p2 = b + y, p3 = c + x + y;
    if (p2 > p1) p1 = p2;
    if (p3 > p1) p1 = p3;
    return p1;
}

// Jensen step: replaces an equal-mass pair by two copies of their mean.
inline std::pair<XYBlock, XYBlock> compact_pair(const XYBlock& b1, const XYBlock& b2) {
    if (b1.mass != b2.mass) throw MassMismatch("compact_pair needs equal masses");
    Rat mx = (b1.x + b2.x) / 2, my = (b1.y + b2.y) / 2;
    return {XYBlock{b1.mass, mx, my, std::nullopt}, XYBlock{b2.mass, mx, my, std::nullopt}};
}

struct WorstCase {
    bool unbounded = false;
    Rat ratio;          // sup of SC(winner)/SC(ref), when bounded
    LinearProgram lp;   // the program, for dumping and witness inspection
    LpSolution solution;
};

// Worst-case metric consistent with the observed profile and deliberation
// outcomes: maximize SC(winner) subject to SC(ref) = 1, over variables
// d(v,X) and d(X,Y). Preference and deliberation consistency use weak
// inequalities; voter-voter distances are never modeled (shortest-path
// completion supplies them).
inline WorstCase worst_case_distortion(const OrdinalProfile& profile,
                                       const std::vector<DeliberationRecord>& records, int winner,
                                       int ref) {
    int m = profile.m, nv = profile.num_voters;
    WorstCase wc;
    LinearProgram& lp = wc.lp;

    auto dvar = [&](int v, int c) { return v * m + c; };
    auto pvar = [&](int x, int y) { return nv * m + Tournament::pair_index(x, y, m); };
    for (int v = 0; v < nv; ++v)
        for (int c = 0; c < m; ++c) lp.add_var("d_v" + std::to_string(v) + "_c" + std::to_string(c));
    for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y)
            lp.add_var("D_" + std::to_string(x) + "_" + std::to_string(y));

    auto row = [&](std::initializer_list<std::pair<int, Rat>> terms, Rel rel, Rat rhs,
                   std::string id) {
        std::vector<Rat> a(lp.num_vars, Rat(0));
        for (const auto& [j, c] : terms) a[j] += c;
        lp.add_row(std::move(a), rel, std::move(rhs), std::move(id));
    };

    // Preference consistency.
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            if (x == y) continue;
            for (const auto& [v, mass] : profile.members[x][y])
                row({{dvar(v, x), Rat(1)}, {dvar(v, y), Rat(-1)}}, Rel::LE, Rat(0),
                    "pref_v" + std::to_string(v) + "_" + std::to_string(x) + ">" + std::to_string(y));
        }
    // Deliberation consistency.
    for (const auto& rec : records) {
        int x = rec.matching.x, y = rec.matching.y;
        for (std::size_t k = 0; k < rec.matching.pairs.size(); ++k) {
            const MatchedPair& p = rec.matching.pairs[k];
            if (p.mass.is_zero()) continue;
            int o = rec.outcomes[k], l = o == x ? y : x;
            row({{dvar(p.u, o), Rat(1)}, {dvar(p.v, o), Rat(1)}, {dvar(p.u, l), Rat(-1)},
                 {dvar(p.v, l), Rat(-1)}},
                Rel::LE, Rat(0),
                "delib_" + std::to_string(x) + "_" + std::to_string(y) + "_k" + std::to_string(k));
        }
    }
    // Voter-candidate-candidate triangles.
    for (int v = 0; v < nv; ++v)
        for (int x = 0; x < m; ++x)
            for (int y = x + 1; y < m; ++y) {
                std::string tag = "_v" + std::to_string(v) + "_" + std::to_string(x) + "_" +
                                  std::to_string(y);
                row({{dvar(v, x), Rat(1)}, {dvar(v, y), Rat(-1)}, {pvar(x, y), Rat(-1)}}, Rel::LE,
                    Rat(0), "tri_a" + tag);
                row({{dvar(v, y), Rat(1)}, {dvar(v, x), Rat(-1)}, {pvar(x, y), Rat(-1)}}, Rel::LE,
                    Rat(0), "tri_b" + tag);
                row({{pvar(x, y), Rat(1)}, {dvar(v, x), Rat(-1)}, {dvar(v, y), Rat(-1)}}, Rel::LE,
                    Rat(0), "tri_c" + tag);
            }
    // Candidate triangles.
    for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y)
            for (int z = 0; z < m; ++z) {
                if (z == x || z == y) continue;
                row({{pvar(x, y), Rat(1)},
                     {pvar(std::min(x, z), std::max(x, z)), Rat(-1)},
                     {pvar(std::min(y, z), std::max(y, z)), Rat(-1)}},
                    Rel::LE, Rat(0),
                    "ctri_" + std::to_string(x) + "_" + std::to_string(y) + "_via" + std::to_string(z));
            }
    // Normalize SC(ref) and maximize SC(winner).
    {
        std::vector<Rat> a(lp.num_vars, Rat(0));
        for (int v = 0; v < nv; ++v) a[dvar(v, ref)] = profile.mass[v].as_rational();
        lp.add_row(std::move(a), Rel::EQ, Rat(1), "sc_ref_eq_1");
    }
    for (int v = 0; v < nv; ++v)
        lp.set_objective(dvar(v, winner), -profile.mass[v].as_rational());

    wc.solution = lp_solve(lp);
    if (wc.solution.status == LpStatus::Infeasible)
        throw InconsistentProfile("profile and deliberation outcomes admit no metric");
    wc.unbounded = wc.solution.status == LpStatus::Unbounded;
    if (!wc.unbounded) wc.ratio = -wc.solution.objective;
    return wc;
}

}  // namespace dvm
