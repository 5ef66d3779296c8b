#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dvm/q3.hpp"

namespace dvm {

struct VoterBlock {
    std::string name;
    Q3 mass;                // > 0; operations normalize total mass to 1
    std::vector<Q3> dist;   // distance to each candidate, in candidate order
};

// Coordinates retained when an instance was given by an embedding, so files
// can be re-emitted in the form they were written in.
struct Embedding {
    enum class Kind { Line, L1Plane };
    Kind kind = Kind::Line;
    std::vector<std::vector<Q3>> cand_pos;
    std::vector<std::vector<Q3>> voter_pos;
};

struct MetricInstance {
    std::vector<std::string> candidates;
    std::vector<std::vector<Q3>> cand_dist;  // symmetric, zero diagonal
    std::vector<VoterBlock> voters;
    std::optional<Embedding> embedding;

    int num_candidates() const { return static_cast<int>(candidates.size()); }
    int num_voters() const { return static_cast<int>(voters.size()); }

    int candidate_index(const std::string& name) const {
        for (int i = 0; i < num_candidates(); ++i)
            if (candidates[i] == name) return i;
        return -1;
    }
    int voter_index(const std::string& name) const {
        for (int i = 0; i < num_voters(); ++i)
            if (voters[i].name == name) return i;
        return -1;
    }

    Q3 total_mass() const {
        Q3 t = 0;
        for (const auto& v : voters) t += v.mass;
        return t;
    }
};

inline Q3 l1_distance(const std::vector<Q3>& p, const std::vector<Q3>& q) {
    Q3 d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) d += q3_abs(p[i] - q[i]);
    return d;
}

// Builds an instance from coordinates on the line or the l1 plane; distances
// are expanded eagerly and the embedding is kept for serialization.
inline MetricInstance instance_from_embedding(Embedding::Kind kind,
                                              std::vector<std::string> names,
                                              std::vector<std::vector<Q3>> cand_pos,
                                              std::vector<std::string> voter_names,
                                              std::vector<Q3> masses,
                                              std::vector<std::vector<Q3>> voter_pos) {
    MetricInstance inst;
    inst.candidates = std::move(names);
    int m = inst.num_candidates();
    inst.cand_dist.assign(m, std::vector<Q3>(m, Q3(0)));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            inst.cand_dist[i][j] = inst.cand_dist[j][i] = l1_distance(cand_pos[i], cand_pos[j]);
    for (std::size_t v = 0; v < voter_pos.size(); ++v) {
        VoterBlock b;
        b.name = voter_names[v];
        b.mass = masses[v];
        b.dist.reserve(m);
        for (int c = 0; c < m; ++c) b.dist.push_back(l1_distance(voter_pos[v], cand_pos[c]));
        inst.voters.push_back(std::move(b));
    }
    inst.embedding = Embedding{kind, std::move(cand_pos), std::move(voter_pos)};
    return inst;
}

struct Violation {
    std::string what;
    Q3 slack;  // amount by which the constraint fails, > 0
};

// Checks the metric invariants: symmetry, nonnegativity, candidate triangle
// inequalities, and both voter-candidate-candidate triangles. Voter-voter
// distances are implied by shortest paths and never checked or stored.
inline std::vector<Violation> validate_metric(const MetricInstance& inst) {
    std::vector<Violation> out;
    int m = inst.num_candidates();
    auto name = [&](int c) { return inst.candidates[c]; };

    if (m < 2) out.push_back({"fewer than two candidates", Q3(1)});
    if (static_cast<int>(inst.cand_dist.size()) != m) {
        out.push_back({"cand_dist has wrong shape", Q3(1)});
        return out;
    }
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(inst.cand_dist[i].size()) != m) {
            out.push_back({"cand_dist has wrong shape", Q3(1)});
            return out;
        }
        if (!inst.cand_dist[i][i].is_zero())
            out.push_back({"nonzero diagonal at " + name(i), q3_abs(inst.cand_dist[i][i])});
        for (int j = i + 1; j < m; ++j) {
            if (inst.cand_dist[i][j] != inst.cand_dist[j][i])
                out.push_back({"asymmetric d(" + name(i) + "," + name(j) + ")",
                               q3_abs(inst.cand_dist[i][j] - inst.cand_dist[j][i])});
            if (inst.cand_dist[i][j].sign() < 0)
                out.push_back({"negative d(" + name(i) + "," + name(j) + ")", -inst.cand_dist[i][j]});
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = j + 1; k < m; ++k) {
                if (i == j || i == k) continue;
                Q3 slack = inst.cand_dist[j][k] - inst.cand_dist[j][i] - inst.cand_dist[i][k];
                if (slack.sign() > 0)
                    out.push_back({"candidate triangle d(" + name(j) + "," + name(k) + ") > d(" +
                                       name(j) + "," + name(i) + ")+d(" + name(i) + "," + name(k) + ")",
                                   slack});
            }
    for (const auto& v : inst.voters) {
        if (v.mass.sign() <= 0) out.push_back({"voter " + v.name + " has nonpositive mass", Q3(1) - v.mass});
        if (static_cast<int>(v.dist.size()) != m) {
            out.push_back({"voter " + v.name + " has wrong dist length", Q3(1)});
            continue;
        }
        for (int c = 0; c < m; ++c)
            if (v.dist[c].sign() < 0)
                out.push_back({"negative d(" + v.name + "," + name(c) + ")", -v.dist[c]});
        for (int x = 0; x < m; ++x)
            for (int y = x + 1; y < m; ++y) {
                Q3 gap = q3_abs(v.dist[x] - v.dist[y]) - inst.cand_dist[x][y];
                if (gap.sign() > 0)
                    out.push_back({"voter triangle |d(" + v.name + "," + name(x) + ")-d(" + v.name +
                                       "," + name(y) + ")| > d(" + name(x) + "," + name(y) + ")",
                                   gap});
                Q3 gap2 = inst.cand_dist[x][y] - v.dist[x] - v.dist[y];
                if (gap2.sign() > 0)
                    out.push_back({"voter triangle d(" + name(x) + "," + name(y) + ") > d(" + v.name +
                                       "," + name(x) + ")+d(" + v.name + "," + name(y) + ")",
                                   gap2});
            }
    }
    return out;
}

// Tie directives; anything not directed falls back to the lower candidate
// index. Keys hold candidate pairs as (lo, hi).
struct TieDirectives {
    std::map<std::tuple<int, int, int>, int> pref;                // (voter, lo, hi) -> preferred
    std::map<std::pair<int, int>, int> delib;                     // (lo, hi) -> deliberation winner
    std::map<std::tuple<int, int, int, int>, int> delib_pair;     // (u, v, lo, hi) -> winner

    static std::pair<int, int> ordered(int c1, int c2) {
        return c1 < c2 ? std::make_pair(c1, c2) : std::make_pair(c2, c1);
    }

    int pref_winner(int voter, int c1, int c2) const {
        auto [lo, hi] = ordered(c1, c2);
        if (auto it = pref.find({voter, lo, hi}); it != pref.end()) return it->second;
        return lo;
    }

    int delib_winner(int u, int v, int c1, int c2) const {
        auto [lo, hi] = ordered(c1, c2);
        if (auto it = delib_pair.find({u, v, lo, hi}); it != delib_pair.end()) return it->second;
        if (auto it = delib.find({lo, hi}); it != delib.end()) return it->second;
        return lo;
    }
};

struct OrdinalProfile {
    int m = 0;
    int num_voters = 0;
    std::vector<Q3> mass;  // normalized; sums to 1
    // members[x][y]: (voter, normalized mass) preferring x over y, in voter order
    std::vector<std::vector<std::vector<std::pair<int, Q3>>>> members;
    std::vector<std::vector<Q3>> size;  // |XY|
};

// Assigns every voter to exactly one side of every pair: strict preference by
// distance, ties by directive, then by lower candidate index.
inline OrdinalProfile derive_profile(const MetricInstance& inst, const TieDirectives& ties) {
    OrdinalProfile p;
    p.m = inst.num_candidates();
    p.num_voters = inst.num_voters();
    Q3 total = inst.total_mass();
    if (total.sign() <= 0) throw DomainError("instance has no voter mass");
    p.mass.reserve(p.num_voters);
    for (const auto& v : inst.voters) p.mass.push_back(v.mass / total);
    p.members.assign(p.m, std::vector<std::vector<std::pair<int, Q3>>>(p.m));
    p.size.assign(p.m, std::vector<Q3>(p.m, Q3(0)));
    for (int x = 0; x < p.m; ++x)
        for (int y = x + 1; y < p.m; ++y)
            for (int v = 0; v < p.num_voters; ++v) {
                int s = (inst.voters[v].dist[x] - inst.voters[v].dist[y]).sign();
                int side = s < 0 ? x : s > 0 ? y : ties.pref_winner(v, x, y);
                int other = side == x ? y : x;
                p.members[side][other].emplace_back(v, p.mass[v]);
                p.size[side][other] += p.mass[v];
            }
    return p;
}

// Mass-weighted total distance to a candidate, with masses normalized to 1.
inline Q3 social_cost(const MetricInstance& inst, int candidate) {
    Q3 total = inst.total_mass();
    Q3 sc = 0;
    for (const auto& v : inst.voters) sc += v.mass * v.dist[candidate];
    return sc / total;
}

// The 1-median; ties broken toward the lowest index.
inline int optimal_candidate(const MetricInstance& inst) {
    int best = 0;
    Q3 best_sc = social_cost(inst, 0);
    for (int c = 1; c < inst.num_candidates(); ++c) {
        Q3 sc = social_cost(inst, c);
        if (sc < best_sc) {
            best = c;
            best_sc = sc;
        }
    }
    return best;
}

}  // namespace dvm
