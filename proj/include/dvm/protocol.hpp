#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "dvm/instance.hpp"
#include "dvm/instance_io.hpp"

namespace dvm {

enum class MatchPolicy { ByOrder, CounterMonotone, Explicit };

inline MatchPolicy parse_policy(const std::string& s) {
    if (s == "by-order") return MatchPolicy::ByOrder;
    if (s == "counter-monotone") return MatchPolicy::CounterMonotone;
    if (s == "explicit") return MatchPolicy::Explicit;
    throw ParseError("unknown matching policy '" + s + "'");
}

struct MatchedPair {
    int u;    // voter preferring x
    int v;    // voter preferring y
    Q3 mass;
};

struct FractionalMatching {
    int x = 0, y = 0;  // pair the matching was built for
    std::vector<MatchedPair> pairs;

    Q3 matched_mass() const {
        Q3 t = 0;
        for (const auto& p : pairs) t += p.mass;
        return t;
    }
};

namespace detail {

// Greedily pairs two mass lists until the smaller side is exhausted. Blocks
// may split across several partners.
inline std::vector<MatchedPair> greedy_pair(std::vector<std::pair<int, Q3>> xs,
                                            std::vector<std::pair<int, Q3>> ys) {
    std::vector<MatchedPair> out;
    std::size_t i = 0, j = 0;
    while (i < xs.size() && j < ys.size()) {
        Q3 take = q3_min(xs[i].second, ys[j].second);
        if (take.sign() > 0) out.push_back({xs[i].first, ys[j].first, take});
        xs[i].second -= take;
        ys[j].second -= take;
        if (xs[i].second.is_zero()) ++i;
        if (ys[j].second.is_zero()) ++j;
    }
    return out;
}

}  // namespace detail

// Maximum fractional matching between the voters preferring x and those
// preferring y: matched mass is always min(|XY|, |YX|).
//   by-order          pairs blocks greedily in voter order;
//   counter-monotone  sorts each side by d(v,y) - d(v,x), descending on the
//                     x side and ascending on the y side, then pairs greedily;
//   explicit          takes the caller's list and checks feasibility.
inline FractionalMatching build_matching(const MetricInstance& inst, const OrdinalProfile& profile,
                                         int x, int y, MatchPolicy policy,
                                         const ExplicitMatchingSpec* explicit_spec = nullptr) {
    FractionalMatching m;
    m.x = x;
    m.y = y;
    auto xs = profile.members[x][y];
    auto ys = profile.members[y][x];
    Q3 want = q3_min(profile.size[x][y], profile.size[y][x]);

    if (policy == MatchPolicy::Explicit) {
        auto key = TieDirectives::ordered(x, y);
        if (explicit_spec == nullptr || explicit_spec->find(key) == explicit_spec->end()) {
            if (want.is_zero()) return m;  // nothing to match on this pair
            throw InfeasibleExplicitMatching("no explicit matching given for pair " +
                                             inst.candidates[x] + "," + inst.candidates[y]);
        }
        std::vector<Q3> used(profile.num_voters, Q3(0));
        for (auto [u, v, mass] : explicit_spec->at(key)) {
            if (x != key.first) std::swap(u, v);
            auto on_side = [&](const std::vector<std::pair<int, Q3>>& side, int voter) {
                for (const auto& [id, _] : side)
                    if (id == voter) return true;
                return false;
            };
            if (!on_side(xs, u) || !on_side(ys, v))
                throw InfeasibleExplicitMatching("matched voter is on the wrong side of pair " +
                                                 inst.candidates[x] + "," + inst.candidates[y]);
            used[u] += mass;
            used[v] += mass;
            if (used[u] > profile.mass[u] || used[v] > profile.mass[v])
                throw InfeasibleExplicitMatching("matched mass exceeds a voter block");
            m.pairs.push_back({u, v, mass});
        }
        if (m.matched_mass() != want)
            throw InfeasibleExplicitMatching("explicit matching is not maximum for pair " +
                                             inst.candidates[x] + "," + inst.candidates[y]);
        return m;
    }

    if (policy == MatchPolicy::CounterMonotone) {
        auto value = [&](int v) { return inst.voters[v].dist[y] - inst.voters[v].dist[x]; };
        std::stable_sort(xs.begin(), xs.end(), [&](const auto& a, const auto& b) {
            return value(a.first) > value(b.first);
        });
        std::stable_sort(ys.begin(), ys.end(), [&](const auto& a, const auto& b) {
            return value(a.first) < value(b.first);
        });
    }
    m.pairs = detail::greedy_pair(std::move(xs), std::move(ys));
    return m;
}

struct DeliberationRecord {
    FractionalMatching matching;
    std::vector<int> outcomes;  // winning candidate per matched pair
    Q3 win_x, win_y;            // W_XY and W_YX
};

// Averaging deliberation: a matched pair supports the alternative with the
// smaller sum of its two distances; ties go to the directive, then to the
// lower candidate index.
inline DeliberationRecord deliberate(const MetricInstance& inst, FractionalMatching matching,
                                     const TieDirectives& ties) {
    DeliberationRecord rec;
    int x = matching.x, y = matching.y;
    rec.win_x = 0;
    rec.win_y = 0;
    rec.outcomes.reserve(matching.pairs.size());
    for (const auto& p : matching.pairs) {
        Q3 sum_x = inst.voters[p.u].dist[x] + inst.voters[p.v].dist[x];
        Q3 sum_y = inst.voters[p.u].dist[y] + inst.voters[p.v].dist[y];
        int s = (sum_x - sum_y).sign();
        int winner = s < 0 ? x : s > 0 ? y : ties.delib_winner(p.u, p.v, x, y);
        rec.outcomes.push_back(winner);
        (winner == x ? rec.win_x : rec.win_y) += p.mass;
    }
    rec.matching = std::move(matching);
    return rec;
}

struct PairScores {
    Q3 score_xy, score_yx, f_xy, f_yx;
};

// score(XY;w) = |XY| + w * W_XY over unit total mass; f normalizes the pair.
inline PairScores pairwise_scores(const OrdinalProfile& profile, const DeliberationRecord& rec,
                                  const Q3& w) {
    int x = rec.matching.x, y = rec.matching.y;
    PairScores s;
    s.score_xy = profile.size[x][y] + w * rec.win_x;
    s.score_yx = profile.size[y][x] + w * rec.win_y;
    Q3 denom = s.score_xy + s.score_yx;
    s.f_xy = s.score_xy / denom;
    s.f_yx = s.score_yx / denom;
    return s;
}

struct Tournament {
    int m = 0;
    Q3 lambda, w;
    std::vector<std::vector<Q3>> score, f;
    std::vector<DeliberationRecord> records;  // per unordered pair, see pair_index

    static int pair_index(int x, int y, int m) {
        if (x > y) std::swap(x, y);
        return x * m - x * (x + 1) / 2 + (y - x - 1);
    }
};

// Profile plus one deliberation record per unordered candidate pair, indexed
// by Tournament::pair_index. This is the full observable input of the rule
// (and of the worst-case oracle).
struct ProfiledDeliberations {
    OrdinalProfile profile;
    std::vector<DeliberationRecord> records;
};

inline ProfiledDeliberations derive_deliberations(const MetricInstance& inst,
                                                  const TieDirectives& ties, MatchPolicy policy,
                                                  const ExplicitMatchingSpec* explicit_spec = nullptr) {
    ProfiledDeliberations out;
    out.profile = derive_profile(inst, ties);
    int m = out.profile.m;
    out.records.resize(m * (m - 1) / 2);
    for (int x = 0; x < m; ++x)
        for (int y = x + 1; y < m; ++y) {
            FractionalMatching matching =
                build_matching(inst, out.profile, x, y, policy, explicit_spec);
            out.records[Tournament::pair_index(x, y, m)] =
                deliberate(inst, std::move(matching), ties);
        }
    return out;
}

inline Tournament build_tournament(const MetricInstance& inst, const TieDirectives& ties,
                                   const Q3& lambda, const Q3& w, MatchPolicy policy,
                                   const ExplicitMatchingSpec* explicit_spec = nullptr) {
    if (lambda < Q3(Rat(1, 2)) || lambda > Q3(1))
        throw DomainError("lambda must lie in [1/2, 1]");
    if (w.sign() < 0) throw DomainError("w must be nonnegative");
    Tournament t;
    t.m = inst.num_candidates();
    t.lambda = lambda;
    t.w = w;
    t.score.assign(t.m, std::vector<Q3>(t.m, Q3(0)));
    t.f.assign(t.m, std::vector<Q3>(t.m, Q3(0)));
    ProfiledDeliberations pd = derive_deliberations(inst, ties, policy, explicit_spec);
    for (int x = 0; x < t.m; ++x)
        for (int y = x + 1; y < t.m; ++y) {
            const DeliberationRecord& rec = pd.records[Tournament::pair_index(x, y, t.m)];
            PairScores s = pairwise_scores(pd.profile, rec, w);
            t.score[x][y] = s.score_xy;
            t.score[y][x] = s.score_yx;
            t.f[x][y] = s.f_xy;
            t.f[y][x] = s.f_yx;
        }
    t.records = std::move(pd.records);
    return t;
}

// The lambda-weighted uncovered set: X is a member when for every Y, either
// f(XY) >= 1-lambda, or some Z has f(XZ) >= 1-lambda and f(ZY) >= lambda.
inline std::vector<int> wus_members(const Tournament& t) {
    Q3 lo = Q3(1) - t.lambda;
    std::vector<int> members;
    for (int x = 0; x < t.m; ++x) {
        bool in = true;
        for (int y = 0; y < t.m && in; ++y) {
            if (y == x) continue;
            if (t.f[x][y] >= lo) continue;
            bool covered = false;
            for (int z = 0; z < t.m && !covered; ++z) {
                if (z == x || z == y) continue;
                covered = t.f[x][z] >= lo && t.f[z][y] >= t.lambda;
            }
            in = covered;
        }
        if (in) members.push_back(x);
    }
    if (members.empty())
        throw EmptyUncoveredSet("weighted uncovered set is empty at lambda=" + to_string(t.lambda));
    return members;
}

// Copeland: X beats Y when f(XY) >= 1/2; winner is the max beat count, ties
// toward the lowest index.
inline int copeland_winner(const Tournament& t) {
    int best = 0, best_count = -1;
    for (int x = 0; x < t.m; ++x) {
        int count = 0;
        for (int y = 0; y < t.m; ++y)
            if (y != x && t.f[x][y] >= Q3(Rat(1, 2))) ++count;
        if (count > best_count) {
            best = x;
            best_count = count;
        }
    }
    return best;
}

struct Distortion {
    bool unbounded = false;
    Q3 value;  // meaningful when !unbounded
};

inline Distortion distortion_of(const MetricInstance& inst, int winner, int optimal) {
    Q3 sc_win = social_cost(inst, winner);
    Q3 sc_opt = social_cost(inst, optimal);
    if (sc_opt.is_zero()) {
        if (sc_win.is_zero()) return {false, Q3(1)};
        return {true, Q3(0)};
    }
    return {false, sc_win / sc_opt};
}

struct ProtocolResult {
    Tournament tournament;
    std::vector<int> wus;
    int winner = 0;   // lowest-index member of the uncovered set
    int optimal = 0;
    Distortion distortion;
};

inline ProtocolResult run_protocol(const MetricInstance& inst, const TieDirectives& ties,
                                   const Q3& lambda, const Q3& w, MatchPolicy policy,
                                   const ExplicitMatchingSpec* explicit_spec = nullptr) {
    ProtocolResult r;
    r.tournament = build_tournament(inst, ties, lambda, w, policy, explicit_spec);
    r.wus = wus_members(r.tournament);
    r.winner = r.wus.front();
    r.optimal = optimal_candidate(inst);
    r.distortion = distortion_of(inst, r.winner, r.optimal);
    return r;
}

}  // namespace dvm
