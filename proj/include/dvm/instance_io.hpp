#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "dvm/instance.hpp"

namespace dvm {

// Explicit fractional matchings, per unordered candidate pair (lo, hi):
// entries are (voter preferring lo, voter preferring hi, mass).
using ExplicitMatchingSpec = std::map<std::pair<int, int>, std::vector<std::tuple<int, int, Q3>>>;

struct LoadedInstance {
    MetricInstance instance;
    TieDirectives ties;
    ExplicitMatchingSpec matchings;
};

// Line-oriented instance format ('#' starts a comment):
//
//   candidates A B C
//   metric line | l1-plane | explicit
//   candidate <name> <x> [<y>]            (line / l1-plane)
//   voter <name> <mass> at <x> [<y>]      (line / l1-plane)
//   cand_dist <X> <Y> <scalar>            (explicit)
//   voter <name> <mass> dist <s1> ... <sm>  (explicit)
//   pref_tie <voter> <X> <Y> <winner>
//   delib_tie <X> <Y> <winner> [<u> <v>]
//   match <X> <Y> <u> <v> <mass>          (optional explicit matching)
//
// Scalars use the exact encoding from q3.hpp.
inline LoadedInstance parse_instance(std::istream& in) {
    LoadedInstance out;
    MetricInstance& inst = out.instance;

    std::string metric_kind;
    std::vector<std::vector<Q3>> cand_pos, voter_pos;
    std::vector<std::string> voter_names;
    std::vector<Q3> masses;
    std::vector<bool> cand_seen;

    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ParseError("instance line " + std::to_string(lineno) + ": " + msg);
    };
    auto cand = [&](const std::string& name) {
        int c = inst.candidate_index(name);
        if (c < 0) fail("unknown candidate '" + name + "'");
        return c;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string& key = tok[0];

        if (key == "candidates") {
            if (tok.size() < 3) fail("need at least two candidates");
            inst.candidates.assign(tok.begin() + 1, tok.end());
            for (std::size_t i = 0; i < inst.candidates.size(); ++i)
                for (std::size_t j = i + 1; j < inst.candidates.size(); ++j)
                    if (inst.candidates[i] == inst.candidates[j]) fail("duplicate candidate name");
            int m = inst.num_candidates();
            inst.cand_dist.assign(m, std::vector<Q3>(m, Q3(0)));
            cand_pos.assign(m, {});
            cand_seen.assign(m, false);
        } else if (key == "metric") {
            if (tok.size() != 2 || (tok[1] != "line" && tok[1] != "l1-plane" && tok[1] != "explicit"))
                fail("metric must be line, l1-plane or explicit");
            metric_kind = tok[1];
        } else if (key == "candidate") {
            if (metric_kind == "explicit" || metric_kind.empty()) fail("candidate lines need a coordinate metric");
            std::size_t dims = metric_kind == "line" ? 1 : 2;
            if (tok.size() != 2 + dims) fail("candidate needs " + std::to_string(dims) + " coordinate(s)");
            int c = cand(tok[1]);
            cand_pos[c].clear();
            for (std::size_t i = 0; i < dims; ++i) cand_pos[c].push_back(parse_scalar(tok[2 + i]));
            cand_seen[c] = true;
        } else if (key == "cand_dist") {
            if (metric_kind != "explicit") fail("cand_dist lines need metric explicit");
            if (tok.size() != 4) fail("cand_dist <X> <Y> <scalar>");
            int x = cand(tok[1]), y = cand(tok[2]);
            if (x == y) fail("cand_dist needs two distinct candidates");
            inst.cand_dist[x][y] = inst.cand_dist[y][x] = parse_scalar(tok[3]);
        } else if (key == "voter") {
            if (tok.size() < 4) fail("voter <name> <mass> at|dist ...");
            VoterBlock b;
            b.name = tok[1];
            if (inst.voter_index(b.name) >= 0) fail("duplicate voter name '" + b.name + "'");
            b.mass = parse_scalar(tok[2]);
            if (b.mass.sign() <= 0) fail("voter mass must be positive");
            if (tok[3] == "at") {
                if (metric_kind == "explicit" || metric_kind.empty()) fail("'at' needs a coordinate metric");
                std::size_t dims = metric_kind == "line" ? 1 : 2;
                if (tok.size() != 4 + dims) fail("voter position needs " + std::to_string(dims) + " coordinate(s)");
                std::vector<Q3> pos;
                for (std::size_t i = 0; i < dims; ++i) pos.push_back(parse_scalar(tok[4 + i]));
                voter_pos.push_back(pos);
                voter_names.push_back(b.name);
                masses.push_back(b.mass);
                inst.voters.push_back(std::move(b));  // dist filled after all candidates are placed
            } else if (tok[3] == "dist") {
                if (metric_kind != "explicit") fail("'dist' needs metric explicit");
                if (tok.size() != 4 + inst.candidates.size()) fail("voter dist needs one scalar per candidate");
                for (std::size_t i = 0; i < inst.candidates.size(); ++i)
                    b.dist.push_back(parse_scalar(tok[4 + i]));
                inst.voters.push_back(std::move(b));
            } else {
                fail("voter line needs 'at' or 'dist'");
            }
        } else if (key == "pref_tie") {
            if (tok.size() != 5) fail("pref_tie <voter> <X> <Y> <winner>");
            int v = inst.voter_index(tok[1]);
            if (v < 0) fail("unknown voter '" + tok[1] + "'");
            int x = cand(tok[2]), y = cand(tok[3]), win = cand(tok[4]);
            if (win != x && win != y) fail("tie winner must be one of the tied candidates");
            auto [lo, hi] = TieDirectives::ordered(x, y);
            out.ties.pref[{v, lo, hi}] = win;
        } else if (key == "delib_tie") {
            if (tok.size() != 4 && tok.size() != 6) fail("delib_tie <X> <Y> <winner> [<u> <v>]");
            int x = cand(tok[1]), y = cand(tok[2]), win = cand(tok[3]);
            if (win != x && win != y) fail("tie winner must be one of the tied candidates");
            auto [lo, hi] = TieDirectives::ordered(x, y);
            if (tok.size() == 4) {
                out.ties.delib[{lo, hi}] = win;
            } else {
                int u = inst.voter_index(tok[4]), v = inst.voter_index(tok[5]);
                if (u < 0 || v < 0) fail("unknown voter in delib_tie");
                out.ties.delib_pair[{u, v, lo, hi}] = win;
            }
        } else if (key == "match") {
            if (tok.size() != 6) fail("match <X> <Y> <u> <v> <mass>");
            int x = cand(tok[1]), y = cand(tok[2]);
            int u = inst.voter_index(tok[3]), v = inst.voter_index(tok[4]);
            if (u < 0 || v < 0) fail("unknown voter in match");
            Q3 mass = parse_scalar(tok[5]);
            if (mass.sign() <= 0) fail("match mass must be positive");
            auto [lo, hi] = TieDirectives::ordered(x, y);
            if (x == lo)
                out.matchings[{lo, hi}].emplace_back(u, v, mass);
            else
                out.matchings[{lo, hi}].emplace_back(v, u, mass);
        } else {
            fail("unknown keyword '" + key + "'");
        }
    }

    if (inst.candidates.empty()) throw ParseError("instance has no candidates line");
    if (metric_kind.empty()) throw ParseError("instance has no metric line");
    if (inst.voters.empty()) throw ParseError("instance has no voters");

    if (metric_kind != "explicit") {
        for (int c = 0; c < inst.num_candidates(); ++c)
            if (!cand_seen[c])
                throw ParseError("candidate '" + inst.candidates[c] + "' has no position");
        auto kind = metric_kind == "line" ? Embedding::Kind::Line : Embedding::Kind::L1Plane;
        std::vector<std::string> names = inst.candidates;
        MetricInstance built = instance_from_embedding(kind, std::move(names), cand_pos,
                                                       voter_names, masses, voter_pos);
        built.candidates = inst.candidates;
        inst.cand_dist = built.cand_dist;
        inst.voters = built.voters;
        inst.embedding = built.embedding;
    } else {
        for (const auto& v : inst.voters)
            if (v.dist.size() != inst.candidates.size())
                throw ParseError("voter '" + v.name + "' has no dist vector");
    }
    return out;
}

inline LoadedInstance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline LoadedInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open instance file '" + path + "'");
    return parse_instance(in);
}

inline std::string serialize_instance(const MetricInstance& inst, const TieDirectives& ties) {
    std::ostringstream os;
    os << "candidates";
    for (const auto& c : inst.candidates) os << ' ' << c;
    os << '\n';
    int m = inst.num_candidates();
    if (inst.embedding) {
        const Embedding& e = *inst.embedding;
        os << "metric " << (e.kind == Embedding::Kind::Line ? "line" : "l1-plane") << '\n';
        for (int c = 0; c < m; ++c) {
            os << "candidate " << inst.candidates[c];
            for (const auto& x : e.cand_pos[c]) os << ' ' << to_string(x);
            os << '\n';
        }
        for (int v = 0; v < inst.num_voters(); ++v) {
            os << "voter " << inst.voters[v].name << ' ' << to_string(inst.voters[v].mass) << " at";
            for (const auto& x : e.voter_pos[v]) os << ' ' << to_string(x);
            os << '\n';
        }
    } else {
        os << "metric explicit\n";
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                os << "cand_dist " << inst.candidates[i] << ' ' << inst.candidates[j] << ' '
                   << to_string(inst.cand_dist[i][j]) << '\n';
        for (const auto& v : inst.voters) {
            os << "voter " << v.name << ' ' << to_string(v.mass) << " dist";
            for (const auto& d : v.dist) os << ' ' << to_string(d);
            os << '\n';
        }
    }
    for (const auto& [key, win] : ties.pref) {
        auto [v, lo, hi] = key;
        os << "pref_tie " << inst.voters[v].name << ' ' << inst.candidates[lo] << ' '
           << inst.candidates[hi] << ' ' << inst.candidates[win] << '\n';
    }
    for (const auto& [key, win] : ties.delib)
        os << "delib_tie " << inst.candidates[key.first] << ' ' << inst.candidates[key.second]
           << ' ' << inst.candidates[win] << '\n';
    for (const auto& [key, win] : ties.delib_pair) {
        auto [u, v, lo, hi] = key;
        os << "delib_tie " << inst.candidates[lo] << ' ' << inst.candidates[hi] << ' '
           << inst.candidates[win] << ' ' << inst.voters[u].name << ' ' << inst.voters[v].name
           << '\n';
    }
    return os.str();
}

inline void save_instance(const std::string& path, const MetricInstance& inst,
                          const TieDirectives& ties) {
    std::ofstream out(path);
    if (!out) throw FileNotFound("cannot write instance file '" + path + "'");
    out << serialize_instance(inst, ties);
}

}  // namespace dvm
