#pragma once

// Hand-built instances used across the test suites. The lower-bound families
// here are pinned at the optimal parameters; the bounds module must reproduce
// them from (lambda*, w*).

#include <random>
#include <utility>

#include "dvm/instance.hpp"
#include "dvm/instance_io.hpp"

namespace fixtures {

using namespace dvm;

struct InstanceWithTies {
    MetricInstance inst;
    TieDirectives ties;
};

// Line A=0, B=1, C=2; two unit voters at B preferring A over C, one at C.
// (C,B) deliberation ties are arbitrated toward C.
inline InstanceWithTies distortion4_line() {
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::Line, {"A", "B", "C"}, {{Q3(0)}, {Q3(1)}, {Q3(2)}},
        {"b1", "b2", "c1"}, {Q3(1), Q3(1), Q3(1)}, {{Q3(1)}, {Q3(1)}, {Q3(2)}});
    TieDirectives ties;
    ties.pref[{0, 0, 2}] = 0;  // b1 prefers A over C
    ties.pref[{1, 0, 2}] = 0;  // b2 prefers A over C
    ties.delib[{1, 2}] = 2;    // (C,B) deliberation ties go to C
    return {std::move(inst), ties};
}

// Line A=-1, B=1; two unit voters at A, one at B; the deliberation between a
// voter at A and the voter at B is a tie, arbitrated toward B.
inline InstanceWithTies two_candidate_gap() {
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::Line, {"A", "B"}, {{Q3(-1)}, {Q3(1)}},
        {"a1", "a2", "b1"}, {Q3(1), Q3(1), Q3(1)}, {{Q3(-1)}, {Q3(-1)}, {Q3(1)}});
    TieDirectives ties;
    ties.delib[{0, 1}] = 1;
    return {std::move(inst), ties};
}

// The collinear lower-bound family at (lambda*, w*): masses AC_max = 1/2 at B
// and CB_min = 1/2 at C.
inline InstanceWithTies collinear_opt() {
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::Line, {"A", "B", "C"}, {{Q3(0)}, {Q3(1)}, {Q3(2)}},
        {"v_B", "v_C"}, {Q3(Rat(1, 2)), Q3(Rat(1, 2))}, {{Q3(1)}, {Q3(2)}});
    TieDirectives ties;
    ties.pref[{0, 0, 2}] = 0;  // v_B's (A,C) tie toward A
    ties.delib[{1, 2}] = 2;    // all (C,B) deliberation ties toward C
    return {std::move(inst), ties};
}

// The co-located family at (lambda*, w*): AC_min = 1/4 at A, the rest at B=C.
inline InstanceWithTies colocated_opt() {
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::Line, {"A", "B", "C"}, {{Q3(0)}, {Q3(1)}, {Q3(1)}},
        {"v_A", "v_BC"}, {Q3(Rat(1, 4)), Q3(Rat(3, 4))}, {{Q3(0)}, {Q3(1)}});
    TieDirectives ties;
    ties.pref[{0, 1, 2}] = 1;  // v_A's (B,C) tie toward B
    ties.pref[{1, 1, 2}] = 2;  // v_BC's (B,C) tie toward C
    ties.delib[{0, 2}] = 0;    // (A,C) deliberation ties toward A
    ties.delib[{1, 2}] = 1;    // (C,B) deliberation ties toward B
    return {std::move(inst), ties};
}

// The triangular family at (lambda*, w*), embedded in the l1 plane.
inline InstanceWithTies triangle_opt() {
    MetricInstance inst = instance_from_embedding(
        Embedding::Kind::L1Plane, {"A", "B", "C"},
        {{Q3(0), Q3(0)}, {Q3(1), Q3(1)}, {Q3(2), Q3(0)}},
        {"ACB", "CBA", "BAC"}, {Q3(Rat(1, 4)), Q3(Rat(1, 2)), Q3(Rat(1, 4))},
        {{Q3(1), Q3(0)}, {Q3(2), Q3(1)}, {Q3(1), Q3(1)}});
    TieDirectives ties;
    // Each cluster's ties follow its ranking label.
    ties.pref[{0, 0, 1}] = 0;  // ACB: A over B
    ties.pref[{0, 0, 2}] = 0;  // ACB: A over C
    ties.pref[{0, 1, 2}] = 2;  // ACB: C over B
    ties.pref[{1, 1, 2}] = 2;  // CBA: C over B
    ties.pref[{2, 0, 2}] = 0;  // BAC: A over C
    return {std::move(inst), ties};
}

// Seeded random line instance with small rational coordinates; no directives.
inline MetricInstance random_line_instance(std::mt19937_64& rng, int m, int max_voters = 5) {
    std::uniform_int_distribution<int> coord(0, 48), vcoord(-16, 64), nmass(1, 9);
    std::uniform_int_distribution<int> nvd(1, max_voters);
    std::vector<std::vector<Q3>> cpos, vpos;
    std::vector<std::string> cnames, vnames;
    std::vector<Q3> masses;
    for (int c = 0; c < m; ++c) {
        cnames.push_back(std::string(1, static_cast<char>('A' + c)));
        cpos.push_back({Q3(Rat(coord(rng), 4))});
    }
    int nv = nvd(rng);
    for (int v = 0; v < nv; ++v) {
        vnames.push_back("v" + std::to_string(v));
        vpos.push_back({Q3(Rat(vcoord(rng), 4))});
        masses.push_back(Q3(nmass(rng)));
    }
    return instance_from_embedding(Embedding::Kind::Line, cnames, cpos, vnames, masses, vpos);
}

}  // namespace fixtures
