#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "dvm/lp.hpp"

namespace dvm {

// The two bilinear-relaxation cases: case 1 splits the population into nine
// intervals (|AC| <= |BC|), case 2 into seven (|AC| > |BC|). The interval
// masses are tied together by the coupling equalities, leaving free masses
// (p1, p2, p3, p6).
struct CaseSpec {
    int id = 1;
    int intervals = 9;

    static CaseSpec case1() { return {1, 9}; }
    static CaseSpec case2() { return {2, 7}; }
    static CaseSpec by_id(int id) {
        if (id == 1) return case1();
        if (id == 2) return case2();
        throw DomainError("case id must be 1 or 2");
    }

    // Mass-equality rows over (p1, p2, p3, p6):
    //   case 1:  2p1 + 4p2 + 2p3 + p6 = 1,  2p1 + 2p2 + p3 = 1/2
    //   case 2:  2p1 + 2p2 + 2p3 + p6 = 1,  2p1 + 2p2 + p3 = 1/2
    std::array<std::array<Rat, 4>, 2> mass_equalities() const {
        if (id == 1)
            return {{{Rat(2), Rat(4), Rat(2), Rat(1)}, {Rat(2), Rat(2), Rat(1), Rat(0)}}};
        return {{{Rat(2), Rat(2), Rat(2), Rat(1)}, {Rat(2), Rat(2), Rat(1), Rat(0)}}};
    }

    // Expands the free masses to the per-interval vector via the coupling
    // equalities (p5 = p1, p4 = p2, and the partner intervals of the
    // (C,B)-matching blocks).
    std::vector<Rat> full_masses(const std::array<Rat, 4>& p) const {
        const Rat &p1 = p[0], &p2 = p[1], &p3 = p[2], &p6 = p[3];
        if (id == 1) return {p1, p2, p3, p2, p1, p6, p2, p3, p2};
        return {p1, p2, p3, p2, p1, p6, p3};
    }
};

using PVertex = std::array<Rat, 4>;  // (p1, p2, p3, p6)

namespace certify_detail {

inline std::vector<PVertex> published_vertices(int case_id) {
    if (case_id == 1)
        return {{Rat(0), Rat(0), Rat(1, 2), Rat(0)},
                {Rat(0), Rat(1, 4), Rat(0), Rat(0)},
                {Rat(1, 4), Rat(0), Rat(0), Rat(1, 2)}};
    return {{Rat(0), Rat(0), Rat(1, 2), Rat(0)},
            {Rat(0), Rat(1, 4), Rat(0), Rat(1, 2)},
            {Rat(1, 4), Rat(0), Rat(0), Rat(1, 2)}};
}

}  // namespace certify_detail

// Enumerates the basic feasible solutions of the mass equalities (every way
// of zeroing two of the four free masses), dedupes, and checks the result
// against the published three-vertex lists.
inline std::vector<PVertex> polytope_vertices(const CaseSpec& spec) {
    auto eq = spec.mass_equalities();
    std::vector<PVertex> found;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            // Zero components i and j; solve the 2x2 system in the others.
            int a = -1, b = -1;
            for (int k = 0; k < 4; ++k)
                if (k != i && k != j) (a < 0 ? a : b) = k;
            Rat det = eq[0][a] * eq[1][b] - eq[0][b] * eq[1][a];
            if (det == 0) continue;
            Rat va = (Rat(1) * eq[1][b] - eq[0][b] * Rat(1, 2)) / det;
            Rat vb = (eq[0][a] * Rat(1, 2) - Rat(1) * eq[1][a]) / det;
            if (va < 0 || vb < 0) continue;
            PVertex v{Rat(0), Rat(0), Rat(0), Rat(0)};
            v[a] = va;
            v[b] = vb;
            if (std::find(found.begin(), found.end(), v) == found.end()) found.push_back(v);
        }
    std::sort(found.begin(), found.end());
    auto expected = certify_detail::published_vertices(spec.id);
    std::sort(expected.begin(), expected.end());
    if (found != expected)
        throw VertexMismatch("enumerated vertices disagree with the published list for case " +
                             std::to_string(spec.id));
    return expected;
}

// The vertex LP: variables {X_i, Y_i, Z_i, M_X, M_Y, M_XY}, all free, with
// every constraint an explicit named row so dual multipliers can be audited
// line by line. All rows are homogeneous: the feasible set is a cone, so the
// optimum is either exactly 0 or unbounded below.
inline LinearProgram build_case_lp(const CaseSpec& spec, const PVertex& vertex, const Rat& R) {
    int n = spec.intervals;
    LinearProgram lp;
    auto X = [&](int i) { return i - 1; };
    auto Y = [&](int i) { return n + i - 1; };
    auto Z = [&](int i) { return 2 * n + i - 1; };
    for (int i = 1; i <= n; ++i) lp.add_var("X" + std::to_string(i), true);
    for (int i = 1; i <= n; ++i) lp.add_var("Y" + std::to_string(i), true);
    for (int i = 1; i <= n; ++i) lp.add_var("Z" + std::to_string(i), true);
    int MX = lp.add_var("MX", true);
    int MY = lp.add_var("MY", true);
    int MXY = lp.add_var("MXY", true);

    auto row = [&](std::initializer_list<std::pair<int, Rat>> terms, std::string id) {
        std::vector<Rat> a(lp.num_vars, Rat(0));
        for (const auto& [j, c] : terms) a[j] += c;
        lp.add_row(std::move(a), Rel::GE, Rat(0), std::move(id));
    };

    const Rat half(1, 2);
    for (int i = 1; i <= n; ++i) {
        std::string s = std::to_string(i);
        row({{MX, Rat(1)}, {X(i), Rat(-1)}}, "MX_minus_X" + s + "_ge_0");
        row({{MX, Rat(1)}, {X(i), Rat(1)}}, "MX_plus_X" + s + "_ge_0");
        row({{MY, Rat(1)}, {Y(i), Rat(-1)}}, "MY_minus_Y" + s + "_ge_0");
        row({{MY, Rat(1)}, {Y(i), Rat(1)}}, "MY_plus_Y" + s + "_ge_0");
        row({{MXY, Rat(1)}, {X(i), Rat(-1)}, {Y(i), Rat(-1)}}, "MXY_minus_XY" + s + "_ge_0");
        row({{MXY, Rat(1)}, {X(i), Rat(1)}, {Y(i), Rat(1)}}, "MXY_plus_XY" + s + "_ge_0");
        row({{Z(i), Rat(1)}, {MX, -half}, {X(i), -half}}, "Z" + s + "_ge_half_MX_plus_X");
        row({{Z(i), Rat(1)}, {MY, -half}, {Y(i), half}}, "Z" + s + "_ge_half_MY_minus_Y");
        row({{Z(i), Rat(1)}, {MXY, -half}, {X(i), -half}, {Y(i), half}},
            "Z" + s + "_ge_half_MXY_plus_X_minus_Y");
        row({{Z(i), Rat(1)}}, "Z" + s + "_ge_0");
    }
    for (int i = 1; i < n; ++i) {
        row({{X(i), Rat(1)}, {X(i + 1), Rat(-1)}},
            "X" + std::to_string(i) + "_ge_X" + std::to_string(i + 1));
        row({{Y(i + 1), Rat(1)}, {Y(i), Rat(-1)}},
            "Y" + std::to_string(i + 1) + "_ge_Y" + std::to_string(i));
    }
    if (spec.id == 1) {
        row({{X(3), Rat(1)}}, "X3_ge_0");
        row({{Y(5), Rat(1)}}, "Y5_ge_0");
        row({{X(1), Rat(1)}, {X(5), Rat(1)}}, "X1_plus_X5_ge_0");
        row({{X(2), Rat(1)}, {X(4), Rat(1)}}, "X2_plus_X4_ge_0");
        row({{Y(2), Rat(1)}, {Y(9), Rat(1)}}, "Y2_plus_Y9_ge_0");
        row({{Y(3), Rat(1)}, {Y(8), Rat(1)}}, "Y3_plus_Y8_ge_0");
        row({{Y(4), Rat(1)}, {Y(7), Rat(1)}}, "Y4_plus_Y7_ge_0");
    } else {
        row({{X(4), Rat(1)}}, "X4_ge_0");
        row({{Y(4), Rat(1)}}, "Y4_ge_0");
        // Implied by Y4 >= 0 and monotonicity; present because the published
        // vertex-3 certificate cites it directly.
        row({{Y(5), Rat(1)}}, "Y5_ge_0");
        row({{X(1), Rat(1)}, {X(5), Rat(1)}}, "X1_plus_X5_ge_0");
        row({{Y(3), Rat(1)}, {Y(7), Rat(1)}}, "Y3_plus_Y7_ge_0");
    }

    std::vector<Rat> masses = spec.full_masses(vertex);
    for (int i = 1; i <= n; ++i) {
        const Rat& p = masses[i - 1];
        if (p == 0) continue;
        lp.set_objective(X(i), p);
        lp.set_objective(Y(i), p * (R + 1));
        lp.set_objective(Z(i), p * R);
    }
    return lp;
}

struct CertItem {
    Rat multiplier;
    std::string row_id;
};

// The dual certificates, transcribed verbatim: nonnegative multipliers whose
// weighted constraint rows sum exactly to the R=2 objective of their vertex.
inline std::vector<CertItem> dual_certificate(int case_id, int vertex_index) {
    const Rat h(1, 2), q(1, 4);
    if (case_id == 1) {
        switch (vertex_index) {
            case 0:
                return {{h, "MXY_plus_XY8_ge_0"},
                        {Rat(1), "Z3_ge_half_MXY_plus_X_minus_Y"},
                        {Rat(1), "Z8_ge_0"},
                        {Rat(1), "Y3_plus_Y8_ge_0"},
                        {Rat(1), "X3_ge_0"}};
            case 1:
                return {{q, "MY_plus_Y4_ge_0"},
                        {q, "MXY_plus_XY7_ge_0"},
                        {q, "MXY_plus_XY9_ge_0"},
                        {h, "Z2_ge_half_MXY_plus_X_minus_Y"},
                        {h, "Z4_ge_half_MXY_plus_X_minus_Y"},
                        {h, "Z7_ge_half_MY_minus_Y"},
                        {h, "Z9_ge_0"},
                        {h, "X2_plus_X4_ge_0"},
                        {h, "Y2_plus_Y9_ge_0"},
                        {q, "Y4_plus_Y7_ge_0"}};
            case 2:
                return {{h, "MY_plus_Y1_ge_0"},
                        {h, "MXY_plus_XY6_ge_0"},
                        {h, "Z1_ge_half_MXY_plus_X_minus_Y"},
                        {h, "Z5_ge_half_MXY_plus_X_minus_Y"},
                        {Rat(1), "Z6_ge_half_MY_minus_Y"},
                        {h, "Y6_ge_Y5"},
                        {h, "X1_plus_X5_ge_0"},
                        {Rat(1), "Y5_ge_0"}};
        }
    } else if (case_id == 2) {
        switch (vertex_index) {
            case 0:
                return {{h, "MX_plus_X7_ge_0"},
                        {Rat(1), "Z3_ge_half_MX_plus_X"},
                        {Rat(1), "X3_ge_X4"},
                        {Rat(3, 2), "Y3_plus_Y7_ge_0"},
                        {Rat(1), "X4_ge_0"},
                        {Rat(1), "Z7_ge_0"}};
            case 1:
                return {{h, "MY_plus_Y2_ge_0"},
                        {h, "MXY_plus_XY6_ge_0"},
                        {h, "Z2_ge_half_MXY_plus_X_minus_Y"},
                        {h, "Z4_ge_half_MXY_plus_X_minus_Y"},
                        {Rat(1), "Z6_ge_half_MY_minus_Y"},
                        {h, "X2_ge_X3"},
                        {h, "X3_ge_X4"},
                        {h, "Y5_ge_Y4"},
                        {h, "Y6_ge_Y5"},
                        {Rat(1), "X4_ge_0"},
                        {Rat(1), "Y4_ge_0"}};
            case 2:
                return {{h, "MY_plus_Y1_ge_0"},
                        {h, "MXY_plus_XY6_ge_0"},
                        {h, "Z1_ge_half_MXY_plus_X_minus_Y"},
                        {h, "Z5_ge_half_MXY_plus_X_minus_Y"},
                        {Rat(1), "Z6_ge_half_MY_minus_Y"},
                        {h, "Y6_ge_Y5"},
                        {h, "X1_plus_X5_ge_0"},
                        {Rat(1), "Y5_ge_0"}};
        }
    }
    throw DomainError("no certificate for case " + std::to_string(case_id) + " vertex " +
                      std::to_string(vertex_index));
}

struct CertificateAudit {
    bool ok = false;
    std::string detail;                 // first discrepancy, empty when ok
    std::vector<Rat> combined;          // weighted row sum, per variable
};

// Purely symbolic check: multipliers are nonnegative and their weighted
// constraint rows sum coefficient-wise to the objective (all M-terms cancel).
// No solving involved.
inline CertificateAudit check_dual_certificate(const LinearProgram& lp,
                                               const std::vector<CertItem>& cert) {
    CertificateAudit audit;
    audit.combined.assign(lp.num_vars, Rat(0));
    for (const auto& item : cert) {
        if (item.multiplier < 0) {
            audit.detail = "negative multiplier on " + item.row_id;
            return audit;
        }
        int r = lp.row_index(item.row_id);
        if (r < 0) {
            audit.detail = "unknown constraint " + item.row_id;
            return audit;
        }
        for (int j = 0; j < lp.num_vars; ++j)
            if (lp.rows[r].a[j] != 0) audit.combined[j] += item.multiplier * lp.rows[r].a[j];
    }
    for (int j = 0; j < lp.num_vars; ++j)
        if (audit.combined[j] != lp.objective[j]) {
            audit.detail = "coefficient mismatch on " + lp.var_names[j] + ": " +
                           to_string(audit.combined[j]) + " vs " + to_string(lp.objective[j]);
            return audit;
        }
    audit.ok = true;
    return audit;
}

struct VertexReport {
    PVertex vertex;
    LpStatus status = LpStatus::Optimal;
    Rat optimum;   // 0 when Optimal; the cone admits no other finite value
    bool dual_ok = false;
};

inline VertexReport certify_vertex(const CaseSpec& spec, int vertex_index, const Rat& R) {
    auto vertices = polytope_vertices(spec);
    VertexReport rep;
    rep.vertex = vertices.at(vertex_index);
    LinearProgram lp = build_case_lp(spec, rep.vertex, R);
    LpSolution sol = lp_solve(lp);
    rep.status = sol.status;
    if (sol.status == LpStatus::Optimal) rep.optimum = sol.objective;
    rep.dual_ok = check_dual_certificate(lp, dual_certificate(spec.id, vertex_index)).ok;
    return rep;
}

struct RatInterval {
    Rat lo, hi;
};

namespace certify_detail {

// True when every vertex LP of the case is bounded (optimum 0) at this R.
inline bool all_vertices_bounded(const CaseSpec& spec, const std::vector<PVertex>& vertices,
                                 const Rat& R) {
    for (const auto& v : vertices)
        if (lp_solve(build_case_lp(spec, v, R)).status != LpStatus::Optimal) return false;
    return true;
}

}  // namespace certify_detail

// Bisection for the critical R of a case: the smallest R at which every
// vertex LP stays nonnegative. Boundedness is monotone in R because
// Y_i + Z_i >= 0 holds throughout the feasible cone; the scan still verifies
// what it saw and falls back to a dense grid if the record were inconsistent.
inline RatInterval minimal_r(const CaseSpec& spec) {
    auto vertices = polytope_vertices(spec);
    const Rat width(1, 1024);
    Rat lo(1), hi(4);
    std::vector<std::pair<Rat, bool>> seen;
    auto probe = [&](const Rat& r) {
        bool ok = certify_detail::all_vertices_bounded(spec, vertices, r);
        seen.push_back({r, ok});
        return ok;
    };
    if (probe(lo)) return {lo, lo};
    if (!probe(hi)) return {hi, hi};
    while (hi - lo > width) {
        Rat mid = (lo + hi) / 2;
        if (probe(mid))
            hi = mid;
        else
            lo = mid;
    }
    bool monotone = true;
    for (const auto& [r1, ok1] : seen)
        for (const auto& [r2, ok2] : seen)
            if (r1 < r2 && ok1 && !ok2) monotone = false;
    if (!monotone) {
        // Dense fallback: first bounded grid point from the left.
        for (Rat r = 1; r <= 4; r += width)
            if (certify_detail::all_vertices_bounded(spec, vertices, r)) return {r - width, r};
    }
    return {lo, hi};
}

}  // namespace dvm
