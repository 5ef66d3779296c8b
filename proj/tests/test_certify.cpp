#include <catch2/catch_amalgamated.hpp>

#include "dvm/certify.hpp"

using namespace dvm;

TEST_CASE("vertex enumeration matches the published lists", "[certify]") {
    auto v1 = polytope_vertices(CaseSpec::case1());
    REQUIRE(v1.size() == 3);
    CHECK(v1[0] == PVertex{Rat(0), Rat(0), Rat(1, 2), Rat(0)});
    CHECK(v1[1] == PVertex{Rat(0), Rat(1, 4), Rat(0), Rat(0)});
    CHECK(v1[2] == PVertex{Rat(1, 4), Rat(0), Rat(0), Rat(1, 2)});

    auto v2 = polytope_vertices(CaseSpec::case2());
    REQUIRE(v2.size() == 3);
    CHECK(v2[0] == PVertex{Rat(0), Rat(0), Rat(1, 2), Rat(0)});
    CHECK(v2[1] == PVertex{Rat(0), Rat(1, 4), Rat(0), Rat(1, 2)});
    CHECK(v2[2] == PVertex{Rat(1, 4), Rat(0), Rat(0), Rat(1, 2)});

    for (const auto& vs : {v1, v2})
        for (const auto& p : vs) CHECK(2 * p[0] + 2 * p[1] + p[2] == Rat(1, 2));

    for (int cid : {1, 2}) {
        CaseSpec spec = CaseSpec::by_id(cid);
        for (const auto& v : polytope_vertices(spec)) {
            auto masses = spec.full_masses(v);
            Rat total = 0, first_five = 0;
            for (std::size_t i = 0; i < masses.size(); ++i) {
                total += masses[i];
                if (i < 5) first_five += masses[i];
            }
            CHECK(total == Rat(1));
            CHECK(first_five == Rat(1, 2));
        }
    }
}

TEST_CASE("vertex LP objectives", "[certify]") {
    CaseSpec c1 = CaseSpec::case1();
    LinearProgram lp = build_case_lp(c1, {Rat(0), Rat(0), Rat(1, 2), Rat(0)}, Rat(2));
    // Phi_2 = 1/2 (X3+X8) + 3/2 (Y3+Y8) + (Z3+Z8); everything else zeroed out.
    int n = 9;
    for (int i = 1; i <= n; ++i) {
        Rat expect = (i == 3 || i == 8) ? Rat(1, 2) : Rat(0);
        CHECK(lp.objective[i - 1] == expect);                  // X_i
        CHECK(lp.objective[n + i - 1] == 3 * expect);          // Y_i
        CHECK(lp.objective[2 * n + i - 1] == 2 * expect);      // Z_i
    }

    CaseSpec c2 = CaseSpec::case2();
    LinearProgram lp2 = build_case_lp(c2, {Rat(1, 4), Rat(0), Rat(0), Rat(1, 2)}, Rat(2));
    int n2 = 7;
    auto coeff = [&](int var) { return lp2.objective[var]; };
    CHECK(coeff(0) == Rat(1, 4));            // X1
    CHECK(coeff(4) == Rat(1, 4));            // X5
    CHECK(coeff(5) == Rat(1, 2));            // X6
    CHECK(coeff(n2 + 0) == Rat(3, 4));       // Y1
    CHECK(coeff(n2 + 4) == Rat(3, 4));       // Y5
    CHECK(coeff(n2 + 5) == Rat(3, 2));       // Y6
    CHECK(coeff(2 * n2 + 0) == Rat(1, 2));   // Z1
    CHECK(coeff(2 * n2 + 4) == Rat(1, 2));   // Z5
    CHECK(coeff(2 * n2 + 5) == Rat(1));      // Z6
    CHECK(coeff(1) == Rat(0));               // zero-mass intervals drop out
}

TEST_CASE("all six certificates hold at R=2", "[certify]") {
    for (int cid : {1, 2}) {
        CaseSpec spec = CaseSpec::by_id(cid);
        for (int v = 0; v < 3; ++v) {
            VertexReport rep = certify_vertex(spec, v, Rat(2));
            INFO("case " << cid << " vertex " << v);
            CHECK(rep.status == LpStatus::Optimal);
            CHECK(rep.optimum == Rat(0));
            CHECK(rep.dual_ok);
        }
    }
}

TEST_CASE("below the critical R every vertex cone dives", "[certify]") {
    for (int cid : {1, 2}) {
        CaseSpec spec = CaseSpec::by_id(cid);
        for (int v = 0; v < 3; ++v) {
            VertexReport rep = certify_vertex(spec, v, Rat(19, 10));
            INFO("case " << cid << " vertex " << v);
            CHECK(rep.status == LpStatus::Unbounded);
            CHECK_FALSE(rep.dual_ok);  // the R=2 identity cannot match a different objective
        }
    }
}

TEST_CASE("certificate audit is purely symbolic", "[certify]") {
    CaseSpec spec = CaseSpec::case1();
    auto vertices = polytope_vertices(spec);
    for (int v = 0; v < 3; ++v) {
        LinearProgram lp = build_case_lp(spec, vertices[v], Rat(2));
        auto audit = check_dual_certificate(lp, dual_certificate(1, v));
        INFO(audit.detail);
        CHECK(audit.ok);
    }
    // Perturbing any multiplier breaks the identity.
    LinearProgram lp = build_case_lp(spec, vertices[0], Rat(2));
    auto cert = dual_certificate(1, 0);
    cert[0].multiplier += Rat(1, 7);
    CHECK_FALSE(check_dual_certificate(lp, cert).ok);
    cert = dual_certificate(1, 0);
    cert[1].row_id = "Z4_ge_0";
    CHECK_FALSE(check_dual_certificate(lp, cert).ok);
}

TEST_CASE("bisection brackets the critical R of both cases", "[certify]") {
    for (int cid : {1, 2}) {
        RatInterval r = minimal_r(CaseSpec::by_id(cid));
        INFO("case " << cid);
        CHECK(r.hi - r.lo <= Rat(1, 1024));
        CHECK(r.lo < Rat(2));
        CHECK(Rat(2) <= r.hi);
    }
}
