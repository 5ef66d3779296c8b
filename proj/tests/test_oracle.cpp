#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "dvm/oracle.hpp"
#include "support/fixtures.hpp"

using namespace dvm;

namespace {

Rat rand_rat(std::mt19937_64& rng, int lo, int hi, int den = 2) {
    std::uniform_int_distribution<int> d(lo * den, hi * den);
    return Rat(d(rng), den);
}

// Population of q equal-mass blocks with small rational preferences.
std::vector<XYBlock> random_blocks(std::mt19937_64& rng, int q) {
    std::vector<XYBlock> blocks;
    for (int i = 0; i < q; ++i)
        blocks.push_back({Rat(1, q), rand_rat(rng, -3, 3), rand_rat(rng, -3, 3), std::nullopt});
    return blocks;
}

Rat expected_zmin(const std::vector<XYBlock>& blocks) {
    Norms n = Norms::of(blocks);
    Rat e = 0;
    for (const auto& b : blocks) e += b.mass * z_min(b.x, b.y, n);
    return e;
}

}  // namespace

TEST_CASE("z_min at spot values", "[oracle]") {
    CHECK(z_min(Rat(0), Rat(0), {Rat(0), Rat(0), Rat(0)}) == Rat(0));
    CHECK(z_min(Rat(1), Rat(0), {Rat(1), Rat(0), Rat(1)}) == Rat(1));
    CHECK(z_min(Rat(1), Rat(-2), {Rat(1), Rat(2), Rat(1)}) == Rat(2));
    CHECK_THROWS_AS(z_min(Rat(5), Rat(0), {Rat(1), Rat(0), Rat(1)}), NormsDoNotDominate);
}

TEST_CASE("realize_metric places a single voter at A", "[oracle]") {
    std::vector<XYBlock> blocks = {{Rat(1), Rat(1), Rat(0), Rat(1)}};
    MetricInstance inst = realize_metric(blocks);
    CHECK(inst.cand_dist[0][2] == Q3(1));  // d(A,C) = ||X||
    CHECK(inst.cand_dist[1][2] == Q3(0));
    CHECK(inst.cand_dist[0][1] == Q3(1));
    CHECK(inst.voters[0].dist == std::vector<Q3>{Q3(0), Q3(1), Q3(1)});
    CHECK(validate_metric(inst).empty());
}

TEST_CASE("realizability holds exactly at and above z_min", "[oracle]") {
    std::mt19937_64 rng(61);
    int tested_below = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<XYBlock> blocks = random_blocks(rng, 4);
        Norms n = Norms::of(blocks);
        for (auto& b : blocks) b.z = z_min(b.x, b.y, n) + rand_rat(rng, 0, 2);
        CHECK(validate_metric(realize_metric(blocks)).empty());

        // Tight choice z = z_min is still realizable.
        for (auto& b : blocks) b.z = z_min(b.x, b.y, n);
        CHECK(validate_metric(realize_metric(blocks)).empty());

        // Dropping any z below z_min breaks a triangle (when it can drop).
        int pick = -1;
        for (int i = 0; i < 4; ++i)
            if (z_min(blocks[i].x, blocks[i].y, n) > 0) pick = i;
        if (pick < 0) continue;
        ++tested_below;
        std::vector<XYBlock> bad = blocks;
        Rat zm = z_min(bad[pick].x, bad[pick].y, n);
        bad[pick].z = zm / 2;
        CHECK_THROWS_AS(realize_metric(bad), InfeasibleZ);
        MetricInstance inst;  // same embedding, built by hand to bypass the guard
        inst.candidates = {"A", "B", "C"};
        inst.cand_dist = {{Q3(0), Q3(n.mxy), Q3(n.mx)},
                          {Q3(n.mxy), Q3(0), Q3(n.my)},
                          {Q3(n.mx), Q3(n.my), Q3(0)}};
        for (const auto& b : bad)
            inst.voters.push_back({"v", Q3(b.mass), {Q3(*b.z - b.x), Q3(*b.z + b.y), Q3(*b.z)}});
        CHECK_FALSE(validate_metric(inst).empty());
    }
    CHECK(tested_below > 100);
}

TEST_CASE("phi at spot values", "[oracle]") {
    CHECK(phi(Rat(2), {{Rat(1), Rat(0), Rat(0), std::nullopt}}) == Rat(0));
    CHECK(phi(Rat(2), {{Rat(1), Rat(-1), Rat(0), std::nullopt}}) == Rat(-1));
    // Blocks of the first case-1 vertex at the LP optimum.
    std::vector<XYBlock> v1 = {{Rat(1, 2), Rat(0), Rat(-1), std::nullopt},
                               {Rat(1, 2), Rat(-2), Rat(1), std::nullopt}};
    CHECK(phi(Rat(2), v1) == Rat(0));
}

TEST_CASE("counter-monotone coupling", "[oracle]") {
    std::vector<std::pair<Rat, Rat>> xs = {{Rat(1), Rat(1, 2)}, {Rat(-1), Rat(1, 2)}};
    std::vector<std::pair<Rat, Rat>> ys = {{Rat(-2), Rat(1, 2)}, {Rat(2), Rat(1, 2)}};
    auto blocks = counter_monotone_couple(xs, ys);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].x == Rat(1));
    CHECK(blocks[0].y == Rat(-2));
    CHECK(blocks[1].x == Rat(-1));
    CHECK(blocks[1].y == Rat(2));
    CHECK(expected_zmin(blocks) == Rat(1));

    std::vector<XYBlock> comono = {{Rat(1, 2), Rat(1), Rat(2), std::nullopt},
                                   {Rat(1, 2), Rat(-1), Rat(-2), std::nullopt}};
    CHECK(expected_zmin(comono) == Rat(3, 2));

    auto single = counter_monotone_couple({{Rat(0), Rat(1)}}, {{Rat(0), Rat(1)}});
    REQUIRE(single.size() == 1);
    CHECK(single[0].mass == Rat(1));

    CHECK_THROWS_AS(counter_monotone_couple({{Rat(0), Rat(1)}}, {{Rat(0), Rat(1, 2)}}),
                    MassMismatch);
}

TEST_CASE("coupling optimality against random couplings", "[oracle]") {
    std::mt19937_64 rng(77);
    const int q = 6;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rat> xv, yv;
        for (int i = 0; i < q; ++i) {
            xv.push_back(rand_rat(rng, -3, 3));
            yv.push_back(rand_rat(rng, -3, 3));
        }
        std::vector<std::pair<Rat, Rat>> xs, ys;
        for (int i = 0; i < q; ++i) {
            xs.push_back({xv[i], Rat(1, q)});
            ys.push_back({yv[i], Rat(1, q)});
        }
        Rat R(2);
        Rat cm = phi(R, counter_monotone_couple(xs, ys));
        std::vector<int> perm(q);
        std::iota(perm.begin(), perm.end(), 0);
        for (int k = 0; k < 30; ++k) {
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<XYBlock> coupled;
            for (int i = 0; i < q; ++i)
                coupled.push_back({Rat(1, q), xv[i], yv[perm[i]], std::nullopt});
            CHECK(cm <= phi(R, coupled));
        }
    }
}

TEST_CASE("submodular envelope", "[oracle]") {
    CHECK(submodular_envelope(Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)) +
              submodular_envelope(Rat(0), Rat(0), Rat(0), Rat(1), Rat(1)) ==
          submodular_envelope(Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)) +
              submodular_envelope(Rat(0), Rat(0), Rat(0), Rat(1), Rat(0)));
    CHECK(submodular_envelope(Rat(5), Rat(0), Rat(0), Rat(0), Rat(0)) == Rat(5));

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        Rat a = rand_rat(rng, -4, 4), b = rand_rat(rng, -4, 4), c = rand_rat(rng, -4, 4);
        Rat x1 = rand_rat(rng, -4, 4), x2 = rand_rat(rng, -4, 4);
        Rat y1 = rand_rat(rng, -4, 4), y2 = rand_rat(rng, -4, 4);
        if (x2 < x1) std::swap(x1, x2);
        if (y2 < y1) std::swap(y1, y2);
        CHECK(submodular_envelope(a, b, c, x1, y1) + submodular_envelope(a, b, c, x2, y2) <=
              submodular_envelope(a, b, c, x1, y2) + submodular_envelope(a, b, c, x2, y1));
    }
}

TEST_CASE("compacting a pair", "[oracle]") {
    XYBlock b{Rat(1, 2), Rat(1), Rat(-1), std::nullopt};
    auto [c1, c2] = compact_pair(b, b);
    CHECK(c1.x == b.x);
    CHECK(c1.y == b.y);

    auto [d1, d2] = compact_pair({Rat(1, 2), Rat(2), Rat(0), std::nullopt},
                                 {Rat(1, 2), Rat(0), Rat(2), std::nullopt});
    CHECK(d1.x == Rat(1));
    CHECK(d1.y == Rat(1));
    CHECK(Norms::of({d1, d2}).mxy == Rat(2));
    CHECK(expected_zmin({d1, d2}) <= expected_zmin({{Rat(1, 2), Rat(2), Rat(0), std::nullopt},
                                                    {Rat(1, 2), Rat(0), Rat(2), std::nullopt}}));

    std::vector<XYBlock> mixed = {{Rat(1, 2), Rat(1), Rat(-1), std::nullopt},
                                  {Rat(1, 2), Rat(-1), Rat(1), std::nullopt}};
    CHECK(phi(Rat(2), mixed) == Rat(1));
    auto [e1, e2] = compact_pair(mixed[0], mixed[1]);
    CHECK(phi(Rat(2), {e1, e2}) == Rat(0));

    CHECK_THROWS_AS(compact_pair({Rat(1, 2), Rat(0), Rat(0), std::nullopt},
                                 {Rat(1, 3), Rat(0), Rat(0), std::nullopt}),
                    MassMismatch);
}

TEST_CASE("compaction never increases phi", "[oracle]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<XYBlock> blocks = random_blocks(rng, 5);
        Rat R = Rat(1) + rand_rat(rng, 0, 3, 4);
        std::uniform_int_distribution<int> pick(0, 4);
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Rat before = phi(R, blocks);
        auto [c1, c2] = compact_pair(blocks[i], blocks[j]);
        std::vector<XYBlock> after = blocks;
        after[i] = c1;
        after[j] = c2;
        CHECK(phi(R, after) <= before);
    }
}

TEST_CASE("shifting x or y down never increases phi", "[oracle]") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<XYBlock> blocks = random_blocks(rng, 5);
        Rat R = Rat(1) + rand_rat(rng, 0, 3, 4);
        Rat t = rand_rat(rng, 0, 3);
        Rat before = phi(R, blocks);
        std::vector<XYBlock> xshift = blocks, yshift = blocks;
        for (auto& b : xshift) b.x -= t;
        for (auto& b : yshift) b.y -= t;
        CHECK(phi(R, xshift) <= before);
        CHECK(phi(R, yshift) <= before);
    }
}

TEST_CASE("worst case distortion of the shared two-candidate profile", "[oracle]") {
    auto [inst, ties] = fixtures::two_candidate_gap();
    auto pd = derive_deliberations(inst, ties, MatchPolicy::ByOrder);

    WorstCase ab = worst_case_distortion(pd.profile, pd.records, 0, 1);
    REQUIRE_FALSE(ab.unbounded);
    CHECK(ab.ratio == Rat(2));
    CHECK(verify_kkt(ab.lp, ab.solution));

    WorstCase ba = worst_case_distortion(pd.profile, pd.records, 1, 0);
    REQUIRE_FALSE(ba.unbounded);
    CHECK(ba.ratio == Rat(2));
}

TEST_CASE("worst case degenerate directions", "[oracle]") {
    MetricInstance one = instance_from_embedding(Embedding::Kind::Line, {"A", "B"},
                                                 {{Q3(0)}, {Q3(2)}}, {"v"}, {Q3(1)}, {{Q3(0)}});
    auto pd = derive_deliberations(one, {}, MatchPolicy::ByOrder);
    WorstCase wc = worst_case_distortion(pd.profile, pd.records, 0, 1);
    REQUIRE_FALSE(wc.unbounded);
    CHECK(wc.ratio == Rat(1));

    MetricInstance pro_b = instance_from_embedding(Embedding::Kind::Line, {"A", "B"},
                                                   {{Q3(0)}, {Q3(2)}}, {"v"}, {Q3(1)}, {{Q3(2)}});
    auto pd2 = derive_deliberations(pro_b, {}, MatchPolicy::ByOrder);
    WorstCase wc2 = worst_case_distortion(pd2.profile, pd2.records, 0, 1);
    CHECK(wc2.unbounded);
    CHECK(verify_kkt(wc2.lp, wc2.solution));  // feasible point + improving ray
}

TEST_CASE("instance ratios never exceed the oracle", "[oracle]") {
    std::mt19937_64 rng(31337);
    int usable = 0;
    for (int trial = 0; trial < 40; ++trial) {
        MetricInstance inst = fixtures::random_line_instance(rng, 3, 4);
        auto pd = derive_deliberations(inst, {}, MatchPolicy::ByOrder);
        int ref = optimal_candidate(inst);
        Q3 sc_ref = social_cost(inst, ref);
        if (sc_ref.is_zero()) continue;
        ++usable;
        for (int winner = 0; winner < 3; ++winner) {
            if (winner == ref) continue;
            WorstCase wc = worst_case_distortion(pd.profile, pd.records, winner, ref);
            Q3 inst_ratio = social_cost(inst, winner) / sc_ref;
            if (!wc.unbounded) CHECK(inst_ratio <= Q3(wc.ratio));
        }
    }
    CHECK(usable > 20);
}
