#pragma once

#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "dvm/protocol.hpp"

namespace dvm {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Seeded sampler over small rational geometries: candidates on integer
// points, voter blocks on quarter-integer points with integer masses, on the
// line or the l1 plane. All downstream arithmetic stays exact.
inline MetricInstance random_instance(std::mt19937_64& rng, int m, bool allow_plane) {
    std::uniform_int_distribution<int> cpos(0, 12), vpos(-8, 56), nmass(1, 9), nvoters(2, 6),
        flip(0, 1);
    bool plane = allow_plane && flip(rng) == 1;
    int dims = plane ? 2 : 1;
    std::vector<std::vector<Q3>> cand_pos, voter_pos;
    std::vector<std::string> cnames, vnames;
    std::vector<Q3> masses;
    for (int c = 0; c < m; ++c) {
        cnames.push_back(std::string(1, static_cast<char>('A' + c)));
        std::vector<Q3> p;
        for (int d = 0; d < dims; ++d) p.push_back(Q3(cpos(rng)));
        cand_pos.push_back(std::move(p));
    }
    int nv = nvoters(rng);
    for (int v = 0; v < nv; ++v) {
        vnames.push_back("v" + std::to_string(v));
        std::vector<Q3> p;
        for (int d = 0; d < dims; ++d) p.push_back(Q3(Rat(vpos(rng), 4)));
        voter_pos.push_back(std::move(p));
        masses.push_back(Q3(nmass(rng)));
    }
    return instance_from_embedding(plane ? Embedding::Kind::L1Plane : Embedding::Kind::Line,
                                   cnames, cand_pos, vnames, masses, voter_pos);
}

struct McConfig {
    std::vector<int> ms = {3, 4, 5};  // candidate counts, cycled per sample
    int samples = 10000;
    std::uint64_t seed = 1;
    Q3 lambda, w;
    MatchPolicy policy = MatchPolicy::ByOrder;
    bool allow_plane = true;
    int jobs = 1;
};

struct McResult {
    int samples_run = 0;
    Q3 max_distortion;  // over bounded samples; argmax is the earliest attaining it
    int argmax_sample = -1;
    MetricInstance argmax_instance;
    bool any_unbounded = false;
    int first_unbounded_sample = -1;
    MetricInstance unbounded_instance;
};

// Deterministic under (seed, samples): every sample draws from its own
// splitmix-derived stream and the merge is order-independent, so the result
// does not depend on the job count.
inline McResult run_montecarlo(const McConfig& cfg) {
    auto run_one = [&](int k, McResult& acc) {
        std::mt19937_64 rng(splitmix64(cfg.seed ^ (0x51ED270B * static_cast<std::uint64_t>(k) + 1)));
        int m = cfg.ms[k % cfg.ms.size()];
        MetricInstance inst = random_instance(rng, m, cfg.allow_plane);
        ProtocolResult res = run_protocol(inst, {}, cfg.lambda, cfg.w, cfg.policy);
        ++acc.samples_run;
        if (res.distortion.unbounded) {
            if (!acc.any_unbounded || k < acc.first_unbounded_sample) {
                acc.first_unbounded_sample = k;
                acc.unbounded_instance = inst;
            }
            acc.any_unbounded = true;
            return;
        }
        if (acc.argmax_sample < 0 || res.distortion.value > acc.max_distortion) {
            acc.max_distortion = res.distortion.value;
            acc.argmax_sample = k;
            acc.argmax_instance = inst;
        }
    };

    int jobs = cfg.jobs < 1 ? 1 : cfg.jobs;
    std::vector<McResult> partial(jobs);
    if (jobs == 1) {
        for (int k = 0; k < cfg.samples; ++k) run_one(k, partial[0]);
    } else {
        std::vector<std::thread> pool;
        int chunk = (cfg.samples + jobs - 1) / jobs;
        for (int t = 0; t < jobs; ++t) {
            int k0 = t * chunk, k1 = std::min(cfg.samples, k0 + chunk);
            if (k0 < k1)
                pool.emplace_back([&, k0, k1, t] {
                    for (int k = k0; k < k1; ++k) run_one(k, partial[t]);
                });
        }
        for (auto& th : pool) th.join();
    }

    McResult out;
    for (const auto& p : partial) {
        out.samples_run += p.samples_run;
        if (p.any_unbounded &&
            (!out.any_unbounded || p.first_unbounded_sample < out.first_unbounded_sample)) {
            out.any_unbounded = true;
            out.first_unbounded_sample = p.first_unbounded_sample;
            out.unbounded_instance = p.unbounded_instance;
        }
        if (p.argmax_sample >= 0 &&
            (out.argmax_sample < 0 || p.max_distortion > out.max_distortion ||
             (p.max_distortion == out.max_distortion && p.argmax_sample < out.argmax_sample))) {
            out.max_distortion = p.max_distortion;
            out.argmax_sample = p.argmax_sample;
            out.argmax_instance = p.argmax_instance;
        }
    }
    return out;
}

}  // namespace dvm
