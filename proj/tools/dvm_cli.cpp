// Command-line front end: protocol runs, worst-case oracle queries,
// certificate verification, lower-bound generation, heatmap sweeps and the
// Monte Carlo harness. Exact scalars cross this boundary as text; floats are
// printed only as approximations.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dvm/bounds.hpp"
#include "dvm/certify.hpp"
#include "dvm/instance_io.hpp"
#include "dvm/montecarlo.hpp"
#include "dvm/oracle.hpp"
#include "dvm/protocol.hpp"

namespace {

using namespace dvm;

constexpr int kCheckFailed = 6;  // a verification-style subcommand said "no"

std::string approx(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string show(const Q3& x) { return to_string(x) + " (~" + approx(x.to_double()) + ")"; }

std::string show(const Rat& x) { return to_string(x) + " (~" + approx(to_double(x)) + ")"; }

Q3 scalar_arg(const std::string& text) { return parse_scalar(text); }

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw FileNotFound("cannot write '" + path + "'");
    out << content;
}

struct RunArgs {
    std::string instance_path;
    std::string lambda_text, w_text;  // empty = canonical
    std::string policy = "by-order";
    std::string select = "min-index";
    std::string format = "text";
};

std::pair<Q3, Q3> resolve_params(const std::string& lambda_text, const std::string& w_text) {
    auto [lambda, w] = canonical_params();
    if (!lambda_text.empty()) lambda = scalar_arg(lambda_text);
    if (!w_text.empty()) w = scalar_arg(w_text);
    return {lambda, w};
}

int cmd_run(const RunArgs& args) {
    LoadedInstance li = load_instance(args.instance_path);
    auto [lambda, w] = resolve_params(args.lambda_text, args.w_text);
    MatchPolicy policy = parse_policy(args.policy);
    ProtocolResult res = run_protocol(li.instance, li.ties, lambda, w, policy,
                                      policy == MatchPolicy::Explicit ? &li.matchings : nullptr);
    const MetricInstance& inst = li.instance;
    const Tournament& t = res.tournament;
    OrdinalProfile profile = derive_profile(inst, li.ties);
    bool csv = args.format == "csv";

    std::ostringstream os;
    if (csv) {
        os << "x,y,size,win_mass,score,f,score_float,f_float\n";
    } else {
        os << "lambda = " << show(lambda) << "\nw = " << show(w) << "\n";
    }
    for (int x = 0; x < t.m; ++x)
        for (int y = 0; y < t.m; ++y) {
            if (x == y) continue;
            const DeliberationRecord& rec = t.records[Tournament::pair_index(x, y, t.m)];
            Q3 win = rec.matching.x == x ? rec.win_x : rec.win_y;
            if (csv) {
                os << inst.candidates[x] << ',' << inst.candidates[y] << ','
                   << to_string(profile.size[x][y]) << ',' << to_string(win) << ','
                   << to_string(t.score[x][y]) << ',' << to_string(t.f[x][y]) << ','
                   << approx(t.score[x][y].to_double()) << ',' << approx(t.f[x][y].to_double())
                   << '\n';
            } else {
                os << "pair " << inst.candidates[x] << ">" << inst.candidates[y] << ": |"
                   << inst.candidates[x] << inst.candidates[y] << "| = "
                   << show(profile.size[x][y]) << "  W = " << show(win)
                   << "  score = " << show(t.score[x][y]) << "  f = " << show(t.f[x][y]) << '\n';
            }
        }
    auto line = [&](const std::string& s) { os << (csv ? "# " : "") << s << '\n'; };
    std::string members;
    for (int c : res.wus) members += (members.empty() ? "" : " ") + inst.candidates[c];
    line("wus: " + members);
    if (args.select == "all") {
        for (int c : res.wus) {
            Distortion d = distortion_of(inst, c, res.optimal);
            line("member " + inst.candidates[c] + " distortion: " +
                 (d.unbounded ? "UNBOUNDED" : show(d.value)));
        }
    }
    line("winner: " + inst.candidates[res.winner]);
    line("optimal: " + inst.candidates[res.optimal]);
    for (int c = 0; c < inst.num_candidates(); ++c)
        line("sc " + inst.candidates[c] + ": " + show(social_cost(inst, c)));
    line("distortion: " +
         (res.distortion.unbounded ? std::string("UNBOUNDED") : show(res.distortion.value)));
    std::cout << os.str();
    return 0;
}

struct OracleArgs {
    std::string instance_path, winner, ref;
    std::string policy = "by-order";
    std::string dump_lp;
    bool witness = false;
};

int cmd_oracle(const OracleArgs& args) {
    LoadedInstance li = load_instance(args.instance_path);
    const MetricInstance& inst = li.instance;
    int winner = inst.candidate_index(args.winner);
    int ref = inst.candidate_index(args.ref);
    if (winner < 0 || ref < 0) throw DomainError("unknown candidate in --winner/--ref");
    MatchPolicy policy = parse_policy(args.policy);
    auto pd = derive_deliberations(inst, li.ties, policy,
                                   policy == MatchPolicy::Explicit ? &li.matchings : nullptr);
    WorstCase wc = worst_case_distortion(pd.profile, pd.records, winner, ref);
    if (!args.dump_lp.empty()) write_output(args.dump_lp, lp_to_text(wc.lp));
    if (wc.unbounded) {
        std::cout << "worst-case SC(" << args.winner << ")/SC(" << args.ref << ") = UNBOUNDED\n";
        return 0;
    }
    std::cout << "worst-case SC(" << args.winner << ")/SC(" << args.ref << ") = " << show(wc.ratio)
              << '\n';
    if (args.witness) {
        std::cout << "witness metric (SC(" << args.ref << ") normalized to 1):\n";
        for (int j = 0; j < wc.lp.num_vars; ++j)
            std::cout << "  " << wc.lp.var_names[j] << " = " << show(wc.solution.x[j]) << '\n';
    }
    return 0;
}

struct CertifyArgs {
    std::string case_sel = "all";
    std::string r_text = "2";
    bool minimal = false;
    bool audit = true;
};

int cmd_certify(const CertifyArgs& args) {
    Q3 rq3 = scalar_arg(args.r_text);
    Rat R = rq3.as_rational();
    std::vector<int> cases;
    if (args.case_sel == "all")
        cases = {1, 2};
    else if (args.case_sel == "1" || args.case_sel == "2")
        cases = {std::stoi(args.case_sel)};
    else
        throw DomainError("--case must be 1, 2 or all");

    bool all_ok = true;
    for (int cid : cases) {
        CaseSpec spec = CaseSpec::by_id(cid);
        auto vertices = polytope_vertices(spec);
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            LinearProgram lp = build_case_lp(spec, vertices[v], R);
            LpSolution sol = lp_solve(lp);
            auto cert = dual_certificate(cid, static_cast<int>(v));
            CertificateAudit audit = check_dual_certificate(lp, cert);
            std::string vtx = "(" + to_string(vertices[v][0]) + "," + to_string(vertices[v][1]) +
                              "," + to_string(vertices[v][2]) + "," + to_string(vertices[v][3]) +
                              ")";
            std::cout << "case " << cid << " vertex " << vtx << ": ";
            if (sol.status == LpStatus::Optimal)
                std::cout << "optimum " << to_string(sol.objective);
            else
                std::cout << "optimum < 0 (unbounded ray)";
            std::cout << ", dual " << (audit.ok ? "OK" : "MISMATCH") << '\n';
            if (args.audit) {
                for (const auto& item : cert) {
                    int r = lp.row_index(item.row_id);
                    std::cout << "    " << to_string(item.multiplier) << "  x  [" << item.row_id
                              << "]";
                    if (r < 0) std::cout << "  (unknown row)";
                    std::cout << '\n';
                }
                if (!audit.ok) std::cout << "    -> " << audit.detail << '\n';
            }
            all_ok = all_ok && sol.status == LpStatus::Optimal && sol.objective == 0 && audit.ok;
        }
        if (args.minimal) {
            RatInterval iv = minimal_r(spec);
            std::cout << "case " << cid << " minimal R in [" << to_string(iv.lo) << ", "
                      << to_string(iv.hi) << "]  (~" << approx(to_double(iv.lo)) << ", ~"
                      << approx(to_double(iv.hi)) << ")\n";
        }
    }
    return all_ok ? 0 : kCheckFailed;
}

struct BoundsArgs {
    std::string at_text;
    std::string example;
    std::string lambda_text, w_text;
    bool do_heatmap = false;
    std::string grid_text;  // "lmin,lmax,wmin,wmax"
    int steps = 200;
    int jobs = 1;
    std::string out;
};

int cmd_bounds(const BoundsArgs& args) {
    if (!args.at_text.empty()) {
        Q3 lambda, w;
        if (args.at_text == "optimal") {
            std::tie(lambda, w) = canonical_params();
        } else {
            auto comma = args.at_text.find(',');
            if (comma == std::string::npos) throw ParseError("--at needs 'lambda,w'");
            lambda = scalar_arg(args.at_text.substr(0, comma));
            w = scalar_arg(args.at_text.substr(comma + 1));
        }
        RangeQuantities r = permissible_ranges(lambda, w);
        std::cout << "lambda = " << show(lambda) << "\nw = " << show(w) << '\n'
                  << "tau(lambda) = " << show(r.tau) << '\n'
                  << "AC_min = " << show(r.ac_min) << "\nAC_max = " << show(r.ac_max) << '\n'
                  << "CB_min = " << show(r.cb_min) << "\nCB_max = " << show(r.cb_max) << '\n'
                  << "eta = " << show(r.eta) << '\n';
        for (int i = 1; i <= 3; ++i)
            std::cout << "d" << i << " = " << show(closed_form_d(i, lambda, w)) << '\n';
        std::cout << "D = " << show(lower_bound_D(lambda, w)) << '\n';
        return 0;
    }
    if (!args.example.empty()) {
        auto [lambda, w] = resolve_params(args.lambda_text, args.w_text);
        std::pair<MetricInstance, TieDirectives> built =
            args.example == "collinear"   ? instance_collinear(lambda, w)
            : args.example == "colocated" ? instance_colocated(lambda, w)
            : args.example == "triangle"
                ? instance_triangle(lambda, w)
                : throw DomainError("--example must be collinear, colocated or triangle");
        write_output(args.out, serialize_instance(built.first, built.second));
        return 0;
    }
    if (args.do_heatmap) {
        double grid[4] = {0.5, 0.7, 0.0, 1.25};
        if (!args.grid_text.empty()) {
            std::istringstream gs(args.grid_text);
            std::string tok;
            for (int i = 0; i < 4; ++i) {
                if (!std::getline(gs, tok, ',')) throw ParseError("--grid needs four values");
                grid[i] = std::stod(tok);
            }
        }
        HeatmapResult hm = heatmap(grid[0], grid[1], grid[2], grid[3], args.steps, args.steps,
                                   args.jobs);
        std::ostringstream os;
        os << "lambda,w,d1,d2,d3,D,argmax\n";
        char buf[200];
        for (const auto& row : hm.rows) {
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d\n", row.lambda,
                          row.w, row.d1, row.d2, row.d3, row.D, row.argmax);
            os << buf;
        }
        const HeatRow& best = hm.rows[hm.argmin];
        std::snprintf(buf, sizeof(buf), "# argmin lambda=%.10g w=%.10g D=%.10g%s\n", best.lambda,
                      best.w, best.D, best.at_optimum ? " (injected optimum)" : "");
        os << buf;
        write_output(args.out, os.str());
        return 0;
    }
    throw DomainError("bounds needs one of --at, --example, --heatmap");
}

struct McArgs {
    std::vector<int> ms = {3, 4, 5};
    int samples = 10000;
    std::uint64_t seed = 1;
    std::string lambda_text, w_text;
    std::string policy = "by-order";
    bool line_only = false;
    int jobs = 1;
    std::string dump_argmax;
};

int cmd_montecarlo(const McArgs& args) {
    McConfig cfg;
    cfg.ms = args.ms;
    for (int m : cfg.ms)
        if (m < 2) throw DomainError("--m entries must be at least 2");
    cfg.samples = args.samples;
    cfg.seed = args.seed;
    std::tie(cfg.lambda, cfg.w) = resolve_params(args.lambda_text, args.w_text);
    cfg.policy = parse_policy(args.policy);
    cfg.allow_plane = !args.line_only;
    cfg.jobs = args.jobs;
    McResult res = run_montecarlo(cfg);
    std::cout << "samples: " << res.samples_run << "\nseed: " << args.seed << '\n';
    if (res.any_unbounded)
        std::cout << "max distortion: UNBOUNDED (first at sample " << res.first_unbounded_sample
                  << ")\n";
    else
        std::cout << "max distortion: " << show(res.max_distortion) << " (sample "
                  << res.argmax_sample << ")\n";
    if (!args.dump_argmax.empty()) {
        const MetricInstance& worst =
            res.any_unbounded ? res.unbounded_instance : res.argmax_instance;
        if (res.any_unbounded || res.argmax_sample >= 0)
            write_output(args.dump_argmax, serialize_instance(worst, {}));
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    LoadedInstance li = load_instance(path);
    auto violations = validate_metric(li.instance);
    if (violations.empty()) {
        std::cout << "ok: " << li.instance.num_candidates() << " candidates, "
                  << li.instance.num_voters() << " voter blocks, total mass "
                  << show(li.instance.total_mass()) << '\n';
        return 0;
    }
    for (const auto& v : violations)
        std::cout << "violation: " << v.what << " (slack " << show(v.slack) << ")\n";
    return kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deliberation-via-matching: exact protocol runs, distortion oracles,\n"
                 "certificate verification and lower-bound tooling"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run the protocol on an instance file");
    run->add_option("--instance", run_args.instance_path, "instance file")->required();
    run->add_option("--lambda", run_args.lambda_text, "uncovering parameter (default lambda*)");
    run->add_option("--w", run_args.w_text, "deliberation weight (default w*)");
    run->add_option("--policy", run_args.policy, "by-order | counter-monotone | explicit");
    run->add_option("--select", run_args.select, "min-index | all");
    run->add_option("--format", run_args.format, "text | csv");

    OracleArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "worst-case distortion over consistent metrics");
    oracle->add_option("--instance", oracle_args.instance_path, "instance file")->required();
    oracle->add_option("--winner", oracle_args.winner, "candidate whose cost is maximized")->required();
    oracle->add_option("--ref", oracle_args.ref, "candidate whose cost is normalized")->required();
    oracle->add_option("--policy", oracle_args.policy, "matching policy");
    oracle->add_flag("--witness", oracle_args.witness, "print the witness metric");
    oracle->add_option("--dump-lp", oracle_args.dump_lp, "write the LP in text form");

    CertifyArgs certify_args;
    auto* certify = app.add_subcommand("certify", "verify the distortion-3 certificates");
    certify->add_option("--case", certify_args.case_sel, "1 | 2 | all");
    certify->add_option("--R", certify_args.r_text, "objective parameter R (rational)");
    certify->add_flag("--minimal-R", certify_args.minimal, "bisect for the critical R");
    certify->add_flag("!--no-audit", certify_args.audit, "suppress the multiplier audit table");

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "lower-bound families, closed forms, heatmap");
    bounds->add_option("--at", bounds_args.at_text, "evaluate at 'lambda,w' (or 'optimal')");
    bounds->add_option("--example", bounds_args.example, "collinear | colocated | triangle");
    bounds->add_option("--lambda", bounds_args.lambda_text, "parameter for --example");
    bounds->add_option("--w", bounds_args.w_text, "parameter for --example");
    bounds->add_flag("--heatmap", bounds_args.do_heatmap, "emit the CSV sweep");
    bounds->add_option("--grid", bounds_args.grid_text, "lmin,lmax,wmin,wmax");
    bounds->add_option("--steps", bounds_args.steps, "grid points per axis");
    bounds->add_option("--jobs", bounds_args.jobs, "parallel sweep threads");
    bounds->add_option("-o,--out", bounds_args.out, "output file (default stdout)");

    McArgs mc_args;
    auto* mc = app.add_subcommand("montecarlo", "seeded random-instance distortion harness");
    mc->add_option("--m", mc_args.ms, "candidate counts, cycled per sample");
    mc->add_option("--samples", mc_args.samples, "number of instances");
    mc->add_option("--seed", mc_args.seed, "RNG seed");
    mc->add_option("--lambda", mc_args.lambda_text, "uncovering parameter (default lambda*)");
    mc->add_option("--w", mc_args.w_text, "deliberation weight (default w*)");
    mc->add_option("--policy", mc_args.policy, "matching policy");
    mc->add_flag("--line-only", mc_args.line_only, "sample line embeddings only");
    mc->add_option("--jobs", mc_args.jobs, "worker threads");
    mc->add_option("--dump-argmax", mc_args.dump_argmax, "write the argmax instance file");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check the metric invariants of a file");
    validate->add_option("--instance", validate_path, "instance file")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(run_args);
        if (oracle->parsed()) return cmd_oracle(oracle_args);
        if (certify->parsed()) return cmd_certify(certify_args);
        if (bounds->parsed()) return cmd_bounds(bounds_args);
        if (mc->parsed()) return cmd_montecarlo(mc_args);
        if (validate->parsed()) return cmd_validate(validate_path);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(dvm::ErrorCode::CliUsage);
    } catch (const dvm::Error& e) {
        std::cerr << "error[" << static_cast<int>(e.code()) << "]: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error[" << static_cast<int>(dvm::ErrorCode::Internal) << "]: " << e.what()
                  << '\n';
        return static_cast<int>(dvm::ErrorCode::Internal);
    }
    return 0;
}
