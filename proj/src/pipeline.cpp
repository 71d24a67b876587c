#include "latfact/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <tuple>

#include "latfact/reduction.hpp"

namespace latfact {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

long factorial_capped(int n, long cap) {
    long f = 1;
    for (int i = 2; i <= n; ++i) {
        if (f > cap / i) return cap;
        f *= i;
    }
    return std::min(f, cap);
}

std::vector<Permutation> enumerate_permutations(int n, PermStrategy strategy, long cap,
                                                std::uint64_t seed) {
    std::vector<Permutation> out;
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 1);
    if (strategy == PermStrategy::Exhaustive) {
        do out.emplace_back(m);
        while (std::next_permutation(m.begin(), m.end()));
        return out;
    }
    const long want = factorial_capped(n, cap);
    SeededRng rng(seed);
    std::set<std::vector<int>> seen;
    long attempts = 0;
    const long attempt_cap = std::max(want * 50, 1000L);
    while (static_cast<long>(out.size()) < want && attempts++ < attempt_cap) {
        for (int i = n - 1; i > 0; --i)
            std::swap(m[i], m[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
        if (seen.insert(m).second) out.emplace_back(m);
    }
    return out;
}

void validate(const RunConfig& cfg) {
    if (cfg.N < 2) throw ConfigInvalid("N must be at least 2");
    if (cfg.n < 1) throw ConfigInvalid("need at least one qubit");
    if (cfg.b2 < cfg.n) throw ConfigInvalid("checking base must cover the lattice base (B2 >= n)");
    if (!(cfg.c > 0)) throw ConfigInvalid("rounding parameter c must be positive");
    if (cfg.delta <= Rat(1, 4) || cfg.delta >= 1)
        throw ConfigInvalid("delta must lie in (1/4, 1)");
    if (cfg.K < 0) throw ConfigInvalid("candidate count K must be nonnegative");
    if (cfg.backend == Backend::QaoaSimulated && (cfg.p < 1 || cfg.restarts < 1))
        throw ConfigInvalid("variational backend needs p >= 1 and restarts >= 1");
    if (cfg.max_relations == 0 || cfg.max_relations < -1)
        throw ConfigInvalid("max_relations must be positive, or -1 for the default");
    if (cfg.perms == PermStrategy::Sample && cfg.sample_cap < 1)
        throw ConfigInvalid("sample cap must be positive");
}

FactorBase checking_base(const Int& N, int b2) {
    FactorBase fb = gen_factor_base(b2);
    if (fb.largest() >= N) throw ConfigInvalid("largest checking prime must stay below N");
    return fb;
}

std::vector<std::uint32_t> backend_states(const IsingModel& model, const EncodingMap& enc,
                                          const RunConfig& cfg, std::uint64_t inst_seed) {
    const long kk = std::min<long>(cfg.K, 1L << model.n);
    if (cfg.backend == Backend::ExactSpectrum) {
        std::vector<std::uint32_t> states;
        for (const auto& es : exact_spectrum(model, kk)) states.push_back(es.second);
        return states;
    }
    return run_qaoa(model, enc, cfg.p, cfg.restarts, static_cast<int>(kk), inst_seed)
        .top_bitstrings;
}

std::vector<std::pair<Int, Int>> decode_candidates(const CvpInstance& inst,
                                                   const BabaiBundle& bundle,
                                                   const EncodingMap& enc,
                                                   const std::vector<std::uint32_t>& states,
                                                   const FactorBase& fb_n, long& rejected) {
    std::vector<std::pair<Int, Int>> out;
    out.reserve(states.size());
    for (std::uint32_t s : states) {
        Eigen::VectorXi x = decode_index(s, enc);
        IVec coeff = bundle.c;
        for (int j = 0; j < x.size(); ++j) coeff(j) += x(j);
        IVec v_new = bundle.d * coeff;
        try {
            out.push_back(extract_uv(coords_in_original_basis(v_new, inst), fb_n));
        } catch (const NotInLattice&) {
            ++rejected;
        }
    }
    return out;
}

bool ivec_equal(const IVec& a, const IVec& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return false;
    return true;
}

void relation_obj(const SrPair& p, std::ostream& os) {
    os << "{\"u\": \"" << p.u << "\", \"v\": \"" << p.v << "\", \"e\": [";
    for (int i = 0; i < p.e.size(); ++i) os << (i ? ", " : "") << p.e(i);
    os << "], \"e_prime\": [";
    for (int i = 0; i < p.e_prime.size(); ++i) os << (i ? ", " : "") << p.e_prime(i);
    os << "], \"source\": \"" << (p.from_fallback ? "fallback" : "lattice") << "\"}";
}

}  // namespace

RunReport run_factorization(const RunConfig& config) {
    validate(config);
    const auto t_total = Clock::now();
    RunReport rep;
    rep.config = config;
    const FactorBase fb_n = gen_factor_base(config.n);
    const FactorBase fb_b2 = checking_base(config.N, config.b2);
    rep.relations = RelationSet(config.N, fb_b2);
    const long max_rel = config.max_relations < 0 ? config.b2 + 2 : config.max_relations;

    const auto perms =
        enumerate_permutations(config.n, config.perms, config.sample_cap, config.seed);
    std::uint64_t idx = 0;
    for (const Permutation& f : perms) {
        ++idx;
        if (rep.relations.size() >= max_rel) break;
        ++rep.permutations_tried;
        auto t0 = Clock::now();
        std::optional<CvpInstance> inst;
        try {
            inst = build_cvp_instance(config.N, config.n, config.c, f, config.rounding);
        } catch (const ZeroDiagonal&) {
            ++rep.rejected_instances;
            rep.timings.lattice_ms += ms_since(t0);
            continue;
        }
        const BabaiBundle bundle = babai_nearest_plane(inst->basis, inst->target, config.delta,
                                                       config.sort, config.rounding);
        rep.timings.lattice_ms += ms_since(t0);

        t0 = Clock::now();
        const auto [model, enc] = build_cost_model(bundle, inst->target);
        const std::uint64_t inst_seed = config.seed ^ (0x9e3779b97f4a7c15ull * idx);
        const auto states = backend_states(model, enc, config, inst_seed);
        rep.timings.backend_ms += ms_since(t0);

        t0 = Clock::now();
        for (const auto& [u, v] :
             decode_candidates(*inst, bundle, enc, states, fb_n, rep.rejected_candidates)) {
            ++rep.candidates_tested;
            const auto ee = check_sr_pair(u, v, config.N, fb_b2);
            if (!ee) continue;
            ++rep.sr_pairs_found;
            rep.relations.add_relation({u, v, ee->first, ee->second, false});
            if (rep.relations.size() >= max_rel) break;
        }
        rep.timings.relations_ms += ms_since(t0);
    }

    if (config.fallback && rep.relations.size() < max_rel) {
        for (const SrPair& p :
             classical_relation_fallback(config.N, config.b2, config.fallback_budget,
                                         config.seed)) {
            if (rep.relations.size() >= max_rel) break;
            if (rep.relations.add_relation(p)) rep.used_fallback = true;
        }
    }

    const auto t0 = Clock::now();
    if (rep.relations.size() > 0) {
        const auto kernel = kernel_gf2(build_parity_matrix(rep.relations));
        rep.kernel_dim = static_cast<long>(kernel.size());
        for (const auto& tau : kernel) {
            const auto pq = fermat_extract(tau, rep.relations, config.N);
            if (!pq) continue;
            Int p = pq->first, q = pq->second;
            if (p > q) std::swap(p, q);
            if (p > 1 && q < config.N && p * q == config.N) {
                rep.success = true;
                rep.p = p;
                rep.q = q;
                break;
            }
        }
    }
    rep.timings.linalg_ms += ms_since(t0);
    rep.timings.total_ms = ms_since(t_total);
    return rep;
}

std::vector<SrPair> classical_relation_fallback(const Int& N, int b2, long budget,
                                                std::uint64_t seed) {
    const FactorBase fb = checking_base(N, b2);
    SeededRng rng(seed);
    std::vector<SrPair> out;
    std::set<std::pair<Int, Int>> seen;
    for (long trial = 0; trial < budget; ++trial) {
        Int u = 1;
        const Int bound = N * Int(1 + rng.next_below(8));
        while (u <= bound) u *= fb.primes[1 + rng.next_below(static_cast<std::uint64_t>(b2))];
        const Int v = round_half_up(Rat(u, N));
        if (v < 1) continue;
        const auto ee = check_sr_pair(u, v, N, fb);
        if (!ee) continue;
        if (!seen.insert({u, v}).second) continue;
        out.push_back({u, v, ee->first, ee->second, true});
    }
    return out;
}

CensusTable permutation_census(const Int& N, int n, int b2, double c,
                               const std::vector<std::pair<Rat, bool>>& variants, int K,
                               RoundingMode rounding, long sample_cap, std::uint64_t seed) {
    RunConfig probe;
    probe.N = N;
    probe.n = n;
    probe.b2 = b2;
    probe.c = c;
    probe.K = K;
    probe.sample_cap = sample_cap;
    validate(probe);
    const FactorBase fb_n = gen_factor_base(n);
    const FactorBase fb_b2 = checking_base(N, b2);
    CensusTable table;
    table.N = N;
    table.n = n;
    table.b2 = b2;
    table.c = c;
    table.K = K;
    const auto strategy = n <= 8 ? PermStrategy::Exhaustive : PermStrategy::Sample;
    const auto perms = enumerate_permutations(n, strategy, sample_cap, seed);
    for (const auto& [delta, sort] : variants) {
        if (delta <= Rat(1, 4) || delta >= 1) throw ConfigInvalid("delta must lie in (1/4, 1)");
        CensusVariant var;
        var.delta = delta;
        var.sort = sort;
        std::set<std::pair<Int, Int>> distinct;
        for (const Permutation& f : perms) {
            std::optional<CvpInstance> inst;
            try {
                inst = build_cvp_instance(N, n, c, f, rounding);
            } catch (const ZeroDiagonal&) {
                ++var.rejected;
                continue;
            }
            ++var.permutations;
            const BabaiBundle bundle =
                babai_nearest_plane(inst->basis, inst->target, delta, sort, rounding);
            const auto [model, enc] = build_cost_model(bundle, inst->target);
            const long kk = std::min<long>(K, 1L << n);
            std::vector<std::uint32_t> states;
            for (const auto& es : exact_spectrum(model, kk)) states.push_back(es.second);
            CensusRow row;
            row.perm = f.map;
            const auto uv = decode_candidates(*inst, bundle, enc, states, fb_n, var.rejected);
            row.candidates = static_cast<long>(uv.size());
            var.candidates += row.candidates;
            for (const auto& [u, v] : uv) {
                if (!check_sr_pair(u, v, N, fb_b2)) continue;
                ++row.sr_hits;
                if (distinct.insert({u, v}).second) ++row.new_distinct;
            }
            var.rows.push_back(std::move(row));
        }
        var.distinct_pairs.assign(distinct.begin(), distinct.end());
        table.variants.push_back(std::move(var));
    }
    return table;
}

ComparisonReport reproduce_comparison(const Int& N, int n, int b2, double c, int K,
                                      long sample_cap, std::uint64_t seed) {
    RunConfig probe;
    probe.N = N;
    probe.n = n;
    probe.b2 = b2;
    probe.c = c;
    probe.K = K;
    probe.sample_cap = sample_cap;
    validate(probe);
    const FactorBase fb_n = gen_factor_base(n);
    const FactorBase fb_b2 = checking_base(N, b2);
    ComparisonReport rep;
    rep.N = N;
    rep.n = n;
    rep.b2 = b2;
    rep.c = c;
    rep.K = K;
    const std::vector<std::tuple<std::string, Rat, bool>> variants = {
        {"delta=3/4,sort=off", Rat(3) / 4, false},
        {"delta=3/4,sort=on", Rat(3) / 4, true},
        {"delta=99/100,sort=off", Rat(99) / 100, false},
    };
    const int V = static_cast<int>(variants.size());
    struct Obs {
        std::vector<std::vector<Int>> cols;  // sorted column multiset
        IVec b_op;
        std::set<std::pair<Int, Int>> uv;
    };
    std::vector<std::set<std::pair<Int, Int>>> global_uv(V), global_sr(V);
    std::vector<std::vector<Obs>> obs(V);
    const auto strategy = n <= 8 ? PermStrategy::Exhaustive : PermStrategy::Sample;
    for (const Permutation& f : enumerate_permutations(n, strategy, sample_cap, seed)) {
        std::optional<CvpInstance> inst;
        try {
            inst = build_cvp_instance(N, n, c, f, RoundingMode::HalfUp);
        } catch (const ZeroDiagonal&) {
            continue;  // skip whole permutation so the variants stay aligned
        }
        ++rep.permutations;
        for (int vi = 0; vi < V; ++vi) {
            const auto& [name, delta, sort] = variants[vi];
            const BabaiBundle bundle =
                babai_nearest_plane(inst->basis, inst->target, delta, sort, RoundingMode::HalfUp);
            Obs o;
            o.b_op = bundle.b_op;
            for (int j = 0; j < bundle.d.cols(); ++j) {
                std::vector<Int> col(bundle.d.rows());
                for (int i = 0; i < bundle.d.rows(); ++i) col[i] = bundle.d(i, j);
                o.cols.push_back(std::move(col));
            }
            std::sort(o.cols.begin(), o.cols.end());
            const auto [model, enc] = build_cost_model(bundle, inst->target);
            const long kk = std::min<long>(K, 1L << n);
            std::vector<std::uint32_t> states;
            for (const auto& es : exact_spectrum(model, kk)) states.push_back(es.second);
            long rejected = 0;
            for (const auto& [u, v] : decode_candidates(*inst, bundle, enc, states, fb_n,
                                                        rejected)) {
                o.uv.insert({u, v});
                global_uv[vi].insert({u, v});
                if (check_sr_pair(u, v, N, fb_b2)) global_sr[vi].insert({u, v});
            }
            obs[vi].push_back(std::move(o));
        }
    }
    for (int vi = 0; vi < V; ++vi) {
        ComparisonVariant cv;
        cv.name = std::get<0>(variants[vi]);
        cv.delta = std::get<1>(variants[vi]);
        cv.sort = std::get<2>(variants[vi]);
        cv.candidate_count = static_cast<long>(global_uv[vi].size());
        cv.sr_pairs.assign(global_sr[vi].begin(), global_sr[vi].end());
        rep.variants.push_back(std::move(cv));
    }
    for (int a = 0; a < V; ++a)
        for (int b = a + 1; b < V; ++b) {
            ComparisonPair pr;
            pr.a = a;
            pr.b = b;
            for (size_t k = 0; k < obs[a].size(); ++k) {
                pr.bases_equal += obs[a][k].cols == obs[b][k].cols;
                pr.babai_equal += ivec_equal(obs[a][k].b_op, obs[b][k].b_op);
                pr.candidate_sets_equal += obs[a][k].uv == obs[b][k].uv;
            }
            std::vector<std::pair<Int, Int>> merged;
            std::set_intersection(global_uv[a].begin(), global_uv[a].end(), global_uv[b].begin(),
                                  global_uv[b].end(), std::back_inserter(merged));
            pr.shared_candidates = static_cast<long>(merged.size());
            merged.clear();
            std::set_union(global_uv[a].begin(), global_uv[a].end(), global_uv[b].begin(),
                           global_uv[b].end(), std::back_inserter(merged));
            pr.union_candidates = static_cast<long>(merged.size());
            pr.sr_equal = global_sr[a] == global_sr[b];
            rep.pairs.push_back(pr);
        }
    return rep;
}

ConvergenceResult convergence_experiment(const Int& N, int n, double c, int p, int restarts,
                                         std::uint64_t seed) {
    if (N < 2) throw ConfigInvalid("N must be at least 2");
    if (n < 1) throw ConfigInvalid("need at least one qubit");
    if (!(c > 0)) throw ConfigInvalid("rounding parameter c must be positive");
    if (p < 1 || restarts < 1) throw ConfigInvalid("need p >= 1 and restarts >= 1");
    const auto inst = build_cvp_instance(N, n, c, Permutation::identity(n));
    const BabaiBundle bundle = babai_nearest_plane(inst.basis, inst.target);
    const auto [model, enc] = build_cost_model(bundle, inst.target);
    const QaoaRun run = run_qaoa(model, enc, p, restarts, 1, seed);
    ConvergenceResult res;
    res.N = N;
    res.n = n;
    res.c = c;
    res.e_min = run.e_min;
    res.traces = run.traces;
    res.best_final_gap = std::numeric_limits<double>::infinity();
    for (const auto& trace : res.traces)
        if (!trace.empty()) res.best_final_gap = std::min(res.best_final_gap, trace.back());
    return res;
}

void write_report_json(const RunReport& report, std::ostream& os, bool include_timings) {
    const RunConfig& c = report.config;
    os << "{\n  \"config\": {\"N\": \"" << c.N << "\", \"n\": " << c.n << ", \"b2\": " << c.b2
       << ", \"c\": " << fmt17(c.c) << ", \"delta\": \"" << c.delta << "\", \"sort\": "
       << (c.sort ? "true" : "false") << ", \"backend\": \""
       << (c.backend == Backend::ExactSpectrum ? "exact" : "qaoa") << "\", \"k\": " << c.K
       << ", \"layers\": " << c.p << ", \"restarts\": " << c.restarts
       << ", \"max_relations\": " << c.max_relations << ", \"perms\": \""
       << (c.perms == PermStrategy::Exhaustive ? "exhaustive" : "sample")
       << "\", \"sample_cap\": " << c.sample_cap << ", \"rounding_mode\": \""
       << (c.rounding == RoundingMode::HalfUp ? "half-up" : "half-even")
       << "\", \"fallback\": " << (c.fallback ? "true" : "false")
       << ", \"fallback_budget\": " << c.fallback_budget << ", \"seed\": " << c.seed << "},\n";
    os << "  \"outcome\": \"" << (report.success ? "factors" : "Fail") << "\",\n";
    if (report.success)
        os << "  \"p\": \"" << report.p << "\", \"q\": \"" << report.q << "\",\n";
    os << "  \"census\": {\"permutations_tried\": " << report.permutations_tried
       << ", \"candidates_tested\": " << report.candidates_tested
       << ", \"sr_pairs_found\": " << report.sr_pairs_found
       << ", \"distinct_sr_pairs\": " << report.relations.size()
       << ", \"rejected_instances\": " << report.rejected_instances
       << ", \"rejected_candidates\": " << report.rejected_candidates
       << ", \"kernel_dim\": " << report.kernel_dim << ", \"used_fallback\": "
       << (report.used_fallback ? "true" : "false") << "},\n";
    os << "  \"relations\": [";
    for (int i = 0; i < report.relations.size(); ++i) {
        os << (i ? ",\n    " : "\n    ");
        relation_obj(report.relations.pairs[i], os);
    }
    os << (report.relations.size() ? "\n  ]" : "]");
    if (include_timings)
        os << ",\n  \"timings_ms\": {\"lattice\": " << fmt17(report.timings.lattice_ms)
           << ", \"backend\": " << fmt17(report.timings.backend_ms)
           << ", \"relations\": " << fmt17(report.timings.relations_ms)
           << ", \"linalg\": " << fmt17(report.timings.linalg_ms)
           << ", \"total\": " << fmt17(report.timings.total_ms) << "}";
    os << "\n}\n";
}

void write_census_csv(const CensusTable& table, std::ostream& os) {
    os << "delta,sort,permutation,candidates,sr_hits,new_distinct\n";
    for (const CensusVariant& var : table.variants) {
        long hits = 0;
        for (const CensusRow& row : var.rows) {
            os << var.delta << ',' << (var.sort ? "on" : "off") << ',';
            for (size_t i = 0; i < row.perm.size(); ++i) os << (i ? "-" : "") << row.perm[i];
            os << ',' << row.candidates << ',' << row.sr_hits << ',' << row.new_distinct << '\n';
            hits += row.sr_hits;
        }
        os << var.delta << ',' << (var.sort ? "on" : "off") << ",total," << var.candidates << ','
           << hits << ',' << var.distinct_pairs.size() << '\n';
    }
}

void write_comparison_json(const ComparisonReport& cmp, std::ostream& os) {
    os << "{\n  \"N\": \"" << cmp.N << "\", \"n\": " << cmp.n << ", \"b2\": " << cmp.b2
       << ", \"c\": " << fmt17(cmp.c) << ", \"k\": " << cmp.K
       << ", \"permutations\": " << cmp.permutations << ",\n  \"variants\": [";
    for (size_t i = 0; i < cmp.variants.size(); ++i) {
        const ComparisonVariant& v = cmp.variants[i];
        os << (i ? ",\n    " : "\n    ") << "{\"name\": \"" << v.name << "\", \"delta\": \""
           << v.delta << "\", \"sort\": " << (v.sort ? "true" : "false")
           << ", \"candidates\": " << v.candidate_count << ", \"sr_pairs\": [";
        for (size_t j = 0; j < v.sr_pairs.size(); ++j)
            os << (j ? ", " : "") << "[\"" << v.sr_pairs[j].first << "\", \""
               << v.sr_pairs[j].second << "\"]";
        os << "]}";
    }
    os << "\n  ],\n  \"pairs\": [";
    for (size_t i = 0; i < cmp.pairs.size(); ++i) {
        const ComparisonPair& p = cmp.pairs[i];
        os << (i ? ",\n    " : "\n    ") << "{\"a\": \"" << cmp.variants[p.a].name
           << "\", \"b\": \"" << cmp.variants[p.b].name << "\", \"bases_equal\": " << p.bases_equal
           << ", \"babai_equal\": " << p.babai_equal
           << ", \"candidate_sets_equal\": " << p.candidate_sets_equal
           << ", \"shared_candidates\": " << p.shared_candidates
           << ", \"union_candidates\": " << p.union_candidates
           << ", \"sr_equal\": " << (p.sr_equal ? "true" : "false") << "}";
    }
    os << "\n  ]\n}\n";
}

void write_traces_csv(const ConvergenceResult& result, std::ostream& os) {
    os << "restart,evaluation_index,energy_minus_min\n";
    for (size_t r = 0; r < result.traces.size(); ++r)
        for (size_t i = 0; i < result.traces[r].size(); ++i)
            os << r << ',' << i << ',' << fmt17(result.traces[r][i]) << '\n';
}

}  // namespace latfact
