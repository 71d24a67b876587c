#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "latfact/common.hpp"
#include "latfact/lattice.hpp"
#include "latfact/qaoa.hpp"
#include "latfact/relations.hpp"

namespace latfact {

enum class Backend { ExactSpectrum, QaoaSimulated };
enum class PermStrategy { Exhaustive, Sample };

struct RunConfig {
    Int N;
    int n = 0;   // qubits = lattice dimension
    int b2 = 0;  // checking base size
    double c = 0;
    Rat delta = Rat(3) / 4;
    bool sort = false;
    Backend backend = Backend::ExactSpectrum;
    int K = 10;        // candidate bitstrings per instance
    int p = 3;         // ansatz layers
    int restarts = 10;
    long max_relations = -1;  // -1 means b2 + 2
    PermStrategy perms = PermStrategy::Exhaustive;
    long sample_cap = 10000;
    RoundingMode rounding = RoundingMode::HalfUp;
    bool fallback = false;
    long fallback_budget = 20000;
    std::uint64_t seed = 1;
};

struct StageTimings {
    double lattice_ms = 0;    // instance build, LLL, nearest plane
    double backend_ms = 0;    // spectrum or variational optimization
    double relations_ms = 0;  // decode and smoothness checks
    double linalg_ms = 0;     // parity system, kernel, gcd extraction
    double total_ms = 0;
};

struct RunReport {
    RunConfig config;
    bool success = false;
    Int p, q;  // factors, valid iff success
    long permutations_tried = 0;
    long candidates_tested = 0;
    long sr_pairs_found = 0;       // smoothness hits, duplicates included
    long rejected_instances = 0;   // degenerate diagonal
    long rejected_candidates = 0;  // decoded vectors outside the lattice
    long kernel_dim = 0;
    bool used_fallback = false;
    RelationSet relations{Int(0), FactorBase{}};
    StageTimings timings;
};

RunReport run_factorization(const RunConfig& config);

// seeded random smooth u with v = round(u/N); non-lattice stand-in relations,
// flagged as such; budget counts trials
std::vector<SrPair> classical_relation_fallback(const Int& N, int b2, long budget,
                                                std::uint64_t seed);

struct CensusRow {
    std::vector<int> perm;
    long candidates = 0;
    long sr_hits = 0;
    long new_distinct = 0;  // pairs unseen in earlier permutations
};

struct CensusVariant {
    Rat delta;
    bool sort = false;
    long permutations = 0;
    long candidates = 0;
    long rejected = 0;
    std::vector<std::pair<Int, Int>> distinct_pairs;  // sorted
    std::vector<CensusRow> rows;
};

struct CensusTable {
    Int N;
    int n = 0, b2 = 0;
    double c = 0;
    int K = 10;
    std::vector<CensusVariant> variants;
};

// distinct sr-pairs reachable from the K lowest spectrum states, per
// (delta, sort) variant, over all enumerated permutations
CensusTable permutation_census(const Int& N, int n, int b2, double c,
                               const std::vector<std::pair<Rat, bool>>& variants, int K = 10,
                               RoundingMode rounding = RoundingMode::HalfUp,
                               long sample_cap = 10000, std::uint64_t seed = 1);

struct ComparisonVariant {
    std::string name;
    Rat delta;
    bool sort = false;
    long candidate_count = 0;  // distinct decoded (u, v) over all permutations
    std::vector<std::pair<Int, Int>> sr_pairs;  // sorted
};

struct ComparisonPair {
    int a = 0, b = 0;  // variant indices
    long bases_equal = 0;           // permutations with equal reduced column multisets
    long babai_equal = 0;           // permutations with equal nearest-plane output
    long candidate_sets_equal = 0;  // permutations with equal decoded (u, v) sets
    long shared_candidates = 0;     // global intersection size
    long union_candidates = 0;
    bool sr_equal = false;
};

struct ComparisonReport {
    Int N;
    int n = 0, b2 = 0;
    double c = 0;
    int K = 10;
    long permutations = 0;
    std::vector<ComparisonVariant> variants;
    std::vector<ComparisonPair> pairs;
};

// (3/4, off), (3/4, on), (0.99, off) side by side over shared permutations
ComparisonReport reproduce_comparison(const Int& N, int n, int b2, double c, int K = 10,
                                      long sample_cap = 10000, std::uint64_t seed = 1);

struct ConvergenceResult {
    Int N;
    int n = 0;
    double c = 0;
    double e_min = 0;
    std::vector<std::vector<double>> traces;  // per restart, E - E_min per evaluation
    double best_final_gap = 0;
};

// identity-permutation instance, optimized ansatz, per-restart gap traces
ConvergenceResult convergence_experiment(const Int& N, int n, double c, int p, int restarts,
                                         std::uint64_t seed);

// timings are opt-in so fixed-seed reports stay byte-identical across runs
void write_report_json(const RunReport& report, std::ostream& os, bool include_timings = false);
void write_census_csv(const CensusTable& table, std::ostream& os);
void write_comparison_json(const ComparisonReport& cmp, std::ostream& os);
void write_traces_csv(const ConvergenceResult& result, std::ostream& os);

}  // namespace latfact
