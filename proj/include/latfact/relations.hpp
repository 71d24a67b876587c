#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "latfact/common.hpp"
#include "latfact/numtheory.hpp"

namespace latfact {

// (u, v) with u and u - vN both smooth over the checking base;
// e factors u, e_prime factors u - vN (index 0 is the sign slot)
struct SrPair {
    Int u, v;
    ExponentVector e, e_prime;
    bool from_fallback = false;
};

struct RelationSet {
    Int N;
    FactorBase fb;  // checking base P_B2
    std::vector<SrPair> pairs;

    RelationSet(Int N_, FactorBase fb_) : N(std::move(N_)), fb(std::move(fb_)) {}
    int size() const { return static_cast<int>(pairs.size()); }
    bool contains(const Int& u, const Int& v) const { return seen_.count({u, v}) != 0; }
    // inserts iff (u, v) unseen and not degenerate (v = 0 pairs add zero columns)
    bool add_relation(const SrPair& pair);

   private:
    std::set<std::pair<Int, Int>> seen_;
};

// u from positive exponents, v from negated negative ones, over the
// un-permuted prime order
std::pair<Int, Int> extract_uv(const Eigen::VectorXi& e, const FactorBase& fb);

// exponent vectors (e, e_prime) iff u is smooth and u - vN is nonzero and smooth
std::optional<std::pair<ExponentVector, ExponentVector>> check_sr_pair(const Int& u, const Int& v,
                                                                       const Int& N,
                                                                       const FactorBase& fb_b2);

// rows p_0..p_B2, columns per relation, entries (e'_ij - e_ij) mod 2
Eigen::MatrixXi build_parity_matrix(const RelationSet& set);

// basis of the GF(2) null space, leftmost pivot order
std::vector<Eigen::VectorXi> kernel_gf2(const Eigen::MatrixXi& m);

// X = prod p_i^{(1/2) sum_j (e'_ij - e_ij) tau_j} mod N; factors when X != +-1
std::optional<std::pair<Int, Int>> fermat_extract(const Eigen::VectorXi& tau,
                                                  const RelationSet& set, const Int& N);

// one {u, v, e, e_prime} record per line
void write_relations_jsonl(const RelationSet& set, std::ostream& os);

}  // namespace latfact
