#include "latfact/relations.hpp"

#include <ostream>

namespace latfact {

bool RelationSet::add_relation(const SrPair& pair) {
    if (pair.v == 0) return false;  // u = u - vN, zero parity column
    if (seen_.count({pair.u, pair.v})) return false;
    seen_.insert({pair.u, pair.v});
    pairs.push_back(pair);
    return true;
}

std::pair<Int, Int> extract_uv(const Eigen::VectorXi& e, const FactorBase& fb) {
    Int u = 1, v = 1;
    for (int j = 0; j < e.size(); ++j) {
        const Int& p = fb.primes[j + 1];
        for (int k = 0; k < std::abs(e(j)); ++k) (e(j) > 0 ? u : v) *= p;
    }
    return {u, v};
}

std::optional<std::pair<ExponentVector, ExponentVector>> check_sr_pair(const Int& u, const Int& v,
                                                                       const Int& N,
                                                                       const FactorBase& fb_b2) {
    if (u < 1 || v < 0) return std::nullopt;
    auto e = factor_smooth(u, fb_b2);
    if (!e) return std::nullopt;
    Int rem = u - v * N;
    if (rem == 0) return std::nullopt;
    auto ep = factor_smooth(rem, fb_b2);
    if (!ep) return std::nullopt;
    return std::make_pair(*e, *ep);
}

Eigen::MatrixXi build_parity_matrix(const RelationSet& set) {
    const int rows = set.fb.size() + 1;
    const int m = set.size();
    Eigen::MatrixXi a = Eigen::MatrixXi::Zero(rows, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < rows; ++i)
            a(i, j) = ((set.pairs[j].e_prime(i) - set.pairs[j].e(i)) % 2 + 2) % 2;
    return a;
}

std::vector<Eigen::VectorXi> kernel_gf2(const Eigen::MatrixXi& m) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    Eigen::MatrixXi a = m.unaryExpr([](int x) { return ((x % 2) + 2) % 2; });
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (a(i, c)) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        a.row(r).swap(a.row(pr));
        for (int i = 0; i < rows; ++i)
            if (i != r && a(i, c)) a.row(i) = (a.row(i) + a.row(r)).unaryExpr([](int x) { return x % 2; });
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<Eigen::VectorXi> basis;
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        Eigen::VectorXi v = Eigen::VectorXi::Zero(cols);
        v(fc) = 1;
        for (size_t ri = 0; ri < pivot_col.size(); ++ri)
            if (a(static_cast<int>(ri), fc)) v(pivot_col[ri]) = 1;
        basis.push_back(v);
    }
    return basis;
}

std::optional<std::pair<Int, Int>> fermat_extract(const Eigen::VectorXi& tau,
                                                  const RelationSet& set, const Int& N) {
    const int rows = set.fb.size() + 1;
    Int X = 1;
    try {
        for (int i = 0; i < rows; ++i) {
            long s = 0;
            for (int j = 0; j < set.size(); ++j)
                if (tau(j)) s += set.pairs[j].e_prime(i) - set.pairs[j].e(i);
            if (s % 2 != 0) throw ConfigInvalid("tau is not a parity kernel vector");
            long half = s / 2;
            if (i == 0) {
                if (half % 2 != 0) X = N - X;  // p_0 = -1 contributes a sign
            } else {
                X = X * mod_pow_signed(set.fb.primes[i], Int(half), N) % N;
            }
        }
    } catch (const NonInvertible& e) {
        return std::make_pair(e.g, N / e.g);
    }
    if (X * X % N != 1) throw ConfigInvalid("congruence X^2 = 1 violated; relations inconsistent");
    if (X == 1 || X == N - 1) return std::nullopt;
    return std::make_pair(gcd(X + 1, N), gcd(X - 1, N));
}

void write_relations_jsonl(const RelationSet& set, std::ostream& os) {
    for (const SrPair& p : set.pairs) {
        os << "{\"u\": \"" << p.u << "\", \"v\": \"" << p.v << "\", \"e\": [";
        for (int i = 0; i < p.e.size(); ++i) os << (i ? ", " : "") << p.e(i);
        os << "], \"e_prime\": [";
        for (int i = 0; i < p.e_prime.size(); ++i) os << (i ? ", " : "") << p.e_prime(i);
        os << "], \"source\": \"" << (p.from_fallback ? "fallback" : "lattice") << "\"}\n";
    }
}

}  // namespace latfact
