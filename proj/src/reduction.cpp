#include "latfact/reduction.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace latfact {

namespace {

Rat idot(const IMat& m, int a, int b) {
    Int s = 0;
    for (int i = 0; i < m.rows(); ++i) s += m(i, a) * m(i, b);
    return Rat(s);
}

}  // namespace

GramSchmidtData gram_schmidt(const IMat& basis) {
    const int n = static_cast<int>(basis.cols());
    const int m = static_cast<int>(basis.rows());
    GramSchmidtData gs{RMat::Zero(m, n), RMat::Zero(n, n)};
    for (int i = 0; i < n; ++i) {
        RVec v = basis.col(i).cast<Rat>();
        for (int j = 0; j < i; ++j) {
            Rat denom = gs.dstar.col(j).squaredNorm();
            Rat num = 0;
            for (int r = 0; r < m; ++r) num += Rat(basis(r, i)) * gs.dstar(r, j);
            gs.mu(i, j) = num / denom;
            v -= gs.mu(i, j) * gs.dstar.col(j);
        }
        gs.mu(i, i) = 1;
        if (v.squaredNorm() == 0) throw DependentBasis();
        gs.dstar.col(i) = v;
    }
    return gs;
}

IMat lll_reduce(IMat b, const Rat& delta) {
    if (delta <= Rat(1) / 4 || delta >= 1) throw ConfigInvalid("delta must lie in (1/4, 1)");
    const int n = static_cast<int>(b.cols());
    if (n == 0) return b;
    GramSchmidtData gs = gram_schmidt(b);
    RMat mu = gs.mu;
    std::vector<Rat> B(n);
    for (int i = 0; i < n; ++i) B[i] = gs.dstar.col(i).squaredNorm();

    auto red = [&](int k, int l) {
        if (abs(mu(k, l)) > Rat(1) / 2) {
            Int q = round_half_up(mu(k, l));
            b.col(k) -= b.col(l) * q;
            for (int j = 0; j < l; ++j) mu(k, j) -= Rat(q) * mu(l, j);
            mu(k, l) -= Rat(q);
        }
    };

    int k = 1;
    while (k < n) {
        red(k, k - 1);
        if (B[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * B[k - 1]) {
            b.col(k).swap(b.col(k - 1));
            Rat m = mu(k, k - 1);
            Rat Bp = B[k] + m * m * B[k - 1];
            mu(k, k - 1) = m * B[k - 1] / Bp;
            B[k] = B[k - 1] * B[k] / Bp;
            B[k - 1] = Bp;
            for (int j = 0; j < k - 1; ++j) std::swap(mu(k, j), mu(k - 1, j));
            for (int i = k + 1; i < n; ++i) {
                Rat t = mu(i, k);
                mu(i, k) = mu(i, k - 1) - m * t;
                mu(i, k - 1) = t + mu(k, k - 1) * mu(i, k);
            }
            k = std::max(k - 1, 1);
        } else {
            for (int l = k - 2; l >= 0; --l) red(k, l);
            ++k;
        }
    }
    return b;
}

BabaiBundle babai_nearest_plane(const IMat& basis, const IVec& t, const Rat& delta, bool sort,
                                RoundingMode tie) {
    IMat d = lll_reduce(basis, delta);
    const int n = static_cast<int>(d.cols());
    if (sort) {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::vector<Rat> norms(n);
        for (int i = 0; i < n; ++i) norms[i] = idot(d, i, i);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b2) { return norms[a] < norms[b2]; });
        IMat ds(d.rows(), n);
        for (int i = 0; i < n; ++i) ds.col(i) = d.col(order[i]);
        d = ds;
    }
    GramSchmidtData gs = gram_schmidt(d);
    RVec b = t.cast<Rat>();
    BabaiBundle out{d, IVec::Zero(n), RVec::Zero(n), IVec::Zero(t.size())};
    for (int j = n - 1; j >= 0; --j) {
        Rat denom = gs.dstar.col(j).squaredNorm();
        Rat m = b.dot(gs.dstar.col(j)) / denom;
        out.mu(j) = m;
        out.c(j) = round_rat(m, tie);
        b -= Rat(out.c(j)) * d.col(j).cast<Rat>();
    }
    out.b_op = d * out.c;
    return out;
}

}  // namespace latfact
