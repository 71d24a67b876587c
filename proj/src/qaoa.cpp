#include "latfact/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace latfact {

std::pair<IsingModel, EncodingMap> build_cost_model(const BabaiBundle& bundle, const IVec& t) {
    const int n = static_cast<int>(bundle.d.cols());
    EncodingMap enc;
    enc.branch.reserve(n);
    for (int i = 0; i < n; ++i)
        enc.branch.push_back(Rat(bundle.c(i)) <= bundle.mu(i) ? Branch::Low : Branch::High);

    IVec r = bundle.b_op - t;
    IMat G = bundle.d.transpose() * bundle.d;
    IVec rd = bundle.d.transpose() * r;
    auto sgn = [&](int i) { return enc.branch[i] == Branch::Low ? Int(1) : Int(-1); };

    IsingModel m{n, RVec::Zero(n), RMat::Zero(n, n), Rat(0)};
    Rat rr(r.squaredNorm());
    m.offset = rr;
    for (int i = 0; i < n; ++i) {
        const Rat A(2 * sgn(i) * rd(i) + G(i, i));  // coefficient of y_i, y_i in {0,1}
        m.offset += A / 2;
        m.h(i) -= A / 2;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Rat B(2 * sgn(i) * sgn(j) * G(i, j));  // coefficient of y_i y_j
            m.offset += B / 4;
            m.h(i) -= B / 4;
            m.h(j) -= B / 4;
            m.J(i, j) = B / 4;
        }
    return {std::move(m), std::move(enc)};
}

Rat diag_energy(const IsingModel& model, std::uint32_t state) {
    Rat e = model.offset;
    for (int i = 0; i < model.n; ++i) {
        int zi = spin_of(state, i, model.n);
        e += model.h(i) * zi;
        for (int j = i + 1; j < model.n; ++j) e += model.J(i, j) * (zi * spin_of(state, j, model.n));
    }
    return e;
}

Eigen::VectorXd diagonal_energies(const IsingModel& model, bool include_offset) {
    const std::size_t dim = std::size_t(1) << model.n;
    Eigen::VectorXd h(model.n), J(model.n * model.n);
    for (int i = 0; i < model.n; ++i) {
        h(i) = model.h(i).convert_to<double>();
        for (int j = 0; j < model.n; ++j) J(i * model.n + j) = model.J(i, j).convert_to<double>();
    }
    double off = include_offset ? model.offset.convert_to<double>() : 0.0;
    Eigen::VectorXd e(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        double acc = off;
        for (int i = 0; i < model.n; ++i) {
            int zi = spin_of(static_cast<std::uint32_t>(s), i, model.n);
            acc += h(i) * zi;
            for (int j = i + 1; j < model.n; ++j)
                acc += J(i * model.n + j) * zi * spin_of(static_cast<std::uint32_t>(s), j, model.n);
        }
        e(s) = acc;
    }
    return e;
}

std::vector<std::pair<Rat, std::uint32_t>> exact_spectrum(const IsingModel& model, long K) {
    if (model.n > 24) throw TooLarge("exact spectrum enumeration is limited to 24 qubits");
    const std::uint64_t dim = std::uint64_t(1) << model.n;
    if (K < 0 || static_cast<std::uint64_t>(K) > dim)
        throw ConfigInvalid("K must lie in [0, 2^n]");
    std::vector<std::pair<Rat, std::uint32_t>> all;
    all.reserve(dim);
    for (std::uint64_t s = 0; s < dim; ++s)
        all.emplace_back(diag_energy(model, static_cast<std::uint32_t>(s)),
                         static_cast<std::uint32_t>(s));
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    all.resize(K);
    return all;
}

namespace {

Eigen::VectorXcd evolve_with(const Eigen::VectorXd& ez, int n, const QaoaParams& params) {
    const std::size_t dim = std::size_t(1) << n;
    Eigen::VectorXcd state = Eigen::VectorXcd::Constant(dim, std::pow(2.0, -0.5 * n));
    using cd = std::complex<double>;
    for (int l = 0; l < params.p(); ++l) {
        double g = params.gamma(l);
        for (std::size_t s = 0; s < dim; ++s)
            state(s) *= cd(std::cos(g * ez(s)), -std::sin(g * ez(s)));
        double cb = std::cos(params.beta(l)), sb = std::sin(params.beta(l));
        for (int q = 0; q < n; ++q) {
            const std::size_t bit = std::size_t(1) << (n - 1 - q);
            for (std::size_t s = 0; s < dim; ++s) {
                if (s & bit) continue;
                cd a = state(s), b = state(s | bit);
                state(s) = cb * a - cd(0, sb) * b;
                state(s | bit) = -cd(0, sb) * a + cb * b;
            }
        }
    }
    return state;
}

}  // namespace

Eigen::VectorXcd evolve_state(const IsingModel& model, const QaoaParams& params) {
    return evolve_with(diagonal_energies(model, false), model.n, params);
}

double energy_expectation(const Eigen::VectorXcd& state, const IsingModel& model) {
    Eigen::VectorXd ez = diagonal_energies(model, true);
    double e = 0;
    for (Eigen::Index s = 0; s < state.size(); ++s) e += std::norm(state(s)) * ez(s);
    return e;
}

NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                     Eigen::VectorXd x0, const NmSettings& st) {
    const int n = static_cast<int>(x0.size());
    NmResult out;
    auto f = [&](const Eigen::VectorXd& x) {
        double v = objective(x);
        out.evals.push_back(v);
        return v;
    };

    std::vector<Eigen::VectorXd> sim(n + 1, x0);
    for (int k = 0; k < n; ++k)
        sim[k + 1](k) = x0(k) != 0.0 ? 1.05 * x0(k) : 0.00025;
    std::vector<double> fsim(n + 1);
    for (int k = 0; k <= n; ++k) fsim[k] = f(sim[k]);

    auto order = [&] {
        std::vector<int> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fsim[a] < fsim[b]; });
        std::vector<Eigen::VectorXd> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (int k = 0; k <= n; ++k) {
            s2[k] = sim[idx[k]];
            f2[k] = fsim[idx[k]];
        }
        sim.swap(s2);
        fsim.swap(f2);
    };
    order();

    long iter = 0;
    while (static_cast<int>(out.evals.size()) < st.maxfev &&
           (st.maxiter < 0 || iter < st.maxiter)) {
        double xspread = 0, fspread = 0;
        for (int k = 1; k <= n; ++k) {
            xspread = std::max(xspread, (sim[k] - sim[0]).cwiseAbs().maxCoeff());
            fspread = std::max(fspread, std::abs(fsim[k] - fsim[0]));
        }
        if (xspread <= st.xatol && fspread <= st.fatol) break;

        Eigen::VectorXd xbar = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n; ++k) xbar += sim[k];
        xbar /= n;

        Eigen::VectorXd xr = 2 * xbar - sim[n];
        double fxr = f(xr);
        bool shrink = false;
        if (fxr < fsim[0]) {
            Eigen::VectorXd xe = xbar + 2 * (xbar - sim[n]);
            double fxe = f(xe);
            if (fxe < fxr) {
                sim[n] = xe;
                fsim[n] = fxe;
            } else {
                sim[n] = xr;
                fsim[n] = fxr;
            }
        } else if (fxr < fsim[n - 1]) {
            sim[n] = xr;
            fsim[n] = fxr;
        } else {
            if (fxr < fsim[n]) {
                Eigen::VectorXd xc = xbar + 0.5 * (xbar - sim[n]);
                double fxc = f(xc);
                if (fxc <= fxr) {
                    sim[n] = xc;
                    fsim[n] = fxc;
                } else {
                    shrink = true;
                }
            } else {
                Eigen::VectorXd xcc = xbar - 0.5 * (xbar - sim[n]);
                double fxcc = f(xcc);
                if (fxcc < fsim[n]) {
                    sim[n] = xcc;
                    fsim[n] = fxcc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (int k = 1; k <= n; ++k) {
                    sim[k] = sim[0] + 0.5 * (sim[k] - sim[0]);
                    fsim[k] = f(sim[k]);
                }
            }
        }
        order();
        ++iter;
    }
    out.x = sim[0];
    out.fx = fsim[0];
    return out;
}

QaoaRun run_qaoa(const IsingModel& model, const EncodingMap&, int p, int restarts, int K,
                 std::uint64_t seed) {
    if (p < 1 || restarts < 1) throw ConfigInvalid("need p >= 1 and restarts >= 1");
    QaoaRun run;
    run.e_min = exact_spectrum(model, 1).at(0).first.convert_to<double>();
    Eigen::VectorXd ez = diagonal_energies(model, false);
    double offset = model.offset.convert_to<double>();

    auto objective = [&](const Eigen::VectorXd& angles) {
        QaoaParams prm{angles.head(p), angles.tail(p)};
        Eigen::VectorXcd state = evolve_with(ez, model.n, prm);
        double e = offset;
        for (Eigen::Index s = 0; s < state.size(); ++s) e += std::norm(state(s)) * ez(s);
        return e;
    };

    SeededRng rng(seed);
    run.best_energy = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd x0(2 * p);
        for (int i = 0; i < 2 * p; ++i) x0(i) = rng.next_double() * 2 * M_PI;
        NmResult res = nelder_mead(objective, x0);
        std::vector<double> trace(res.evals.size());
        for (std::size_t i = 0; i < res.evals.size(); ++i) trace[i] = res.evals[i] - run.e_min;
        run.traces.push_back(std::move(trace));
        if (res.fx < run.best_energy) {
            run.best_energy = res.fx;
            run.best_angles = res.x;
        }
    }

    QaoaParams best{run.best_angles.head(p), run.best_angles.tail(p)};
    Eigen::VectorXcd state = evolve_with(ez, model.n, best);
    const std::uint64_t dim = std::uint64_t(1) << model.n;
    std::vector<std::uint32_t> idx(dim);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<double> prob(dim);
    for (std::uint64_t s = 0; s < dim; ++s) prob[s] = std::norm(state(s));
    std::stable_sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return prob[a] != prob[b] ? prob[a] > prob[b] : a < b;
    });
    long k = std::min<long>(K, static_cast<long>(dim));
    run.top_bitstrings.assign(idx.begin(), idx.begin() + k);
    return run;
}

Eigen::VectorXi decode_bitstring(const Eigen::VectorXi& z, const EncodingMap& enc) {
    Eigen::VectorXi x(z.size());
    for (int i = 0; i < z.size(); ++i) {
        int bit = z(i) == 1 ? 0 : 1;
        x(i) = enc.branch[i] == Branch::Low ? bit : -bit;
    }
    return x;
}

Eigen::VectorXi decode_index(std::uint32_t state, const EncodingMap& enc) {
    const int n = enc.n();
    Eigen::VectorXi z(n);
    for (int i = 0; i < n; ++i) z(i) = spin_of(state, i, n);
    return decode_bitstring(z, enc);
}

}  // namespace latfact
