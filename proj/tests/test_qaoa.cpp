#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "latfact/lattice.hpp"
#include "latfact/qaoa.hpp"
#include "latfact/relations.hpp"

using namespace latfact;

namespace {

struct SmallInstance {
    CvpInstance inst;
    BabaiBundle bundle;
    IsingModel model;
    EncodingMap enc;
};

SmallInstance small_instance() {
    CvpInstance inst = build_cvp_instance(1961, 3, 1.5, Permutation::identity(3));
    BabaiBundle bundle = babai_nearest_plane(inst.basis, inst.target, Rat(3, 4), false);
    auto [model, enc] = build_cost_model(bundle, inst.target);
    return {std::move(inst), std::move(bundle), std::move(model), std::move(enc)};
}

// refinement cost directly from the definition, as the model must reproduce it
Rat cost_f(const SmallInstance& si, const Eigen::VectorXi& x) {
    IVec v = IVec::Zero(si.inst.target.size());
    for (int j = 0; j < 3; ++j)
        v += si.bundle.d.col(j) * Int(si.bundle.c(j) + Int(x(j)));
    Rat s = 0;
    for (int r = 0; r < v.size(); ++r) {
        Int diff = v(r) - si.inst.target(r);
        s += Rat(diff * diff);
    }
    return s;
}

}  // namespace

TEST_CASE("cost model coefficients for the smallest instance") {
    SmallInstance si = small_instance();
    REQUIRE(si.model.n == 3);
    REQUIRE(si.enc.n() == 3);
    CHECK(si.enc.branch[0] == Branch::High);
    CHECK(si.enc.branch[1] == Branch::Low);
    CHECK(si.enc.branch[2] == Branch::High);

    CHECK(si.model.h(0) == Rat(-3, 2));
    CHECK(si.model.h(1) == Rat(4));
    CHECK(si.model.h(2) == Rat(-7, 2));
    CHECK(si.model.J(0, 1) == Rat(-5, 2));
    CHECK(si.model.J(0, 2) == Rat(-4));
    CHECK(si.model.J(1, 2) == Rat(-3));
    CHECK(si.model.J(1, 0) == Rat(0));
    CHECK(si.model.J(2, 0) == Rat(0));
    CHECK(si.model.offset == Rat(87, 2));
}

TEST_CASE("diagonal energies equal the refinement cost on every state") {
    SmallInstance si = small_instance();
    for (std::uint32_t s = 0; s < 8; ++s) {
        Eigen::VectorXi x = decode_index(s, si.enc);
        CHECK(diag_energy(si.model, s) == cost_f(si, x));
    }

    Eigen::VectorXd dd = diagonal_energies(si.model, true);
    REQUIRE(dd.size() == 8);
    for (std::uint32_t s = 0; s < 8; ++s)
        CHECK(dd(s) == doctest::Approx(diag_energy(si.model, s).convert_to<double>()).epsilon(1e-12));
    Eigen::VectorXd bare = diagonal_energies(si.model, false);
    double off = si.model.offset.convert_to<double>();
    for (std::uint32_t s = 0; s < 8; ++s)
        CHECK(dd(s) - bare(s) == doctest::Approx(off).epsilon(1e-12));
}

TEST_CASE("exact spectrum ranks the candidate pairs") {
    SmallInstance si = small_instance();
    auto spec = exact_spectrum(si.model, 8);
    REQUIRE(spec.size() == 8);

    std::vector<long> expect_e = {33, 35, 36, 42, 45, 49, 54, 54};
    std::vector<std::pair<long, long>> expect_uv = {{1800, 1}, {1944, 1}, {2025, 1}, {3645, 2},
                                                    {2160, 1}, {1620, 1}, {1920, 1}, {1728, 1}};
    FactorBase fb = gen_factor_base(3);
    for (int r = 0; r < 8; ++r) {
        CHECK(spec[r].first == Rat(expect_e[r]));
        Eigen::VectorXi x = decode_index(spec[r].second, si.enc);
        Eigen::VectorXi coeff(3);
        for (int j = 0; j < 3; ++j) coeff(j) = si.bundle.c(j).convert_to<int>() + x(j);
        IVec v = si.bundle.d * coeff.cast<Int>();
        Eigen::VectorXi e = coords_in_original_basis(v, si.inst);
        auto [u, vv] = extract_uv(e, fb);
        CHECK(u == Int(expect_uv[r].first));
        CHECK(vv == Int(expect_uv[r].second));
    }
    // equal energies break ties by ascending state index
    CHECK(spec[6].first == spec[7].first);
    CHECK(spec[6].second < spec[7].second);

    CHECK(exact_spectrum(si.model, 0).empty());
    CHECK(exact_spectrum(si.model, 3).size() == 3);
    CHECK_THROWS_AS(exact_spectrum(si.model, 9), ConfigInvalid);
    CHECK_THROWS_AS(exact_spectrum(si.model, -1), ConfigInvalid);

    IsingModel big{25, RVec::Zero(25), RMat::Zero(25, 25), Rat(0)};
    CHECK_THROWS_AS(exact_spectrum(big, 1), TooLarge);
}

TEST_CASE("decode maps bits through the branch substitution") {
    EncodingMap enc{{Branch::High, Branch::Low, Branch::High}};
    CHECK(spin_of(0, 0, 3) == 1);
    CHECK(spin_of(4, 0, 3) == -1);
    CHECK(spin_of(1, 2, 3) == -1);

    Eigen::VectorXi x = decode_index(0, enc);
    CHECK(x(0) == 0);
    CHECK(x(1) == 0);
    CHECK(x(2) == 0);

    x = decode_index(7, enc);  // all bits set
    CHECK(x(0) == -1);
    CHECK(x(1) == 1);
    CHECK(x(2) == -1);

    Eigen::VectorXi z(3);
    z << -1, -1, 1;
    x = decode_bitstring(z, enc);
    CHECK(x(0) == -1);
    CHECK(x(1) == 1);
    CHECK(x(2) == 0);
}

TEST_CASE("zero-layer ansatz stays uniform") {
    SmallInstance si = small_instance();
    QaoaParams p0{Eigen::VectorXd(0), Eigen::VectorXd(0)};
    Eigen::VectorXcd psi = evolve_state(si.model, p0);
    REQUIRE(psi.size() == 8);
    double amp = 1.0 / std::sqrt(8.0);
    for (int s = 0; s < 8; ++s) {
        CHECK(std::abs(psi(s).real() - amp) < 1e-12);
        CHECK(std::abs(psi(s).imag()) < 1e-12);
    }
}

TEST_CASE("single-qubit layer matches the closed form") {
    IsingModel m{1, RVec::Zero(1), RMat::Zero(1, 1), Rat(1, 2)};
    m.h(0) = Rat(-1, 2);
    QaoaParams params{Eigen::VectorXd(1), Eigen::VectorXd(1)};
    params.gamma(0) = M_PI / 2;
    params.beta(0) = M_PI / 4;
    Eigen::VectorXcd psi = evolve_state(m, params);
    REQUIRE(psi.size() == 2);
    CHECK(std::abs(psi(0)) < 1e-12);
    double r = std::sqrt(0.5);
    CHECK(std::abs(psi(1).real() - r) < 1e-12);
    CHECK(std::abs(psi(1).imag() + r) < 1e-12);
    CHECK(energy_expectation(psi, m) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolution preserves the norm and the variational bound") {
    SmallInstance si = small_instance();
    Eigen::VectorXd energies = diagonal_energies(si.model, true);
    double emin = energies.minCoeff();
    double emax = energies.maxCoeff();
    SeededRng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        int p = 1 + static_cast<int>(rng.next_below(3));
        QaoaParams params{Eigen::VectorXd(p), Eigen::VectorXd(p)};
        for (int l = 0; l < p; ++l) {
            params.gamma(l) = rng.next_double() * 2 * M_PI;
            params.beta(l) = rng.next_double() * 2 * M_PI;
        }
        Eigen::VectorXcd psi = evolve_state(si.model, params);
        CHECK(std::abs(psi.squaredNorm() - 1.0) <= 1e-10 * p);
        double e = energy_expectation(psi, si.model);
        CHECK(e >= emin - 1e-9);
        CHECK(e <= emax + 1e-9);
    }
}

TEST_CASE("nelder_mead minimizes rosenbrock like the reference implementation") {
    auto rosen = [](const Eigen::VectorXd& v) {
        double a = 1 - v(0);
        double b = v(1) - v(0) * v(0);
        return a * a + 100 * b * b;
    };
    Eigen::VectorXd x0(2);
    x0 << -1, 1;
    NmResult res = nelder_mead(rosen, x0);
    CHECK(res.fx == doctest::Approx(4.0575902202767407e-10).epsilon(1e-6));
    CHECK(res.fx < 1e-8);
    CHECK(res.x(0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.x(1) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(res.evals.size() == 187);

    auto quad = [](const Eigen::VectorXd& v) {
        return (v(0) - 3) * (v(0) - 3) + (v(1) - 3) * (v(1) - 3);
    };
    x0 << 0, 0;
    NmResult q = nelder_mead(quad, x0);
    CHECK(q.x(0) == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(q.x(1) == doctest::Approx(3.0).epsilon(1e-3));

    NmSettings tight;
    tight.maxfev = 10;
    NmResult capped = nelder_mead(quad, x0, tight);
    CHECK(capped.evals.size() >= 3);
    CHECK(capped.evals.size() <= 14);
}

TEST_CASE("run_qaoa is deterministic and bounded below by the true minimum") {
    SmallInstance si = small_instance();
    QaoaRun a = run_qaoa(si.model, si.enc, 2, 3, 4, 99);
    QaoaRun b = run_qaoa(si.model, si.enc, 2, 3, 4, 99);

    CHECK(a.e_min == 33.0);
    CHECK(a.best_energy >= a.e_min - 1e-9);
    REQUIRE(a.traces.size() == 3);
    for (const auto& tr : a.traces) {
        CHECK(!tr.empty());
        for (double g : tr) CHECK(g >= -1e-9);
    }
    CHECK(a.top_bitstrings.size() == 4);
    for (auto s : a.top_bitstrings) CHECK(s < 8);

    CHECK(a.best_energy == b.best_energy);
    CHECK(a.e_min == b.e_min);
    REQUIRE(b.traces.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        REQUIRE(a.traces[i].size() == b.traces[i].size());
        for (size_t k = 0; k < a.traces[i].size(); ++k) CHECK(a.traces[i][k] == b.traces[i][k]);
    }
    CHECK(a.top_bitstrings == b.top_bitstrings);
    for (int i = 0; i < a.best_angles.size(); ++i) CHECK(a.best_angles(i) == b.best_angles(i));

    QaoaRun deeper = run_qaoa(si.model, si.enc, 3, 1, 8, 7);
    CHECK(deeper.top_bitstrings.size() == 8);
}
