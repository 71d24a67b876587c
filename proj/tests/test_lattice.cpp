#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "latfact/lattice.hpp"

using namespace latfact;

TEST_CASE("permutation validates bijections of 1..n") {
    CHECK_THROWS_AS(Permutation({1, 2, 2}), ConfigInvalid);
    CHECK_THROWS_AS(Permutation({0, 1, 2}), ConfigInvalid);
    CHECK_THROWS_AS(Permutation({1, 3}), ConfigInvalid);

    Permutation id = Permutation::identity(4);
    CHECK(id.map == std::vector<int>{1, 2, 3, 4});
    CHECK(id(1) == 1);
    CHECK(id(4) == 4);

    Permutation f({3, 1, 2});
    CHECK(f(1) == 3);
    CHECK(f(2) == 1);
    CHECK(f(3) == 2);
}

TEST_CASE("scaled_log matches the frozen row values") {
    CHECK(scaled_log(1.5, 2) == 22);
    CHECK(scaled_log(1.5, 3) == 35);
    CHECK(scaled_log(1.5, 5) == 51);
    CHECK(scaled_log(1.5, 1961) == 240);

    CHECK(scaled_log(4.0, 2) == 6931);
    CHECK(scaled_log(4.0, 3) == 10986);
    CHECK(scaled_log(4.0, 5) == 16094);
    CHECK(scaled_log(4.0, 7) == 19459);
    CHECK(scaled_log(4.0, 11) == 23979);
    CHECK(scaled_log(4.0, Int(48567227)) == 176985);

    CHECK(scaled_log(4.0, 13) == 25649);
    CHECK(scaled_log(4.0, 17) == 28332);
    CHECK(scaled_log(4.0, 19) == 29444);
    CHECK(scaled_log(4.0, 23) == 31355);
    CHECK(scaled_log(4.0, 29) == 33673);
    CHECK(scaled_log(4.0, Int("261980999226229")) == 331993);
}

TEST_CASE("cvp instance layout under identity and reversed permutations") {
    CvpInstance inst = build_cvp_instance(1961, 3, 1.5, Permutation::identity(3));
    REQUIRE(inst.basis.rows() == 4);
    REQUIRE(inst.basis.cols() == 3);
    CHECK(inst.basis(0, 0) == 1);
    CHECK(inst.basis(1, 1) == 1);
    CHECK(inst.basis(2, 2) == 2);
    CHECK(inst.basis(0, 1) == 0);
    CHECK(inst.basis(3, 0) == 22);
    CHECK(inst.basis(3, 1) == 35);
    CHECK(inst.basis(3, 2) == 51);
    for (int i = 0; i < 3; ++i) CHECK(inst.target(i) == 0);
    CHECK(inst.target(3) == 240);

    CvpInstance rev = build_cvp_instance(1961, 3, 1.5, Permutation({3, 2, 1}));
    CHECK(rev.basis(0, 0) == 2);
    CHECK(rev.basis(1, 1) == 1);
    CHECK(rev.basis(2, 2) == 1);
    // the log row tracks the prime per column, not the permutation
    CHECK(rev.basis(3, 0) == 22);
    CHECK(rev.basis(3, 1) == 35);
    CHECK(rev.basis(3, 2) == 51);
}

TEST_CASE("cvp instance rejects bad configs and zero diagonals") {
    CHECK_THROWS_AS(build_cvp_instance(1, 3, 1.5, Permutation::identity(3)), ConfigInvalid);
    CHECK_THROWS_AS(build_cvp_instance(1961, 0, 1.5, Permutation::identity(0)), ConfigInvalid);
    CHECK_THROWS_AS(build_cvp_instance(1961, 3, 0.0, Permutation::identity(3)), ConfigInvalid);
    CHECK_THROWS_AS(build_cvp_instance(1961, 3, -2.0, Permutation::identity(3)), ConfigInvalid);
    CHECK_THROWS_AS(build_cvp_instance(1961, 3, 1.5, Permutation::identity(4)), ConfigInvalid);
    // half-even sends the f(j)=1 diagonal to zero, and 1 appears in every permutation
    CHECK_THROWS_AS(
        build_cvp_instance(1961, 3, 1.5, Permutation::identity(3), RoundingMode::HalfEven),
        ZeroDiagonal);
    CHECK_THROWS_AS(build_cvp_instance(1961, 2, 1.5, Permutation({2, 1}), RoundingMode::HalfEven),
                    ZeroDiagonal);
}

TEST_CASE("schnorr lattice matches the frozen example") {
    SchnorrLattice lat = build_schnorr_lattice(1961, 3, Permutation::identity(3), 10000);
    REQUIRE(lat.basis.rows() == 4);
    REQUIRE(lat.basis.cols() == 4);
    CHECK(lat.basis(0, 0) == 1);
    CHECK(lat.basis(1, 1) == 2);
    CHECK(lat.basis(2, 2) == 3);
    CHECK(lat.basis(0, 3) == 0);
    CHECK(lat.basis(3, 0) == 46126);
    CHECK(lat.basis(3, 1) == 73108);
    CHECK(lat.basis(3, 2) == 107101);
    CHECK(lat.basis(3, 3) == 504496);

    double ratio = 73108.0 / 46126.0;
    CHECK(std::abs(ratio - std::log(3.0) / std::log(2.0)) < 1e-3);

    SchnorrLattice rev = build_schnorr_lattice(1961, 3, Permutation({3, 2, 1}), 10000);
    CHECK(rev.basis(0, 0) == 3);
    CHECK(rev.basis(2, 2) == 1);
}

TEST_CASE("coords_in_original_basis inverts lattice members and rejects outsiders") {
    CvpInstance inst = build_cvp_instance(1961, 3, 1.5, Permutation::identity(3));

    IVec v(4);
    v << 1, 0, 0, 22;
    Eigen::VectorXi e = coords_in_original_basis(v, inst);
    CHECK(e(0) == 1);
    CHECK(e(1) == 0);
    CHECK(e(2) == 0);

    v << 3, 0, -4, -36;
    e = coords_in_original_basis(v, inst);
    CHECK(e(0) == 3);
    CHECK(e(1) == 0);
    CHECK(e(2) == -2);

    v << 0, 0, 3, 51;
    CHECK_THROWS_AS(coords_in_original_basis(v, inst), NotInLattice);
    v << 1, 0, 0, 23;
    CHECK_THROWS_AS(coords_in_original_basis(v, inst), NotInLattice);

    v << -2, 0, 0, -44;
    e = coords_in_original_basis(v, inst);
    CHECK(e(0) == -2);
}

TEST_CASE("instance json round-trips byte-identically") {
    CvpInstance inst = build_cvp_instance(Int(48567227), 5, 4.0, Permutation({2, 4, 1, 5, 3}),
                                          RoundingMode::HalfUp);
    std::ostringstream first;
    write_instance_json(inst, first);

    std::istringstream in(first.str());
    CvpInstance back = read_instance_json(in);
    CHECK(back.N == inst.N);
    CHECK(back.n == inst.n);
    CHECK(back.c == inst.c);
    CHECK(back.f.map == inst.f.map);
    CHECK(back.rounding == inst.rounding);
    CHECK(back.basis.cwiseEqual(inst.basis).all());
    CHECK(back.target.cwiseEqual(inst.target).all());

    std::ostringstream second;
    write_instance_json(back, second);
    CHECK(first.str() == second.str());
}
