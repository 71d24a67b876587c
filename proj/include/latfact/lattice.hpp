#pragma once

#include <iosfwd>
#include <vector>

#include "latfact/common.hpp"
#include "latfact/numtheory.hpp"

namespace latfact {

struct Permutation {
    std::vector<int> map;  // f(j) = map[j-1], a bijection of {1..n}

    explicit Permutation(std::vector<int> m);
    static Permutation identity(int n);
    int n() const { return static_cast<int>(map.size()); }
    int operator()(int j) const { return map[j - 1]; }  // 1-based
    bool operator==(const Permutation& o) const { return map == o.map; }
};

// basis columns b_j: diagonal round(f(j)/2), last row round(10^c ln p_j);
// target t = (0, ..., 0, round(10^c ln N))
struct CvpInstance {
    Int N;
    int n = 0;
    double c = 0;
    Permutation f;
    RoundingMode rounding = RoundingMode::HalfUp;
    IMat basis;   // (n+1) x n
    IVec target;  // n+1
};

// diagonal f(i) block over a last row of precision-scaled N'*ln p_i,
// N' = N^(1/(n+1)); column n+1 carries N'*ln N
struct SchnorrLattice {
    Int N;
    int n = 0;
    Int precision;
    IMat basis;  // (n+1) x (n+1)
};

// round(10^c * ln x) evaluated at 100-digit precision
Int scaled_log(double c, const Int& x);

CvpInstance build_cvp_instance(const Int& N, int n, double c, const Permutation& f,
                               RoundingMode mode = RoundingMode::HalfUp);

SchnorrLattice build_schnorr_lattice(const Int& N, int n, const Permutation& f,
                                     const Int& precision);

// e with v = sum_j e_j b_j, by exact division over the diagonal plus a
// consistency check of the log row
Eigen::VectorXi coords_in_original_basis(const IVec& v, const CvpInstance& inst);

void write_instance_json(const CvpInstance& inst, std::ostream& os);
CvpInstance read_instance_json(std::istream& is);

}  // namespace latfact
