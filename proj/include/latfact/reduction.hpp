#pragma once

#include "latfact/common.hpp"

namespace latfact {

struct GramSchmidtData {
    RMat dstar;  // orthogonal columns, exact
    RMat mu;     // unit lower triangular projection coefficients
};

struct BabaiBundle {
    IMat d;    // LLL-reduced basis columns (post-sort when enabled)
    IVec c;    // rounded coefficients
    RVec mu;   // unrounded coefficients
    IVec b_op; // d * c
};

// exact Gram-Schmidt of the columns; throws DependentBasis on a zero d*
GramSchmidtData gram_schmidt(const IMat& basis);

// exact LLL with incremental mu/B updates; delta in (1/4, 1)
IMat lll_reduce(IMat basis, const Rat& delta);

// LLL, optional ascending-norm stable sort, then nearest-plane rounding
BabaiBundle babai_nearest_plane(const IMat& basis, const IVec& t, const Rat& delta = Rat(3) / 4,
                                bool sort = false, RoundingMode tie = RoundingMode::HalfUp);

}  // namespace latfact
