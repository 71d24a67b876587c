#pragma once

#include <optional>
#include <vector>

#include "latfact/common.hpp"

namespace latfact {

// exponents over a factor base; entry 0 is the exponent of p0 = -1
using ExponentVector = Eigen::VectorXi;

struct FactorBase {
    std::vector<Int> primes;  // primes[0] = -1, primes[1] = 2, ...

    int size() const { return static_cast<int>(primes.size()) - 1; }
    // position of p in the base, -1 if absent
    int index_of(const Int& p) const;
    const Int& largest() const { return primes.back(); }
};

bool is_prime(const Int& x);

// first n primes together with p0 = -1
FactorBase gen_factor_base(int n);

// exponent vector of x over fb iff |x| is fb-smooth; entry 0 = 1 for x < 0
std::optional<ExponentVector> factor_smooth(const Int& x, const FactorBase& fb);

// product of fb.primes[i]^e[i]; reconstruction counterpart of factor_smooth
Int reconstruct(const ExponentVector& e, const FactorBase& fb);

// base^exp mod N with negative exponents via modular inverse;
// throws NonInvertible(gcd(base, N)) when the inverse does not exist
Int mod_pow_signed(const Int& base, const Int& exp, const Int& N);

Int gcd(const Int& a, const Int& b);

}  // namespace latfact
