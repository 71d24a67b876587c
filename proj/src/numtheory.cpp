#include "latfact/numtheory.hpp"

#include <boost/multiprecision/integer.hpp>

namespace latfact {

int FactorBase::index_of(const Int& p) const {
    for (size_t i = 0; i < primes.size(); ++i)
        if (primes[i] == p) return static_cast<int>(i);
    return -1;
}

bool is_prime(const Int& x) {
    if (x < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (x == p) return true;
        if (x % p == 0) return false;
    }
    // deterministic Miller-Rabin for the 64-bit-plus range used here
    Int d = x - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Int y = boost::multiprecision::powm(Int(a), d, x);
        if (y == 1 || y == x - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            y = y * y % x;
            if (y == x - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

FactorBase gen_factor_base(int n) {
    if (n < 1) throw ConfigInvalid("factor base size must be >= 1");
    FactorBase fb;
    fb.primes.reserve(n + 1);
    fb.primes.push_back(Int(-1));
    Int c = 2;
    while (fb.size() < n) {
        if (is_prime(c)) fb.primes.push_back(c);
        ++c;
    }
    return fb;
}

std::optional<ExponentVector> factor_smooth(const Int& x, const FactorBase& fb) {
    if (x == 0) return std::nullopt;
    ExponentVector e = ExponentVector::Zero(fb.size() + 1);
    Int y = x < 0 ? Int(-x) : x;
    if (x < 0) e[0] = 1;
    for (int i = 1; i <= fb.size(); ++i) {
        const Int& p = fb.primes[i];
        while (y % p == 0) {
            y /= p;
            ++e[i];
        }
    }
    if (y != 1) return std::nullopt;
    return e;
}

Int reconstruct(const ExponentVector& e, const FactorBase& fb) {
    Int x = e[0] % 2 ? Int(-1) : Int(1);
    for (int i = 1; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) x *= fb.primes[i];
    return x;
}

Int mod_pow_signed(const Int& base, const Int& exp, const Int& N) {
    Int b = base % N;
    if (b < 0) b += N;
    if (exp >= 0) return boost::multiprecision::powm(b, exp, N);
    Int g, u, v;
    g = boost::multiprecision::gcd(b, N);
    if (g != 1) throw NonInvertible(g);
    // extended Euclid for the inverse
    Int r0 = N, r1 = b, s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    Int inv = s0 % N;
    if (inv < 0) inv += N;
    return boost::multiprecision::powm(inv, Int(-exp), N);
}

Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

}  // namespace latfact
