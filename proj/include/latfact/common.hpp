#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

namespace latfact {

// Exact scalars. Expression templates are disabled so the types close under
// arithmetic and plug into Eigen without surprises.
using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
using Real = boost::multiprecision::cpp_bin_float_100;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IMat = Mat<Int>;
using IVec = Vec<Int>;
using RMat = Mat<Rat>;
using RVec = Vec<Rat>;

struct DependentBasis : std::runtime_error {
    DependentBasis() : std::runtime_error("basis vectors are linearly dependent") {}
};
struct NotInLattice : std::runtime_error {
    NotInLattice() : std::runtime_error("vector is not in the lattice") {}
};
struct ZeroDiagonal : std::runtime_error {
    ZeroDiagonal() : std::runtime_error("rounded diagonal entry is zero, basis degenerate") {}
};
struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};
struct ConfigInvalid : std::runtime_error {
    explicit ConfigInvalid(const std::string& what) : std::runtime_error(what) {}
};
struct NonInvertible : std::runtime_error {
    Int g;
    explicit NonInvertible(Int g_)
        : std::runtime_error("base shares a factor with the modulus"), g(std::move(g_)) {}
};

enum class RoundingMode { HalfUp, HalfEven };

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

// ties toward +inf
inline Int round_half_up(const Rat& x) {
    Rat y = x + Rat(1) / 2;
    return floor_div(numerator(y), denominator(y));
}

inline Int round_half_even(const Rat& x) {
    Int f = floor_div(numerator(x), denominator(x));
    Rat r = x - Rat(f);
    if (r < Rat(1) / 2) return f;
    if (r > Rat(1) / 2) return f + 1;
    return (f % 2 == 0) ? f : f + 1;
}

inline Int round_rat(const Rat& x, RoundingMode mode) {
    return mode == RoundingMode::HalfUp ? round_half_up(x) : round_half_even(x);
}

// round-half-up of a 100-digit float; tie cases cannot occur for the
// transcendental values this is applied to
inline Int round_real(const Real& x) {
    Real f = boost::multiprecision::floor(x + Real(0.5));
    return f.convert_to<Int>();
}

// "0.99", "-1.5", "3/4" -> exact rational
inline Rat rat_from_string(const std::string& s) {
    if (s.find('/') != std::string::npos) return Rat(s);
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    Int num = 0, den = 1;
    bool frac = false, any = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (frac) throw std::invalid_argument("bad rational literal: " + s);
            frac = true;
            continue;
        }
        if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad rational literal: " + s);
        num = num * 10 + (s[i] - '0');
        if (frac) den *= 10;
        any = true;
    }
    if (!any) throw std::invalid_argument("bad rational literal: " + s);
    Rat r(num, den);
    return neg ? -r : r;
}

// deterministic uniform doubles in [0, 1), identical across platforms
struct SeededRng {
    std::mt19937_64 gen;
    explicit SeededRng(std::uint64_t seed) : gen(seed) {}
    std::uint64_t next_u64() { return gen(); }
    double next_double() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    // uniform in [0, m) without modulo bias for small m
    std::uint64_t next_below(std::uint64_t m) {
        return static_cast<std::uint64_t>(next_double() * static_cast<double>(m));
    }
};

// 17 significant digits, the serialization contract for every float emitted
inline std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace latfact
