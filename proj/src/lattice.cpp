#include "latfact/lattice.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace latfact {

Permutation::Permutation(std::vector<int> m) : map(std::move(m)) {
    std::vector<bool> seen(map.size(), false);
    for (int v : map) {
        if (v < 1 || v > static_cast<int>(map.size()) || seen[v - 1])
            throw ConfigInvalid("permutation is not a bijection of {1..n}");
        seen[v - 1] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> m(n);
    for (int i = 0; i < n; ++i) m[i] = i + 1;
    return Permutation(std::move(m));
}

Int scaled_log(double c, const Int& x) {
    Real scale = boost::multiprecision::pow(Real(10), Real(c));
    Real lx = boost::multiprecision::log(Real(x));
    return round_real(scale * lx);
}

CvpInstance build_cvp_instance(const Int& N, int n, double c, const Permutation& f,
                               RoundingMode mode) {
    if (n < 1 || c <= 0 || N < 2) throw ConfigInvalid("need n >= 1, c > 0, N >= 2");
    if (f.n() != n) throw ConfigInvalid("permutation size mismatch");
    FactorBase fb = gen_factor_base(n);
    CvpInstance inst{N, n, c, f, mode, IMat::Zero(n + 1, n), IVec::Zero(n + 1)};
    for (int j = 1; j <= n; ++j) {
        Int diag = round_rat(Rat(f(j), 2), mode);
        if (diag == 0) throw ZeroDiagonal();
        inst.basis(j - 1, j - 1) = diag;
        inst.basis(n, j - 1) = scaled_log(c, fb.primes[j]);
    }
    inst.target(n) = scaled_log(c, N);
    return inst;
}

SchnorrLattice build_schnorr_lattice(const Int& N, int n, const Permutation& f,
                                     const Int& precision) {
    if (n < 1) throw ConfigInvalid("need n >= 1");
    if (f.n() != n) throw ConfigInvalid("permutation size mismatch");
    FactorBase fb = gen_factor_base(n);
    Real nroot = boost::multiprecision::pow(Real(N), Real(1) / Real(n + 1));
    Real prec(precision);
    SchnorrLattice lat{N, n, precision, IMat::Zero(n + 1, n + 1)};
    for (int i = 1; i <= n; ++i) {
        lat.basis(i - 1, i - 1) = f(i);
        lat.basis(n, i - 1) = round_real(prec * nroot * boost::multiprecision::log(Real(fb.primes[i])));
    }
    lat.basis(n, n) = round_real(prec * nroot * boost::multiprecision::log(Real(N)));
    return lat;
}

Eigen::VectorXi coords_in_original_basis(const IVec& v, const CvpInstance& inst) {
    Eigen::VectorXi e(inst.n);
    for (int j = 0; j < inst.n; ++j) {
        const Int& diag = inst.basis(j, j);
        if (diag == 0) throw ZeroDiagonal();
        if (v(j) % diag != 0) throw NotInLattice();
        Int q = v(j) / diag;
        e(j) = q.convert_to<int>();
    }
    Int last = 0;
    for (int j = 0; j < inst.n; ++j) last += Int(e(j)) * inst.basis(inst.n, j);
    if (last != v(inst.n)) throw NotInLattice();
    return e;
}

void write_instance_json(const CvpInstance& inst, std::ostream& os) {
    os << "{\n  \"N\": \"" << inst.N << "\",\n  \"n\": " << inst.n
       << ",\n  \"c\": " << fmt17(inst.c) << ",\n  \"rounding_mode\": \""
       << (inst.rounding == RoundingMode::HalfUp ? "half-up" : "half-even") << "\",\n  \"f\": [";
    for (int j = 0; j < inst.n; ++j) os << (j ? ", " : "") << inst.f.map[j];
    os << "],\n  \"basis_rows\": [\n";
    for (int i = 0; i <= inst.n; ++i) {
        os << "    [";
        for (int j = 0; j < inst.n; ++j) os << (j ? ", " : "") << "\"" << inst.basis(i, j) << "\"";
        os << (i < inst.n ? "],\n" : "]\n");
    }
    os << "  ],\n  \"target\": [";
    for (int i = 0; i <= inst.n; ++i) os << (i ? ", " : "") << "\"" << inst.target(i) << "\"";
    os << "]\n}\n";
}

CvpInstance read_instance_json(std::istream& is) {
    nlohmann::json j = nlohmann::json::parse(is);
    int n = j.at("n").get<int>();
    std::vector<int> fmap = j.at("f").get<std::vector<int>>();
    CvpInstance inst{Int(j.at("N").get<std::string>()),
                     n,
                     j.at("c").get<double>(),
                     Permutation(fmap),
                     j.at("rounding_mode").get<std::string>() == "half-even" ? RoundingMode::HalfEven
                                                                             : RoundingMode::HalfUp,
                     IMat::Zero(n + 1, n),
                     IVec::Zero(n + 1)};
    const auto& rows = j.at("basis_rows");
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k < n; ++k) inst.basis(i, k) = Int(rows.at(i).at(k).get<std::string>());
    const auto& t = j.at("target");
    for (int i = 0; i <= n; ++i) inst.target(i) = Int(t.at(i).get<std::string>());
    return inst;
}

}  // namespace latfact
