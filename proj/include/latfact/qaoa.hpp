#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "latfact/common.hpp"
#include "latfact/reduction.hpp"

namespace latfact {

// per-coordinate branch of the x substitution: low keeps x in {0,1},
// high keeps x in {-1,0}
enum class Branch { Low, High };

struct EncodingMap {
    std::vector<Branch> branch;
    int n() const { return static_cast<int>(branch.size()); }
};

// diagonal observable offset + sum h_i z_i + sum_{i<j} J_ij z_i z_j whose
// basis-state energies equal the refinement cost F(x); coefficients exact
struct IsingModel {
    int n = 0;
    RVec h;
    RMat J;  // strictly upper triangular
    Rat offset;
};

struct QaoaParams {
    Eigen::VectorXd gamma, beta;
    int p() const { return static_cast<int>(gamma.size()); }
};

struct NmSettings {
    int maxfev = 1000;
    double xatol = 1e-4;
    double fatol = std::numeric_limits<double>::infinity();
    long maxiter = -1;  // -1: no iteration cap
};

struct NmResult {
    Eigen::VectorXd x;
    double fx = 0;
    std::vector<double> evals;  // every objective value in evaluation order
};

struct QaoaRun {
    std::vector<std::vector<double>> traces;  // per restart, E - E_min per evaluation
    Eigen::VectorXd best_angles;
    double best_energy = 0;
    double e_min = 0;
    std::vector<std::uint32_t> top_bitstrings;  // K most probable states of the best run
};

// qubit i sits at bit (n-1-i) of the state index; bit 0 means z = +1
inline int spin_of(std::uint32_t state, int qubit, int n) {
    return (state >> (n - 1 - qubit)) & 1u ? -1 : 1;
}

// expand F(x) = |sum (c_i + x_i) d_i - t|^2 under the branch substitution
std::pair<IsingModel, EncodingMap> build_cost_model(const BabaiBundle& bundle, const IVec& t);

Rat diag_energy(const IsingModel& model, std::uint32_t state);

// double-precision energies of all 2^n states, in state-index order
Eigen::VectorXd diagonal_energies(const IsingModel& model, bool include_offset);

// K lowest diagonal energies, ascending, ties by state index
std::vector<std::pair<Rat, std::uint32_t>> exact_spectrum(const IsingModel& model, long K);

// layered ansatz prod_l e^{-i beta_l H_mix} e^{-i gamma_l H_c} |+>^n;
// the offset only contributes a global phase and is omitted
Eigen::VectorXcd evolve_state(const IsingModel& model, const QaoaParams& params);

double energy_expectation(const Eigen::VectorXcd& state, const IsingModel& model);

NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                     Eigen::VectorXd x0, const NmSettings& settings = {});

QaoaRun run_qaoa(const IsingModel& model, const EncodingMap&, int p, int restarts, int K,
                 std::uint64_t seed);

// z in {+1,-1}^n -> x per branch
Eigen::VectorXi decode_bitstring(const Eigen::VectorXi& z, const EncodingMap& enc);
Eigen::VectorXi decode_index(std::uint32_t state, const EncodingMap& enc);

}  // namespace latfact
