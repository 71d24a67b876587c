#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "latfact/pipeline.hpp"
#include "latfact/reduction.hpp"

using namespace latfact;

namespace {

struct Preset {
    const char* N;
    int n;
    int b2;
    double c;
};

Preset preset_of(const std::string& name) {
    if (name == "table1-row1") return {"1961", 3, 15, 1.5};
    if (name == "table1-row2") return {"48567227", 5, 50, 4.0};
    if (name == "table1-row3") return {"261980999226229", 10, 200, 4.0};
    throw CLI::ValidationError("--preset", "unknown preset " + name);
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << text;
}

PermStrategy parse_perms(const std::string& s, long& cap) {
    if (s == "exhaustive") return PermStrategy::Exhaustive;
    if (s.rfind("sample:", 0) == 0) {
        cap = std::stol(s.substr(7));
        return PermStrategy::Sample;
    }
    throw CLI::ValidationError("--perms", "expected exhaustive or sample:<cap>");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice + variational sr-pair factorization harness"};
    app.require_subcommand(1);

    auto* factor = app.add_subcommand("factor", "run the full factorization pipeline");
    std::string f_n, f_delta = "3/4", f_backend = "exact", f_perms, f_out;
    int f_qubits = 0, f_b2 = 0, f_k = 10, f_layers = 3;
    long f_maxrel = -1;
    double f_c = 0;
    bool f_sort = false, f_fallback = false;
    std::uint64_t f_seed = 1;
    factor->add_option("--n-int", f_n, "integer to factor")->required();
    factor->add_option("--qubits", f_qubits, "lattice base size n")->required();
    factor->add_option("--b2", f_b2, "checking base size")->required();
    factor->add_option("--c", f_c, "rounding parameter")->required();
    factor->add_option("--delta", f_delta, "LLL delta, exact rational or decimal");
    factor->add_flag("--sort", f_sort, "sort reduced columns by norm before nearest plane");
    factor->add_option("--backend", f_backend, "candidate source")
        ->check(CLI::IsMember({"exact", "qaoa"}));
    factor->add_option("--k", f_k, "candidates per instance");
    factor->add_option("--layers", f_layers, "ansatz depth p");
    factor->add_option("--max-relations", f_maxrel, "stop after this many relations (-1: b2+2)");
    factor->add_option("--perms", f_perms, "exhaustive or sample:<cap>");
    factor->add_flag("--fallback", f_fallback, "top up with non-lattice relations");
    factor->add_option("--seed", f_seed, "RNG seed");
    factor->add_option("--out", f_out, "report JSON path (stdout when omitted)");

    auto* census = app.add_subcommand("census", "distinct sr-pairs per (delta, sort) variant");
    std::string c_n, c_variants = "default3", c_out;
    int c_qubits = 0, c_b2 = 0;
    double c_c = 0;
    std::uint64_t c_seed = 1;
    census->add_option("--n-int", c_n, "integer to factor")->required();
    census->add_option("--qubits", c_qubits, "lattice base size n")->required();
    census->add_option("--b2", c_b2, "checking base size")->required();
    census->add_option("--c", c_c, "rounding parameter")->required();
    census->add_option("--variants", c_variants, "variant bundle")
        ->check(CLI::IsMember({"default3"}));
    census->add_option("--seed", c_seed, "RNG seed, used when sampling permutations");
    census->add_option("--out", c_out, "census CSV path (stdout when omitted)");

    auto* compare = app.add_subcommand("compare", "variant agreement matrix for a preset");
    std::string m_preset, m_out;
    compare->add_option("--preset", m_preset, "table1-row1|2|3")->required();
    compare->add_option("--out", m_out, "matrix JSON path (stdout when omitted)");

    auto* converge = app.add_subcommand("converge", "optimizer gap traces for a preset");
    std::string v_preset, v_out;
    int v_layers = 3, v_restarts = 10;
    std::uint64_t v_seed = 1;
    converge->add_option("--preset", v_preset, "table1-row1|2|3")->required();
    converge->add_option("--layers", v_layers, "ansatz depth p");
    converge->add_option("--restarts", v_restarts, "independent angle initializations");
    converge->add_option("--seed", v_seed, "RNG seed")->required();
    converge->add_option("--out", v_out, "trace CSV path")->required();

    auto* spectrum = app.add_subcommand("spectrum", "lowest diagonal energies of an instance");
    std::string s_path;
    int s_k = 10;
    spectrum->add_option("--instance", s_path, "instance JSON path")->required();
    spectrum->add_option("--k", s_k, "how many states");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*factor) {
            RunConfig cfg;
            cfg.N = Int(f_n);
            cfg.n = f_qubits;
            cfg.b2 = f_b2;
            cfg.c = f_c;
            cfg.delta = rat_from_string(f_delta);
            cfg.sort = f_sort;
            cfg.backend = f_backend == "qaoa" ? Backend::QaoaSimulated : Backend::ExactSpectrum;
            cfg.K = f_k;
            cfg.p = f_layers;
            cfg.max_relations = f_maxrel;
            if (f_perms.empty()) f_perms = f_qubits <= 8 ? "exhaustive" : "sample:10000";
            cfg.perms = parse_perms(f_perms, cfg.sample_cap);
            cfg.fallback = f_fallback;
            cfg.seed = f_seed;
            const RunReport rep = run_factorization(cfg);
            std::ostringstream ss;
            write_report_json(rep, ss);
            emit(ss.str(), f_out);
            if (rep.success)
                std::cerr << "factors: " << rep.p << " * " << rep.q << " = " << cfg.N << "\n";
            else
                std::cerr << "Fail: " << rep.relations.size() << " relations, kernel dimension "
                          << rep.kernel_dim << "\n";
            std::cerr << "stages ms: lattice " << rep.timings.lattice_ms << ", backend "
                      << rep.timings.backend_ms << ", relations " << rep.timings.relations_ms
                      << ", linalg " << rep.timings.linalg_ms << ", total "
                      << rep.timings.total_ms << "\n";
            return rep.success ? 0 : 2;
        }
        if (*census) {
            const std::vector<std::pair<Rat, bool>> variants = {
                {Rat(3) / 4, false}, {Rat(3) / 4, true}, {Rat(99) / 100, false}};
            const CensusTable table = permutation_census(Int(c_n), c_qubits, c_b2, c_c, variants,
                                                         10, RoundingMode::HalfUp, 10000, c_seed);
            std::ostringstream ss;
            write_census_csv(table, ss);
            emit(ss.str(), c_out);
            for (const CensusVariant& var : table.variants)
                std::cerr << "delta=" << var.delta << " sort=" << (var.sort ? "on" : "off")
                          << ": " << var.distinct_pairs.size() << " distinct sr-pairs over "
                          << var.permutations << " permutations\n";
            return 0;
        }
        if (*compare) {
            const Preset pre = preset_of(m_preset);
            const ComparisonReport rep =
                reproduce_comparison(Int(pre.N), pre.n, pre.b2, pre.c, 10, 8, 12345);
            std::ostringstream ss;
            write_comparison_json(rep, ss);
            emit(ss.str(), m_out);
            return 0;
        }
        if (*converge) {
            const Preset pre = preset_of(v_preset);
            const ConvergenceResult res =
                convergence_experiment(Int(pre.N), pre.n, pre.c, v_layers, v_restarts, v_seed);
            std::ostringstream ss;
            write_traces_csv(res, ss);
            emit(ss.str(), v_out);
            std::cerr << "e_min " << fmt17(res.e_min) << ", best final gap "
                      << fmt17(res.best_final_gap) << "\n";
            return 0;
        }
        if (*spectrum) {
            std::ifstream in(s_path);
            if (!in) throw std::runtime_error("cannot open " + s_path);
            const CvpInstance inst = read_instance_json(in);
            const BabaiBundle bundle = babai_nearest_plane(inst.basis, inst.target);
            const auto [model, enc] = build_cost_model(bundle, inst.target);
            const FactorBase fb_n = gen_factor_base(inst.n);
            std::ostringstream ss;
            for (const auto& [energy, state] : exact_spectrum(model, s_k)) {
                ss << state << "  E=" << energy << "  x=(";
                const Eigen::VectorXi x = decode_index(state, enc);
                for (int i = 0; i < x.size(); ++i) ss << (i ? "," : "") << x(i);
                IVec coeff = bundle.c;
                for (int i = 0; i < x.size(); ++i) coeff(i) += x(i);
                const IVec v_new = bundle.d * coeff;
                try {
                    const auto uv = extract_uv(coords_in_original_basis(v_new, inst), fb_n);
                    ss << ")  u=" << uv.first << "  v=" << uv.second << "\n";
                } catch (const NotInLattice&) {
                    ss << ")  outside lattice\n";
                }
            }
            std::cout << ss.str();
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
