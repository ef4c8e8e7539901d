#pragma once

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "treespec/io.hpp"
#include "treespec/verify.hpp"

namespace treespec {

namespace detail {

inline std::vector<double> parse_lengths(const std::string& csv) {
    std::vector<double> out;
    for (const auto& part : split(csv, ',')) out.push_back(to_double(part, "length"));
    return out;
}

inline std::pair<double, double> parse_window(const std::string& csv) {
    const auto parts = split(csv, ',');
    if (parts.size() != 2) fail(Errc::ParseError, "window must be 'K0,K1'");
    return {to_double(parts[0], "window start"), to_double(parts[1], "window end")};
}

} // namespace detail

// Exit codes: 0 success, 2 file/usage/parse errors, 3 precondition failures,
// 4 internal cross-check failures.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"secular manifolds, strata, obstructions and spectra of metric trees"};
    app.require_subcommand(1);

    std::string graph_path, relations_path, lengths_csv, window_csv, format = "human";
    int m_filter = 0;
    long long seed = 0;
    int samples = 100;
    double k_max = 0.0;
    SpectrumOptions sopts;

    const auto add_common = [&](CLI::App* c) {
        c->add_option("graph", graph_path, "graph file")->required();
        c->add_option("--format", format, "human|machine")->check(CLI::IsMember({"human", "machine"}));
    };

    CLI::App* c_secular = app.add_subcommand("secular", "canonical secular polynomial");
    add_common(c_secular);

    CLI::App* c_strata = app.add_subcommand("strata", "type-m strata of the singular locus");
    add_common(c_strata);
    c_strata->add_option("--m", m_filter, "only strata of this type (default: all m >= 2)");

    CLI::App* c_obstruction = app.add_subcommand("obstruction", "intersection-product obstruction");
    add_common(c_obstruction);
    c_obstruction->add_option("--relations", relations_path, "dependence relations file")->required();

    CLI::App* c_spectrum = app.add_subcommand("spectrum", "numeric spectrum along gamma_l");
    add_common(c_spectrum);
    c_spectrum->add_option("--lengths", lengths_csv, "edge lengths l1,l2,...")->required();
    c_spectrum->add_option("--kmax", k_max, "scan limit")->required();
    c_spectrum->add_option("--dk", sopts.dk, "grid step (default pi/(8 sum l))");
    c_spectrum->add_option("--tol-rank", sopts.tol_rank, "rank tolerance");
    c_spectrum->add_option("--tol-root", sopts.tol_root, "root refinement tolerance");

    CLI::App* c_mingap = app.add_subcommand("mingap", "minimum spectral gap over a window");
    add_common(c_mingap);
    c_mingap->add_option("--lengths", lengths_csv, "edge lengths l1,l2,...")->required();
    c_mingap->add_option("--window", window_csv, "window K0,K1")->required();
    c_mingap->add_option("--tol-rank", sopts.tol_rank, "rank tolerance");
    c_mingap->add_option("--tol-root", sopts.tol_root, "root refinement tolerance");

    CLI::App* c_verify = app.add_subcommand("verify", "multiplicity-formula and reconstruction cross-checks");
    add_common(c_verify);
    c_verify->add_option("--seed", seed, "RNG seed")->required();
    c_verify->add_option("--samples", samples, "sample count per suite");
    c_verify->add_option("--tol-rank", sopts.tol_rank, "rank tolerance");

    try {
        std::vector<std::string> argv(args);
        argv.insert(argv.begin(), "treespec");
        std::vector<const char*> cargv;
        for (const auto& a : argv) cargv.push_back(a.c_str());
        app.parse(int(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const bool machine = format == "machine";
    try {
        const TreeGraph g = load_graph(graph_path);
        if (c_secular->parsed()) {
            out << secular_polynomial(g).str() << "\n";
        } else if (c_strata->parsed()) {
            std::vector<Stratum> strata;
            if (c_strata->count("--m")) {
                for (const auto& h : enumerate_type_m(g, m_filter)) strata.push_back(build_stratum(g, h));
            } else {
                strata = singular_components(g);
            }
            out << (machine ? strata_machine(strata) : strata_human(strata));
        } else if (c_obstruction->parsed()) {
            const RelationLattice rel = load_relations(relations_path, ambient_vars(g));
            const ObstructionReport rep = discreteness_obstruction(g, rel);
            out << (machine ? obstruction_machine(rep) : obstruction_human(rep));
        } else if (c_spectrum->parsed()) {
            const SpectrumReport rep = compute_spectrum(g, detail::parse_lengths(lengths_csv), k_max, sopts);
            out << (machine ? spectrum_machine(rep) : spectrum_human(rep));
        } else if (c_mingap->parsed()) {
            const auto [k0, k1] = detail::parse_window(window_csv);
            const double mg = mingap_estimate(g, detail::parse_lengths(lengths_csv), k0, k1, sopts);
            out << (machine ? "mingap_estimate\t" : "mingap_estimate=") << fmt_double(mg) << "\n";
        } else if (c_verify->parsed()) {
            Rng rng{std::uint64_t(seed)};
            const VerificationOutcome v = run_verification(g, samples, rng);
            out << (machine ? verify_machine(v) : verify_human(v));
            const bool mult_ok = v.mult_total > 0 && double(v.mult_agree) >= 0.95 * double(v.mult_total);
            const bool rec_ok = v.rec_total > 0 && v.rec_max_err < 1e-8;
            if (!mult_ok || !rec_ok) {
                err << "error: cross-check thresholds not met\n";
                return 4;
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrKind::Parse: return 2;
        case ErrKind::Precondition: return 3;
        case ErrKind::Internal: return 4;
        }
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

} // namespace treespec
