#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "treespec/io.hpp"
#include "treespec/reconstruct.hpp"
#include "treespec/sampling.hpp"
#include "treespec/strata.hpp"

namespace treespec {

// Cross-check suite behind the `verify` command: the multiplicity formula
// (numeric kernel dimension vs beta0(supp) - |boundary|) on sampled stratum
// and manifold points, and the propagation reconstruction against the SVD
// kernel on nonvanishing points.
struct VerificationOutcome {
    int mult_total = 0;
    int mult_agree = 0;
    int rec_total = 0;
    double rec_max_err = 0.0;
    std::vector<std::string> notes;
};

inline VerificationOutcome run_verification(const TreeGraph& g, int samples, Rng& rng) {
    VerificationOutcome out;
    const std::vector<Stratum> strata = singular_components(g);

    for (int i = 0; i < samples; ++i) {
        TorusPoint z({});
        const bool from_stratum = !strata.empty() && i % 2 == 0;
        try {
            z = from_stratum ? sample_stratum(strata[std::size_t(i / 2) % strata.size()], rng, strata)
                             : sample_secular_point(g, rng);
        } catch (const Error& e) {
            out.notes.push_back(std::string("sampling failed: ") + e.what());
            continue;
        }
        const MultiplicityCheck c = verify_multiplicity(g, z);
        ++out.mult_total;
        if (c.agree) {
            ++out.mult_agree;
        } else {
            std::ostringstream note;
            note << "disagreement numeric=" << c.numeric << " predicted=" << c.predicted << " at z=";
            for (std::size_t j = 0; j < z.coords.size(); ++j)
                note << (j ? "," : "") << fmt_double(z.coords[j].real()) << (z.coords[j].imag() < 0 ? "-" : "+")
                     << fmt_double(std::abs(z.coords[j].imag())) << "i";
            out.notes.push_back(note.str());
        }
    }

    for (int i = 0; i < samples; ++i) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            TorusPoint z({});
            try {
                z = sample_secular_point(g, rng);
                const Eigenspace es = eigenspace(g, z);
                if (es.dim != 1) continue;
                const CoeffVector psi = reconstruct_eigenvector(g, z);
                const double err = aligned_distance(psi, es.basis.front());
                ++out.rec_total;
                out.rec_max_err = std::max(out.rec_max_err, err);
                break;
            } catch (const Error& e) {
                if (e.code() == Errc::VanishingVertex || e.code() == Errc::NotOnSecularManifold ||
                    e.code() == Errc::SamplingFailed)
                    continue; // resample: the point was not generic enough
                throw;
            }
        }
    }
    return out;
}

inline std::string verify_human(const VerificationOutcome& v) {
    std::ostringstream os;
    os << "multiplicity-formula: " << v.mult_agree << "/" << v.mult_total << " agree\n";
    os << "reconstruction: max rel err " << fmt_double(v.rec_max_err) << " over " << v.rec_total << " samples\n";
    for (const auto& n : v.notes) os << n << "\n";
    return os.str();
}

inline std::string verify_machine(const VerificationOutcome& v) {
    std::ostringstream os;
    os << "mult_formula\t" << v.mult_agree << "\t" << v.mult_total << "\n";
    os << "reconstruction\t" << fmt_double(v.rec_max_err) << "\t" << v.rec_total << "\n";
    for (const auto& n : v.notes) os << "note\t" << n << "\n";
    return os.str();
}

inline VerificationOutcome parse_verify_machine(const std::string& text) {
    VerificationOutcome v;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split(line, '\t');
        if (fields[0] == "mult_formula" && fields.size() == 3) {
            v.mult_agree = int(detail::to_int(fields[1], line_no, "agree count"));
            v.mult_total = int(detail::to_int(fields[2], line_no, "total"));
        } else if (fields[0] == "reconstruction" && fields.size() == 3) {
            v.rec_max_err = detail::to_double(fields[1], "max error");
            v.rec_total = int(detail::to_int(fields[2], line_no, "total"));
        } else if (fields[0] == "note" && fields.size() >= 2) {
            v.notes.push_back(line.substr(5));
        } else {
            fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad verify record");
        }
    }
    return v;
}

} // namespace treespec
