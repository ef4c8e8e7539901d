#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "treespec/errors.hpp"
#include "treespec/lattice.hpp"
#include "treespec/obstruction.hpp"
#include "treespec/spectrum.hpp"
#include "treespec/strata.hpp"
#include "treespec/tree_graph.hpp"

namespace treespec {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> toks;
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

inline long long to_int(const std::string& s, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected " + what + ", got '" + s + "'");
    }
}

inline double to_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) fail(Errc::ParseError, std::string("expected ") + what + ", got '" + s + "'");
    return v;
}

inline std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<int> parse_int_list(const std::string& csv, const char* what) {
    std::vector<int> out;
    if (csv.empty()) return out;
    for (const std::string& part : split(csv, ','))
        out.push_back(int(to_int(part, 0, what)));
    return out;
}

inline std::string join_ints(const std::vector<int>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// graph files:  "graph n=<edges>", one "edge <j> <src> <tgt>" per edge, and an
// optional "dirichlet <v>..." line; '#' starts a comment.

inline TreeGraph parse_graph(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    std::optional<int> n;
    std::vector<Edge> edges;
    std::vector<int> dirichlet;
    bool saw_dirichlet = false;
    while (std::getline(is, line)) {
        ++line_no;
        const auto toks = detail::tokens_of(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (toks[0] == "graph") {
            if (n) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": repeated graph header");
            if (toks.size() != 2 || toks[1].rfind("n=", 0) != 0)
                fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'graph n=<edges>'");
            n = int(detail::to_int(toks[1].substr(2), line_no, "edge count"));
        } else if (toks[0] == "edge") {
            if (!n) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": edge before graph header");
            if (toks.size() != 4)
                fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'edge <j> <src> <tgt>'");
            edges.push_back({int(detail::to_int(toks[1], line_no, "edge id")),
                             int(detail::to_int(toks[2], line_no, "source vertex")),
                             int(detail::to_int(toks[3], line_no, "target vertex"))});
        } else if (toks[0] == "dirichlet") {
            if (saw_dirichlet) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": repeated dirichlet line");
            saw_dirichlet = true;
            for (std::size_t i = 1; i < toks.size(); ++i)
                dirichlet.push_back(int(detail::to_int(toks[i], line_no, "vertex id")));
        } else {
            fail(Errc::ParseError, "line " + std::to_string(line_no) + ": unknown directive '" + toks[0] + "'");
        }
    }
    if (!n) fail(Errc::ParseError, "missing 'graph n=...' header");
    if (int(edges.size()) != *n)
        fail(Errc::ParseError, "header declares " + std::to_string(*n) + " edges, found " + std::to_string(edges.size()));
    std::map<int, VertexCondition> vertices;
    for (const Edge& e : edges) {
        vertices.emplace(e.src, VertexCondition::Neumann);
        vertices.emplace(e.dst, VertexCondition::Neumann);
    }
    for (int v : dirichlet) {
        auto it = vertices.find(v);
        if (it == vertices.end()) fail(Errc::UnknownVertex, "dirichlet vertex " + std::to_string(v));
        it->second = VertexCondition::Dirichlet;
    }
    return TreeGraph(std::move(edges), std::move(vertices), /*require_contiguous_ids=*/true);
}

inline std::string write_graph(const TreeGraph& g) {
    std::ostringstream os;
    os << "graph n=" << g.n() << "\n";
    for (const Edge& e : g.edges()) os << "edge " << e.id << " " << e.src << " " << e.dst << "\n";
    std::vector<int> dirichlet;
    for (auto& [v, c] : g.vertices())
        if (c == VertexCondition::Dirichlet) dirichlet.push_back(v);
    if (!dirichlet.empty()) {
        os << "dirichlet";
        for (int v : dirichlet) os << " " << v;
        os << "\n";
    }
    return os.str();
}

inline TreeGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open graph file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

// ---------------------------------------------------------------------------
// relation files: one row of n integers per line, '#' comments

inline RelationLattice parse_relations(const std::string& text, int n) {
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    std::vector<std::vector<long long>> rows;
    while (std::getline(is, line)) {
        ++line_no;
        const auto toks = detail::tokens_of(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (int(toks.size()) != n)
            fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                                       " integers, found " + std::to_string(toks.size()));
        std::vector<long long> row;
        row.reserve(toks.size());
        for (const auto& t : toks) row.push_back(detail::to_int(t, line_no, "integer coefficient"));
        rows.push_back(std::move(row));
    }
    return RelationLattice(n, std::move(rows));
}

inline std::string write_relations(const RelationLattice& rel) {
    std::ostringstream os;
    for (const auto& row : rel.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
        os << "\n";
    }
    return os.str();
}

inline RelationLattice load_relations(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open relations file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_relations(buf.str(), n);
}

// ---------------------------------------------------------------------------
// stratum reports

inline std::string strata_human(const std::vector<Stratum>& strata) {
    if (strata.empty()) return "none\n";
    std::ostringstream os;
    for (std::size_t i = 0; i < strata.size(); ++i) {
        const Stratum& s = strata[i];
        os << "stratum " << (i + 1) << "\n";
        os << "  deleted: " << (s.h.deleted.empty() ? "-" : detail::join_ints(s.h.deleted, ' ')) << "\n";
        os << "  m: " << s.m << "\n";
        os << "  codim: " << s.codim << "\n";
        for (std::size_t c = 0; c < s.h.kept.size(); ++c)
            os << "  component {" << detail::join_ints(s.h.kept[c], ',') << "}: " << s.systems[c].str() << "\n";
    }
    return os.str();
}

// one stratum per line: deleted=..<TAB>m=..<TAB>codim=..<TAB>components=..<TAB>systems=..
// components are comma-lists joined by '|', systems are polynomial strings joined by '|'
inline std::string strata_machine(const std::vector<Stratum>& strata) {
    std::ostringstream os;
    for (const Stratum& s : strata) {
        os << "deleted=" << detail::join_ints(s.h.deleted, ',') << "\tm=" << s.m << "\tcodim=" << s.codim
           << "\tcomponents=";
        for (std::size_t c = 0; c < s.h.kept.size(); ++c) os << (c ? "|" : "") << detail::join_ints(s.h.kept[c], ',');
        os << "\tsystems=";
        for (std::size_t c = 0; c < s.systems.size(); ++c) os << (c ? "|" : "") << s.systems[c].str();
        os << "\n";
    }
    return os.str();
}

struct StratumRecord {
    std::vector<int> deleted;
    int m = 0;
    int codim = 0;
    std::vector<std::vector<int>> components;
    std::vector<MultiPoly> systems;
};

inline std::vector<StratumRecord> parse_strata_machine(const std::string& text, int nvars) {
    std::vector<StratumRecord> out;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 5) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
        const auto expect = [&](std::size_t i, const char* key) -> std::string {
            const std::string prefix = std::string(key) + "=";
            if (fields[i].rfind(prefix, 0) != 0)
                fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected field '" + key + "'");
            return fields[i].substr(prefix.size());
        };
        StratumRecord r;
        r.deleted = detail::parse_int_list(expect(0, "deleted"), "vertex id");
        r.m = int(detail::to_int(expect(1, "m"), line_no, "type"));
        r.codim = int(detail::to_int(expect(2, "codim"), line_no, "codimension"));
        for (const auto& comp : detail::split(expect(3, "components"), '|'))
            r.components.push_back(detail::parse_int_list(comp, "edge id"));
        for (const auto& sys : detail::split(expect(4, "systems"), '|')) r.systems.push_back(MultiPoly::parse(sys, nvars));
        out.push_back(std::move(r));
    }
    return out;
}

inline std::string strata_machine(const std::vector<StratumRecord>& records) {
    std::ostringstream os;
    for (const StratumRecord& s : records) {
        os << "deleted=" << detail::join_ints(s.deleted, ',') << "\tm=" << s.m << "\tcodim=" << s.codim
           << "\tcomponents=";
        for (std::size_t c = 0; c < s.components.size(); ++c) os << (c ? "|" : "") << detail::join_ints(s.components[c], ',');
        os << "\tsystems=";
        for (std::size_t c = 0; c < s.systems.size(); ++c) os << (c ? "|" : "") << s.systems[c].str();
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// spectrum reports

inline std::string spectrum_human(const SpectrumReport& rep) {
    std::ostringstream os;
    for (const auto& e : rep.eigenvalues)
        os << "k=" << fmt_double(e.k) << " mult=" << e.multiplicity << " residual=" << fmt_double(e.residual) << "\n";
    os << "mingap_estimate=" << fmt_double(rep.mingap_estimate) << "\n";
    return os.str();
}

// column order: window k_min k_max / eig k mult residual / mingap_estimate value
inline std::string spectrum_machine(const SpectrumReport& rep) {
    std::ostringstream os;
    os << "window\t" << fmt_double(rep.k_min) << "\t" << fmt_double(rep.k_max) << "\n";
    for (const auto& e : rep.eigenvalues)
        os << "eig\t" << fmt_double(e.k) << "\t" << e.multiplicity << "\t" << fmt_double(e.residual) << "\n";
    os << "mingap_estimate\t" << fmt_double(rep.mingap_estimate) << "\n";
    return os.str();
}

inline SpectrumReport parse_spectrum_machine(const std::string& text) {
    SpectrumReport rep;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    bool saw_window = false, saw_mingap = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split(line, '\t');
        if (fields[0] == "window" && fields.size() == 3) {
            rep.k_min = detail::to_double(fields[1], "window start");
            rep.k_max = detail::to_double(fields[2], "window end");
            saw_window = true;
        } else if (fields[0] == "eig" && fields.size() == 4) {
            EigenvalueHit e;
            e.k = detail::to_double(fields[1], "eigenvalue");
            e.multiplicity = int(detail::to_int(fields[2], line_no, "multiplicity"));
            e.residual = detail::to_double(fields[3], "residual");
            rep.eigenvalues.push_back(e);
        } else if (fields[0] == "mingap_estimate" && fields.size() == 2) {
            rep.mingap_estimate = detail::to_double(fields[1], "mingap");
            saw_mingap = true;
        } else {
            fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad spectrum record");
        }
    }
    if (!saw_window || !saw_mingap) fail(Errc::ParseError, "incomplete spectrum report");
    return rep;
}

// ---------------------------------------------------------------------------
// obstruction reports

inline std::string obstruction_human(const ObstructionReport& rep) {
    std::ostringstream os;
    os << "closure class: " << rep.closure.str() << " (lattice rank " << rep.lattice_rank << ")\n";
    for (std::size_t i = 0; i < rep.products.size(); ++i) {
        const StratumProduct& p = rep.products[i];
        os << "stratum " << (i + 1) << ": deleted={" << detail::join_ints(p.stratum.h.deleted, ',') << "} codim="
           << p.stratum.codim << " class=" << p.cls.str();
        if (p.complementary) os << " product=" << *p.product;
        else os << " not complementary - no obstruction from this pairing";
        os << "\n";
    }
    os << "verdict: " << (rep.verdict == Verdict::Obstructed ? "OBSTRUCTED" : "INCONCLUSIVE") << "\n";
    return os.str();
}

inline std::string obstruction_machine(const ObstructionReport& rep) {
    std::ostringstream os;
    os << "closure\t" << rep.lattice_rank << "\t" << rep.closure.str() << "\n";
    for (std::size_t i = 0; i < rep.products.size(); ++i) {
        const StratumProduct& p = rep.products[i];
        os << "stratum\t" << (i + 1) << "\t" << p.stratum.codim << "\t" << p.cls.str() << "\t"
           << (p.complementary ? std::to_string(*p.product) : std::string("nc")) << "\n";
    }
    os << "verdict\t" << (rep.verdict == Verdict::Obstructed ? "OBSTRUCTED" : "INCONCLUSIVE") << "\n";
    return os.str();
}

struct ObstructionRecord {
    int lattice_rank = 0;
    ExteriorClass closure{0};
    struct Row {
        int index = 0;
        int codim = 0;
        ExteriorClass cls{0};
        std::optional<long long> product;
    };
    std::vector<Row> rows;
    std::string verdict;
};

inline ObstructionRecord parse_obstruction_machine(const std::string& text, int n) {
    ObstructionRecord rec;
    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = detail::split(line, '\t');
        if (fields[0] == "closure" && fields.size() == 3) {
            rec.lattice_rank = int(detail::to_int(fields[1], line_no, "rank"));
            rec.closure = ExteriorClass::parse(fields[2], n);
        } else if (fields[0] == "stratum" && fields.size() == 5) {
            ObstructionRecord::Row row;
            row.index = int(detail::to_int(fields[1], line_no, "index"));
            row.codim = int(detail::to_int(fields[2], line_no, "codim"));
            row.cls = ExteriorClass::parse(fields[3], n);
            if (fields[4] != "nc") row.product = detail::to_int(fields[4], line_no, "product");
            rec.rows.push_back(std::move(row));
        } else if (fields[0] == "verdict" && fields.size() == 2) {
            rec.verdict = fields[1];
        } else {
            fail(Errc::ParseError, "line " + std::to_string(line_no) + ": bad obstruction record");
        }
    }
    if (rec.verdict.empty()) fail(Errc::ParseError, "missing verdict");
    return rec;
}

inline std::string obstruction_machine(const ObstructionRecord& rec) {
    std::ostringstream os;
    os << "closure\t" << rec.lattice_rank << "\t" << rec.closure.str() << "\n";
    for (const auto& row : rec.rows)
        os << "stratum\t" << row.index << "\t" << row.codim << "\t" << row.cls.str() << "\t"
           << (row.product ? std::to_string(*row.product) : std::string("nc")) << "\n";
    os << "verdict\t" << rec.verdict << "\n";
    return os.str();
}

} // namespace treespec
