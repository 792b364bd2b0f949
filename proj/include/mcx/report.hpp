#pragma once

#include "mcx/io.hpp"
#include "mcx/oracle.hpp"
#include "mcx/star.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mcx {

struct NodeEntry {
    int weight = 0;
    int degree = 0;
    std::size_t e0_dim = 0;
    std::vector<int> orders; // I_{p,k}
    friend bool operator==(const NodeEntry &, const NodeEntry &) = default;
};

struct StationEntry {
    int weight = 0;
    int degree = 0;
    int out_order = 1;
    int in_order = 1;
    std::size_t dim = 0;
    std::size_t delta_rank = 0;
    std::vector<int> summand_orders;
    friend bool operator==(const StationEntry &, const StationEntry &) = default;
};

struct ChainEntry {
    std::vector<StationEntry> stations;
    bool composition_zero = true;
    friend bool operator==(const ChainEntry &, const ChainEntry &) = default;
};

struct CohomologyRow {
    int degree = 0;
    std::size_t rumin = 0;
    std::size_t total = 0;
    std::size_t e_infinity = 0;
    friend bool operator==(const CohomologyRow &, const CohomologyRow &) = default;
};

struct OracleVerdict {
    std::size_t cells = 0;
    std::size_t mismatches = 0;
    bool ok = false;
    friend bool operator==(const OracleVerdict &, const OracleVerdict &) = default;
};

struct StarVerdict {
    std::size_t stations = 0;
    std::vector<std::string> mismatches;
    bool ok = false;
    friend bool operator==(const StarVerdict &, const StarVerdict &) = default;
};

struct Report {
    std::string name;
    int Q = 0;
    int s = 0;
    std::size_t total_dim = 0;
    std::vector<NodeEntry> nodes;
    std::vector<ChainEntry> chains;
    bool chains_truncated = false;
    std::vector<CohomologyRow> cohomology;
    std::optional<OracleVerdict> oracle;
    std::optional<StarVerdict> star;
    friend bool operator==(const Report &, const Report &) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(NodeEntry, weight, degree, e0_dim, orders)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StationEntry, weight, degree, out_order, in_order, dim, delta_rank,
                                   summand_orders)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ChainEntry, stations, composition_zero)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CohomologyRow, degree, rumin, total, e_infinity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(OracleVerdict, cells, mismatches, ok)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StarVerdict, stations, mismatches, ok)

inline void to_json(json &j, const Report &r) {
    j = json{{"name", r.name},           {"Q", r.Q},
             {"s", r.s},                 {"total_dim", r.total_dim},
             {"nodes", r.nodes},         {"chains", r.chains},
             {"chains_truncated", r.chains_truncated},
             {"cohomology", r.cohomology}};
    j["oracle"] = r.oracle ? json(*r.oracle) : json(nullptr);
    j["star"] = r.star ? json(*r.star) : json(nullptr);
}

inline void from_json(const json &j, Report &r) {
    j.at("name").get_to(r.name);
    j.at("Q").get_to(r.Q);
    j.at("s").get_to(r.s);
    j.at("total_dim").get_to(r.total_dim);
    j.at("nodes").get_to(r.nodes);
    j.at("chains").get_to(r.chains);
    j.at("chains_truncated").get_to(r.chains_truncated);
    j.at("cohomology").get_to(r.cohomology);
    r.oracle.reset();
    r.star.reset();
    if (j.contains("oracle") && !j["oracle"].is_null())
        r.oracle = j["oracle"].get<OracleVerdict>();
    if (j.contains("star") && !j["star"].is_null())
        r.star = j["star"].get<StarVerdict>();
}

struct ReportOptions {
    std::size_t max_chains = 64;
    bool oracle = false;
    // star check when the input carries a wedge structure
    bool star = false;
    int star_order = 3;
};

inline Report build_report(const MulticomplexData &mc, const std::string &name, const ReportOptions &opt = {}) {
    HodgeKit kit = build_hodge_kit(mc);
    RuminOperators rum = build_rumin(mc, kit);
    SpectralEngine eng(mc, kit, rum);
    Report rep;
    rep.name = name;
    rep.Q = mc.Q;
    rep.s = mc.s;
    rep.total_dim = mc.total_dim();
    for (const auto &[node, orders] : index_sets(rum))
        rep.nodes.push_back({node.first, node.second, rum.e0_dim(Bidegree::at(node.first, node.second)),
                             std::vector<int>(orders.begin(), orders.end())});
    std::sort(rep.nodes.begin(), rep.nodes.end(), [](const NodeEntry &x, const NodeEntry &y) {
        return std::make_pair(x.degree, x.weight) < std::make_pair(y.degree, y.weight);
    });
    auto chains = enumerate_spectral_complexes(eng, opt.max_chains);
    rep.chains_truncated = chains.truncated;
    for (const auto &c : chains.chains) {
        ChainEntry ce;
        ce.composition_zero = c.composition_zero;
        for (const auto &st : c.stations)
            ce.stations.push_back({st.weight, st.degree, st.out_order, st.in_order, st.space.dim(),
                                   st.delta.rows() && st.delta.cols() ? rank(Matrix(st.delta)) : 0,
                                   std::vector<int>(st.summand_orders.begin(), st.summand_orders.end())});
        rep.chains.push_back(std::move(ce));
    }
    for (int h : rum.tc.degrees())
        rep.cohomology.push_back({h, rumin_cohomology(rum, h).dim, total_cohomology(rum.tc, h).dim,
                                  stabilized_cohomology(eng, h).total});
    if (opt.oracle) {
        auto cmp = compare(classical_pages(rum.tc, eng.infinity()), eng);
        rep.oracle = OracleVerdict{cmp.cells_compared, cmp.mismatches.size(), cmp.ok()};
    }
    if (opt.star && mc.exterior) {
        StarKit star = build_star(mc);
        StarReport sr = check_star_duality(star, mc, kit, rum, eng, opt.star_order);
        StarVerdict sv;
        sv.stations = sr.stations_checked;
        sv.mismatches = sr.mismatches;
        if (!sr.star_square)
            sv.mismatches.push_back("star square sign law");
        if (!sr.isometry)
            sv.mismatches.push_back("star is not an isometry");
        if (!sr.e0_closed)
            sv.mismatches.push_back("star does not preserve e0");
        for (auto [i, okay] : sr.delta_matches)
            if (!okay)
                sv.mismatches.push_back("delta_" + std::to_string(i) + " differs from the star conjugate");
        for (auto [i, okay] : sr.delta_c_matches)
            if (!okay)
                sv.mismatches.push_back("delta_c^" + std::to_string(i) + " differs from the star conjugate");
        sv.ok = sr.ok();
        rep.star = std::move(sv);
    }
    return rep;
}

inline std::string report_json(const Report &r) { return json(r).dump(2) + "\n"; }

inline Report report_from_json(const std::string &text) { return json::parse(text).get<Report>(); }

inline std::string join_ints(const std::vector<int> &xs, const std::string &sep) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i)
        s += (i ? sep : "") + std::to_string(xs[i]);
    return s;
}

inline std::string report_text(const Report &r) {
    std::ostringstream out;
    out << r.name << ": Q=" << r.Q << " s=" << r.s << " total dim " << r.total_dim << "\n";
    out << "nodes (degree, weight, dim e0, I):\n";
    for (const auto &n : r.nodes)
        out << "  k=" << n.degree << " p=" << n.weight << " dim=" << n.e0_dim << " I={" << join_ints(n.orders, ",")
            << "}\n";
    out << r.chains.size() << " spectral complex" << (r.chains.size() == 1 ? "" : "es")
        << (r.chains_truncated ? " (truncated)" : "") << ":\n";
    for (std::size_t c = 0; c < r.chains.size(); ++c) {
        out << "  [" << c + 1 << "] ";
        const auto &ch = r.chains[c];
        for (std::size_t t = 0; t < ch.stations.size(); ++t) {
            const auto &st = ch.stations[t];
            out << "E_{" << st.out_order << "," << st.in_order << "}^(" << st.weight << "," << st.degree
                << ")[" << st.dim << "]";
            // Δ assembled from several d_c^i
            if (st.summand_orders.size() > 1)
                out << "{mixed " << join_ints(st.summand_orders, ",") << "}";
            if (t + 1 < ch.stations.size())
                out << " --D" << st.out_order << "--> ";
        }
        out << (ch.composition_zero ? "  ok" : "  D∘D != 0") << "\n";
    }
    out << "cohomology (degree: Rumin / total / E_inf):\n";
    for (const auto &row : r.cohomology)
        out << "  " << row.degree << ": " << row.rumin << " / " << row.total << " / " << row.e_infinity << "\n";
    if (r.oracle)
        out << "oracle: " << (r.oracle->ok ? "all pages match" : "MISMATCH") << " (" << r.oracle->cells
            << " cells)\n";
    if (r.star) {
        out << "star duality: " << (r.star->ok ? "ok" : "FAILED") << " (" << r.star->stations << " stations)\n";
        for (const auto &m : r.star->mismatches)
            out << "  " << m << "\n";
    }
    return out.str();
}

inline std::string node_id(int weight, int degree) {
    return "n_" + std::to_string(degree) + "_" + std::to_string(weight);
}

// Degree runs left to right, weight bottom to top.
inline std::string report_dot(const Report &r) {
    std::ostringstream out;
    out << "digraph \"" << r.name << "\" {\n";
    out << "  rankdir=LR;\n  node [shape=box];\n";
    std::map<int, std::vector<const NodeEntry *>> by_degree;
    for (const auto &n : r.nodes)
        by_degree[n.degree].push_back(&n);
    for (const auto &[k, nodes] : by_degree) {
        out << "  { rank=same;";
        for (auto it = nodes.rbegin(); it != nodes.rend(); ++it)
            out << " " << node_id((*it)->weight, k) << ";";
        out << " }\n";
    }
    for (const auto &n : r.nodes)
        out << "  " << node_id(n.weight, n.degree) << " [label=\"k=" << n.degree << " p=" << n.weight
            << " dim=" << n.e0_dim << "\"];\n";
    std::set<std::pair<int, int>> present;
    for (const auto &n : r.nodes)
        present.insert({n.weight, n.degree});
    for (const auto &n : r.nodes)
        for (int j : n.orders)
            if (present.count({n.weight + j, n.degree + 1}))
                out << "  " << node_id(n.weight, n.degree) << " -> " << node_id(n.weight + j, n.degree + 1)
                    << " [label=\"d_c^" << j << "\"];\n";
    for (std::size_t c = 0; c < r.chains.size(); ++c) {
        out << "  subgraph cluster_chain" << c + 1 << " {\n    label=\"complex " << c + 1 << "\";\n   ";
        for (const auto &st : r.chains[c].stations)
            out << " " << node_id(st.weight, st.degree) << ";";
        out << "\n  }\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace mcx
