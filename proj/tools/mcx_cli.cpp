#include "mcx/mcx.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace mcx;

struct Loaded {
    MulticomplexData mc;
    std::string name;
};

// Accepts either a multicomplex file or an algebra file; algebras are
// expanded into their polynomial de Rham model.
Loaded load(const std::string &path) {
    json j = read_json_file(path);
    if (looks_like_algebra(j)) {
        CarnotAlgebraSpec spec = algebra_from_json(j);
        auto lie = validate_lie(spec);
        if (!lie.ok())
            throw FormatError(path + ": " + lie.violations.front());
        return {polynomial_derham(spec), path};
    }
    return {multicomplex_from_json(j), path};
}

bool require_valid(const MulticomplexData &mc) {
    auto rep = validate_multicomplex(mc);
    if (rep.ok())
        return true;
    std::cerr << rep.describe();
    return false;
}

int cmd_validate(const std::string &path) {
    json j = read_json_file(path);
    if (looks_like_algebra(j)) {
        auto rep = validate_lie(algebra_from_json(j));
        for (const auto &v : rep.violations)
            std::cout << v << "\n";
        std::cout << (rep.ok() ? "valid stratified algebra\n" : "invalid\n");
        return rep.ok() ? 0 : 1;
    }
    auto rep = validate_multicomplex(multicomplex_from_json(j));
    std::cout << rep.describe() << (rep.ok() ? "valid multicomplex\n" : "invalid\n");
    return rep.ok() ? 0 : 1;
}

int cmd_rumin(const std::string &path) {
    Loaded in = load(path);
    if (!require_valid(in.mc))
        return 1;
    HodgeKit kit = build_hodge_kit(in.mc);
    RuminOperators rum = build_rumin(in.mc, kit);
    std::cout << "e0 dims (degree, weight):\n";
    for (const auto &[bd, e0] : rum.e0)
        if (e0.dim())
            std::cout << "  k=" << bd.degree() << " p=" << bd.a << " dim=" << e0.dim() << "\n";
    std::cout << "d_c pieces (order, source degree, source weight, rank):\n";
    for (const auto &[key, m] : rum.dc_e0)
        if (!m.is_zero())
            std::cout << "  d_c^" << key.first << " from k=" << key.second.degree() << " p=" << key.second.a
                      << " rank " << rank(m) << "\n";
    std::cout << "cohomology (degree: Rumin / total):\n";
    bool agree = rum.routes_agree;
    for (int h : rum.tc.degrees()) {
        auto r = rumin_cohomology(rum, h).dim;
        auto t = total_cohomology(rum.tc, h).dim;
        agree = agree && r == t;
        std::cout << "  " << h << ": " << r << " / " << t << "\n";
    }
    std::cout << (agree ? "Rumin complex consistent\n" : "Rumin complex INCONSISTENT\n");
    return agree ? 0 : 1;
}

int cmd_spectral(const std::string &path, std::size_t max_chains, int pages) {
    Loaded in = load(path);
    if (!require_valid(in.mc))
        return 1;
    ReportOptions opt;
    opt.max_chains = max_chains;
    Report rep = build_report(in.mc, in.name, opt);
    std::cout << report_text(rep);
    if (pages > 0) {
        HodgeKit kit = build_hodge_kit(in.mc);
        RuminOperators rum = build_rumin(in.mc, kit);
        SpectralEngine eng(in.mc, kit, rum);
        std::cout << "page dims (r, degree, weight: dim E_r, rank of the r-th differential):\n";
        for (int r = 1; r <= pages; ++r)
            for (const auto &bd : in.mc.bidegrees())
                std::cout << "  r=" << r << " k=" << bd.degree() << " p=" << bd.a << ": "
                          << eng.page_dim(r, bd.a, bd.degree()) << ", " << eng.delta_rank(r, bd.a, bd.degree())
                          << "\n";
    }
    bool ok = true;
    for (const auto &c : rep.chains)
        ok = ok && c.composition_zero;
    return ok ? 0 : 1;
}

int cmd_oracle(const std::string &path) {
    Loaded in = load(path);
    if (!require_valid(in.mc))
        return 1;
    HodgeKit kit = build_hodge_kit(in.mc);
    RuminOperators rum = build_rumin(in.mc, kit);
    SpectralEngine eng(in.mc, kit, rum);
    auto cmp = compare(classical_pages(rum.tc, eng.infinity()), eng);
    for (const auto &m : cmp.mismatches)
        std::cout << "r=" << m.r << " p=" << m.p << " k=" << m.h << ": " << m.what << "\n";
    std::cout << (cmp.ok() ? "all pages match" : "pages differ") << " (" << cmp.cells_compared << " cells)\n";
    return cmp.ok() ? 0 : 1;
}

int cmd_star(const std::string &path) {
    Loaded in = load(path);
    if (!require_valid(in.mc))
        return 1;
    if (!in.mc.exterior) {
        std::cerr << path << ": no wedge structure; star needs a form model (see `catalog --emit`)\n";
        return 1;
    }
    ReportOptions opt;
    opt.star = true;
    Report rep = build_report(in.mc, in.name, opt);
    for (const auto &m : rep.star->mismatches)
        std::cout << m << "\n";
    std::cout << "star duality " << (rep.star->ok ? "holds" : "fails") << " (" << rep.star->stations
              << " stations)\n";
    return rep.star->ok ? 0 : 1;
}

int cmd_report(const std::string &path, const std::string &format, std::size_t max_chains) {
    Loaded in = load(path);
    if (!require_valid(in.mc))
        return 1;
    ReportOptions opt;
    opt.max_chains = max_chains;
    opt.oracle = true;
    opt.star = in.mc.exterior.has_value();
    Report rep = build_report(in.mc, in.name, opt);
    if (format == "json")
        std::cout << report_json(rep);
    else if (format == "dot")
        std::cout << report_dot(rep);
    else
        std::cout << report_text(rep);
    return 0;
}

int cmd_catalog(const std::string &name, int degree, bool self_dual, const std::string &emit) {
    CarnotAlgebraSpec spec;
    try {
        spec = catalog(name, degree);
    } catch (const std::invalid_argument &e) {
        std::cerr << e.what() << "; try heisenberg1, heisenberg2, engel, abelian-N, step2-free-N\n";
        return 2;
    }
    DerhamOptions opt;
    opt.self_dual = self_dual;
    MulticomplexData mc = polynomial_derham(spec, opt);
    if (emit.empty()) {
        std::cout << algebra_to_json(spec).dump(2) << "\n";
        return 0;
    }
    std::ofstream out(emit);
    if (!out) {
        std::cerr << "cannot write '" << emit << "'\n";
        return 1;
    }
    out << multicomplex_to_json(mc).dump() << "\n";
    std::cout << name << ": wrote " << emit << " (total dim " << mc.total_dim() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Spectral complexes of multicomplexes"};
    app.require_subcommand(1);

    std::string file, format = "text", emit, name;
    std::size_t max_chains = 64;
    int pages = 0, degree = 3;
    bool self_dual = false;

    auto *validate = app.add_subcommand("validate", "check relations or Lie axioms");
    validate->add_option("file", file)->required();
    auto *rumin = app.add_subcommand("rumin", "Rumin complex and its cohomology");
    rumin->add_option("file", file)->required();
    auto *spectral = app.add_subcommand("spectral", "enumerate spectral complexes");
    spectral->add_option("file", file)->required();
    spectral->add_option("--max-chains", max_chains)->check(CLI::PositiveNumber);
    spectral->add_option("--pages", pages, "also print page dims up to this r")->check(CLI::NonNegativeNumber);
    auto *oracle = app.add_subcommand("oracle", "compare with the classical filtration spectral sequence");
    oracle->add_option("file", file)->required();
    auto *star = app.add_subcommand("star", "check Hodge star duality");
    star->add_option("file", file)->required();
    auto *report = app.add_subcommand("report", "full report");
    report->add_option("file", file)->required();
    report->add_option("--format", format)->check(CLI::IsMember({"text", "json", "dot"}));
    report->add_option("--max-chains", max_chains)->check(CLI::PositiveNumber);
    auto *cat = app.add_subcommand("catalog", "built-in stratified algebras");
    cat->add_option("name", name)->required();
    cat->add_option("--poly-degree", degree)->check(CLI::NonNegativeNumber);
    cat->add_option("--emit", emit, "write the polynomial de Rham multicomplex");
    cat->add_flag("--self-dual", self_dual, "use polynomials plus their dual as coefficients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate)
            return cmd_validate(file);
        if (*rumin)
            return cmd_rumin(file);
        if (*spectral)
            return cmd_spectral(file, max_chains, pages);
        if (*oracle)
            return cmd_oracle(file);
        if (*star)
            return cmd_star(file);
        if (*report)
            return cmd_report(file, format, max_chains);
        if (*cat)
            return cmd_catalog(name, degree, self_dual, emit);
    } catch (const FormatError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
