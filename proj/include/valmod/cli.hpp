#pragma once
// Command-line surface: every operation behind parseable text I/O.
//
// Exit codes: 0 success, 1 domain error (diagnostic line carries the error
// name), 2 parse/usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "valmod/config.hpp"
#include "valmod/errors.hpp"
#include "valmod/fieldtower.hpp"
#include "valmod/hensel.hpp"
#include "valmod/pptheory.hpp"
#include "valmod/scenarios.hpp"
#include "valmod/series.hpp"
#include "valmod/skewpoly.hpp"
#include "valmod/tau_chain.hpp"
#include "valmod/textio.hpp"

namespace valmod::cli {

inline std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"valued modules over twisted polynomial rings"};
    app.fallthrough();
    app.set_config("--config");
    app.add_option("--p", cfg.p, "characteristic (prime)");
    app.add_option("--s", cfg.s, "phi exponent: phi(x) = x^(p^s)");
    app.add_option("--mmax", cfg.m_max, "largest admitted extension degree");
    app.add_option("--kmax", cfg.k_max, "exponent denominator budget p^kmax");
    app.add_option("--precision", cfg.precision, "absolute series cutoff");
    app.add_option("--degbound", cfg.factor_deg_bound, "factorization degree bound");
    app.add_option("--seed", cfg.seed, "seed for randomized suites");
    app.require_subcommand(0);

    std::string a1, a2, a3;
    std::vector<std::string> rest;
    std::uint32_t theory_deg = 1, theory_kdeg = 1, hull_deg = 4;
    int which = 0;
    enum {
        POLY_MUL = 1, POLY_DIVMOD, POLY_GCD, POLY_LCLM, POLY_FACTOR, POLY_CONJ,
        ANN_ROOTS, ANN_ETA,
        SOLVE_DIV, SOLVE_HENSEL, SOLVE_TROOT,
        SER_VAL, SER_ACT, SER_DECOMP, SER_REG, SER_RES,
        PP_SIMPLIFY, PP_INDEX, PP_SAT,
        TH_OF, TH_EQUIV, TH_AKE,
        DEMO_CE, CHAIN_CHECK, HULL_PROBE
    };
    auto leaf = [&](CLI::App* parent, const char* name, const char* desc, int id) {
        CLI::App* sc = parent->add_subcommand(name, desc);
        sc->callback([&which, id] { which = id; });
        return sc;
    };

    CLI::App* poly = app.add_subcommand("poly", "twisted polynomial arithmetic");
    {
        CLI::App* sc = leaf(poly, "mul", "product of two polynomials", POLY_MUL);
        sc->add_option("a", a1)->required();
        sc->add_option("b", a2)->required();
    }
    {
        CLI::App* sc = leaf(poly, "divmod", "right division q = d*quot + rem", POLY_DIVMOD);
        sc->add_option("q", a1)->required();
        sc->add_option("d", a2)->required();
    }
    {
        CLI::App* sc = leaf(poly, "gcd", "monic common divisor of maximal degree", POLY_GCD);
        sc->add_option("a", a1)->required();
        sc->add_option("b", a2)->required();
    }
    {
        CLI::App* sc = leaf(poly, "lclm", "least-degree common right multiple", POLY_LCLM);
        sc->add_option("a", a1)->required();
        sc->add_option("b", a2)->required();
    }
    leaf(poly, "factor", "factor into t-power and monic irreducibles", POLY_FACTOR)
        ->add_option("q", a1)->required();
    {
        CLI::App* sc = leaf(poly, "conjugacy", "conjugacy representative, or a witness for a pair",
                            POLY_CONJ);
        sc->add_option("q", a1)->required();
        sc->add_option("r", a2);
    }

    CLI::App* ann = app.add_subcommand("ann", "annihilator sets");
    leaf(ann, "roots", "all roots in the torsion tower", ANN_ROOTS)->add_option("r", a1)->required();
    leaf(ann, "eta", "annihilator cardinality", ANN_ETA)->add_option("r", a1)->required();

    CLI::App* solve = app.add_subcommand("solve", "divisibility in the series model");
    {
        CLI::App* sc = leaf(solve, "div", "solve x.r = y", SOLVE_DIV);
        sc->add_option("r", a1)->required();
        sc->add_option("y", a2)->required();
    }
    {
        CLI::App* sc = leaf(solve, "hensel", "hensel lift on the positive part", SOLVE_HENSEL);
        sc->add_option("r", a1)->required();
        sc->add_option("y", a2)->required();
    }
    leaf(solve, "troot", "the unique t-root", SOLVE_TROOT)->add_option("y", a1)->required();

    CLI::App* ser = app.add_subcommand("series", "series model queries");
    leaf(ser, "val", "valuation", SER_VAL)->add_option("x", a1)->required();
    {
        CLI::App* sc = leaf(ser, "act", "module action x.r", SER_ACT);
        sc->add_option("x", a1)->required();
        sc->add_option("r", a2)->required();
    }
    leaf(ser, "decompose", "torsion/theta/positive/negative split", SER_DECOMP)
        ->add_option("x", a1)->required();
    {
        CLI::App* sc = leaf(ser, "regular", "regularity (optionally for one r)", SER_REG);
        sc->add_option("x", a1)->required();
        sc->add_option("r", a2);
    }
    {
        CLI::App* sc = leaf(ser, "residue", "coefficient at an exponent", SER_RES);
        sc->add_option("x", a1)->required();
        sc->add_option("gamma", a2)->required();
    }

    CLI::App* pp = app.add_subcommand("pp", "primitive-positive formulas");
    leaf(pp, "simplify", "reduce to an atomic system", PP_SIMPLIFY)->add_option("phi", a1)->required();
    {
        CLI::App* sc = leaf(pp, "index", "relative index |psi(M)/phi(M)|", PP_INDEX);
        sc->add_option("phi", a1)->required();
        sc->add_option("psi", a2)->required();
        sc->add_option("descriptor", a3)->required();
    }
    {
        CLI::App* sc = leaf(pp, "sat", "satisfiability at a point, with witness", PP_SAT);
        sc->add_option("phi", a1)->required();
        sc->add_option("points", rest, "one series per free variable");
    }

    CLI::App* theory = app.add_subcommand("theory", "theory descriptors and deciders");
    {
        CLI::App* sc = leaf(theory, "of", "descriptor of the series model", TH_OF);
        sc->add_option("--degree", theory_deg, "representative degree bound");
        sc->add_option("--kdeg", theory_kdeg, "coefficient field degree m");
    }
    {
        CLI::App* sc = leaf(theory, "equiv", "divisible-module equivalence", TH_EQUIV);
        sc->add_option("a", a1)->required();
        sc->add_option("b", a2)->required();
    }
    {
        CLI::App* sc = leaf(theory, "ake", "henselian valued-module equivalence", TH_AKE);
        sc->add_option("a", a1)->required();
        sc->add_option("b", a2)->required();
    }

    CLI::App* demo = app.add_subcommand("demo", "named scenarios");
    leaf(demo, "counterexample", "divisible-but-not-henselian certificate", DEMO_CE);
    {
        CLI::App* sc = leaf(demo, "hull", "bounded divisible-hull membership probe", HULL_PROBE);
        sc->add_option("a", a1)->required();
        sc->add_option("z", a2)->required();
        sc->add_option("--degree", hull_deg, "search degree bound");
    }

    CLI::App* chain = app.add_subcommand("chain", "tau-chain windows");
    leaf(chain, "check", "check the chain axioms (file or - for stdin)", CHAIN_CHECK)
        ->add_option("file", a1)->required();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (which == 0) {
            err << app.help();
            return 2;
        }
        if (cfg.precision < 1 || cfg.k_max < 1 || cfg.m_max < 1 || cfg.factor_deg_bound < 1)
            raise("bad-config", "all bounds must be positive");
        TowerContext tw(cfg.p, cfg.s, cfg.m_max, cfg.embed_cap);
        using namespace textio;
        switch (which) {
            case POLY_MUL:
                out << print_poly(tw, mul(tw, parse_poly(tw, a1), parse_poly(tw, a2))) << "\n";
                break;
            case POLY_DIVMOD: {
                auto dm = right_divmod(tw, parse_poly(tw, a1), parse_poly(tw, a2));
                out << "quot: " << print_poly(tw, dm.quot) << "\n";
                out << "rem: " << print_poly(tw, dm.rem) << "\n";
                break;
            }
            case POLY_GCD:
                out << print_poly(tw, rgcd(tw, parse_poly(tw, a1), parse_poly(tw, a2))) << "\n";
                break;
            case POLY_LCLM:
                out << print_poly(tw, lclm(tw, parse_poly(tw, a1), parse_poly(tw, a2))) << "\n";
                break;
            case POLY_FACTOR: {
                auto f = factorize(tw, parse_poly(tw, a1), cfg.factor_deg_bound);
                out << "t-power: " << f.t_pow << "\n";
                for (const auto& g : f.factors) out << "factor: " << print_poly(tw, g) << "\n";
                out << "unit: " << print_field_elem(tw, f.unit) << "\n";
                break;
            }
            case POLY_CONJ: {
                if (a2.empty()) {
                    out << "rep: " << print_poly(tw, conjugacy_rep(tw, parse_poly(tw, a1))) << "\n";
                } else {
                    auto w = is_k_conjugate(tw, parse_poly(tw, a1), parse_poly(tw, a2));
                    if (w)
                        out << "conjugate: lambda=" << print_field_elem(tw, w->first)
                            << " mu=" << print_field_elem(tw, w->second) << "\n";
                    else
                        out << "not-conjugate\n";
                }
                break;
            }
            case ANN_ROOTS: {
                auto a = ann_roots(tw, cfg, parse_poly(tw, a1));
                out << "field-degree: " << a.field_degree << "\n";
                out << "count: " << a.roots.size() << "\n";
                for (const auto& x : a.roots) out << "root: " << print_field_elem(tw, x) << "\n";
                break;
            }
            case ANN_ETA: {
                auto e = eta(tw, cfg, parse_poly(tw, a1));
                out << "eta: " << e.count << "\n";
                out << "k0: " << e.k0 << "\n";
                out << "exponent: " << e.k0_exponent << "\n";
                break;
            }
            case SOLVE_DIV:
                out << print_series(tw, solve_div(tw, cfg, parse_poly(tw, a1),
                                                  parse_series(tw, cfg, a2)))
                    << "\n";
                break;
            case SOLVE_HENSEL:
                out << print_series(tw, hensel_lift(tw, cfg, parse_poly(tw, a1),
                                                    parse_series(tw, cfg, a2)))
                    << "\n";
                break;
            case SOLVE_TROOT:
                out << print_series(tw, t_root(tw, cfg, parse_series(tw, cfg, a1))) << "\n";
                break;
            case SER_VAL:
                out << print_value(valuation(parse_series(tw, cfg, a1))) << "\n";
                break;
            case SER_ACT:
                out << print_series(tw, series_act(tw, parse_series(tw, cfg, a1),
                                                   parse_poly(tw, a2)))
                    << "\n";
                break;
            case SER_DECOMP: {
                auto d = decompose(tw, parse_series(tw, cfg, a1));
                out << "tor: " << print_series(tw, d.tor) << "\n";
                out << "theta: " << print_series(tw, d.theta) << "\n";
                out << "pos: " << print_series(tw, d.pos) << "\n";
                out << "neg: " << print_series(tw, d.neg) << "\n";
                break;
            }
            case SER_REG: {
                const SeriesElem x = parse_series(tw, cfg, a1);
                bool reg;
                if (a2.empty()) {
                    reg = is_regular(tw, x);
                } else {
                    const SkewPoly r = parse_poly(tw, a2);
                    reg = is_regular(tw, x, &r);
                }
                out << (reg ? "regular" : "irregular") << "\n";
                break;
            }
            case SER_RES:
                out << print_field_elem(tw, residue_at(tw, parse_series(tw, cfg, a1),
                                                       parse_value(tw, a2)))
                    << "\n";
                break;
            case PP_SIMPLIFY: {
                auto f = parse_ppformula(tw, a1);
                auto at = pp_to_atomic(tw, f);
                for (std::size_t j = 0; j < at.residual.cols; ++j) {
                    out << "atomic:";
                    bool any = false;
                    for (std::size_t i = 0; i < at.residual.rows; ++i) {
                        if (is_zero(at.residual.at(i, j))) continue;
                        out << (any ? " + " : " ") << "x" << (i + 1) << "*("
                            << print_poly(tw, at.residual.at(i, j)) << ")";
                        any = true;
                    }
                    out << (any ? " = 0" : " 0 = 0") << "\n";
                }
                if (at.single) out << "single: " << print_poly(tw, *at.single) << "\n";
                break;
            }
            case PP_INDEX: {
                auto phi = parse_ppformula(tw, a1);
                auto psi = parse_ppformula(tw, a2);
                auto t = parse_descriptor(read_input(a3));
                bool checked = true;
                auto idx = pp_index(tw, cfg, phi, psi, t, &checked);
                if (!checked) err << "warning: entailment trusted from the descriptor\n";
                out << "index: " << (idx.infinite ? std::string("inf") : std::to_string(idx.value))
                    << "\n";
                break;
            }
            case PP_SAT: {
                auto f = parse_ppformula(tw, a1);
                std::vector<SeriesElem> pts;
                for (const auto& s : rest) pts.push_back(parse_series(tw, cfg, s));
                auto r = pp_satisfies(tw, cfg, f, pts);
                if (r.satisfied) {
                    out << "SAT\n";
                    for (std::size_t i = 0; i < r.witness.size(); ++i)
                        out << "witness y" << (i + 1) << ": " << print_series(tw, r.witness[i])
                            << "\n";
                } else {
                    out << "UNSAT: " << r.detail << "\n";
                }
                break;
            }
            case TH_OF:
                out << print_descriptor(tw, theory_of_bigmodel(tw, cfg, theory_kdeg, theory_deg));
                break;
            case TH_EQUIV: {
                auto t1 = parse_descriptor(read_input(a1));
                auto t2 = parse_descriptor(read_input(a2));
                auto r = decide_equiv_divisible(t1, t2);
                TowerContext twd(t1.p, t1.s, std::max<std::uint32_t>(t1.m, 24));
                if (r.equivalent)
                    out << "EQUIVALENT\n";
                else
                    out << "NOT-EQUIVALENT at: " << print_poly(twd, *r.disagreement) << "\n";
                break;
            }
            case TH_AKE: {
                auto t1 = parse_descriptor(read_input(a1));
                auto t2 = parse_descriptor(read_input(a2));
                auto r = decide_equiv_ake(t1, t2);
                out << (r.equivalent ? "EQUIVALENT" : "NOT-EQUIVALENT") << "\n";
                break;
            }
            case DEMO_CE: {
                auto cert = run_counterexample(tw, cfg);
                out << print_certificate(cert);
                break;
            }
            case HULL_PROBE: {
                auto w = hull_contains_bounded(tw, cfg, parse_series(tw, cfg, a1),
                                               parse_series(tw, cfg, a2), hull_deg);
                if (w) {
                    out << "witness r: " << print_poly(tw, w->r) << "\n";
                    out << "witness s: " << print_poly(tw, w->s) << "\n";
                    out << "torsion: " << print_field_elem(tw, w->torsion) << "\n";
                } else {
                    out << "none-within-bounds\n";
                }
                break;
            }
            case CHAIN_CHECK: {
                auto c = parse_chain(read_input(a1));
                auto v = tau_chain_check(c);
                if (v.empty()) {
                    out << "ok\n";
                } else {
                    for (const auto& x : v)
                        out << "violation: " << x.axiom << ": " << x.detail << "\n";
                }
                break;
            }
            default:
                err << "unknown command\n";
                return 2;
        }
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.name() << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace valmod::cli
