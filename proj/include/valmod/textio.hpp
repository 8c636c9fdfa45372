#pragma once
// Text formats and their parsers/printers.
//
//   field element   [g^3 + 2g + 1]@4          bare residues at degree 1
//   polynomial      t^2 + t*[g]@2 + [1]@2     t alone means t^1*[1]
//   series          u^(-1) + [g]@2 + u^(3/4) + O(u^64)
//   p.p. formula    EX y1,y2 : y1*(t+1) = x1*(1) ; x1*(t^2) = 0
//   descriptor      header lines p=/s=/m=/valueset-tag=/theta-realized=,
//                   then one "rep -> count|inf" line per representative
//   tau chain       "points: a b c inf" then "tau: a -> b" lines
//
// Every printer's output parses back to an equal value.

#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "valmod/config.hpp"
#include "valmod/errors.hpp"
#include "valmod/fieldtower.hpp"
#include "valmod/pptheory.hpp"
#include "valmod/scenarios.hpp"
#include "valmod/series.hpp"
#include "valmod/skewpoly.hpp"
#include "valmod/tau_chain.hpp"
#include "valmod/value.hpp"

namespace valmod {

namespace textio {

// ---- scanner ----------------------------------------------------------------

struct Scanner {
    std::string src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool accept_word(const std::string& w) {
        skip_ws();
        if (src.compare(pos, w.size(), w) == 0) {
            pos += w.size();
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "' at position " +
                             std::to_string(pos) + " in \"" + src + "\"");
    }
    std::int64_t integer() {
        skip_ws();
        bool negat = false;
        if (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
            negat = src[pos] == '-';
            ++pos;
        }
        skip_ws();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
            throw ParseError("expected a number at position " + std::to_string(pos) + " in \"" +
                             src + "\"");
        std::int64_t v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + (src[pos] - '0');
            ++pos;
        }
        return negat ? -v : v;
    }
    std::string word() {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                src[pos] == '-' || src[pos] == '.'))
            ++pos;
        if (start == pos) throw ParseError("expected a word at position " + std::to_string(pos));
        return src.substr(start, pos - start);
    }
};

// ---- field elements ----------------------------------------------------------

// Sum of c*g^k terms inside brackets; returns coefficients by power.
inline FieldElem parse_field_body(Scanner& sc, const TowerContext& tw, std::uint32_t m) {
    FieldElem e = tw.zero(m);
    bool first = true;
    for (;;) {
        std::int64_t sign = 1;
        if (sc.accept('-'))
            sign = -1;
        else if (!first)
            sc.expect('+');
        first = false;
        std::int64_t coef = 1;
        bool have_coef = false;
        sc.skip_ws();
        if (sc.pos < sc.src.size() && std::isdigit(static_cast<unsigned char>(sc.src[sc.pos]))) {
            coef = sc.integer();
            have_coef = true;
        }
        std::int64_t power = 0;
        sc.accept('*');
        if (sc.accept('g')) {
            power = 1;
            if (sc.accept('^')) power = sc.integer();
        } else if (!have_coef) {
            throw ParseError("expected a coefficient term in \"" + sc.src + "\"");
        }
        if (power < 0 || power >= static_cast<std::int64_t>(m))
            throw ParseError("generator power out of range for degree " + std::to_string(m));
        const std::int64_t p = tw.p();
        std::int64_t v = ((sign * coef) % p + p) % p;
        e.c[static_cast<std::size_t>(power)] =
            fp::add(e.c[static_cast<std::size_t>(power)], static_cast<Residue>(v), tw.p());
        if (sc.peek() != '+' && sc.peek() != '-') break;
    }
    return e;
}

// [body]@m or a bare residue.
inline FieldElem parse_field_elem_inner(Scanner& sc, const TowerContext& tw) {
    if (sc.accept('[')) {
        // scan forward for the matching bracket to learn m first
        std::size_t close = sc.src.find(']', sc.pos);
        if (close == std::string::npos) throw ParseError("unterminated '[' in field element");
        std::size_t at = sc.src.find('@', close);
        if (at == std::string::npos) throw ParseError("field element needs a degree tag @m");
        Scanner deg_sc{sc.src.substr(at + 1), 0};
        const std::int64_t m = deg_sc.integer();
        if (m <= 0) throw ParseError("field degree must be positive");
        FieldElem e = parse_field_body(sc, tw, static_cast<std::uint32_t>(m));
        sc.expect(']');
        sc.expect('@');
        sc.integer();  // already consumed via lookahead
        return e;
    }
    const std::int64_t r = sc.integer();
    return tw.from_residue(r, 1);
}

inline FieldElem parse_field_elem(const TowerContext& tw, const std::string& text) {
    Scanner sc{text, 0};
    FieldElem e = parse_field_elem_inner(sc, tw);
    if (!sc.done()) throw ParseError("trailing input after field element: \"" + text + "\"");
    return e;
}

inline std::string print_field_body(const TowerContext&, const FieldElem& e) {
    std::string out;
    for (std::uint32_t i = e.m; i-- > 0;) {
        if (e.c[i] == 0) continue;
        if (!out.empty()) out += "+";
        std::string coef = std::to_string(e.c[i]);
        if (i == 0) {
            out += coef;
        } else {
            if (e.c[i] != 1) out += coef;
            out += "g";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    if (out.empty()) out = "0";
    return out;
}

inline std::string print_field_elem(const TowerContext& tw, const FieldElem& e) {
    if (e.m == 1) return std::to_string(e.c[0]);
    return "[" + print_field_body(tw, e) + "]@" + std::to_string(e.m);
}

// ---- polynomials ---------------------------------------------------------------

// One product term: t-part and/or coefficient atom.
inline void parse_poly_term(Scanner& sc, const TowerContext& tw, std::int64_t sign,
                            std::vector<std::pair<std::uint32_t, FieldElem>>& terms) {
    std::optional<std::uint32_t> tpow;
    std::optional<FieldElem> coef;
    for (;;) {
        sc.skip_ws();
        if (sc.accept('t')) {
            std::int64_t k = 1;
            if (sc.accept('^')) k = sc.integer();
            if (k < 0) throw ParseError("negative t power");
            if (tpow) throw ParseError("repeated t part in a term");
            tpow = static_cast<std::uint32_t>(k);
        } else if (sc.peek() == '[' ||
                   (sc.pos < sc.src.size() &&
                    std::isdigit(static_cast<unsigned char>(sc.peek())))) {
            if (coef) throw ParseError("repeated coefficient in a term");
            coef = parse_field_elem_inner(sc, tw);
        } else {
            throw ParseError("expected t or a coefficient in \"" + sc.src + "\"");
        }
        if (!sc.accept('*')) break;
    }
    FieldElem c = coef ? *coef : tw.one(1);
    if (sign < 0) c = tw.neg(c);
    terms.emplace_back(tpow.value_or(0), c);
}

inline SkewPoly parse_poly(const TowerContext& tw, const std::string& text) {
    Scanner sc{text, 0};
    std::vector<std::pair<std::uint32_t, FieldElem>> terms;
    bool first = true;
    for (;;) {
        std::int64_t sign = 1;
        if (sc.accept('-'))
            sign = -1;
        else if (!first)
            sc.expect('+');
        first = false;
        parse_poly_term(sc, tw, sign, terms);
        if (sc.done()) break;
        if (sc.peek() != '+' && sc.peek() != '-')
            throw ParseError("trailing input after polynomial: \"" + text + "\"");
    }
    std::uint32_t m = 1;
    for (const auto& [k, c] : terms) m = std::lcm(m, c.m);
    if (m > tw.m_max())
        throw ParseError("coefficients have no admitted common field (lcm degree " +
                         std::to_string(m) + " exceeds m_max)");
    std::uint32_t maxk = 0;
    for (const auto& [k, c] : terms) maxk = std::max(maxk, k);
    std::vector<FieldElem> cs(maxk + 1, tw.zero(m));
    for (const auto& [k, c] : terms) cs[k] = tw.add(cs[k], tw.embed_lift(c, m));
    return make_poly(tw, m, std::move(cs));
}

inline std::string print_poly(const TowerContext& tw, const SkewPoly& q) {
    if (is_zero(q)) return "0";
    std::string out;
    for (std::uint32_t i = static_cast<std::uint32_t>(q.c.size()); i-- > 0;) {
        if (tw.is_zero(q.c[i])) continue;
        if (!out.empty()) out += " + ";
        const bool is_one = q.c[i] == tw.one(q.field_degree);
        if (i == 0) {
            out += print_field_elem(tw, q.c[i]);
        } else {
            out += (i == 1) ? "t" : "t^" + std::to_string(i);
            if (!is_one) out += "*" + print_field_elem(tw, q.c[i]);
        }
    }
    return out;
}

// ---- values (exponents) ---------------------------------------------------------

inline Value parse_value_body(Scanner& sc, std::uint32_t p) {
    const bool paren = sc.accept('(');
    const std::int64_t num = sc.integer();
    Value v = Value::integer(num, p);
    if (sc.accept('/')) {
        const std::int64_t den = sc.integer();
        if (den <= 0) throw ParseError("exponent denominator must be positive");
        std::int64_t d = den;
        std::uint32_t k = 0;
        while (d % p == 0) {
            d /= p;
            ++k;
        }
        if (d != 1) throw ParseError("exponent denominator must be a power of p");
        v = Value::fraction(num, k, p);
    }
    if (paren) sc.expect(')');
    return v;
}

inline Value parse_value(const TowerContext& tw, const std::string& text) {
    Scanner sc{text, 0};
    if (sc.accept_word("inf")) {
        if (!sc.done()) throw ParseError("trailing input after inf");
        return Value::infinity(tw.p());
    }
    Value v = parse_value_body(sc, tw.p());
    if (!sc.done()) throw ParseError("trailing input after exponent: \"" + text + "\"");
    return v;
}

inline std::string print_value(const Value& v) {
    if (v.inf) return "inf";
    if (v.kpow == 0) {
        if (v.num < 0) return "(" + std::to_string(v.num) + ")";
        return std::to_string(v.num);
    }
    std::int64_t den = 1;
    for (std::uint32_t i = 0; i < v.kpow; ++i) den *= v.p;
    return "(" + std::to_string(v.num) + "/" + std::to_string(den) + ")";
}

// ---- series ----------------------------------------------------------------------

inline SeriesElem parse_series(const TowerContext& tw, const Config& cfg,
                               const std::string& text) {
    Scanner sc{text, 0};
    SeriesElem x{1, {}, Value::infinity(tw.p())};
    bool first = true;
    bool saw_o = false;
    for (;;) {
        std::int64_t sign = 1;
        if (sc.accept('-'))
            sign = -1;
        else if (!first)
            sc.expect('+');
        first = false;
        sc.skip_ws();
        if (sc.accept_word("O")) {
            sc.expect('(');
            sc.skip_ws();
            if (!sc.accept('u')) throw ParseError("O-term must be O(u^N)");
            Value prec = Value::integer(1, tw.p());
            if (sc.accept('^')) prec = parse_value_body(sc, tw.p());
            sc.expect(')');
            x.precision = value_min(x.precision, prec);
            saw_o = true;
        } else {
            std::optional<FieldElem> coef;
            std::optional<Value> expo;
            for (;;) {
                sc.skip_ws();
                if (sc.accept('u')) {
                    if (expo) throw ParseError("repeated u part in a series term");
                    Value e = Value::integer(1, tw.p());
                    if (sc.accept('^')) e = parse_value_body(sc, tw.p());
                    expo = e;
                } else if (sc.peek() == '[' ||
                           (sc.pos < sc.src.size() &&
                            std::isdigit(static_cast<unsigned char>(sc.peek())))) {
                    if (coef) throw ParseError("repeated coefficient in a series term");
                    coef = parse_field_elem_inner(sc, tw);
                } else {
                    throw ParseError("expected u or a coefficient in \"" + sc.src + "\"");
                }
                if (!sc.accept('*')) break;
            }
            FieldElem c = coef ? *coef : tw.one(1);
            if (sign < 0) c = tw.neg(c);
            Value e = expo ? *expo : Value::integer(0, tw.p());
            if (e.kpow > cfg.k_max) throw ParseError("exponent denominator exceeds p^k_max");
            x.field_degree = std::lcm(x.field_degree, c.m);
            x.terms.push_back(SeriesTerm{e, c});
        }
        if (sc.done()) break;
        if (sc.peek() != '+' && sc.peek() != '-')
            throw ParseError("trailing input after series: \"" + text + "\"");
    }
    if (x.field_degree > tw.m_max())
        throw ParseError("series coefficients have no admitted common field");
    (void)saw_o;
    return series_normalize(tw, std::move(x));
}

inline std::string print_series(const TowerContext& tw, const SeriesElem& x) {
    std::string out;
    for (const auto& t : x.terms) {
        if (!out.empty()) out += " + ";
        const bool unit_coef = t.coef == tw.one(x.field_degree);
        const bool zero_exp = t.exponent.is_zero();
        if (zero_exp) {
            out += print_field_elem(tw, t.coef);
        } else {
            if (!unit_coef) out += print_field_elem(tw, t.coef) + "*";
            if (t.exponent == Value::integer(1, t.exponent.p))
                out += "u";
            else
                out += "u^" + print_value(t.exponent);
        }
    }
    if (!x.precision.inf) {
        if (!out.empty()) out += " + ";
        out += "O(u^" + print_value(x.precision) + ")";
    }
    if (out.empty()) out = "0";
    return out;
}

// ---- p.p. formulas ----------------------------------------------------------------

namespace detail {
inline std::size_t var_index(const std::string& digits) {
    if (digits.empty() || digits.size() > 3)
        throw ParseError("variable index out of range: \"" + digits + "\"");
    std::size_t v = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError("variable index must be numeric: \"" + digits + "\"");
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}
}  // namespace detail

inline PPFormula parse_ppformula(const TowerContext& tw, const std::string& text) {
    Scanner sc{text, 0};
    std::size_t k = 0;
    if (sc.accept_word("EX")) {
        if (sc.peek() != ':') {
            for (;;) {
                const std::string v = sc.word();
                if (v.size() < 2 || v[0] != 'y')
                    throw ParseError("bound variables must be named y1, y2, ...");
                k = std::max<std::size_t>(k, detail::var_index(v.substr(1)));
                if (!sc.accept(',')) break;
            }
        }
        sc.expect(':');
    }
    struct Term {
        bool bound;
        std::size_t idx;  // zero-based
        SkewPoly poly;
        bool negate;
    };
    std::vector<std::vector<Term>> equations;
    std::size_t n = 0;
    auto parse_side = [&](std::vector<Term>& into, bool rhs) {
        bool first = true;
        for (;;) {
            std::int64_t sign = rhs ? -1 : 1;  // move everything to the left side
            if (sc.accept('-'))
                sign = -sign;
            else if (!first)
                sc.expect('+');
            first = false;
            sc.skip_ws();
            if (sc.peek() == '0' && !std::isalnum(static_cast<unsigned char>(
                                        sc.pos + 1 < sc.src.size() ? sc.src[sc.pos + 1] : ' '))) {
                sc.integer();
            } else {
                const std::string v = sc.word();
                if (v.size() < 2 || (v[0] != 'x' && v[0] != 'y'))
                    throw ParseError("expected a variable x<i> or y<i>, got \"" + v + "\"");
                const bool bound = v[0] == 'y';
                const std::size_t idx = detail::var_index(v.substr(1));
                if (idx == 0) throw ParseError("variables are numbered from 1");
                if (bound)
                    k = std::max(k, idx);
                else
                    n = std::max(n, idx);
                SkewPoly poly = poly_one(tw, 1);
                if (sc.accept('*')) {
                    if (sc.accept('(')) {
                        std::size_t depth = 1, start = sc.pos;
                        while (sc.pos < sc.src.size() && depth > 0) {
                            if (sc.src[sc.pos] == '(') ++depth;
                            if (sc.src[sc.pos] == ')') --depth;
                            ++sc.pos;
                        }
                        if (depth != 0) throw ParseError("unbalanced parentheses in formula");
                        poly = parse_poly(tw, sc.src.substr(start, sc.pos - 1 - start));
                    } else {
                        // single factor: a t-power or one coefficient atom
                        std::vector<std::pair<std::uint32_t, FieldElem>> terms;
                        parse_poly_term(sc, tw, 1, terms);
                        std::uint32_t m = 1;
                        for (auto& [kk, c] : terms) m = std::lcm(m, c.m);
                        std::vector<FieldElem> cs(terms[0].first + 1, tw.zero(m));
                        cs[terms[0].first] = tw.embed_lift(terms[0].second, m);
                        poly = make_poly(tw, m, std::move(cs));
                    }
                }
                into.push_back(Term{bound, idx - 1, poly, sign < 0});
            }
            sc.skip_ws();
            if (sc.peek() != '+' && sc.peek() != '-') break;
        }
    };
    for (;;) {
        std::vector<Term> eq;
        parse_side(eq, false);
        sc.expect('=');
        parse_side(eq, true);
        equations.push_back(std::move(eq));
        if (!sc.accept(';')) break;
    }
    if (!sc.done()) throw ParseError("trailing input after formula: \"" + text + "\"");
    PPFormula f;
    const std::size_t m_eqs = equations.size();
    f.a = MatrixOverR(k, m_eqs);
    f.b = MatrixOverR(n, m_eqs);
    for (std::size_t j = 0; j < m_eqs; ++j) {
        for (const auto& t : equations[j]) {
            // ybar A = xbar B: bound terms keep their sign on the left,
            // free terms flip (they were moved to the left above)
            SkewPoly signed_poly = t.negate ? neg(tw, t.poly) : t.poly;
            if (t.bound) {
                f.a.at(t.idx, j) = add(tw, f.a.at(t.idx, j), signed_poly);
            } else {
                f.b.at(t.idx, j) = sub(tw, f.b.at(t.idx, j), signed_poly);
            }
        }
    }
    return f;
}

inline std::string print_ppformula(const TowerContext& tw, const PPFormula& f) {
    std::string out = "EX ";
    for (std::size_t i = 0; i < f.a.rows; ++i) {
        if (i) out += ",";
        out += "y" + std::to_string(i + 1);
    }
    out += " : ";
    for (std::size_t j = 0; j < f.a.cols; ++j) {
        if (j) out += " ; ";
        std::string lhs, rhs;
        for (std::size_t i = 0; i < f.a.rows; ++i) {
            if (is_zero(f.a.at(i, j))) continue;
            if (!lhs.empty()) lhs += " + ";
            lhs += "y" + std::to_string(i + 1) + "*(" + print_poly(tw, f.a.at(i, j)) + ")";
        }
        for (std::size_t i = 0; i < f.b.rows; ++i) {
            if (is_zero(f.b.at(i, j))) continue;
            if (!rhs.empty()) rhs += " + ";
            rhs += "x" + std::to_string(i + 1) + "*(" + print_poly(tw, f.b.at(i, j)) + ")";
        }
        out += (lhs.empty() ? "0" : lhs) + " = " + (rhs.empty() ? "0" : rhs);
    }
    return out;
}

// ---- descriptors -------------------------------------------------------------------

inline std::string print_descriptor(const TowerContext& tw, const TheoryDescriptor& t) {
    std::ostringstream os;
    os << "p=" << t.p << "\n";
    os << "s=" << t.s << "\n";
    os << "m=" << t.m << "\n";
    if (t.valueset_tag) os << "valueset-tag=" << *t.valueset_tag << "\n";
    if (t.theta_realized) os << "theta-realized=" << (*t.theta_realized ? "true" : "false") << "\n";
    for (const auto& [k, v] : t.table)
        os << print_poly(tw, k) << " -> " << (v.infinite ? std::string("inf") : std::to_string(v.value))
           << "\n";
    return os.str();
}

// Self-contained: the header lines fix (p, s, m) and the representative
// polynomials are parsed against a context built from them.
inline TheoryDescriptor parse_descriptor(const std::string& text) {
    TheoryDescriptor t;
    std::vector<std::string> poly_lines;
    std::istringstream is(text);
    std::string line;
    bool saw_p = false, saw_s = false, saw_m = false;
    while (std::getline(is, line)) {
        // strip comments and blank lines
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        auto starts = [&](const std::string& pre) { return line.rfind(pre, 0) == 0; };
        auto header_int = [](const std::string& v) {
            Scanner hs{v, 0};
            const std::int64_t n = hs.integer();
            if (!hs.done() || n < 1 || n > 1u << 20) throw ParseError("bad header value: " + v);
            return static_cast<std::uint32_t>(n);
        };
        if (starts("p=")) {
            t.p = header_int(line.substr(2));
            saw_p = true;
        } else if (starts("s=")) {
            t.s = header_int(line.substr(2));
            saw_s = true;
        } else if (starts("m=")) {
            t.m = header_int(line.substr(2));
            saw_m = true;
        } else if (starts("valueset-tag=")) {
            t.valueset_tag = line.substr(std::string("valueset-tag=").size());
        } else if (starts("theta-realized=")) {
            const std::string v = line.substr(std::string("theta-realized=").size());
            if (v != "true" && v != "false") throw ParseError("theta-realized must be true|false");
            t.theta_realized = v == "true";
        } else {
            poly_lines.push_back(line);
        }
    }
    if (!saw_p || !saw_s || !saw_m) throw ParseError("descriptor needs p=, s=, m= headers");
    TowerContext tw(t.p, t.s, std::max<std::uint32_t>(t.m, 24));
    for (const auto& pl : poly_lines) {
        const std::size_t arrow = pl.find("->");
        if (arrow == std::string::npos)
            throw ParseError("descriptor line needs 'rep -> count': \"" + pl + "\"");
        const SkewPoly key = lift_poly(tw, parse_poly(tw, pl.substr(0, arrow)), t.m);
        std::string val = pl.substr(arrow + 2);
        Scanner vs{val, 0};
        EtaCount c;
        if (vs.accept_word("inf"))
            c = EtaCount::inf();
        else
            c = EtaCount::finite(static_cast<std::uint64_t>(vs.integer()));
        if (!vs.done()) throw ParseError("trailing input after count: \"" + val + "\"");
        t.table.emplace_back(key, c);
    }
    // table invariants: canonical representatives, |K_0|-power counts
    const std::uint64_t k0 = tw.fixed_subfield_size(t.m);
    for (const auto& [key, v] : t.table) {
        try {
            if (!(conjugacy_rep(tw, key) == key))
                throw ParseError("descriptor key is not a canonical representative: " +
                                 print_poly(tw, key));
        } catch (const DomainError&) {
            throw ParseError("descriptor key is not irreducible: " + print_poly(tw, key));
        }
        if (!v.infinite) {
            std::uint64_t w = v.value;
            while (w > 1 && w % k0 == 0) w /= k0;
            if (w != 1)
                throw ParseError("descriptor count is not a power of |K_0|: " +
                                 std::to_string(v.value));
        }
    }
    t.sort_table();
    return t;
}

// ---- tau chains --------------------------------------------------------------------

inline FiniteTauChain parse_chain(const std::string& text) {
    FiniteTauChain c;
    std::istringstream is(text);
    std::string line;
    bool have_points = false;
    std::optional<std::size_t> inf_idx;
    auto index_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < c.labels.size(); ++i)
            if (c.labels[i] == name) return i;
        throw ParseError("unknown chain point \"" + name + "\"");
    };
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        Scanner sc{line, 0};
        if (sc.done()) continue;
        if (sc.accept_word("points")) {
            sc.expect(':');
            while (!sc.done()) {
                const std::string w = sc.word();
                for (const auto& l : c.labels)
                    if (l == w) throw ParseError("duplicate chain point \"" + w + "\"");
                c.labels.push_back(w);
                if (w == "inf") inf_idx = c.labels.size() - 1;
            }
            have_points = true;
        } else if (sc.accept_word("tau")) {
            sc.expect(':');
            const std::string a = sc.word();
            sc.expect('-');
            sc.expect('>');
            const std::string b = sc.word();
            if (!sc.done()) throw ParseError("trailing input on tau line: \"" + line + "\"");
            c.tau[index_of(a)] = index_of(b);
        } else {
            throw ParseError("chain lines are 'points: ...' or 'tau: a -> b'");
        }
    }
    if (!have_points) throw ParseError("chain needs a 'points:' line");
    if (!inf_idx) throw ParseError("chain needs a point named inf");
    c.infinity = *inf_idx;
    return c;
}

inline std::string print_chain(const FiniteTauChain& c) {
    std::string out = "points:";
    for (const auto& l : c.labels) out += " " + l;
    out += "\n";
    for (const auto& [a, b] : c.tau) out += "tau: " + c.labels[a] + " -> " + c.labels[b] + "\n";
    return out;
}

// ---- certificates -------------------------------------------------------------------

inline std::string print_certificate(const Certificate& cert) {
    std::string out;
    for (const auto& c : cert.checks)
        out += c.name + ": " + (c.pass ? "PASS" : "FAIL") + ": " + c.detail + "\n";
    out += cert.all_pass() ? "certificate: PASS\n" : "certificate: FAIL\n";
    return out;
}

}  // namespace textio
}  // namespace valmod
