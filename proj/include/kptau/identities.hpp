#pragma once

#include "kptau/curve.hpp"
#include "kptau/errors.hpp"
#include "kptau/parallel.hpp"
#include "kptau/periods.hpp"
#include "kptau/tau.hpp"
#include "kptau/theta.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace kptau {

// ---------------------------------------------------------------------------
// Polynomial expressions over named symbols with rational coefficients.
//   P<i...>  wp multi-index (1-based digits), e.g. P112
//   z<i>     Kleinian zeta_i
//   a<k>     hyperelliptic alpha_k
//   b<k>     trigonal beta_k (k = 3, 6, 9, 12)

class Expr {
public:
    using Key = std::map<std::string, int>;  // symbol -> power

    Expr() = default;
    static Expr constant(const Rational& c) {
        Expr e;
        if (c != 0) e.terms_[Key{}] = c;
        return e;
    }
    static Expr symbol(const std::string& s) {
        Expr e;
        e.terms_[Key{{s, 1}}] = 1;
        return e;
    }

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Expr& operator+=(const Expr& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    Expr& operator-=(const Expr& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
    friend Expr operator-(const Expr& a) { return Expr() - a; }
    friend Expr operator*(const Expr& a, const Expr& b) {
        Expr out;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                Key k = ka;
                for (const auto& [s, p] : kb) k[s] += p;
                out.add(k, ca * cb);
            }
        return out;
    }
    friend Expr operator*(const Rational& c, const Expr& a) { return Expr::constant(c) * a; }
    friend bool operator==(const Expr& a, const Expr& b) { return a.terms_ == b.terms_; }

    Expr pow(int n) const {
        if (n < 0) throw std::invalid_argument("negative power in expression");
        Expr out = constant(1);
        for (int i = 0; i < n; ++i) out = out * *this;
        return out;
    }

    static std::string key_string(const Key& k) {
        if (k.empty()) return "1";
        std::string s;
        for (const auto& [sym, p] : k) {
            if (!s.empty()) s += "*";
            s += sym;
            if (p != 1) s += "^" + std::to_string(p);
        }
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : terms_) {
            Rational a = c < 0 ? Rational(-c) : c;
            s += s.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            if (k.empty()) {
                s += to_string(a);
            } else {
                if (a != 1) s += to_string(a) + "*";
                s += key_string(k);
            }
        }
        return s;
    }

private:
    void add(const Key& k, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    std::map<Key, Rational> terms_;
};

namespace detail {

// expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
// unary := '-' unary | power ; power := atom (('^'|'**') int)? ; atom := int | symbol | '(' expr ')'
class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    Expr parse() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("expression parse error at position " + std::to_string(pos_) + ": " + what + " in \"" + s_ + "\"");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(const char* tok) {
        skip();
        const std::size_t n = std::char_traits<char>::length(tok);
        if (s_.compare(pos_, n, tok) == 0) {
            pos_ += n;
            return true;
        }
        return false;
    }
    long integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        return std::stol(s_.substr(start, pos_ - start));
    }
    Expr expr() {
        Expr e = term();
        while (true) {
            if (eat("+")) e += term();
            else if (eat("-")) e -= term();
            else return e;
        }
    }
    Expr term() {
        Expr e = unary();
        while (true) {
            skip();
            if (s_.compare(pos_, 2, "**") != 0 && eat("*")) {
                e = e * unary();
            } else if (eat("/")) {
                long d = integer();
                if (d == 0) fail("division by zero");
                e = Rational(1, d) * e;
            } else {
                return e;
            }
        }
    }
    Expr unary() {
        if (eat("-")) return -unary();
        if (eat("+")) return unary();
        return power();
    }
    Expr power() {
        Expr base = atom();
        if (eat("**") || eat("^")) return base.pow(static_cast<int>(integer()));
        return base;
    }
    Expr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!eat(")")) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Expr::constant(Rational(integer()));
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Expr::symbol(s_.substr(start, pos_ - start));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr parse_expr(const std::string& s) { return detail::ExprParser(s).parse(); }

// ---------------------------------------------------------------------------
// Weight grading: wp and zeta indices weigh their gaps, curve coefficient of
// x^k y^l weighs ns - nk - ls.

struct WeightScheme {
    CurveKind kind = CurveKind::hyperelliptic;
    int genus = 2;
    std::vector<int> gaps;

    int n() const { return kind == CurveKind::hyperelliptic ? 2 : 3; }
    int s() const { return kind == CurveKind::hyperelliptic ? 2 * genus + 1 : 4; }

    int index_weight(char d, const std::string& sym) const {
        int i = d - '0';
        if (i < 1 || i > genus) throw ValidationError("index out of range in symbol " + sym);
        return gaps[i - 1];
    }

    int weight(const std::string& sym) const {
        if (sym.size() < 2) throw ValidationError("unknown symbol " + sym);
        const std::string rest = sym.substr(1);
        if (!std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw ValidationError("unknown symbol " + sym);
        switch (sym[0]) {
        case 'P': {
            int w = 0;
            for (char d : rest) w += index_weight(d, sym);
            return w;
        }
        case 'z':
            if (rest.size() != 1) throw ValidationError("zeta symbol takes one index: " + sym);
            return index_weight(rest[0], sym);
        case 'a': {
            int k = std::stoi(rest);
            if (kind != CurveKind::hyperelliptic || k < 0 || k > 2 * genus) throw ValidationError("unknown coefficient " + sym);
            return n() * s() - n() * k;
        }
        case 'b': {
            int k = std::stoi(rest);
            if (kind != CurveKind::cyclic_trigonal || k % 3 != 0 || k < 3 || k > 12) throw ValidationError("unknown coefficient " + sym);
            return n() * s() - n() * (4 - k / 3);
        }
        default:
            throw ValidationError("unknown symbol " + sym);
        }
    }

    int weight(const Expr::Key& k) const {
        int w = 0;
        for (const auto& [sym, p] : k) w += p * weight(sym);
        return w;
    }
};

inline WeightScheme weight_scheme(CurveKind kind, int genus) {
    WeightScheme w;
    w.kind = kind;
    w.genus = genus;
    w.gaps = (kind == CurveKind::hyperelliptic ? gap_sequence(2, 2 * genus + 1) : gap_sequence(3, 4)).gaps;
    if (static_cast<int>(w.gaps.size()) != genus) throw ValidationError("genus does not match the gap sequence");
    return w;
}

inline WeightScheme weight_scheme(const NumericCurve& c) { return weight_scheme(c.kind, c.genus); }

// Common weight of all monomials; throws naming two monomials of different weight.
inline int weight_lint(const Expr& e, const WeightScheme& ws) {
    std::optional<std::pair<int, Expr::Key>> first;
    for (const auto& [k, c] : e.terms()) {
        int w = ws.weight(k);
        if (!first) {
            first.emplace(w, k);
        } else if (w != first->first) {
            throw ValidationError("inhomogeneous expression: " + Expr::key_string(first->second) + " has weight " +
                                  std::to_string(first->first) + " but " + Expr::key_string(k) + " has weight " +
                                  std::to_string(w));
        }
    }
    return first ? first->first : 0;
}

// ---------------------------------------------------------------------------
// Numerical evaluation at a Kleinian point.

inline cdouble symbol_value(const std::string& sym, const KleinPoint& kp, const NumericCurve& curve) {
    const std::string rest = sym.substr(1);
    switch (sym[0]) {
    case 'P': {
        std::vector<int> idx;
        for (char d : rest) idx.push_back(d - '0');
        return kp.P(idx);
    }
    case 'z':
        return kp.zeta.at(std::stoi(rest) - 1);
    case 'a':
        if (curve.kind != CurveKind::hyperelliptic) break;
        return curve.coeffs.at(std::stoi(rest));
    case 'b':
        if (curve.kind != CurveKind::cyclic_trigonal) break;
        return curve.coeffs.at(std::stoi(rest) / 3 - 1);
    default:
        break;
    }
    throw ValidationError("cannot evaluate symbol " + sym + " on a " + to_string(curve.kind) + " curve");
}

struct Evaluation {
    cdouble value = 0;
    double scale = 0;  // largest |monomial|
};

inline Evaluation evaluate(const Expr& e, const KleinPoint& kp, const NumericCurve& curve) {
    Evaluation out;
    std::map<std::string, cdouble> cache;
    for (const auto& [k, c] : e.terms()) {
        cdouble m = to_double(c);
        for (const auto& [sym, p] : k) {
            auto it = cache.find(sym);
            if (it == cache.end()) it = cache.emplace(sym, symbol_value(sym, kp, curve)).first;
            m *= std::pow(it->second, p);
        }
        out.value += m;
        out.scale = std::max(out.scale, std::abs(m));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closed forms. Affine coordinates A_ab (= (-1)^b pi_(a|b)) and pi_(1,0|1,0).

using AffineWindow = std::map<std::pair<int, int>, Expr>;

inline const AffineWindow& genus2_affine_forms() {
    static const AffineWindow w = [] {
        AffineWindow m;
        m[{0, 0}] = parse_expr("z1");
        m[{0, 1}] = parse_expr("P11/2 + a4/16 - z1^2/2");
        m[{1, 0}] = parse_expr("-P11/2 - a4/16 + z1^2/2");
        m[{0, 2}] = parse_expr("-P11*z1/2 - P111/6 - 5*a4*z1/48 + z1^3/6 + z2/3");
        m[{1, 1}] = parse_expr("P11*z1 + P111/3 + a4*z1/12 - z1^3/3 + z2/3");
        m[{2, 0}] = m[{0, 2}];
        m[{0, 3}] = parse_expr(
            "-P11^2/8 - 7*P11*a4/96 + P11*z1^2/4 + P111*z1/6 + P1111/24 + P12/3 + a3/24 - 5*a4^2/512"
            " + 7*a4*z1^2/96 - z1^4/24 - z1*z2/3");
        m[{1, 2}] = parse_expr(
            "3*P11^2/8 + 3*P11*a4/32 - 3*P11*z1^2/4 - P111*z1/2 - P1111/8 + 3*a4^2/512 - 3*a4*z1^2/32 + z1^4/8");
        m[{2, 1}] = -m[{1, 2}];
        m[{1, 3}] = parse_expr(
            "-P11^2*z1/2 - P11*P111/3 - 3*P11*a4*z1/16 + P11*z1^3/3 + P11*z2/6 - P111*a4/16 + P111*z1^2/3"
            " + P1111*z1/6 + P11111/30 + P112/6 + P12*z1/3 + a3*z1/60 - 13*a4^2*z1/960 + a4*z1^3/16"
            " - a4*z2/240 - z1^5/30 - z1^2*z2/6");
        return m;
    }();
    return w;
}

inline const Expr& genus2_pi22_form() {
    static const Expr e = parse_expr(
        "P11^2/4 + P11*a4/48 - P11*z1^2/2 - P111*z1/3 - P1111/12 + P12/3 + a3/24 - a4^2/256 - a4*z1^2/48"
        " + z1^4/12 - z1*z2/3");
    return e;
}

inline const AffineWindow& trigonal_affine_forms() {
    static const AffineWindow w = [] {
        AffineWindow m;
        m[{0, 0}] = parse_expr("z1");
        m[{0, 1}] = parse_expr("P11/2 - z1^2/2 + z2/2");
        m[{1, 0}] = parse_expr("-P11/2 + z1^2/2 + z2/2");
        m[{0, 2}] = parse_expr("-P11*z1/2 - P111/6 + P12/2 + b3/3 + z1^3/6 - z1*z2/2");
        m[{1, 1}] = parse_expr("P11*z1 + P111/3 - z1^3/3");
        m[{2, 0}] = parse_expr("-P11*z1/2 - P111/6 - P12/2 - b3/3 + z1^3/6 + z1*z2/2");
        m[{0, 3}] = parse_expr(
            "-P11^2/8 + P11*z1^2/4 - P11*z2/4 + P111*z1/6 + P1111/24 - P112/4 - P12*z1/2 + P22/8 - 5*b3*z1/12"
            " - z1^4/24 + z1^2*z2/4 - z2^2/8");
        m[{1, 2}] = parse_expr(
            "3*P11^2/8 - 3*P11*z1^2/4 + P11*z2/4 - P111*z1/2 - P1111/8 + P112/4 + P12*z1/2 + P22/8 + b3*z1/4"
            " + z1^4/8 - z1^2*z2/4 - z2^2/8");
        m[{2, 1}] = parse_expr(
            "-3*P11^2/8 + 3*P11*z1^2/4 + P11*z2/4 + P111*z1/2 + P1111/8 + P112/4 + P12*z1/2 - P22/8 + b3*z1/4"
            " - z1^4/8 - z1^2*z2/4 + z2^2/8");
        m[{1, 3}] = parse_expr(
            "-P11^2*z1/2 - P11*P111/3 + P11*P12/2 + P11*b3/3 + P11*z1^3/3 - P11*z1*z2/2 + P111*z1^2/3"
            " - P111*z2/6 + P1111*z1/6 + P11111/30 - P1112/6 - P112*z1/2 - P12*z1^2/2 - b3*z1^2/3"
            " - 2*b3*z2/15 - z1^5/30 + z1^3*z2/6 + z3/5");
        return m;
    }();
    return w;
}

inline const Expr& trigonal_pi22_form() {
    static const Expr e = parse_expr("P11^2/4 - P11*z1^2/2 - P111*z1/3 - P1111/12 - P22/4 + z1^4/12 + z2^2/4");
    return e;
}

inline const AffineWindow& affine_forms(CurveKind k) {
    return k == CurveKind::hyperelliptic ? genus2_affine_forms() : trigonal_affine_forms();
}
inline const Expr& pi22_form(CurveKind k) { return k == CurveKind::hyperelliptic ? genus2_pi22_form() : trigonal_pi22_form(); }

using AffineValues = std::map<std::pair<int, int>, cdouble>;

inline AffineValues evaluate_window(const AffineWindow& w, const KleinPoint& kp, const NumericCurve& curve) {
    AffineValues out;
    for (const auto& [ab, e] : w) out[ab] = evaluate(e, kp, curve).value;
    return out;
}

// Window a <= 1, b <= 3 plus the a = 2 entries of weight <= 4.
inline AffineValues genus2_affine_oracle(const KleinPoint& kp, const NumericCurve& curve) {
    if (curve.kind != CurveKind::hyperelliptic || curve.genus != 2) throw ValidationError("genus-2 oracle needs a genus-2 hyperelliptic curve");
    return evaluate_window(genus2_affine_forms(), kp, curve);
}

inline AffineValues trigonal_affine_oracle(const KleinPoint& kp, const NumericCurve& curve) {
    if (curve.kind != CurveKind::cyclic_trigonal) throw ValidationError("trigonal oracle needs a cyclic trigonal curve");
    return evaluate_window(trigonal_affine_forms(), kp, curve);
}

// ---------------------------------------------------------------------------
// Identities, written as expressions that vanish on the Jacobian.

struct Identity {
    std::string name;
    Expr expr;
    int weight = 0;
    bool allow_constant = false;  // pass if the residual is a v-independent constant
};

inline std::vector<Identity> genus2_identities() {
    std::vector<Identity> out{
        {"kdv1", parse_expr("P1111 - 6*P11^2 - 4*P12 - a4*P11 - a3/2"), 4, false},
        {"kdv2", parse_expr("P1112 - 6*P11*P12 + 2*P22 - a4*P12"), 6, true},
        {"jac6", parse_expr("P111^2 - 4*P11^3 - P22 - 4*P12*P11 - a4*P11^2 - a3*P11"), 6, true},
        {"jac6_derived", parse_expr("P111^2 - 4*P11^3 - 4*P22 - 4*P12*P11 - a4*P11^2 - a3*P11 - a2"), 6, false},
    };
    return out;
}

// Symmetric Kummer matrix in wp_11, wp_12, wp_22.
inline std::vector<std::vector<Expr>> kummer_matrix() {
    const char* rows[4][4] = {
        {"a0", "a1/2", "-2*P22", "-2*P12"},
        {"a1/2", "a2 + 4*P22", "a3/2 + 2*P12", "-2*P11"},
        {"-2*P22", "a3/2 + 2*P12", "a4 + 4*P11", "2"},
        {"-2*P12", "-2*P11", "2", "0"},
    };
    std::vector<std::vector<Expr>> M(4, std::vector<Expr>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) M[i][j] = parse_expr(rows[i][j]);
    return M;
}

inline Expr expr_det(const std::vector<std::vector<Expr>>& M) {
    const std::size_t n = M.size();
    if (n == 1) return M[0][0];
    Expr out;
    for (std::size_t j = 0; j < n; ++j) {
        if (M[0][j].is_zero()) continue;
        std::vector<std::vector<Expr>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Expr> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(M[i][k]);
            minor.push_back(row);
        }
        Expr t = M[0][j] * expr_det(minor);
        if (j % 2) out -= t;
        else out += t;
    }
    return out;
}

inline Identity kummer_identity() { return {"kummer", expr_det(kummer_matrix()), 16, false}; }

inline std::vector<Identity> trigonal_identities() {
    return {
        {"bous", parse_expr("P1111 - 6*P11^2 + 3*P22"), 4, false},
        {"trig_w5", parse_expr("P1112 - 6*P11*P12 - 3*b3*P11"), 5, false},
        {"trig_w6a", parse_expr("P111^2 - 4*P11^3 - P12^2 - 4*P13 + 4*P11*P22"), 6, false},
        {"trig_w6b", parse_expr("P1122 - 4*P13 - 4*P12^2 - 2*P11*P22 - 3*b3*P12 - 2*b6"), 6, false},
    };
}

// ---------------------------------------------------------------------------
// Reports.

struct IdentityReport {
    std::string name;
    double residual = 0;  // max relative residual over the samples
    double scale = 1;     // largest monomial magnitude at the worst sample
    bool pass = false;
    std::string status = "fail";  // pass | fail | not run
    std::string note;
    std::optional<cdouble> offset;  // fitted constant when the residual is v-independent
    int samples = 0;
    std::optional<int> weight;
};

inline IdentityReport not_run(const std::string& name, const std::string& why) {
    IdentityReport r;
    r.name = name;
    r.status = "not run";
    r.pass = false;
    r.note = why;
    return r;
}

inline void finish(IdentityReport& r, bool ok) {
    r.pass = ok;
    r.status = ok ? "pass" : "fail";
}

inline IdentityReport check_identity(const Identity& id, const std::vector<KleinPoint>& pts, const NumericCurve& curve, double tol) {
    IdentityReport r;
    r.name = id.name;
    r.samples = static_cast<int>(pts.size());
    try {
        r.weight = weight_lint(id.expr, weight_scheme(curve));
    } catch (const ValidationError& e) {
        r.note = e.what();
        finish(r, false);
        return r;
    }
    if (*r.weight != id.weight) {
        r.note = "expected weight " + std::to_string(id.weight) + ", found " + std::to_string(*r.weight);
        finish(r, false);
        return r;
    }
    if (pts.empty()) return not_run(id.name, "no sample points");
    std::vector<Evaluation> ev;
    for (const auto& kp : pts) ev.push_back(evaluate(id.expr, kp, curve));
    auto rel = [](cdouble v, double s) { return std::abs(v) / std::max(s, 1e-300); };
    r.residual = -1;
    for (const auto& e : ev) {
        double x = rel(e.value, e.scale);
        if (x > r.residual) {
            r.residual = x;
            r.scale = e.scale;
        }
    }
    if (r.residual < tol) {
        finish(r, true);
        return r;
    }
    if (id.allow_constant) {
        cdouble c = 0;
        for (const auto& e : ev) c += e.value;
        c /= static_cast<double>(ev.size());
        double spread = 0;
        for (const auto& e : ev) spread = std::max(spread, rel(e.value - c, e.scale));
        std::ostringstream os;
        os.precision(3);
        if (ev.size() >= 5 && spread < tol) {
            r.offset = c;
            os << "residual is the constant " << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
            r.note = os.str();
            finish(r, true);
            return r;
        }
        os << "residual varies with v (relative spread about the mean " << spread << ")";
        r.note = os.str();
    }
    finish(r, false);
    return r;
}

// ---------------------------------------------------------------------------
// Sampling.

struct SampleOptions {
    int samples = 20;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int max_order = 5;
};

// v = A x + B y with x, y uniform in [0,1)^g; points on or near the theta divisor are redrawn.
inline std::vector<CVector> sample_points(const PeriodData& pd, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<CVector> out;
    ThetaContext ctx(pd.T);
    const CMatrix Ainv = pd.A.fullPivLu().inverse();
    for (int tries = 0; static_cast<int>(out.size()) < count; ++tries) {
        if (tries > 100 * count + 100) throw DivisorError("divisor point: could not draw generic sample points");
        Eigen::VectorXd x(pd.g), y(pd.g);
        for (int i = 0; i < pd.g; ++i) x(i) = U(rng);
        for (int i = 0; i < pd.g; ++i) y(i) = U(rng);
        CVector v = pd.A * x.cast<cdouble>() + pd.B * y.cast<cdouble>();
        auto th = lattice_accumulate(ctx, Ainv * v, 0, 1, [](const Eigen::VectorXi&, cdouble e, auto& acc) { acc[0] += e; });
        if (std::abs(th.values[0]) < 1e-6 * th.abs_sum) continue;
        out.push_back(v);
    }
    return out;
}

inline std::vector<KleinPoint> sample_klein_points(const PeriodData& pd, const SampleOptions& opt) {
    auto vs = sample_points(pd, opt.samples, opt.seed);
    ThetaContext ctx(pd.T);
    std::vector<KleinPoint> out(vs.size());
    parallel_for(vs.size(), [&](std::size_t i) { out[i] = wp_values(vs[i], pd, ctx, opt.max_order); });
    return out;
}

inline IdentityReport check_kdv1(const std::vector<KleinPoint>& pts, const NumericCurve& curve, double tol = 1e-6) {
    return check_identity(genus2_identities()[0], pts, curve, tol);
}

inline std::vector<IdentityReport> check_weight6(const std::vector<KleinPoint>& pts, const NumericCurve& curve, double tol = 1e-6) {
    auto ids = genus2_identities();
    return {check_identity(ids[1], pts, curve, tol), check_identity(ids[2], pts, curve, tol)};
}

inline IdentityReport kummer_det(const std::vector<KleinPoint>& pts, const NumericCurve& curve, double tol = 1e-6) {
    return check_identity(kummer_identity(), pts, curve, tol);
}

// Compares the closed forms with the hook Plucker coordinates of the sigma-gauge tau.
inline std::vector<IdentityReport> check_oracles(const NumericCurve& curve, const PeriodData& pd, const std::vector<CVector>& vs,
                                                 double tol) {
    const auto& forms = affine_forms(curve.kind);
    const Expr& pi22 = pi22_form(curve.kind);
    const WeightScheme ws = weight_scheme(curve);
    IdentityReport ra, rp;
    ra.name = "affine_oracle";
    rp.name = "pi22_oracle";
    ra.samples = rp.samples = static_cast<int>(vs.size());
    try {
        for (const auto& [ab, e] : forms)
            if (weight_lint(e, ws) != ab.first + ab.second + 1)
                throw ValidationError("A_" + std::to_string(ab.first) + std::to_string(ab.second) + " has the wrong weight");
        if (weight_lint(pi22, ws) != 4) throw ValidationError("pi_(2,2) has the wrong weight");
    } catch (const ValidationError& e) {
        ra.note = rp.note = e.what();
        finish(ra, false);
        finish(rp, false);
        return {ra, rp};
    }
    const int W = 5;
    std::vector<std::pair<double, double>> ea(vs.size()), ep(vs.size());
    std::vector<std::string> worst(vs.size());
    parallel_for(vs.size(), [&](std::size_t i) {
        TauModel m = make_tau_model(curve, pd, vs[i], W);
        TauSeries tau = build_tau_sigma(m);
        AffineMatrix A = affine_from_tau(tau, 2);
        KleinPoint kp = wp_values(vs[i], pd, *m.ctx, W);
        ea[i] = {-1, 1};
        for (const auto& [ab, e] : forms) {
            Evaluation o = evaluate(e, kp, curve);
            double s = std::max({o.scale, std::abs(o.value), 1e-300});
            double rel = std::abs(A(ab.first, ab.second) - o.value) / s;
            if (rel > ea[i].first) {
                ea[i] = {rel, s};
                worst[i] = "A_" + std::to_string(ab.first) + std::to_string(ab.second);
            }
        }
        Evaluation o = evaluate(pi22, kp, curve);
        double s = std::max({o.scale, std::abs(o.value), 1e-300});
        ep[i] = {std::abs(plucker_direct(tau, Partition({2, 2})) - o.value) / s, s};
    });
    ra.residual = rp.residual = -1;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (ea[i].first > ra.residual) {
            ra.residual = ea[i].first;
            ra.scale = ea[i].second;
            ra.note = "worst entry " + worst[i];
        }
        if (ep[i].first > rp.residual) std::tie(rp.residual, rp.scale) = ep[i];
    }
    finish(ra, ra.residual < tol);
    finish(rp, rp.residual < tol);
    return {ra, rp};
}

inline std::vector<IdentityReport> genus2_suite(const NumericCurve& curve, const PeriodData& pd, const SampleOptions& opt) {
    if (curve.kind != CurveKind::hyperelliptic || curve.genus != 2) throw ValidationError("genus2 suite needs a genus-2 hyperelliptic curve");
    auto vs = sample_points(pd, opt.samples, opt.seed);
    ThetaContext ctx(pd.T);
    std::vector<KleinPoint> pts(vs.size());
    parallel_for(vs.size(), [&](std::size_t i) { pts[i] = wp_values(vs[i], pd, ctx, opt.max_order); });
    std::vector<IdentityReport> out;
    for (const auto& id : genus2_identities()) out.push_back(check_identity(id, pts, curve, opt.tol));
    out.push_back(check_identity(kummer_identity(), pts, curve, opt.tol));
    for (auto& r : check_oracles(curve, pd, vs, opt.tol)) out.push_back(std::move(r));
    return out;
}

// Trigonal periods are not computed internally; without a period file every entry is "not run".
inline std::vector<IdentityReport> trigonal_suite(const NumericCurve& curve, const PeriodData* pd, const SampleOptions& opt) {
    std::vector<IdentityReport> out;
    if (curve.kind != CurveKind::cyclic_trigonal) throw ValidationError("trigonal suite needs a cyclic trigonal curve");
    if (!pd) {
        for (const auto& id : trigonal_identities()) out.push_back(not_run(id.name, "no trigonal period file supplied"));
        out.push_back(not_run("affine_oracle", "no trigonal period file supplied"));
        out.push_back(not_run("pi22_oracle", "no trigonal period file supplied"));
        return out;
    }
    if (pd->g != 3) throw ValidationError("trigonal suite needs genus-3 period data");
    auto vs = sample_points(*pd, opt.samples, opt.seed);
    ThetaContext ctx(pd->T);
    std::vector<KleinPoint> pts(vs.size());
    parallel_for(vs.size(), [&](std::size_t i) { pts[i] = wp_values(vs[i], *pd, ctx, opt.max_order); });
    for (const auto& id : trigonal_identities()) out.push_back(check_identity(id, pts, curve, opt.tol));
    for (auto& r : check_oracles(curve, *pd, vs, opt.tol)) out.push_back(std::move(r));
    return out;
}

inline bool all_run_pass(const std::vector<IdentityReport>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const IdentityReport& r) { return r.status == "not run" || r.pass; });
}

inline nlohmann::json report_to_json(const IdentityReport& r) {
    nlohmann::json j{{"name", r.name}, {"residual", r.residual}, {"scale", r.scale}, {"pass", r.pass},
                     {"status", r.status}, {"samples", r.samples}};
    if (!r.note.empty()) j["note"] = r.note;
    if (r.offset) j["offset"] = {r.offset->real(), r.offset->imag()};
    if (r.weight) j["weight"] = *r.weight;
    return j;
}

inline IdentityReport report_from_json(const nlohmann::json& j) {
    IdentityReport r;
    r.name = j.at("name").get<std::string>();
    r.residual = j.at("residual").get<double>();
    r.scale = j.at("scale").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.status = j.at("status").get<std::string>();
    r.samples = j.at("samples").get<int>();
    if (j.contains("note")) r.note = j["note"].get<std::string>();
    if (j.contains("offset")) r.offset = cdouble(j["offset"][0].get<double>(), j["offset"][1].get<double>());
    if (j.contains("weight")) r.weight = j["weight"].get<int>();
    return r;
}

} // namespace kptau
