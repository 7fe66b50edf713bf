#pragma once

#include "kptau/poly.hpp"
#include "kptau/ring.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptau {

enum class CurveKind { hyperelliptic, cyclic_trigonal };

inline std::string to_string(CurveKind k) {
    return k == CurveKind::hyperelliptic ? "hyperelliptic" : "cyclic_trigonal";
}

struct GapSequence {
    std::vector<int> gaps;
    int genus() const { return static_cast<int>(gaps.size()); }
    bool contains(int k) const { return std::find(gaps.begin(), gaps.end(), k) != gaps.end(); }
};

// Positive integers not of the form a n + b s with a, b >= 0.
inline GapSequence gap_sequence(int n, int s) {
    if (n < 2 || s < 2) throw std::invalid_argument("gap_sequence needs n, s >= 2");
    if (std::gcd(n, s) != 1) throw std::invalid_argument("gap_sequence needs gcd(n, s) = 1");
    const int frob = n * s - n - s;
    std::vector<bool> rep(frob + 1, false);
    for (int a = 0; a * n <= frob; ++a)
        for (int b = 0; a * n + b * s <= frob; ++b) rep[a * n + b * s] = true;
    GapSequence g;
    for (int k = 1; k <= frob; ++k)
        if (!rep[k]) g.gaps.push_back(k);
    return g;
}

// Planar curve with coefficients in ring C.
//   hyperelliptic:    y^2 = 4 x^{2g+1} + alpha_{2g} x^{2g} + ... + alpha_0, coeffs = alpha_0..alpha_{2g}
//   cyclic trigonal:  y^3 = x^4 + beta_3 x^3 + beta_6 x^2 + beta_9 x + beta_12, coeffs = beta_3, beta_6, beta_9, beta_12
template <class C>
struct PlaneCurve {
    CurveKind kind = CurveKind::hyperelliptic;
    int genus = 2;
    std::vector<C> coeffs;
    std::vector<double> branch_points;  // real a_1 < ... < a_{2g+1} when known

    int n() const { return kind == CurveKind::hyperelliptic ? 2 : 3; }
    int s() const { return kind == CurveKind::hyperelliptic ? 2 * genus + 1 : 4; }
    GapSequence gaps() const { return gap_sequence(n(), s()); }

    // lambda_m convention: alpha_m for m <= 2g, 4 at 2g+1, 0 beyond
    C lambda(int m) const {
        if (kind != CurveKind::hyperelliptic) throw std::logic_error("lambda is defined for hyperelliptic curves");
        if (m < 0) return Ring<C>::zero();
        if (m <= 2 * genus) return coeffs.at(m);
        if (m == 2 * genus + 1) return Ring<C>::from_rational(4);
        return Ring<C>::zero();
    }

    // G with Y^n = G(xi) where x = xi^{-n}, y = xi^{-s} Y
    std::vector<C> g_series() const {
        std::vector<C> G;
        if (kind == CurveKind::hyperelliptic) {
            G.assign(2 * (2 * genus + 1) + 1, Ring<C>::zero());
            G[0] = Ring<C>::from_rational(4);
            for (int k = 0; k <= 2 * genus; ++k) G[2 * (2 * genus + 1 - k)] = coeffs.at(k);
        } else {
            G.assign(13, Ring<C>::zero());
            G[0] = Ring<C>::one();
            for (int k = 0; k < 4; ++k) G[3 * (k + 1)] = coeffs.at(k);
        }
        return G;
    }

    // leading coefficient Y(0)
    Rational y_leading() const { return kind == CurveKind::hyperelliptic ? Rational(2) : Rational(1); }

    void validate() const {
        if (kind == CurveKind::hyperelliptic) {
            if (genus < 1) throw std::invalid_argument("hyperelliptic genus must be >= 1");
            if (static_cast<int>(coeffs.size()) != 2 * genus + 1)
                throw std::invalid_argument("hyperelliptic curve needs 2g+1 coefficients alpha_0..alpha_2g");
        } else {
            if (genus != 3) throw std::invalid_argument("cyclic trigonal curve has genus 3");
            if (coeffs.size() != 4) throw std::invalid_argument("cyclic trigonal curve needs beta_3, beta_6, beta_9, beta_12");
        }
    }
};

using NumericCurve = PlaneCurve<cdouble>;
using SymbolicCurve = PlaneCurve<SymPoly>;

inline NumericCurve hyperelliptic_curve(const std::vector<cdouble>& alpha) {
    NumericCurve c;
    c.kind = CurveKind::hyperelliptic;
    if (alpha.size() % 2 == 0) throw std::invalid_argument("hyperelliptic curve needs an odd number of coefficients");
    c.genus = static_cast<int>(alpha.size() - 1) / 2;
    c.coeffs = alpha;
    c.validate();
    return c;
}

// alpha from 4 prod (x - a_j)
inline std::vector<cdouble> alpha_from_branch_points(const std::vector<double>& a) {
    std::vector<cdouble> p{4.0};
    for (double r : a) {
        std::vector<cdouble> q(p.size() + 1, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i + 1] += p[i];
            q[i] -= r * p[i];
        }
        p = q;
    }
    p.pop_back();  // drop the leading 4
    return p;
}

inline NumericCurve hyperelliptic_from_branch_points(std::vector<double> a) {
    if (a.size() % 2 == 0 || a.size() < 3) throw std::invalid_argument("need an odd number (>= 3) of branch points");
    std::sort(a.begin(), a.end());
    double scale = 1.0;
    for (double r : a) {
        if (!std::isfinite(r)) throw std::invalid_argument("branch points must be finite");
        scale = std::max(scale, std::abs(r));
    }
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] - a[i - 1] <= 1e-12 * scale) throw std::invalid_argument("branch points must be distinct");
    NumericCurve c = hyperelliptic_curve(alpha_from_branch_points(a));
    c.branch_points = std::move(a);
    return c;
}

inline NumericCurve trigonal_curve(const std::vector<cdouble>& beta) {
    NumericCurve c;
    c.kind = CurveKind::cyclic_trigonal;
    c.genus = 3;
    c.coeffs = beta;
    c.validate();
    return c;
}

// Indeterminates alpha_0..alpha_{2g} (variables 0..2g) or beta_3..beta_12 (variables 0..3).
inline SymbolicCurve symbolic_hyperelliptic(int g) {
    SymbolicCurve c;
    c.kind = CurveKind::hyperelliptic;
    c.genus = g;
    for (int k = 0; k <= 2 * g; ++k) c.coeffs.push_back(SymPoly::variable(2 * g + 1, k));
    return c;
}

inline SymbolicCurve symbolic_trigonal() {
    SymbolicCurve c;
    c.kind = CurveKind::cyclic_trigonal;
    c.genus = 3;
    for (int k = 0; k < 4; ++k) c.coeffs.push_back(SymPoly::variable(4, k));
    return c;
}

// ---------------------------------------------------------------------------
// Univariate truncated series in xi over C, stored as coefficient vectors of fixed length.

namespace useries {

template <class C>
std::vector<C> mul(const std::vector<C>& a, const std::vector<C>& b, std::size_t len) {
    std::vector<C> r(len, Ring<C>::zero());
    for (std::size_t i = 0; i < std::min(a.size(), len); ++i) {
        if (exact_zero(a[i])) continue;
        for (std::size_t j = 0; j < std::min(b.size(), len - i); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

template <class C>
std::vector<C> pow(const std::vector<C>& a, int e, std::size_t len) {
    std::vector<C> r(len, Ring<C>::zero());
    r[0] = Ring<C>::one();
    for (int k = 0; k < e; ++k) r = mul(r, a, len);
    return r;
}

template <class C>
std::vector<C> inverse(const std::vector<C>& a, std::size_t len) {
    std::vector<C> r(len, Ring<C>::zero());
    C inv0 = Ring<C>::inverse(a.at(0));
    r[0] = inv0;
    for (std::size_t k = 1; k < len; ++k) {
        C acc = Ring<C>::zero();
        for (std::size_t j = 1; j <= std::min(k, a.size() - 1); ++j) acc += a[j] * r[k - j];
        r[k] = -(acc * inv0);
    }
    return r;
}

} // namespace useries

// Y(xi) with Y^n = G(xi), Y(0) = y_leading, by Newton iteration to O(xi^order).
template <class C>
std::vector<C> local_y_series(const PlaneCurve<C>& curve, int order) {
    if (order < 1) throw std::invalid_argument("expansion order must be >= 1");
    const int n = curve.n();
    const std::size_t len = static_cast<std::size_t>(order);
    std::vector<C> G = curve.g_series();
    G.resize(std::max(G.size(), len), Ring<C>::zero());
    G.resize(len);
    std::vector<C> Y(len, Ring<C>::zero());
    Y[0] = Ring<C>::from_rational(curve.y_leading());
    const C nc = Ring<C>::from_rational(n);
    for (std::size_t prec = 1; prec < 2 * len; prec *= 2) {
        auto Yn1 = useries::pow(Y, n - 1, len);
        auto Yn = useries::mul(Yn1, Y, len);
        std::vector<C> f(len);
        for (std::size_t i = 0; i < len; ++i) f[i] = Yn[i] - G[i];
        std::vector<C> d(len);
        for (std::size_t i = 0; i < len; ++i) d[i] = Yn1[i] * nc;
        auto step = useries::mul(f, useries::inverse(d, len), len);
        for (std::size_t i = 0; i < len; ++i) Y[i] -= step[i];
    }
    // residual check
    auto Yn = useries::pow(Y, n, len);
    double scale = 1.0;
    for (const auto& g : G) scale = std::max(scale, Ring<C>::magnitude(g));
    for (std::size_t i = 0; i < len; ++i)
        if (!Ring<C>::is_zero(Yn[i] - G[i], scale))
            throw std::runtime_error("local expansion at infinity did not converge (singular curve?)");
    return Y;
}

// Laurent expansion f(xi) = xi^{leading_exponent} (coeffs[0] + coeffs[1] xi + ...).
template <class C>
struct LocalExpansionT {
    int leading_exponent = 0;
    std::vector<C> coeffs;

    C at(int exponent) const {
        int i = exponent - leading_exponent;
        if (i < 0) return Ring<C>::zero();
        if (i >= static_cast<int>(coeffs.size())) throw std::out_of_range("expansion order exceeded");
        return coeffs[i];
    }
};

using LocalExpansion = LocalExpansionT<cdouble>;

// x(xi) = xi^{-n} and y(xi) = xi^{-s} Y(xi).
template <class C>
std::pair<LocalExpansionT<C>, LocalExpansionT<C>> local_at_infinity(const PlaneCurve<C>& curve, int order) {
    LocalExpansionT<C> x, y;
    x.leading_exponent = -curve.n();
    x.coeffs.assign(order, Ring<C>::zero());
    x.coeffs[0] = Ring<C>::one();
    y.leading_exponent = -curve.s();
    y.coeffs = local_y_series(curve, order);
    return {x, y};
}

// Differential sum_k c_k x^{a_k} y^{-b_k} dx.
template <class C>
struct Differential {
    struct Term {
        C coeff;
        int xpow;
        int ypow;  // power of y in the denominator
    };
    std::vector<Term> terms;

    Differential& add(const C& c, int xpow, int ypow) {
        terms.push_back({c, xpow, ypow});
        return *this;
    }

    // numerator coefficients for a fixed y power (all terms must share it)
    std::vector<C> numerator(int& ypow) const {
        if (terms.empty()) throw std::logic_error("empty differential");
        ypow = terms.front().ypow;
        int deg = 0;
        for (const auto& t : terms) {
            if (t.ypow != ypow) throw std::logic_error("mixed powers of y in the denominator");
            deg = std::max(deg, t.xpow);
        }
        std::vector<C> p(deg + 1, Ring<C>::zero());
        for (const auto& t : terms) p[t.xpow] += t.coeff;
        return p;
    }
};

// Expansion of the differential divided by d xi, to coefficients of exponent < order_end.
template <class C>
LocalExpansionT<C> expand_differential(const Differential<C>& d, const PlaneCurve<C>& curve, int order_end) {
    const int n = curve.n(), s = curve.s();
    int lead = 0;
    bool first = true;
    for (const auto& t : d.terms) {
        int e = -n * t.xpow - n - 1 + s * t.ypow;
        lead = first ? e : std::min(lead, e);
        first = false;
    }
    if (first) throw std::logic_error("empty differential");
    const int len = std::max(1, order_end - lead);
    auto Y = local_y_series(curve, len + 1);
    LocalExpansionT<C> out;
    out.leading_exponent = lead;
    out.coeffs.assign(len, Ring<C>::zero());
    int maxy = 0;
    for (const auto& t : d.terms) maxy = std::max(maxy, t.ypow);
    std::vector<std::vector<C>> yinv(maxy + 1);
    auto Yinv = useries::inverse(Y, len);
    yinv[0].assign(len, Ring<C>::zero());
    yinv[0][0] = Ring<C>::one();
    for (int k = 1; k <= maxy; ++k) yinv[k] = useries::mul(yinv[k - 1], Yinv, len);
    const C mn = Ring<C>::from_rational(-n);
    for (const auto& t : d.terms) {
        int shift = (-n * t.xpow - n - 1 + s * t.ypow) - lead;
        for (int i = 0; i + shift < len; ++i) out.coeffs[i + shift] += mn * t.coeff * yinv[t.ypow][i];
    }
    return out;
}

// Holomorphic differentials u_1..u_g ordered by gap n_1 < ... < n_g.
//   hyperelliptic: u_k = x^{g-k} dx / y
//   trigonal:      u_1 = dx/(3y), u_2 = x dx/(3y^2), u_3 = dx/(3y^2)
template <class C>
std::vector<Differential<C>> holomorphic_basis(const PlaneCurve<C>& curve) {
    std::vector<Differential<C>> u;
    if (curve.kind == CurveKind::hyperelliptic) {
        for (int k = 1; k <= curve.genus; ++k) u.push_back(Differential<C>().add(Ring<C>::one(), curve.genus - k, 1));
    } else {
        const C third = Ring<C>::from_rational(Rational(1, 3));
        u.push_back(Differential<C>().add(third, 0, 1));
        u.push_back(Differential<C>().add(third, 1, 2));
        u.push_back(Differential<C>().add(third, 0, 2));
    }
    return u;
}

// Basis with u_k = -(xi^{n_k - 1} + terms at non-gap exponents) d xi.
template <class C>
std::vector<Differential<C>> gap_normalized_basis(const PlaneCurve<C>& curve) {
    auto u = holomorphic_basis(curve);
    const auto gaps = curve.gaps().gaps;
    const int g = static_cast<int>(gaps.size());
    const int order_end = gaps.back();
    std::vector<LocalExpansionT<C>> ex;
    for (const auto& d : u) ex.push_back(expand_differential(d, curve, order_end));
    for (int k = g - 1; k >= 0; --k) {
        // scale so the leading coefficient is -1
        C lead = ex[k].at(gaps[k] - 1);
        C f = -Ring<C>::inverse(lead);
        for (auto& t : u[k].terms) t.coeff = t.coeff * f;
        for (auto& c : ex[k].coeffs) c = c * f;
        for (int m = k + 1; m < g; ++m) {
            C c = ex[k].at(gaps[m] - 1);
            if (exact_zero(c)) continue;
            // u_k <- u_k + c * u_m, since u_m has coefficient -1 at its own gap
            for (const auto& t : u[m].terms) u[k].add(c * t.coeff, t.xpow, t.ypow);
            for (int e = ex[m].leading_exponent; e < order_end; ++e) {
                int i = e - ex[k].leading_exponent;
                if (i >= 0 && i < static_cast<int>(ex[k].coeffs.size())) ex[k].coeffs[i] += c * ex[m].at(e);
            }
        }
    }
    return u;
}

// Second-kind differentials r_1..r_g, r_j with pole order n_j + 1 at infinity, dual to holomorphic_basis.
//   hyperelliptic: r_j = rho_{g+1-j}, rho_j = sum_{k=j}^{2g+1-j} (k+1-j) lambda_{k+1+j} x^k dx/(4y)
//   trigonal:      r_1 = x^2 dx/(3y^2), r_2 = 2x dx/(3y), r_3 = (5x^2 + 3 beta_3 x + beta_6) dx/(3y)
// Residue pairing Res(r_j int u_i) = delta_ij in both families.
template <class C>
std::vector<Differential<C>> meromorphic_basis(const PlaneCurve<C>& curve) {
    std::vector<Differential<C>> r;
    if (curve.kind == CurveKind::hyperelliptic) {
        const int g = curve.genus;
        const C quarter = Ring<C>::from_rational(Rational(1, 4));
        for (int jj = 1; jj <= g; ++jj) {
            const int j = g + 1 - jj;
            Differential<C> d;
            for (int k = j; k <= 2 * g + 1 - j; ++k) {
                C c = curve.lambda(k + 1 + j) * Ring<C>::from_rational(k + 1 - j) * quarter;
                if (!exact_zero(c)) d.add(c, k, 1);
            }
            r.push_back(d);
        }
    } else {
        const C third = Ring<C>::from_rational(Rational(1, 3));
        const C b3 = curve.coeffs[0], b6 = curve.coeffs[1];
        r.push_back(Differential<C>().add(third, 2, 2));
        r.push_back(Differential<C>().add(Ring<C>::from_rational(Rational(2, 3)), 1, 1));
        Differential<C> r3;
        r3.add(Ring<C>::from_rational(Rational(5, 3)), 2, 1);
        r3.add(b3, 1, 1);
        r3.add(b6 * third, 0, 1);
        r.push_back(r3);
    }
    return r;
}

// R_k, k = 1..kmax (index 0 unused): u_i = -sum_j (R_j)_i xi^{j-1} d xi.
template <class C>
std::vector<std::vector<C>> winding_numerators(const PlaneCurve<C>& curve, int kmax) {
    const auto u = holomorphic_basis(curve);
    const int g = static_cast<int>(u.size());
    std::vector<std::vector<C>> R(kmax + 1, std::vector<C>(g, Ring<C>::zero()));
    for (int i = 0; i < g; ++i) {
        auto ex = expand_differential(u[i], curve, kmax);
        for (int k = 1; k <= kmax; ++k) R[k][i] = -ex.at(k - 1);
    }
    return R;
}

// Monomials c x^i y^j z^k w^l of the 2-polar F((x,y),(z,w)).
template <class C>
struct PolarTerm {
    C coeff;
    int i, j, k, l;
};

template <class C>
std::vector<PolarTerm<C>> two_polar_terms(const PlaneCurve<C>& curve) {
    std::vector<PolarTerm<C>> t;
    auto push = [&t](const C& c, int i, int j, int k, int l) {
        if (!exact_zero(c)) t.push_back({c, i, j, k, l});
    };
    if (curve.kind == CurveKind::hyperelliptic) {
        const C two = Ring<C>::from_rational(2);
        for (int m = 0; m <= curve.genus; ++m) {
            push(two * curve.lambda(2 * m), m, 0, m, 0);
            push(curve.lambda(2 * m + 1), m + 1, 0, m, 0);
            push(curve.lambda(2 * m + 1), m, 0, m + 1, 0);
        }
        push(two, 0, 1, 0, 1);
    } else {
        const C b3 = curve.coeffs[0], b6 = curve.coeffs[1], b9 = curve.coeffs[2], b12 = curve.coeffs[3];
        auto q = [](int v) { return Ring<C>::from_rational(v); };
        // T(x,z) = 3b12 + (z+2x) b9 + x(x+2z) b6 + 3 b3 x^2 z + x^2 z^2 + 2 x^3 z
        std::vector<std::pair<C, std::pair<int, int>>> T = {
            {q(3) * b12, {0, 0}}, {b9, {0, 1}}, {q(2) * b9, {1, 0}}, {b6, {2, 0}},
            {q(2) * b6, {1, 1}},  {q(3) * b3, {2, 1}}, {q(1), {2, 2}}, {q(2), {3, 1}}};
        push(q(3), 0, 2, 0, 2);
        for (const auto& [c, e] : T) push(c, e.first, 0, e.second, 1);   // w T(x,z)
        for (const auto& [c, e] : T) push(c, e.second, 1, e.first, 0);   // y T(z,x)
    }
    return t;
}

inline cdouble two_polar(const NumericCurve& curve, cdouble x, cdouble y, cdouble z, cdouble w) {
    cdouble v = 0;
    for (const auto& t : two_polar_terms(curve))
        v += t.coeff * std::pow(x, t.i) * std::pow(y, t.j) * std::pow(z, t.k) * std::pow(w, t.l);
    return v;
}

// Symmetric table mu[i][j] (0-based), i + j <= W: regular part of
// F dx dz / (P_y(p) P_y(q) (x - z)^2) - d xi d eta / (xi - eta)^2 at (p_inf, p_inf).
template <class C>
std::vector<std::vector<C>> mu_alg_table(const PlaneCurve<C>& curve, int W) {
    if (W < 0) throw std::invalid_argument("mu table weight must be nonnegative");
    const int n = curve.n(), s = curve.s();
    const auto terms = two_polar_terms(curve);
    int a = 0;
    for (const auto& t : terms) a = std::max({a, n * t.i + s * t.j, n * t.k + s * t.l});
    const int b = (n - 1) * (s + 1) - a;
    const int D = W + 2 * n;
    const std::size_t len = D + 1;
    auto Y = local_y_series(curve, static_cast<int>(len));
    std::vector<std::vector<C>> Ypow(n);
    for (int j = 0; j < n; ++j) Ypow[j] = useries::pow(Y, j, len);
    auto Yinv = useries::inverse(Ypow[n - 1], len);
    auto uni = [&](int i, int j) {
        int sh = a - n * i - s * j + b;
        if (sh < 0) throw std::logic_error("negative exponent in the 2-polar expansion");
        auto base = useries::mul(Ypow.at(j), Yinv, len);
        std::vector<C> out(len, Ring<C>::zero());
        for (std::size_t k = 0; k + sh < len; ++k) out[k + sh] = base[k];
        return out;
    };
    // H[p][q] coefficient of xi^p eta^q, p + q <= D
    std::vector<std::vector<C>> H(len, std::vector<C>(len, Ring<C>::zero()));
    double scale = 1.0;
    for (const auto& t : terms) {
        auto P1 = uni(t.i, t.j), P2 = uni(t.k, t.l);
        for (int p = 0; p <= D; ++p)
            for (int q = 0; p + q <= D; ++q) H[p][q] += t.coeff * P1[p] * P2[q];
    }
    for (int p = 0; p <= D; ++p)
        for (int q = 0; p + q <= D; ++q) scale = std::max(scale, Ring<C>::magnitude(H[p][q]));
    // subtract E^2, E = sum_k xi^k eta^{n-1-k}
    for (int k1 = 0; k1 < n; ++k1)
        for (int k2 = 0; k2 < n; ++k2) H[k1 + k2][2 * n - 2 - k1 - k2] -= Ring<C>::one();
    // divide by (eta^n - xi^n), degree by degree, checking exactness
    auto divide = [&](const std::vector<std::vector<C>>& P, int Dmax) {
        std::vector<std::vector<C>> Q(len, std::vector<C>(len, Ring<C>::zero()));
        for (int d = 0; d <= Dmax; ++d) {
            if (d < n) {
                for (int i = 0; i <= d; ++i)
                    if (!Ring<C>::is_zero(P[i][d - i], scale))
                        throw std::runtime_error("double-pole normalization check failed in the mu expansion");
                continue;
            }
            std::vector<C> q(d - n + 1, Ring<C>::zero());
            for (int i = 0; i <= d - n; ++i) q[i] = P[i][d - i] + (i >= n ? q[i - n] : Ring<C>::zero());
            for (int i = d - n + 1; i <= d; ++i) {
                C r = P[i][d - i] + (i - n >= 0 ? q[i - n] : Ring<C>::zero());
                if (!Ring<C>::is_zero(r, scale))
                    throw std::runtime_error("double-pole normalization check failed in the mu expansion");
            }
            for (int i = 0; i <= d - n; ++i) Q[i][d - n - i] = q[i];
        }
        return Q;
    };
    auto H1 = divide(H, D);
    auto H2 = divide(H1, D - n);
    std::vector<std::vector<C>> mu(W + 1, std::vector<C>(W + 1, Ring<C>::zero()));
    for (int i = 0; i <= W; ++i)
        for (int j = 0; i + j <= W; ++j) mu[i][j] = H2[i][j];
    return mu;
}

} // namespace kptau
