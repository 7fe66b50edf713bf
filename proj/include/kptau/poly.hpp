#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kptau {

using Rational = boost::multiprecision::cpp_rational;
using Monomial = std::vector<int>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// Weighted degree bound applied to every stored monomial; bound < 0 means no truncation.
struct Grading {
    std::vector<int> weights;
    int bound = -1;

    int weight(const Monomial& m) const {
        int w = 0;
        for (std::size_t k = 0; k < m.size(); ++k) w += m[k] * (k < weights.size() ? weights[k] : 1);
        return w;
    }
    bool keeps(const Monomial& m) const { return bound < 0 || weight(m) <= bound; }
    bool operator==(const Grading&) const = default;
};

// Sparse multivariate polynomial with exact coefficients.
template <class C>
class SparsePoly {
public:
    using Terms = std::map<Monomial, C>;

    SparsePoly() = default;
    explicit SparsePoly(std::size_t nvars, Grading grading = {}) : nvars_(nvars), grading_(std::move(grading)) {}

    static SparsePoly constant(std::size_t nvars, const C& c, Grading grading = {}) {
        SparsePoly p(nvars, std::move(grading));
        if (c != 0) p.terms_[Monomial(nvars, 0)] = c;
        return p;
    }

    static SparsePoly variable(std::size_t nvars, std::size_t k, Grading grading = {}) {
        SparsePoly p(nvars, std::move(grading));
        Monomial m(nvars, 0);
        m.at(k) = 1;
        if (p.grading_.keeps(m)) p.terms_[m] = C(1);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const Grading& grading() const { return grading_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    C coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? C(0) : it->second;
    }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && is_zero_monomial(terms_.begin()->first));
    }

    C constant_term() const { return coeff(Monomial(nvars_, 0)); }

    void add_term(const Monomial& m, const C& c) {
        if (c == 0 || !grading_.keeps(m)) return;
        if (m.size() != nvars_) {
            widen(m.size());
            Monomial w = m;
            w.resize(nvars_, 0);
            add_term(w, c);
            return;
        }
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    SparsePoly& operator+=(const SparsePoly& o) {
        adopt_shape(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    SparsePoly& operator-=(const SparsePoly& o) {
        adopt_shape(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    SparsePoly& operator*=(const C& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& kv : terms_) kv.second *= c;
        return *this;
    }
    SparsePoly& operator/=(const C& c) {
        if (c == 0) throw std::domain_error("division by zero");
        for (auto& kv : terms_) kv.second /= c;
        return *this;
    }

    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
    friend SparsePoly operator-(SparsePoly a) { return a *= C(-1); }
    friend SparsePoly operator*(SparsePoly a, const C& c) { return a *= c; }
    friend SparsePoly operator*(const C& c, SparsePoly a) { return a *= c; }
    friend SparsePoly operator/(SparsePoly a, const C& c) { return a /= c; }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        SparsePoly r(std::max(a.nvars_, b.nvars_), a.grading_.bound >= 0 ? a.grading_ : b.grading_);
        Monomial m(r.nvars_, 0);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                for (std::size_t k = 0; k < r.nvars_; ++k)
                    m[k] = (k < ma.size() ? ma[k] : 0) + (k < mb.size() ? mb[k] : 0);
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }
    SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

    // Pad every monomial to n variables (no-op if already at least n).
    void widen(std::size_t n) {
        if (n <= nvars_) return;
        Terms t;
        for (auto& [m, c] : terms_) {
            Monomial w = m;
            w.resize(n, 0);
            t.emplace(std::move(w), std::move(c));
        }
        terms_ = std::move(t);
        nvars_ = n;
    }

    bool operator==(const SparsePoly& o) const {
        if (nvars_ == o.nvars_) return terms_ == o.terms_;
        SparsePoly a = *this, b = o;
        a.widen(o.nvars_);
        b.widen(nvars_);
        return a.terms_ == b.terms_;
    }
    bool operator==(int c) const { return *this == constant(nvars_, C(c)); }

    // Keep only monomials of weighted degree exactly w.
    SparsePoly homogeneous_part(int w) const {
        SparsePoly r(nvars_, grading_);
        for (const auto& [m, c] : terms_)
            if (grading_.weight(m) == w) r.terms_.emplace(m, c);
        return r;
    }

    // Text form "coeff * t1^a t2^b" per line, using the given variable stem.
    std::string str(const std::string& stem = "t") const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << '\n';
            first = false;
            os << c;
            bool any = false;
            for (std::size_t k = 0; k < m.size(); ++k) {
                if (m[k] == 0) continue;
                os << (any ? " " : " * ") << stem << (k + 1);
                if (m[k] > 1) os << '^' << m[k];
                any = true;
            }
        }
        return os.str();
    }

private:
    static bool is_zero_monomial(const Monomial& m) {
        for (int e : m)
            if (e) return false;
        return true;
    }
    void adopt_shape(const SparsePoly& o) {
        if (grading_.bound < 0 && o.grading_.bound >= 0 && terms_.empty()) grading_ = o.grading_;
        widen(o.nvars_);
    }

    std::size_t nvars_ = 0;
    Grading grading_;
    Terms terms_;
};

// Polynomial in the flow variables t_1..t_M with weight(t_k) = k, truncated at W.
using ExactPoly = SparsePoly<Rational>;

inline Grading flow_grading(int M, int W) {
    Grading g;
    for (int k = 1; k <= M; ++k) g.weights.push_back(k);
    g.bound = W;
    return g;
}

inline ExactPoly flow_zero(int M, int W) { return ExactPoly(M, flow_grading(M, W)); }
inline ExactPoly flow_one(int M, int W) { return ExactPoly::constant(M, Rational(1), flow_grading(M, W)); }
inline ExactPoly flow_var(int M, int W, int k) { return ExactPoly::variable(M, k - 1, flow_grading(M, W)); }

// Polynomial in symbolic curve coefficients (no truncation); used as a coefficient ring.
using SymPoly = SparsePoly<Rational>;

// Value at a numeric point; variables beyond the point are taken as zero.
template <class T>
T evaluate(const SparsePoly<Rational>& p, const std::vector<T>& point) {
    T acc = T(0);
    for (const auto& [m, c] : p.terms()) {
        T v = T(to_double(c));
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] == 0) continue;
            if (k >= point.size()) {
                v = T(0);
                break;
            }
            for (int e = 0; e < m[k]; ++e) v *= point[k];
        }
        acc += v;
    }
    return acc;
}

} // namespace kptau
