#pragma once

#include "kptau/partitions.hpp"
#include "kptau/poly.hpp"
#include "kptau/schur.hpp"

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace kptau {

// All monomials in nvars variables with weighted degree <= bound, grouped by weight.
class GradedBasis {
public:
    GradedBasis(std::vector<int> weights, int bound) : weights_(std::move(weights)), bound_(bound) {
        if (bound < 0) throw std::invalid_argument("negative truncation bound");
        for (int w : weights_)
            if (w <= 0) throw std::invalid_argument("variable weights must be positive");
        grade_start_.assign(bound_ + 2, 0);
        for (int w = 0; w <= bound_; ++w) {
            grade_start_[w] = monomials_.size();
            Monomial m(weights_.size(), 0);
            enumerate(m, 0, w);
        }
        grade_start_[bound_ + 1] = monomials_.size();
        for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
        build_products();
    }

    std::size_t nvars() const { return weights_.size(); }
    int bound() const { return bound_; }
    const std::vector<int>& weights() const { return weights_; }
    std::size_t size() const { return monomials_.size(); }
    const Monomial& monomial(std::size_t i) const { return monomials_[i]; }
    int weight(std::size_t i) const { return weight_of_[i]; }
    std::size_t grade_begin(int w) const { return grade_start_[w]; }
    std::size_t grade_end(int w) const { return grade_start_[w + 1]; }

    int weight_of(const Monomial& m) const {
        int w = 0;
        for (std::size_t k = 0; k < m.size(); ++k) w += m[k] * weights_.at(k);
        return w;
    }

    // index of m, or size() if m is not stored
    std::size_t find(const Monomial& m) const {
        auto it = index_.find(m);
        return it == index_.end() ? size() : it->second;
    }

    // (i, j, k) with monomial(i) * monomial(j) = monomial(k), ordered by weight of k
    struct Product {
        std::size_t i, j, k;
    };
    const std::vector<Product>& products() const { return products_; }
    std::size_t products_begin(int w) const { return product_start_[w]; }
    std::size_t products_end(int w) const { return product_start_[w + 1]; }

    bool operator==(const GradedBasis& o) const { return weights_ == o.weights_ && bound_ == o.bound_; }

private:
    void enumerate(Monomial& m, std::size_t k, int rest) {
        if (k == weights_.size()) {
            if (rest == 0) {
                monomials_.push_back(m);
                weight_of_.push_back(weight_of(m));
            }
            return;
        }
        for (int e = rest / weights_[k]; e >= 0; --e) {
            m[k] = e;
            enumerate(m, k + 1, rest - e * weights_[k]);
        }
        m[k] = 0;
    }

    void build_products() {
        product_start_.assign(bound_ + 2, 0);
        std::vector<std::vector<Product>> by_grade(bound_ + 1);
        Monomial m(weights_.size());
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) {
                int w = weight_of_[i] + weight_of_[j];
                if (w > bound_) continue;
                for (std::size_t k = 0; k < m.size(); ++k) m[k] = monomials_[i][k] + monomials_[j][k];
                by_grade[w].push_back({i, j, index_.at(m)});
            }
        for (int w = 0; w <= bound_; ++w) {
            product_start_[w] = products_.size();
            products_.insert(products_.end(), by_grade[w].begin(), by_grade[w].end());
        }
        product_start_[bound_ + 1] = products_.size();
    }

    std::vector<int> weights_;
    int bound_;
    std::vector<Monomial> monomials_;
    std::vector<int> weight_of_;
    std::vector<std::size_t> grade_start_;
    std::map<Monomial, std::size_t> index_;
    std::vector<Product> products_;
    std::vector<std::size_t> product_start_;
};

using BasisPtr = std::shared_ptr<const GradedBasis>;

// Shared bases keyed by (weights, bound).
inline BasisPtr graded_basis(const std::vector<int>& weights, int bound) {
    static std::mutex mu;
    static std::map<std::pair<std::vector<int>, int>, BasisPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(weights, bound);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto b = std::make_shared<const GradedBasis>(weights, bound);
    cache.emplace(key, b);
    return b;
}

// Flow variables t_1..t_M with weight(t_k) = k.
inline BasisPtr flow_basis(int M, int W) {
    std::vector<int> w(M);
    for (int k = 0; k < M; ++k) w[k] = k + 1;
    return graded_basis(w, W);
}

// Variables of unit weight (Taylor expansion in C^g by total degree).
inline BasisPtr taylor_basis(int nvars, int degree) { return graded_basis(std::vector<int>(nvars, 1), degree); }

// Truncated power series with dense coefficients over a graded basis.
template <class T>
class GradedSeries {
public:
    GradedSeries() = default;
    explicit GradedSeries(BasisPtr basis) : basis_(std::move(basis)), c_(basis_->size(), T(0)) {}

    static GradedSeries constant(BasisPtr basis, T value) {
        GradedSeries s(std::move(basis));
        s.c_[0] = value;
        return s;
    }
    static GradedSeries variable(BasisPtr basis, std::size_t k) {
        GradedSeries s(std::move(basis));
        Monomial m(s.basis_->nvars(), 0);
        m.at(k) = 1;
        std::size_t i = s.basis_->find(m);
        if (i < s.size()) s.c_[i] = T(1);
        return s;
    }

    const BasisPtr& basis() const { return basis_; }
    std::size_t size() const { return c_.size(); }
    int bound() const { return basis_->bound(); }
    std::size_t nvars() const { return basis_->nvars(); }

    T& operator[](std::size_t i) { return c_[i]; }
    const T& operator[](std::size_t i) const { return c_[i]; }
    const std::vector<T>& data() const { return c_; }

    T constant_term() const { return c_[0]; }

    T coefficient(const Monomial& m) const {
        Monomial mm = m;
        if (mm.size() > nvars()) {
            for (std::size_t k = nvars(); k < mm.size(); ++k)
                if (mm[k] != 0) throw std::out_of_range("monomial uses a variable beyond the series");
            mm.resize(nvars());
        }
        mm.resize(nvars(), 0);
        if (basis_->weight_of(mm) > bound())
            throw std::out_of_range("monomial weight exceeds truncation bound");
        return c_[basis_->find(mm)];
    }

    void set_coefficient(const Monomial& m, T value) {
        std::size_t i = basis_->find(m);
        if (i == size()) throw std::out_of_range("monomial weight exceeds truncation bound");
        c_[i] = value;
    }

    GradedSeries& operator+=(const GradedSeries& o) {
        check(o);
        for (std::size_t i = 0; i < size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    GradedSeries& operator-=(const GradedSeries& o) {
        check(o);
        for (std::size_t i = 0; i < size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    GradedSeries& operator*=(const T& s) {
        for (auto& x : c_) x *= s;
        return *this;
    }

    friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
    friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }
    friend GradedSeries operator*(GradedSeries a, const T& s) { return a *= s; }
    friend GradedSeries operator*(const T& s, GradedSeries a) { return a *= s; }
    friend GradedSeries operator-(GradedSeries a) { return a *= T(-1); }

    friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) {
        a.check(b);
        GradedSeries r(a.basis_);
        for (const auto& p : a.basis_->products()) r.c_[p.k] += a.c_[p.i] * b.c_[p.j];
        return r;
    }
    GradedSeries& operator*=(const GradedSeries& o) { return *this = *this * o; }

    // Part of weight exactly w.
    GradedSeries homogeneous_part(int w) const {
        GradedSeries r(basis_);
        for (std::size_t i = basis_->grade_begin(w); i < basis_->grade_end(w); ++i) r.c_[i] = c_[i];
        return r;
    }

    double max_abs() const {
        double m = 0;
        for (const auto& x : c_) m = std::max(m, static_cast<double>(std::abs(x)));
        return m;
    }

private:
    void check(const GradedSeries& o) const {
        if (!basis_ || !o.basis_ || !(*basis_ == *o.basis_))
            throw std::invalid_argument("series have different variables or truncation");
    }

    BasisPtr basis_;
    std::vector<T> c_;
};

using TauSeries = GradedSeries<std::complex<double>>;

inline TauSeries make_tau_series(int M, int W) { return TauSeries(flow_basis(M, W)); }

inline TauSeries series_mul(const TauSeries& f, const TauSeries& g) { return f * g; }

// exp via the weighted Euler operator E (E t^m = wt(m) t^m): E g = g E f, solved grade by grade.
template <class T>
GradedSeries<T> series_exp(const GradedSeries<T>& f) {
    const auto& B = *f.basis();
    GradedSeries<T> g(f.basis());
    g[0] = std::exp(f[0]);
    std::vector<T> ef(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) ef[i] = T(B.weight(i)) * f[i];
    for (int w = 1; w <= B.bound(); ++w) {
        for (std::size_t p = B.products_begin(w); p < B.products_end(w); ++p) {
            const auto& pr = B.products()[p];
            if (B.weight(pr.i) == 0) continue;
            g[pr.k] += ef[pr.i] * g[pr.j];
        }
        for (std::size_t i = B.grade_begin(w); i < B.grade_end(w); ++i) g[i] /= T(w);
    }
    return g;
}

// log for nonzero constant term: log(c) + log(f/c), with E f = f E(log f).
template <class T>
GradedSeries<T> series_log(const GradedSeries<T>& f) {
    const auto& B = *f.basis();
    if (f[0] == T(0)) throw std::domain_error("series_log needs a nonzero constant term");
    GradedSeries<T> h = f * (T(1) / f[0]);
    GradedSeries<T> el(f.basis());  // E(log h)
    for (int w = 1; w <= B.bound(); ++w) {
        for (std::size_t i = B.grade_begin(w); i < B.grade_end(w); ++i) el[i] = T(w) * h[i];
        for (std::size_t p = B.products_begin(w); p < B.products_end(w); ++p) {
            const auto& pr = B.products()[p];
            int wi = B.weight(pr.i);
            if (wi == 0 || wi == w) continue;
            el[pr.k] -= h[pr.j] * el[pr.i];
        }
    }
    GradedSeries<T> out(f.basis());
    out[0] = std::log(f[0]);
    for (std::size_t i = 1; i < f.size(); ++i) out[i] = el[i] / T(B.weight(i));
    return out;
}

template <class T>
T series_coefficient(const GradedSeries<T>& f, const Monomial& m) {
    return f.coefficient(m);
}

// Substitute vars_i -> s[i] (series without constant term) into a Taylor series F.
template <class T>
GradedSeries<T> compose(const GradedSeries<T>& F, const std::vector<GradedSeries<T>>& s) {
    if (s.empty() || s.size() != F.nvars()) throw std::invalid_argument("compose: variable count mismatch");
    const auto& target = s.front().basis();
    for (const auto& si : s)
        if (si.constant_term() != T(0)) throw std::invalid_argument("compose: inner series must vanish at 0");
    const int D = F.bound();
    // powers[i][e] = s_i^e
    std::vector<std::vector<GradedSeries<T>>> powers(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        powers[i].push_back(GradedSeries<T>::constant(target, T(1)));
        for (int e = 1; e <= std::min(D, target->bound()); ++e) powers[i].push_back(powers[i].back() * s[i]);
    }
    GradedSeries<T> out(target);
    const auto& B = *F.basis();
    for (std::size_t idx = 0; idx < F.size(); ++idx) {
        if (F[idx] == T(0)) continue;
        const auto& m = B.monomial(idx);
        if (B.weight(idx) > target->bound()) continue;
        GradedSeries<T> term = GradedSeries<T>::constant(target, F[idx]);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i]) term = term * powers[i][m[i]];
        out += term;
    }
    return out;
}

// Terms (monomial, coefficient * pairing weight) of s_lambda in t_1..t_|lambda|, cached.
inline const std::vector<std::pair<Monomial, double>>& schur_pairing_terms(const Partition& lambda) {
    static std::mutex mtx;
    static std::map<Partition, std::vector<std::pair<Monomial, double>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(lambda);
    if (it != cache.end()) return it->second;
    const int n = std::max(lambda.weight(), 1);
    std::vector<std::pair<Monomial, double>> terms;
    const ExactPoly s = schur_jacobi_trudi(lambda, n, n);
    for (const auto& [m, c] : s.terms()) terms.emplace_back(m, to_double(c * pairing_weight(m)));
    return cache.emplace(lambda, std::move(terms)).first->second;
}

// s_lambda(d_t) f at t = 0, d_k = (1/k) d/dt_k.
inline std::complex<double> schur_pairing(const Partition& lambda, const TauSeries& f) {
    if (f.bound() < lambda.weight()) throw std::invalid_argument("series truncated below |lambda|");
    const std::size_t M = f.nvars();
    std::complex<double> total = 0;
    for (const auto& [m, c] : schur_pairing_terms(lambda)) {
        bool fits = true;
        for (std::size_t k = M; k < m.size(); ++k)
            if (m[k]) fits = false;
        if (fits) total += c * f.coefficient(m);
    }
    return total;
}

// Exact polynomial in flow variables as a numeric series on the given basis.
inline TauSeries to_series(const ExactPoly& p, const BasisPtr& basis) {
    TauSeries s(basis);
    for (const auto& [m, c] : p.terms()) {
        Monomial mm = m;
        mm.resize(basis->nvars(), 0);
        std::size_t i = basis->find(mm);
        if (i < s.size()) s[i] += to_double(c);
    }
    return s;
}

} // namespace kptau
