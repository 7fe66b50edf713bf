#pragma once

#include "kptau/partitions.hpp"
#include "kptau/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace kptau {

// h_j(t): coefficient of z^j in exp(sum t_i z^i), from j h_j = sum_k k t_k h_{j-k}.
inline std::vector<ExactPoly> complete_homogeneous_table(int jmax, int M, int W) {
    std::vector<ExactPoly> h;
    h.reserve(jmax + 1);
    h.push_back(flow_one(M, W));
    for (int j = 1; j <= jmax; ++j) {
        ExactPoly acc = flow_zero(M, W);
        for (int k = 1; k <= std::min(j, M); ++k) acc += flow_var(M, W, k) * h[j - k] * Rational(k);
        acc /= Rational(j);
        h.push_back(std::move(acc));
    }
    return h;
}

inline ExactPoly complete_homogeneous(int j, int M, int W) {
    if (j < 0) return flow_zero(M, W);
    return complete_homogeneous_table(j, M, W)[j];
}

inline ExactPoly complete_homogeneous(int j, int M) { return complete_homogeneous(j, M, std::max(M, j)); }

// f(t) -> f(-t)
inline ExactPoly negate_arguments(const ExactPoly& f) {
    ExactPoly r(f.nvars(), f.grading());
    for (const auto& [m, c] : f.terms()) {
        int deg = 0;
        for (int e : m) deg += e;
        r.add_term(m, (deg % 2) ? Rational(-c) : c);
    }
    return r;
}

namespace detail {

// Determinant by Laplace expansion along rows, memoised over used-column subsets.
inline ExactPoly laplace_det(const std::vector<std::vector<ExactPoly>>& a, const ExactPoly& one) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return one;
    std::map<unsigned, ExactPoly> memo;
    // minor(row, mask): determinant of rows row..n-1 with columns not in mask
    auto minor = [&](auto&& self, int row, unsigned mask) -> ExactPoly {
        if (row == n) return one;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        ExactPoly acc = one - one;
        int sign_pos = 0;
        for (int c = 0; c < n; ++c) {
            if (mask & (1u << c)) continue;
            if (!a[row][c].is_zero()) {
                ExactPoly term = a[row][c] * self(self, row + 1, mask | (1u << c));
                if (sign_pos % 2) acc -= term;
                else acc += term;
            }
            ++sign_pos;
        }
        memo.emplace(mask, acc);
        return acc;
    };
    return minor(minor, 0, 0u);
}

} // namespace detail

// s_lambda = det(h_{lambda_i - i + j}), truncated at weight W >= |lambda|.
inline ExactPoly schur_jacobi_trudi(const Partition& lambda, int M, int W) {
    if (W < lambda.weight()) throw std::invalid_argument("truncation weight below |lambda|");
    const int l = lambda.length();
    int jmax = l > 0 ? lambda[1] + l : 0;
    auto h = complete_homogeneous_table(jmax, M, W);
    ExactPoly zero = flow_zero(M, W);
    std::vector<std::vector<ExactPoly>> a(l, std::vector<ExactPoly>(l, zero));
    for (int i = 1; i <= l; ++i)
        for (int j = 1; j <= l; ++j) {
            int idx = lambda[i] - i + j;
            if (idx >= 0) a[i - 1][j - 1] = h[idx];
        }
    return detail::laplace_det(a, flow_one(M, W));
}

inline ExactPoly schur_jacobi_trudi(const Partition& lambda, int M) {
    return schur_jacobi_trudi(lambda, M, std::max(M, lambda.weight()));
}

// (-1)^b sum_{j=1}^{b+1} h_{b-j+1}(-t) h_{a+j}(t)
inline ExactPoly hook_schur_bilinear(int a, int b, int M, int W) {
    if (a < 0 || b < 0) throw std::invalid_argument("hook arm and leg must be nonnegative");
    auto h = complete_homogeneous_table(a + b + 1, M, W);
    ExactPoly acc = flow_zero(M, W);
    for (int j = 1; j <= b + 1; ++j) acc += negate_arguments(h[b - j + 1]) * h[a + j];
    if (b % 2) acc = -acc;
    return acc;
}

inline ExactPoly hook_schur_bilinear(int a, int b, int M) { return hook_schur_bilinear(a, b, M, std::max(M, a + b + 1)); }

namespace detail {

inline Rational exact_det(std::vector<std::vector<Rational>> a) {
    const int n = static_cast<int>(a.size());
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

// Solve the (possibly overdetermined, consistent) system rows * x = rhs exactly.
inline std::vector<Rational> exact_solve(std::vector<std::vector<Rational>> rows, std::vector<Rational> rhs) {
    const int m = static_cast<int>(rows.size());
    const int n = m ? static_cast<int>(rows[0].size()) : 0;
    std::vector<int> pivcol;
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        int p = r;
        while (p < m && rows[p][c] == 0) ++p;
        if (p == m) continue;
        std::swap(rows[p], rows[r]);
        std::swap(rhs[p], rhs[r]);
        for (int i = 0; i < m; ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rational f = rows[i][c] / rows[r][c];
            for (int k = c; k < n; ++k) rows[i][k] -= f * rows[r][k];
            rhs[i] -= f * rhs[r];
        }
        pivcol.push_back(c);
        ++r;
    }
    if (r < n) throw std::runtime_error("oracle system is rank deficient");
    for (int i = r; i < m; ++i)
        if (rhs[i] != 0) throw std::runtime_error("oracle system is inconsistent");
    std::vector<Rational> x(n);
    for (int i = 0; i < r; ++i) x[pivcol[i]] = rhs[i] / rows[i][pivcol[i]];
    return x;
}

} // namespace detail

// Brute-force Schur function: alternant ratio a_{lambda+delta}/a_delta in N variables,
// sampled at integer points and solved for its expansion in t_1..t_min(N,|lambda|)
// where t_i = (1/i) sum_a x_a^i.
inline ExactPoly schur_bialternant_oracle(const Partition& lambda, int N) {
    if (N < lambda.length()) throw std::invalid_argument("oracle needs at least length(lambda) variables");
    const int n = lambda.weight();
    const int M = std::max(n, 1);
    const int V = std::min(N, n);
    // unknowns: monomials in t_1..t_V of weight exactly n
    std::vector<Monomial> basis;
    for (const auto& p : partitions_of(n)) {
        if (!p.empty() && p[1] > V) continue;
        Monomial m(M, 0);
        for (int part : p.parts()) ++m[part - 1];
        basis.push_back(m);
    }
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    const int samples = static_cast<int>(basis.size()) + 4;
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next = [&state](int mod) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<int>((state >> 33) % static_cast<std::uint64_t>(mod));
    };
    for (int s = 0; s < samples; ++s) {
        std::vector<Rational> x;
        while (static_cast<int>(x.size()) < N) {
            Rational c(next(41) - 20, 1 + next(6));
            if (std::find(x.begin(), x.end(), c) == x.end()) x.push_back(c);
        }
        std::vector<std::vector<Rational>> alt(N, std::vector<Rational>(N)), van(N, std::vector<Rational>(N));
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                Rational e = 1, v = 1;
                int pe = lambda[j + 1] + N - (j + 1), pv = N - (j + 1);
                for (int k = 0; k < pe; ++k) e *= x[i];
                for (int k = 0; k < pv; ++k) v *= x[i];
                alt[i][j] = e;
                van[i][j] = v;
            }
        Rational value = detail::exact_det(alt) / detail::exact_det(van);
        std::vector<Rational> t(M + 1, 0);
        for (int i = 1; i <= M; ++i) {
            Rational p = 0;
            for (int a = 0; a < N; ++a) {
                Rational xp = 1;
                for (int k = 0; k < i; ++k) xp *= x[a];
                p += xp;
            }
            t[i] = p / i;
        }
        std::vector<Rational> row;
        for (const auto& m : basis) {
            Rational mv = 1;
            for (int k = 0; k < M; ++k)
                for (int e = 0; e < m[k]; ++e) mv *= t[k + 1];
            row.push_back(mv);
        }
        rows.push_back(std::move(row));
        rhs.push_back(value);
    }
    auto coeffs = detail::exact_solve(rows, rhs);
    ExactPoly out = flow_zero(M, n);
    for (std::size_t i = 0; i < basis.size(); ++i) out.add_term(basis[i], coeffs[i]);
    return out;
}

// Pairing weight of a monomial under s(d/dt) with d_k = (1/k) d/dt_k:  prod m_k! / k^{m_k}.
inline Rational pairing_weight(const Monomial& m) {
    Rational w = 1;
    for (std::size_t k = 0; k < m.size(); ++k)
        for (int e = 1; e <= m[k]; ++e) w *= Rational(e, static_cast<int>(k + 1));
    return w;
}

inline Rational schur_pairing(const Partition& lambda, const ExactPoly& f) {
    const int W = f.grading().bound;
    if (W >= 0 && W < lambda.weight()) throw std::invalid_argument("series truncated below |lambda|");
    const int M = std::max<int>(static_cast<int>(f.nvars()), lambda.weight());
    ExactPoly s = schur_jacobi_trudi(lambda, M, std::max(M, lambda.weight()));
    Rational total = 0;
    for (const auto& [m, c] : s.terms()) {
        Monomial mm = m;
        mm.resize(f.nvars(), 0);
        bool fits = true;
        for (std::size_t k = f.nvars(); k < m.size(); ++k)
            if (m[k]) fits = false;
        if (fits) total += c * pairing_weight(m) * f.coeff(mm);
    }
    return total;
}

} // namespace kptau
