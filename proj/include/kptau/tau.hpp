#pragma once

#include "kptau/curve.hpp"
#include "kptau/partitions.hpp"
#include "kptau/periods.hpp"
#include "kptau/schur.hpp"
#include "kptau/series.hpp"
#include "kptau/theta.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <vector>

namespace kptau {

enum class Gauge { sigma, theta };

// Everything needed to expand tau at a point v of the Jacobian.
struct TauModel {
    NumericCurve curve;
    PeriodData pd;
    CVector v;   // sigma-gauge argument
    CVector e;   // A^{-1} v
    int W = 8;   // truncation weight, flow variables t_1..t_W
    std::vector<std::vector<cdouble>> mu;  // mu[i][j], i + j <= W, 0-based
    std::vector<CVector> R, U;             // index 1..W+2
    CMatrix Q;                             // Q(k, l), 1-based, k + l <= W + 2
    std::shared_ptr<const ThetaContext> ctx;
};

inline TauModel make_tau_model(const NumericCurve& curve, const PeriodData& pd, const CVector& v, int W) {
    if (W < 1 || W > 12) throw ValidationError("truncation weight must be between 1 and 12");
    if (curve.genus != pd.g) throw ValidationError("curve genus does not match the period data");
    if (v.size() != pd.g) throw ValidationError("v must have g complex components");
    TauModel m;
    m.curve = curve;
    m.pd = pd;
    m.v = v;
    m.W = W;
    m.e = pd.A.fullPivLu().solve(v);
    m.ctx = std::make_shared<ThetaContext>(pd.T);
    m.mu = mu_alg_table(curve, W);
    const int kmax = W + 2;
    auto Rn = winding_numerators(curve, kmax);
    m.R.assign(kmax + 1, CVector::Zero(pd.g));
    for (int k = 1; k <= kmax; ++k)
        for (int i = 0; i < pd.g; ++i) m.R[k](i) = Rn[k][i];
    m.U = winding_vectors(pd, curve, kmax);
    m.Q = CMatrix::Zero(kmax + 1, kmax + 1);
    for (int k = 1; k <= kmax; ++k)
        for (int l = 1; k + l <= kmax; ++l)
            m.Q(k, l) = -(m.mu[k - 1][l - 1] + (m.R[k].transpose() * pd.kappa * m.R[l])(0, 0));
    return m;
}

// Q_{kl} = -(mu_{k-1,l-1} + R_k^T kappa R_l), 1 <= k, l, k + l <= W + 2.
inline const CMatrix& q_matrix(const TauModel& m) { return m.Q; }

// Lambda_k = R_k^T kappa v: tau_sigma = exp(sum Lambda_k t_k) tau_theta.
inline std::vector<cdouble> gauge_lambda(const TauModel& m) {
    std::vector<cdouble> L(m.W);
    for (int k = 1; k <= m.W; ++k) L[k - 1] = (m.R[k].transpose() * m.pd.kappa * m.v)(0, 0);
    return L;
}

// tau * exp(sum c_k t_k)
inline TauSeries gauge_multiply(const TauSeries& tau, const std::vector<cdouble>& c) {
    if (c.size() > tau.nvars()) throw std::invalid_argument("more gauge coefficients than flow variables");
    TauSeries lin(tau.basis());
    for (std::size_t k = 0; k < c.size(); ++k) lin += TauSeries::variable(tau.basis(), k) * c[k];
    return tau * series_exp(lin);
}

namespace detail {

inline TauSeries quadratic_form(const BasisPtr& basis, int W, const std::function<cdouble(int, int)>& coef) {
    TauSeries q(basis);
    for (int k = 1; k <= W; ++k)
        for (int l = k; k + l <= W; ++l) {
            Monomial mm(W, 0);
            ++mm[k - 1];
            ++mm[l - 1];
            q.set_coefficient(mm, (k == l ? 0.5 : 1.0) * coef(k, l));
        }
    return q;
}

} // namespace detail

// sigma(v + sum R_k t_k) / sigma(v) * exp(1/2 sum mu_{k-1,l-1} t_k t_l)
inline TauSeries build_tau_sigma(const TauModel& m) {
    const int g = m.pd.g, W = m.W;
    auto basis = flow_basis(W, W);
    TaylorSeries L = log_sigma_taylor(m.v, m.pd, *m.ctx, W);
    L[0] = 0;
    TaylorSeries F = series_exp(L);
    std::vector<TauSeries> s(g, TauSeries(basis));
    for (int j = 0; j < g; ++j)
        for (int k = 1; k <= W; ++k) s[j] += TauSeries::variable(basis, k - 1) * m.R[k](j);
    TauSeries tau = compose(F, s);
    TauSeries quad = detail::quadratic_form(basis, W, [&](int k, int l) { return m.mu[k - 1][l - 1]; });
    return tau * series_exp(quad);
}

// exp(-1/2 sum Q_kl t_k t_l) theta(e + sum U_k t_k) / theta(e), by a lattice sum in t.
inline TauSeries build_tau_theta(const TauModel& m) {
    const int W = m.W;
    auto basis = flow_basis(W, W);
    auto res = lattice_accumulate(*m.ctx, m.e, W, basis->size(), [&](const Eigen::VectorXi& mm, cdouble em, auto& acc) {
        const CVector mc = mm.cast<double>().cast<cdouble>();
        std::vector<cdouble> c(W);
        for (int k = 1; k <= W; ++k) c[k - 1] = cdouble(0, 2 * M_PI) * (mc.transpose() * m.U[k])(0, 0);
        // exp(sum c_k t_k) monomial by monomial
        for (std::size_t i = 0; i < basis->size(); ++i) {
            const auto& mono = basis->monomial(i);
            cdouble p = em;
            for (int k = 0; k < W; ++k)
                for (int e = 1; e <= mono[k]; ++e) p *= c[k] / static_cast<double>(e);
            acc[i] += p;
        }
    });
    check_off_divisor(res.values[0], res.abs_sum, "theta(e)");
    TauSeries th(basis);
    for (std::size_t i = 0; i < th.size(); ++i) th[i] = res.values[i] / res.values[0];
    TauSeries quad = detail::quadratic_form(basis, W, [&](int k, int l) { return -m.Q(k, l); });
    return th * series_exp(quad);
}

inline TauSeries build_tau(const TauModel& m, Gauge gauge) {
    return gauge == Gauge::sigma ? build_tau_sigma(m) : build_tau_theta(m);
}

// Affine coordinates A_ab, a + b + 1 <= W; other entries are NaN.
struct AffineMatrix {
    CMatrix A;
    int W = 0;
    bool has(int a, int b) const { return a >= 0 && b >= 0 && a + b + 1 <= W && a < A.rows() && b < A.cols(); }
    cdouble operator()(int a, int b) const {
        if (!has(a, b)) throw std::out_of_range("affine coordinate outside the computed window");
        return A(a, b);
    }
};

inline cdouble plucker_direct(const TauSeries& tau, const Partition& lambda) {
    if (tau.bound() < lambda.weight()) throw std::invalid_argument("tau truncated below |lambda|");
    return schur_pairing(lambda, tau) / tau.constant_term();
}

// A_ab = (-1)^b pi_(a|b)
inline AffineMatrix affine_from_tau(const TauSeries& tau, int K) {
    const int W = tau.bound();
    if (K < 0 || 2 * K + 1 > W) throw std::invalid_argument("affine window needs W >= 2K + 1");
    AffineMatrix out;
    out.W = W;
    out.A = CMatrix::Constant(W, W, cdouble(std::numeric_limits<double>::quiet_NaN(), 0));
    for (int a = 0; a < W; ++a)
        for (int b = 0; a + b + 1 <= W; ++b) out.A(a, b) = (b % 2 ? -1.0 : 1.0) * plucker_direct(tau, hook_from(a, b));
    return out;
}

// (-1)^{sum b} det(A_{a_i b_j})
inline cdouble plucker_giambelli(const AffineMatrix& A, const Partition& lambda) {
    auto f = frobenius_of(lambda);
    const int r = f.rank();
    if (r == 0) return 1.0;
    CMatrix M(r, r);
    int sign = 0;
    for (int i = 0; i < r; ++i) {
        sign += f.legs[i];
        for (int j = 0; j < r; ++j) {
            if (!A.has(f.arms[i], f.legs[j])) throw std::out_of_range("affine window too small for " + lambda.str());
            M(i, j) = A(f.arms[i], f.legs[j]);
        }
    }
    return (sign % 2 ? -1.0 : 1.0) * M.determinant();
}

using PluckerTable = std::map<Partition, cdouble>;

inline PluckerTable schur_expansion_table(const TauSeries& tau) {
    PluckerTable t;
    for (const auto& lam : partitions_up_to_weight(tau.bound())) t[lam] = plucker_direct(tau, lam);
    return t;
}

// sum_lambda pi_lambda s_lambda(t)
inline TauSeries reconstruct_from_table(const PluckerTable& table, const BasisPtr& basis) {
    TauSeries out(basis);
    const int W = basis->bound();
    for (const auto& [lam, pi] : table) {
        if (lam.weight() > W) continue;
        out += to_series(schur_jacobi_trudi(lam, static_cast<int>(basis->nvars()), W), basis) * pi;
    }
    return out;
}

// Baker-function route: A_ij = Q_{i+1,j}/(i+1) + P_{i+1,j} (j >= 1), A_i0 = 0, where
// sum_i P_ij z^-i = (sum_i M_ij z^-i) / (sum_i N_i z^-i) and
// sum_i N_i z^-i = theta(e - sum_k U_k z^-k / k), M_ij carries the extra factor d_{U_j}.
struct BakerData {
    AffineMatrix A;
    std::vector<cdouble> N;               // N_0..N_W
    std::vector<std::vector<cdouble>> P;  // P[i][j], j = 1..W
    std::vector<cdouble> mu;              // mu_1..mu_W
    std::vector<cdouble> lambda;          // gauge lambda_1..lambda_W
};

// tau(-t). The Baker frame of tau is the hook-formula frame of the reflected
// series: baker_affine(m).A = affine_from_tau(reflect_flows(gauge_multiply(tau_theta, lambda))).
inline TauSeries reflect_flows(const TauSeries& tau) {
    TauSeries out = tau;
    const auto& B = *tau.basis();
    for (std::size_t i = 0; i < out.size(); ++i) {
        int deg = 0;
        for (int e : B.monomial(i)) deg += e;
        if (deg % 2) out[i] = -out[i];
    }
    return out;
}

inline BakerData baker_affine(const TauModel& m) {
    const int W = m.W, L = W + 1;
    // slots: N_i (L), then M_ij for j = 1..W (W * L)
    auto res = lattice_accumulate(*m.ctx, m.e, W + 1, L + W * L, [&](const Eigen::VectorXi& mm, cdouble em, auto& acc) {
        const CVector mc = mm.cast<double>().cast<cdouble>();
        std::vector<cdouble> c(W + 1);
        for (int k = 1; k <= W; ++k) c[k] = cdouble(0, 2 * M_PI) * (mc.transpose() * m.U[k])(0, 0);
        // f(z) = exp(-sum_k c_k z^k / k) via f' = f * (-sum c_k z^{k-1})
        std::vector<cdouble> f(L, 0.0);
        f[0] = 1.0;
        for (int n = 1; n < L; ++n) {
            cdouble s = 0;
            for (int k = 1; k <= n; ++k) s -= c[k] * f[n - k];
            f[n] = s / static_cast<double>(n);
        }
        for (int i = 0; i < L; ++i) {
            acc[i] += em * f[i];
            for (int j = 1; j <= W; ++j) acc[L + (j - 1) * L + i] += em * c[j] * f[i];
        }
    });
    BakerData out;
    out.N.assign(res.values.begin(), res.values.begin() + L);
    check_off_divisor(out.N[0], res.abs_sum, "theta(e)");
    auto divide = [&](const std::vector<cdouble>& num) {
        std::vector<cdouble> q(L);
        for (int n = 0; n < L; ++n) {
            cdouble s = num[n];
            for (int k = 1; k <= n; ++k) s -= out.N[k] * q[n - k];
            q[n] = s / out.N[0];
        }
        return q;
    };
    out.P.assign(L, std::vector<cdouble>(W + 1, 0.0));
    for (int j = 1; j <= W; ++j) {
        std::vector<cdouble> Mj(res.values.begin() + L + (j - 1) * L, res.values.begin() + L + j * L);
        auto Pj = divide(Mj);
        for (int i = 0; i < L; ++i) out.P[i][j] = Pj[i];
    }
    out.A.W = W;
    out.A.A = CMatrix::Constant(W, W, cdouble(std::numeric_limits<double>::quiet_NaN(), 0));
    for (int i = 0; i < W; ++i)
        for (int j = 0; i + j + 1 <= W; ++j)
            out.A.A(i, j) = j == 0 ? cdouble(0) : m.Q(i + 1, j) / static_cast<double>(i + 1) + out.P[i + 1][j];
    // lambda_i = mu_i - i sum_{k=1}^{i-1} Q_{k,i-k} / (2k(i-k)), mu_i = i [z^i] log(N / N_0),
    // which makes tau_theta(-[z]) exp(-sum lambda_k z^k / k) constant in z
    out.mu.assign(W, 0.0);
    std::vector<cdouble> logN(L, 0.0), h(L);
    for (int i = 0; i < L; ++i) h[i] = out.N[i] / out.N[0];
    for (int n = 1; n < L; ++n) {
        cdouble s = static_cast<double>(n) * h[n];
        for (int k = 1; k < n; ++k) s -= static_cast<double>(k) * logN[k] * h[n - k];
        logN[n] = s / static_cast<double>(n);
    }
    out.lambda.assign(W, 0.0);
    for (int i = 1; i <= W; ++i) {
        out.mu[i - 1] = static_cast<double>(i) * logN[i];
        cdouble lam = out.mu[i - 1];
        for (int k = 1; k < i; ++k) lam -= static_cast<double>(i) * m.Q(k, i - k) / (2.0 * k * (i - k));
        out.lambda[i - 1] = lam;
    }
    return out;
}

} // namespace kptau
