#pragma once

#include "kptau/errors.hpp"
#include "kptau/parallel.hpp"
#include "kptau/periods.hpp"
#include "kptau/series.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <map>
#include <vector>

namespace kptau {

using TaylorSeries = GradedSeries<std::complex<double>>;

// Riemann theta data for a normalized period matrix T (symmetric, Im T > 0).
class ThetaContext {
public:
    explicit ThetaContext(CMatrix T, double tail_tol = 1e-15) : T_(std::move(T)), tail_tol_(tail_tol) {
        if (T_.rows() != T_.cols() || T_.rows() == 0) throw ValidationError("theta needs a square period matrix");
        if ((T_ - T_.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, T_.cwiseAbs().maxCoeff()))
            throw ValidationError("theta period matrix must be symmetric");
        Y_ = 0.5 * (T_.imag() + T_.imag().transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y_);
        lambda_min_ = M_PI * es.eigenvalues().minCoeff();
        if (!(lambda_min_ > 0)) throw ValidationError("Im T is not positive definite");
        Yinv_ = Y_.inverse();
    }

    int genus() const { return static_cast<int>(T_.rows()); }
    const CMatrix& T() const { return T_; }
    double tail_tol() const { return tail_tol_; }
    double lambda_min() const { return lambda_min_; }

    int radius(int order) const {
        return static_cast<int>(std::ceil(std::sqrt(-std::log(tail_tol_) / lambda_min_))) + order + 1;
    }

    // Lattice point nearest the maximum of |exp(i pi m^T T m + 2 i pi m^T z)|.
    Eigen::VectorXi center(const CVector& z) const {
        Eigen::VectorXd c = -Yinv_ * z.imag();
        Eigen::VectorXi m(genus());
        for (int j = 0; j < genus(); ++j) m(j) = static_cast<int>(std::lround(c(j)));
        return m;
    }

    std::complex<double> term(const Eigen::VectorXi& m, const CVector& z) const {
        const Eigen::VectorXd md = m.cast<double>();
        const CVector mc = md.cast<std::complex<double>>();
        std::complex<double> q = (mc.transpose() * T_ * mc)(0, 0);
        std::complex<double> l = (mc.transpose() * z)(0, 0);
        return std::exp(std::complex<double>(0, M_PI) * q + std::complex<double>(0, 2 * M_PI) * l);
    }

private:
    CMatrix T_;
    double tail_tol_;
    Eigen::MatrixXd Y_, Yinv_;
    double lambda_min_ = 0;
};

struct LatticeSum {
    std::vector<std::complex<double>> values;
    double abs_sum = 0;  // sum of |exp term| over the box, for divisor tests
};

// Sums f(m, E_m, acc) over the lattice box of the given derivative order around
// the dominant point. Slices along the first coordinate are summed in a fixed
// order so results do not depend on the thread count.
template <class F>
LatticeSum lattice_accumulate(const ThetaContext& ctx, const CVector& z, int order, std::size_t len, F f) {
    if (z.size() != ctx.genus()) throw std::invalid_argument("theta argument has the wrong dimension");
    const int g = ctx.genus(), R = ctx.radius(order);
    const Eigen::VectorXi c = ctx.center(z);
    const int width = 2 * R + 1;
    std::vector<std::vector<std::complex<double>>> parts(width, std::vector<std::complex<double>>(len));
    std::vector<double> abs_parts(width, 0.0);
    parallel_for(width, [&](std::size_t slice) {
        Eigen::VectorXi off = Eigen::VectorXi::Constant(g, -R);
        off(0) = static_cast<int>(slice) - R;
        auto& acc = parts[slice];
        while (true) {
            Eigen::VectorXi m = c + off;
            std::complex<double> e = ctx.term(m, z);
            abs_parts[slice] += std::abs(e);
            f(m, e, acc);
            int k = 1;
            for (; k < g; ++k) {
                if (++off(k) <= R) break;
                off(k) = -R;
            }
            if (k == g) break;
        }
    });
    LatticeSum out;
    out.values.assign(len, 0.0);
    for (int s = 0; s < width; ++s) {
        for (std::size_t i = 0; i < len; ++i) out.values[i] += parts[s][i];
        out.abs_sum += abs_parts[s];
    }
    return out;
}

inline std::complex<double> theta(const CVector& z, const ThetaContext& ctx) {
    return lattice_accumulate(ctx, z, 0, 1, [](const Eigen::VectorXi&, std::complex<double> e, auto& acc) {
               acc[0] += e;
           }).values[0];
}

// Mixed partial d^alpha theta / dz^alpha; alpha[j] is the order in z_j.
inline std::complex<double> theta_deriv(const CVector& z, const ThetaContext& ctx, const std::vector<int>& alpha) {
    if (static_cast<int>(alpha.size()) != ctx.genus()) throw std::invalid_argument("derivative multi-index has the wrong length");
    int order = 0;
    for (int a : alpha) {
        if (a < 0) throw std::invalid_argument("negative derivative order");
        order += a;
    }
    if (order > 16) throw std::invalid_argument("derivative order above 16");
    return lattice_accumulate(ctx, z, order, 1, [&](const Eigen::VectorXi& m, std::complex<double> e, auto& acc) {
               std::complex<double> p = e;
               for (std::size_t j = 0; j < alpha.size(); ++j)
                   p *= std::pow(std::complex<double>(0, 2 * M_PI * m(j)), alpha[j]);
               acc[0] += p;
           }).values[0];
}

// Taylor series of s -> theta(z + D s) to total degree `degree`; D is g x n.
inline TaylorSeries theta_taylor(const CVector& z, const ThetaContext& ctx, const CMatrix& D, int degree,
                                 double* abs_sum = nullptr) {
    const int n = static_cast<int>(D.cols());
    auto basis = taylor_basis(n, degree);
    std::vector<double> inv_fact(degree + 1, 1.0);
    for (int k = 1; k <= degree; ++k) inv_fact[k] = inv_fact[k - 1] / k;
    const CMatrix Dt = D.transpose();
    auto res = lattice_accumulate(ctx, z, degree, basis->size(), [&](const Eigen::VectorXi& m, std::complex<double> e, auto& acc) {
        CVector w = Dt * (std::complex<double>(0, 2 * M_PI) * m.cast<double>().cast<std::complex<double>>());
        std::vector<std::vector<std::complex<double>>> pw(n, std::vector<std::complex<double>>(degree + 1));
        for (int j = 0; j < n; ++j) {
            pw[j][0] = 1.0;
            for (int k = 1; k <= degree; ++k) pw[j][k] = pw[j][k - 1] * w(j);
        }
        for (std::size_t i = 0; i < basis->size(); ++i) {
            const auto& mono = basis->monomial(i);
            std::complex<double> p = e;
            for (int j = 0; j < n; ++j)
                if (mono[j]) p *= pw[j][mono[j]] * inv_fact[mono[j]];
            acc[i] += p;
        }
    });
    if (abs_sum) *abs_sum = res.abs_sum;
    TaylorSeries s(basis);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = res.values[i];
    return s;
}

inline void check_off_divisor(std::complex<double> value, double abs_sum, const char* what) {
    if (std::abs(value) < 1e-10 * abs_sum)
        throw DivisorError(std::string("divisor point: ") + what + " vanishes to working precision");
}

// sigma(v) = theta(A^{-1} v) exp(v^T kappa v / 2)
inline std::complex<double> sigma(const CVector& v, const PeriodData& pd, const ThetaContext& ctx) {
    CVector e = pd.A.fullPivLu().solve(v);
    std::complex<double> q = (v.transpose() * pd.kappa * v)(0, 0);
    return theta(e, ctx) * std::exp(0.5 * q);
}

// Taylor series of s -> log sigma(v + s) to total degree `degree`.
inline TaylorSeries log_sigma_taylor(const CVector& v, const PeriodData& pd, const ThetaContext& ctx, int degree) {
    const int g = pd.g;
    const CMatrix Ainv = pd.A.fullPivLu().inverse();
    double abs_sum = 0;
    TaylorSeries th = theta_taylor(Ainv * v, ctx, Ainv, degree, &abs_sum);
    check_off_divisor(th.constant_term(), abs_sum, "sigma(v)");
    TaylorSeries L = series_log(th);
    auto basis = L.basis();
    const CVector kv = pd.kappa * v;
    L[0] += 0.5 * (v.transpose() * kv)(0, 0);
    if (degree >= 1)
        for (int i = 0; i < g; ++i) {
            Monomial m(g, 0);
            m[i] = 1;
            L[basis->find(m)] += kv(i);
        }
    if (degree >= 2)
        for (int i = 0; i < g; ++i)
            for (int j = i; j < g; ++j) {
                Monomial m(g, 0);
                ++m[i];
                ++m[j];
                L[basis->find(m)] += (i == j ? 0.5 : 1.0) * pd.kappa(i, j);
            }
    return L;
}

// Kleinian zeta and wp functions at a point. Indices are 1-based.
struct KleinPoint {
    CVector v;
    std::vector<std::complex<double>> zeta;
    std::map<std::vector<int>, std::complex<double>> wp;  // sorted multi-index -> -d^k log sigma
    int max_order = 0;

    std::complex<double> P(std::vector<int> idx) const {
        std::sort(idx.begin(), idx.end());
        auto it = wp.find(idx);
        if (it == wp.end()) throw std::out_of_range("wp index not computed");
        return it->second;
    }
    std::complex<double> wp2(int i, int j) const { return P({i, j}); }
    std::complex<double> wp3(int i, int j, int k) const { return P({i, j, k}); }
    std::complex<double> wp4(int i, int j, int k, int l) const { return P({i, j, k, l}); }
};

inline KleinPoint klein_from_log_sigma(const CVector& v, const TaylorSeries& L) {
    const auto& B = *L.basis();
    const int g = static_cast<int>(L.nvars());
    KleinPoint kp;
    kp.v = v;
    kp.max_order = B.bound();
    kp.zeta.assign(g, 0.0);
    for (std::size_t i = 0; i < L.size(); ++i) {
        const auto& m = B.monomial(i);
        int order = 0;
        double fact = 1;
        std::vector<int> idx;
        for (int j = 0; j < g; ++j)
            for (int e = 1; e <= m[j]; ++e) {
                fact *= e;
                idx.push_back(j + 1);
                ++order;
            }
        if (order == 1) kp.zeta[idx[0] - 1] = L[i];
        if (order >= 2) kp.wp[idx] = -fact * L[i];
    }
    return kp;
}

inline KleinPoint wp_values(const CVector& v, const PeriodData& pd, const ThetaContext& ctx, int max_order = 4) {
    if (max_order < 2 || max_order > 12) throw std::invalid_argument("wp order must be between 2 and 12");
    return klein_from_log_sigma(v, log_sigma_taylor(v, pd, ctx, max_order));
}

} // namespace kptau
