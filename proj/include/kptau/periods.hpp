#pragma once

#include "kptau/curve.hpp"
#include "kptau/errors.hpp"
#include "kptau/parallel.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <string>
#include <vector>

namespace kptau {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// First- and second-kind periods. Rows index differentials, columns cycles:
// A_ij = oint_{a_j} u_i, B_ij = oint_{b_j} u_i, S = -oint_a r, T2 = -oint_b r.
struct PeriodData {
    int g = 0;
    CMatrix A, B, S, T2;
    CMatrix T;      // A^{-1} B
    CMatrix kappa;  // S A^{-1}
    std::vector<CVector> U;  // U[k] = A^{-1} R_k, index 0 unused; filled by attach_winding
    int nodes = 0;                  // quadrature nodes per segment (computed data only)
    double quadrature_change = 0;   // largest change at the last node doubling
};

struct PeriodChecks {
    double legendre = 0;
    double bilinear = 0;   // max |A B^T - B A^T|
    double t_symmetry = 0;
    double kappa_symmetry = 0;
    double im_t_min_eig = 0;
};

inline PeriodData make_period_data(CMatrix A, CMatrix B, CMatrix S, CMatrix T2) {
    const auto g = A.rows();
    for (const CMatrix* m : {&A, &B, &S, &T2})
        if (m->rows() != g || m->cols() != g) throw ValidationError("period matrices must all be g x g");
    PeriodData pd;
    pd.g = static_cast<int>(g);
    Eigen::FullPivLU<CMatrix> lu(A);
    if (g == 0 || !lu.isInvertible()) throw ValidationError("period matrix A is singular");
    pd.T = lu.solve(B);
    pd.kappa = S * lu.inverse();
    pd.A = std::move(A);
    pd.B = std::move(B);
    pd.S = std::move(S);
    pd.T2 = std::move(T2);
    return pd;
}

// max |P J P^T + 2 pi i J| with P = [[A, B], [S, T2]], J = [[0, -1], [1, 0]].
inline double legendre_residual(const PeriodData& pd) {
    const int g = pd.g;
    CMatrix P(2 * g, 2 * g), J = CMatrix::Zero(2 * g, 2 * g);
    P << pd.A, pd.B, pd.S, pd.T2;
    J.topRightCorner(g, g) = -CMatrix::Identity(g, g);
    J.bottomLeftCorner(g, g) = CMatrix::Identity(g, g);
    CMatrix R = P * J * P.transpose() + std::complex<double>(0, 2 * M_PI) * J;
    return R.cwiseAbs().maxCoeff();
}

inline PeriodChecks check_periods(const PeriodData& pd) {
    PeriodChecks c;
    c.legendre = legendre_residual(pd);
    c.bilinear = (pd.A * pd.B.transpose() - pd.B * pd.A.transpose()).cwiseAbs().maxCoeff();
    c.t_symmetry = (pd.T - pd.T.transpose()).cwiseAbs().maxCoeff();
    c.kappa_symmetry = (pd.kappa - pd.kappa.transpose()).cwiseAbs().maxCoeff();
    Eigen::MatrixXd im = pd.T.imag();
    im = 0.5 * (im + im.transpose());
    c.im_t_min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff();
    return c;
}

inline void validate_periods(const PeriodData& pd, double tol = 1e-8) {
    auto c = check_periods(pd);
    auto fail = [](const std::string& what, double v) {
        throw ValidationError("period data invalid: " + what + " = " + std::to_string(v));
    };
    if (!(c.t_symmetry < tol)) fail("|T - T^T|", c.t_symmetry);
    if (!(c.im_t_min_eig > 0)) fail("min eigenvalue of Im T", c.im_t_min_eig);
    if (!(c.kappa_symmetry < tol)) fail("|kappa - kappa^T|", c.kappa_symmetry);
    if (!(c.legendre < tol)) fail("Legendre residual", c.legendre);
}

struct QuadratureOptions {
    int min_nodes = 16;
    int max_nodes = 1 << 16;
    double tol = 1e-10;
};

namespace detail {

// m[k] = int_{lo}^{hi} x^k / sqrt|P(x)| dx, P = 4 prod (x - a_j), with x = mid + half cos(theta)
// and theta on N midpoint nodes.
inline std::vector<double> segment_moments(const std::vector<double>& a, int j, int kmax, int N) {
    const double lo = a[j], hi = a[j + 1], mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    std::vector<double> m(kmax + 1, 0.0);
    for (int i = 0; i < N; ++i) {
        const double th = (i + 0.5) * M_PI / N;
        const double x = mid + half * std::cos(th);
        double q = 1.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            if (static_cast<int>(k) != j && static_cast<int>(k) != j + 1) q *= std::abs(x - a[k]);
        double w = 1.0 / (2.0 * std::sqrt(q)), xp = 1.0;
        for (int k = 0; k <= kmax; ++k, xp *= x) m[k] += w * xp;
    }
    for (auto& v : m) v *= M_PI / N;
    return m;
}

struct MomentResult {
    std::vector<double> m;
    int nodes = 0;
    double change = 0;
};

inline MomentResult converged_moments(const std::vector<double>& a, int j, int kmax, const QuadratureOptions& opt) {
    int N = opt.min_nodes;
    auto prev = segment_moments(a, j, kmax, N);
    for (N *= 2; N <= opt.max_nodes; N *= 2) {
        auto cur = segment_moments(a, j, kmax, N);
        double change = 0;
        int worst = 0;
        for (int k = 0; k <= kmax; ++k) {
            double d = std::abs(cur[k] - prev[k]) / std::max(1.0, std::abs(cur[k]));
            if (d > change) {
                change = d;
                worst = k;
            }
        }
        if (change < opt.tol) return {cur, N, change};
        prev = std::move(cur);
        if (N * 2 > opt.max_nodes)
            throw QuadratureError("quadrature did not converge for the x^" + std::to_string(worst) + " moment on [" +
                                  std::to_string(a[j]) + ", " + std::to_string(a[j + 1]) + "]");
    }
    throw QuadratureError("quadrature node limit below the minimum");
}

} // namespace detail

// Periods of a hyperelliptic curve with real branch points a_1 < ... < a_{2g+1}.
// Loop c_j encircles [a_j, a_{j+1}]; a_k = c_{2k-1}, b_k = eps * sum_{m >= k} c_{2m},
// with eps fixed by Im T > 0.
inline PeriodData hyperelliptic_periods(const NumericCurve& curve, const QuadratureOptions& opt = {}) {
    if (curve.kind != CurveKind::hyperelliptic) throw ValidationError("periods not computable internally for this curve type");
    const int g = curve.genus;
    const auto& a = curve.branch_points;
    if (static_cast<int>(a.size()) != 2 * g + 1) throw ValidationError("real branch points required for period computation");
    for (int i = 1; i <= 2 * g; ++i)
        if (!(a[i] > a[i - 1])) throw ValidationError("branch points must be real, distinct and sorted");
    const int kmax = 2 * g;
    std::vector<detail::MomentResult> mom(2 * g);
    parallel_for(2 * g, [&](std::size_t j) { mom[j] = detail::converged_moments(a, static_cast<int>(j), kmax, opt); });

    // loop integral of x^k dx / y around c_j (1-based j)
    auto loop = [&](int j, int k) {
        std::complex<double> phase = std::pow(std::complex<double>(0, 1), -(2 * g + 1 - j));
        return -2.0 * phase * mom[j - 1].m[k];
    };
    auto integrate = [&](const Differential<cdouble>& d, int j) {
        int yp = 0;
        auto num = d.numerator(yp);
        if (yp != 1) throw std::logic_error("hyperelliptic differentials have y to the first power");
        std::complex<double> v = 0;
        for (std::size_t k = 0; k < num.size(); ++k)
            if (num[k] != 0.0) v += num[k] * loop(j, static_cast<int>(k));
        return v;
    };
    const auto u = holomorphic_basis(curve);
    const auto r = meromorphic_basis(curve);
    auto build = [&](double eps) {
        CMatrix A(g, g), B(g, g), S(g, g), T2(g, g);
        for (int i = 0; i < g; ++i)
            for (int k = 1; k <= g; ++k) {
                A(i, k - 1) = integrate(u[i], 2 * k - 1);
                S(i, k - 1) = -integrate(r[i], 2 * k - 1);
                std::complex<double> bu = 0, br = 0;
                for (int m = k; m <= g; ++m) {
                    bu += integrate(u[i], 2 * m);
                    br += integrate(r[i], 2 * m);
                }
                B(i, k - 1) = eps * bu;
                T2(i, k - 1) = -eps * br;
            }
        return make_period_data(A, B, S, T2);
    };
    PeriodData pd = build(1.0);
    if (check_periods(pd).im_t_min_eig <= 0) pd = build(-1.0);
    for (const auto& mr : mom) {
        pd.nodes = std::max(pd.nodes, mr.nodes);
        pd.quadrature_change = std::max(pd.quadrature_change, mr.change);
    }
    return pd;
}

// U_k = A^{-1} R_k for k = 1..kmax.
inline std::vector<CVector> winding_vectors(const PeriodData& pd, const NumericCurve& curve, int kmax) {
    if (curve.genus != pd.g) throw ValidationError("curve genus does not match the period data");
    auto R = winding_numerators(curve, kmax);
    Eigen::FullPivLU<CMatrix> lu(pd.A);
    if (!lu.isInvertible()) throw ValidationError("period matrix A is singular");
    std::vector<CVector> U(kmax + 1, CVector::Zero(pd.g));
    for (int k = 1; k <= kmax; ++k) {
        CVector Rk(pd.g);
        for (int i = 0; i < pd.g; ++i) Rk(i) = R[k][i];
        U[k] = lu.solve(Rk);
    }
    return U;
}

inline void attach_winding(PeriodData& pd, const NumericCurve& curve, int kmax) { pd.U = winding_vectors(pd, curve, kmax); }

// ---------------------------------------------------------------------------
// JSON period files: {"g":2,"A":[[[re,im],...],...],"B":...,"S":...,"T2":...}

namespace detail {

inline nlohmann::json matrix_to_json(const CMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

inline std::complex<double> complex_from_json(const nlohmann::json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
    throw ValidationError("complex numbers must be written as [re, im] or a real number");
}

inline CMatrix matrix_from_json(const nlohmann::json& j, int g, const std::string& name) {
    if (!j.is_array() || static_cast<int>(j.size()) != g) throw ValidationError("period matrix " + name + " must have g rows");
    CMatrix m(g, g);
    for (int r = 0; r < g; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != g)
            throw ValidationError("period matrix " + name + " must have g columns");
        for (int c = 0; c < g; ++c) m(r, c) = complex_from_json(j[r][c]);
    }
    return m;
}

} // namespace detail

inline nlohmann::json periods_to_json(const PeriodData& pd) {
    return {{"g", pd.g},
            {"A", detail::matrix_to_json(pd.A)},
            {"B", detail::matrix_to_json(pd.B)},
            {"S", detail::matrix_to_json(pd.S)},
            {"T2", detail::matrix_to_json(pd.T2)}};
}

inline PeriodData periods_from_json(const nlohmann::json& j, bool validate = true) {
    if (!j.is_object() || !j.contains("g") || !j["g"].is_number_integer()) throw ValidationError("period file needs an integer \"g\"");
    const int g = j["g"].get<int>();
    if (g < 1) throw ValidationError("period file genus must be positive");
    for (const char* key : {"A", "B", "S", "T2"})
        if (!j.contains(key)) throw ValidationError(std::string("period file is missing \"") + key + "\"");
    PeriodData pd = make_period_data(detail::matrix_from_json(j["A"], g, "A"), detail::matrix_from_json(j["B"], g, "B"),
                                     detail::matrix_from_json(j["S"], g, "S"), detail::matrix_from_json(j["T2"], g, "T2"));
    if (validate) validate_periods(pd);
    return pd;
}

inline void save_periods(const PeriodData& pd, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << periods_to_json(pd).dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

inline PeriodData load_periods(const std::string& path, bool validate = true) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return periods_from_json(j, validate);
}

} // namespace kptau
