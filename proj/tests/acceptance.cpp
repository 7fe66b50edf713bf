// Acceptance run: one PASS/FAIL line per criterion.
#include "kptau/kptau.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace kptau;

namespace {

struct Outcome {
    bool pass = true;
    bool run = true;
    std::string detail;
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

void require(Outcome& o, bool ok, const std::string& what) {
    if (!ok) {
        o.pass = false;
        o.detail += (o.detail.empty() ? "" : "; ") + what;
    }
}

void note(Outcome& o, const std::string& what) { o.detail += (o.detail.empty() ? "" : "; ") + what; }

SymPoly sa(int k) { return SymPoly::variable(5, k); }
SymPoly sb(int k) { return SymPoly::variable(4, k / 3 - 1); }
SymPoly sq(long p, long r = 1) { return SymPoly::constant(0, Rational(p, r)); }

const std::vector<std::vector<double>> genus2_curves = {{-2, -1, 0, 1, 2}, {-3, -1, 0.5, 2, 4}, {0, 1, 2, 3, 5}};

// Generic points v = A x + B y, x, y in [0,1)^g, away from the theta divisor.
std::vector<CVector> random_points(const PeriodData& pd, int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    ThetaContext ctx(pd.T);
    std::vector<CVector> out;
    while (static_cast<int>(out.size()) < n) {
        Eigen::VectorXd x(pd.g), y(pd.g);
        for (int i = 0; i < pd.g; ++i) x(i) = U(rng), y(i) = U(rng);
        CVector v = pd.A * x.cast<cdouble>() + pd.B * y.cast<cdouble>();
        try {
            (void)wp_values(v, pd, ctx, 2);
            out.push_back(v);
        } catch (const DivisorError&) {
        }
    }
    return out;
}

// Relative residual: |sum of terms| / max |term|.
double rel_residual(std::initializer_list<cdouble> terms) {
    cdouble s = 0;
    double m = 0;
    for (auto t : terms) {
        s += t;
        m = std::max(m, std::abs(t));
    }
    return std::abs(s) / std::max(m, 1e-300);
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    for (const auto& lam : partitions_up_to_weight(8)) {
        const int n = std::max(lam.weight(), 1);
        if (!(schur_jacobi_trudi(lam, n, n) == schur_bialternant_oracle(lam, 8))) require(o, false, "JT != bialternant at " + lam.str());
    }
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; ++b) {
            const int w = a + b + 1;
            if (!(hook_schur_bilinear(a, b, w, w) == schur_jacobi_trudi(hook_from(a, b), w, w)))
                require(o, false, "hook identity fails at (" + std::to_string(a) + "|" + std::to_string(b) + ")");
        }
    // sum_lambda s_lambda(t) s_lambda(s) = exp(sum k t_k s_k), weight <= 6, in one 12-variable ring
    const int W = 6;
    Grading g;
    for (int rep = 0; rep < 2; ++rep)
        for (int k = 1; k <= W; ++k) g.weights.push_back(k);
    g.bound = W;
    auto embed = [&](const ExactPoly& p, int offset) {
        ExactPoly r(2 * W, g);
        for (const auto& [m, c] : p.terms()) {
            Monomial mm(2 * W, 0);
            for (std::size_t k = 0; k < m.size() && k < static_cast<std::size_t>(W); ++k) mm[k + offset] = m[k];
            r.add_term(mm, c);
        }
        return r;
    };
    ExactPoly lhs(2 * W, g), arg(2 * W, g);
    for (const auto& lam : partitions_up_to_weight(W)) {
        const ExactPoly s = schur_jacobi_trudi(lam, W, W);
        lhs += embed(s, 0) * embed(s, W);
    }
    for (int i = 1; i <= W; ++i) {
        Monomial m(2 * W, 0);
        m[i - 1] = m[W + i - 1] = 1;
        arg.add_term(m, Rational(i));
    }
    ExactPoly rhs = ExactPoly::constant(2 * W, Rational(1), g), term = rhs;
    for (int n = 1; n <= W; ++n) {
        term = term * arg / Rational(n);
        rhs += term;
    }
    require(o, lhs == rhs, "Cauchy-Littlewood at weight 6");
    auto parts = partitions_up_to_weight(6);
    for (const auto& mu : parts) {
        const ExactPoly s = schur_jacobi_trudi(mu, 6, 6);
        for (const auto& lam : parts)
            if (lam.weight() == mu.weight() && schur_pairing(lam, s) != Rational(lam == mu ? 1 : 0))
                require(o, false, "pairing <" + lam.str() + "," + mu.str() + ">");
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    auto mu = mu_alg_table(symbolic_hyperelliptic(2), 6);
    // 1-based entries are half of the 0-based bi-differential coefficients
    auto one_based = [&](int i, int j) { return mu[i - 1][j - 1] * sq(1, 2); };
    require(o, one_based(1, 1) == sa(4) * sq(-1, 16), "mu_11");
    require(o, one_based(1, 3) == sa(3) * sq(-1, 16) + sa(4) * sa(4) * sq(3, 256), "mu_13");
    require(o, one_based(1, 5) == sa(2) * sq(-1, 16) + sa(3) * sa(4) * sq(3, 128) - sa(4) * sa(4) * sa(4) * sq(5, 2048), "mu_15");
    require(o, one_based(3, 3) == sa(2) * sq(-3, 16) + sa(3) * sa(4) * sq(1, 32) - sa(4) * sa(4) * sa(4) * sq(3, 1024), "mu_33");
    require(o, one_based(5, 1) == one_based(1, 5) && one_based(3, 1) == one_based(1, 3), "symmetry");
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; i + j <= 7; ++j)
            if ((i % 2 == 0 || j % 2 == 0) && !one_based(i, j).is_zero()) require(o, false, "even-index mu nonzero");
    auto mt = mu_alg_table(symbolic_trigonal(), 10);
    require(o, mt[0][0].is_zero(), "mu_00");
    require(o, mt[0][1] == sb(3) * sq(-2, 3) && mt[1][0] == mt[0][1], "mu_01");
    require(o, mt[0][4] == sb(6) * sq(-2, 3) + sb(3) * sb(3) * sq(5, 9), "mu_04");
    require(o, mt[1][3] == sb(6) * sq(-2, 3) + sb(3) * sb(3) * sq(4, 9), "mu_13 (trigonal)");
    require(o, mt[2][2].is_zero(), "mu_22");
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; i + j <= 10; ++j)
            if ((i + j + 2) % 3 != 0 && !mt[i][j].is_zero()) require(o, false, "vanishing pattern at " + std::to_string(i) + "," + std::to_string(j));
    return o;
}

Outcome criterion3() {
    Outcome o;
    auto R = winding_numerators(symbolic_hyperelliptic(2), 5);
    require(o, R[1][0] == sq(1) && R[1][1].is_zero(), "R_1");
    require(o, R[2][0].is_zero() && R[2][1].is_zero(), "R_2");
    require(o, R[3][0] == sa(4) * sq(-1, 8) && R[3][1] == sq(1), "R_3");
    require(o, R[5][0] == sa(3) * sq(-1, 8) + sa(4) * sa(4) * sq(3, 128) && R[5][1] == sa(4) * sq(-1, 8), "R_5");
    return o;
}

Outcome criterion4() {
    Outcome o;
    double worst_leg = 0, worst_bil = 0, worst_kap = 0, worst_step = 0, min_eig = 1e300;
    for (const auto& bp : genus2_curves) {
        NumericCurve c = hyperelliptic_from_branch_points(bp);
        PeriodData pd = hyperelliptic_periods(c);
        auto ch = check_periods(pd);
        worst_leg = std::max(worst_leg, ch.legendre);
        worst_bil = std::max(worst_bil, ch.bilinear);
        worst_kap = std::max(worst_kap, ch.kappa_symmetry);
        min_eig = std::min(min_eig, ch.im_t_min_eig);
        QuadratureOptions fine;
        fine.min_nodes = 2 * pd.nodes;
        PeriodData pd2 = hyperelliptic_periods(c, fine);
        double scale = std::max({pd.A.cwiseAbs().maxCoeff(), pd.B.cwiseAbs().maxCoeff(), pd.S.cwiseAbs().maxCoeff(), pd.T2.cwiseAbs().maxCoeff()});
        double step = std::max({(pd.A - pd2.A).cwiseAbs().maxCoeff(), (pd.B - pd2.B).cwiseAbs().maxCoeff(),
                                (pd.S - pd2.S).cwiseAbs().maxCoeff(), (pd.T2 - pd2.T2).cwiseAbs().maxCoeff()}) /
                      scale;
        worst_step = std::max(worst_step, step);
    }
    require(o, worst_leg < 1e-8, "Legendre " + fmt(worst_leg));
    require(o, worst_bil < 1e-8, "A B^T symmetry " + fmt(worst_bil));
    require(o, worst_kap < 1e-8, "kappa symmetry " + fmt(worst_kap));
    require(o, min_eig > 0, "Im T not positive definite");
    require(o, worst_step < 1e-9, "step halving " + fmt(worst_step));
    note(o, "Legendre " + fmt(worst_leg) + ", step halving " + fmt(worst_step) + ", min eig Im T " + fmt(min_eig));
    return o;
}

// Genus-2 affine coordinates A_ab = (-1)^b pi_(a|b), written out by hand.
std::map<std::pair<int, int>, cdouble> genus2_window(const KleinPoint& k, const NumericCurve& c) {
    const cdouble z1 = k.zeta[0], z2 = k.zeta[1], a3 = c.coeffs[3], a4 = c.coeffs[4];
    const cdouble P11 = k.P({1, 1}), P12 = k.P({1, 2}), P111 = k.P({1, 1, 1}), P112 = k.P({1, 1, 2});
    const cdouble P1111 = k.P({1, 1, 1, 1}), P11111 = k.P({1, 1, 1, 1, 1});
    std::map<std::pair<int, int>, cdouble> A;
    A[{0, 0}] = z1;
    A[{0, 1}] = P11 / 2.0 + a4 / 16.0 - z1 * z1 / 2.0;
    A[{1, 0}] = -A[{0, 1}];
    A[{0, 2}] = -P11 * z1 / 2.0 - P111 / 6.0 - 5.0 * a4 * z1 / 48.0 + std::pow(z1, 3) / 6.0 + z2 / 3.0;
    A[{1, 1}] = P11 * z1 + P111 / 3.0 + a4 * z1 / 12.0 - std::pow(z1, 3) / 3.0 + z2 / 3.0;
    A[{0, 3}] = -P11 * P11 / 8.0 - 7.0 * P11 * a4 / 96.0 + P11 * z1 * z1 / 4.0 + P111 * z1 / 6.0 + P1111 / 24.0 + P12 / 3.0 +
                a3 / 24.0 - 5.0 * a4 * a4 / 512.0 + 7.0 * a4 * z1 * z1 / 96.0 - std::pow(z1, 4) / 24.0 - z1 * z2 / 3.0;
    A[{1, 2}] = 3.0 * P11 * P11 / 8.0 + 3.0 * P11 * a4 / 32.0 - 3.0 * P11 * z1 * z1 / 4.0 - P111 * z1 / 2.0 - P1111 / 8.0 +
                3.0 * a4 * a4 / 512.0 - 3.0 * a4 * z1 * z1 / 32.0 + std::pow(z1, 4) / 8.0;
    A[{1, 3}] = -P11 * P11 * z1 / 2.0 - P11 * P111 / 3.0 - 3.0 * P11 * a4 * z1 / 16.0 + P11 * std::pow(z1, 3) / 3.0 + P11 * z2 / 6.0 -
                P111 * a4 / 16.0 + P111 * z1 * z1 / 3.0 + P1111 * z1 / 6.0 + P11111 / 30.0 + P112 / 6.0 + P12 * z1 / 3.0 +
                a3 * z1 / 60.0 - 13.0 * a4 * a4 * z1 / 960.0 + a4 * std::pow(z1, 3) / 16.0 - a4 * z2 / 240.0 -
                std::pow(z1, 5) / 30.0 - z1 * z1 * z2 / 6.0;
    return A;
}

cdouble genus2_pi22(const KleinPoint& k, const NumericCurve& c) {
    const cdouble z1 = k.zeta[0], z2 = k.zeta[1], a3 = c.coeffs[3], a4 = c.coeffs[4];
    const cdouble P11 = k.P({1, 1}), P12 = k.P({1, 2}), P111 = k.P({1, 1, 1}), P1111 = k.P({1, 1, 1, 1});
    return P11 * P11 / 4.0 + P11 * a4 / 48.0 - P11 * z1 * z1 / 2.0 - P111 * z1 / 3.0 - P1111 / 12.0 + P12 / 3.0 + a3 / 24.0 -
           a4 * a4 / 256.0 - a4 * z1 * z1 / 48.0 + std::pow(z1, 4) / 12.0 - z1 * z2 / 3.0;
}

double rel_diff(cdouble x, cdouble ref, double floor) { return std::abs(x - ref) / std::max(std::abs(ref), floor); }

Outcome criterion5() {
    Outcome o;
    double worst = 0, worst_pi = 0, worst_lib = 0;
    unsigned seed = 11;
    for (const auto& bp : genus2_curves) {
        NumericCurve c = hyperelliptic_from_branch_points(bp);
        PeriodData pd = hyperelliptic_periods(c);
        for (const auto& v : random_points(pd, 10, seed++)) {
            TauModel m = make_tau_model(c, pd, v, 5);
            TauSeries tau = build_tau_sigma(m);
            AffineMatrix A = affine_from_tau(tau, 2);
            KleinPoint kp = wp_values(v, pd, *m.ctx, 5);
            auto ref = genus2_window(kp, c);
            double scale = 1;
            for (const auto& [ab, x] : ref) scale = std::max(scale, std::abs(x));
            for (const auto& [ab, x] : ref) worst = std::max(worst, rel_diff(A(ab.first, ab.second), x, 1e-3 * scale));
            worst_pi = std::max(worst_pi, rel_diff(plucker_direct(tau, Partition({2, 2})), genus2_pi22(kp, c), 1e-3));
            for (const auto& [ab, x] : genus2_affine_oracle(kp, c))
                if (ref.count(ab)) worst_lib = std::max(worst_lib, rel_diff(x, ref.at(ab), 1e-3 * scale));
        }
    }
    require(o, worst < 1e-6, "affine window " + fmt(worst));
    require(o, worst_pi < 1e-6, "pi_(2,2) " + fmt(worst_pi));
    require(o, worst_lib < 1e-12, "library oracle disagrees with hand-coded forms " + fmt(worst_lib));
    note(o, "30 points, window a<=1 b<=3 max rel " + fmt(worst) + ", pi_(2,2) " + fmt(worst_pi));
    return o;
}

Outcome criterion6() {
    Outcome o;
    NumericCurve c = hyperelliptic_from_branch_points(genus2_curves[0]);
    PeriodData pd = hyperelliptic_periods(c);
    double worst = 0, worst_rec = 0;
    for (const auto& v : random_points(pd, 5, 21)) {
        TauModel m = make_tau_model(c, pd, v, 8);
        TauSeries tau = build_tau_sigma(m);
        AffineMatrix A = affine_from_tau(tau, 3);
        PluckerTable table = schur_expansion_table(tau);
        for (const auto& [lam, pi] : table) worst = std::max(worst, rel_diff(plucker_giambelli(A, lam), pi, 1e-3));
        TauSeries rec = reconstruct_from_table(table, tau.basis());
        double scale = 0, diff = 0;
        const cdouble t0 = tau.constant_term();
        for (std::size_t i = 0; i < tau.size(); ++i) {
            scale = std::max(scale, std::abs(tau[i] / t0));
            diff = std::max(diff, std::abs(rec[i] - tau[i] / t0));
        }
        worst_rec = std::max(worst_rec, diff / scale);
    }
    require(o, worst < 1e-6, "Giambelli vs direct " + fmt(worst));
    require(o, worst_rec < 1e-8, "reconstruction " + fmt(worst_rec));
    note(o, "|lambda|<=8 at 5 points: Giambelli " + fmt(worst) + ", reconstruction " + fmt(worst_rec));
    return o;
}

Outcome criterion7() {
    Outcome o;
    NumericCurve c = hyperelliptic_from_branch_points(genus2_curves[1]);
    PeriodData pd = hyperelliptic_periods(c);
    double worst_g = 0, worst_b = 0;
    for (const auto& v : random_points(pd, 3, 31)) {
        TauModel m = make_tau_model(c, pd, v, 7);
        TauSeries ts = build_tau_sigma(m), tt = build_tau_theta(m);
        TauSeries gt = gauge_multiply(tt, gauge_lambda(m));
        double scale = 0, diff = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            scale = std::max(scale, std::abs(ts[i]));
            diff = std::max(diff, std::abs(ts[i] - gt[i]));
        }
        worst_g = std::max(worst_g, diff / scale);
        BakerData bd = baker_affine(m);
        AffineMatrix ref = affine_from_tau(reflect_flows(gauge_multiply(tt, bd.lambda)), 3);
        double wscale = 1;
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; i + j <= 6; ++j) wscale = std::max(wscale, std::abs(ref(i, j)));
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; i + j <= 6; ++j) worst_b = std::max(worst_b, rel_diff(bd.A(i, j), ref(i, j), 1e-3 * wscale));
    }
    require(o, worst_g < 1e-8, "sigma vs gauged theta " + fmt(worst_g));
    require(o, worst_b < 1e-5, "Baker vs aligned tau " + fmt(worst_b));
    note(o, "gauge " + fmt(worst_g) + ", Baker i+j<=6 " + fmt(worst_b) + " (alignment: lambda_i with minus sign, flows reflected)");
    return o;
}

Outcome criterion8() {
    Outcome o;
    NumericCurve c = hyperelliptic_from_branch_points(genus2_curves[0]);
    PeriodData pd = hyperelliptic_periods(c);
    ThetaContext ctx(pd.T);
    const cdouble a0 = c.coeffs[0], a1 = c.coeffs[1], a2 = c.coeffs[2], a3 = c.coeffs[3], a4 = c.coeffs[4];
    double kdv1 = 0, kdv2 = 0, jac6 = 0, jac6d = 0, kum = 0;
    std::vector<cdouble> jac6_raw;
    std::vector<double> jac6_scale;
    for (const auto& v : random_points(pd, 20, 41)) {
        KleinPoint k = wp_values(v, pd, ctx, 4);
        const cdouble P11 = k.P({1, 1}), P12 = k.P({1, 2}), P22 = k.P({2, 2}), P111 = k.P({1, 1, 1}), P1111 = k.P({1, 1, 1, 1}),
                      P1112 = k.P({1, 1, 1, 2});
        kdv1 = std::max(kdv1, rel_residual({P1111, -6.0 * P11 * P11, -4.0 * P12, -a4 * P11, -a3 / 2.0}));
        kdv2 = std::max(kdv2, rel_residual({P1112, -6.0 * P11 * P12, 2.0 * P22, -a4 * P12}));
        std::initializer_list<cdouble> j6 = {P111 * P111, -4.0 * std::pow(P11, 3), -P22, -4.0 * P12 * P11, -a4 * P11 * P11, -a3 * P11};
        jac6 = std::max(jac6, rel_residual(j6));
        cdouble s = 0;
        double m = 0;
        for (auto t : j6) s += t, m = std::max(m, std::abs(t));
        jac6_raw.push_back(s);
        jac6_scale.push_back(m);
        jac6d = std::max(jac6d, rel_residual({P111 * P111, -4.0 * std::pow(P11, 3), -4.0 * P22, -4.0 * P12 * P11, -a4 * P11 * P11,
                                              -a3 * P11, -a2}));
        Eigen::Matrix4cd K;
        K << a0, a1 / 2.0, -2.0 * P22, -2.0 * P12, a1 / 2.0, a2 + 4.0 * P22, a3 / 2.0 + 2.0 * P12, -2.0 * P11, -2.0 * P22,
            a3 / 2.0 + 2.0 * P12, a4 + 4.0 * P11, 2.0, -2.0 * P12, -2.0 * P11, 2.0, 0.0;
        // largest of the 24 permutation products
        double big = 0;
        std::vector<int> p{0, 1, 2, 3};
        do {
            big = std::max(big, std::abs(K(0, p[0]) * K(1, p[1]) * K(2, p[2]) * K(3, p[3])));
        } while (std::next_permutation(p.begin(), p.end()));
        kum = std::max(kum, std::abs(K.determinant()) / big);
    }
    // constant-offset regression for the printed weight-6 relation
    cdouble mean = 0;
    for (auto r : jac6_raw) mean += r;
    mean /= static_cast<double>(jac6_raw.size());
    double spread = 0;
    for (std::size_t i = 0; i < jac6_raw.size(); ++i) spread = std::max(spread, std::abs(jac6_raw[i] - mean) / jac6_scale[i]);
    const bool jac6_ok = jac6 < 1e-6 || spread < 1e-6;

    require(o, kdv1 < 1e-6, "kdv1 " + fmt(kdv1));
    require(o, kdv2 < 1e-6, "kdv2 " + fmt(kdv2));
    require(o, jac6_ok, "jac6 as printed: residual " + fmt(jac6) + " not a constant offset (spread " + fmt(spread) +
                            "); with 4*P22 + a2 the relation holds to " + fmt(jac6d));
    require(o, kum < 1e-6, "Kummer " + fmt(kum));
    WeightScheme ws = weight_scheme(c);
    std::vector<std::pair<Identity, int>> ids;
    for (const auto& id : genus2_identities()) ids.push_back({id, id.weight});
    ids.push_back({kummer_identity(), 16});
    for (const auto& [id, w] : ids) {
        try {
            if (weight_lint(id.expr, ws) != w) require(o, false, id.name + " has the wrong weight");
        } catch (const ValidationError& e) {
            require(o, false, e.what());
        }
    }
    if (o.pass) note(o, "kdv1 " + fmt(kdv1) + ", kdv2 " + fmt(kdv2) + ", jac6 " + fmt(jac6) + ", Kummer " + fmt(kum));
    else note(o, "kdv1 " + fmt(kdv1) + ", kdv2 " + fmt(kdv2) + ", Kummer " + fmt(kum) + ", weight lint ok");
    return o;
}

Outcome criterion9() {
    Outcome o;
    const std::string dir = KPTAU_TEST_DATA;
    if (!std::filesystem::exists(dir + "/trigonal_periods.json") || !std::filesystem::exists(dir + "/trigonal_curve.json")) {
        o.run = false;
        o.detail = "no trigonal period fixture";
        return o;
    }
    NumericCurve c = load_curve(dir + "/trigonal_curve.json");
    PeriodData pd = load_periods(dir + "/trigonal_periods.json");
    const cdouble b3 = c.coeffs[0], b6 = c.coeffs[1];
    double ids = 0, orc = 0, pi = 0, lib = 0;
    for (const auto& v : random_points(pd, 10, 51)) {
        TauModel m = make_tau_model(c, pd, v, 5);
        TauSeries tau = build_tau_sigma(m);
        AffineMatrix A = affine_from_tau(tau, 2);
        KleinPoint k = wp_values(v, pd, *m.ctx, 5);
        const cdouble z1 = k.zeta[0], z2 = k.zeta[1];
        const cdouble P11 = k.P({1, 1}), P12 = k.P({1, 2}), P13 = k.P({1, 3}), P22 = k.P({2, 2}), P111 = k.P({1, 1, 1}),
                      P1111 = k.P({1, 1, 1, 1}), P1112 = k.P({1, 1, 1, 2}), P1122 = k.P({1, 1, 2, 2});
        ids = std::max({ids, rel_residual({P1111, -6.0 * P11 * P11, 3.0 * P22}),
                        rel_residual({P1112, -6.0 * P11 * P12, -3.0 * b3 * P11}),
                        rel_residual({P111 * P111, -4.0 * std::pow(P11, 3), -P12 * P12, -4.0 * P13, 4.0 * P11 * P22}),
                        rel_residual({P1122, -4.0 * P13, -4.0 * P12 * P12, -2.0 * P11 * P22, -3.0 * b3 * P12, -2.0 * b6})});
        std::map<std::pair<int, int>, cdouble> ref;
        ref[{0, 0}] = z1;
        ref[{0, 1}] = P11 / 2.0 - z1 * z1 / 2.0 + z2 / 2.0;
        ref[{1, 0}] = -P11 / 2.0 + z1 * z1 / 2.0 + z2 / 2.0;
        ref[{0, 2}] = -P11 * z1 / 2.0 - P111 / 6.0 + P12 / 2.0 + b3 / 3.0 + std::pow(z1, 3) / 6.0 - z1 * z2 / 2.0;
        ref[{1, 1}] = P11 * z1 + P111 / 3.0 - std::pow(z1, 3) / 3.0;
        ref[{2, 0}] = -P11 * z1 / 2.0 - P111 / 6.0 - P12 / 2.0 - b3 / 3.0 + std::pow(z1, 3) / 6.0 + z1 * z2 / 2.0;
        double scale = 1;
        for (const auto& [ab, x] : ref) scale = std::max(scale, std::abs(x));
        for (const auto& [ab, x] : ref) orc = std::max(orc, rel_diff(A(ab.first, ab.second), x, 1e-3 * scale));
        cdouble p22 = P11 * P11 / 4.0 - P11 * z1 * z1 / 2.0 - P111 * z1 / 3.0 - P1111 / 12.0 - P22 / 4.0 + std::pow(z1, 4) / 12.0 +
                      z2 * z2 / 4.0;
        pi = std::max(pi, rel_diff(plucker_direct(tau, Partition({2, 2})), p22, 1e-3));
        for (const auto& [ab, x] : trigonal_affine_oracle(k, c)) lib = std::max(lib, rel_diff(A(ab.first, ab.second), x, 1e-3 * scale));
    }
    require(o, ids < 1e-6, "identities " + fmt(ids));
    require(o, orc < 1e-6, "A window " + fmt(orc));
    require(o, pi < 1e-6, "pi_(2,2) " + fmt(pi));
    require(o, lib < 1e-6, "full weight-5 window " + fmt(lib));
    note(o, "fixture y^3 = x(x^2-1)(x-2): identities " + fmt(ids) + ", A window " + fmt(orc) + ", pi_(2,2) " + fmt(pi) +
                " (with -P22/4)");
    return o;
}

// Tensor central differences with two Richardson levels.
cdouble finite_difference(const std::function<cdouble(const CVector&)>& f, const CVector& z, const std::vector<int>& alpha, double h) {
    auto stencil = [&](double step) {
        const int g = static_cast<int>(alpha.size());
        std::vector<std::vector<std::pair<double, double>>> w(g);  // (offset, weight) per coordinate
        for (int j = 0; j < g; ++j) {
            const int k = alpha[j];
            // k-th central difference: sum_i (-1)^i C(k,i) f(z + (k/2 - i) step)
            double binom = 1;
            for (int i = 0; i <= k; ++i) {
                w[j].push_back({(k / 2.0 - i) * step, (i % 2 ? -1.0 : 1.0) * binom});
                binom = binom * (k - i) / (i + 1);
            }
        }
        cdouble acc = 0;
        std::vector<std::size_t> idx(g, 0);
        while (true) {
            CVector p = z;
            double wt = 1;
            for (int j = 0; j < g; ++j) {
                p(j) += w[j][idx[j]].first;
                wt *= w[j][idx[j]].second;
            }
            acc += wt * f(p);
            int j = 0;
            for (; j < g; ++j) {
                if (++idx[j] < w[j].size()) break;
                idx[j] = 0;
            }
            if (j == g) break;
        }
        int order = 0;
        for (int k : alpha) order += k;
        return acc / std::pow(step, order);
    };
    cdouble f1 = stencil(h), f2 = stencil(h / 2), f3 = stencil(h / 4);
    cdouble r1 = (4.0 * f2 - f1) / 3.0, r2 = (4.0 * f3 - f2) / 3.0;
    return (16.0 * r2 - r1) / 15.0;
}

Outcome criterion10() {
    Outcome o;
    NumericCurve c = hyperelliptic_from_branch_points(genus2_curves[0]);
    PeriodData pd = hyperelliptic_periods(c);
    ThetaContext ctx(pd.T);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    double quasi = 0, fd = 0, per = 0;
    const cdouble I(0, 1);
    for (int trial = 0; trial < 10; ++trial) {
        CVector z(2);
        z << cdouble(U(rng), U(rng) * 0.3), cdouble(U(rng), U(rng) * 0.3);
        const cdouble th = theta(z, ctx);
        Eigen::Vector2i m(trial % 3 - 1, 1), n(1, trial % 2 - 1);
        CVector shift = m.cast<double>().cast<cdouble>() + pd.T * n.cast<double>().cast<cdouble>();
        const CVector nc = n.cast<double>().cast<cdouble>();
        cdouble factor = std::exp(-I * M_PI * (nc.transpose() * pd.T * nc)(0, 0) - 2.0 * I * M_PI * (nc.transpose() * z)(0, 0));
        quasi = std::max(quasi, std::abs(theta(z + shift, ctx) - factor * th) / std::abs(factor * th));
    }
    auto f = [&](const CVector& p) { return theta(p, ctx); };
    for (int trial = 0; trial < 4; ++trial) {
        CVector z(2);
        z << cdouble(U(rng), U(rng) * 0.3), cdouble(U(rng), U(rng) * 0.3);
        const double th = std::abs(theta(z, ctx));
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b) {
                if (a + b == 0) continue;
                std::vector<int> alpha{a, b};
                cdouble exact = theta_deriv(z, ctx, alpha);
                cdouble approx = finite_difference(f, z, alpha, 0.02);
                fd = std::max(fd, std::abs(exact - approx) / std::max(std::abs(exact), th));
            }
    }
    for (const auto& v : random_points(pd, 5, 71)) {
        KleinPoint k0 = wp_values(v, pd, ctx, 2);
        for (int col = 0; col < 2; ++col)
            for (const CMatrix* L : {&pd.A, &pd.B}) {
                KleinPoint k1 = wp_values(v + L->col(col), pd, ctx, 2);
                for (const auto& [idx, val] : k0.wp) per = std::max(per, std::abs(k1.wp.at(idx) - val) / std::max(std::abs(val), 1e-3));
            }
    }
    require(o, quasi < 1e-8, "quasi-periodicity " + fmt(quasi));
    require(o, fd < 1e-5, "finite differences " + fmt(fd));
    require(o, per < 1e-7, "wp periodicity " + fmt(per));
    note(o, "quasi-periodicity " + fmt(quasi) + ", derivatives (order<=4) " + fmt(fd) + ", wp periodicity " + fmt(per));
    return o;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* title;
        std::function<Outcome()> run;
        double budget;  // seconds
    };
    const std::vector<Entry> entries = {
        {1, "Schur layer: Jacobi-Trudi, hooks, Cauchy, pairing", criterion1, 30},
        {2, "mu^alg tables (genus 2 and trigonal)", criterion2, 10},
        {3, "winding numerators R1, R2, R3, R5", criterion3, 10},
        {4, "genus-2 periods", criterion4, 20},
        {5, "affine-coordinate oracle and pi_(2,2)", criterion5, 120},
        {6, "Plucker/Giambelli consistency and reconstruction", criterion6, 120},
        {7, "gauge relation and Baker route", criterion7, 120},
        {8, "genus-2 identity suite", criterion8, 60},
        {9, "trigonal suite", criterion9, 120},
        {10, "theta kernel", criterion10, 120},
    };
    int failed = 0;
    for (const auto& e : entries) {
        Timer t;
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.pass = false;
            o.detail = std::string("exception: ") + ex.what();
        }
        const double s = t.seconds();
        if (o.run && s > e.budget) require(o, false, "runtime " + fmt(s) + " s over budget");
        const char* status = !o.run ? "NOT RUN" : (o.pass ? "PASS" : "FAIL");
        if (o.run && !o.pass) ++failed;
        std::printf("criterion %2d %-7s %-52s [%6.1f s] %s\n", e.id, status, e.title, s, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed ? 1 : 0;
}
