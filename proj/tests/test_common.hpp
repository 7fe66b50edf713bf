#pragma once

#include "kptau/kptau.hpp"

#include <random>

namespace kptau::testing {

inline const NumericCurve& genus2_curve() {
    static const NumericCurve c = hyperelliptic_from_branch_points({-2, -1, 0, 1, 2});
    return c;
}

inline const PeriodData& genus2_periods() {
    static const PeriodData pd = hyperelliptic_periods(genus2_curve());
    return pd;
}

// Points v = A x + B y with x, y uniform in [0,1)^g, skipping the divisor.
inline std::vector<CVector> generic_points(const PeriodData& pd, int n, unsigned seed) {
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

} // namespace kptau::testing
