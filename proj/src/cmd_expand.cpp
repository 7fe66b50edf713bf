#include "cli.hpp"

#include "kptau/io.hpp"
#include "kptau/tau.hpp"

#include <algorithm>
#include <ostream>

namespace kptau::cli {

namespace {

CVector parse_point(const std::string& s, int g) {
    auto v = parse_complex_list(s);
    if (static_cast<int>(v.size()) != g)
        throw ValidationError("v needs " + std::to_string(g) + " complex values (" + std::to_string(2 * g) + " reals)");
    CVector out(g);
    for (int i = 0; i < g; ++i) out(i) = v[i];
    return out;
}

} // namespace

int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            if (cfg.max_weight < 1 || cfg.max_weight > 10) throw ValidationError("--max-weight must be between 1 and 10");
            NumericCurve curve = load_curve(cfg.curve_path);
            PeriodData pd = load_periods(cfg.periods_path, !cfg.no_validate);
            CVector v = parse_point(cfg.v, pd.g);
            TauModel m = make_tau_model(curve, pd, v, cfg.max_weight);
            const Gauge gauge = cfg.gauge == "theta" ? Gauge::theta : Gauge::sigma;
            TauSeries tau = build_tau(m, gauge);
            PluckerTable table = schur_expansion_table(tau);
            AffineMatrix A = affine_from_tau(tau, (cfg.max_weight - 1) / 2);
            double giambelli = 0;
            for (const auto& [lam, pi] : table) {
                cdouble gv = plucker_giambelli(A, lam);
                giambelli = std::max(giambelli, std::abs(gv - pi) / std::max(1.0, std::abs(pi)));
            }
            nlohmann::json vj = nlohmann::json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i) vj.push_back(complex_to_json(v(i)));
            nlohmann::json doc{{"header",
                                {{"curve", curve_to_json(curve)},
                                 {"max_weight", cfg.max_weight},
                                 {"gauge", cfg.gauge},
                                 {"v", vj},
                                 {"giambelli_max_residual", giambelli}}},
                               {"plucker", plucker_table_to_json(table)},
                               {"affine", affine_to_json(A)}};
            if (cfg.out_path.empty()) out << doc.dump(2) << '\n';
            else write_json(doc, cfg.out_path);
            err << "giambelli_max_residual " << giambelli << '\n';
            return static_cast<int>(ok);
        },
        err);
}

} // namespace kptau::cli
