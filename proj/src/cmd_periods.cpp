#include "cli.hpp"

#include "kptau/io.hpp"
#include "kptau/periods.hpp"

#include <ostream>

namespace kptau::cli {

int cmd_periods(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            NumericCurve curve = load_curve(cfg.curve_path);
            QuadratureOptions opt;
            if (cfg.nodes > 0) {
                opt.min_nodes = cfg.nodes;
                opt.max_nodes = 2 * cfg.nodes;
            }
            PeriodData pd = hyperelliptic_periods(curve, opt);
            if (!cfg.no_validate) validate_periods(pd);
            auto c = check_periods(pd);
            save_periods(pd, cfg.out_path);
            out << "legendre_residual " << c.legendre << '\n';
            out << "im_t_min_eigenvalue " << c.im_t_min_eig << '\n';
            out << "quadrature_nodes " << pd.nodes << '\n';
            return static_cast<int>(ok);
        },
        err);
}

} // namespace kptau::cli
