#include "cli.hpp"

#include "kptau/io.hpp"
#include "kptau/theta.hpp"

#include <ostream>
#include <sstream>

namespace kptau::cli {

namespace {

CVector to_vector(const std::vector<cdouble>& v, int g, const char* what) {
    if (static_cast<int>(v.size()) != g)
        throw ValidationError(std::string(what) + " needs " + std::to_string(g) + " complex values (" + std::to_string(2 * g) + " reals)");
    CVector out(g);
    for (int i = 0; i < g; ++i) out(i) = v[i];
    return out;
}

std::vector<int> parse_orders(const std::string& s, int g) {
    std::vector<int> k;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            k.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ValidationError("derivative orders must be integers: \"" + tok + "\"");
        }
    }
    if (static_cast<int>(k.size()) != g) throw ValidationError("--deriv needs " + std::to_string(g) + " orders");
    return k;
}

} // namespace

int cmd_theta(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            PeriodData pd = load_periods(cfg.periods_path, !cfg.no_validate);
            ThetaContext ctx(pd.T);
            CVector z = to_vector(parse_complex_list(cfg.z), pd.g, "--z");
            std::vector<int> alpha = cfg.deriv.empty() ? std::vector<int>(pd.g, 0) : parse_orders(cfg.deriv, pd.g);
            cdouble value = theta_deriv(z, ctx, alpha);
            nlohmann::json doc{{"deriv", alpha}, {"value", complex_to_json(value)}};
            out << doc.dump() << '\n';
            return static_cast<int>(ok);
        },
        err);
}

int cmd_wp(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            if (cfg.order < 2 || cfg.order > 12) throw ValidationError("--order must be between 2 and 12");
            PeriodData pd = load_periods(cfg.periods_path, !cfg.no_validate);
            NumericCurve curve = load_curve(cfg.curve_path);
            if (curve.genus != pd.g) throw ValidationError("curve genus does not match the period file");
            ThetaContext ctx(pd.T);
            CVector v = to_vector(parse_complex_list(cfg.v), pd.g, "--v");
            nlohmann::json doc = klein_to_json(wp_values(v, pd, ctx, cfg.order));
            if (cfg.out_path.empty()) out << doc.dump(2) << '\n';
            else write_json(doc, cfg.out_path);
            return static_cast<int>(ok);
        },
        err);
}

} // namespace kptau::cli
