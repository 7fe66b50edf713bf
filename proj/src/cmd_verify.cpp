#include "cli.hpp"

#include "kptau/identities.hpp"
#include "kptau/io.hpp"

#include <iomanip>
#include <memory>
#include <ostream>

namespace kptau::cli {

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            if (!(cfg.tol > 0)) throw ValidationError("--tol must be positive");
            if (cfg.samples < 1) throw ValidationError("--samples must be positive");
            NumericCurve curve = load_curve(cfg.curve_path);
            std::unique_ptr<PeriodData> pd;
            if (!cfg.periods_path.empty()) pd = std::make_unique<PeriodData>(load_periods(cfg.periods_path));
            if (pd && pd->g != curve.genus) throw ValidationError("period file genus does not match the curve");

            SampleOptions opt;
            opt.samples = cfg.samples;
            opt.tol = cfg.tol;
            opt.seed = cfg.seed;

            const bool genus2 = curve.kind == CurveKind::hyperelliptic && curve.genus == 2;
            const bool trigonal = curve.kind == CurveKind::cyclic_trigonal;
            std::vector<IdentityReport> reports;
            if (cfg.suite == "genus2" || cfg.suite == "all") {
                if (genus2) {
                    if (!pd) throw ValidationError("the genus2 suite needs a period file");
                    reports = genus2_suite(curve, *pd, opt);
                } else if (cfg.suite == "genus2") {
                    throw ValidationError("the genus2 suite needs a genus-2 hyperelliptic curve");
                } else {
                    reports.push_back(not_run("genus2", "curve is not genus-2 hyperelliptic"));
                }
            }
            if (cfg.suite == "trigonal" || cfg.suite == "all") {
                if (trigonal) {
                    for (auto& r : trigonal_suite(curve, pd.get(), opt)) reports.push_back(std::move(r));
                } else if (cfg.suite == "trigonal") {
                    throw ValidationError("the trigonal suite needs a cyclic trigonal curve");
                } else {
                    reports.push_back(not_run("trigonal", "curve is not cyclic trigonal"));
                }
            }

            nlohmann::json doc = nlohmann::json::array();
            for (const auto& r : reports) {
                doc.push_back(report_to_json(r));
                out << std::left << std::setw(16) << r.name << ' ' << std::setw(8) << r.status;
                if (r.status != "not run") out << " residual " << std::scientific << std::setprecision(3) << r.residual;
                if (!r.note.empty()) out << "  (" << r.note << ")";
                out << std::defaultfloat << '\n';
            }
            if (!cfg.out_path.empty()) write_json(doc, cfg.out_path);
            return static_cast<int>(all_run_pass(reports) ? ok : identity_failure);
        },
        err);
}

} // namespace kptau::cli
