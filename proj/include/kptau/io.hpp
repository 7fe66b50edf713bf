#pragma once

#include "kptau/curve.hpp"
#include "kptau/errors.hpp"
#include "kptau/periods.hpp"
#include "kptau/tau.hpp"
#include "kptau/theta.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace kptau {

// Curve files:
//   {"type":"hyperelliptic","genus":2,"alpha":[a0,...,a4]}
//   {"type":"hyperelliptic","branch_points":[a1,...,a5]}
//   {"type":"cyclic_trigonal","beta":[b3,b6,b9,b12]}
inline NumericCurve curve_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) throw ValidationError("curve file needs a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    auto complex_list = [&](const char* key) {
        if (!j[key].is_array()) throw ValidationError(std::string("\"") + key + "\" must be an array");
        std::vector<cdouble> v;
        for (const auto& x : j[key]) v.push_back(detail::complex_from_json(x));
        return v;
    };
    try {
        if (type == "hyperelliptic") {
            if (j.contains("branch_points")) {
                std::vector<double> a;
                for (const auto& x : j["branch_points"]) {
                    if (!x.is_number()) throw ValidationError("branch points must be real numbers");
                    a.push_back(x.get<double>());
                }
                NumericCurve c = hyperelliptic_from_branch_points(a);
                if (j.contains("genus") && j["genus"] != c.genus) throw ValidationError("genus does not match the number of branch points");
                return c;
            }
            if (!j.contains("alpha")) throw ValidationError("hyperelliptic curve needs \"alpha\" or \"branch_points\"");
            NumericCurve c = hyperelliptic_curve(complex_list("alpha"));
            if (j.contains("genus") && j["genus"] != c.genus) throw ValidationError("genus does not match the number of coefficients");
            return c;
        }
        if (type == "cyclic_trigonal") {
            if (!j.contains("beta")) throw ValidationError("cyclic trigonal curve needs \"beta\"");
            return trigonal_curve(complex_list("beta"));
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    throw ValidationError("unknown curve type \"" + type + "\"");
}

inline nlohmann::json curve_to_json(const NumericCurve& c) {
    auto list = [](const std::vector<cdouble>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (auto z : v) {
            if (z.imag() == 0) a.push_back(z.real());
            else a.push_back({z.real(), z.imag()});
        }
        return a;
    };
    if (c.kind == CurveKind::cyclic_trigonal) return {{"type", "cyclic_trigonal"}, {"beta", list(c.coeffs)}};
    if (!c.branch_points.empty()) return {{"type", "hyperelliptic"}, {"branch_points", c.branch_points}};
    return {{"type", "hyperelliptic"}, {"genus", c.genus}, {"alpha", list(c.coeffs)}};
}

inline nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

inline NumericCurve load_curve(const std::string& path) { return curve_from_json(read_json(path)); }
inline void save_curve(const NumericCurve& c, const std::string& path) { write_json(curve_to_json(c), path); }

// "re,im,re,im,..." -> complex vector
inline std::vector<cdouble> parse_complex_list(const std::string& s) {
    std::vector<double> xs;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw ValidationError("not a number: \"" + tok + "\"");
        }
        if (tok.find_first_not_of(" \t", used) != std::string::npos) throw ValidationError("not a number: \"" + tok + "\"");
        xs.push_back(x);
    }
    if (xs.empty() || xs.size() % 2) throw ValidationError("complex lists are written as re,im pairs");
    std::vector<cdouble> out;
    for (std::size_t i = 0; i < xs.size(); i += 2) out.emplace_back(xs[i], xs[i + 1]);
    return out;
}

inline nlohmann::json complex_to_json(cdouble z) { return {z.real(), z.imag()}; }

inline nlohmann::json klein_to_json(const KleinPoint& kp) {
    nlohmann::json v = nlohmann::json::array(), zeta = nlohmann::json::array(), wp = nlohmann::json::array();
    for (Eigen::Index i = 0; i < kp.v.size(); ++i) v.push_back(complex_to_json(kp.v(i)));
    for (auto z : kp.zeta) zeta.push_back(complex_to_json(z));
    for (const auto& [idx, val] : kp.wp) wp.push_back({{"index", idx}, {"value", complex_to_json(val)}});
    return {{"v", v}, {"zeta", zeta}, {"wp", wp}, {"max_order", kp.max_order}};
}

inline KleinPoint klein_from_json(const nlohmann::json& j) {
    KleinPoint kp;
    kp.v.resize(static_cast<Eigen::Index>(j.at("v").size()));
    for (std::size_t i = 0; i < j["v"].size(); ++i) kp.v(static_cast<Eigen::Index>(i)) = detail::complex_from_json(j["v"][i]);
    for (const auto& z : j.at("zeta")) kp.zeta.push_back(detail::complex_from_json(z));
    for (const auto& e : j.at("wp")) kp.wp[e.at("index").get<std::vector<int>>()] = detail::complex_from_json(e.at("value"));
    kp.max_order = j.at("max_order").get<int>();
    return kp;
}

inline nlohmann::json plucker_table_to_json(const PluckerTable& t) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [lam, pi] : t)
        out.push_back({{"partition", lam.parts()}, {"frobenius", frobenius_of(lam).str()}, {"value", complex_to_json(pi)}});
    return out;
}

inline PluckerTable plucker_table_from_json(const nlohmann::json& j) {
    PluckerTable t;
    for (const auto& e : j) t[Partition(e.at("partition").get<std::vector<int>>())] = detail::complex_from_json(e.at("value"));
    return t;
}

// Entries with a + b + 1 <= W as {"a","b","value"}.
inline nlohmann::json affine_to_json(const AffineMatrix& A) {
    nlohmann::json out = nlohmann::json::array();
    for (int a = 0; a < A.W; ++a)
        for (int b = 0; a + b + 1 <= A.W; ++b) out.push_back({{"a", a}, {"b", b}, {"value", complex_to_json(A(a, b))}});
    return out;
}

} // namespace kptau
