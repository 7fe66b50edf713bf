#pragma once

#include "kptau/poly.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace kptau {

using cdouble = std::complex<double>;

// Coefficient-ring adapter used by the curve layer, which runs both on
// complex doubles and on exact polynomials in the curve coefficients.
template <class C>
struct Ring;

template <>
struct Ring<cdouble> {
    static cdouble zero() { return 0.0; }
    static cdouble one() { return 1.0; }
    static cdouble from_rational(const Rational& q) { return to_double(q); }
    static cdouble inverse(const cdouble& c) {
        if (c == 0.0) throw std::domain_error("inverse of zero");
        return 1.0 / c;
    }
    static double magnitude(const cdouble& c) { return std::abs(c); }
    static bool is_zero(const cdouble& c, double scale = 1.0) { return std::abs(c) <= 1e-10 * scale; }
    static bool exact_zero(const cdouble& c) { return c == 0.0; }
};

template <>
struct Ring<SymPoly> {
    static SymPoly zero() { return SymPoly(); }
    static SymPoly one() { return SymPoly::constant(0, Rational(1)); }
    static SymPoly from_rational(const Rational& q) { return SymPoly::constant(0, q); }
    static SymPoly inverse(const SymPoly& c) {
        if (!c.is_constant() || c.is_zero()) throw std::domain_error("only nonzero constants are invertible");
        return SymPoly::constant(0, Rational(1) / c.terms().begin()->second);
    }
    static double magnitude(const SymPoly& c) { return c.is_zero() ? 0.0 : 1.0; }
    static bool is_zero(const SymPoly& c, double = 1.0) { return c.is_zero(); }
    static bool exact_zero(const SymPoly& c) { return c.is_zero(); }
};

template <class C>
bool exact_zero(const C& c) {
    return Ring<C>::exact_zero(c);
}

} // namespace kptau
