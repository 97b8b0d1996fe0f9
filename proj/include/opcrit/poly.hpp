#pragma once
#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace opcrit {

// Dense integer-coefficient polynomial in the variable q, lowest power first.
// Coefficients are arbitrary precision; the zero polynomial has no stored
// coefficients (degree() == 0, is_zero() == true).
class IntPoly {
public:
    IntPoly() = default;
    IntPoly(long c) { if (c != 0) c_.emplace_back(c); }               // NOLINT (implicit)
    explicit IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }
    static IntPoly from_coeffs(std::initializer_list<long> coeffs);
    static IntPoly monomial(const mpz_class& c, size_t power);

    bool is_zero() const { return c_.empty(); }
    size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    mpz_class coeff(size_t k) const { return k < c_.size() ? c_[k] : mpz_class(0); }
    const mpz_class& lead() const;         // undefined on zero poly (throws)

    IntPoly& operator+=(const IntPoly& o);
    IntPoly& operator-=(const IntPoly& o);
    IntPoly& operator*=(const IntPoly& o);
    friend IntPoly operator+(IntPoly a, const IntPoly& b) { return a += b; }
    friend IntPoly operator-(IntPoly a, const IntPoly& b) { return a -= b; }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a);
    bool operator==(const IntPoly& o) const { return c_ == o.c_; }

    mpq_class eval(const mpq_class& q) const;
    // Sum of |coefficients| * |q|^k, used by error analysis.
    mpq_class eval_abs(const mpq_class& q) const;

    // Exact division: throws std::runtime_error if the remainder is nonzero
    // or any quotient coefficient is non-integer.
    static IntPoly div_exact(const IntPoly& num, const IntPoly& den);

    // Content (gcd of coefficients, nonnegative; 0 for the zero poly).
    mpz_class content() const;

    // Human-readable form in ascending powers, e.g. "1 - 2q - q^2".
    std::string pretty() const;

private:
    void trim();
    std::vector<mpz_class> c_;
};

// Quotient of two integer polynomials, kept in canonical reduced form:
// gcd(num, den) = 1 over Q[q], contents coprime, den has positive leading
// coefficient. den is never the zero polynomial.
class RationalFn {
public:
    RationalFn() : num_(0), den_(1) {}
    static RationalFn make(IntPoly num, IntPoly den);   // reduces

    const IntPoly& num() const { return num_; }
    const IntPoly& den() const { return den_; }

    RationalFn operator+(const RationalFn& o) const;
    RationalFn operator-(const RationalFn& o) const;
    RationalFn operator*(const RationalFn& o) const;
    RationalFn operator/(const RationalFn& o) const;
    bool operator==(const RationalFn& o) const;          // cross-multiplied

    bool is_zero() const { return num_.is_zero(); }
    mpq_class eval(const mpq_class& q) const;
    std::string pretty() const;

private:
    IntPoly num_, den_;
};

// gcd over Q[q] returned as a primitive integer polynomial with positive
// leading coefficient; gcd(0, b) = primitive(b).
IntPoly poly_gcd(const IntPoly& a, const IntPoly& b);

} // namespace opcrit
