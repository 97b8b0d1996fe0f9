#include "opcrit/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace opcrit {

void IntPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPoly IntPoly::from_coeffs(std::initializer_list<long> coeffs) {
    std::vector<mpz_class> v;
    v.reserve(coeffs.size());
    for (long c : coeffs) v.emplace_back(c);
    return IntPoly(std::move(v));
}

IntPoly IntPoly::monomial(const mpz_class& c, size_t power) {
    if (c == 0) return IntPoly();
    std::vector<mpz_class> v(power + 1, mpz_class(0));
    v[power] = c;
    return IntPoly(std::move(v));
}

const mpz_class& IntPoly::lead() const {
    if (c_.empty()) throw std::runtime_error("leading coefficient of zero polynomial");
    return c_.back();
}

IntPoly& IntPoly::operator+=(const IntPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpz_class(0));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

IntPoly& IntPoly::operator-=(const IntPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), mpz_class(0));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<mpz_class> v(a.c_.size() + b.c_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            v[i + j] += a.c_[i] * b.c_[j];
    }
    return IntPoly(std::move(v));
}

IntPoly& IntPoly::operator*=(const IntPoly& o) {
    *this = *this * o;
    return *this;
}

IntPoly operator-(const IntPoly& a) {
    std::vector<mpz_class> v(a.c_);
    for (auto& x : v) x = -x;
    return IntPoly(std::move(v));
}

mpq_class IntPoly::eval(const mpq_class& q) const {
    mpq_class acc(0);
    for (size_t k = c_.size(); k-- > 0;) {
        acc *= q;
        acc += c_[k];
    }
    acc.canonicalize();
    return acc;
}

mpq_class IntPoly::eval_abs(const mpq_class& q) const {
    mpq_class aq = abs(q);
    mpq_class acc(0);
    for (size_t k = c_.size(); k-- > 0;) {
        acc *= aq;
        acc += abs(c_[k]);
    }
    acc.canonicalize();
    return acc;
}

mpz_class IntPoly::content() const {
    mpz_class g(0);
    for (const auto& x : c_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

namespace {

// Schoolbook division over Q[q]. Returns false if den is zero.
struct QPoly {
    std::vector<mpq_class> c;
    void trim() { while (!c.empty() && c.back() == 0) c.pop_back(); }
    size_t deg() const { return c.empty() ? 0 : c.size() - 1; }
    bool zero() const { return c.empty(); }
};

QPoly to_q(const IntPoly& p) {
    QPoly r;
    r.c.reserve(p.coeffs().size());
    for (const auto& x : p.coeffs()) r.c.emplace_back(x);
    return r;
}

void divmod_q(const QPoly& num, const QPoly& den, QPoly& quo, QPoly& rem) {
    rem = num;
    quo.c.assign(num.c.size() > den.c.size() ? num.c.size() - den.c.size() + 1 : 1, mpq_class(0));
    const mpq_class& dl = den.c.back();
    while (!rem.zero() && rem.c.size() >= den.c.size()) {
        size_t shift = rem.c.size() - den.c.size();
        mpq_class f = rem.c.back() / dl;
        f.canonicalize();
        quo.c[shift] = f;
        for (size_t k = 0; k < den.c.size(); ++k) {
            rem.c[shift + k] -= f * den.c[k];
            rem.c[shift + k].canonicalize();
        }
        rem.trim();
    }
    quo.trim();
}

} // namespace

IntPoly IntPoly::div_exact(const IntPoly& num, const IntPoly& den) {
    if (den.is_zero()) throw std::runtime_error("polynomial division by zero");
    if (num.is_zero()) return IntPoly();
    QPoly quo, rem;
    divmod_q(to_q(num), to_q(den), quo, rem);
    if (!rem.zero())
        throw std::runtime_error("polynomial division left a nonzero remainder");
    std::vector<mpz_class> v;
    v.reserve(quo.c.size());
    for (auto& x : quo.c) {
        x.canonicalize();
        if (x.get_den() != 1)
            throw std::runtime_error("polynomial quotient has non-integer coefficient");
        v.push_back(x.get_num());
    }
    return IntPoly(std::move(v));
}

IntPoly poly_gcd(const IntPoly& a, const IntPoly& b) {
    QPoly x = to_q(a), y = to_q(b);
    while (!y.zero()) {
        QPoly quo, rem;
        divmod_q(x, y, quo, rem);
        x = std::move(y);
        y = std::move(rem);
    }
    if (x.zero()) return IntPoly();
    // Scale to a primitive integer polynomial with positive leading coeff.
    mpz_class lcm(1);
    for (const auto& c : x.c) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> v;
    v.reserve(x.c.size());
    for (const auto& c : x.c) {
        mpq_class scaled = c * lcm;
        scaled.canonicalize();
        v.push_back(scaled.get_num());
    }
    IntPoly g{std::move(v)};
    mpz_class cont = g.content();
    if (cont > 1) g = IntPoly::div_exact(g, IntPoly::monomial(cont, 0));
    if (g.lead() < 0) g = -g;
    return g;
}

RationalFn RationalFn::make(IntPoly num, IntPoly den) {
    if (den.is_zero()) throw std::runtime_error("rational function with zero denominator");
    if (num.is_zero()) {
        RationalFn r;
        r.num_ = IntPoly();
        r.den_ = IntPoly(1);
        return r;
    }
    IntPoly g = poly_gcd(num, den);
    if (g.degree() > 0 || g.coeff(0) != 1) {
        num = IntPoly::div_exact(num, g);
        den = IntPoly::div_exact(den, g);
    }
    mpz_class cn = num.content(), cd = den.content(), c;
    mpz_gcd(c.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (c > 1) {
        IntPoly cc = IntPoly::monomial(c, 0);
        num = IntPoly::div_exact(num, cc);
        den = IntPoly::div_exact(den, cc);
    }
    bool flip = den.coeff(0) != 0 ? den.coeff(0) < 0 : den.lead() < 0;
    if (flip) {
        num = -num;
        den = -den;
    }
    RationalFn r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
    return make(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
RationalFn RationalFn::operator-(const RationalFn& o) const {
    return make(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
RationalFn RationalFn::operator*(const RationalFn& o) const {
    return make(num_ * o.num_, den_ * o.den_);
}
RationalFn RationalFn::operator/(const RationalFn& o) const {
    if (o.num_.is_zero()) throw std::runtime_error("division by zero rational function");
    return make(num_ * o.den_, den_ * o.num_);
}

bool RationalFn::operator==(const RationalFn& o) const {
    return num_ * o.den_ == o.num_ * den_;
}

mpq_class RationalFn::eval(const mpq_class& q) const {
    mpq_class d = den_.eval(q);
    if (d == 0) throw std::runtime_error("rational function evaluated at a pole");
    mpq_class r = num_.eval(q) / d;
    r.canonicalize();
    return r;
}

std::string IntPoly::pretty() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k] == 0) continue;
        mpz_class a = abs(c_[k]);
        bool neg = c_[k] < 0;
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        if (a != 1 || k == 0) out << a.get_str();
        if (k >= 1) {
            out << "q";
            if (k >= 2) out << "^" << k;
        }
    }
    return out.str();
}

std::string RationalFn::pretty() const {
    if (den_.degree() == 0 && den_.coeff(0) == 1) return num_.pretty();
    return "(" + num_.pretty() + ") / (" + den_.pretty() + ")";
}

} // namespace opcrit
