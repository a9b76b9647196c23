#pragma once

// Reference computations for rational functions that share no code with
// the series engine: plain mpq_class polynomials, Taylor shift by repeated
// synthetic division, ascending long division.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Poly = std::vector<mpq_class>;  // p[k] is the coefficient of x^k

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline mpq_class eval(const Poly& p, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

/// Coefficients of p(a + t) in t.
inline Poly taylor_shift(Poly p, const mpq_class& a) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) p[j - 1] += a * p[j];
    return p;
}

struct Laurent {
    long lead = 0;              // exponent of coeffs[0]
    std::vector<mpq_class> coeffs;

    mpq_class at(long n) const {
        if (n < lead || n >= lead + static_cast<long>(coeffs.size())) return 0;
        return coeffs[static_cast<std::size_t>(n - lead)];
    }
};

/// Laurent coefficients of num/den about x = a for exponents up to `through`.
inline Laurent laurent(const Poly& num, const Poly& den, const mpq_class& a, long through) {
    Poly p = taylor_shift(num, a);
    Poly q = taylor_shift(den, a);
    long v = 0;
    while (q[static_cast<std::size_t>(v)] == 0) ++v;
    Poly qs(q.begin() + v, q.end());
    Laurent out;
    out.lead = -v;
    const long count = through + v + 1;
    for (long n = 0; n < count; ++n) {
        mpq_class s = n < static_cast<long>(p.size()) ? p[static_cast<std::size_t>(n)] : mpq_class(0);
        for (long k = 1; k <= n && k < static_cast<long>(qs.size()); ++k)
            s -= qs[static_cast<std::size_t>(k)] * out.coeffs[static_cast<std::size_t>(n - k)];
        s /= qs[0];
        out.coeffs.push_back(s);
    }
    return out;
}

inline std::string q_text(const mpq_class& q) {
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Expanded-monomial text "(c0)+(c1)*x+(c2)*x^2+...", never empty.
inline std::string poly_text(const Poly& p, const std::string& var) {
    std::string s;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0) continue;
        if (!s.empty()) s += "+";
        s += "(" + q_text(p[k]) + ")";
        if (k >= 1) s += "*" + var;
        if (k >= 2) s += "^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

struct RationalFunction {
    Poly num;
    Poly den;
    mpq_class anchor;
    long pole_order = 0;

    std::string text(const std::string& var = "x") const {
        return "(" + poly_text(num, var) + ")/(" + poly_text(den, var) + ")";
    }
};

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    mpq_class rational(long span = 9) {
        mpq_class q(integer(-span, span), integer(1, span));
        q.canonicalize();
        return q;
    }

    mpq_class nonzero_rational(long span = 9) {
        mpq_class q;
        do q = rational(span);
        while (q == 0);
        return q;
    }

    Poly poly(long max_degree) {
        long d = integer(0, max_degree);
        Poly p;
        for (long k = 0; k <= d; ++k) p.push_back(rational());
        p[static_cast<std::size_t>(d)] = nonzero_rational();
        trim(p);
        return p;
    }

    /// Numerator and denominator of degree <= 5; denominator (x - a)^k R(x)
    /// with R(a) != 0 and k <= 5, fully multiplied out. `pole` false gives k = 0.
    RationalFunction rational_function(bool pole) {
        RationalFunction f;
        f.anchor = rational(6);
        f.pole_order = pole ? integer(0, 5) : 0;
        Poly den{mpq_class(1)};
        for (long i = 0; i < f.pole_order; ++i) den = mul(den, Poly{-f.anchor, mpq_class(1)});
        Poly rest;
        do rest = poly(5 - f.pole_order);
        while (eval(rest, f.anchor) == 0);
        f.den = mul(den, rest);
        do f.num = poly(5);
        while (f.num.empty());
        return f;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
