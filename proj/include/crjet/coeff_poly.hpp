#pragma once

// CoeffPoly: sparse polynomial over Q(i) in the dimension symbol n, the
// exponent offset p and the square-completion parameter s. The s slot is 0
// outside the sum-of-squares chain. Arithmetic never stores zero entries,
// so is_zero() is just emptiness.

#include <array>
#include <map>
#include <string>

#include "crjet/rational.hpp"

namespace crjet {

class CoeffPoly {
  public:
    // (deg_n, deg_p, deg_s) -> coefficient
    using Key = std::array<int, 3>;
    using Map = std::map<Key, Gaussian>;

    CoeffPoly() = default;
    CoeffPoly(int v) { add_term({0, 0, 0}, Gaussian(v)); }
    CoeffPoly(const Rational& v) { add_term({0, 0, 0}, Gaussian(v)); }
    CoeffPoly(const Gaussian& v) { add_term({0, 0, 0}, v); }

    static CoeffPoly n() { return monomial({1, 0, 0}, Gaussian(1)); }
    static CoeffPoly p() { return monomial({0, 1, 0}, Gaussian(1)); }
    static CoeffPoly s() { return monomial({0, 0, 1}, Gaussian(1)); }
    static CoeffPoly i() { return CoeffPoly(Gaussian::i()); }

    static CoeffPoly monomial(Key k, Gaussian c) {
        CoeffPoly r;
        r.add_term(k, std::move(c));
        return r;
    }

    // a + b*n + c*p, the shape of every exponential weight in the catalog
    static CoeffPoly linear(const Rational& a, const Rational& b, const Rational& c) {
        CoeffPoly r;
        r.add_term({0, 0, 0}, Gaussian(a));
        r.add_term({1, 0, 0}, Gaussian(b));
        r.add_term({0, 1, 0}, Gaussian(c));
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0, 0});
    }
    Gaussian constant_value() const {
        auto it = terms_.find({0, 0, 0});
        return it == terms_.end() ? Gaussian() : it->second;
    }
    const Map& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    int degree(int var) const {
        int d = 0;
        for (const auto& [k, c] : terms_)
            d = std::max(d, k[var]);
        return d;
    }

    bool divisible_by_p() const {
        if (terms_.empty())
            return false;
        for (const auto& [k, c] : terms_)
            if (k[1] == 0)
                return false;
        return true;
    }
    bool free_of_p() const {
        for (const auto& [k, c] : terms_)
            if (k[1] != 0)
                return false;
        return true;
    }

    friend CoeffPoly operator-(const CoeffPoly& a) {
        CoeffPoly r;
        for (const auto& [k, c] : a.terms_)
            r.terms_.emplace(k, -c);
        return r;
    }
    friend CoeffPoly operator+(const CoeffPoly& a, const CoeffPoly& b) {
        CoeffPoly r = a;
        for (const auto& [k, c] : b.terms_)
            r.add_term(k, c);
        return r;
    }
    friend CoeffPoly operator-(const CoeffPoly& a, const CoeffPoly& b) {
        CoeffPoly r = a;
        for (const auto& [k, c] : b.terms_)
            r.add_term(k, -c);
        return r;
    }
    friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
        CoeffPoly r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_)
                r.add_term({ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}, ca * cb);
        return r;
    }
    CoeffPoly& operator+=(const CoeffPoly& o) { return *this = *this + o; }
    CoeffPoly& operator-=(const CoeffPoly& o) { return *this = *this - o; }
    CoeffPoly& operator*=(const CoeffPoly& o) { return *this = *this * o; }

    friend bool operator==(const CoeffPoly& a, const CoeffPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const CoeffPoly& a, const CoeffPoly& b) { return !(a == b); }
    friend bool operator<(const CoeffPoly& a, const CoeffPoly& b) { return a.terms_ < b.terms_; }

    // complex conjugation: i -> -i, fixes n, p, s
    CoeffPoly conj() const {
        CoeffPoly r;
        for (const auto& [k, c] : terms_)
            r.terms_.emplace(k, c.conj());
        return r;
    }

    Gaussian eval(const Rational& nv, const Rational& pv, const Rational& sv = Rational(0)) const {
        Gaussian acc;
        for (const auto& [k, c] : terms_) {
            Gaussian t = c;
            t = t * Gaussian(nv.pow_int(k[0]));
            t = t * Gaussian(pv.pow_int(k[1]));
            t = t * Gaussian(sv.pow_int(k[2]));
            acc += t;
        }
        return acc;
    }

    // substitute p := 0 (drops every p-carrying term)
    CoeffPoly at_p_zero() const {
        CoeffPoly r;
        for (const auto& [k, c] : terms_)
            if (k[1] == 0)
                r.add_term(k, c);
        return r;
    }

    // den^clear_deg * value at s = num/den, as a polynomial identity.
    // clear_deg must be >= the s-degree of this polynomial.
    CoeffPoly subst_s(const CoeffPoly& num, const CoeffPoly& den, int clear_deg) const {
        CoeffPoly r;
        for (const auto& [k, c] : terms_) {
            if (k[2] > clear_deg)
                throw arithmetic_error("CoeffPoly::subst_s: clear_deg too small");
            CoeffPoly t = monomial({k[0], k[1], 0}, c);
            for (int j = 0; j < k[2]; ++j)
                t *= num;
            for (int j = k[2]; j < clear_deg; ++j)
                t *= den;
            r += t;
        }
        return r;
    }

    std::string to_string() const;  // defined in print.hpp-style below

  private:
    Map terms_;

    void add_term(const Key& k, const Gaussian& c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }
};

inline std::string CoeffPoly::to_string() const {
    if (terms_.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        // pull a leading sign out of purely real or purely imaginary scalars
        bool neg = false;
        Gaussian cc = c;
        if ((c.im.is_zero() && c.re.sign() < 0) || (c.re.is_zero() && c.im.sign() < 0)) {
            neg = true;
            cc = -c;
        }
        bool constant_key = (k[0] == 0 && k[1] == 0 && k[2] == 0);
        std::string piece;
        if (!(cc == Gaussian(1)) || constant_key)
            piece = cc.to_string();
        auto append_var = [&](const char* name, int deg) {
            if (deg == 0)
                return;
            if (!piece.empty())
                piece += "*";
            piece += name;
            if (deg > 1)
                piece += "^" + std::to_string(deg);
        };
        append_var("n", k[0]);
        append_var("p", k[1]);
        append_var("s", k[2]);
        if (first)
            out = (neg ? "-" : "") + piece;
        else
            out += (neg ? " - " : " + ") + piece;
        first = false;
    }
    return out;
}

}  // namespace crjet
