#pragma once

// Exact integer / rational / Gaussian-rational arithmetic.
// Every identity check in this library reduces to "is this exactly zero",
// so there is no floating point anywhere in the core.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace crjet {

class arithmetic_error : public std::runtime_error {
  public:
    explicit arithmetic_error(const std::string& what) : std::runtime_error(what) {}
};

// Arbitrary-precision signed integer, little-endian 32-bit limbs with an
// inline fast path for values that fit in two limbs (the common case here:
// coefficients of the identities stay small, only the numeric oracle and the
// positivity grid push past 64 bits).
class BigInt {
  public:
    BigInt() = default;
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long v) : BigInt(static_cast<long long>(v)) {}
    BigInt(long long v) {
        if (v < 0) {
            neg_ = true;
            // careful with LLONG_MIN
            unsigned long long m = ~static_cast<unsigned long long>(v) + 1ULL;
            set_u64(m);
        } else {
            set_u64(static_cast<unsigned long long>(v));
        }
    }

    static BigInt from_string(const std::string& s) {
        BigInt r;
        std::size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = (s[i] == '-');
            ++i;
        }
        if (i >= s.size())
            throw arithmetic_error("BigInt: empty numeral");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw arithmetic_error("BigInt: bad digit in numeral");
            r.mul_small_inplace(10);
            r.add_small_inplace(static_cast<std::uint32_t>(s[i] - '0'));
        }
        r.neg_ = neg && !r.is_zero();
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }
    bool is_negative() const { return neg_; }
    bool is_one() const { return !neg_ && limbs_.size() == 1 && limbs_[0] == 1; }

    // Returns value if it fits in a signed 64-bit int, used for fast paths.
    bool fits_i64(long long& out) const {
        if (limbs_.size() > 2)
            return false;
        unsigned long long m = mag_u64();
        if (!neg_ && m <= 0x7fffffffffffffffULL) {
            out = static_cast<long long>(m);
            return true;
        }
        if (neg_ && m <= 0x8000000000000000ULL) {
            out = static_cast<long long>(~m + 1ULL);
            return true;
        }
        return false;
    }

    friend BigInt operator-(const BigInt& a) {
        BigInt r = a;
        if (!r.is_zero())
            r.neg_ = !r.neg_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.neg_ == b.neg_) {
            BigInt r;
            r.limbs_ = add_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_ && !r.limbs_.empty();
            return r;
        }
        int c = cmp_mag(a.limbs_, b.limbs_);
        if (c == 0)
            return BigInt();
        BigInt r;
        if (c > 0) {
            r.limbs_ = sub_mag(a.limbs_, b.limbs_);
            r.neg_ = a.neg_;
        } else {
            r.limbs_ = sub_mag(b.limbs_, a.limbs_);
            r.neg_ = b.neg_;
        }
        if (r.limbs_.empty())
            r.neg_ = false;
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero())
            return BigInt();
        BigInt r;
        r.limbs_ = mul_mag(a.limbs_, b.limbs_);
        r.neg_ = (a.neg_ != b.neg_);
        return r;
    }

    // Truncated division (quotient rounds toward zero, C semantics).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero())
            throw arithmetic_error("BigInt: division by zero");
        std::vector<std::uint32_t> qm, rm;
        divmod_mag(a.limbs_, b.limbs_, qm, rm);
        q.limbs_ = std::move(qm);
        r.limbs_ = std::move(rm);
        q.neg_ = (a.neg_ != b.neg_) && !q.limbs_.empty();
        r.neg_ = a.neg_ && !r.limbs_.empty();
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) {
        return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) {
        if (a.neg_ != b.neg_)
            return a.neg_;
        int c = cmp_mag(a.limbs_, b.limbs_);
        return a.neg_ ? c > 0 : c < 0;
    }
    friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

    BigInt abs() const {
        BigInt r = *this;
        r.neg_ = false;
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.neg_ = false;
        b.neg_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    BigInt pow_u(unsigned e) const {
        BigInt base = *this, acc = BigInt(1);
        while (e) {
            if (e & 1u)
                acc = acc * base;
            base = base * base;
            e >>= 1u;
        }
        return acc;
    }

    std::string to_string() const {
        if (is_zero())
            return "0";
        std::vector<std::uint32_t> m = limbs_;
        std::string digits;
        while (!m.empty()) {
            std::uint64_t rem = 0;
            for (std::size_t i = m.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | m[i];
                m[i] = static_cast<std::uint32_t>(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            while (!m.empty() && m.back() == 0)
                m.pop_back();
            std::string chunk = std::to_string(rem);
            if (!m.empty())
                chunk = std::string(9 - chunk.size(), '0') + chunk;
            digits = chunk + digits;
        }
        return neg_ ? "-" + digits : digits;
    }

  private:
    std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zeros
    bool neg_ = false;

    void set_u64(unsigned long long m) {
        limbs_.clear();
        if (m) {
            limbs_.push_back(static_cast<std::uint32_t>(m));
            if (m >> 32)
                limbs_.push_back(static_cast<std::uint32_t>(m >> 32));
        }
    }
    unsigned long long mag_u64() const {
        unsigned long long m = limbs_.empty() ? 0 : limbs_[0];
        if (limbs_.size() == 2)
            m |= static_cast<unsigned long long>(limbs_[1]) << 32;
        return m;
    }

    void mul_small_inplace(std::uint32_t f) {
        std::uint64_t carry = 0;
        for (auto& l : limbs_) {
            std::uint64_t cur = static_cast<std::uint64_t>(l) * f + carry;
            l = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry)
            limbs_.push_back(static_cast<std::uint32_t>(carry));
    }
    void add_small_inplace(std::uint32_t v) {
        std::uint64_t carry = v;
        for (std::size_t i = 0; carry && i < limbs_.size(); ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(limbs_[i]) + carry;
            limbs_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry)
            limbs_.push_back(static_cast<std::uint32_t>(carry));
    }

    static int cmp_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
        if (a.size() != b.size())
            return a.size() < b.size() ? -1 : 1;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i])
                return a[i] < b[i] ? -1 : 1;
        return 0;
    }

    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        const auto &lo = a.size() < b.size() ? a : b, &hi = a.size() < b.size() ? b : a;
        std::vector<std::uint32_t> r;
        r.reserve(hi.size() + 1);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < hi.size(); ++i) {
            std::uint64_t cur = carry + hi[i] + (i < lo.size() ? lo[i] : 0);
            r.push_back(static_cast<std::uint32_t>(cur));
            carry = cur >> 32;
        }
        if (carry)
            r.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    // requires |a| >= |b|
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r;
        r.reserve(a.size());
        std::int64_t borrow = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(a[i]) - borrow -
                               (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
            borrow = 0;
            if (cur < 0) {
                cur += (1LL << 32);
                borrow = 1;
            }
            r.push_back(static_cast<std::uint32_t>(cur));
        }
        while (!r.empty() && r.back() == 0)
            r.pop_back();
        return r;
    }

    static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b) {
        std::vector<std::uint32_t> r(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            std::uint64_t carry = 0;
            std::uint64_t ai = a[i];
            for (std::size_t j = 0; j < b.size(); ++j) {
                std::uint64_t cur = r[i + j] + ai * b[j] + carry;
                r[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            std::size_t k = i + b.size();
            while (carry) {
                std::uint64_t cur = r[k] + carry;
                r[k] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
                ++k;
            }
        }
        while (!r.empty() && r.back() == 0)
            r.pop_back();
        return r;
    }

    // Knuth algorithm D, magnitudes only.
    static void divmod_mag(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                           std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
        q.clear();
        r.clear();
        if (cmp_mag(a, b) < 0) {
            r = a;
            return;
        }
        if (b.size() == 1) {
            std::uint64_t d = b[0], rem = 0;
            q.assign(a.size(), 0);
            for (std::size_t i = a.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | a[i];
                q[i] = static_cast<std::uint32_t>(cur / d);
                rem = cur % d;
            }
            while (!q.empty() && q.back() == 0)
                q.pop_back();
            if (rem)
                r.push_back(static_cast<std::uint32_t>(rem));
            return;
        }
        // normalize
        int shift = 0;
        for (std::uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1)
            ++shift;
        auto shl = [&](const std::vector<std::uint32_t>& v) {
            std::vector<std::uint32_t> out(v.size() + 1, 0);
            for (std::size_t i = 0; i < v.size(); ++i) {
                out[i] |= shift ? (v[i] << shift) : v[i];
                if (shift)
                    out[i + 1] = v[i] >> (32 - shift);
            }
            while (!out.empty() && out.back() == 0)
                out.pop_back();
            return out;
        };
        std::vector<std::uint32_t> u = shl(a), v = shl(b);
        std::size_t n = v.size(), m = u.size() - n;
        u.resize(u.size() + 1, 0);
        q.assign(m + 1, 0);
        const std::uint64_t base = 1ULL << 32;
        for (std::size_t j = m + 1; j-- > 0;) {
            std::uint64_t num = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
            std::uint64_t qhat = num / v[n - 1];
            std::uint64_t rhat = num % v[n - 1];
            while (qhat >= base ||
                   qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
                --qhat;
                rhat += v[n - 1];
                if (rhat >= base)
                    break;
            }
            // multiply-subtract
            std::int64_t borrow = 0;
            std::uint64_t carry = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t p = qhat * v[i] + carry;
                carry = p >> 32;
                std::int64_t t = static_cast<std::int64_t>(u[i + j]) - borrow -
                                 static_cast<std::int64_t>(p & 0xffffffffULL);
                borrow = 0;
                if (t < 0) {
                    t += static_cast<std::int64_t>(base);
                    borrow = 1;
                }
                u[i + j] = static_cast<std::uint32_t>(t);
            }
            std::int64_t t = static_cast<std::int64_t>(u[j + n]) - borrow -
                             static_cast<std::int64_t>(carry);
            if (t < 0) {
                // qhat was one too large
                t += static_cast<std::int64_t>(base);
                --qhat;
                std::uint64_t c2 = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::uint64_t cur = static_cast<std::uint64_t>(u[i + j]) + v[i] + c2;
                    u[i + j] = static_cast<std::uint32_t>(cur);
                    c2 = cur >> 32;
                }
                t += static_cast<std::int64_t>(c2);
            }
            u[j + n] = static_cast<std::uint32_t>(t);
            q[j] = static_cast<std::uint32_t>(qhat);
        }
        while (!q.empty() && q.back() == 0)
            q.pop_back();
        // denormalize remainder
        u.resize(n);
        if (shift) {
            for (std::size_t i = 0; i < n; ++i) {
                u[i] >>= shift;
                if (i + 1 < n)
                    u[i] |= u[i + 1] << (32 - shift);
            }
        }
        while (!u.empty() && u.back() == 0)
            u.pop_back();
        r = std::move(u);
    }
};

// Rational with an int64 fast path; falls back to BigInt on overflow.
// Always normalized: gcd(num, den) = 1, den > 0, zero is 0/1.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) {
        if (d == 0)
            throw arithmetic_error("Rational: zero denominator");
        normalize_small();
    }
    Rational(BigInt n, BigInt d) {
        if (d.is_zero())
            throw arithmetic_error("Rational: zero denominator");
        set_big(std::move(n), std::move(d));
    }

    static Rational from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos)
            return Rational(BigInt::from_string(s), BigInt(1));
        return Rational(BigInt::from_string(s.substr(0, slash)),
                        BigInt::from_string(s.substr(slash + 1)));
    }

    bool is_zero() const { return big_ ? bnum_.is_zero() : num_ == 0; }
    bool is_one() const { return big_ ? (bnum_ == BigInt(1) && bden_ == BigInt(1)) : (num_ == 1 && den_ == 1); }
    bool is_negative() const { return big_ ? bnum_.is_negative() : num_ < 0; }
    bool is_integer() const { return big_ ? bden_ == BigInt(1) : den_ == 1; }

    int sign() const {
        if (is_zero())
            return 0;
        return is_negative() ? -1 : 1;
    }

    BigInt num_big() const { return big_ ? bnum_ : BigInt(num_); }
    BigInt den_big() const { return big_ ? bden_ : BigInt(den_); }

    friend Rational operator-(const Rational& a) {
        if (!a.big_) {
            Rational r;
            r.num_ = -a.num_;
            r.den_ = a.den_;
            return r;
        }
        return Rational(-a.bnum_, a.bden_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            long long n, d, x, y;
            if (!mul_ovf(a.num_, b.den_, x) && !mul_ovf(b.num_, a.den_, y) &&
                !add_ovf(x, y, n) && !mul_ovf(a.den_, b.den_, d))
                return Rational(n, d);
        }
        return Rational(a.num_big() * b.den_big() + b.num_big() * a.den_big(),
                        a.den_big() * b.den_big());
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            long long n, d;
            if (!mul_ovf(a.num_, b.num_, n) && !mul_ovf(a.den_, b.den_, d))
                return Rational(n, d);
        }
        return Rational(a.num_big() * b.num_big(), a.den_big() * b.den_big());
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero())
            throw arithmetic_error("Rational: division by zero");
        if (!a.big_ && !b.big_) {
            long long n, d;
            if (!mul_ovf(a.num_, b.den_, n) && !mul_ovf(a.den_, b.num_, d))
                return Rational(n, d);
        }
        return Rational(a.num_big() * b.den_big(), a.den_big() * b.num_big());
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_)
            return a.num_ == b.num_ && a.den_ == b.den_;
        return a.num_big() == b.num_big() && a.den_big() == b.den_big();
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            long long x, y;
            if (!mul_ovf(a.num_, b.den_, x) && !mul_ovf(b.num_, a.den_, y))
                return x < y;
        }
        return a.num_big() * b.den_big() < b.num_big() * a.den_big();
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return is_negative() ? -*this : *this; }

    Rational pow_int(long long e) const {
        if (e == 0)
            return Rational(1);
        if (e < 0) {
            if (is_zero())
                throw arithmetic_error("Rational: 0 to negative power");
            return Rational(den_big(), num_big()).pow_int(-e);
        }
        if (!big_) {
            // keep exact via BigInt; exponents can be large in the oracle
            return Rational(BigInt(num_).pow_u(static_cast<unsigned>(e)),
                            BigInt(den_).pow_u(static_cast<unsigned>(e)));
        }
        return Rational(bnum_.pow_u(static_cast<unsigned>(e)), bden_.pow_u(static_cast<unsigned>(e)));
    }

    double to_double() const {
        if (!big_)
            return static_cast<double>(num_) / static_cast<double>(den_);
        return std::strtod((bnum_.to_string() + "e0").c_str(), nullptr) /
               std::strtod((bden_.to_string() + "e0").c_str(), nullptr);
    }

    std::string to_string() const {
        std::string n = big_ ? bnum_.to_string() : std::to_string(num_);
        if (is_integer())
            return n;
        return n + "/" + (big_ ? bden_.to_string() : std::to_string(den_));
    }

  private:
    long long num_ = 0, den_ = 1;  // valid when !big_
    bool big_ = false;
    BigInt bnum_, bden_;  // valid when big_

    static bool add_ovf(long long a, long long b, long long& out) {
        return __builtin_add_overflow(a, b, &out);
    }
    static bool mul_ovf(long long a, long long b, long long& out) {
        return __builtin_mul_overflow(a, b, &out);
    }

    static long long gcd_ll(long long a, long long b) {
        while (b) {
            long long t = a % b;
            a = b;
            b = t;
        }
        return a < 0 ? -a : a;
    }

    void normalize_small() {
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        long long g = gcd_ll(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    void set_big(BigInt n, BigInt d) {
        if (d.is_negative()) {
            n = -n;
            d = -d;
        }
        if (n.is_zero()) {
            num_ = 0;
            den_ = 1;
            big_ = false;
            return;
        }
        BigInt g = BigInt::gcd(n, d);
        n = n / g;
        d = d / g;
        long long sn, sd;
        if (n.fits_i64(sn) && d.fits_i64(sd)) {
            num_ = sn;
            den_ = sd;
            big_ = false;
            return;
        }
        big_ = true;
        bnum_ = std::move(n);
        bden_ = std::move(d);
    }
};

// Element of Q(i): re + im*i with exact rational parts.
struct Gaussian {
    Rational re, im;

    Gaussian() = default;
    Gaussian(Rational r) : re(std::move(r)) {}
    Gaussian(int r) : re(r) {}
    Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static Gaussian i() { return Gaussian(Rational(0), Rational(1)); }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    Gaussian conj() const { return Gaussian(re, -im); }

    friend Gaussian operator-(const Gaussian& a) { return Gaussian(-a.re, -a.im); }
    friend Gaussian operator+(const Gaussian& a, const Gaussian& b) {
        return Gaussian(a.re + b.re, a.im + b.im);
    }
    friend Gaussian operator-(const Gaussian& a, const Gaussian& b) {
        return Gaussian(a.re - b.re, a.im - b.im);
    }
    friend Gaussian operator*(const Gaussian& a, const Gaussian& b) {
        return Gaussian(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Gaussian operator/(const Gaussian& a, const Gaussian& b) {
        Rational n2 = b.re * b.re + b.im * b.im;
        if (n2.is_zero())
            throw arithmetic_error("Gaussian: division by zero");
        return Gaussian((a.re * b.re + a.im * b.im) / n2, (a.im * b.re - a.re * b.im) / n2);
    }
    Gaussian& operator+=(const Gaussian& o) { return *this = *this + o; }
    Gaussian& operator-=(const Gaussian& o) { return *this = *this - o; }
    Gaussian& operator*=(const Gaussian& o) { return *this = *this * o; }

    friend bool operator==(const Gaussian& a, const Gaussian& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
    friend bool operator<(const Gaussian& a, const Gaussian& b) {
        if (a.re != b.re)
            return a.re < b.re;
        return a.im < b.im;
    }

    // |z|^2, exact
    Rational norm2() const { return re * re + im * im; }

    std::string to_string() const {
        if (im.is_zero())
            return re.to_string();
        std::string istr = im.is_one() ? "I" : (im == Rational(-1) ? "-I" : im.to_string() + "*I");
        if (re.is_zero())
            return istr;
        if (istr[0] == '-')
            return "(" + re.to_string() + istr.insert(1, " ").insert(0, " ") + ")";
        return "(" + re.to_string() + " + " + istr + ")";
    }
};

// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
// needed so that a seed fully determines every randomized check, independent
// of the standard library implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(unsigned num, unsigned den) { return below(den) < num; }

    Rational rational(long long max_num, long long max_den) {
        long long d = range(1, max_den);
        return Rational(range(-max_num, max_num), d);
    }

    Rational nonzero_rational(long long max_num, long long max_den) {
        for (;;) {
            Rational r = rational(max_num, max_den);
            if (!r.is_zero())
                return r;
        }
    }

    Gaussian gaussian(long long max_num, long long max_den) {
        return Gaussian(rational(max_num, max_den), rational(max_num, max_den));
    }

  private:
    std::uint64_t state_;
};

}  // namespace crjet
