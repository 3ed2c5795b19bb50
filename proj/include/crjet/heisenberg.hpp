#pragma once

// Exact closed-form calculus on the Heisenberg group: functions of the shape
//   sum of  c * z^A zbar^B t^m K^{r} Kbar^{rb},
// where K = t + i z.zbar + z.mu + lambda is the kernel denominator. The class
// is closed under the left-invariant fields Z_a = d/dz^a + i zbar^a d/dt and
// their conjugates (Z_a Kbar = 0 and Zbar_a K = 0), so iterated derivatives
// of both polynomials and the explicit extremal stay in it.
//
// Kernel powers are half-integers for odd n; every check divides by a known
// power of the kernel first (exponent shift), after which evaluation at a
// rational point is exact.

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "crjet/expr.hpp"

namespace crjet {

struct HPoint {
    std::vector<Gaussian> z;
    Rational t;
};

struct YamabeParams {
    Rational C = Rational(1);
    Gaussian lambda;
    std::vector<Gaussian> mu;

    // Im(lambda) > |mu|^2 / 4
    bool admissible() const {
        Rational mu2;
        for (const Gaussian& m : mu)
            mu2 += m.norm2();
        return lambda.im > mu2 / Rational(4);
    }
};

struct HKey {
    std::vector<int> za, zb;  // coordinate exponents, size n
    int m = 0;                // t exponent
    Rational rk, rkb;         // kernel exponents

    friend bool operator==(const HKey& a, const HKey& b) {
        return a.za == b.za && a.zb == b.zb && a.m == b.m && a.rk == b.rk && a.rkb == b.rkb;
    }
    friend bool operator<(const HKey& a, const HKey& b) {
        if (a.za != b.za)
            return a.za < b.za;
        if (a.zb != b.zb)
            return a.zb < b.zb;
        if (a.m != b.m)
            return a.m < b.m;
        if (a.rk != b.rk)
            return a.rk < b.rk;
        return a.rkb < b.rkb;
    }
};

class HFunc {
  public:
    int n = 1;
    std::vector<Gaussian> mu;  // kernel parameters (zero for plain polynomials)
    Gaussian lambda;
    std::map<HKey, Gaussian> terms;

    HFunc() = default;
    explicit HFunc(int n_) : n(n_), mu(static_cast<std::size_t>(n_), Gaussian()) {}

    static HFunc monomial(int n, HKey key, Gaussian c) {
        HFunc f(n);
        f.add(std::move(key), std::move(c));
        return f;
    }
    static HFunc coordinate_t(int n) {
        HKey k;
        k.za.assign(static_cast<std::size_t>(n), 0);
        k.zb = k.za;
        k.m = 1;
        return monomial(n, k, Gaussian(1));
    }
    static HFunc coordinate_z(int n, int a, bool conjugated = false) {
        HKey k;
        k.za.assign(static_cast<std::size_t>(n), 0);
        k.zb = k.za;
        (conjugated ? k.zb : k.za)[static_cast<std::size_t>(a - 1)] = 1;
        return monomial(n, k, Gaussian(1));
    }
    // c * K^{rk} Kbar^{rkb}
    static HFunc kernel_power(const YamabeParams& params, int n, const Rational& rk,
                              const Rational& rkb, const Gaussian& c) {
        HKey k;
        k.za.assign(static_cast<std::size_t>(n), 0);
        k.zb = k.za;
        k.rk = rk;
        k.rkb = rkb;
        HFunc f = monomial(n, k, c);
        f.mu = params.mu;
        f.lambda = params.lambda;
        return f;
    }

    bool compatible(const HFunc& o) const { return n == o.n; }

    void add(HKey key, Gaussian c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = terms.emplace(std::move(key), std::move(c));
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                terms.erase(it);
        }
    }

    friend HFunc operator+(const HFunc& a, const HFunc& b) {
        HFunc r = a;
        if (r.mu.empty() || b_has_kernel(b))
            r.adopt_params(b);
        for (const auto& [k, c] : b.terms)
            r.add(k, c);
        return r;
    }
    friend HFunc operator-(const HFunc& a, const HFunc& b) {
        HFunc r = a;
        if (r.mu.empty() || b_has_kernel(b))
            r.adopt_params(b);
        for (const auto& [k, c] : b.terms)
            r.add(k, -c);
        return r;
    }
    HFunc scaled(const Gaussian& c) const {
        HFunc r = *this;
        for (auto& [k, v] : r.terms)
            v *= c;
        return r;
    }

    // partial derivatives of one term ------------------------------------

    HFunc d_z(int a) const {
        std::size_t ai = static_cast<std::size_t>(a - 1);
        HFunc r = like();
        for (const auto& [k, c] : terms) {
            if (k.za[ai] > 0) {
                HKey nk = k;
                nk.za[ai] -= 1;
                r.add(nk, c * Gaussian(Rational(k.za[ai])));
            }
            if (!k.rk.is_zero()) {
                // d/dz^a K = i zbar^a + mu_a
                HKey nk = k;
                nk.rk = nk.rk - Rational(1);
                HKey nk2 = nk;
                nk2.zb[ai] += 1;
                r.add(nk2, c * Gaussian(k.rk) * Gaussian::i());
                r.add(nk, c * Gaussian(k.rk) * mu[ai]);
            }
            if (!k.rkb.is_zero()) {
                // d/dz^a Kbar = -i zbar^a
                HKey nk = k;
                nk.rkb = nk.rkb - Rational(1);
                nk.zb[ai] += 1;
                r.add(nk, c * Gaussian(k.rkb) * (-Gaussian::i()));
            }
        }
        return r;
    }

    HFunc d_zb(int a) const {
        std::size_t ai = static_cast<std::size_t>(a - 1);
        HFunc r = like();
        for (const auto& [k, c] : terms) {
            if (k.zb[ai] > 0) {
                HKey nk = k;
                nk.zb[ai] -= 1;
                r.add(nk, c * Gaussian(Rational(k.zb[ai])));
            }
            if (!k.rk.is_zero()) {
                // d/dzbar^a K = i z^a
                HKey nk = k;
                nk.rk = nk.rk - Rational(1);
                nk.za[ai] += 1;
                r.add(nk, c * Gaussian(k.rk) * Gaussian::i());
            }
            if (!k.rkb.is_zero()) {
                // d/dzbar^a Kbar = -i z^a + conj(mu_a)
                HKey nk = k;
                nk.rkb = nk.rkb - Rational(1);
                HKey nk2 = nk;
                nk2.za[ai] += 1;
                r.add(nk2, c * Gaussian(k.rkb) * (-Gaussian::i()));
                r.add(nk, c * Gaussian(k.rkb) * mu[ai].conj());
            }
        }
        return r;
    }

    HFunc d_t() const {
        HFunc r = like();
        for (const auto& [k, c] : terms) {
            if (k.m > 0) {
                HKey nk = k;
                nk.m -= 1;
                r.add(nk, c * Gaussian(Rational(k.m)));
            }
            if (!k.rk.is_zero()) {
                HKey nk = k;
                nk.rk = nk.rk - Rational(1);
                r.add(nk, c * Gaussian(k.rk));
            }
            if (!k.rkb.is_zero()) {
                HKey nk = k;
                nk.rkb = nk.rkb - Rational(1);
                r.add(nk, c * Gaussian(k.rkb));
            }
        }
        return r;
    }

    HFunc mul_coord(int a, bool conjugated) const {
        std::size_t ai = static_cast<std::size_t>(a - 1);
        HFunc r = like();
        for (const auto& [k, c] : terms) {
            HKey nk = k;
            (conjugated ? nk.zb : nk.za)[ai] += 1;
            r.add(nk, c);
        }
        return r;
    }

    // left-invariant fields: Z_a = d_z + i zbar^a d_t, Zbar_a = d_zb - i z^a d_t
    HFunc Z(int a) const { return d_z(a) + d_t().mul_coord(a, true).scaled(Gaussian::i()); }
    HFunc Zbar(int a) const { return d_zb(a) - d_t().mul_coord(a, false).scaled(Gaussian::i()); }

    HFunc apply(const Word& w) const {
        HFunc r = *this;
        for (const Index& ix : w) {
            if (ix.kind == Kind::Hol)
                r = r.Z(ix.label);
            else if (ix.kind == Kind::AntiHol)
                r = r.Zbar(ix.label);
            else
                r = r.d_t();
        }
        return r;
    }

    Gaussian kernel_value(const HPoint& pt) const {
        Gaussian k(pt.t);
        Gaussian zz;
        for (std::size_t a = 0; a < pt.z.size(); ++a) {
            zz += pt.z[a] * pt.z[a].conj();
            k += pt.z[a] * mu[a];
        }
        return k + Gaussian::i() * zz + lambda;
    }

    static Gaussian gpow(const Gaussian& base, long long e) {
        if (e == 0)
            return Gaussian(1);
        if (e < 0) {
            if (base.is_zero())
                throw arithmetic_error("HFunc: kernel vanished at the point");
            Gaussian inv = Gaussian(1) / base;
            return gpow(inv, -e);
        }
        Gaussian acc(1), b = base;
        while (e) {
            if (e & 1)
                acc *= b;
            b *= b;
            e >>= 1;
        }
        return acc;
    }

    // exact evaluation of (this) * K^{shift_k} Kbar^{shift_kb}; the shifted
    // kernel exponents must all be integers
    Gaussian eval_shifted(const HPoint& pt, const Rational& shift_k,
                          const Rational& shift_kb) const {
        Gaussian kv = kernel_value(pt);
        Gaussian kvb = kv.conj();
        Gaussian acc;
        for (const auto& [k, c] : terms) {
            Rational ek = k.rk + shift_k, ekb = k.rkb + shift_kb;
            if (!ek.is_integer() || !ekb.is_integer())
                throw arithmetic_error("HFunc: non-integer kernel exponent in exact evaluation");
            long long iek, iekb;
            if (!ek.num_big().fits_i64(iek) || !ekb.num_big().fits_i64(iekb))
                throw arithmetic_error("HFunc: kernel exponent too large");
            Gaussian v = c;
            for (std::size_t a = 0; a < pt.z.size(); ++a) {
                v *= gpow(pt.z[a], k.za[a]);
                v *= gpow(pt.z[a].conj(), k.zb[a]);
            }
            v *= Gaussian(pt.t.pow_int(k.m));
            v *= gpow(kv, iek);
            v *= gpow(kvb, iekb);
            acc += v;
        }
        return acc;
    }

    Gaussian eval_exact(const HPoint& pt) const { return eval_shifted(pt, 0, 0); }

    std::complex<double> eval_double(const HPoint& pt) const {
        auto to_c = [](const Gaussian& g) {
            return std::complex<double>(g.re.to_double(), g.im.to_double());
        };
        std::complex<double> kv = to_c(kernel_value(pt));
        std::complex<double> kvb = std::conj(kv);
        std::complex<double> acc = 0;
        for (const auto& [k, c] : terms) {
            std::complex<double> v = to_c(c);
            for (std::size_t a = 0; a < pt.z.size(); ++a) {
                v *= std::pow(to_c(pt.z[a]), k.za[a]);
                v *= std::pow(std::conj(to_c(pt.z[a])), k.zb[a]);
            }
            v *= std::pow(pt.t.to_double(), k.m);
            v *= std::pow(kv, k.rk.to_double());
            v *= std::pow(kvb, k.rkb.to_double());
            acc += v;
        }
        return acc;
    }

  private:
    HFunc like() const {
        HFunc r(n);
        r.mu = mu;
        r.lambda = lambda;
        return r;
    }
    static bool b_has_kernel(const HFunc& b) {
        for (const auto& [k, c] : b.terms)
            if (!k.rk.is_zero() || !k.rkb.is_zero())
                return true;
        return false;
    }
    void adopt_params(const HFunc& o) {
        if (mu.empty() || b_has_kernel(o)) {
            mu = o.mu;
            lambda = o.lambda;
        }
        if (mu.empty())
            mu.assign(static_cast<std::size_t>(n), Gaussian());
    }
};

// apply the fields in subscript order and evaluate exactly
inline Gaussian z_apply(const HFunc& fn, const Word& word, const HPoint& pt) {
    if (word.size() > 4)
        throw std::invalid_argument("z_apply: word length above 4 unsupported");
    return fn.apply(word).eval_exact(pt);
}

// u(z,t) = C |t + i z.zbar + z.mu + lambda|^{-n}
inline double yamabe_u(const YamabeParams& params, int n, const HPoint& pt) {
    if (!params.admissible())
        throw std::invalid_argument("yamabe_u: parameters violate Im(lambda) > |mu|^2/4");
    if (params.C.sign() <= 0)
        throw std::invalid_argument("yamabe_u: C must be positive");
    HFunc v = HFunc::kernel_power(params, n, Rational(-n, 2), Rational(-n, 2), Gaussian(1));
    double val = params.C.to_double() * std::abs(v.eval_double(pt));
    return val;
}

struct YamabeReport {
    bool pass = false;
    int n = 1;
    std::size_t samples = 0;
    Rational ratio;        // exact -laplacian(v)/v^{q*}, constant across points
    bool ratio_constant = false;
    double C_solved = 0.0;
    double max_rel_dev = 0.0;  // float cross-check of -lap(u)/u^{q*} against 2n^2
    std::string note;
};

// -laplacian(v) / v^{q*} for the kernel v at pt, exactly. q* = (n+2)/n and
// v^{q*} = (K Kbar)^{-(n+2)/2}, so the ratio is v-free after an exponent shift.
inline Rational yamabe_ratio_exact(const YamabeParams& params, int n, const HPoint& pt) {
    HFunc v = HFunc::kernel_power(params, n, Rational(-n, 2), Rational(-n, 2), Gaussian(1));
    HFunc lap(n);
    lap.mu = params.mu;
    lap.lambda = params.lambda;
    for (int a = 1; a <= n; ++a) {
        lap = lap + v.apply({Index::hol(a), Index::antihol(a)});
        lap = lap + v.apply({Index::antihol(a), Index::hol(a)});
    }
    Rational half_shift(n + 2, 2);
    Gaussian r = lap.eval_shifted(pt, half_shift, half_shift);
    if (!r.is_real())
        throw arithmetic_error("yamabe_ratio_exact: laplacian ratio not real");
    return -r.re;
}

inline HPoint random_h_point(Rng& rng, int n) {
    HPoint pt;
    pt.t = rng.rational(3, 2);
    for (int a = 0; a < n; ++a)
        pt.z.push_back(rng.gaussian(3, 2));
    return pt;
}

inline YamabeReport check_yamabe_solves(const YamabeParams& params, int n,
                                        std::size_t sample_count, std::uint64_t seed) {
    if (!params.admissible())
        throw std::invalid_argument("check_yamabe_solves: inadmissible parameters");
    if (n < 1 || sample_count < 10)
        throw std::invalid_argument("check_yamabe_solves: need n >= 1 and >= 10 samples");
    YamabeReport rep;
    rep.n = n;
    rep.samples = sample_count;
    Rng rng(seed);

    bool first = true;
    rep.ratio_constant = true;
    for (std::size_t i = 0; i < sample_count; ++i) {
        HPoint pt = random_h_point(rng, n);
        Rational r = yamabe_ratio_exact(params, n, pt);
        if (first) {
            rep.ratio = r;
            first = false;
        } else if (!(r == rep.ratio)) {
            rep.ratio_constant = false;
            rep.note = "ratio differs between sample points";
        }
    }
    if (!rep.ratio_constant || rep.ratio.sign() <= 0) {
        rep.pass = false;
        if (rep.ratio.sign() <= 0)
            rep.note = "ratio not positive, no C > 0 exists";
        return rep;
    }

    // C^{q*-1} = ratio / (2 n^2) with q*-1 = 2/n, so C = (ratio/(2n^2))^{n/2}
    double base = rep.ratio.to_double() / (2.0 * n * n);
    rep.C_solved = std::pow(base, n / 2.0);

    // float cross-check on u = C v directly
    HFunc v = HFunc::kernel_power(params, n, Rational(-n, 2), Rational(-n, 2), Gaussian(1));
    HFunc lap(n);
    lap.mu = params.mu;
    lap.lambda = params.lambda;
    for (int a = 1; a <= n; ++a) {
        lap = lap + v.apply({Index::hol(a), Index::antihol(a)});
        lap = lap + v.apply({Index::antihol(a), Index::hol(a)});
    }
    Rng rng2(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < sample_count; ++i) {
        HPoint pt = random_h_point(rng2, n);
        double vv = std::abs(v.eval_double(pt));
        double lap_u = rep.C_solved * lap.eval_double(pt).real();
        double u_q = std::pow(rep.C_solved * vv, 1.0 + 2.0 / n);
        double lhs = -lap_u / u_q;
        double rel = std::abs(lhs - 2.0 * n * n) / (2.0 * n * n);
        rep.max_rel_dev = std::max(rep.max_rel_dev, rel);
    }
    rep.pass = rep.ratio_constant && rep.ratio.sign() > 0 && rep.max_rel_dev <= 1e-10;
    return rep;
}

}  // namespace crjet
