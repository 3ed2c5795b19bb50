#pragma once

// Bridge between the explicit extremal on the group and the jet engine:
// jets of f = (1/n) log u induced at a point, and the transformed-equation
// residual evaluated on them. Only kernel-power ratios enter, so the whole
// check runs in exact arithmetic for every n.

#include "crjet/heisenberg.hpp"
#include "crjet/oracle.hpp"
#include "crjet/parser.hpp"

namespace crjet {

// ratio: the exact constant -lap(v)/v^{q*} of the solution family; it fixes
// C via C^{2/n} = ratio/(2n^2) and with it the weight e^{2f} = C^{2/n}/(K Kbar).
inline JetPoint induced_jet_point(const YamabeParams& params, int n, const HPoint& pt,
                                  const Rational& ratio) {
    HFunc v = HFunc::kernel_power(params, n, Rational(-n, 2), Rational(-n, 2), Gaussian(1));
    Rational half(n, 2);
    auto ratio_of = [&](const Word& w) { return v.apply(w).eval_shifted(pt, half, half); };

    JetPoint jp;
    jp.n_val = n;
    Gaussian inv_n(Rational(1, n));
    for (int a = 1; a <= n; ++a) {
        Gaussian fa = ratio_of({Index::hol(a)}) * inv_n;
        jp.vals[JetKey{{a}, {}, 0}] = fa;
        jp.vals[JetKey{{}, {a}, 0}] = fa.conj();
    }
    Gaussian f0 = ratio_of({Index::t0()}) * inv_n;
    if (!f0.is_real())
        throw arithmetic_error("induced_jet_point: f_0 not real");
    jp.vals[JetKey{{}, {}, 1}] = f0;
    for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
            Gaussian second =
                (ratio_of({Index::hol(a), Index::antihol(b)}) -
                 ratio_of({Index::hol(a)}) * ratio_of({Index::antihol(b)})) *
                inv_n;
            jp.vals[JetKey{{a}, {b}, 0}] = second;
        }

    Gaussian kk = v.kernel_value(pt);
    Rational k2 = kk.norm2();
    jp.exp_table[Rational(2)] =
        Gaussian(ratio / (Rational(2) * Rational(n) * Rational(n) * k2));
    return jp;
}

// Evaluates the transformed-equation residual Re f_{aa'} + n|df|^2 + n e^{2f}
// on jets induced from the solution; exact zero at every sample on success.
inline bool yamabe_transform_consistent(const YamabeParams& params, int n,
                                        std::size_t samples, std::uint64_t seed,
                                        bool sabotage_constant = false) {
    Rng rng(seed);
    HPoint p0 = random_h_point(rng, n);
    Rational ratio = yamabe_ratio_exact(params, n, p0);
    if (ratio.sign() <= 0)
        return false;
    if (sabotage_constant)
        ratio = ratio * Rational(2);
    BuilderContext ctx0;
    ctx0.p_zero = true;
    Expression residual = parse("Re(f[a,a']) + n*f[b]*f[b'] + n*exp(2*f)", ctx0);
    for (std::size_t i = 0; i < samples; ++i) {
        HPoint hp = random_h_point(rng, n);
        JetPoint jp = induced_jet_point(params, n, hp, ratio);
        if (!evaluate(residual, jp, Rational(0)).scalar().is_zero())
            return false;
    }
    return true;
}

}  // namespace crjet
