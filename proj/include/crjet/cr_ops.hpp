#pragma once

// CR differential operators on jet expressions and the named tensors
// D_{ab}, E_{ab'}, D_a, E_a, G_a, g as expression builders.

#include <string>

#include "crjet/expr.hpp"

namespace crjet {

// Deliberate single-sign-flip mutations, used by the mutation tests to check
// that each catalog identity is sensitive to the builder it depends on.
enum class Mutation {
    None,
    D2Sign,       // D_{ab} := f_{ab} + 2 f_a f_b   (wrong sign)
    E2DeltaSign,  // E_{ab'} := f_{ab'} - g delta    (wrong sign)
    G1Sign,       // G_a := -i f_{0a} + g f_a        (wrong sign)
};

// z_derivative: product rule over monomials. Appends idx to each jet word in
// turn; differentiates e^{kf} to k * f_idx * e^{kf}; polynomial coefficients
// and deltas are constants. If idx's label matches an existing free index of
// the opposite kind, the pair contracts.
inline Expression z_derivative(const Expression& e, const Index& idx) {
    std::vector<Monomial> out;
    int fresh = std::max(e.max_label(), idx.label) + 1;
    for (const Monomial& mon : e.monomials()) {
        // a contracted pair in the monomial may carry idx's label (bound
        // labels are arbitrary); rename it so the new index only ever joins
        // a free occurrence
        Monomial m = mon;
        if (!idx.is_t0()) {
            std::set<int> frees, dummies;
            detail::free_and_dummy_labels(m, frees, dummies);
            if (dummies.count(idx.label))
                detail::relabel_dummies(m, {{idx.label, fresh++}});
        }
        for (std::size_t fi = 0; fi < m.factors.size(); ++fi) {
            Monomial d = m;
            d.factors[fi].push_back(Index(idx.kind, idx.label));
            out.push_back(std::move(d));
        }
        if (!m.exp.is_identity()) {
            Monomial d = m;
            d.coeff = d.coeff * m.exp.weight_poly();
            d.factors.push_back(Word{Index(idx.kind, idx.label)});
            out.push_back(std::move(d));
        }
    }
    return Expression::from_monomials(std::move(out));
}

inline Expression z_derivative(const Expression& e, const Word& word) {
    Expression r = e;
    for (const Index& ix : word)
        r = z_derivative(r, ix);
    return r;
}

// Re Z_{a'} V_a for a vector expression with exactly one free holomorphic
// index: contract first, then take the real part.
inline Expression divergence(const Expression& v) {
    auto sig = v.signature();
    if (sig.size() != 1 || sig.begin()->kind != Kind::Hol)
        throw signature_error("divergence: expected exactly one free holomorphic index, got {" +
                              Expression::signature_names(sig) + "}");
    int label = sig.begin()->label;
    return re_part(z_derivative(v, Index::antihol(label)));
}

// Builders for the named tensors. All expansions are the delta-free forms;
// the two displayed variants of each definition are cross-checked by the
// identity suite, not assumed here.
class BuilderContext {
  public:
    Mutation mutation = Mutation::None;
    // verify the p = 0 specialization: the transformed equation, and with it
    // every tensor built from g, loses its p-dependence
    bool p_zero = false;

    BuilderContext() = default;
    explicit BuilderContext(Mutation m) : mutation(m) {}

    // |∂f|^2 = f_b f_{b'} with a contracted pair
    Expression dfnorm2() const {
        return Expression::jet({Index::hol(1)}) * Expression::jet({Index::antihol(1)});
    }

    // g = |∂f|^2 + e^{(2+p)f} - i f_0
    Expression g() const {
        return dfnorm2() + Expression::exp_weight(2, 0, p_zero ? 0 : 1) -
               Expression::i() * Expression::jet({Index::t0()});
    }
    Expression gbar() const { return conj(g()); }

    // D_{ab} = f_{ab} - 2 f_a f_b
    Expression D2(int a, int b) const {
        Expression quad = Expression::constant(2) * Expression::jet({Index::hol(a)}) *
                          Expression::jet({Index::hol(b)});
        Expression lead = Expression::jet({Index::hol(a), Index::hol(b)});
        return mutation == Mutation::D2Sign ? lead + quad : lead - quad;
    }

    // E_{ab'} = f_{ab'} + g delta_{ab'}
    Expression E2(int a, int b) const {
        Expression tail = g() * Expression::delta(a, b);
        Expression lead = Expression::jet({Index::hol(a), Index::antihol(b)});
        return mutation == Mutation::E2DeltaSign ? lead - tail : lead + tail;
    }

    // D_a = D_{ab} f_{b'}
    Expression D1(int a) const {
        int b = a + 1;
        return D2(a, b) * Expression::jet({Index::antihol(b)});
    }

    // E_a = E_{ab'} f_b
    Expression E1(int a) const {
        int b = a + 1;
        return E2(a, b) * Expression::jet({Index::hol(b)});
    }

    // G_a = i f_{0a} + g f_a
    Expression G1(int a) const {
        Expression lead = Expression::i() * Expression::jet({Index::t0(), Index::hol(a)});
        if (mutation == Mutation::G1Sign)
            lead = -lead;
        return lead + g() * Expression::jet({Index::hol(a)});
    }

    // conjugates with the free label kept (D_{a'} etc.)
    Expression D1bar(int a) const { return conj(D1(a)); }
    Expression E1bar(int a) const { return conj(E1(a)); }
    Expression G1bar(int a) const { return conj(G1(a)); }
    Expression D2bar(int a, int b) const { return conj(D2(a, b)); }
    Expression E2bar(int a, int b) const { return conj(E2(a, b)); }
};

inline const BuilderContext& default_builders() {
    static const BuilderContext ctx;
    return ctx;
}

}  // namespace crjet
