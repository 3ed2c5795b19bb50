#pragma once

// Terminating rewriting of jet words to canonical order.
//
// Canonical word order is holomorphic block (ascending label), then
// antiholomorphic block (ascending label), then t-derivatives. Each adjacent
// transposition of (antiholomorphic, holomorphic) inserts the commutator
// correction 2i * delta * (word with the pair replaced by a t-slot); the
// t-slot commutes freely. With use_pde set, a contracted pair living inside
// a single word is a Hessian trace: the pair is commuted to the word's head
// (collecting corrections) and f_{a a' w} is replaced by the word-w
// derivative of -n*g, recursively.

#include <deque>
#include <string>

#include "crjet/cr_ops.hpp"
#include "crjet/expr.hpp"

namespace crjet {

class term_cap_error : public std::runtime_error {
  public:
    std::size_t terms;
    term_cap_error(std::size_t t, std::size_t cap)
        : std::runtime_error("normalize: term count " + std::to_string(t) +
                             " exceeded cap " + std::to_string(cap)),
          terms(t) {}
};

struct RewriteConfig {
    bool use_pde = false;
    std::size_t max_terms = 100000;
    // nonzero: randomize rewrite choices (confluence testing only)
    std::uint64_t shuffle_seed = 0;
    const BuilderContext* builders = nullptr;

    const BuilderContext& ctx() const { return builders ? *builders : default_builders(); }
};

struct NormalizeStats {
    std::size_t steps = 0;
    std::size_t peak_terms = 0;
};

namespace detail {

struct Defect {
    enum What { KindSwap, PdeTrace } what;
    std::size_t factor;
    std::size_t pos;    // KindSwap: left position of the inverted pair
    int label;          // PdeTrace: contracted label
};

inline bool find_defects(const Monomial& m, bool use_pde, std::vector<Defect>& out) {
    out.clear();
    for (std::size_t fi = 0; fi < m.factors.size(); ++fi) {
        const Word& w = m.factors[fi];
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (kind_rank(w[i].kind) > kind_rank(w[i + 1].kind))
                out.push_back({Defect::KindSwap, fi, i, 0});
    }
    if (!out.empty() || !use_pde)
        return !out.empty();
    for (std::size_t fi = 0; fi < m.factors.size(); ++fi) {
        const Word& w = m.factors[fi];
        for (const Index& ix : w) {
            if (ix.kind != Kind::Hol || ix.status != Status::Dummy)
                continue;
            for (const Index& jx : w)
                if (jx.kind == Kind::AntiHol && jx.label == ix.label) {
                    out.push_back({Defect::PdeTrace, fi, 0, ix.label});
                    break;
                }
        }
    }
    return !out.empty();
}

}  // namespace detail

inline Expression g_derivative_raw(const Word& word, const BuilderContext& ctx) {
    return z_derivative(ctx.g(), word);
}

inline Expression normalize(const Expression& e, const RewriteConfig& cfg = {},
                            NormalizeStats* stats = nullptr) {
    const BuilderContext& ctx = cfg.ctx();
    std::deque<Monomial> work(e.monomials().begin(), e.monomials().end());
    std::map<MonKey, CoeffPoly> done;
    NormalizeStats st;
    Rng rng(cfg.shuffle_seed ? cfg.shuffle_seed : 1);

    std::vector<detail::Defect> defects;
    while (!work.empty()) {
        st.peak_terms = std::max(st.peak_terms, work.size() + done.size());
        if (work.size() + done.size() > cfg.max_terms)
            throw term_cap_error(work.size() + done.size(), cfg.max_terms);

        std::size_t pick = cfg.shuffle_seed ? rng.below(work.size()) : 0;
        Monomial m = std::move(work[pick]);
        work.erase(work.begin() + static_cast<std::ptrdiff_t>(pick));

        if (!detail::find_defects(m, cfg.use_pde, defects)) {
            Monomial c = canonicalize_monomial(std::move(m), /*resort_within_kind=*/true);
            MonKey key{c.exp, std::move(c.factors), std::move(c.deltas)};
            auto [it, inserted] = done.emplace(std::move(key), c.coeff);
            if (!inserted) {
                it->second += c.coeff;
                if (it->second.is_zero())
                    done.erase(it);
            }
            continue;
        }
        ++st.steps;
        const detail::Defect& d =
            defects[cfg.shuffle_seed ? rng.below(defects.size()) : 0];

        if (d.what == detail::Defect::KindSwap) {
            Word& w = m.factors[d.factor];
            Index left = w[d.pos], right = w[d.pos + 1];
            if (left.kind == Kind::AntiHol && right.kind == Kind::Hol) {
                // f_{..b'a..} = f_{..ab'..} - 2i delta_{ab'} f_{..0..}
                Monomial corr = m;
                corr.coeff = corr.coeff * CoeffPoly::monomial({0, 0, 0}, Gaussian(Rational(0), Rational(-2)));
                Word& cw = corr.factors[d.factor];
                cw.erase(cw.begin() + static_cast<std::ptrdiff_t>(d.pos),
                         cw.begin() + static_cast<std::ptrdiff_t>(d.pos) + 2);
                cw.insert(cw.begin() + static_cast<std::ptrdiff_t>(d.pos), Index::t0());
                corr.deltas.emplace_back(Index::hol(right.label), Index::antihol(left.label));
                detail::eliminate_deltas(corr);
                work.push_back(std::move(corr));
            }
            std::swap(w[d.pos], w[d.pos + 1]);
            work.push_back(std::move(m));
            continue;
        }

        // PdeTrace: commute the pair to the head, then substitute the trace.
        {
            Word& w = m.factors[d.factor];
            std::size_t hol_pos = 0, anti_pos = 0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (w[i].kind == Kind::Hol && w[i].label == d.label)
                    hol_pos = i;
                if (w[i].kind == Kind::AntiHol && w[i].label == d.label)
                    anti_pos = i;
            }
            // holomorphic indices commute: bring Hol(L) to the front
            Index hol = w[hol_pos];
            w.erase(w.begin() + static_cast<std::ptrdiff_t>(hol_pos));
            w.insert(w.begin(), hol);
            for (std::size_t i = 0; i < w.size(); ++i)
                if (w[i].kind == Kind::AntiHol && w[i].label == d.label)
                    anti_pos = i;

            // walk AntiHol(L) left to position 1, collecting corrections when
            // it crosses a holomorphic index:
            // f_{..K L'..} = f_{..L' K..} + 2i delta_{K L'} f_{..0..}
            while (anti_pos > 1) {
                Index neighbor = w[anti_pos - 1];
                if (neighbor.kind == Kind::Hol) {
                    Monomial corr = m;
                    corr.coeff =
                        corr.coeff * CoeffPoly::monomial({0, 0, 0}, Gaussian(Rational(0), Rational(2)));
                    Word& cw = corr.factors[d.factor];
                    cw.erase(cw.begin() + static_cast<std::ptrdiff_t>(anti_pos) - 1,
                             cw.begin() + static_cast<std::ptrdiff_t>(anti_pos) + 1);
                    cw.insert(cw.begin() + static_cast<std::ptrdiff_t>(anti_pos) - 1, Index::t0());
                    corr.deltas.emplace_back(Index::hol(neighbor.label),
                                             Index::antihol(d.label));
                    detail::eliminate_deltas(corr);
                    work.push_back(std::move(corr));
                }
                std::swap(w[anti_pos - 1], w[anti_pos]);
                --anti_pos;
                ++st.steps;
            }

            // w = (L, L', rest): f_{L L' rest} = Z_rest(f_{aa'}) = -n g_{,rest}
            Word rest(w.begin() + 2, w.end());
            Monomial m_rest = m;
            m_rest.factors.erase(m_rest.factors.begin() + static_cast<std::ptrdiff_t>(d.factor));
            m_rest.coeff = m_rest.coeff * (-CoeffPoly::n());
            Expression lhs_part = Expression::from_monomials({std::move(m_rest)});
            Expression repl = lhs_part * g_derivative_raw(rest, ctx);
            for (const Monomial& rm : repl.monomials())
                work.push_back(rm);
        }
    }

    std::vector<Monomial> final_mons;
    final_mons.reserve(done.size());
    for (auto& [key, coeff] : done) {
        Monomial m;
        m.coeff = std::move(coeff);
        m.exp = key.exp;
        m.factors = key.factors;
        m.deltas = key.deltas;
        final_mons.push_back(std::move(m));
    }
    if (stats)
        *stats = st;
    return Expression::from_monomials(std::move(final_mons), /*resort_within_kind=*/true);
}

// Fully expanded derivative of g by the given word, in canonical form.
inline Expression jet_derivative_of_g(const Word& word,
                                      const BuilderContext& ctx = default_builders()) {
    RewriteConfig cfg;
    cfg.builders = &ctx;
    return normalize(g_derivative_raw(word, ctx), cfg);
}

}  // namespace crjet
