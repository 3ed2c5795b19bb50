#pragma once

// Concrete-dimension numeric oracle.
//
// A JetPoint assigns exact Gaussian-rational values to every canonical jet
// coordinate (words sorted Hol -> AntiHol -> T0, labels being concrete
// indices 1..n). Reality constraints are built in: the conjugate of a
// coordinate is determined through the commutation corrections, never
// independently assigned. Evaluation instantiates dummy sums over 1..n and
// handles non-canonical words by the same commutation recursion the abstract
// engine uses, so instantiating *before* normalization is sound and gives an
// independent check of the symbolic path.
//
// Exponential factors e^{r f}: a random point carries the value W = e^{f/d}
// for d the denominator of the sampled p, so every weight e^{(a+bn+cp)f}
// evaluates to the exact rational W^{rd}. Points induced from an explicit
// solution carry an explicit exponent table instead. With neither, values
// stay graded by exponent and zero means every graded part vanishes.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crjet/normalize.hpp"

namespace crjet {

class eval_error : public std::runtime_error {
  public:
    explicit eval_error(const std::string& w) : std::runtime_error(w) {}
};

struct JetKey {
    std::vector<int> hol, anti;  // nondecreasing concrete indices
    int t0 = 0;

    friend bool operator==(const JetKey& a, const JetKey& b) {
        return a.hol == b.hol && a.anti == b.anti && a.t0 == b.t0;
    }
    friend bool operator<(const JetKey& a, const JetKey& b) {
        if (a.hol != b.hol)
            return a.hol < b.hol;
        if (a.anti != b.anti)
            return a.anti < b.anti;
        return a.t0 < b.t0;
    }
    JetKey swapped() const { return {anti, hol, t0}; }
    std::size_t length() const { return hol.size() + anti.size() + static_cast<std::size_t>(t0); }

    std::string to_string() const {
        std::string s = "f[";
        bool first = true;
        for (int j : hol) {
            s += (first ? "" : ",") + std::string("z") + std::to_string(j);
            first = false;
        }
        for (int j : anti) {
            s += (first ? "" : ",") + std::string("z") + std::to_string(j) + "'";
            first = false;
        }
        for (int k = 0; k < t0; ++k) {
            s += (first ? "" : ",") + std::string("0");
            first = false;
        }
        return s + "]";
    }
};

// Value graded by exponential weight: sum of coeff * e^{r f}.
struct ExpValue {
    std::map<Rational, Gaussian> parts;

    void add(const Rational& r, const Gaussian& c) {
        if (c.is_zero())
            return;
        auto [it, inserted] = parts.emplace(r, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero())
                parts.erase(it);
        }
    }
    bool is_zero() const { return parts.empty(); }
    ExpValue conj() const {
        ExpValue r;
        for (const auto& [e, c] : parts)
            r.parts.emplace(e, c.conj());
        return r;
    }
    friend ExpValue operator-(const ExpValue& a, const ExpValue& b) {
        ExpValue r = a;
        for (const auto& [e, c] : b.parts)
            r.add(e, -c);
        return r;
    }
    friend bool operator==(const ExpValue& a, const ExpValue& b) { return a.parts == b.parts; }

    // collapse to a plain number; valid when no graded parts remain
    Gaussian scalar() const {
        if (parts.empty())
            return Gaussian();
        if (parts.size() == 1 && parts.begin()->first.is_zero())
            return parts.begin()->second;
        throw eval_error("ExpValue: result still carries exponential weight");
    }

    std::string to_string() const {
        if (parts.empty())
            return "0";
        std::string s;
        for (const auto& [e, c] : parts) {
            if (!s.empty())
                s += " + ";
            s += c.to_string();
            if (!e.is_zero())
                s += "*E^" + e.to_string();
        }
        return s;
    }
};

struct JetPoint {
    int n_val = 1;
    std::map<JetKey, Gaussian> vals;
    // mode A: W = e^{f/exp_denom}
    std::optional<Rational> exp_base;
    long long exp_denom = 1;
    // mode B: explicit exact values per exponent
    std::map<Rational, Gaussian> exp_table;
    bool pde_constrained = false;
    Rational p_built_with;

    bool has_exp_values() const { return exp_base.has_value() || !exp_table.empty(); }

    Gaussian exp_value(const Rational& r) const {
        if (r.is_zero())
            return Gaussian(1);
        if (exp_base) {
            Rational scaled = r * Rational(exp_denom);
            if (!scaled.is_integer())
                throw eval_error("exponent " + r.to_string() + " not a multiple of 1/" +
                                 std::to_string(exp_denom));
            long long k;
            if (!scaled.num_big().fits_i64(k))
                throw eval_error("exponent too large");
            return Gaussian(exp_base->pow_int(k));
        }
        auto it = exp_table.find(r);
        if (it == exp_table.end())
            throw eval_error("no value for exponential weight e^{" + r.to_string() + " f}");
        return it->second;
    }

    const Gaussian& value(const JetKey& k) const {
        auto it = vals.find(k);
        if (it == vals.end())
            throw eval_error("jet point does not assign coordinate " + k.to_string());
        return it->second;
    }
};

namespace oracle_detail {

// expand a concrete word (possibly out of canonical order) over canonical
// coordinates: value(w) = value(sorted w) + commutation corrections
inline void expand_word(const Word& w, const Gaussian& coeff,
                        std::map<JetKey, Gaussian>& out) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (detail::kind_rank(w[i].kind) <= detail::kind_rank(w[i + 1].kind))
            continue;
        Word swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        if (w[i].kind == Kind::AntiHol && w[i + 1].kind == Kind::Hol) {
            // f_{..b'a..} = f_{..ab'..} - 2i [a==b] f_{..0..}
            expand_word(swapped, coeff, out);
            if (w[i].label == w[i + 1].label) {
                Word shorter = w;
                shorter.erase(shorter.begin() + static_cast<std::ptrdiff_t>(i),
                              shorter.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                shorter.insert(shorter.begin() + static_cast<std::ptrdiff_t>(i), Index::t0());
                expand_word(shorter, coeff * Gaussian(Rational(0), Rational(-2)), out);
            }
        } else {
            expand_word(swapped, coeff, out);  // a t-slot commutes freely
        }
        return;
    }
    JetKey key;
    for (const Index& ix : w) {
        if (ix.kind == Kind::Hol)
            key.hol.push_back(ix.label);
        else if (ix.kind == Kind::AntiHol)
            key.anti.push_back(ix.label);
        else
            ++key.t0;
    }
    std::sort(key.hol.begin(), key.hol.end());
    std::sort(key.anti.begin(), key.anti.end());
    auto [it, inserted] = out.emplace(std::move(key), coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero())
            out.erase(it);
    }
}

inline Gaussian word_value(const Word& w, const JetPoint& pt) {
    std::map<JetKey, Gaussian> expansion;
    expand_word(w, Gaussian(1), expansion);
    Gaussian acc;
    for (const auto& [key, c] : expansion)
        acc += c * pt.value(key);
    return acc;
}

}  // namespace oracle_detail

// Exact evaluation: expands the contracted pairs over 1..n, substitutes the
// coefficient at (n_val, p_val, s_val) and the point's jet values.
inline ExpValue evaluate(const Expression& e, const JetPoint& pt, const Rational& p_val,
                         const Rational& s_val = Rational(0),
                         const std::map<int, int>& free_binding = {}) {
    Rational n_val(pt.n_val);
    ExpValue result;
    for (const Monomial& m : e.monomials()) {
        // collect dummy labels and the free labels' fixed binding
        std::set<int> frees, dummies;
        detail::free_and_dummy_labels(m, frees, dummies);
        for (int fl : frees)
            if (!free_binding.count(fl))
                throw eval_error("no binding for free index '" +
                                 Index(Kind::Hol, fl).to_string() + "'");
        std::vector<int> dummy_list(dummies.begin(), dummies.end());
        std::vector<int> assign(dummy_list.size(), 1);

        Gaussian coeff = m.coeff.eval(n_val, p_val, s_val);
        Rational weight = m.exp.a + m.exp.b * n_val + m.exp.c * p_val;

        Gaussian sum;
        for (;;) {
            std::map<int, int> binding = free_binding;
            for (std::size_t i = 0; i < dummy_list.size(); ++i)
                binding[dummy_list[i]] = assign[i];
            Gaussian prod(1);
            for (const Delta& d : m.deltas)
                if (binding.at(d.hol.label) != binding.at(d.antihol.label)) {
                    prod = Gaussian();
                    break;
                }
            if (!prod.is_zero()) {
                for (const Word& w : m.factors) {
                    Word concrete = w;
                    for (Index& ix : concrete)
                        if (!ix.is_t0())
                            ix.label = binding.at(ix.label);
                    prod = prod * oracle_detail::word_value(concrete, pt);
                    if (prod.is_zero())
                        break;
                }
            }
            sum += prod;
            // advance the multi-index over {1..n}^k
            std::size_t pos = 0;
            while (pos < assign.size()) {
                if (++assign[pos] <= pt.n_val)
                    break;
                assign[pos] = 1;
                ++pos;
            }
            if (pos == assign.size())
                break;
            if (assign.empty())
                break;
        }

        Gaussian total = coeff * sum;
        if (total.is_zero())
            continue;
        if (pt.has_exp_values())
            result.add(Rational(0), total * pt.exp_value(weight));
        else
            result.add(weight, total);
    }
    return result;
}

// --- random constrained points ----------------------------------------------

namespace oracle_detail {

inline Word key_to_word(const JetKey& k) {
    Word w;
    for (int j : k.hol)
        w.push_back(Index::hol(j));
    for (int j : k.anti)
        w.push_back(Index::antihol(j));
    for (int t = 0; t < k.t0; ++t)
        w.push_back(Index::t0());
    return w;
}

inline Word conj_word(const JetKey& k) {
    Word w;
    for (int j : k.hol)
        w.push_back(Index::antihol(j));
    for (int j : k.anti)
        w.push_back(Index::hol(j));
    for (int t = 0; t < k.t0; ++t)
        w.push_back(Index::t0());
    return w;
}

// correction sum C with value(conj word of K) = V(swap K) + C
inline Gaussian conj_correction(const JetKey& k, const JetPoint& pt) {
    std::map<JetKey, Gaussian> expansion;
    expand_word(conj_word(k), Gaussian(1), expansion);
    JetKey lead = k.swapped();
    Gaussian c;
    for (const auto& [key, cf] : expansion) {
        if (key == lead) {
            if (!(cf == Gaussian(1)))
                throw invariant_error("conj expansion: leading coefficient not 1");
            continue;
        }
        c += cf * pt.value(key);
    }
    return c;
}

inline void enumerate_keys(int n, std::size_t length, std::vector<JetKey>& out) {
    // all (hol multiset, anti multiset, t) with |hol|+|anti|+t = length
    std::vector<std::vector<std::vector<int>>> msets(length + 1);
    for (std::size_t sz = 0; sz <= length; ++sz) {
        std::vector<int> cur;
        // nondecreasing sequences of the given size over 1..n
        std::function<void(int)> gen = [&](int lo) {
            if (cur.size() == sz) {
                msets[sz].push_back(cur);
                return;
            }
            for (int v = lo; v <= n; ++v) {
                cur.push_back(v);
                gen(v);
                cur.pop_back();
            }
        };
        gen(1);
    }
    for (std::size_t h = 0; h <= length; ++h)
        for (std::size_t a = 0; a + h <= length; ++a) {
            int t = static_cast<int>(length - h - a);
            for (const auto& hm : msets[h])
                for (const auto& am : msets[a])
                    out.push_back(JetKey{hm, am, t});
        }
}

inline Expression g_derivative_cached(const Word& w, const BuilderContext& ctx) {
    return jet_derivative_of_g(w, ctx);
}

}  // namespace oracle_detail

// Draws a random rational jet point for dimension n_val with all reality
// constraints built in; with constrain_pde, the Hessian-trace relations
// f_{aa'} = -n g and their first derivatives hold exactly at the point.
inline JetPoint random_jet_point(Rng& rng, int n_val, bool constrain_pde,
                                 const Rational& p_val = Rational(-1),
                                 const BuilderContext& ctx = default_builders()) {
    using namespace oracle_detail;
    JetPoint pt;
    pt.n_val = n_val;
    pt.pde_constrained = constrain_pde;
    pt.p_built_with = p_val;
    if (constrain_pde) {
        long long d;
        if (!p_val.den_big().fits_i64(d))
            throw eval_error("p denominator too large");
        pt.exp_denom = d;
        // small positive base keeps powers cheap and exact
        pt.exp_base = Rational(1 + static_cast<long long>(rng.below(3)),
                               1 + static_cast<long long>(rng.below(2)));
        if (*pt.exp_base == Rational(1))
            pt.exp_base = Rational(3, 2);
    }

    Gaussian half(Rational(1, 2));
    for (std::size_t length = 1; length <= 3; ++length) {
        std::vector<JetKey> keys;
        enumerate_keys(n_val, length, keys);
        std::sort(keys.begin(), keys.end());
        for (const JetKey& k : keys) {
            JetKey partner = k.swapped();
            if (partner < k)
                continue;  // derived together with its partner
            if (partner == k) {
                Gaussian c = conj_correction(k, pt);
                Gaussian imag_part = Gaussian::i() * c * half;
                if (!imag_part.is_real())
                    throw invariant_error("self-conjugate coordinate with non-real constraint");
                pt.vals[k] = Gaussian(rng.rational(3, 2), imag_part.re);
            } else {
                pt.vals[k] = rng.gaussian(3, 2);
                pt.vals[partner] = pt.vals[k].conj() - conj_correction(k, pt);
            }
        }

        if (!constrain_pde)
            continue;

        // enforce the trace relations available at this length
        auto solve_diagonal = [&](int t_slots, const Gaussian& target) {
            // sum over a of V({a},{a},t) = target; adjust the real part of
            // the a = n coordinate (imaginary parts are already forced)
            JetKey designated{{n_val}, {n_val}, t_slots};
            Gaussian sum;
            for (int a = 1; a <= n_val; ++a)
                sum += pt.vals.at(JetKey{{a}, {a}, t_slots});
            if (!(sum.im == target.im))
                throw invariant_error("pde trace: imaginary parts inconsistent");
            pt.vals.at(designated).re += target.re - sum.re;
        };

        if (length == 2) {
            Gaussian vg = evaluate(ctx.g(), pt, p_val).scalar();
            solve_diagonal(0, Gaussian(-Rational(n_val)) * vg);
        } else if (length == 3) {
            Gaussian vg0 =
                evaluate(g_derivative_cached({Index::t0()}, ctx), pt, p_val).scalar();
            solve_diagonal(1, Gaussian(-Rational(n_val)) * vg0);

            Expression gk_expr = g_derivative_cached({Index::hol(1)}, ctx);
            for (int k = 1; k <= n_val; ++k) {
                Gaussian vgk = evaluate(gk_expr, pt, p_val, Rational(0), {{1, k}}).scalar();
                Gaussian target = Gaussian(-Rational(n_val)) * vgk;
                std::vector<int> hk{n_val, k};
                std::sort(hk.begin(), hk.end());
                JetKey designated{hk, {n_val}, 0};
                Gaussian& slot = pt.vals.at(designated);
                slot = Gaussian();
                Gaussian sum;
                for (int a = 1; a <= n_val; ++a)
                    sum += word_value({Index::hol(a), Index::antihol(a), Index::hol(k)}, pt);
                slot = target - sum;
                // restore reality for the partner coordinate via
                // V(swap K) = conj(V(K)) - C(K)
                JetKey partner = designated.swapped();
                if (!(partner == designated))
                    pt.vals.at(partner) = slot.conj() - conj_correction(designated, pt);
            }
        }
    }
    return pt;
}

// Check every trace relation the constrained generator promises; used by the
// generator's own tests and as a guard in the acceptance suite.
inline bool pde_point_consistent(const JetPoint& pt, const Rational& p_val,
                                 const BuilderContext& ctx = default_builders()) {
    using namespace oracle_detail;
    int n = pt.n_val;
    auto gd = [&](const Word& w) { return jet_derivative_of_g(w, ctx); };
    // f_{aa'} = -n g
    {
        Gaussian sum;
        for (int a = 1; a <= n; ++a)
            sum += word_value({Index::hol(a), Index::antihol(a)}, pt);
        if (!(sum == Gaussian(-Rational(n)) * evaluate(ctx.g(), pt, p_val).scalar()))
            return false;
    }
    // f_{aa' xi} = -n g_xi for xi in {0, z_k, zbar_k}
    {
        Gaussian sum;
        for (int a = 1; a <= n; ++a)
            sum += word_value({Index::hol(a), Index::antihol(a), Index::t0()}, pt);
        if (!(sum == Gaussian(-Rational(n)) * evaluate(gd({Index::t0()}), pt, p_val).scalar()))
            return false;
    }
    for (int k = 1; k <= n; ++k) {
        Gaussian sum;
        for (int a = 1; a <= n; ++a)
            sum += word_value({Index::hol(a), Index::antihol(a), Index::hol(k)}, pt);
        if (!(sum == Gaussian(-Rational(n)) *
                         evaluate(gd({Index::hol(1)}), pt, p_val, Rational(0), {{1, k}}).scalar()))
            return false;
        Gaussian sum2;
        for (int a = 1; a <= n; ++a)
            sum2 += word_value({Index::hol(a), Index::antihol(a), Index::antihol(k)}, pt);
        if (!(sum2 == Gaussian(-Rational(n)) * evaluate(gd({Index::antihol(1)}), pt, p_val,
                                                        Rational(0), {{1, k}})
                          .scalar()))
            return false;
    }
    return true;
}

// Evaluates LHS - RHS at a point over every binding of the free indices;
// exact zero on success.
inline bool oracle_residual_zero(const Expression& lhs, const Expression& rhs, const JetPoint& pt,
                                 const Rational& p_val, const Rational& s_val = Rational(0)) {
    auto sig = lhs.is_zero() ? rhs.signature() : lhs.signature();
    std::vector<int> labels;
    for (const Index& ix : sig)
        labels.push_back(ix.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::vector<int> assign(labels.size(), 1);
    for (;;) {
        std::map<int, int> binding;
        for (std::size_t i = 0; i < labels.size(); ++i)
            binding[labels[i]] = assign[i];
        ExpValue l = evaluate(lhs, pt, p_val, s_val, binding);
        ExpValue r = evaluate(rhs, pt, p_val, s_val, binding);
        if (!(l - r).is_zero())
            return false;
        std::size_t pos = 0;
        while (pos < assign.size()) {
            if (++assign[pos] <= pt.n_val)
                break;
            assign[pos] = 1;
            ++pos;
        }
        if (pos == assign.size())
            break;
        if (assign.empty())
            break;
    }
    return true;
}

}  // namespace crjet
