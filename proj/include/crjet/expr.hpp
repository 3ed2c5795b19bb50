#pragma once

// Abstract-index jet expressions.
//
// A Monomial is  coeff * e^{(a+bn+cp) f} * (product of jet factors) * (deltas),
// where each jet factor is a word of derivative indices applied to the scalar
// f (word order = order of application, so f[a,b'] means Z_{b'} Z_a f).
// A label appearing twice in a monomial, once holomorphic and once
// antiholomorphic, is a contracted (dummy) pair; a label appearing once is
// free. Deltas that touch a dummy label are eliminated eagerly at
// construction: a contraction renames, a full trace contributes a factor n.
// Only deltas joining two free indices survive into stored form.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crjet/coeff_poly.hpp"
#include "crjet/rational.hpp"

namespace crjet {

class signature_error : public std::runtime_error {
  public:
    explicit signature_error(const std::string& w) : std::runtime_error(w) {}
};
class invariant_error : public std::logic_error {
  public:
    explicit invariant_error(const std::string& w) : std::logic_error(w) {}
};

enum class Kind : unsigned char { Hol = 0, AntiHol = 1, T0 = 2 };
enum class Status : unsigned char { Free = 0, Dummy = 1 };

struct Index {
    Kind kind = Kind::T0;
    Status status = Status::Free;
    int label = 0;  // unused for T0

    Index() = default;
    Index(Kind k, int l, Status st = Status::Free) : kind(k), status(st), label(l) {}

    static Index hol(int l) { return Index(Kind::Hol, l); }
    static Index antihol(int l) { return Index(Kind::AntiHol, l); }
    static Index t0() { return Index(Kind::T0, 0); }

    bool is_t0() const { return kind == Kind::T0; }
    Index conj() const {
        if (kind == Kind::T0)
            return *this;
        return Index(kind == Kind::Hol ? Kind::AntiHol : Kind::Hol, label, status);
    }

    friend bool operator==(const Index& a, const Index& b) {
        return a.kind == b.kind && a.label == b.label;
    }
    friend bool operator!=(const Index& a, const Index& b) { return !(a == b); }
    friend bool operator<(const Index& a, const Index& b) {
        if (a.kind != b.kind)
            return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        return a.label < b.label;
    }

    std::string to_string() const {
        if (kind == Kind::T0)
            return "0";
        std::string s;
        if (label >= 1 && label <= 26)
            s = std::string(1, static_cast<char>('a' + label - 1));
        else
            s = "i" + std::to_string(label);
        if (kind == Kind::AntiHol)
            s += "'";
        return s;
    }
};

using Word = std::vector<Index>;

inline std::string word_to_string(const Word& w) {
    std::string s = "f[";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += ",";
        s += w[i].to_string();
    }
    return s + "]";
}

struct Delta {
    Index hol, antihol;

    Delta() = default;
    Delta(Index h, Index a) : hol(h), antihol(a) {}

    Delta conj() const {
        // delta is real and symmetric: conj(delta_{a b'}) = delta_{b a'}
        return Delta(Index(Kind::Hol, antihol.label, antihol.status),
                     Index(Kind::AntiHol, hol.label, hol.status));
    }

    friend bool operator==(const Delta& a, const Delta& b) {
        return a.hol == b.hol && a.antihol == b.antihol;
    }
    friend bool operator<(const Delta& a, const Delta& b) {
        if (!(a.hol == b.hol))
            return a.hol < b.hol;
        return a.antihol < b.antihol;
    }
};

// e^{(a + b n + c p) f}
struct ExpFactor {
    Rational a, b, c;

    ExpFactor() = default;
    ExpFactor(Rational a_, Rational b_, Rational c_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)) {}

    bool is_identity() const { return a.is_zero() && b.is_zero() && c.is_zero(); }
    CoeffPoly weight_poly() const { return CoeffPoly::linear(a, b, c); }
    ExpFactor at_p_zero() const { return ExpFactor(a, b, Rational(0)); }

    friend ExpFactor operator+(const ExpFactor& x, const ExpFactor& y) {
        return ExpFactor(x.a + y.a, x.b + y.b, x.c + y.c);
    }
    friend bool operator==(const ExpFactor& x, const ExpFactor& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
    friend bool operator!=(const ExpFactor& x, const ExpFactor& y) { return !(x == y); }
    friend bool operator<(const ExpFactor& x, const ExpFactor& y) {
        if (x.a != y.a)
            return x.a < y.a;
        if (x.b != y.b)
            return x.b < y.b;
        return x.c < y.c;
    }
};

struct Monomial {
    CoeffPoly coeff;
    ExpFactor exp;
    std::vector<Word> factors;
    std::vector<Delta> deltas;

    bool is_scalar_shape() const { return factors.empty() && deltas.empty(); }
};

namespace detail {

struct Occurrence {
    enum Where { InWord, DeltaHol, DeltaAntihol } where;
    std::size_t outer;  // factor index or delta index
    std::size_t pos;    // position in word (unused for deltas)
    Kind kind;
};

inline void collect_occurrences(const Monomial& m, std::map<int, std::vector<Occurrence>>& occ) {
    occ.clear();
    for (std::size_t fi = 0; fi < m.factors.size(); ++fi)
        for (std::size_t pi = 0; pi < m.factors[fi].size(); ++pi) {
            const Index& ix = m.factors[fi][pi];
            if (!ix.is_t0())
                occ[ix.label].push_back({Occurrence::InWord, fi, pi, ix.kind});
        }
    for (std::size_t di = 0; di < m.deltas.size(); ++di) {
        occ[m.deltas[di].hol.label].push_back({Occurrence::DeltaHol, di, 0, Kind::Hol});
        occ[m.deltas[di].antihol.label].push_back({Occurrence::DeltaAntihol, di, 0, Kind::AntiHol});
    }
}

inline Index& index_at(Monomial& m, const Occurrence& o) {
    switch (o.where) {
        case Occurrence::InWord:
            return m.factors[o.outer][o.pos];
        case Occurrence::DeltaHol:
            return m.deltas[o.outer].hol;
        default:
            return m.deltas[o.outer].antihol;
    }
}

// Validates index bookkeeping and infers Free/Dummy statuses.
inline void infer_statuses(Monomial& m) {
    std::map<int, std::vector<Occurrence>> occ;
    collect_occurrences(m, occ);
    for (auto& [label, v] : occ) {
        if (v.size() == 1) {
            index_at(m, v[0]).status = Status::Free;
        } else if (v.size() == 2 && v[0].kind != v[1].kind) {
            index_at(m, v[0]).status = Status::Dummy;
            index_at(m, v[1]).status = Status::Dummy;
        } else {
            throw invariant_error("index label '" + Index(Kind::Hol, label).to_string() +
                                  "' occurs " + std::to_string(v.size()) +
                                  " time(s) with incompatible kinds");
        }
    }
    for (auto& w : m.factors)
        if (w.empty())
            throw invariant_error("empty jet factor word");
}

// Eliminates every delta that touches a dummy label. Returns false if the
// monomial vanished (cannot happen here, kept for symmetry).
inline void eliminate_deltas(Monomial& m) {
    bool changed = true;
    while (changed) {
        changed = false;
        infer_statuses(m);
        for (std::size_t di = 0; di < m.deltas.size(); ++di) {
            Delta& d = m.deltas[di];
            if (d.hol.label == d.antihol.label) {
                // full trace delta_{a a'}: contributes dimension factor n
                m.coeff *= CoeffPoly::n();
                m.deltas.erase(m.deltas.begin() + static_cast<std::ptrdiff_t>(di));
                changed = true;
                break;
            }
            std::map<int, std::vector<Occurrence>> occ;
            collect_occurrences(m, occ);
            auto contract = [&](int dummy_label, Kind partner_kind, const Index& transfer) {
                for (const Occurrence& o : occ[dummy_label]) {
                    bool is_self = (o.where != Occurrence::InWord) && o.outer == di;
                    if (!is_self && o.kind == partner_kind) {
                        Index& target = index_at(m, o);
                        target.label = transfer.label;
                        target.status = transfer.status;
                        return true;
                    }
                }
                return false;
            };
            if (d.hol.status == Status::Dummy) {
                if (contract(d.hol.label, Kind::AntiHol, d.antihol)) {
                    m.deltas.erase(m.deltas.begin() + static_cast<std::ptrdiff_t>(di));
                    changed = true;
                    break;
                }
            } else if (d.antihol.status == Status::Dummy) {
                if (contract(d.antihol.label, Kind::Hol, d.hol)) {
                    m.deltas.erase(m.deltas.begin() + static_cast<std::ptrdiff_t>(di));
                    changed = true;
                    break;
                }
            }
        }
    }
    infer_statuses(m);
}

inline void free_and_dummy_labels(const Monomial& m, std::set<int>& frees, std::set<int>& dummies) {
    frees.clear();
    dummies.clear();
    auto note = [&](const Index& ix) {
        if (ix.is_t0())
            return;
        (ix.status == Status::Free ? frees : dummies).insert(ix.label);
    };
    for (const auto& w : m.factors)
        for (const auto& ix : w)
            note(ix);
    for (const auto& d : m.deltas) {
        note(d.hol);
        note(d.antihol);
    }
}

inline void relabel_dummies(Monomial& m, const std::map<int, int>& remap) {
    auto apply = [&](Index& ix) {
        if (ix.is_t0() || ix.status != Status::Dummy)
            return;
        auto it = remap.find(ix.label);
        if (it != remap.end())
            ix.label = it->second;
    };
    for (auto& w : m.factors)
        for (auto& ix : w)
            apply(ix);
    for (auto& d : m.deltas) {
        apply(d.hol);
        apply(d.antihol);
    }
}

struct WordLess {
    bool operator()(const Word& a, const Word& b) const {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

inline int kind_rank(Kind k) { return static_cast<int>(k); }

inline void sort_within_kind_runs(Word& w) {
    std::size_t i = 0;
    while (i < w.size()) {
        std::size_t j = i;
        while (j < w.size() && w[j].kind == w[i].kind)
            ++j;
        std::sort(w.begin() + static_cast<std::ptrdiff_t>(i),
                  w.begin() + static_cast<std::ptrdiff_t>(j),
                  [](const Index& x, const Index& y) { return x.label < y.label; });
        i = j;
    }
}

}  // namespace detail

// Structural key used for merging monomials inside an Expression: everything
// except the coefficient. Total order: exponential weight, factor count,
// lexicographic word list, deltas.
struct MonKey {
    ExpFactor exp;
    std::vector<Word> factors;
    std::vector<Delta> deltas;

    friend bool operator<(const MonKey& a, const MonKey& b) {
        if (a.exp != b.exp)
            return a.exp < b.exp;
        if (a.factors.size() != b.factors.size())
            return a.factors.size() < b.factors.size();
        if (a.factors != b.factors)
            return std::lexicographical_compare(a.factors.begin(), a.factors.end(),
                                                b.factors.begin(), b.factors.end(),
                                                detail::WordLess{});
        return a.deltas < b.deltas;
    }
    friend bool operator==(const MonKey& a, const MonKey& b) {
        return a.exp == b.exp && a.factors == b.factors && a.deltas == b.deltas;
    }
};

// Renames the dummy labels of a finalized monomial to the lexicographically
// minimal assignment (targets are the smallest positive integers unused by
// free labels), sorts the factor multiset and the deltas. When
// resort_within_kind is set, same-kind runs inside each word are re-sorted by
// label as well — valid only once the normalizer has put words in kind order.
inline Monomial canonicalize_monomial(Monomial m, bool resort_within_kind = false) {
    std::set<int> frees, dummies;
    detail::free_and_dummy_labels(m, frees, dummies);

    std::vector<int> targets;
    for (int cand = 1; targets.size() < dummies.size(); ++cand)
        if (!frees.count(cand))
            targets.push_back(cand);

    auto finish = [&](Monomial cand) {
        if (resort_within_kind)
            for (auto& w : cand.factors)
                detail::sort_within_kind_runs(w);
        std::sort(cand.factors.begin(), cand.factors.end(), detail::WordLess{});
        std::sort(cand.deltas.begin(), cand.deltas.end());
        return cand;
    };

    if (dummies.empty())
        return finish(std::move(m));

    std::vector<int> dummy_list(dummies.begin(), dummies.end());
    if (dummy_list.size() > 8)
        throw invariant_error("monomial with more than 8 contracted pairs");

    std::vector<int> perm = targets;
    std::optional<Monomial> best;
    std::sort(perm.begin(), perm.end());
    do {
        std::map<int, int> remap;
        for (std::size_t i = 0; i < dummy_list.size(); ++i)
            remap[dummy_list[i]] = perm[i];
        Monomial cand = m;
        detail::relabel_dummies(cand, remap);
        cand = finish(std::move(cand));
        if (!best) {
            best = std::move(cand);
        } else {
            MonKey ck{cand.exp, cand.factors, cand.deltas};
            MonKey bk{best->exp, best->factors, best->deltas};
            if (ck < bk)
                best = std::move(cand);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return *best;
}

// A finite sum of monomials over a common free-index signature, kept merged:
// no two stored monomials share a structural key, no zero coefficients.
class Expression {
  public:
    Expression() = default;

    static Expression zero() { return Expression(); }

    static Expression constant(CoeffPoly c) {
        Monomial m;
        m.coeff = std::move(c);
        return from_monomials({std::move(m)});
    }
    static Expression constant(int v) { return constant(CoeffPoly(v)); }
    static Expression constant(const Rational& v) { return constant(CoeffPoly(v)); }
    static Expression i() { return constant(CoeffPoly::i()); }
    static Expression n() { return constant(CoeffPoly::n()); }
    static Expression p() { return constant(CoeffPoly::p()); }
    static Expression s() { return constant(CoeffPoly::s()); }

    static Expression jet(Word w) {
        Monomial m;
        m.coeff = CoeffPoly(1);
        m.factors.push_back(std::move(w));
        return from_monomials({std::move(m)});
    }

    static Expression delta(int hol_label, int antihol_label) {
        Monomial m;
        m.coeff = CoeffPoly(1);
        m.deltas.emplace_back(Index::hol(hol_label), Index::antihol(antihol_label));
        return from_monomials({std::move(m)});
    }

    static Expression exp_weight(Rational a, Rational b, Rational c) {
        Monomial m;
        m.coeff = CoeffPoly(1);
        m.exp = ExpFactor(std::move(a), std::move(b), std::move(c));
        return from_monomials({std::move(m)});
    }

    // Finalizes (status inference + delta elimination), canonicalizes and
    // merges. All public construction funnels through here.
    static Expression from_monomials(std::vector<Monomial> raw, bool resort_within_kind = false) {
        std::map<MonKey, CoeffPoly> merged;
        for (auto& m : raw) {
            if (m.coeff.is_zero())
                continue;
            detail::eliminate_deltas(m);
            Monomial c = canonicalize_monomial(std::move(m), resort_within_kind);
            MonKey key{c.exp, std::move(c.factors), std::move(c.deltas)};
            auto [it, inserted] = merged.emplace(std::move(key), c.coeff);
            if (!inserted) {
                it->second += c.coeff;
                if (it->second.is_zero())
                    merged.erase(it);
            }
        }
        Expression e;
        for (auto& [key, coeff] : merged) {
            Monomial m;
            m.coeff = std::move(coeff);
            m.exp = key.exp;
            m.factors = key.factors;
            m.deltas = key.deltas;
            detail::infer_statuses(m);
            e.mons_.push_back(std::move(m));
        }
        e.check_common_signature();
        return e;
    }

    const std::vector<Monomial>& monomials() const { return mons_; }
    bool is_zero() const { return mons_.empty(); }
    std::size_t size() const { return mons_.size(); }

    // Free-index signature (empty for scalars and for the zero expression).
    std::set<Index> signature() const {
        std::set<Index> sig;
        if (mons_.empty())
            return sig;
        for (const auto& w : mons_[0].factors)
            for (const auto& ix : w)
                if (!ix.is_t0() && ix.status == Status::Free)
                    sig.insert(ix);
        for (const auto& d : mons_[0].deltas) {
            if (d.hol.status == Status::Free)
                sig.insert(d.hol);
            if (d.antihol.status == Status::Free)
                sig.insert(d.antihol);
        }
        return sig;
    }

    friend Expression operator+(const Expression& x, const Expression& y) {
        if (!x.is_zero() && !y.is_zero()) {
            auto sx = x.signature(), sy = y.signature();
            if (sx != sy)
                throw signature_error("signature mismatch in add: lhs {" + signature_names(sx) +
                                      "} vs rhs {" + signature_names(sy) + "}");
        }
        std::vector<Monomial> all = x.mons_;
        all.insert(all.end(), y.mons_.begin(), y.mons_.end());
        return from_monomials(std::move(all));
    }
    friend Expression operator-(const Expression& x) {
        std::vector<Monomial> all = x.mons_;
        for (auto& m : all)
            m.coeff = -m.coeff;
        return from_monomials(std::move(all));
    }
    friend Expression operator-(const Expression& x, const Expression& y) { return x + (-y); }

    friend Expression operator*(const Expression& x, const Expression& y) {
        std::vector<Monomial> out;
        out.reserve(x.mons_.size() * y.mons_.size());
        for (const auto& ma : x.mons_)
            for (const auto& mb : y.mons_)
                out.push_back(multiply_monomials(ma, mb));
        return from_monomials(std::move(out));
    }
    Expression& operator+=(const Expression& o) { return *this = *this + o; }
    Expression& operator-=(const Expression& o) { return *this = *this - o; }
    Expression& operator*=(const Expression& o) { return *this = *this * o; }

    friend bool operator==(const Expression& x, const Expression& y) {
        if (x.mons_.size() != y.mons_.size())
            return false;
        for (std::size_t i = 0; i < x.mons_.size(); ++i) {
            const Monomial &a = x.mons_[i], &b = y.mons_[i];
            if (!(a.coeff == b.coeff) || a.exp != b.exp || a.factors != b.factors ||
                !(a.deltas == b.deltas))
                return false;
        }
        return true;
    }
    friend bool operator!=(const Expression& x, const Expression& y) { return !(x == y); }

    Expression conj() const {
        std::vector<Monomial> out = mons_;
        for (auto& m : out) {
            m.coeff = m.coeff.conj();
            for (auto& w : m.factors)
                for (auto& ix : w)
                    ix = ix.conj();
            for (auto& d : m.deltas)
                d = d.conj();
        }
        return from_monomials(std::move(out));
    }

    Expression re_part() const {
        if (!signature().empty())
            throw signature_error("re_part: input is not a scalar, free indices {" +
                                  signature_names(signature()) + "}");
        Expression half = constant(CoeffPoly(Rational(1, 2)));
        return half * (*this + conj());
    }

    Expression at_p_zero() const {
        std::vector<Monomial> out = mons_;
        for (auto& m : out) {
            m.coeff = m.coeff.at_p_zero();
            m.exp = m.exp.at_p_zero();
        }
        return from_monomials(std::move(out));
    }

    // den^clear_deg * (this with s := num/den); clear_deg >= global s-degree.
    Expression subst_s(const CoeffPoly& num, const CoeffPoly& den, int clear_deg) const {
        std::vector<Monomial> out = mons_;
        for (auto& m : out)
            m.coeff = m.coeff.subst_s(num, den, clear_deg);
        return from_monomials(std::move(out));
    }

    int s_degree() const {
        int d = 0;
        for (const auto& m : mons_)
            d = std::max(d, m.coeff.degree(2));
        return d;
    }

    int max_label() const {
        int ml = 0;
        for (const auto& m : mons_) {
            for (const auto& w : m.factors)
                for (const auto& ix : w)
                    if (!ix.is_t0())
                        ml = std::max(ml, ix.label);
            for (const auto& d : m.deltas)
                ml = std::max({ml, d.hol.label, d.antihol.label});
        }
        return ml;
    }

    static std::string signature_names(const std::set<Index>& sig) {
        std::string s;
        for (const auto& ix : sig) {
            if (!s.empty())
                s += ", ";
            s += ix.to_string();
        }
        return s;
    }

  private:
    std::vector<Monomial> mons_;

    static Monomial multiply_monomials(const Monomial& a, const Monomial& b) {
        // refresh the contracted labels of both sides into disjoint fresh
        // ranges so only intended free-label contractions join them
        int base = 0;
        auto scan = [&base](const Monomial& m) {
            for (const auto& w : m.factors)
                for (const auto& ix : w)
                    if (!ix.is_t0())
                        base = std::max(base, ix.label);
            for (const auto& d : m.deltas)
                base = std::max({base, d.hol.label, d.antihol.label});
        };
        scan(a);
        scan(b);

        Monomial ra = a, rb = b;
        int next = base + 1;
        auto refresh = [&next](Monomial& m) {
            std::set<int> frees, dummies;
            detail::free_and_dummy_labels(m, frees, dummies);
            std::map<int, int> remap;
            for (int d : dummies)
                remap[d] = next++;
            detail::relabel_dummies(m, remap);
        };
        refresh(ra);
        refresh(rb);

        Monomial out;
        out.coeff = ra.coeff * rb.coeff;
        out.exp = ra.exp + rb.exp;
        out.factors = std::move(ra.factors);
        out.factors.insert(out.factors.end(), rb.factors.begin(), rb.factors.end());
        out.deltas = std::move(ra.deltas);
        out.deltas.insert(out.deltas.end(), rb.deltas.begin(), rb.deltas.end());
        return out;
    }

    void check_common_signature() const {
        if (mons_.size() < 2)
            return;
        auto sig_of = [](const Monomial& m) {
            std::set<Index> sig;
            for (const auto& w : m.factors)
                for (const auto& ix : w)
                    if (!ix.is_t0() && ix.status == Status::Free)
                        sig.insert(ix);
            for (const auto& d : m.deltas) {
                if (d.hol.status == Status::Free)
                    sig.insert(d.hol);
                if (d.antihol.status == Status::Free)
                    sig.insert(d.antihol);
            }
            return sig;
        };
        auto first = sig_of(mons_[0]);
        for (std::size_t i = 1; i < mons_.size(); ++i)
            if (sig_of(mons_[i]) != first)
                throw signature_error("monomials with differing free indices in one expression: {" +
                                      signature_names(first) + "} vs {" +
                                      signature_names(sig_of(mons_[i])) + "}");
    }
};

inline Expression conj(const Expression& e) { return e.conj(); }
inline Expression re_part(const Expression& e) { return e.re_part(); }

}  // namespace crjet
