// Acceptance suite: one criterion per block, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <iostream>
#include <set>
#include <sstream>

#include "crjet/identities.hpp"
#include "crjet/oracle.hpp"
#include "crjet/sos.hpp"
#include "crjet/yamabe_transform.hpp"
#include "test_support.hpp"

using namespace crjet;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " — " << detail
              << "\n"
              << std::flush;
    if (!pass)
        ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<IdentityCase> full_case_list(const BuilderContext& ctx) {
    auto cases = load_catalog(ctx);
    for (auto& c : sos::chain_cases(ctx))
        cases.push_back(std::move(c));
    return cases;
}

// ---- criterion 1: flagship identity ---------------------------------------

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    auto cases = load_catalog();
    const IdentityCase* flagship = nullptr;
    for (const auto& c : cases)
        if (c.id == "eq2.7")
            flagship = &c;
    if (!flagship) {
        report(1, false, "eq2.7 missing from catalog");
        return;
    }
    VerificationReport rep = verify(*flagship);
    double secs = seconds_since(t0);
    std::ostringstream os;
    os << "eq2.7 symbolic residual " << rep.residual_terms << " with n, p indeterminate ("
       << rep.lhs_terms << " lhs / " << rep.rhs_terms << " rhs monomials, " << secs
       << " s, budget 60 s)";
    report(1, rep.pass && rep.residual_terms == 0 && secs < 60.0, os.str());
}

// ---- criterion 2: full chain + mutation isolation ---------------------------

const std::set<std::string> kMutationFails[3] = {
    // D2 sign flip
    {"def-D1", "eq2.5", "eq2.6", "eq2.13-step1", "eq2.13-step2", "eq2.13", "eq2.14-step2",
     "eq2.14", "eq2.15", "eq2.16", "eq2.18", "eq2.7"},
    // E2 delta sign flip
    {"def-E1", "def-E2-traceless", "def-E2-via-trace", "fE-symmetry", "eq2.5", "eq2.6",
     "eq2.10-step1", "eq2.10-step4", "eq2.10", "eq2.13-step2", "eq2.13", "eq2.11-step2",
     "eq2.11", "eq2.14-step2", "eq2.14", "eq2.15", "eq2.16", "eq2.18", "eq2.7"},
    // G1 sign flip
    {"def-G1", "eq2.6", "eq2.8-step1", "eq2.8", "eq2.12-step3", "eq2.12", "eq2.13-step2",
     "eq2.13", "eq2.9-step2", "eq2.9", "eq2.11-step2", "eq2.11", "eq2.14-step2", "eq2.14",
     "eq2.16", "eq2.17", "eq2.18", "eq2.7", "eq3--17"},
};

void criterion2() {
    // (a) the whole chain verifies
    auto cases = full_case_list(default_builders());
    std::vector<std::string> broken;
    std::set<std::string> present;
    for (const auto& c : cases) {
        present.insert(c.id);
        VerificationReport rep = verify(c, 200000);
        if (!rep.pass)
            broken.push_back(c.id);
    }
    for (const char* required :
         {"eq2.5", "eq2.6", "eq2.8", "eq2.9", "eq2.10", "eq2.11", "eq2.12", "eq2.13", "eq2.14",
          "eq2.15", "eq2.16", "eq2.17", "eq2.18", "eq3--17", "eq3-21-pointwise"})
        if (!present.count(required))
            broken.push_back(std::string("missing:") + required);

    // (b) each injected sign flip breaks exactly the affected cases
    Mutation muts[3] = {Mutation::D2Sign, Mutation::E2DeltaSign, Mutation::G1Sign};
    std::string mutation_note;
    bool mutations_ok = true;
    for (int mi = 0; mi < 3; ++mi) {
        BuilderContext ctx(muts[mi]);
        auto mutated = full_case_list(ctx);
        std::set<std::string> failed;
        for (const auto& c : mutated) {
            VerificationReport rep = verify(c, 200000, ctx);
            if (!rep.pass)
                failed.insert(c.id);
        }
        if (failed != kMutationFails[mi]) {
            mutations_ok = false;
            mutation_note += " mutation " + std::to_string(mi + 1) + " failure set mismatch;";
        }
        if (failed.empty())
            mutations_ok = false;
    }
    // a case independent of every mutated builder must never break
    for (int mi = 0; mi < 3; ++mi)
        if (kMutationFails[mi].count("eq2.3") || kMutationFails[mi].count("eq3-21-pointwise"))
            mutations_ok = false;

    std::ostringstream os;
    os << cases.size() << " chain cases, " << broken.size()
       << " symbolic failure(s); 3 sign-flip mutations break exactly their dependents ("
       << kMutationFails[0].size() << "/" << kMutationFails[1].size() << "/"
       << kMutationFails[2].size() << " cases)" << mutation_note;
    report(2, broken.empty() && mutations_ok, os.str());
}

// ---- criterion 3: Jerison-Lee specialization at p = 0 -----------------------

void criterion3() {
    bool ok = true;
    std::string note;
    sos::Builders b{default_builders()};
    Expression rhs = normalize(b.rhs27());
    Expression at0 = rhs.at_p_zero();
    for (const Monomial& m : at0.monomials())
        if (!m.coeff.free_of_p() || m.coeff.divisible_by_p() || !m.exp.c.is_zero())
            ok = false;
    if (!(at0.size() < rhs.size()))
        ok = false;
    if (!b.tails().at_p_zero().is_zero() || b.tails().is_zero())
        ok = false;

    BuilderContext ctx0;
    ctx0.p_zero = true;
    auto cases = load_catalog(ctx0);
    std::size_t tail_drop = 0;
    for (const auto& c : cases) {
        if (c.id != "eq2.7")
            continue;
        IdentityCase jl = c;
        jl.lhs = c.lhs.at_p_zero();
        jl.rhs = c.rhs.at_p_zero();
        VerificationReport rep = verify(jl, 200000, ctx0);
        ok = ok && rep.pass;
        tail_drop = c.rhs.size() - jl.rhs.size();
    }
    std::ostringstream os;
    os << "p=0 specialization: no p-carrying coefficient remains, the four p-tails vanish "
          "identically, eq2.7 still verifies ("
       << tail_drop << " tail monomials dropped)";
    report(3, ok, os.str());
}

// ---- criterion 4: sum-of-squares chain --------------------------------------

void criterion4() {
    auto reports = sos::verify_sos_chain();
    std::set<std::string> required = {"sos-m33-equals-rhs27", "sos-m33a-equals-m33",
                                      "sos-m33b-equals-m33a", "sos-m33c-at-s0"};
    bool ok = true;
    for (const auto& r : reports) {
        if (!r.pass)
            ok = false;
        required.erase(r.id);
    }
    ok = ok && required.empty();
    report(4, ok,
           "RHS(2.7)=M(3-3) in (n,p,s); M(3-3)=M(3-3a)=M(3-3b) cleared by (1-s); "
           "M(3-3b)|_{s=s0}=M(3-3c) cleared by (4n)^2 and 4n(2n-p); all residuals zero");
}

// ---- criterion 5: coefficient positivity ------------------------------------

void criterion5() {
    auto rep = sos::check_positivity(100, 199);
    bool boundary_ok = true;
    using C = sos::SosCoefficients;
    Rational eps(1, 10), prev;
    bool first = true;
    for (int k = 0; k < 6; ++k) {
        Rational c3 = C::c3(1, Rational(-2) + eps);
        if (c3.sign() <= 0 || c3 >= eps || (!first && c3 >= prev))
            boundary_ok = false;
        prev = c3;
        first = false;
        eps = eps / Rational(10);
    }
    std::ostringstream os;
    os << "s0 in (0,1) and c1..c4 > 0 on " << rep.grid_points
       << " exact grid points (n<=100, 199 p-samples); certificate over {1,n-1,(n-1)^2,2+p,-p} "
          "ok; c3(1, -2+eps) -> 0+ linearly, pinning the open-interval hypothesis";
    report(5, rep.pass && boundary_ok, os.str());
}

// ---- criterion 6: oracle agreement -------------------------------------------

void criterion6() {
    auto cases = full_case_list(default_builders());
    Rng rng(20260808);
    std::size_t points_run = 0, disagreements = 0;
    std::string first_bad;
    for (const auto& c : cases) {
        bool symbolic_pass = verify(c, 200000).pass;
        bool is_sos = c.id.rfind("sos", 0) == 0;
        for (int n_val : {1, 2}) {
            for (int k = 0; k < 100; ++k) {
                long long den = 4 + static_cast<long long>(rng.below(5));
                Rational p(-(1 + static_cast<long long>(
                                 rng.below(static_cast<std::uint64_t>(2 * den - 1)))),
                           den);
                Rational s(1 + static_cast<long long>(rng.below(9)), 10);
                JetPoint pt = random_jet_point(rng, n_val, c.requires_pde, p);
                bool numeric_zero =
                    oracle_residual_zero(c.lhs, c.rhs, pt, p, is_sos ? s : Rational(0));
                ++points_run;
                if (numeric_zero != symbolic_pass) {
                    ++disagreements;
                    if (first_bad.empty())
                        first_bad = c.id;
                }
            }
        }
    }
    std::ostringstream os;
    os << points_run << " exact oracle evaluations across " << cases.size()
       << " cases at n in {1,2}, 100 seeded rational jet points each; " << disagreements
       << " disagreement(s) with the symbolic verdict";
    if (!first_bad.empty())
        os << " (first: " << first_bad << ")";
    report(6, disagreements == 0, os.str());
}

// ---- criterion 7: calculus soundness on the group ----------------------------

HFunc random_real_polynomial(Rng& rng, int n) {
    HFunc f(n);
    int terms = 2 + static_cast<int>(rng.below(3));
    for (int t = 0; t < terms; ++t) {
        HKey k;
        k.za.assign(static_cast<std::size_t>(n), 0);
        k.zb = k.za;
        for (int d = 0; d < 3; ++d) {
            int which = static_cast<int>(rng.below(3));
            std::size_t a = rng.below(static_cast<std::uint64_t>(n));
            if (which == 0)
                k.za[a] += 1;
            else if (which == 1)
                k.zb[a] += 1;
            else
                k.m += 1;
        }
        Gaussian c = rng.gaussian(3, 2);
        f.add(k, c);
        HKey kc = k;
        std::swap(kc.za, kc.zb);
        f.add(kc, c.conj());
    }
    return f;
}

void criterion7() {
    Rng rng(777001);
    std::size_t checks = 0, bad = 0;
    for (int n : {1, 2}) {
        for (int fi = 0; fi < 20; ++fi) {
            HFunc fn = random_real_polynomial(rng, n);
            HPoint pt = random_h_point(rng, n);
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    Gaussian lhs = z_apply(fn, {Index::hol(a), Index::antihol(b)}, pt) -
                                   z_apply(fn, {Index::antihol(b), Index::hol(a)}, pt);
                    Gaussian corr = (a == b) ? Gaussian(Rational(0), Rational(2)) *
                                                   z_apply(fn, {Index::t0()}, pt)
                                             : Gaussian();
                    ++checks;
                    if (!(lhs == corr))
                        ++bad;
                    ++checks;
                    if (!(z_apply(fn, {Index::hol(a), Index::hol(b)}, pt) ==
                          z_apply(fn, {Index::hol(b), Index::hol(a)}, pt)))
                        ++bad;
                }
            for (int a = 1; a <= n; ++a) {
                ++checks;
                if (!(z_apply(fn, {Index::t0(), Index::hol(a)}, pt) ==
                      z_apply(fn, {Index::hol(a), Index::t0()}, pt)))
                    ++bad;
            }
        }
    }
    std::ostringstream os;
    os << "commutation rules hold under exact differentiation of 20 random polynomials on "
          "each of H^1, H^2: "
       << checks << " checks, " << bad << " nonzero residual(s)";
    report(7, bad == 0, os.str());
}

// ---- criterion 8: the explicit solution family -------------------------------

void criterion8() {
    bool ok = true;
    std::ostringstream os;
    int families = 0;
    for (int n : {1, 2}) {
        std::vector<YamabeParams> choices;
        YamabeParams a;
        a.lambda = Gaussian(Rational(0), Rational(1));
        a.mu.assign(static_cast<std::size_t>(n), Gaussian());
        choices.push_back(a);
        YamabeParams b = a;
        b.lambda = Gaussian(Rational(1, 2), Rational(3));
        b.mu[0] = Gaussian(Rational(1), Rational(-1, 2));
        choices.push_back(b);
        YamabeParams c = a;
        c.lambda = Gaussian(Rational(-2), Rational(5, 2));
        c.mu[static_cast<std::size_t>(n - 1)] = Gaussian(Rational(0), Rational(1));
        choices.push_back(c);
        for (const auto& params : choices) {
            if (!params.admissible()) {
                ok = false;
                continue;
            }
            YamabeReport rep = check_yamabe_solves(params, n, 50, 4451 + families);
            bool transform = yamabe_transform_consistent(params, n, 10, 991 + families);
            ok = ok && rep.pass && rep.ratio_constant && rep.ratio.sign() > 0 &&
                 rep.C_solved > 0 && rep.max_rel_dev <= 1e-10 && transform;
            ++families;
        }
    }
    os << families
       << " admissible (lambda, mu) families over n in {1,2}: ratio -lap(u)/u^{q*} exactly "
          "constant across 50 points, C > 0 solves it to 2n^2 within 1e-10, and the "
          "transformed equation holds exactly on induced jets";
    report(8, ok && families >= 6, os.str());
}

// ---- criterion 9: parser round-trip and fuzzing -------------------------------

void criterion9() {
    Rng rng(4242);
    crjet::testing::GenOptions opt;
    opt.max_dummies = 3;
    opt.max_monomials = 3;
    int failures_rt = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        Expression e = crjet::testing::random_expression(rng, opt);
        try {
            Expression back = parse(print(e));
            if (!normalize(back - e).is_zero())
                ++failures_rt;
        } catch (const parse_error&) {
            ++failures_rt;
        }
    }
    std::size_t crashes = 0, fuzzed = 0;
    const std::string charset = "fgDEGZIconjRep()[]'*+-/^=0123456789abcxyz ,.";
    for (int iter = 0; iter < 3000; ++iter) {
        std::string s;
        std::size_t len = 1 + rng.below(48);
        for (std::size_t i = 0; i < len; ++i)
            s += charset[rng.below(charset.size())];
        ++fuzzed;
        try {
            parse(s);
        } catch (const parse_error&) {
        } catch (...) {
            ++crashes;
        }
    }
    std::ostringstream os;
    os << "1000 seeded expressions survive parse.print.parse with zero normalized residual ("
       << failures_rt << " failure(s)); " << fuzzed << " fuzz inputs, " << crashes
       << " unexpected exception(s)";
    report(9, failures_rt == 0 && crashes == 0, os.str());
}

}  // namespace

int main() {
    std::cout << "acceptance suite: generalized divergence identity engine\n";
    auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << " ("
              << seconds_since(t0) << " s total)\n";
    return failures;
}
