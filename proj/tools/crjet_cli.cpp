// crjet: command-line front end for the jet-identity verification engine.
//
// Subcommands:
//   verify      run catalog / sum-of-squares identities, symbolically and
//               against the concrete-dimension oracle
//   normalize   canonicalize one expression, with or without the equation
//   positivity  exact grid + certificate for the SOS coefficients
//   yamabe      check the explicit extremal family solves the equation
//
// Exit status: 0 all requested checks passed, 1 a check failed, 2 usage or
// configuration error.

#include <CLI11.hpp>
#include <iostream>
#include <mutex>
#include <thread>

#include "crjet/identities.hpp"
#include "crjet/oracle.hpp"
#include "crjet/sos.hpp"
#include "crjet/yamabe_transform.hpp"

using namespace crjet;

namespace {

Gaussian parse_complex_rational(std::string s) {
    // forms: "0", "3/2", "i", "-i", "2i", "1+2i", "1/2-3/4i"
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty())
        throw std::invalid_argument("empty complex literal");
    auto parse_part = [](std::string core, bool imag) -> Gaussian {
        if (imag) {
            if (core.empty() || core.back() != 'i')
                throw std::invalid_argument("imaginary part must end in i");
            core.pop_back();
            if (core.empty() || core == "+")
                core = "1";
            else if (core == "-")
                core = "-1";
        }
        Rational r = Rational::from_string(core);
        return imag ? Gaussian(Rational(0), r) : Gaussian(r);
    };
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '/' && s[i - 1] != '+' &&
            s[i - 1] != '-')
            split = i;
    bool has_i = s.back() == 'i';
    if (split == std::string::npos)
        return parse_part(s, has_i);
    if (!has_i)
        throw std::invalid_argument("two real parts in complex literal");
    return parse_part(s.substr(0, split), false) + parse_part(s.substr(split), true);
}

struct VerifyOptions {
    std::string filter = "*";
    std::string catalog_dir = default_catalog_dir();
    std::string format = "text";
    std::vector<int> n_vals = {1, 2};
    int points = 4;
    std::uint64_t seed = 1;
    std::size_t max_terms = 200000;
    bool set_p_zero = false;
    bool no_numeric = false;
    unsigned jobs = 1;
};

Rational random_subcritical_p(Rng& rng) {
    // rational p in (-2, 0) with a small denominator
    long long den = 4 + static_cast<long long>(rng.below(5));  // 4..8
    long long num =
        1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(2 * den - 1)));
    return Rational(-num, den);
}

VerificationReport run_case(const IdentityCase& c, const VerifyOptions& opt,
                            const BuilderContext& ctx) {
    IdentityCase work = c;
    if (opt.set_p_zero) {
        work.lhs = c.lhs.at_p_zero();
        work.rhs = c.rhs.at_p_zero();
    }
    VerificationReport rep = verify(work, opt.max_terms, ctx);
    if (!opt.no_numeric && rep.pass) {
        // derive a per-case seed so the case order cannot matter
        std::uint64_t h = opt.seed;
        for (char ch : c.id)
            h = h * 1099511628211ULL + static_cast<unsigned char>(ch);
        Rng rng(h);
        bool is_sos = c.id.rfind("sos", 0) == 0;
        try {
            for (int n_val : opt.n_vals) {
                for (int k = 0; k < opt.points; ++k) {
                    Rational p = opt.set_p_zero ? Rational(0) : random_subcritical_p(rng);
                    Rational s(1 + static_cast<long long>(rng.below(9)), 10);
                    JetPoint pt = random_jet_point(rng, n_val, work.requires_pde, p, ctx);
                    ++rep.numeric_points;
                    if (!oracle_residual_zero(work.lhs, work.rhs, pt, p,
                                              is_sos ? s : Rational(0)))
                        ++rep.numeric_failures;
                }
            }
        } catch (const eval_error& e) {
            rep.pass = false;
            rep.note = std::string("oracle error: ") + e.what();
            return rep;
        }
        if (rep.numeric_failures) {
            rep.pass = false;
            rep.note = "oracle disagreement at " + std::to_string(rep.numeric_failures) +
                       " of " + std::to_string(rep.numeric_points) + " points";
        }
    }
    return rep;
}

int cmd_verify(const VerifyOptions& opt) {
    BuilderContext ctx;
    ctx.p_zero = opt.set_p_zero;
    std::vector<IdentityCase> cases;
    try {
        cases = load_catalog(ctx, opt.catalog_dir);
    } catch (const catalog_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    for (IdentityCase& c : sos::chain_cases(ctx))
        cases.push_back(std::move(c));

    std::vector<const IdentityCase*> selected;
    for (const IdentityCase& c : cases)
        if (glob_match(opt.filter, c.id))
            selected.push_back(&c);
    if (selected.empty()) {
        std::cerr << "error: no case matches filter '" << opt.filter << "'\n";
        return 2;
    }

    std::vector<VerificationReport> reports(selected.size());
    if (opt.jobs <= 1) {
        for (std::size_t i = 0; i < selected.size(); ++i)
            reports[i] = run_case(*selected[i], opt, ctx);
    } else {
        std::mutex mx;
        std::size_t next = 0;
        auto worker = [&] {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard<std::mutex> lock(mx);
                    if (next >= selected.size())
                        return;
                    i = next++;
                }
                reports[i] = run_case(*selected[i], opt, ctx);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < opt.jobs; ++j)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    // output ordered by case id regardless of completion order
    std::vector<std::size_t> order(reports.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return reports[a].id < reports[b].id; });

    std::size_t failed = 0;
    for (std::size_t i : order) {
        const auto& rep = reports[i];
        std::cout << (opt.format == "records" ? rep.record_line() : rep.text_line()) << "\n";
        failed += rep.pass ? 0 : 1;
    }
    if (opt.format != "records") {
        if (failed)
            std::cout << "FAILED " << failed << " of " << reports.size() << " case(s)\n";
        else
            std::cout << "all " << reports.size() << " case(s) passed\n";
    }
    return failed ? 1 : 0;
}

int cmd_normalize(const std::string& text, bool use_pde, bool set_p_zero,
                  std::size_t max_terms) {
    BuilderContext ctx;
    ctx.p_zero = set_p_zero;
    try {
        Expression e = parse(text, ctx);
        if (set_p_zero)
            e = e.at_p_zero();
        RewriteConfig cfg;
        cfg.use_pde = use_pde;
        cfg.max_terms = max_terms;
        cfg.builders = &ctx;
        std::cout << print(normalize(e, cfg)) << "\n";
        return 0;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const term_cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_positivity(long long n_max, int samples, const std::string& format) {
    sos::PositivityReport rep = sos::check_positivity(n_max, samples);
    if (format == "records") {
        std::cout << "positivity n_max=" << rep.n_max << " samples=" << rep.p_samples
                  << " grid=" << rep.grid_points << " failures=" << rep.failures.size()
                  << " certificate=" << (rep.certificate_ok ? "ok" : "failed")
                  << " status=" << (rep.pass ? "pass" : "fail") << "\n";
    } else {
        std::cout << "grid: n in 1.." << rep.n_max << ", " << rep.p_samples
                  << " rational p-samples in (-2,0): " << rep.grid_points << " points, "
                  << rep.failures.size() << " failure(s)\n";
        for (const auto& f : rep.failures)
            std::cout << "  n=" << f.n << " p=" << f.p.to_string() << ": " << f.what << "\n";
        std::cout << "symbolic certificate: " << (rep.certificate_ok ? "ok" : "FAILED") << "\n";
        for (const auto& note : rep.certificate_notes)
            std::cout << "  note: " << note << "\n";
        std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
    }
    return rep.pass ? 0 : 1;
}

int cmd_yamabe(int n, const std::string& lambda_s, const std::string& mu_s, std::size_t points,
               std::uint64_t seed, bool transform_check) {
    YamabeParams params;
    params.lambda = parse_complex_rational(lambda_s);
    params.mu.assign(static_cast<std::size_t>(n), Gaussian());
    if (!mu_s.empty() && mu_s != "0") {
        std::size_t start = 0, slot = 0;
        while (start < mu_s.size() && slot < params.mu.size()) {
            auto comma = mu_s.find(',', start);
            std::string piece = mu_s.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            params.mu[slot++] = parse_complex_rational(piece);
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
    }
    if (!params.admissible()) {
        std::cerr << "error: parameters violate Im(lambda) > |mu|^2/4\n";
        return 2;
    }
    YamabeReport rep = check_yamabe_solves(params, n, points, seed);
    std::cout << "n=" << rep.n << " samples=" << rep.samples
              << " ratio=" << rep.ratio.to_string() << " (exact, "
              << (rep.ratio_constant ? "constant" : "NOT constant") << ")"
              << " C=" << rep.C_solved << " max_rel_dev=" << rep.max_rel_dev << "\n";
    bool ok = rep.pass;
    if (transform_check) {
        bool t = yamabe_transform_consistent(params, n, points, seed);
        std::cout << "transformed-equation residual on induced jets: "
                  << (t ? "exactly zero" : "NONZERO") << "\n";
        ok = ok && t;
    }
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic-numeric verification of CR jet-calculus identities"};
    app.require_subcommand(1);

    VerifyOptions vopt;
    auto* verify_cmd = app.add_subcommand("verify", "verify catalog identities");
    verify_cmd->add_option("filter", vopt.filter, "case id glob, e.g. 'eq2.*'");
    verify_cmd->add_option("--catalog", vopt.catalog_dir, "catalog directory");
    verify_cmd->add_option("--format", vopt.format, "text | records")
        ->check(CLI::IsMember({"text", "records"}));
    verify_cmd->add_option("--n-vals", vopt.n_vals, "oracle dimensions");
    verify_cmd->add_option("--points", vopt.points, "oracle points per dimension");
    verify_cmd->add_option("--seed", vopt.seed, "random seed");
    verify_cmd->add_option("--max-terms", vopt.max_terms, "normalizer term cap");
    verify_cmd->add_option("--jobs", vopt.jobs, "parallel workers");
    verify_cmd->add_flag("--no-numeric", vopt.no_numeric, "skip the numeric oracle");
    std::string set_expr;
    verify_cmd->add_option("--set", set_expr, "parameter substitution, only 'p=0'");

    std::string norm_text;
    bool flag_pde = false, flag_no_pde = false, norm_p0 = false;
    std::size_t norm_cap = 100000;
    auto* norm_cmd = app.add_subcommand("normalize", "canonicalize one expression");
    norm_cmd->add_option("expression", norm_text, "expression text")->required();
    norm_cmd->add_flag("--pde", flag_pde, "substitute the equation for Hessian traces");
    norm_cmd->add_flag("--no-pde", flag_no_pde, "plain commutation only (default)");
    norm_cmd->add_flag("--set-p-zero", norm_p0, "specialize p = 0");
    norm_cmd->add_option("--max-terms", norm_cap, "term cap");

    long long n_max = 100;
    int samples = 199;
    std::string pos_format = "text";
    auto* pos_cmd = app.add_subcommand("positivity", "SOS coefficient positivity");
    pos_cmd->add_option("--n-max", n_max, "largest dimension checked");
    pos_cmd->add_option("--samples", samples, "rational p-samples in (-2,0)");
    pos_cmd->add_option("--format", pos_format, "text | records")
        ->check(CLI::IsMember({"text", "records"}));

    int yn = 1;
    std::string lambda_s = "i", mu_s = "0";
    std::size_t ypoints = 50;
    std::uint64_t yseed = 1;
    bool ytransform = false;
    auto* y_cmd = app.add_subcommand("yamabe", "explicit-solution oracle");
    y_cmd->add_option("--n", yn, "dimension");
    y_cmd->add_option("--lambda", lambda_s, "complex rational, e.g. 'i' or '1/2+3i'");
    y_cmd->add_option("--mu", mu_s, "comma-separated complex rationals, or 0");
    y_cmd->add_option("--points", ypoints, "sample points");
    y_cmd->add_option("--seed", yseed, "random seed");
    y_cmd->add_flag("--transform-check", ytransform,
                    "also evaluate the transformed equation on induced jets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify_cmd->parsed()) {
            if (!set_expr.empty()) {
                if (set_expr == "p=0") {
                    vopt.set_p_zero = true;
                } else {
                    std::cerr << "error: only '--set p=0' is supported\n";
                    return 2;
                }
            }
            if (vopt.points < 0 || vopt.n_vals.empty()) {
                std::cerr << "error: bad oracle configuration\n";
                return 2;
            }
            for (int nv : vopt.n_vals)
                if (nv < 1 || nv > 3) {
                    std::cerr << "error: oracle dimensions must be 1..3\n";
                    return 2;
                }
            return cmd_verify(vopt);
        }
        if (norm_cmd->parsed()) {
            if (flag_pde && flag_no_pde) {
                std::cerr << "error: --pde and --no-pde are exclusive\n";
                return 2;
            }
            return cmd_normalize(norm_text, flag_pde, norm_p0, norm_cap);
        }
        if (pos_cmd->parsed()) {
            if (n_max < 1 || samples < 2) {
                std::cerr << "error: need --n-max >= 1 and --samples >= 2\n";
                return 2;
            }
            return cmd_positivity(n_max, samples, pos_format);
        }
        if (y_cmd->parsed()) {
            if (yn < 1 || yn > 4 || ypoints < 10) {
                std::cerr << "error: need 1 <= n <= 4 and at least 10 points\n";
                return 2;
            }
            return cmd_yamabe(yn, lambda_s, mu_s, ypoints, yseed, ytransform);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
