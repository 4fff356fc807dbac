#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bindsig/gen.hpp"
#include "bindsig/term.hpp"

namespace bindsig {

// -------------------- sampling reports --------------------

struct LawResult {
    std::string name;
    std::size_t samples = 0;
    std::size_t failures = 0;
    std::string counterexample; // first failing instance, human readable

    bool pass() const { return failures == 0; }
};

struct LawReport {
    std::vector<LawResult> results;

    bool pass() const {
        for (const auto& r : results)
            if (!r.pass()) return false;
        return true;
    }
};

namespace detail {
// Run one sampled law: draw() produces an instance, check() returns a
// counterexample description or empty for success.
template <class Check>
LawResult run_law(std::string name, std::size_t samples, Check&& check) {
    LawResult r;
    r.name = std::move(name);
    r.samples = samples;
    for (std::size_t i = 0; i < samples; ++i) {
        std::string cx = check(i);
        if (!cx.empty()) {
            if (r.failures == 0) r.counterexample = cx;
            ++r.failures;
        }
    }
    return r;
}
} // namespace detail

struct LawOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    Ctx max_ctx = 6;
    std::size_t max_depth = 7;
};

// -------------------- renaming and substitution laws --------------------

// The functor laws for renaming and the monad laws for substitution,
// checked on random terms.  These hold by construction; the suite exists
// so that refactors keep them holding and so the CLI can demonstrate
// them on user signatures.
inline LawReport monad_law_suite(const SigPtr& sig, const LawOptions& o = {}) {
    LawReport rep;
    Rng rng(o.seed);
    GenOptions g{o.max_depth, 3};
    auto draw_ctx = [&](Rng& r) { return r.below(o.max_ctx + 1); };

    rep.results.push_back(detail::run_law("rename-identity", o.samples, [&](std::size_t) {
        Ctx n = draw_ctx(rng);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        if (rename(t, identity_renaming(n)) != t)
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("rename-compose", o.samples, [&](std::size_t) {
        Ctx n = draw_ctx(rng);
        Ctx m = 1 + rng.below(o.max_ctx);
        Ctx k = 1 + rng.below(o.max_ctx);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Renaming f = random_renaming(n, m, rng);
        Renaming h = random_renaming(m, k, rng);
        if (rename(rename(t, f), h) != rename(t, compose(h, f)))
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("subst-left-unit", o.samples, [&](std::size_t) {
        Ctx n = 1 + rng.below(o.max_ctx);
        Ctx m = 1 + rng.below(o.max_ctx);
        Subst s = random_subst(sig, n, m, o.max_depth / 2, rng, g);
        std::size_t i = rng.below(n);
        if (subst(Term::var(sig, i, n), s) != s.images[i])
            return "variable v" + std::to_string(i);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("subst-right-unit", o.samples, [&](std::size_t) {
        Ctx n = draw_ctx(rng);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        if (subst(t, identity_subst(sig, n)) != t)
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("subst-assoc", o.samples, [&](std::size_t) {
        Ctx n = draw_ctx(rng);
        Ctx m = 1 + rng.below(o.max_ctx);
        Ctx k = 1 + rng.below(o.max_ctx);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Subst s1 = random_subst(sig, n, m, o.max_depth / 2, rng, g);
        Subst s2 = random_subst(sig, m, k, o.max_depth / 2, rng, g);
        Subst s12;
        s12.cod = k;
        for (const Term& u : s1.images) s12.images.push_back(subst(u, s2));
        if (subst(subst(t, s1), s2) != subst(t, s12))
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("rename-is-subst", o.samples, [&](std::size_t) {
        Ctx n = draw_ctx(rng);
        Ctx m = 1 + rng.below(o.max_ctx);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Renaming f = random_renaming(n, m, rng);
        Subst s;
        s.cod = m;
        for (std::size_t i = 0; i < n; ++i) s.images.push_back(Term::var(sig, f(i), m));
        if (rename(t, f) != subst(t, s))
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    return rep;
}

// -------------------- substitution-structure laws --------------------

// How the derived forms interact with simultaneous substitution: the
// one-variable form is linear, the p-variable form is stable under
// reindexing of its slots, and weakening commutes with substitution.
inline LawReport module_law_suite(const SigPtr& sig, const LawOptions& o = {}) {
    LawReport rep;
    Rng rng(o.seed);
    GenOptions g{o.max_depth, 3};

    rep.results.push_back(detail::run_law("sigma-linear", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Ctx m = 1 + rng.below(o.max_ctx);
        Term t = random_term(sig, n + 1, rng.below(o.max_depth + 1), rng, g);
        Term u = random_term(sig, n, o.max_depth / 2, rng, g);
        Subst s = random_subst(sig, n, m, o.max_depth / 2, rng, g);
        Term lhs = subst(sigma(t, u), s);
        Term rhs = sigma(subst(t, lift(s, sig, 1)), subst(u, s));
        if (lhs != rhs) return "t = " + to_debug_string(t) + ", u = " + to_debug_string(u);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("substp-reindex", o.samples, [&](std::size_t) {
        // for u : p -> q, substituting through the reindexing equals
        // reindexing the replacement list
        Ctx n = rng.below(o.max_ctx + 1);
        std::size_t p = rng.below(5);
        std::size_t q = 1 + rng.below(4);
        Term t = random_term(sig, n + p, rng.below(o.max_depth + 1), rng, g);
        Renaming u = random_renaming(p, q, rng);
        std::vector<Term> ss;
        for (std::size_t j = 0; j < q; ++j) ss.push_back(random_term(sig, n, o.max_depth / 2, rng, g));
        // rename ports j |-> u(j), leave the n free variables in place
        Renaming ports;
        ports.cod = n + q;
        ports.map.resize(n + p);
        for (std::size_t j = 0; j < p; ++j) ports.map[j] = u(j);
        for (std::size_t i = 0; i < n; ++i) ports.map[p + i] = q + i;
        std::vector<Term> ss_u;
        for (std::size_t j = 0; j < p; ++j) ss_u.push_back(ss[u(j)]);
        Term lhs = subst_p(rename(t, ports), ss);
        Term rhs = subst_p(t, ss_u);
        if (lhs != rhs) return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("substp-as-sigmas", o.samples, [&](std::size_t) {
        // collapsing p fresh variables at once equals collapsing them
        // one at a time, innermost first
        Ctx n = rng.below(o.max_ctx + 1);
        std::size_t p = rng.below(4);
        Term t = random_term(sig, n + p, rng.below(o.max_depth + 1), rng, g);
        std::vector<Term> us;
        for (std::size_t j = 0; j < p; ++j) us.push_back(random_term(sig, n, o.max_depth / 2, rng, g));
        Term lhs = subst_p(t, us);
        Term rhs = t;
        for (std::size_t j = 0; j < p; ++j) {
            // replace the current freshest variable; later replacements
            // must be weakened past the ones still pending
            Term u = weaken(us[j], p - 1 - j);
            rhs = sigma(rhs, u);
        }
        if (lhs != rhs) return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("weaken-subst-commute", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Ctx m = 1 + rng.below(o.max_ctx);
        std::size_t k = rng.below(4);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Subst s = random_subst(sig, n, m, o.max_depth / 2, rng, g);
        if (weaken(subst(t, s), k) != subst(weaken(t, k), lift(s, sig, k)))
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("sigma-weaken-counit", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Term u = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Term x = random_term(sig, n, o.max_depth / 2, rng, g);
        if (sigma(weaken(u, 1), x) != u)
            return "u = " + to_debug_string(u);
        return std::string();
    }));

    return rep;
}

} // namespace bindsig
