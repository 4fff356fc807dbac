#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "bindsig/term.hpp"

namespace bindsig {

// Seeded randomness for property tests and sampling checks.  Draws come
// straight from mt19937_64: std::uniform_int_distribution is allowed to
// differ between standard libraries, and reproducible runs matter more
// here than the negligible modulo bias on desk-scale bounds.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::uint64_t next() { return eng(); }

    std::size_t below(std::size_t n) {
        return n == 0 ? 0 : static_cast<std::size_t>(next() % n);
    }

    bool coin() { return below(2) == 0; }

    // fresh independent stream, for splitting one seed across suites
    Rng fork() { return Rng(next() ^ 0x9e3779b97f4a7c15ull); }
};

struct GenOptions {
    std::size_t max_depth = 5;
    // family indices are drawn below this bound (fixpoint families get
    // 2*bound so levels up to ~bound appear)
    std::size_t family_bound = 3;
};

namespace detail {
// A family index (or no_family) at which the operation can anchor a
// closed term: either no arguments at all, or every slot binding.
inline std::optional<std::size_t> closed_pick(const OperationDecl& d) {
    auto ok = [](const BindingArity& a) {
        for (std::size_t s : a.slots)
            if (s == 0) return false;
        return true;
    };
    if (!d.is_family())
        return ok(d.arity()) ? std::optional<std::size_t>(no_family) : std::nullopt;
    for (std::size_t k = 0; k < 8; ++k)
        if (ok(d.scheme().arity(k))) return k;
    return std::nullopt;
}
} // namespace detail

// A random well-scoped term.  Depth 0 yields a variable when possible;
// in an empty context the generator falls back to an operation that can
// anchor a closed term and errors out if the signature has none (then no
// closed terms exist at all, or only via unbounded nesting).
inline Term random_term(const SigPtr& sig, Ctx n, std::size_t depth, Rng& rng,
                        const GenOptions& opts = {}) {
    bool want_var = (depth == 0) ? true : (n > 0 && rng.below(3) == 0);
    if (want_var && n > 0) return Term::var(sig, rng.below(n), n);

    std::size_t pick;
    std::size_t family = no_family;
    if (depth == 0 || want_var) {
        // must stop growing: nullary if available, else a fully binding
        // operation whose arguments close immediately over fresh variables
        std::optional<std::size_t> best;
        std::optional<std::size_t> best_family;
        for (std::size_t i = 0; i < sig->ops.size(); ++i) {
            if (auto k = detail::closed_pick(sig->ops[i])) {
                bool nullary = sig->ops[i].arity(*k).size() == 0;
                if (!best || nullary) {
                    best = i;
                    best_family = *k;
                    if (nullary) break;
                }
            }
        }
        if (!best)
            throw ConfigError("signature " + sig->name +
                              " has no closed anchor operation; cannot finish a term in an empty context");
        pick = *best;
        family = *best_family;
    } else {
        pick = rng.below(sig->ops.size());
        const OperationDecl& d = sig->ops[pick];
        if (d.is_family()) {
            std::size_t bound =
                d.scheme().kind == SchemeKind::fixpoint ? 2 * opts.family_bound : opts.family_bound;
            family = rng.below(bound + 1);
            if (d.scheme().kind == SchemeKind::fixpoint && family == 0) family = 1;
        }
    }

    BindingArity ar = sig->ops[pick].arity(family);
    std::vector<Term> args;
    args.reserve(ar.size());
    std::size_t d2 = depth == 0 ? 0 : depth - 1;
    for (std::size_t s : ar.slots) args.push_back(random_term(sig, n + s, d2, rng, opts));
    return Term::op(sig, pick, family, std::move(args), n);
}

inline Renaming random_renaming(Ctx dom, Ctx cod, Rng& rng) {
    if (dom > 0 && cod == 0)
        throw ScopeError("no renaming from a nonempty context into the empty one");
    Renaming r;
    r.cod = cod;
    r.map.resize(dom);
    for (std::size_t i = 0; i < dom; ++i) r.map[i] = rng.below(cod);
    return r;
}

inline Subst random_subst(const SigPtr& sig, Ctx dom, Ctx cod, std::size_t depth, Rng& rng,
                          const GenOptions& opts = {}) {
    Subst s;
    s.cod = cod;
    s.images.reserve(dom);
    for (std::size_t i = 0; i < dom; ++i)
        s.images.push_back(random_term(sig, cod, depth, rng, opts));
    return s;
}

} // namespace bindsig
