#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "bindsig/laws.hpp"
#include "bindsig/term.hpp"

namespace bindsig {

// -------------------- presentations --------------------

// A quotient is given operationally: every rule names an operation and a
// builtin canonicalizer for it, and nf rewrites each node to the least
// representative of its class under the canonical term order.  Equality
// and substitution in the quotient are equality and substitution of
// normal forms.
enum class RuleKind {
    commutative,  // binary: sort the two arguments
    finset,       // powers family: sort arguments, drop duplicates
    multiset,     // powers family: sort arguments
    sym_binder,   // binder family: drop unused bound variables, then
                  // pick the least relabeling of the rest
    coend_subst,  // explicit-substitution family: drop unused positions,
                  // share equal arguments, pick the least position order
    fixpoint,     // mutual-fixpoint family: drop unreferenced components,
                  // share equal ones, pick the least relabeling
    // Sorts only at the top of a normalization call, never inside.  This
    // is not a congruence and fails the substitution-compatibility check;
    // it exists so the failure path of check_compatibility stays honest.
    broken_commutative,
};

struct QuotientRule {
    RuleKind kind;
    std::size_t op;
};

struct PresentableSignature {
    SigPtr carrier;
    std::vector<QuotientRule> rules;

    const QuotientRule* rule_for(std::size_t op) const {
        for (const auto& r : rules)
            if (r.op == op) return &r;
        return nullptr;
    }
};

// How many simultaneous relabelings the canonical-form searches are
// willing to enumerate: caps the factorials in sym_binder, coend_subst
// and fixpoint normalization.
constexpr std::size_t max_relabel_width = 8;

inline PresentableSignature presentable(SigPtr carrier, std::vector<QuotientRule> rules) {
    auto scheme_is = [](const OperationDecl& d, SchemeKind k) {
        return d.is_family() && d.scheme().kind == k;
    };
    for (const auto& r : rules) {
        if (r.op >= carrier->ops.size())
            throw SignatureError("quotient rule names operation index " +
                                 std::to_string(r.op) + " outside the signature");
        const OperationDecl& d = carrier->ops[r.op];
        switch (r.kind) {
        case RuleKind::commutative:
        case RuleKind::broken_commutative:
            if (d.is_family() || d.arity() != BindingArity{{0, 0}})
                throw SignatureError("commutative rule wants a binary operation, " + d.name +
                                     " is not one");
            break;
        case RuleKind::finset:
        case RuleKind::multiset:
            if (!scheme_is(d, SchemeKind::powers))
                throw SignatureError("set/multiset rules want a tuple family, " + d.name +
                                     " is not one");
            break;
        case RuleKind::sym_binder:
            if (!scheme_is(d, SchemeKind::binder_seq))
                throw SignatureError("sym-binder rule wants a binder family, " + d.name +
                                     " is not one");
            break;
        case RuleKind::coend_subst:
            if (!scheme_is(d, SchemeKind::esubst))
                throw SignatureError("coend-subst rule wants an explicit-substitution family, " +
                                     d.name + " is not one");
            break;
        case RuleKind::fixpoint:
            if (!scheme_is(d, SchemeKind::fixpoint))
                throw SignatureError("fixpoint rule wants a fixpoint family, " + d.name +
                                     " is not one");
            break;
        }
    }
    for (std::size_t i = 0; i < rules.size(); ++i)
        for (std::size_t j = i + 1; j < rules.size(); ++j)
            if (rules[i].op == rules[j].op)
                throw SignatureError("two quotient rules attached to " +
                                     carrier->ops[rules[i].op].name);
    return PresentableSignature{std::move(carrier), std::move(rules)};
}

// -------------------- normalization --------------------

namespace detail {

Term nf_go(const PresentableSignature& p, const Term& t, bool root);

// Renaming that sends port j (one of p_old low indices) to port_map[j]
// among p_new low indices and shifts the free variables accordingly.
inline Renaming ports_renaming(std::size_t p_old, std::size_t p_new,
                               const std::vector<std::size_t>& port_map, Ctx n) {
    Renaming r;
    r.cod = n + p_new;
    r.map.resize(n + p_old);
    for (std::size_t j = 0; j < p_old; ++j) r.map[j] = port_map[j];
    for (std::size_t i = 0; i < n; ++i) r.map[p_old + i] = p_new + i;
    return r;
}

inline std::vector<std::vector<std::size_t>> permutations(std::size_t m) {
    if (m > max_relabel_width)
        throw ConfigError("relabeling search over " + std::to_string(m) +
                          " slots exceeds the width limit of " +
                          std::to_string(max_relabel_width));
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do out.push_back(idx);
    while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

inline Term sort_args(const Term& t, bool dedup) {
    std::vector<Term> args = t.args();
    std::sort(args.begin(), args.end());
    if (dedup) args.erase(std::unique(args.begin(), args.end()), args.end());
    std::size_t family = t.family() == no_family ? no_family : args.size();
    return Term::op(t.sig(), t.op_index(), family, std::move(args), t.ctx());
}

// sym_binder: the argument of binder@k is a term with the k bound
// variables at indices 0..k-1.  Unused ones are dropped (injections act
// trivially on them), and of all ways to relabel the remaining j the one
// giving the least body wins.
inline Term canon_sym_binder(const PresentableSignature& p, const Term& t) {
    std::size_t k = t.family();
    Ctx n = t.ctx();
    Term body = t.args()[0];

    std::vector<std::size_t> used;
    {
        std::set<std::size_t> fv = free_vars(body);
        for (std::size_t v : fv)
            if (v < k) used.push_back(v);
    }
    std::size_t j = used.size();

    if (j < k) {
        // drop unused bound variables, keeping the used ones in order;
        // re-normalize since relabeling can reshuffle ordered structure
        std::vector<std::size_t> port_map(k, 0);
        for (std::size_t i = 0; i < j; ++i) port_map[used[i]] = i;
        body = nf_go(p, rename(body, ports_renaming(k, j, port_map, n)), false);
        // normalization may erase further occurrences, so start over
        return canon_sym_binder(
            p, Term::op(t.sig(), t.op_index(), j, {std::move(body)}, n));
    }

    Term best;
    for (const auto& perm : permutations(j)) {
        Term cand = nf_go(p, rename(body, ports_renaming(j, j, perm, n)), false);
        if (best.empty() || cand < best) best = std::move(cand);
    }
    return Term::op(t.sig(), t.op_index(), j, {std::move(best)}, n);
}

// coend_subst: esubst@p has a body with p positions (indices 0..p-1) and
// one argument term per position.  A position nobody mentions is dropped,
// positions with equal arguments are shared, and the least position
// order wins.
inline Term canon_coend_subst(const PresentableSignature& p, const Term& t) {
    std::size_t pp = t.family();
    Ctx n = t.ctx();
    Term body = t.args()[0];
    std::vector<Term> xs(t.args().begin() + 1, t.args().end());

    std::vector<std::size_t> used;
    {
        std::set<std::size_t> fv = free_vars(body);
        for (std::size_t v : fv)
            if (v < pp) used.push_back(v);
    }

    // representative position for each used position: the first used
    // position carrying an equal argument
    std::vector<std::size_t> reps;
    std::vector<std::size_t> port_map(pp, 0);
    bool collapsed = used.size() < pp;
    for (std::size_t v : used) {
        std::size_t slot = reps.size();
        for (std::size_t r = 0; r < reps.size(); ++r)
            if (xs[reps[r]] == xs[v]) {
                slot = r;
                collapsed = true;
                break;
            }
        if (slot == reps.size()) reps.push_back(v);
        port_map[v] = slot;
    }

    if (collapsed) {
        std::size_t q = reps.size();
        Term nbody = nf_go(p, rename(body, ports_renaming(pp, q, port_map, n)), false);
        std::vector<Term> args;
        args.reserve(1 + q);
        args.push_back(std::move(nbody));
        for (std::size_t r : reps) args.push_back(xs[r]);
        // dropped occurrences may cascade, start over on the smaller node
        return canon_coend_subst(
            p, Term::op(t.sig(), t.op_index(), q, std::move(args), n));
    }

    Term best;
    for (const auto& perm : permutations(pp)) {
        Term nbody = nf_go(p, rename(body, ports_renaming(pp, pp, perm, n)), false);
        std::vector<Term> args;
        args.reserve(1 + pp);
        args.push_back(std::move(nbody));
        args.resize(1 + pp, body); // placeholders, overwritten below
        for (std::size_t v = 0; v < pp; ++v) args[1 + perm[v]] = xs[v];
        Term cand = Term::op(t.sig(), t.op_index(), pp, std::move(args), n);
        if (best.empty() || cand < best) best = std::move(cand);
    }
    return best;
}

// fixpoint: fix@(m,c) packs m components, each seeing all m recursion
// ports at indices 0..m-1, with component c selected.  A non-selected
// component that no component (itself included) refers to is dead and
// drops out; structurally equal components are shared; of the remaining
// relabelings the one with the selected component first and the least
// component tuple wins.
inline Term canon_fixpoint(const PresentableSignature& p, const Term& t) {
    FixpointShape shape = fixpoint_split(t.family());
    std::size_t m = shape.level;
    std::size_t c = shape.component;
    Ctx n = t.ctx();
    std::vector<Term> comp = t.args();

    // shrink until no dead and no duplicate components remain
    for (;;) {
        std::vector<bool> referenced(m, false);
        for (const Term& ti : comp)
            for (std::size_t v : free_vars(ti))
                if (v < m) referenced[v] = true;

        std::vector<std::size_t> keep;
        for (std::size_t x = 0; x < m; ++x)
            if (x == c || referenced[x]) keep.push_back(x);

        std::vector<std::size_t> port_map(m, 0);
        if (keep.size() < m) {
            for (std::size_t i = 0; i < keep.size(); ++i) port_map[keep[i]] = i;
        } else {
            // no dead component; look for a duplicate pair instead
            std::size_t di = m, dj = m;
            for (std::size_t i = 0; i < m && di == m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    if (comp[i] == comp[j]) {
                        di = i;
                        dj = j;
                        break;
                    }
            if (di == m) break; // fully reduced
            keep.clear();
            for (std::size_t x = 0; x < m; ++x)
                if (x != dj) keep.push_back(x);
            for (std::size_t i = 0; i < keep.size(); ++i) port_map[keep[i]] = i;
            port_map[dj] = port_map[di];
            if (c == dj) c = di;
        }

        std::size_t m2 = keep.size();
        Renaming r = ports_renaming(m, m2, port_map, n);
        std::vector<Term> comp2;
        comp2.reserve(m2);
        for (std::size_t x : keep) comp2.push_back(nf_go(p, rename(comp[x], r), false));
        comp = std::move(comp2);
        c = port_map[c];
        m = m2;
    }

    // least relabeling; the selected component lands at index 0, since
    // the family index dominates the term order
    Term best;
    for (const auto& perm : permutations(m)) {
        if (perm[c] != 0) continue;
        Renaming r = ports_renaming(m, m, perm, n);
        std::vector<Term> args(comp.size(), comp[0]);
        for (std::size_t x = 0; x < m; ++x) args[perm[x]] = nf_go(p, rename(comp[x], r), false);
        Term cand = Term::op(t.sig(), t.op_index(), fixpoint_index(m, 0), std::move(args), n);
        if (best.empty() || cand < best) best = std::move(cand);
    }
    return best;
}

inline Term apply_rule(const PresentableSignature& p, const QuotientRule& r, const Term& t,
                       bool root) {
    switch (r.kind) {
    case RuleKind::commutative:
        return compare(t.args()[1], t.args()[0]) < 0
                   ? Term::op(t.sig(), t.op_index(), no_family,
                              {t.args()[1], t.args()[0]}, t.ctx())
                   : t;
    case RuleKind::broken_commutative:
        if (!root) return t;
        return compare(t.args()[1], t.args()[0]) < 0
                   ? Term::op(t.sig(), t.op_index(), no_family,
                              {t.args()[1], t.args()[0]}, t.ctx())
                   : t;
    case RuleKind::multiset:
        return sort_args(t, false);
    case RuleKind::finset:
        return sort_args(t, true);
    case RuleKind::sym_binder:
        return canon_sym_binder(p, t);
    case RuleKind::coend_subst:
        return canon_coend_subst(p, t);
    case RuleKind::fixpoint:
        return canon_fixpoint(p, t);
    }
    throw ConfigError("unhandled rule kind");
}

inline Term nf_go(const PresentableSignature& p, const Term& t, bool root) {
    if (t.is_var()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(nf_go(p, a, false));
    Term node = Term::op(t.sig(), t.op_index(), t.family(), std::move(args), t.ctx());

    const QuotientRule* rule = p.rule_for(node.op_index());
    if (!rule) return node;

    // each canonicalizer settles in one application; the loop only mops
    // up cascades and the budget turns a non-terminating rule into an
    // error instead of a hang
    std::size_t budget = depth(node) + p.rules.size() + 4;
    for (std::size_t step = 0; step < budget; ++step) {
        Term next = apply_rule(p, *rule, node, root);
        if (next == node) return node;
        node = std::move(next);
    }
    throw ConfigError("normalization did not settle within its budget at " +
                      node.decl().name);
}

} // namespace detail

// Least representative of t's class under the declared rules, computed
// bottom-up.  Terms over a signature without rules pass through intact.
inline Term nf(const PresentableSignature& p, const Term& t) {
    if (t.sig() != p.carrier)
        throw SignatureError("nf: term is not over the presentation's carrier");
    return detail::nf_go(p, t, true);
}

// Equality in the quotient: equality of normal forms.
inline bool quot_eq(const PresentableSignature& p, const Term& a, const Term& b) {
    if (a.ctx() != b.ctx())
        throw ScopeError("quot_eq compares terms of one context, got " +
                         std::to_string(a.ctx()) + " and " + std::to_string(b.ctx()));
    return nf(p, a) == nf(p, b);
}

// Substitution in the quotient: substitute, then renormalize.
inline Term quot_subst(const PresentableSignature& p, const Term& t, const Subst& s) {
    return nf(p, subst(t, s));
}

// -------------------- compatibility checks --------------------

// The three sampled hypotheses under which normal forms present a
// well-behaved quotient of the term structure: nf must be idempotent,
// stable under renaming, and compatible with substitution.
inline LawReport check_compatibility(const PresentableSignature& p, const LawOptions& o = {}) {
    LawReport rep;
    Rng rng(o.seed);
    GenOptions g{o.max_depth, 3};
    const SigPtr& sig = p.carrier;

    rep.results.push_back(detail::run_law("nf-idempotent", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Term n1 = nf(p, t);
        if (nf(p, n1) != n1) return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("nf-rename-stable", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Ctx m = 1 + rng.below(o.max_ctx);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Renaming f = random_renaming(n, m, rng);
        if (nf(p, rename(nf(p, t), f)) != nf(p, rename(t, f)))
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("nf-subst-compatible", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Ctx m = 1 + rng.below(o.max_ctx);
        Term t = random_term(sig, n, rng.below(o.max_depth + 1), rng, g);
        Subst s = random_subst(sig, n, m, o.max_depth / 2, rng, g);
        Subst ns;
        ns.cod = m;
        for (const Term& u : s.images) ns.images.push_back(nf(p, u));
        if (nf(p, subst(t, s)) != nf(p, subst(nf(p, t), ns)))
            return "t = " + to_debug_string(t);
        return std::string();
    }));

    return rep;
}

} // namespace bindsig
