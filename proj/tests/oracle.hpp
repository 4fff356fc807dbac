#pragma once

// Independent reference implementations the tests compare the library
// against.  Everything here recomputes its answer from first principles:
// the equivalence oracle saturates the rewrite moves of a quotient rule
// over a finite universe, the analysis oracles are plain recursions, and
// stack_fold evaluates a model without using structural recursion.

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "bindsig/models_std.hpp"
#include "bindsig/quotient.hpp"
#include "bindsig/term.hpp"

namespace oracle {

using namespace bindsig;

// -------------------- term enumeration --------------------

// All terms over sig in context n of the given depth or less, with
// family indices drawn from [0, family_bound].  Sizes grow fast; callers
// pick parameters that keep the universe small.
inline std::vector<Term> all_terms(const SigPtr& sig, Ctx n, std::size_t depth,
                                   std::size_t family_bound) {
    std::vector<Term> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(Term::var(sig, i, n));
    if (depth == 0) return out;

    for (std::size_t op = 0; op < sig->ops.size(); ++op) {
        std::vector<std::size_t> families;
        if (sig->ops[op].is_family()) {
            for (std::size_t k = 0; k <= family_bound; ++k) families.push_back(k);
        } else {
            families.push_back(no_family);
        }
        for (std::size_t fam : families) {
            BindingArity ar = sig->ops[op].arity(fam);
            std::vector<std::vector<Term>> pools;
            bool feasible = true;
            for (std::size_t s : ar.slots) {
                pools.push_back(all_terms(sig, n + s, depth - 1, family_bound));
                if (pools.back().empty()) feasible = false;
            }
            if (!feasible) continue;

            std::vector<std::size_t> pick(pools.size(), 0);
            while (true) {
                std::vector<Term> args;
                for (std::size_t i = 0; i < pools.size(); ++i)
                    args.push_back(pools[i][pick[i]]);
                out.push_back(Term::op(sig, op, fam, std::move(args), n));
                std::size_t i = pools.size();
                while (i > 0 && ++pick[i - 1] == pools[i - 1].size()) pick[--i] = 0;
                if (i == 0) break;
            }
        }
    }
    return out;
}

// -------------------- rewrite moves --------------------

// Caps for the saturation: how far family indices may grow past the
// universe, and which terms may appear as freshly inserted arguments or
// components (inverse deletion has a free choice there).
struct MoveCaps {
    std::size_t family_grow = 3;
    std::vector<Term> insert_pool;
};

namespace detail {

inline Renaming transpose_bound(Ctx cod, std::size_t a, std::size_t b) {
    Renaming r = identity_renaming(cod);
    r.map[a] = b;
    r.map[b] = a;
    return r;
}

// Collapse bound variable d: everything above shifts down one.
inline Renaming drop_bound(Ctx dom, std::size_t d) {
    Renaming r;
    r.cod = dom - 1;
    r.map.resize(dom);
    for (std::size_t i = 0; i < dom; ++i)
        if (i != d) r.map[i] = i < d ? i : i - 1;
    r.map[d] = 0; // never consulted; the caller checked d is unused
    return r;
}

// Redirect bound variable d to e (e < d), then collapse d.
inline Renaming merge_bound(Ctx dom, std::size_t d, std::size_t e) {
    Renaming r;
    r.cod = dom - 1;
    r.map.resize(dom);
    for (std::size_t i = 0; i < dom; ++i) r.map[i] = i == d ? e : (i < d ? i : i - 1);
    return r;
}

// Insert a fresh bound variable at index `at`: existing ones at or above
// shift up one.
inline Renaming insert_bound(Ctx dom, std::size_t at) {
    Renaming r;
    r.cod = dom + 1;
    r.map.resize(dom);
    for (std::size_t i = 0; i < dom; ++i) r.map[i] = i < at ? i : i + 1;
    return r;
}

inline bool uses_var(const Term& t, std::size_t v) {
    return free_vars(t).count(v) != 0;
}

} // namespace detail

// One rewrite step at the root, in both directions where the move is not
// self-inverse.  These re-derive the rule semantics move by move; they
// share no code with the canonicalizers.
inline std::vector<Term> root_moves(const PresentableSignature& p, const Term& t,
                                    const MoveCaps& caps) {
    std::vector<Term> out;
    if (t.is_var()) return out;
    const QuotientRule* rule = p.rule_for(t.op_index());
    if (!rule) return out;

    const SigPtr& sig = t.sig();
    Ctx n = t.ctx();
    std::size_t op = t.op_index();
    const std::vector<Term>& args = t.args();

    auto remake = [&](std::size_t fam, std::vector<Term> as) {
        out.push_back(Term::op(sig, op, fam, std::move(as), n));
    };

    switch (rule->kind) {
    case RuleKind::commutative:
    case RuleKind::broken_commutative: {
        remake(t.family(), {args[1], args[0]});
        break;
    }

    case RuleKind::multiset:
    case RuleKind::finset: {
        std::size_t k = t.family();
        for (std::size_t i = 0; i + 1 < k; ++i) {
            std::vector<Term> as = args;
            std::swap(as[i], as[i + 1]);
            remake(k, std::move(as));
        }
        if (rule->kind == RuleKind::finset) {
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i + 1; j < k; ++j)
                    if (args[i] == args[j]) {
                        std::vector<Term> as;
                        for (std::size_t m = 0; m < k; ++m)
                            if (m != j) as.push_back(args[m]);
                        remake(k - 1, std::move(as));
                    }
            if (k < caps.family_grow)
                for (std::size_t i = 0; i < k; ++i) {
                    std::vector<Term> as = args;
                    as.push_back(args[i]);
                    remake(k + 1, std::move(as));
                }
        }
        break;
    }

    case RuleKind::sym_binder: {
        std::size_t j = t.family();
        const Term& body = args[0];
        for (std::size_t d = 0; d + 1 < j; ++d)
            remake(j, {rename(body, detail::transpose_bound(n + j, d, d + 1))});
        for (std::size_t d = 0; d < j; ++d)
            if (!detail::uses_var(body, d))
                remake(j - 1, {rename(body, detail::drop_bound(n + j, d))});
        if (j < caps.family_grow)
            remake(j + 1, {rename(body, detail::insert_bound(n + j, 0))});
        break;
    }

    case RuleKind::coend_subst: {
        std::size_t pp = t.family();
        const Term& body = args[0];
        // positions d and d+1 swap: rename the body, swap the images
        for (std::size_t d = 0; d + 1 < pp; ++d) {
            std::vector<Term> as = args;
            as[0] = rename(body, detail::transpose_bound(n + pp, d, d + 1));
            std::swap(as[1 + d], as[1 + d + 1]);
            remake(pp, std::move(as));
        }
        for (std::size_t d = 0; d < pp; ++d) {
            if (!detail::uses_var(body, d)) {
                std::vector<Term> as;
                as.push_back(rename(body, detail::drop_bound(n + pp, d)));
                for (std::size_t m = 0; m < pp; ++m)
                    if (m != d) as.push_back(args[1 + m]);
                remake(pp - 1, std::move(as));
            }
            for (std::size_t e = 0; e < d; ++e)
                if (args[1 + d] == args[1 + e]) {
                    std::vector<Term> as;
                    as.push_back(rename(body, detail::merge_bound(n + pp, d, e)));
                    for (std::size_t m = 0; m < pp; ++m)
                        if (m != d) as.push_back(args[1 + m]);
                    remake(pp - 1, std::move(as));
                }
        }
        if (pp < caps.family_grow) {
            Term grown = rename(body, detail::insert_bound(n + pp, pp));
            for (std::size_t d = 0; d < pp; ++d) {
                std::vector<Term> as = args;
                as[0] = grown;
                as.push_back(args[1 + d]);
                remake(pp + 1, std::move(as));
            }
            for (const Term& u : caps.insert_pool) {
                if (u.ctx() != n) continue;
                std::vector<Term> as = args;
                as[0] = grown;
                as.push_back(u);
                remake(pp + 1, std::move(as));
            }
        }
        break;
    }

    case RuleKind::fixpoint: {
        FixpointShape sh = fixpoint_split(t.family());
        std::size_t lv = sh.level;
        std::size_t c = sh.component;
        // relabel: swap components d and d+1 and rename every reference
        for (std::size_t d = 0; d + 1 < lv; ++d) {
            Renaming r = detail::transpose_bound(n + lv, d, d + 1);
            std::vector<Term> as(lv, Term());
            for (std::size_t i = 0; i < lv; ++i) as[r(i)] = rename(args[i], r);
            std::size_t c2 = r(c);
            remake(fixpoint_index(lv, c2), std::move(as));
        }
        // delete component d: nothing may reference it, itself included
        for (std::size_t d = 0; d < lv; ++d) {
            if (d == c) continue;
            bool referenced = false;
            for (const Term& comp : args)
                if (detail::uses_var(comp, d)) referenced = true;
            if (referenced) continue;
            Renaming r = detail::drop_bound(n + lv, d);
            std::vector<Term> as;
            for (std::size_t i = 0; i < lv; ++i)
                if (i != d) as.push_back(rename(args[i], r));
            remake(fixpoint_index(lv - 1, c > d ? c - 1 : c), std::move(as));
        }
        // merge equal components: references to d retarget to e
        for (std::size_t e = 0; e < lv; ++e)
            for (std::size_t d = e + 1; d < lv; ++d) {
                if (args[e] != args[d]) continue;
                Renaming r = detail::merge_bound(n + lv, d, e);
                std::vector<Term> as;
                for (std::size_t i = 0; i < lv; ++i)
                    if (i != d) as.push_back(rename(args[i], r));
                std::size_t c2 = c == d ? e : (c > d ? c - 1 : c);
                remake(fixpoint_index(lv - 1, c2), std::move(as));
            }
        // grow: split component e into two copies, each reference to it
        // choosing a side, such that the copies come out equal
        if (lv < caps.family_grow) {
            Renaming up = detail::insert_bound(n + lv, lv);
            for (std::size_t e = 0; e < lv; ++e) {
                std::vector<Term> base;
                for (std::size_t i = 0; i < lv; ++i) base.push_back(rename(args[i], up));
                base.push_back(rename(args[e], up));
                // every occurrence of e across the new component list may
                // flip to lv; enumerate the flips one component at a time
                std::vector<std::vector<Term>> variants{{}};
                for (const Term& comp : base) {
                    std::vector<Term> alts = {comp};
                    if (detail::uses_var(comp, e)) {
                        Renaming flip = identity_renaming(n + lv + 1);
                        flip.map[e] = lv;
                        alts.push_back(rename(comp, flip));
                    }
                    std::vector<std::vector<Term>> next;
                    for (const auto& v : variants)
                        for (const Term& alt : alts) {
                            auto w = v;
                            w.push_back(alt);
                            next.push_back(std::move(w));
                        }
                    variants = std::move(next);
                }
                for (auto& as : variants) {
                    if (as[e] != as[lv]) continue;
                    remake(fixpoint_index(lv + 1, c), std::move(as));
                }
            }
            // insert a dead component: nobody references it, and it must
            // not reference itself, or the deletion move cannot undo this
            for (const Term& u : caps.insert_pool) {
                if (u.ctx() != n + lv + 1 || detail::uses_var(u, lv)) continue;
                std::vector<Term> as;
                for (std::size_t i = 0; i < lv; ++i) as.push_back(rename(args[i], up));
                as.push_back(u);
                remake(fixpoint_index(lv + 1, c), std::move(as));
            }
        }
        break;
    }
    }
    return out;
}

// Moves at every position: root moves plus moves inside each argument.
inline std::vector<Term> all_moves(const PresentableSignature& p, const Term& t,
                                   const MoveCaps& caps) {
    std::vector<Term> out = root_moves(p, t, caps);
    if (t.is_var()) return out;
    for (std::size_t i = 0; i < t.args().size(); ++i)
        for (const Term& moved : all_moves(p, t.args()[i], caps)) {
            std::vector<Term> as = t.args();
            as[i] = moved;
            out.push_back(Term::op(t.sig(), t.op_index(), t.family(), std::move(as), t.ctx()));
        }
    return out;
}

// -------------------- saturated equivalence closure --------------------

// Connected components of the move graph over all terms reachable from
// the seeds.  Two terms are equivalent exactly when some chain of moves,
// applied at any position and in either direction, connects them.
class EquivalenceClosure {
public:
    EquivalenceClosure(const PresentableSignature& p, const std::vector<Term>& seeds,
                       MoveCaps caps, std::size_t max_explored = 500000)
        : p_(p), caps_(std::move(caps)) {
        std::deque<std::size_t> work;
        for (const Term& t : seeds) work.push_back(intern(t));
        while (!work.empty()) {
            std::size_t id = work.front();
            work.pop_front();
            Term t = terms_[id];
            for (const Term& moved : all_moves(p_, t, caps_)) {
                auto it = ids_.find(moved);
                if (it != ids_.end()) {
                    unite(id, it->second);
                    continue;
                }
                if (terms_.size() >= max_explored)
                    throw std::runtime_error("equivalence closure exceeded its budget");
                std::size_t mid = intern(moved);
                unite(id, mid);
                work.push_back(mid);
            }
        }
    }

    bool equal(const Term& a, const Term& b) const {
        auto ia = ids_.find(a);
        auto ib = ids_.find(b);
        if (ia == ids_.end() || ib == ids_.end())
            throw std::runtime_error("closure asked about a term outside its universe");
        return find(ia->second) == find(ib->second);
    }

    std::size_t explored() const { return terms_.size(); }

private:
    std::size_t intern(const Term& t) {
        auto it = ids_.find(t);
        if (it != ids_.end()) return it->second;
        std::size_t id = terms_.size();
        terms_.push_back(t);
        parent_.push_back(id);
        ids_.emplace(t, id);
        return id;
    }

    std::size_t find(std::size_t x) const {
        while (parent_[x] != x) x = parent_[x];
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

    PresentableSignature p_;
    MoveCaps caps_;
    std::map<Term, std::size_t> ids_;
    std::vector<Term> terms_;
    mutable std::vector<std::size_t> parent_;
};

// -------------------- rule universes --------------------

// One quotient rule together with a finite, move-closed set of terms to
// compare exhaustively against the saturated closure.
struct RuleUniverse {
    std::string name;
    PresentableSignature p;
    std::vector<Term> terms;
    MoveCaps caps;
};

namespace detail {

inline void dedup(std::vector<Term>& ts) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

// leaf, wrap and one unary-slot family: the common chassis for the
// powers-family universes
inline SigPtr pool_sig(const char* name, const char* fam, SchemeKind kind) {
    return make_signature(
        name, {op_decl("leaf", {}), op_decl("wrap", {0}), family_decl(fam, kind)});
}

inline std::vector<Term> small_pool(const SigPtr& sig, Ctx n) {
    std::vector<Term> pool;
    for (std::size_t i = 0; i < n; ++i) pool.push_back(Term::var(sig, i, n));
    std::size_t leaf = *sig->find("leaf");
    std::size_t wrap = *sig->find("wrap");
    pool.push_back(Term::op(sig, leaf, no_family, {}, n));
    pool.push_back(Term::op(sig, wrap, no_family, {pool.back()}, n));
    if (n > 0)
        pool.push_back(Term::op(sig, wrap, no_family, {Term::var(sig, 0, n)}, n));
    return pool;
}

// every way to fill k argument places from the pool
inline void fill_places(const SigPtr& sig, std::size_t op, std::size_t fam,
                        const std::vector<Term>& pool, Ctx n, std::vector<Term>& out) {
    std::size_t k = sig->ops[op].arity(fam).size();
    std::vector<std::size_t> pick(k, 0);
    while (true) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < k; ++i) args.push_back(pool[pick[i]]);
        out.push_back(Term::op(sig, op, fam, std::move(args), n));
        std::size_t i = k;
        while (i > 0 && ++pick[i - 1] == pool.size()) pick[--i] = 0;
        if (i == 0) break;
    }
}

} // namespace detail

inline RuleUniverse universe_commutative() {
    SigPtr sig = make_signature("pi", {op_decl("nil", {}), op_decl("par", {0, 0}),
                                       op_decl("repl", {0}), op_decl("new", {1})});
    RuleUniverse u;
    u.name = "commutative";
    u.p = presentable(sig, {QuotientRule{RuleKind::commutative, *sig->find("par")}});
    u.terms = all_terms(sig, 1, 2, 0);
    return u;
}

inline RuleUniverse universe_multiset() {
    SigPtr sig = detail::pool_sig("bags", "bag", SchemeKind::powers);
    RuleUniverse u;
    u.name = "multiset";
    u.p = presentable(sig, {QuotientRule{RuleKind::multiset, *sig->find("bag")}});
    std::vector<Term> pool = detail::small_pool(sig, 1);
    std::size_t bag = *sig->find("bag");
    for (std::size_t k = 0; k <= 3; ++k) detail::fill_places(sig, bag, k, pool, 1, u.terms);
    u.caps.family_grow = 4;
    return u;
}

inline RuleUniverse universe_finset() {
    SigPtr sig = detail::pool_sig("sets", "set", SchemeKind::powers);
    RuleUniverse u;
    u.name = "finset";
    u.p = presentable(sig, {QuotientRule{RuleKind::finset, *sig->find("set")}});
    std::vector<Term> pool = detail::small_pool(sig, 1);
    std::size_t set = *sig->find("set");
    std::size_t wrap = *sig->find("wrap");
    std::vector<Term> layer;
    for (std::size_t k = 0; k <= 3; ++k) detail::fill_places(sig, set, k, pool, 1, layer);
    for (const Term& s : layer)
        u.terms.push_back(Term::op(sig, wrap, no_family, {s}, 1));
    u.terms.insert(u.terms.end(), layer.begin(), layer.end());
    u.caps.family_grow = 4;
    return u;
}

inline RuleUniverse universe_sym_binder() {
    SigPtr sig = make_signature("nus", {op_decl("leaf", {}), op_decl("pair", {0, 0}),
                                        family_decl("nu", SchemeKind::binder_seq)});
    RuleUniverse u;
    u.name = "sym-binder";
    u.p = presentable(sig, {QuotientRule{RuleKind::sym_binder, *sig->find("nu")}});
    std::size_t nu = *sig->find("nu");
    for (std::size_t j = 0; j <= 3; ++j)
        for (const Term& body : all_terms(sig, 1 + j, 1, 0))
            u.terms.push_back(Term::op(sig, nu, j, {body}, 1));
    u.caps.family_grow = 4;
    return u;
}

inline RuleUniverse universe_coend_subst() {
    SigPtr sig = make_signature("subs", {op_decl("leaf", {}), op_decl("pair", {0, 0}),
                                         family_decl("sub", SchemeKind::esubst)});
    RuleUniverse u;
    u.name = "coend-subst";
    u.p = presentable(sig, {QuotientRule{RuleKind::coend_subst, *sig->find("sub")}});
    std::size_t sub = *sig->find("sub");
    std::size_t leaf = *sig->find("leaf");
    std::vector<Term> images = {Term::var(sig, 0, 1), Term::op(sig, leaf, no_family, {}, 1)};
    for (std::size_t p = 0; p <= 2; ++p) {
        std::vector<std::size_t> pick(p, 0);
        for (const Term& body : all_terms(sig, 1 + p, 1, 0)) {
            std::fill(pick.begin(), pick.end(), 0);
            while (true) {
                std::vector<Term> args = {body};
                for (std::size_t i = 0; i < p; ++i) args.push_back(images[pick[i]]);
                u.terms.push_back(Term::op(sig, sub, p, std::move(args), 1));
                std::size_t i = p;
                while (i > 0 && ++pick[i - 1] == images.size()) pick[--i] = 0;
                if (i == 0) break;
            }
        }
    }
    u.caps.family_grow = 3;
    u.caps.insert_pool = images;
    return u;
}

inline SigPtr fix_sig() {
    return make_signature("fixterms", {op_decl("leaf", {}), op_decl("pair", {0, 0}),
                                       family_decl("fix", SchemeKind::fixpoint)});
}

// pure reference graphs: every component is a single back reference
inline RuleUniverse universe_fixpoint_graphs() {
    SigPtr sig = fix_sig();
    RuleUniverse u;
    u.name = "fixpoint-graphs";
    u.p = presentable(sig, {QuotientRule{RuleKind::fixpoint, *sig->find("fix")}});
    std::size_t fix = *sig->find("fix");
    for (std::size_t lv = 1; lv <= 3; ++lv) {
        std::vector<std::size_t> pick(lv, 0);
        while (true) {
            for (std::size_t c = 0; c < lv; ++c) {
                std::vector<Term> comps;
                for (std::size_t i = 0; i < lv; ++i)
                    comps.push_back(Term::var(sig, pick[i], lv));
                u.terms.push_back(
                    Term::op(sig, fix, fixpoint_index(lv, c), std::move(comps), 0));
            }
            std::size_t i = lv;
            while (i > 0 && ++pick[i - 1] == lv) pick[--i] = 0;
            if (i == 0) break;
        }
    }
    u.caps.family_grow = 4;
    for (Ctx m = 2; m <= 5; ++m) {
        for (std::size_t i = 0; i < m; ++i)
            u.caps.insert_pool.push_back(Term::var(sig, i, m));
        u.caps.insert_pool.push_back(Term::op(sig, *sig->find("leaf"), no_family, {}, m));
    }
    return u;
}

// structured components over one free variable
inline RuleUniverse universe_fixpoint_rich() {
    SigPtr sig = fix_sig();
    RuleUniverse u;
    u.name = "fixpoint-rich";
    u.p = presentable(sig, {QuotientRule{RuleKind::fixpoint, *sig->find("fix")}});
    std::size_t fix = *sig->find("fix");
    for (const Term& comp : all_terms(sig, 2, 1, 0))
        u.terms.push_back(Term::op(sig, fix, fixpoint_index(1, 0), {comp}, 1));
    std::vector<Term> atoms;
    for (std::size_t i = 0; i < 3; ++i) atoms.push_back(Term::var(sig, i, 3));
    for (const Term& a : atoms)
        for (const Term& b : atoms)
            for (std::size_t c = 0; c < 2; ++c)
                u.terms.push_back(
                    Term::op(sig, fix, fixpoint_index(2, c), {a, b}, 1));
    // components carry real structure here, so growth is capped tighter
    // than in the graph universe: equal seeds connect through shrinking
    // and relabeling alone, larger detours only inflate the search
    u.caps.family_grow = 2;
    for (Ctx m = 2; m <= 3; ++m) {
        for (std::size_t i = 0; i < m; ++i)
            u.caps.insert_pool.push_back(Term::var(sig, i, m));
        u.caps.insert_pool.push_back(Term::op(sig, *sig->find("leaf"), no_family, {}, m));
    }
    return u;
}

inline std::vector<RuleUniverse> all_rule_universes() {
    std::vector<RuleUniverse> out;
    out.push_back(universe_commutative());
    out.push_back(universe_multiset());
    out.push_back(universe_finset());
    out.push_back(universe_sym_binder());
    out.push_back(universe_coend_subst());
    out.push_back(universe_fixpoint_graphs());
    out.push_back(universe_fixpoint_rich());
    return out;
}

// Compare quotient equality against the saturated closure on every pair
// of universe members.  Returns descriptions of disagreeing pairs, at
// most `max_reports` of them.
inline std::vector<std::string> closure_mismatches(const RuleUniverse& u,
                                                   std::size_t max_reports = 5) {
    std::vector<Term> terms = u.terms;
    detail::dedup(terms);
    EquivalenceClosure closure(u.p, terms, u.caps);
    std::vector<Term> canon;
    canon.reserve(terms.size());
    for (const Term& t : terms) canon.push_back(nf(u.p, t));
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < terms.size() && bad.size() < max_reports; ++i)
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            bool impl = canon[i] == canon[j];
            bool want = closure.equal(terms[i], terms[j]);
            if (impl != want) {
                bad.push_back(u.name + ": " + to_debug_string(terms[i]) + " vs " +
                              to_debug_string(terms[j]) + ": canonicalizer says " +
                              (impl ? "equal" : "distinct") + ", closure says " +
                              (want ? "equal" : "distinct"));
                if (bad.size() >= max_reports) break;
            }
        }
    return bad;
}

// -------------------- analysis recursions --------------------

// Free variables by threading a binder-depth offset instead of adjusting
// sets level by level.
inline void free_vars_walk(const Term& t, std::size_t depth, std::set<std::size_t>& out) {
    if (t.is_var()) {
        if (t.var_index() >= depth) out.insert(t.var_index() - depth);
        return;
    }
    BindingArity ar = t.arity();
    for (std::size_t i = 0; i < t.args().size(); ++i)
        free_vars_walk(t.args()[i], depth + ar.slots[i], out);
}

inline std::set<std::size_t> free_vars_of(const Term& t) {
    std::set<std::size_t> out;
    free_vars_walk(t, 0, out);
    return out;
}

inline std::uint64_t op_nodes(const Term& t) {
    if (t.is_var()) return 0;
    std::uint64_t total = 1;
    for (const Term& a : t.args()) total += op_nodes(a);
    return total;
}

inline std::uint64_t redex_nodes(const Term& t) {
    if (t.is_var()) return 0;
    std::uint64_t total = 0;
    if (t.decl().name == "app" && !t.args()[0].is_var() &&
        t.args()[0].decl().name == "abs")
        total = 1;
    for (const Term& a : t.args()) total += redex_nodes(a);
    return total;
}

// -------------------- stack evaluation --------------------

// Evaluate a model over a term with an explicit frame stack instead of
// structural recursion; fold must agree with this on every model.
template <class V>
V stack_fold(const Model<V>& m, const Term& root) {
    struct Frame {
        Term t;
        std::vector<V> vals;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{root, {}});
    while (true) {
        Frame& top = stack.back();
        bool ready = top.t.is_var() || top.vals.size() == top.t.args().size();
        if (!ready) {
            Term child = top.t.args()[top.vals.size()];
            stack.push_back(Frame{std::move(child), {}});
            continue;
        }
        V value = top.t.is_var()
                      ? m.unit(top.t.var_index(), top.t.ctx())
                      : m.actions[top.t.op_index()](top.t.family(), std::move(top.vals),
                                                    top.t.ctx());
        stack.pop_back();
        if (stack.empty()) return value;
        stack.back().vals.push_back(std::move(value));
    }
}

} // namespace oracle
