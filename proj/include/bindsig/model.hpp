#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bindsig/gen.hpp"
#include "bindsig/laws.hpp"
#include "bindsig/quotient.hpp"
#include "bindsig/term.hpp"

namespace bindsig {

// -------------------- models --------------------

// A model interprets a signature: a carrier per context, a unit sending
// variables into the carrier, a bind interpreting substitution, and one
// action per operation.  Carriers are represented by a value type V
// together with a context-aware equality (function-valued carriers can
// only be compared on sampled inputs, so equality is part of the model).
template <class V>
struct Model {
    SigPtr sig;

    // variable i in context n
    std::function<V(std::size_t, Ctx)> unit;

    // x in D(n), one image in D(m) per variable of n; result in D(m)
    std::function<V(const V&, const std::vector<V>&, Ctx, Ctx)> bind;

    // one per operation: family index, one value per argument (argument
    // i lives in D(n + slot_i)), result in D(n)
    std::vector<std::function<V(std::size_t, std::vector<V>&&, Ctx)>> actions;

    std::function<bool(const V&, const V&, Ctx)> equal;
};

// Interpret a term by structural recursion: the unique map out of the
// term structure determined by the model's unit and actions.
template <class V>
V fold(const Model<V>& m, const Term& t) {
    if (t.sig() != m.sig)
        throw ModelError("fold: term is not over the model's signature");
    if (t.is_var()) return m.unit(t.var_index(), t.ctx());
    std::vector<V> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(fold(m, a));
    return m.actions[t.op_index()](t.family(), std::move(args), t.ctx());
}

// The term structure as a model of itself; fold over it is the identity.
inline Model<Term> term_model(const SigPtr& sig) {
    Model<Term> m;
    m.sig = sig;
    m.unit = [sig](std::size_t i, Ctx n) { return Term::var(sig, i, n); };
    m.bind = [sig](const Term& t, const std::vector<Term>& images, Ctx, Ctx cod) {
        Subst s;
        s.cod = cod;
        s.images = images;
        return subst(t, s);
    };
    m.actions.reserve(sig->ops.size());
    for (std::size_t i = 0; i < sig->ops.size(); ++i)
        m.actions.push_back([sig, i](std::size_t family, std::vector<Term>&& args, Ctx n) {
            return Term::op(sig, i, family, std::move(args), n);
        });
    m.equal = [](const Term& a, const Term& b, Ctx) { return a == b; };
    return m;
}

// Canonical forms as a model: every operation rebuilds a node and
// renormalizes, substitution renormalizes.  This is the term model of
// the quotient presented by p.
inline Model<Term> quotient_term_model(const PresentableSignature& p) {
    Model<Term> m = term_model(p.carrier);
    PresentableSignature pres = p;
    m.bind = [pres](const Term& t, const std::vector<Term>& images, Ctx, Ctx cod) {
        Subst s;
        s.cod = cod;
        s.images = images;
        return quot_subst(pres, t, s);
    };
    for (std::size_t i = 0; i < p.carrier->ops.size(); ++i) {
        SigPtr sig = p.carrier;
        m.actions[i] = [pres, sig, i](std::size_t family, std::vector<Term>&& args, Ctx n) {
            return nf(pres, Term::op(sig, i, family, std::move(args), n));
        };
    }
    return m;
}

// -------------------- folding through a quotient --------------------

// Sampled check that a model cannot tell terms from their normal forms
// apart, which is what folding canonical representatives presupposes.
template <class V>
LawResult check_respects_quotient(const PresentableSignature& p, const Model<V>& m,
                                  const LawOptions& o = {}) {
    Rng rng(o.seed);
    GenOptions g{o.max_depth, 3};
    return detail::run_law("model-respects-quotient", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Term t = random_term(p.carrier, n, rng.below(o.max_depth + 1), rng, g);
        if (!m.equal(fold(m, t), fold(m, nf(p, t)), n))
            return "t = " + to_debug_string(t);
        return std::string();
    });
}

// Fold a term of the presented quotient: check the model respects the
// rules (sampled), then fold the canonical representative.
template <class V>
V fold_quotient(const PresentableSignature& p, const Model<V>& m, const Term& t,
                const LawOptions& o = {}) {
    LawResult r = check_respects_quotient(p, m, o);
    if (!r.pass())
        throw ModelError("model does not respect the quotient; counterexample " +
                         r.counterexample);
    return fold(m, nf(p, t));
}

// -------------------- moving models along morphisms --------------------

// Restrict a model of the target signature to the source: each source
// operation acts as its image does.  Carrier, unit and bind are shared.
template <class V>
Model<V> pullback_model(const SignatureMorphism& f, const Model<V>& m) {
    if (m.sig != f.dst)
        throw ModelError("pullback_model: model is not over the morphism's target");
    Model<V> out;
    out.sig = f.src;
    out.unit = m.unit;
    out.bind = m.bind;
    out.equal = m.equal;
    out.actions.reserve(f.src->ops.size());
    for (std::size_t i = 0; i < f.src->ops.size(); ++i)
        out.actions.push_back(m.actions[f.on_op(i)]);
    return out;
}

// Glue a model of each pushout leg over a common carrier.  The two
// models must agree on the shared signature; that is checked by
// comparing folds of random shared terms through both restrictions,
// then the actions are combined operation by operation.
template <class V>
Model<V> mediate_modularity(const PushoutResult& po, const Model<V>& m1, const Model<V>& m2,
                            const LawOptions& o = {}) {
    if (m1.sig != po.inj1.src || m2.sig != po.inj2.src)
        throw ModelError("mediate_modularity: models do not match the pushout legs");

    Rng rng(o.seed);
    GenOptions gen{o.max_depth, 3};
    Model<V> pb1 = pullback_model(po.leg1, m1);
    Model<V> pb2 = pullback_model(po.leg2, m2);
    for (std::size_t i = 0; i < o.samples; ++i) {
        Ctx n = rng.below(o.max_ctx + 1);
        Term t = random_term(po.leg1.src, n, rng.below(o.max_depth + 1), rng, gen);
        if (!m1.equal(fold(pb1, t), fold(pb2, t), n))
            throw ModelError("models disagree on the shared signature; counterexample t = " +
                             to_debug_string(t));
    }

    Model<V> out;
    out.sig = po.sig;
    out.unit = m1.unit;
    out.bind = m1.bind;
    out.equal = m1.equal;
    out.actions.resize(po.sig->ops.size());
    for (std::size_t i = 0; i < po.inj1.src->ops.size(); ++i)
        out.actions[po.inj1.on_op(i)] = m1.actions[i];
    for (std::size_t j = 0; j < po.inj2.src->ops.size(); ++j) {
        std::size_t target = po.inj2.on_op(j);
        if (!out.actions[target]) out.actions[target] = m2.actions[j];
    }
    for (std::size_t k = 0; k < out.actions.size(); ++k)
        if (!out.actions[k])
            throw ModelError("pushout operation " + po.sig->ops[k].name +
                             " received no action from either side");
    return out;
}

// -------------------- law checks --------------------

namespace detail {
// Carrier values for sampling: folds of random terms.  Function-valued
// carriers have no other source of inhabitants, and values reached by
// fold are the ones the laws are exercised on anyway.
template <class V>
V sample_value(const Model<V>& m, Ctx n, std::size_t depth, Rng& rng) {
    GenOptions g{depth, 3};
    return fold(m, random_term(m.sig, n, depth, rng, g));
}

template <class V>
std::vector<V> sample_values(const Model<V>& m, std::size_t count, Ctx n, std::size_t depth,
                             Rng& rng) {
    std::vector<V> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_value(m, n, depth, rng));
    return out;
}

// Interpret weakening by k fresh variables: bind against shifted units.
template <class V>
V model_weaken(const Model<V>& m, const V& x, Ctx n, std::size_t k) {
    std::vector<V> images;
    images.reserve(n);
    for (std::size_t i = 0; i < n; ++i) images.push_back(m.unit(k + i, n + k));
    return m.bind(x, images, n, n + k);
}
} // namespace detail

// Sampled substitution-algebra laws for a model: the unit laws and
// associativity of bind, and every action commuting with bind through
// its binding slots.
template <class V>
LawReport check_model_laws(const Model<V>& m, const LawOptions& o = {}) {
    LawReport rep;
    Rng rng(o.seed);
    std::size_t vdepth = o.max_depth / 2 + 1;

    rep.results.push_back(detail::run_law("model-left-unit", o.samples, [&](std::size_t) {
        Ctx n = 1 + rng.below(o.max_ctx);
        Ctx k = 1 + rng.below(o.max_ctx);
        std::vector<V> f = detail::sample_values(m, n, k, vdepth, rng);
        std::size_t i = rng.below(n);
        if (!m.equal(m.bind(m.unit(i, n), f, n, k), f[i], k))
            return "variable v" + std::to_string(i) + " in context " + std::to_string(n);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("model-right-unit", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        V x = detail::sample_value(m, n, vdepth, rng);
        std::vector<V> units;
        for (std::size_t i = 0; i < n; ++i) units.push_back(m.unit(i, n));
        if (!m.equal(m.bind(x, units, n, n), x, n)) return std::string("sampled value");
        return std::string();
    }));

    rep.results.push_back(detail::run_law("model-bind-assoc", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Ctx k = 1 + rng.below(o.max_ctx);
        Ctx l = 1 + rng.below(o.max_ctx);
        V x = detail::sample_value(m, n, vdepth, rng);
        std::vector<V> f = detail::sample_values(m, n, k, vdepth, rng);
        std::vector<V> g = detail::sample_values(m, k, l, vdepth, rng);
        V lhs = m.bind(m.bind(x, f, n, k), g, k, l);
        std::vector<V> fg;
        fg.reserve(n);
        for (const V& v : f) fg.push_back(m.bind(v, g, k, l));
        if (!m.equal(lhs, m.bind(x, fg, n, l), l)) return std::string("sampled value");
        return std::string();
    }));

    rep.results.push_back(detail::run_law("model-action-bind", o.samples, [&](std::size_t) {
        if (m.sig->ops.empty()) return std::string();
        Ctx n = rng.below(o.max_ctx + 1);
        Ctx k = 1 + rng.below(o.max_ctx);
        std::size_t op = rng.below(m.sig->ops.size());
        const OperationDecl& d = m.sig->ops[op];
        std::size_t family = no_family;
        if (d.is_family()) {
            family = rng.below(4);
            if (d.scheme().kind == SchemeKind::fixpoint && family == 0) family = 1;
        }
        BindingArity ar = d.arity(family);
        std::vector<V> f = detail::sample_values(m, n, k, vdepth, rng);
        std::vector<V> args, bound_args;
        for (std::size_t s : ar.slots) {
            V a = detail::sample_value(m, n + s, vdepth, rng);
            // push f under s binders: fresh variables to themselves,
            // old images weakened past them
            std::vector<V> lifted;
            lifted.reserve(n + s);
            for (std::size_t j = 0; j < s; ++j) lifted.push_back(m.unit(j, k + s));
            for (const V& v : f) lifted.push_back(detail::model_weaken(m, v, k, s));
            bound_args.push_back(m.bind(a, lifted, n + s, k + s));
            args.push_back(std::move(a));
        }
        V lhs = m.bind(m.actions[op](family, std::move(args), n), f, n, k);
        V rhs = m.actions[op](family, std::move(bound_args), k);
        if (!m.equal(lhs, rhs, k)) return "action " + d.name;
        return std::string();
    }));

    return rep;
}

// Sampled check that h is a morphism of models: it intertwines unit,
// bind and every action.  fold itself is the canonical example, from
// the term model to any other model of the same signature.
template <class V, class W>
LawReport check_model_morphism(const Model<V>& src, const Model<W>& dst,
                               const std::function<W(const V&, Ctx)>& h,
                               const LawOptions& o = {}) {
    if (src.sig != dst.sig)
        throw ModelError("check_model_morphism: models interpret different signatures");
    LawReport rep;
    Rng rng(o.seed);
    std::size_t vdepth = o.max_depth / 2 + 1;

    rep.results.push_back(detail::run_law("morphism-unit", o.samples, [&](std::size_t) {
        Ctx n = 1 + rng.below(o.max_ctx);
        std::size_t i = rng.below(n);
        if (!dst.equal(h(src.unit(i, n), n), dst.unit(i, n), n))
            return "variable v" + std::to_string(i);
        return std::string();
    }));

    rep.results.push_back(detail::run_law("morphism-bind", o.samples, [&](std::size_t) {
        Ctx n = rng.below(o.max_ctx + 1);
        Ctx k = 1 + rng.below(o.max_ctx);
        V x = detail::sample_value(src, n, vdepth, rng);
        std::vector<V> f = detail::sample_values(src, n, k, vdepth, rng);
        std::vector<W> hf;
        hf.reserve(n);
        for (const V& v : f) hf.push_back(h(v, k));
        if (!dst.equal(h(src.bind(x, f, n, k), k), dst.bind(h(x, n), hf, n, k), k))
            return std::string("sampled value");
        return std::string();
    }));

    rep.results.push_back(detail::run_law("morphism-action", o.samples, [&](std::size_t) {
        if (src.sig->ops.empty()) return std::string();
        Ctx n = rng.below(o.max_ctx + 1);
        std::size_t op = rng.below(src.sig->ops.size());
        const OperationDecl& d = src.sig->ops[op];
        std::size_t family = no_family;
        if (d.is_family()) {
            family = rng.below(4);
            if (d.scheme().kind == SchemeKind::fixpoint && family == 0) family = 1;
        }
        BindingArity ar = d.arity(family);
        std::vector<V> args;
        std::vector<W> hargs;
        for (std::size_t s : ar.slots) {
            V a = detail::sample_value(src, n + s, vdepth, rng);
            hargs.push_back(h(a, n + s));
            args.push_back(std::move(a));
        }
        std::vector<V> args_copy = args;
        if (!dst.equal(h(src.actions[op](family, std::move(args_copy), n), n),
                       dst.actions[op](family, std::move(hargs), n), n))
            return "action " + d.name;
        return std::string();
    }));

    return rep;
}

} // namespace bindsig
