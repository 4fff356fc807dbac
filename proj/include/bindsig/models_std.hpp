#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bindsig/model.hpp"
#include "bindsig/quotient.hpp"
#include "bindsig/term.hpp"

namespace bindsig {

// -------------------- free variables --------------------

// The set of free variables as a model of any signature: a variable is
// its own singleton, bind replaces every element by what its image
// mentions, and an operation collects its arguments' sets with each
// slot's bound variables stripped off.
inline Model<std::set<std::size_t>> free_vars_model(const SigPtr& sig) {
    using S = std::set<std::size_t>;
    Model<S> m;
    m.sig = sig;
    m.unit = [](std::size_t i, Ctx) { return S{i}; };
    m.bind = [](const S& x, const std::vector<S>& images, Ctx, Ctx) {
        S out;
        for (std::size_t v : x) out.insert(images[v].begin(), images[v].end());
        return out;
    };
    for (std::size_t op = 0; op < sig->ops.size(); ++op)
        m.actions.push_back([sig, op](std::size_t family, std::vector<S>&& args, Ctx) {
            BindingArity ar = sig->ops[op].arity(family);
            S out;
            for (std::size_t i = 0; i < args.size(); ++i)
                for (std::size_t v : args[i])
                    if (v >= ar.slots[i]) out.insert(v - ar.slots[i]);
            return out;
        });
    m.equal = [](const S& a, const S& b, Ctx) { return a == b; };
    return m;
}

// -------------------- continuation-style number models --------------------

// Carriers of the shape (assignment -> N) -> N: a value consumes an
// environment giving a number per variable in scope.  Equality of such
// functions is sampled: exhaustively over a four-value palette when the
// context is small, on 64 deterministic pseudo-random environments
// otherwise.
using SizeVal = std::function<std::uint64_t(const std::vector<std::uint64_t>&)>;

namespace detail {
template <class E, class F>
bool cont_equal(Ctx n, const std::vector<E>& palette, F&& same_at) {
    if (n <= 4) {
        std::vector<std::size_t> digit(n, 0);
        for (;;) {
            std::vector<E> env;
            env.reserve(n);
            for (std::size_t d : digit) env.push_back(palette[d]);
            if (!same_at(env)) return false;
            std::size_t pos = 0;
            while (pos < n && ++digit[pos] == palette.size()) digit[pos++] = 0;
            if (pos == n) return true;
        }
    }
    Rng rng(0xc011ec7 + n);
    for (std::size_t trial = 0; trial < 64; ++trial) {
        std::vector<E> env;
        env.reserve(n);
        for (std::size_t i = 0; i < n; ++i) env.push_back(palette[rng.below(palette.size())]);
        if (!same_at(env)) return false;
    }
    return true;
}
} // namespace detail

// Term size over the lambda-calculus signature, phrased with the
// continuation carrier so that bind has somewhere to thread its images:
// an application or an abstraction adds one, a fresh variable under an
// abstraction counts zero.
inline Model<SizeVal> size_model(const SigPtr& lc) {
    Model<SizeVal> m;
    m.sig = lc;
    std::size_t app = lc->require("app");
    std::size_t abs = lc->require("abs");
    m.unit = [](std::size_t i, Ctx) {
        return SizeVal([i](const std::vector<std::uint64_t>& env) { return env[i]; });
    };
    m.bind = [](const SizeVal& x, const std::vector<SizeVal>& images, Ctx, Ctx) {
        return SizeVal([x, images](const std::vector<std::uint64_t>& env) {
            std::vector<std::uint64_t> inner;
            inner.reserve(images.size());
            for (const SizeVal& f : images) inner.push_back(f(env));
            return x(inner);
        });
    };
    m.actions.resize(lc->ops.size());
    m.actions[app] = [](std::size_t, std::vector<SizeVal>&& a, Ctx) {
        return SizeVal([t = a[0], u = a[1]](const std::vector<std::uint64_t>& env) {
            return 1 + t(env) + u(env);
        });
    };
    m.actions[abs] = [](std::size_t, std::vector<SizeVal>&& a, Ctx) {
        return SizeVal([t = a[0]](const std::vector<std::uint64_t>& env) {
            std::vector<std::uint64_t> inner;
            inner.reserve(env.size() + 1);
            inner.push_back(0);
            inner.insert(inner.end(), env.begin(), env.end());
            return 1 + t(inner);
        });
    };
    m.equal = [](const SizeVal& a, const SizeVal& b, Ctx n) {
        static const std::vector<std::uint64_t> palette{0, 1, 2, 3};
        return detail::cont_equal(n, palette, [&](const std::vector<std::uint64_t>& env) {
            return a(env) == b(env);
        });
    };
    return m;
}

inline std::uint64_t term_size(const Term& t) {
    SizeVal v = fold(size_model(t.sig()), t);
    return v(std::vector<std::uint64_t>(t.ctx(), 0));
}

// Redex counting: values are pairs (count so far, head-is-abstraction
// flag).  An application adds its head's flag to the two counts; an
// abstraction raises the flag and hides its bound variable behind (0,0).
using RedexVal =
    std::function<std::pair<std::uint64_t, std::uint64_t>(
        const std::vector<std::pair<std::uint64_t, std::uint64_t>>&)>;

inline Model<RedexVal> redex_model(const SigPtr& lc) {
    using P = std::pair<std::uint64_t, std::uint64_t>;
    Model<RedexVal> m;
    m.sig = lc;
    std::size_t app = lc->require("app");
    std::size_t abs = lc->require("abs");
    m.unit = [](std::size_t i, Ctx) {
        return RedexVal([i](const std::vector<P>& env) { return env[i]; });
    };
    m.bind = [](const RedexVal& x, const std::vector<RedexVal>& images, Ctx, Ctx) {
        return RedexVal([x, images](const std::vector<P>& env) {
            std::vector<P> inner;
            inner.reserve(images.size());
            for (const RedexVal& f : images) inner.push_back(f(env));
            return x(inner);
        });
    };
    m.actions.resize(lc->ops.size());
    m.actions[app] = [](std::size_t, std::vector<RedexVal>&& a, Ctx) {
        return RedexVal([t = a[0], u = a[1]](const std::vector<P>& env) {
            P tv = t(env), uv = u(env);
            return P{tv.first + uv.first + tv.second, 0};
        });
    };
    m.actions[abs] = [](std::size_t, std::vector<RedexVal>&& a, Ctx) {
        return RedexVal([t = a[0]](const std::vector<P>& env) {
            std::vector<P> inner;
            inner.reserve(env.size() + 1);
            inner.push_back(P{0, 0});
            inner.insert(inner.end(), env.begin(), env.end());
            return P{t(inner).first, 1};
        });
    };
    m.equal = [](const RedexVal& a, const RedexVal& b, Ctx n) {
        static const std::vector<P> palette{{0, 0}, {1, 0}, {2, 1}, {3, 1}};
        return detail::cont_equal(n, palette,
                                  [&](const std::vector<P>& env) { return a(env) == b(env); });
    };
    return m;
}

inline std::uint64_t redex_count(const Term& t) {
    RedexVal v = fold(redex_model(t.sig()), t);
    using P = std::pair<std::uint64_t, std::uint64_t>;
    return v(std::vector<P>(t.ctx(), P{0, 0})).first;
}

// -------------------- fixture signatures --------------------

inline SigPtr make_lambda_sig() {
    return make_signature("lc", {op_decl("app", {0, 0}), op_decl("abs", {1})});
}

// Intuitionistic first-order connectives: negation, the three binary
// connectives, and both quantifiers.
inline SigPtr make_lj_sig() {
    return make_signature("lj", {op_decl("neg", {0}), op_decl("and", {0, 0}),
                                 op_decl("or", {0, 0}), op_decl("imp", {0, 0}),
                                 op_decl("all", {1}), op_decl("ex", {1})});
}

// Linear connectives: four constants, the two exponentials, five binary
// connectives (imp is the linear arrow), and both quantifiers.
inline SigPtr make_ll_sig() {
    return make_signature(
        "ll", {op_decl("top", {}), op_decl("bot", {}), op_decl("zero", {}), op_decl("one", {}),
               op_decl("bang", {0}), op_decl("whynot", {0}), op_decl("with", {0, 0}),
               op_decl("parr", {0, 0}), op_decl("tensor", {0, 0}), op_decl("plus", {0, 0}),
               op_decl("imp", {0, 0}), op_decl("all", {1}), op_decl("ex", {1})});
}

// -------------------- templates and translations --------------------

// A template is a target-signature term with two extra leaf forms:
// variables bound by the template's own binders, and metavariable slots
// #i standing for the translated arguments of a source operation.  A
// slot binding k variables must sit under exactly k template binders,
// so instantiation is a plain graft with no index shifting.
class Template {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    struct Node {
        enum class Tag { var, meta, op };
        Tag tag;
        std::size_t index = 0; // var: binder index; meta: slot number
        std::size_t op = 0;
        std::size_t family = no_family;
        std::vector<NodePtr> args;
    };

    SigPtr dst;
    NodePtr root;
};

inline Template tpl_var(SigPtr dst, std::size_t index) {
    auto n = std::make_shared<Template::Node>();
    n->tag = Template::Node::Tag::var;
    n->index = index;
    return Template{std::move(dst), std::move(n)};
}

inline Template tpl_meta(SigPtr dst, std::size_t slot) {
    auto n = std::make_shared<Template::Node>();
    n->tag = Template::Node::Tag::meta;
    n->index = slot;
    return Template{std::move(dst), std::move(n)};
}

inline Template tpl_op(const SigPtr& dst, std::string_view name, std::size_t family,
                       std::vector<Template> args) {
    std::size_t op = dst->require(name);
    BindingArity ar = dst->ops[op].arity(family);
    if (ar.size() != args.size())
        throw ArityError("template applies " + std::string(name) + " to " +
                         std::to_string(args.size()) + " arguments, arity wants " +
                         std::to_string(ar.size()));
    auto n = std::make_shared<Template::Node>();
    n->tag = Template::Node::Tag::op;
    n->op = op;
    n->family = family;
    for (auto& a : args) {
        if (a.dst != dst)
            throw SignatureError("template argument built over a different signature");
        n->args.push_back(a.root);
    }
    return Template{dst, std::move(n)};
}

inline Template tpl_op(const SigPtr& dst, std::string_view name, std::vector<Template> args) {
    return tpl_op(dst, name, no_family, std::move(args));
}

namespace detail {
inline void validate_template_node(const SigPtr& dst, const Template::NodePtr& n,
                                   const BindingArity& src_arity, std::size_t binders) {
    switch (n->tag) {
    case Template::Node::Tag::var:
        if (n->index >= binders)
            throw ScopeError("template variable " + std::to_string(n->index) +
                             " escapes its binders");
        return;
    case Template::Node::Tag::meta:
        if (n->index >= src_arity.size())
            throw SignatureError("template slot #" + std::to_string(n->index + 1) +
                                 " has no matching source argument");
        if (src_arity.slots[n->index] != binders)
            throw SignatureError("template slot #" + std::to_string(n->index + 1) + " sits under " +
                                 std::to_string(binders) + " binders but its argument binds " +
                                 std::to_string(src_arity.slots[n->index]));
        return;
    case Template::Node::Tag::op: {
        BindingArity ar = dst->ops[n->op].arity(n->family);
        for (std::size_t i = 0; i < n->args.size(); ++i)
            validate_template_node(dst, n->args[i], src_arity, binders + ar.slots[i]);
        return;
    }
    }
}

inline Term instantiate_node(const SigPtr& dst, const Template::NodePtr& n,
                             const std::vector<Term>& parts, Ctx outer, std::size_t binders) {
    switch (n->tag) {
    case Template::Node::Tag::var:
        return Term::var(dst, n->index, outer + binders);
    case Template::Node::Tag::meta: {
        const Term& part = parts.at(n->index);
        if (part.ctx() != outer + binders)
            throw ArityError("template slot #" + std::to_string(n->index + 1) +
                             " receives a term of context " + std::to_string(part.ctx()) +
                             ", hole has " + std::to_string(outer + binders));
        return part;
    }
    case Template::Node::Tag::op: {
        BindingArity ar = dst->ops[n->op].arity(n->family);
        std::vector<Term> args;
        args.reserve(n->args.size());
        for (std::size_t i = 0; i < n->args.size(); ++i)
            args.push_back(
                instantiate_node(dst, n->args[i], parts, outer, binders + ar.slots[i]));
        return Term::op(dst, n->op, n->family, std::move(args), outer + binders);
    }
    }
    throw ConfigError("unhandled template node");
}
} // namespace detail

// Check a template against the arity of the source operation it will
// interpret.  Throws when a slot sits under the wrong number of binders
// or a template variable escapes.
inline void validate_template(const Template& t, const BindingArity& src_arity) {
    detail::validate_template_node(t.dst, t.root, src_arity, 0);
}

// Fill the slots: parts[i] is the translated i-th argument, living in
// the outer context extended by that argument's bound variables.
inline Term instantiate(const Template& t, const std::vector<Term>& parts, Ctx outer) {
    return detail::instantiate_node(t.dst, t.root, parts, outer, 0);
}

// A translation: one template per source operation, into a target
// signature that may itself carry quotient rules.
struct TranslationMapping {
    SigPtr src;
    PresentableSignature dst;
    std::vector<Template> op_templates; // indexed like src->ops
};

inline TranslationMapping make_translation(
    SigPtr src, PresentableSignature dst,
    const std::vector<std::pair<std::string, Template>>& by_name) {
    std::vector<const Template*> slots(src->ops.size(), nullptr);
    for (const auto& [name, tpl] : by_name) {
        std::size_t i = src->require(name);
        if (slots[i])
            throw SignatureError("translation maps " + name + " twice");
        if (tpl.dst != dst.carrier)
            throw SignatureError("template for " + name + " targets the wrong signature");
        slots[i] = &tpl;
    }
    TranslationMapping out;
    out.src = src;
    out.dst = std::move(dst);
    out.op_templates.reserve(src->ops.size());
    for (std::size_t i = 0; i < src->ops.size(); ++i) {
        const OperationDecl& d = src->ops[i];
        if (d.is_family())
            throw SignatureError("translation mappings cover fixed operations only, " + d.name +
                                 " is a family");
        if (!slots[i])
            throw SignatureError("translation leaves " + d.name + " unmapped");
        validate_template(*slots[i], d.arity());
        out.op_templates.push_back(*slots[i]);
    }
    return out;
}

// Target terms (canonical forms, when the target has rules) as a model
// of the source signature: variables translate to themselves, bind is
// substitution followed by renormalization, and each operation grafts
// its template.  Folding this model is the translation.
inline Model<Term> translation_model(const TranslationMapping& tr) {
    Model<Term> m;
    m.sig = tr.src;
    SigPtr dst_sig = tr.dst.carrier;
    PresentableSignature dst = tr.dst;
    m.unit = [dst_sig](std::size_t i, Ctx n) { return Term::var(dst_sig, i, n); };
    m.bind = [dst](const Term& t, const std::vector<Term>& images, Ctx, Ctx cod) {
        Subst s;
        s.cod = cod;
        s.images = images;
        return quot_subst(dst, t, s);
    };
    for (std::size_t i = 0; i < tr.src->ops.size(); ++i) {
        Template tpl = tr.op_templates[i];
        m.actions.push_back([tpl, dst](std::size_t, std::vector<Term>&& args, Ctx n) {
            return nf(dst, instantiate(tpl, args, n));
        });
    }
    m.equal = [](const Term& a, const Term& b, Ctx) { return a == b; };
    return m;
}

inline Term translate(const TranslationMapping& tr, const Term& t) {
    return fold(translation_model(tr), t);
}

// The double-negation-flavored interpretation of the intuitionistic
// connectives inside the linear ones, one template per connective.
inline TranslationMapping make_lj_ll_translation() {
    SigPtr lj = make_lj_sig();
    SigPtr ll = make_ll_sig();
    auto meta = [&](std::size_t i) { return tpl_meta(ll, i); };
    auto bang = [&](Template t) { return tpl_op(ll, "bang", {std::move(t)}); };
    std::vector<std::pair<std::string, Template>> by_name;
    by_name.emplace_back("neg",
                         tpl_op(ll, "imp", {bang(meta(0)), tpl_op(ll, "zero", {})}));
    by_name.emplace_back("and", tpl_op(ll, "with", {meta(0), meta(1)}));
    by_name.emplace_back("or", tpl_op(ll, "plus", {bang(meta(0)), bang(meta(1))}));
    by_name.emplace_back("imp", tpl_op(ll, "imp", {bang(meta(0)), meta(1)}));
    by_name.emplace_back("all", tpl_op(ll, "all", {meta(0)}));
    by_name.emplace_back("ex", tpl_op(ll, "ex", {bang(meta(0))}));
    return make_translation(lj, presentable(ll, {}), by_name);
}

} // namespace bindsig
