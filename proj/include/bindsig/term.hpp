#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bindsig/context.hpp"
#include "bindsig/signature.hpp"

namespace bindsig {

// -------------------- terms --------------------

// Well-scoped terms over a signature.  Every term knows the context it
// lives in; an argument sitting under a slot that binds k variables lives
// in a context k larger than its parent, with the fresh variables at
// indices 0..k-1.  Terms are immutable and share subtrees freely.
class Term {
public:
    struct OpNode {
        std::size_t op;     // index into sig->ops
        std::size_t family; // no_family for fixed operations
        std::vector<Term> args;
    };

private:
    struct VarNode {
        std::size_t index;
    };
    struct Node {
        Ctx ctx;
        std::variant<VarNode, OpNode> body;
    };

    SigPtr sig_;
    std::shared_ptr<const Node> node_;

    Term(SigPtr sig, std::shared_ptr<const Node> node)
        : sig_(std::move(sig)), node_(std::move(node)) {}

public:
    Term() = default;

    static Term var(SigPtr sig, std::size_t index, Ctx ctx) {
        if (index >= ctx)
            throw ScopeError("variable " + std::to_string(index) +
                             " out of scope in context of size " + std::to_string(ctx));
        auto n = std::make_shared<Node>(Node{ctx, VarNode{index}});
        return Term(std::move(sig), std::move(n));
    }

    static Term op(SigPtr sig, std::size_t op_index, std::size_t family,
                   std::vector<Term> args, Ctx ctx) {
        if (op_index >= sig->ops.size())
            throw SignatureError("operation index " + std::to_string(op_index) +
                                 " out of range in signature " + sig->name);
        const OperationDecl& decl = sig->ops[op_index];
        BindingArity ar = decl.arity(family);
        if (ar.size() != args.size())
            throw ArityError(decl.name + " expects " + std::to_string(ar.size()) +
                             " arguments, got " + std::to_string(args.size()));
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i].sig_ != sig)
                throw SignatureError("argument " + std::to_string(i) + " of " + decl.name +
                                     " was built over a different signature");
            if (args[i].ctx() != ctx + ar.slots[i])
                throw ArityError("argument " + std::to_string(i) + " of " + decl.name +
                                 " lives in context " + std::to_string(args[i].ctx()) +
                                 ", slot wants " + std::to_string(ctx + ar.slots[i]));
        }
        auto n = std::make_shared<Node>(Node{ctx, OpNode{op_index, family, std::move(args)}});
        return Term(std::move(sig), std::move(n));
    }

    static Term op(const SigPtr& sig, std::string_view name, std::vector<Term> args, Ctx ctx) {
        return op(sig, sig->require(name), no_family, std::move(args), ctx);
    }

    static Term op(const SigPtr& sig, std::string_view name, std::size_t family,
                   std::vector<Term> args, Ctx ctx) {
        return op(sig, sig->require(name), family, std::move(args), ctx);
    }

    bool empty() const { return node_ == nullptr; }
    Ctx ctx() const { return node_->ctx; }
    const SigPtr& sig() const { return sig_; }

    bool is_var() const { return std::holds_alternative<VarNode>(node_->body); }
    std::size_t var_index() const { return std::get<VarNode>(node_->body).index; }

    const OpNode& op_node() const { return std::get<OpNode>(node_->body); }
    std::size_t op_index() const { return op_node().op; }
    std::size_t family() const { return op_node().family; }
    const std::vector<Term>& args() const { return op_node().args; }
    const OperationDecl& decl() const { return sig_->ops[op_index()]; }
    BindingArity arity() const { return decl().arity(family()); }

    // identity of the underlying node, for cheap same-object tests
    const void* id() const { return node_.get(); }
};

// Total order on terms of a common context: variables first (by index),
// then operations by declaration position, family index, and arguments
// lexicographically.  This is the order every canonical-form choice in
// the quotient machinery refers to.
inline int compare(const Term& a, const Term& b) {
    if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
    if (a.is_var()) {
        if (a.var_index() != b.var_index()) return a.var_index() < b.var_index() ? -1 : 1;
        return 0;
    }
    if (a.op_index() != b.op_index()) return a.op_index() < b.op_index() ? -1 : 1;
    if (a.family() != b.family()) return a.family() < b.family() ? -1 : 1;
    const auto& xs = a.args();
    const auto& ys = b.args();
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
        if (int c = compare(xs[i], ys[i])) return c;
    if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
    return 0;
}

inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator!=(const Term& a, const Term& b) { return compare(a, b) != 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

// Nameless rendering, mainly for diagnostics and structural keys:
// variables print as v0, v1, ...; family members as name@k.
inline std::string to_debug_string(const Term& t) {
    if (t.is_var()) return "v" + std::to_string(t.var_index());
    std::string s = "(" + t.decl().name;
    if (t.family() != no_family) s += "@" + std::to_string(t.family());
    for (const Term& a : t.args()) {
        s += " ";
        s += to_debug_string(a);
    }
    return s + ")";
}

// -------------------- renaming --------------------

inline Term rename(const Term& t, const Renaming& f) {
    if (t.ctx() != f.dom())
        throw ScopeError("rename: term in context " + std::to_string(t.ctx()) +
                         ", renaming from " + std::to_string(f.dom()));
    if (t.is_var()) return Term::var(t.sig(), f(t.var_index()), f.cod);
    BindingArity ar = t.arity();
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (std::size_t i = 0; i < t.args().size(); ++i)
        args.push_back(rename(t.args()[i], extend(f, ar.slots[i])));
    return Term::op(t.sig(), t.op_index(), t.family(), std::move(args), f.cod);
}

// Shift every free variable up by k, making room for k fresh ones.
inline Term weaken(const Term& t, std::size_t k) {
    return rename(t, weakening(t.ctx(), k));
}

// -------------------- substitution --------------------

// A simultaneous substitution: one replacement term per variable of the
// source context, all living in the target context `cod`.
struct Subst {
    Ctx cod = 0;
    std::vector<Term> images;

    Ctx dom() const { return images.size(); }
};

inline Subst identity_subst(const SigPtr& sig, Ctx n) {
    Subst s;
    s.cod = n;
    s.images.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.images.push_back(Term::var(sig, i, n));
    return s;
}

// Push a substitution under k binders: fresh variables map to themselves
// and every replacement term is weakened past them.
inline Subst lift(const Subst& s, const SigPtr& sig, std::size_t k) {
    if (k == 0) return s;
    Subst out;
    out.cod = s.cod + k;
    out.images.reserve(s.images.size() + k);
    for (std::size_t j = 0; j < k; ++j) out.images.push_back(Term::var(sig, j, out.cod));
    for (const Term& u : s.images) out.images.push_back(weaken(u, k));
    return out;
}

inline Term subst(const Term& t, const Subst& s) {
    if (t.ctx() != s.dom())
        throw ScopeError("subst: term in context " + std::to_string(t.ctx()) +
                         ", substitution from " + std::to_string(s.dom()));
    if (t.is_var()) {
        const Term& u = s.images[t.var_index()];
        if (u.ctx() != s.cod)
            throw ScopeError("subst: image of variable " + std::to_string(t.var_index()) +
                             " lives in context " + std::to_string(u.ctx()) +
                             ", expected " + std::to_string(s.cod));
        if (u.sig() != t.sig())
            throw SignatureError("subst: image terms built over a different signature");
        return u;
    }
    BindingArity ar = t.arity();
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (std::size_t i = 0; i < t.args().size(); ++i)
        args.push_back(subst(t.args()[i], lift(s, t.sig(), ar.slots[i])));
    return Term::op(t.sig(), t.op_index(), t.family(), std::move(args), s.cod);
}

// Replace the single freshest variable (index 0) of t by u and close the
// gap: the classic one-variable substitution.
inline Term sigma(const Term& t, const Term& u) {
    if (t.ctx() == 0)
        throw ScopeError("sigma needs a term with at least one variable in scope");
    if (t.ctx() != u.ctx() + 1)
        throw ScopeError("sigma: term context " + std::to_string(t.ctx()) +
                         " must be one above replacement context " + std::to_string(u.ctx()));
    Subst s;
    s.cod = u.ctx();
    s.images.reserve(t.ctx());
    s.images.push_back(u);
    for (std::size_t i = 0; i + 1 < t.ctx(); ++i)
        s.images.push_back(Term::var(t.sig(), i, s.cod));
    return subst(t, s);
}

// Replace the p freshest variables by the given terms (us[j] for index j)
// and shift the remaining free variables down by p.
inline Term subst_p(const Term& t, const std::vector<Term>& us) {
    std::size_t p = us.size();
    if (t.ctx() < p)
        throw ScopeError("subst_p: term context " + std::to_string(t.ctx()) +
                         " smaller than replacement count " + std::to_string(p));
    Ctx n = t.ctx() - p;
    Subst s;
    s.cod = n;
    s.images.reserve(t.ctx());
    for (const Term& u : us) {
        if (u.ctx() != n)
            throw ScopeError("subst_p: replacement lives in context " +
                             std::to_string(u.ctx()) + ", expected " + std::to_string(n));
        s.images.push_back(u);
    }
    for (std::size_t i = 0; i < n; ++i) s.images.push_back(Term::var(t.sig(), i, n));
    return subst(t, s);
}

// -------------------- one-layer views --------------------

// Peeling one layer off a term: either a variable index or an operation
// applied to arguments.  Rebuilding with Term::var / Term::op is the
// inverse; round-tripping is the identity in both directions.
using Decomposition = std::variant<std::size_t, Term::OpNode>;

inline Decomposition decompose(const Term& t) {
    if (t.is_var()) return t.var_index();
    return t.op_node();
}

inline Term recompose(const SigPtr& sig, const Decomposition& d, Ctx ctx) {
    if (std::holds_alternative<std::size_t>(d))
        return Term::var(sig, std::get<std::size_t>(d), ctx);
    const auto& o = std::get<Term::OpNode>(d);
    return Term::op(sig, o.op, o.family, o.args, ctx);
}

// -------------------- relabeling along a morphism --------------------

// Transport a term to another signature by relabeling its operations;
// arities match by the morphism's validity, so contexts are untouched.
inline Term map_signature(const SignatureMorphism& m, const Term& t) {
    if (t.sig() != m.src)
        throw SignatureError("map_signature: term not over the morphism's source");
    struct Walk {
        const SignatureMorphism& m;
        Term go(const Term& t) const {
            if (t.is_var()) return Term::var(m.dst, t.var_index(), t.ctx());
            std::vector<Term> args;
            args.reserve(t.args().size());
            for (const Term& a : t.args()) args.push_back(go(a));
            return Term::op(m.dst, m.on_op(t.op_index()), t.family(), std::move(args), t.ctx());
        }
    };
    return Walk{m}.go(t);
}

// Term depth: variables have depth 0, operations one more than their
// deepest argument.  Used for normalization budgets.
inline std::size_t depth(const Term& t) {
    if (t.is_var()) return 0;
    std::size_t d = 0;
    for (const Term& a : t.args()) d = std::max(d, depth(a));
    return 1 + d;
}

// The set of variables occurring free in t, as indices of t's context.
// Variables bound inside t drop out: an index v under a slot binding s
// contributes v - s when v >= s and nothing otherwise.
inline std::set<std::size_t> free_vars(const Term& t) {
    if (t.is_var()) return {t.var_index()};
    std::set<std::size_t> out;
    BindingArity ar = t.arity();
    for (std::size_t i = 0; i < t.args().size(); ++i)
        for (std::size_t v : free_vars(t.args()[i]))
            if (v >= ar.slots[i]) out.insert(v - ar.slots[i]);
    return out;
}

} // namespace bindsig
