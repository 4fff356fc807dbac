#pragma once

#include <cctype>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bindsig/models_std.hpp"
#include "bindsig/term.hpp"

namespace bindsig {

// Concrete syntax for terms:
//
//   term   ::= ident                   variable, or nullary operation
//            | (opname term ...)       fixed operation
//            | (opname@k term ...)     member k of an operation family
//   binder ::= (bind (x y ...) term)   required wherever a slot binds
//
// A bare identifier resolves against the binders in scope first (the
// leftmost name in a bind list is index 0, matching contexts, where the
// leftmost --ctx name is index 0), then against nullary operations.
// Templates additionally allow #1, #2, ... for the slots of the source
// operation being translated.

struct SExpr {
    bool is_atom = false;
    std::string atom;
    std::vector<SExpr> items;
};

namespace detail {

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return src[pos];
    }
    std::string atom() {
        std::size_t start = pos;
        while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
               src[pos] != '(' && src[pos] != ')')
            ++pos;
        return std::string(src.substr(start, pos - start));
    }
};

inline SExpr parse_sexpr_at(Lexer& lx) {
    if (lx.done()) throw ParseError("unexpected end of input");
    if (lx.peek() == '(') {
        ++lx.pos;
        SExpr list;
        for (;;) {
            if (lx.done()) throw ParseError("missing closing parenthesis");
            if (lx.peek() == ')') {
                ++lx.pos;
                return list;
            }
            list.items.push_back(parse_sexpr_at(lx));
        }
    }
    if (lx.peek() == ')') throw ParseError("unexpected closing parenthesis");
    SExpr a;
    a.is_atom = true;
    a.atom = lx.atom();
    return a;
}

inline std::size_t parse_nat(std::string_view s, const char* what) {
    if (s.empty()) throw ParseError(std::string("empty ") + what);
    std::size_t v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError(std::string(what) + " is not a number: " + std::string(s));
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

// opname or opname@k
struct OpRef {
    std::string name;
    std::size_t family = no_family;
};

inline OpRef parse_op_ref(const std::string& atom) {
    auto at = atom.find('@');
    if (at == std::string::npos) return OpRef{atom, no_family};
    OpRef r;
    r.name = atom.substr(0, at);
    r.family = parse_nat(std::string_view(atom).substr(at + 1), "family index");
    if (r.name.empty()) throw ParseError("missing operation name before @");
    return r;
}

inline std::size_t resolve_name(const std::vector<std::string>& scope, const std::string& name) {
    for (std::size_t i = 0; i < scope.size(); ++i)
        if (scope[i] == name) return i;
    return static_cast<std::size_t>(-1);
}

// scope[0] is index 0, the freshest variable
template <class Leaf>
auto elaborate(const SigPtr& sig, const SExpr& e, std::vector<std::string>& scope,
               const Leaf& leaf) -> decltype(leaf(std::size_t(0), std::size_t(0), true)) {
    using Out = decltype(leaf(std::size_t(0), std::size_t(0), true));
    if (e.is_atom) {
        if (!e.atom.empty() && e.atom[0] == '#')
            return leaf(parse_nat(std::string_view(e.atom).substr(1), "slot number"),
                        scope.size(), false);
        if (e.atom.find('@') != std::string::npos)
            throw ParseError("family member " + e.atom + " takes parentheses");
        std::size_t idx = resolve_name(scope, e.atom);
        if (idx != static_cast<std::size_t>(-1)) return leaf(idx, scope.size(), true);
        if (auto op = sig->find(e.atom)) {
            if (!sig->ops[*op].is_family() && sig->ops[*op].arity().size() == 0)
                return Out::nullary(sig, *op, scope.size());
        }
        throw ScopeError("unknown variable " + e.atom);
    }
    if (e.items.empty()) throw ParseError("empty application ()");
    if (!e.items[0].is_atom) throw ParseError("application head must be a name");
    OpRef ref = parse_op_ref(e.items[0].atom);
    if (ref.name == "bind")
        throw ParseError("bind is only allowed directly under a binding slot");
    auto opi = sig->find(ref.name);
    if (!opi) throw ScopeError("unknown operation " + ref.name);
    BindingArity ar = sig->ops[*opi].arity(ref.family); // throws on @ misuse
    if (ar.size() != e.items.size() - 1)
        throw ArityError(ref.name + " expects " + std::to_string(ar.size()) +
                         " arguments, got " + std::to_string(e.items.size() - 1));
    std::vector<Out> args;
    for (std::size_t i = 0; i < ar.size(); ++i) {
        const SExpr& arg = e.items[1 + i];
        std::size_t k = ar.slots[i];
        if (k == 0) {
            args.push_back(elaborate(sig, arg, scope, leaf));
            continue;
        }
        // (bind (x y ...) body)
        bool shaped = !arg.is_atom && arg.items.size() == 3 && arg.items[0].is_atom &&
                      arg.items[0].atom == "bind" && !arg.items[1].is_atom;
        if (!shaped)
            throw ArityError("argument " + std::to_string(i + 1) + " of " + ref.name +
                             " binds " + std::to_string(k) + " variables and needs (bind (...) term)");
        const SExpr& names = arg.items[1];
        if (names.items.size() != k)
            throw ArityError(ref.name + " binds " + std::to_string(k) + " variables here, got " +
                             std::to_string(names.items.size()) + " names");
        std::vector<std::string> inner;
        inner.reserve(k + scope.size());
        for (const SExpr& nm : names.items) {
            if (!nm.is_atom || nm.atom.empty())
                throw ParseError("binder names must be identifiers");
            inner.push_back(nm.atom);
        }
        inner.insert(inner.end(), scope.begin(), scope.end());
        args.push_back(elaborate(sig, arg.items[2], inner, leaf));
        // restore caller scope implicitly: inner was a copy
    }
    return Out::apply(sig, *opi, ref.family, std::move(args), scope.size());
}

// Leaf policies: plain terms reject #slots, templates accept them.
struct TermOut {
    Term t;
    static TermOut nullary(const SigPtr& sig, std::size_t op, std::size_t ctx) {
        return TermOut{Term::op(sig, op, no_family, {}, ctx)};
    }
    static TermOut apply(const SigPtr& sig, std::size_t op, std::size_t family,
                         std::vector<TermOut> args, std::size_t ctx) {
        std::vector<Term> ts;
        ts.reserve(args.size());
        for (auto& a : args) ts.push_back(std::move(a.t));
        return TermOut{Term::op(sig, op, family, std::move(ts), ctx)};
    }
};

struct TemplateOut {
    Template t;
    static TemplateOut nullary(const SigPtr& sig, std::size_t op, std::size_t) {
        return TemplateOut{tpl_op(sig, sig->ops[op].name, {})};
    }
    static TemplateOut apply(const SigPtr& sig, std::size_t op, std::size_t family,
                             std::vector<TemplateOut> args, std::size_t) {
        std::vector<Template> ts;
        ts.reserve(args.size());
        for (auto& a : args) ts.push_back(std::move(a.t));
        return TemplateOut{tpl_op(sig, sig->ops[op].name, family, std::move(ts))};
    }
};

} // namespace detail

inline SExpr parse_sexpr(std::string_view src) {
    detail::Lexer lx{src};
    SExpr e = detail::parse_sexpr_at(lx);
    if (!lx.done()) throw ParseError("trailing input after term");
    return e;
}

// Comma-separated context names, leftmost is index 0; empty string is
// the empty context.
inline std::vector<std::string> split_ctx(std::string_view s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            std::string name(s.substr(start, i - start));
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front())))
                name.erase(name.begin());
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
                name.pop_back();
            if (name.empty()) throw ParseError("empty name in context list");
            out.push_back(std::move(name));
            start = i + 1;
        }
    }
    return out;
}

inline Term parse_term(const SigPtr& sig, std::string_view src,
                       std::vector<std::string> ctx_names) {
    SExpr e = parse_sexpr(src);
    auto leaf = [&](std::size_t index, std::size_t ctx, bool is_var) -> detail::TermOut {
        if (!is_var) throw ParseError("#slots are only allowed in templates");
        return detail::TermOut{Term::var(sig, index, ctx)};
    };
    return detail::elaborate(sig, e, ctx_names, leaf).t;
}

// Templates live in the empty outer context: their only variables are
// the ones their own binders introduce.  Slots are written #1, #2, ...
inline Template parse_template(const SigPtr& sig, std::string_view src) {
    SExpr e = parse_sexpr(src);
    std::vector<std::string> scope;
    auto leaf = [&](std::size_t index, std::size_t, bool is_var) -> detail::TemplateOut {
        if (is_var) return detail::TemplateOut{tpl_var(sig, index)};
        if (index == 0) throw ParseError("slots count from #1");
        return detail::TemplateOut{tpl_meta(sig, index - 1)};
    };
    return detail::elaborate(sig, e, scope, leaf).t;
}

// -------------------- printing --------------------

namespace detail {

inline std::string fresh_binder_name(std::set<std::string>& used) {
    static const char* pool[] = {"x", "y", "z", "u", "v", "w"};
    for (const char* p : pool)
        if (used.insert(p).second) return p;
    for (std::size_t k = 1;; ++k)
        for (const char* p : pool) {
            std::string cand = std::string(p) + std::to_string(k);
            if (used.insert(cand).second) return cand;
        }
}

inline void print_term_at(const Term& t, std::vector<std::string>& scope,
                          std::set<std::string>& used, std::string& out) {
    if (t.is_var()) {
        out += scope[t.var_index()];
        return;
    }
    const OperationDecl& d = t.decl();
    if (!d.is_family() && t.args().empty()) {
        out += d.name;
        return;
    }
    out += "(" + d.name;
    if (t.family() != no_family) out += "@" + std::to_string(t.family());
    BindingArity ar = t.arity();
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        out += " ";
        std::size_t k = ar.slots[i];
        if (k == 0) {
            print_term_at(t.args()[i], scope, used, out);
            continue;
        }
        std::vector<std::string> names;
        names.reserve(k);
        for (std::size_t j = 0; j < k; ++j) names.push_back(fresh_binder_name(used));
        out += "(bind (";
        for (std::size_t j = 0; j < k; ++j) {
            if (j) out += " ";
            out += names[j];
        }
        out += ") ";
        std::vector<std::string> inner = names;
        inner.insert(inner.end(), scope.begin(), scope.end());
        print_term_at(t.args()[i], inner, used, out);
        out += ")";
        for (const std::string& nm : names) used.erase(nm);
    }
    out += ")";
}

} // namespace detail

// Inverse of parse_term for the same context names; generated binder
// names avoid the context names and every operation name, so the output
// parses back to the same term.
inline std::string print_term(const Term& t, std::vector<std::string> ctx_names) {
    if (ctx_names.size() != t.ctx())
        throw ScopeError("print_term: " + std::to_string(ctx_names.size()) +
                         " names for a term in context " + std::to_string(t.ctx()));
    std::set<std::string> used(ctx_names.begin(), ctx_names.end());
    for (const auto& d : t.sig()->ops) used.insert(d.name);
    std::string out;
    detail::print_term_at(t, ctx_names, used, out);
    return out;
}

} // namespace bindsig
