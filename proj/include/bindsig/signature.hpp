#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bindsig/errors.hpp"

namespace bindsig {

// -------------------- binding arities --------------------

// The arity of an operation is a list of naturals, one per argument: the
// entry says how many fresh variables that argument binds.  app is (0,0),
// abs is (1), a quantifier is (1), a nullary constant is ().
struct BindingArity {
    std::vector<std::size_t> slots;

    std::size_t size() const { return slots.size(); }
    bool operator==(const BindingArity& o) const { return slots == o.slots; }
    bool operator!=(const BindingArity& o) const { return !(*this == o); }
};

inline std::string to_string(const BindingArity& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.slots.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a.slots[i]);
    }
    return s + ")";
}

// -------------------- operation families --------------------

// Some operations come in countable families: one declaration, one arity
// per index.  The index is part of the term (written op@k in concrete
// syntax).  The builtin shapes below are the ones the JSON schema knows;
// `custom` covers schemes produced by signature products.
enum class SchemeKind { powers, binder_seq, esubst, fixpoint, custom };

// Family indices for the fixpoint scheme pack a pair (level n >= 1,
// selected component c < n) into one natural via the triangular pairing
// k = n(n-1)/2 + c.  Level n has arity (n,...,n), n slots.
inline std::size_t fixpoint_index(std::size_t level, std::size_t component) {
    if (level == 0 || component >= level)
        throw SignatureError("fixpoint index wants level >= 1 and component < level");
    return level * (level - 1) / 2 + component;
}

struct FixpointShape {
    std::size_t level;
    std::size_t component;
};

inline FixpointShape fixpoint_split(std::size_t k) {
    std::size_t n = 1;
    while ((n + 1) * n / 2 <= k) ++n;
    return FixpointShape{n, k - n * (n - 1) / 2};
}

struct FamilyScheme {
    SchemeKind kind = SchemeKind::custom;
    std::function<BindingArity(std::size_t)> arity;
};

inline FamilyScheme builtin_scheme(SchemeKind kind) {
    FamilyScheme s;
    s.kind = kind;
    switch (kind) {
    case SchemeKind::powers:
        // k arguments, none binding: tuples of every width
        s.arity = [](std::size_t k) {
            return BindingArity{std::vector<std::size_t>(k, 0)};
        };
        break;
    case SchemeKind::binder_seq:
        // one argument binding k variables
        s.arity = [](std::size_t k) { return BindingArity{{k}}; };
        break;
    case SchemeKind::esubst:
        // a body binding p variables followed by p ordinary arguments
        s.arity = [](std::size_t p) {
            std::vector<std::size_t> slots(1 + p, 0);
            slots[0] = p;
            return BindingArity{std::move(slots)};
        };
        break;
    case SchemeKind::fixpoint:
        // level n: n mutually recursive components, each binding all n
        s.arity = [](std::size_t k) {
            std::size_t n = fixpoint_split(k).level;
            return BindingArity{std::vector<std::size_t>(n, n)};
        };
        break;
    case SchemeKind::custom:
        throw SignatureError("custom schemes carry their own arity function");
    }
    return s;
}

// Two schemes are considered equal when they are the same builtin, or
// otherwise when they agree on a prefix of sample indices.  Custom
// schemes have no finite description, so sampling is the best available
// check; callers that need exactness should stick to builtins.
inline bool scheme_equal(const FamilyScheme& a, const FamilyScheme& b,
                         std::size_t sample_indices = 9) {
    if (a.kind != SchemeKind::custom && a.kind == b.kind) return true;
    for (std::size_t k = 0; k < sample_indices; ++k)
        if (a.arity(k) != b.arity(k)) return false;
    return true;
}

// -------------------- declarations and signatures --------------------

constexpr std::size_t no_family = static_cast<std::size_t>(-1);

struct OperationDecl {
    std::string name;
    std::variant<BindingArity, FamilyScheme> shape;

    bool is_family() const { return std::holds_alternative<FamilyScheme>(shape); }

    const FamilyScheme& scheme() const {
        if (!is_family())
            throw SignatureError("operation " + name + " is not a family");
        return std::get<FamilyScheme>(shape);
    }

    // Arity of this operation at a given family index.  Fixed operations
    // take family == no_family, families take a concrete index.
    BindingArity arity(std::size_t family = no_family) const {
        if (is_family()) {
            if (family == no_family)
                throw ArityError("operation " + name + " is a family and needs an index");
            return std::get<FamilyScheme>(shape).arity(family);
        }
        if (family != no_family)
            throw ArityError("operation " + name + " is not a family but got index " +
                             std::to_string(family));
        return std::get<BindingArity>(shape);
    }
};

inline OperationDecl op_decl(std::string name, std::vector<std::size_t> slots) {
    return OperationDecl{std::move(name), BindingArity{std::move(slots)}};
}

inline OperationDecl family_decl(std::string name, SchemeKind kind) {
    return OperationDecl{std::move(name), builtin_scheme(kind)};
}

inline OperationDecl family_decl(std::string name, FamilyScheme scheme) {
    return OperationDecl{std::move(name), std::move(scheme)};
}

struct AlgebraicSignature {
    std::string name;
    std::vector<OperationDecl> ops;

    std::optional<std::size_t> find(std::string_view op_name) const {
        for (std::size_t i = 0; i < ops.size(); ++i)
            if (ops[i].name == op_name) return i;
        return std::nullopt;
    }

    std::size_t require(std::string_view op_name) const {
        if (auto i = find(op_name)) return *i;
        throw SignatureError("signature " + name + " has no operation named " +
                             std::string(op_name));
    }
};

using SigPtr = std::shared_ptr<const AlgebraicSignature>;

inline SigPtr make_signature(std::string name, std::vector<OperationDecl> ops) {
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j)
            if (ops[i].name == ops[j].name)
                throw SignatureError("duplicate operation name " + ops[i].name +
                                     " in signature " + name);
    auto sig = std::make_shared<AlgebraicSignature>();
    sig->name = std::move(name);
    sig->ops = std::move(ops);
    return sig;
}

// -------------------- morphisms --------------------

// A signature morphism sends operations to operations with exactly the
// same binding arity (family indices pass through untouched, so families
// must map to families with the same scheme).
struct SignatureMorphism {
    SigPtr src;
    SigPtr dst;
    std::vector<std::size_t> op_map; // one entry per src operation

    std::size_t on_op(std::size_t i) const {
        if (i >= op_map.size())
            throw SignatureError("morphism applied to unknown operation index " +
                                 std::to_string(i));
        return op_map[i];
    }
};

inline SignatureMorphism make_morphism(SigPtr src, SigPtr dst,
                                       std::vector<std::size_t> op_map) {
    if (op_map.size() != src->ops.size())
        throw SignatureError("morphism map covers " + std::to_string(op_map.size()) +
                             " operations, signature " + src->name + " has " +
                             std::to_string(src->ops.size()));
    for (std::size_t i = 0; i < op_map.size(); ++i) {
        if (op_map[i] >= dst->ops.size())
            throw SignatureError("morphism target index out of range for " +
                                 src->ops[i].name);
        const auto& a = src->ops[i];
        const auto& b = dst->ops[op_map[i]];
        if (a.is_family() != b.is_family())
            throw SignatureError("morphism maps " + a.name + " across the family/fixed divide");
        if (a.is_family()) {
            if (!scheme_equal(a.scheme(), b.scheme()))
                throw SignatureError("morphism does not preserve the family scheme of " + a.name);
        } else if (a.arity() != b.arity()) {
            throw SignatureError("morphism does not preserve the arity of " + a.name +
                                 ": " + to_string(a.arity()) + " vs " + to_string(b.arity()));
        }
    }
    return SignatureMorphism{std::move(src), std::move(dst), std::move(op_map)};
}

// Convenience: map every src operation to the dst operation of the same
// name.  This is the usual inclusion into a sum.
inline SignatureMorphism morphism_by_name(SigPtr src, SigPtr dst) {
    std::vector<std::size_t> m;
    m.reserve(src->ops.size());
    for (const auto& o : src->ops) m.push_back(dst->require(o.name));
    return make_morphism(std::move(src), std::move(dst), std::move(m));
}

// -------------------- sums, products, pushouts --------------------

namespace detail {
// Deterministic clash repair: keep the first owner of a name, later ones
// get $2, $3, ... appended.
inline std::string fresh_name(std::string base, const std::vector<OperationDecl>& taken,
                              std::vector<std::pair<std::string, std::string>>* renamed) {
    auto used = [&](const std::string& n) {
        return std::any_of(taken.begin(), taken.end(),
                           [&](const OperationDecl& d) { return d.name == n; });
    };
    if (!used(base)) return base;
    for (std::size_t k = 2;; ++k) {
        std::string cand = base + "$" + std::to_string(k);
        if (!used(cand)) {
            if (renamed) renamed->emplace_back(base, cand);
            return cand;
        }
    }
}
} // namespace detail

struct CoproductResult {
    SigPtr sig;
    SignatureMorphism left;
    SignatureMorphism right;
    // (original, renamed) pairs for right-hand operations that clashed
    std::vector<std::pair<std::string, std::string>> renamed;
};

inline CoproductResult coproduct(const SigPtr& a, const SigPtr& b) {
    CoproductResult out;
    std::vector<OperationDecl> ops = a->ops;
    std::vector<std::size_t> lmap(a->ops.size()), rmap(b->ops.size());
    for (std::size_t i = 0; i < a->ops.size(); ++i) lmap[i] = i;
    for (std::size_t j = 0; j < b->ops.size(); ++j) {
        OperationDecl d = b->ops[j];
        d.name = detail::fresh_name(d.name, ops, &out.renamed);
        rmap[j] = ops.size();
        ops.push_back(std::move(d));
    }
    out.sig = make_signature(a->name + "+" + b->name, std::move(ops));
    out.left = make_morphism(a, out.sig, std::move(lmap));
    out.right = make_morphism(b, out.sig, std::move(rmap));
    return out;
}

// Product of signatures: one operation per pair, and its arguments are
// the left operation's arguments followed by the right's.  Families
// stay families; a pair of families is indexed by a pair of naturals
// packed with the usual diagonal pairing.
inline SigPtr product(const SigPtr& a, const SigPtr& b) {
    auto pair_slots = [](BindingArity x, const BindingArity& y) {
        x.slots.insert(x.slots.end(), y.slots.begin(), y.slots.end());
        return x;
    };
    std::vector<OperationDecl> ops;
    for (const auto& oa : a->ops) {
        for (const auto& ob : b->ops) {
            std::string nm = detail::fresh_name(oa.name + "*" + ob.name, ops, nullptr);
            if (!oa.is_family() && !ob.is_family()) {
                ops.push_back(op_decl(nm, pair_slots(oa.arity(), ob.arity()).slots));
            } else if (oa.is_family() != ob.is_family()) {
                // one side fixed, the other a family over the same index
                FamilyScheme s;
                s.kind = SchemeKind::custom;
                if (oa.is_family()) {
                    auto fa = oa.scheme().arity;
                    auto fixed = ob.arity();
                    s.arity = [=](std::size_t k) { return pair_slots(fa(k), fixed); };
                } else {
                    auto fixed = oa.arity();
                    auto fb = ob.scheme().arity;
                    s.arity = [=](std::size_t k) { return pair_slots(fixed, fb(k)); };
                }
                ops.push_back(family_decl(nm, std::move(s)));
            } else {
                FamilyScheme s;
                s.kind = SchemeKind::custom;
                auto fa = oa.scheme().arity;
                auto fb = ob.scheme().arity;
                // Cantor unpairing: k enumerates pairs (i,j) along diagonals
                s.arity = [=](std::size_t k) {
                    std::size_t d = 0;
                    while ((d + 1) * (d + 2) / 2 <= k) ++d;
                    std::size_t i = k - d * (d + 1) / 2;
                    return pair_slots(fa(i), fb(d - i));
                };
                ops.push_back(family_decl(nm, std::move(s)));
            }
        }
    }
    return make_signature(a->name + "*" + b->name, std::move(ops));
}

struct PushoutResult {
    SigPtr sig;
    SignatureMorphism inj1; // from f.dst
    SignatureMorphism inj2; // from g.dst
    SignatureMorphism leg1; // f itself, kept so users of the result can
    SignatureMorphism leg2; // still see the shared signature
};

// Set-level pushout of operation sets along f : S0 -> S1, g : S0 -> S2.
// Operations of S1 and S2 are glued whenever they are images of the same
// S0 operation (closed off transitively).  Glued operations must agree
// in arity; morphism validation makes a mismatch impossible, but it is
// still reported rather than assumed.
inline PushoutResult pushout(const SignatureMorphism& f, const SignatureMorphism& g) {
    if (f.src != g.src)
        throw SignatureError("pushout legs must share their source signature");
    const auto& s1 = f.dst;
    const auto& s2 = g.dst;
    std::size_t n1 = s1->ops.size(), n2 = s2->ops.size();

    // union-find over the disjoint sum: [0,n1) from s1, [n1,n1+n2) from s2
    std::vector<std::size_t> parent(n1 + n2);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t s = 0; s < f.src->ops.size(); ++s) {
        std::size_t x = find(f.on_op(s)), y = find(n1 + g.on_op(s));
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }

    std::vector<OperationDecl> ops;
    std::vector<std::size_t> class_op(n1 + n2, no_family);
    std::vector<std::size_t> m1(n1), m2(n2);
    auto decl_of = [&](std::size_t x) -> const OperationDecl& {
        return x < n1 ? s1->ops[x] : s2->ops[x - n1];
    };
    for (std::size_t x = 0; x < n1 + n2; ++x) {
        std::size_t root = find(x);
        if (class_op[root] == no_family) {
            OperationDecl d = decl_of(root);
            const OperationDecl& here = decl_of(x);
            if (here.is_family() != d.is_family() ||
                (d.is_family() ? !scheme_equal(here.scheme(), d.scheme())
                               : here.arity() != d.arity()))
                throw SignatureError("pushout glues operations of different arity: " +
                                     d.name + " / " + here.name);
            d.name = detail::fresh_name(d.name, ops, nullptr);
            class_op[root] = ops.size();
            ops.push_back(std::move(d));
        } else {
            const OperationDecl& rep = ops[class_op[root]];
            const OperationDecl& here = decl_of(x);
            if (here.is_family() != rep.is_family() ||
                (rep.is_family() ? !scheme_equal(here.scheme(), rep.scheme())
                                 : here.arity() != rep.arity()))
                throw SignatureError("pushout glues operations of different arity: " +
                                     rep.name + " / " + here.name);
        }
        (x < n1 ? m1[x] : m2[x - n1]) = class_op[root];
    }

    PushoutResult out;
    out.sig = make_signature(s1->name + "+_" + f.src->name + "+" + s2->name, std::move(ops));
    out.inj1 = make_morphism(s1, out.sig, std::move(m1));
    out.inj2 = make_morphism(s2, out.sig, std::move(m2));
    out.leg1 = f;
    out.leg2 = g;
    return out;
}

} // namespace bindsig
