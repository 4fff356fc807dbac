#include <catch2/catch_amalgamated.hpp>

#include "bindsig/quotient.hpp"
#include "bindsig/sigfile.hpp"

#include "oracle.hpp"

using namespace bindsig;
using namespace oracle;

namespace {

std::string fixture(const std::string& name) {
    return std::string(BINDSIG_FIXTURES_DIR) + "/" + name;
}

Term leaf_at(const SigPtr& sig, Ctx n) {
    return Term::op(sig, *sig->find("leaf"), no_family, {}, n);
}

} // namespace

TEST_CASE("commutative canonical forms sort both arguments everywhere") {
    RuleUniverse u = universe_commutative();
    const SigPtr& sig = u.p.carrier;
    std::size_t par = *sig->find("par");
    std::size_t nil = *sig->find("nil");
    std::size_t nw = *sig->find("new");

    Term a = Term::var(sig, 0, 1);
    Term b = Term::op(sig, nil, no_family, {}, 1);
    Term ba = Term::op(sig, par, no_family, {b, a}, 1);
    Term ab = Term::op(sig, par, no_family, {a, b}, 1);
    REQUIRE(nf(u.p, ba) == ab);
    REQUIRE(nf(u.p, ab) == ab);

    // sorting reaches under binders too
    Term deep_l = Term::op(sig, nw, no_family,
                           {Term::op(sig, par, no_family,
                                     {Term::op(sig, nil, no_family, {}, 2),
                                      Term::var(sig, 0, 2)},
                                     2)},
                           1);
    Term deep_r = Term::op(sig, nw, no_family,
                           {Term::op(sig, par, no_family,
                                     {Term::var(sig, 0, 2),
                                      Term::op(sig, nil, no_family, {}, 2)},
                                     2)},
                           1);
    REQUIRE(quot_eq(u.p, deep_l, deep_r));
}

TEST_CASE("finset canonical forms sort and deduplicate") {
    RuleUniverse u = universe_finset();
    const SigPtr& sig = u.p.carrier;
    std::size_t set = *sig->find("set");
    Term v = Term::var(sig, 0, 1);
    Term l = leaf_at(sig, 1);

    Term t = Term::op(sig, set, 3, {l, v, l}, 1);
    Term want = Term::op(sig, set, 2, {v, l}, 1);
    REQUIRE(nf(u.p, t) == want);

    // the empty and singleton members stay put
    Term empty = Term::op(sig, set, 0, {}, 1);
    REQUIRE(nf(u.p, empty) == empty);
    REQUIRE(quot_eq(u.p, Term::op(sig, set, 2, {v, v}, 1), Term::op(sig, set, 1, {v}, 1)));
}

TEST_CASE("multiset canonical forms sort but keep duplicates") {
    RuleUniverse u = universe_multiset();
    const SigPtr& sig = u.p.carrier;
    std::size_t bag = *sig->find("bag");
    Term v = Term::var(sig, 0, 1);
    Term l = leaf_at(sig, 1);

    REQUIRE(nf(u.p, Term::op(sig, bag, 2, {l, v}, 1)) == Term::op(sig, bag, 2, {v, l}, 1));
    REQUIRE_FALSE(quot_eq(u.p, Term::op(sig, bag, 2, {v, v}, 1),
                          Term::op(sig, bag, 1, {v}, 1)));
}

TEST_CASE("sym-binder canonical forms drop unused binders and relabel") {
    RuleUniverse u = universe_sym_binder();
    const SigPtr& sig = u.p.carrier;
    std::size_t nu = *sig->find("nu");
    std::size_t pair = *sig->find("pair");

    // two bound variables used in either order are the same point
    Term swapped = Term::op(sig, nu, 2,
                            {Term::op(sig, pair, no_family,
                                      {Term::var(sig, 1, 3), Term::var(sig, 0, 3)}, 3)},
                            1);
    Term straight = Term::op(sig, nu, 2,
                             {Term::op(sig, pair, no_family,
                                       {Term::var(sig, 0, 3), Term::var(sig, 1, 3)}, 3)},
                             1);
    REQUIRE(quot_eq(u.p, swapped, straight));

    // an unused binder disappears
    Term lazy = Term::op(sig, nu, 2,
                         {Term::op(sig, pair, no_family,
                                   {Term::var(sig, 1, 3), Term::var(sig, 1, 3)}, 3)},
                         1);
    Term tight = Term::op(sig, nu, 1,
                          {Term::op(sig, pair, no_family,
                                    {Term::var(sig, 0, 2), Term::var(sig, 0, 2)}, 2)},
                          1);
    REQUIRE(nf(u.p, lazy) == nf(u.p, tight));

    // the free variable is not a binder and stays
    Term free_use = Term::op(sig, nu, 1, {Term::var(sig, 1, 2)}, 1);
    REQUIRE(nf(u.p, free_use).family() == 0);
}

TEST_CASE("coend-subst canonical forms drop, share and reorder positions") {
    RuleUniverse u = universe_coend_subst();
    const SigPtr& sig = u.p.carrier;
    std::size_t sub = *sig->find("sub");
    std::size_t pair = *sig->find("pair");
    Term v0 = Term::var(sig, 0, 1);
    Term l = leaf_at(sig, 1);

    // unused position: sub(x. x, leaf at an unused slot) loses the slot
    Term unused = Term::op(sig, sub, 1, {Term::var(sig, 1, 2), l}, 1);
    Term bare = Term::op(sig, sub, 0, {Term::var(sig, 0, 1)}, 1);
    REQUIRE(quot_eq(u.p, unused, bare));

    // equal images share one position
    Term both = Term::op(sig, sub, 2,
                         {Term::op(sig, pair, no_family,
                                   {Term::var(sig, 0, 3), Term::var(sig, 1, 3)}, 3),
                          l, l},
                         1);
    Term shared = Term::op(sig, sub, 1,
                           {Term::op(sig, pair, no_family,
                                     {Term::var(sig, 0, 2), Term::var(sig, 0, 2)}, 2),
                            l},
                           1);
    REQUIRE(quot_eq(u.p, both, shared));

    // positions in the other order are the same point
    Term ordered = Term::op(sig, sub, 2,
                            {Term::op(sig, pair, no_family,
                                      {Term::var(sig, 0, 3), Term::var(sig, 1, 3)}, 3),
                             v0, l},
                            1);
    Term reversed = Term::op(sig, sub, 2,
                             {Term::op(sig, pair, no_family,
                                       {Term::var(sig, 1, 3), Term::var(sig, 0, 3)}, 3),
                              l, v0},
                             1);
    REQUIRE(quot_eq(u.p, ordered, reversed));
}

TEST_CASE("fixpoint canonical forms respect the reference structure") {
    RuleUniverse u = universe_fixpoint_graphs();
    const SigPtr& sig = u.p.carrier;
    std::size_t fix = *sig->find("fix");
    auto graph = [&](std::size_t lv, std::size_t c, std::vector<std::size_t> refs) {
        std::vector<Term> comps;
        for (std::size_t r : refs) comps.push_back(Term::var(sig, r, lv));
        return Term::op(sig, fix, fixpoint_index(lv, c), std::move(comps), 0);
    };

    // relabeling components and the selection together changes nothing
    REQUIRE(quot_eq(u.p, graph(2, 0, {0, 1}), graph(2, 1, {0, 1})));

    // a two-cycle is not a pair of self-loops
    REQUIRE_FALSE(quot_eq(u.p, graph(2, 0, {1, 0}), graph(2, 0, {0, 1})));

    // equal components share; nobody references the spare copy afterwards
    REQUIRE(quot_eq(u.p, graph(2, 0, {0, 0}), graph(1, 0, {0})));

    // an unreferenced component disappears
    Term dead = Term::op(sig, fix, fixpoint_index(2, 0),
                         {Term::var(sig, 0, 2), leaf_at(sig, 2)}, 0);
    REQUIRE(quot_eq(u.p, dead, graph(1, 0, {0})));

    // a self-loop is referenced by itself, so it stays
    REQUIRE_FALSE(quot_eq(u.p, graph(2, 0, {0, 1}), graph(1, 0, {0})));
}

TEST_CASE("canonicalizers match the saturated move closure") {
    for (const RuleUniverse& u : all_rule_universes()) {
        DYNAMIC_SECTION(u.name) {
            std::vector<std::string> bad = closure_mismatches(u);
            for (const std::string& msg : bad) UNSCOPED_INFO(msg);
            REQUIRE(bad.empty());
        }
    }
}

TEST_CASE("normal forms are stable for every rule") {
    LawOptions o;
    o.samples = 300;
    o.seed = 17;
    o.max_depth = 4;
    for (const RuleUniverse& u : all_rule_universes()) {
        DYNAMIC_SECTION(u.name) {
            LawReport rep = check_compatibility(u.p, o);
            for (const auto& r : rep.results) {
                INFO(r.name << ": " << r.counterexample);
                REQUIRE(r.failures == 0);
            }
        }
    }
}

TEST_CASE("a non-congruent canonicalizer fails the compatibility check") {
    SigPtr sig = make_signature("broken", {op_decl("nil", {}), op_decl("par", {0, 0}),
                                           op_decl("new", {1})});
    PresentableSignature p =
        presentable(sig, {QuotientRule{RuleKind::broken_commutative, *sig->find("par")}});

    // substitution puts an unsorted pair under the binder, where the
    // top-only sort cannot reach it; presorting the image does
    std::size_t par = *sig->find("par");
    std::size_t nil = *sig->find("nil");
    std::size_t nw = *sig->find("new");
    Term t = Term::op(sig, nw, no_family, {Term::var(sig, 1, 2)}, 1);
    Subst s;
    s.cod = 1;
    s.images = {Term::op(sig, par, no_family,
                         {Term::op(sig, nil, no_family, {}, 1), Term::var(sig, 0, 1)}, 1)};
    Subst canon_s;
    canon_s.cod = 1;
    canon_s.images = {nf(p, s.images[0])};
    REQUIRE(nf(p, subst(t, s)) != nf(p, subst(nf(p, t), canon_s)));

    LawOptions o;
    o.samples = 2000;
    o.seed = 3;
    REQUIRE_FALSE(check_compatibility(p, o).pass());
}

TEST_CASE("substitution in the quotient normalizes its result") {
    RuleUniverse u = universe_commutative();
    const SigPtr& sig = u.p.carrier;
    Rng rng(31);
    GenOptions g;
    for (int i = 0; i < 200; ++i) {
        Ctx n = 1 + rng.below(3);
        Ctx m = 1 + rng.below(3);
        Term t = random_term(sig, n, 4, rng, g);
        Subst s = random_subst(sig, n, m, 3, rng, g);
        Term direct = quot_subst(u.p, t, s);
        REQUIRE(direct == nf(u.p, direct));
        REQUIRE(direct == nf(u.p, subst(t, s)));
    }
}

TEST_CASE("signature files load with their quotient rules") {
    PresentableSignature pi = load_signature_file(fixture("pi.sig.json"));
    REQUIRE(pi.carrier->name == "pi");
    REQUIRE(pi.rules.size() == 1);
    REQUIRE(pi.rules[0].kind == RuleKind::commutative);
    REQUIRE(pi.rules[0].op == *pi.carrier->find("par"));

    PresentableSignature fixp = load_signature_file(fixture("fixpoint.sig.json"));
    REQUIRE(fixp.carrier->ops[*fixp.carrier->find("fix")].is_family());
    REQUIRE(fixp.rules[0].kind == RuleKind::fixpoint);

    PresentableSignature broken = load_signature_file(fixture("broken.sig.json"));
    REQUIRE(broken.rules[0].kind == RuleKind::broken_commutative);
}

TEST_CASE("malformed signature files are rejected") {
    REQUIRE_THROWS_AS(parse_signature_json(nlohmann::json::parse("[1,2]")), SchemaError);
    REQUIRE_THROWS_AS(
        parse_signature_json(nlohmann::json::parse(R"({"ops": [{"name": "f"}]})")),
        SchemaError);
    REQUIRE_THROWS_AS(
        parse_signature_json(nlohmann::json::parse(
            R"({"ops": [{"name": "f", "arity": [0], "family": {"kind": "powers"}}]})")),
        SchemaError);
    REQUIRE_THROWS_AS(
        parse_signature_json(nlohmann::json::parse(
            R"({"ops": [{"name": "f", "arity": []}],
                "quotient": [{"kind": "commutative", "op": "g"}]})")),
        SchemaError);
    // a commutative rule needs a binary fixed operation
    REQUIRE_THROWS_AS(
        parse_signature_json(nlohmann::json::parse(
            R"({"ops": [{"name": "f", "arity": [0]}],
                "quotient": [{"kind": "commutative", "op": "f"}]})")),
        SchemaError);
}
