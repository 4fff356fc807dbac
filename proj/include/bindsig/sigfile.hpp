#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bindsig/quotient.hpp"
#include "bindsig/sexpr.hpp"
#include "bindsig/signature.hpp"

namespace bindsig {

// Signature files:
//
//   {
//     "name": "pi",
//     "ops": [
//       {"name": "par", "arity": [0, 0]},
//       {"name": "mx", "family": {"kind": "powers"}}
//     ],
//     "quotient": [{"kind": "commutative", "op": "par"}]
//   }
//
// Family kinds: powers, binder-seq, esubst, fixpoint.  Quotient kinds:
// commutative, finset, multiset, sym-binder, coend-subst, fixpoint.
// The quotient list is optional.
//
// Mapping files point at a source and target signature file (relative
// paths resolve against the mapping file's directory) and give one
// template per source operation, with #1, #2, ... for its arguments:
//
//   {"src": "lj.sig.json", "dst": "ll.sig.json",
//    "map": {"neg": "(imp (bang #1) zero)", ...}}

namespace detail {

inline SchemeKind scheme_kind_of(const std::string& s) {
    if (s == "powers") return SchemeKind::powers;
    if (s == "binder-seq") return SchemeKind::binder_seq;
    if (s == "esubst") return SchemeKind::esubst;
    if (s == "fixpoint") return SchemeKind::fixpoint;
    throw SchemaError("unknown family kind " + s);
}

inline RuleKind rule_kind_of(const std::string& s) {
    if (s == "commutative") return RuleKind::commutative;
    if (s == "finset") return RuleKind::finset;
    if (s == "multiset") return RuleKind::multiset;
    if (s == "sym-binder") return RuleKind::sym_binder;
    if (s == "coend-subst") return RuleKind::coend_subst;
    if (s == "fixpoint") return RuleKind::fixpoint;
    // test fixture for the failing path of the compatibility check
    if (s == "broken-commutative") return RuleKind::broken_commutative;
    throw SchemaError("unknown quotient kind " + s);
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return j;
}

} // namespace detail

inline PresentableSignature parse_signature_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw SchemaError("signature file must hold a JSON object");
        std::string name = j.value("name", std::string("unnamed"));
        if (!j.contains("ops") || !j["ops"].is_array())
            throw SchemaError("signature needs an \"ops\" array");

        std::vector<OperationDecl> ops;
        for (const auto& o : j["ops"]) {
            if (!o.is_object() || !o.contains("name") || !o["name"].is_string())
                throw SchemaError("every op needs a \"name\"");
            std::string op_name = o["name"].get<std::string>();
            bool has_arity = o.contains("arity");
            bool has_family = o.contains("family");
            if (has_arity == has_family)
                throw SchemaError("op " + op_name + " needs exactly one of \"arity\" or \"family\"");
            if (has_arity) {
                if (!o["arity"].is_array())
                    throw SchemaError("op " + op_name + ": \"arity\" must be an array of naturals");
                std::vector<std::size_t> slots;
                for (const auto& s : o["arity"]) {
                    if (!s.is_number_unsigned())
                        throw SchemaError("op " + op_name + ": arity entries are naturals");
                    slots.push_back(s.get<std::size_t>());
                }
                ops.push_back(op_decl(op_name, std::move(slots)));
            } else {
                if (!o["family"].is_object() || !o["family"].contains("kind") ||
                    !o["family"]["kind"].is_string())
                    throw SchemaError("op " + op_name + ": \"family\" needs a \"kind\"");
                ops.push_back(family_decl(
                    op_name, detail::scheme_kind_of(o["family"]["kind"].get<std::string>())));
            }
        }
        SigPtr sig = make_signature(std::move(name), std::move(ops));

        std::vector<QuotientRule> rules;
        if (j.contains("quotient")) {
            if (!j["quotient"].is_array())
                throw SchemaError("\"quotient\" must be an array of rules");
            for (const auto& r : j["quotient"]) {
                if (!r.is_object() || !r.contains("kind") || !r.contains("op") ||
                    !r["kind"].is_string() || !r["op"].is_string())
                    throw SchemaError("every quotient rule needs \"kind\" and \"op\"");
                std::string op_name = r["op"].get<std::string>();
                auto idx = sig->find(op_name);
                if (!idx) throw SchemaError("quotient rule names unknown op " + op_name);
                rules.push_back(
                    QuotientRule{detail::rule_kind_of(r["kind"].get<std::string>()), *idx});
            }
        }
        try {
            return presentable(std::move(sig), std::move(rules));
        } catch (const SignatureError& e) {
            throw SchemaError(e.what()); // bad rule/op pairing is a file problem
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed signature json: ") + e.what());
    }
}

inline PresentableSignature load_signature_file(const std::string& path) {
    return parse_signature_json(detail::read_json_file(path));
}

inline TranslationMapping load_mapping_file(const std::string& path) {
    nlohmann::json j = detail::read_json_file(path);
    if (!j.is_object() || !j.contains("src") || !j.contains("dst") || !j.contains("map") ||
        !j["src"].is_string() || !j["dst"].is_string() || !j["map"].is_object())
        throw SchemaError("mapping file needs \"src\", \"dst\" and a \"map\" object");

    std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path q(p);
        return (q.is_absolute() ? q : base / q).string();
    };
    PresentableSignature src = load_signature_file(resolve(j["src"].get<std::string>()));
    PresentableSignature dst = load_signature_file(resolve(j["dst"].get<std::string>()));
    if (!src.rules.empty())
        throw SchemaError("translation sources with quotient rules are not supported");

    std::vector<std::pair<std::string, Template>> by_name;
    for (const auto& [op_name, tpl_text] : j["map"].items()) {
        if (!tpl_text.is_string())
            throw SchemaError("template for " + op_name + " must be a string");
        try {
            by_name.emplace_back(op_name,
                                 parse_template(dst.carrier, tpl_text.get<std::string>()));
        } catch (const Error& e) {
            throw SchemaError("template for " + op_name + ": " + e.what());
        }
    }
    try {
        return make_translation(src.carrier, dst, by_name);
    } catch (const SignatureError& e) {
        throw SchemaError(e.what());
    }
}

} // namespace bindsig
