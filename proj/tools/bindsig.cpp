// Command-line front end: inspect signature files, normalize and
// substitute terms, run the analysis models, apply translation mappings,
// and property-check the law suites on user signatures.
//
// Exit codes: 0 success, 1 usage or malformed input file, 2 a sampled
// property failed, 3 scope or arity errors in a term.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bindsig/laws.hpp"
#include "bindsig/model.hpp"
#include "bindsig/models_std.hpp"
#include "bindsig/quotient.hpp"
#include "bindsig/sexpr.hpp"
#include "bindsig/sigfile.hpp"

namespace {

using namespace bindsig;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_property = 2;
constexpr int exit_scope = 3;

void print_report(const std::string& suite, const LawReport& rep, bool json) {
    if (json) {
        nlohmann::json out;
        out["suite"] = suite;
        out["pass"] = rep.pass();
        out["results"] = nlohmann::json::array();
        for (const auto& r : rep.results) {
            nlohmann::json item;
            item["name"] = r.name;
            item["samples"] = r.samples;
            item["failures"] = r.failures;
            if (!r.pass()) item["counterexample"] = r.counterexample;
            out["results"].push_back(std::move(item));
        }
        std::cout << out.dump(2) << "\n";
        return;
    }
    for (const auto& r : rep.results) {
        if (r.pass())
            std::cout << "ok   " << r.name << " (" << r.samples << " samples)\n";
        else
            std::cout << "FAIL " << r.name << " (" << r.failures << "/" << r.samples
                      << " failures), e.g. " << r.counterexample << "\n";
    }
}

void print_value(const std::string& key, const std::string& value, bool json) {
    if (json) {
        nlohmann::json out;
        out[key] = value;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << value << "\n";
    }
}

struct Common {
    std::string sig_file;
    std::string ctx_text;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    bool json = false;
};

LawOptions law_options(const Common& c) {
    LawOptions o;
    o.samples = c.samples;
    o.seed = c.seed;
    return o;
}

int run(int argc, char** argv) {
    CLI::App app{"signatures with binding: terms, quotients, models"};
    app.require_subcommand(1);
    Common c;

    std::string term_text;
    std::string map_file;
    std::string model_name = "freevars";
    std::string suite_name;
    std::vector<std::string> bindings;

    auto add_common = [&](CLI::App* sub, bool needs_sig) {
        auto* s = sub->add_option("--sig", c.sig_file, "signature file (json)");
        if (needs_sig) s->required();
        sub->add_option("--ctx", c.ctx_text,
                        "comma-separated context names, leftmost is index 0");
        sub->add_option("--samples", c.samples, "sample count for property checks");
        sub->add_option("--seed", c.seed, "random seed for property checks");
        sub->add_flag("--json", c.json, "machine-readable output");
    };

    CLI::App* cmd_check = app.add_subcommand(
        "check", "validate a signature file and property-check its quotient rules");
    add_common(cmd_check, true);

    CLI::App* cmd_nf = app.add_subcommand("nf", "print the canonical form of a term");
    add_common(cmd_nf, true);
    cmd_nf->add_option("term", term_text, "term in s-expression syntax")->required();

    CLI::App* cmd_subst = app.add_subcommand(
        "subst", "substitute terms for context variables, then renormalize");
    add_common(cmd_subst, true);
    cmd_subst->add_option("term", term_text, "term in s-expression syntax")->required();
    cmd_subst->add_option("bindings", bindings, "name=term replacements");

    CLI::App* cmd_analyze =
        app.add_subcommand("analyze", "run an analysis model over a term");
    add_common(cmd_analyze, true);
    cmd_analyze->add_option("--model", model_name, "freevars, size or redexes")
        ->check(CLI::IsMember({"freevars", "size", "redexes"}));
    cmd_analyze->add_option("term", term_text, "term in s-expression syntax")->required();

    CLI::App* cmd_translate =
        app.add_subcommand("translate", "apply a translation mapping to a term");
    cmd_translate->add_option("--map", map_file, "mapping file (json)")->required();
    cmd_translate->add_option("--ctx", c.ctx_text,
                              "comma-separated context names, leftmost is index 0");
    cmd_translate->add_flag("--json", c.json, "machine-readable output");
    cmd_translate->add_option("term", term_text, "term in s-expression syntax")->required();

    CLI::App* cmd_laws = app.add_subcommand("laws", "run a sampled law suite");
    add_common(cmd_laws, true);
    cmd_laws->add_option("--suite", suite_name, "monad, module, quotient or model")
        ->required()
        ->check(CLI::IsMember({"monad", "module", "quotient", "model"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (cmd_check->parsed()) {
        PresentableSignature p = load_signature_file(c.sig_file);
        LawReport rep = check_compatibility(p, law_options(c));
        print_report("quotient", rep, c.json);
        return rep.pass() ? exit_ok : exit_property;
    }

    if (cmd_nf->parsed()) {
        PresentableSignature p = load_signature_file(c.sig_file);
        std::vector<std::string> names = split_ctx(c.ctx_text);
        Term t = parse_term(p.carrier, term_text, names);
        print_value("term", print_term(nf(p, t), names), c.json);
        return exit_ok;
    }

    if (cmd_subst->parsed()) {
        PresentableSignature p = load_signature_file(c.sig_file);
        std::vector<std::string> names = split_ctx(c.ctx_text);
        Term t = parse_term(p.carrier, term_text, names);
        Subst s = identity_subst(p.carrier, names.size());
        for (const std::string& b : bindings) {
            auto eq = b.find('=');
            if (eq == std::string::npos)
                throw ParseError("binding " + b + " is not of the form name=term");
            std::string name = b.substr(0, eq);
            std::size_t idx = names.size();
            for (std::size_t i = 0; i < names.size(); ++i)
                if (names[i] == name) {
                    idx = i;
                    break;
                }
            if (idx == names.size())
                throw ScopeError("binding for " + name + ", which is not in the context");
            s.images[idx] = parse_term(p.carrier, b.substr(eq + 1), names);
        }
        print_value("term", print_term(quot_subst(p, t, s), names), c.json);
        return exit_ok;
    }

    if (cmd_analyze->parsed()) {
        PresentableSignature p = load_signature_file(c.sig_file);
        std::vector<std::string> names = split_ctx(c.ctx_text);
        Term t = parse_term(p.carrier, term_text, names);
        if (model_name == "freevars") {
            auto fv = fold(free_vars_model(p.carrier), t);
            std::string out = "{";
            bool first = true;
            for (std::size_t v : fv) {
                if (!first) out += ",";
                out += names[v];
                first = false;
            }
            out += "}";
            print_value("freevars", out, c.json);
        } else if (model_name == "size") {
            print_value("size", std::to_string(term_size(t)), c.json);
        } else {
            print_value("redexes", std::to_string(redex_count(t)), c.json);
        }
        return exit_ok;
    }

    if (cmd_translate->parsed()) {
        TranslationMapping tr = load_mapping_file(map_file);
        std::vector<std::string> names = split_ctx(c.ctx_text);
        Term t = parse_term(tr.src, term_text, names);
        print_value("term", print_term(translate(tr, t), names), c.json);
        return exit_ok;
    }

    if (cmd_laws->parsed()) {
        PresentableSignature p = load_signature_file(c.sig_file);
        LawReport rep;
        if (suite_name == "monad") {
            rep = monad_law_suite(p.carrier, law_options(c));
        } else if (suite_name == "module") {
            rep = module_law_suite(p.carrier, law_options(c));
        } else if (suite_name == "quotient") {
            rep = check_compatibility(p, law_options(c));
        } else {
            LawOptions o = law_options(c);
            rep = check_model_laws(free_vars_model(p.carrier), o);
            // the numeric models only interpret signatures shaped like
            // the lambda calculus
            if (p.carrier->find("app") && p.carrier->find("abs")) {
                LawReport more = check_model_laws(size_model(p.carrier), o);
                rep.results.insert(rep.results.end(), more.results.begin(),
                                   more.results.end());
            }
        }
        print_report(suite_name, rep, c.json);
        return rep.pass() ? exit_ok : exit_property;
    }

    return exit_usage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bindsig::ScopeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_scope;
    } catch (const bindsig::ArityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_scope;
    } catch (const bindsig::ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_property;
    } catch (const bindsig::Error& e) {
        // schema, parse, signature and budget problems are input problems
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
