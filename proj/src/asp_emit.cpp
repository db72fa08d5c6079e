#include "repcause/asp_emit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "repcause/error.hpp"

namespace repcause {

namespace {

const char* const annotation_var_names[] = {"X", "Y", "Z", "U", "V", "W"};

std::string generic_var(std::size_t i) {
    if (i < 6) return annotation_var_names[i];
    return "X" + std::to_string(i + 1);
}

bool plain_identifier(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

std::string constant_text(const Constant& c) {
    if (c.is_null()) return "null";
    if (c.is_integer()) return std::to_string(c.as_integer());
    if (plain_identifier(c.as_symbol()) && c.as_symbol() != "null") return c.as_symbol();
    std::string out = "\"";
    for (char ch : c.as_symbol()) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

std::string primed(const std::string& relation) { return relation + "_a"; }

std::string atom(const std::string& pred, const std::string& tid, const std::vector<std::string>& args,
                 const std::string& annotation = {}) {
    std::string out = pred + "(" + tid;
    for (const auto& a : args) out += "," + a;
    if (!annotation.empty()) out += "," + annotation;
    return out + ")";
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string rule(const std::string& head, const std::vector<std::string>& body) {
    if (body.empty()) return head + ".";
    return head + " :- " + join(body, ", ") + ".";
}

std::vector<std::string> generic_args(std::size_t arity) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arity; ++i) out.push_back(generic_var(i));
    return out;
}

// Names distinct from generic_args of any arity.
std::vector<std::string> companion_args(std::size_t arity) {
    static const char* const short_names[] = {"U", "V", "W"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arity; ++i) {
        out.push_back(arity <= 3 ? std::string(short_names[i]) : "U" + std::to_string(i + 1));
    }
    return out;
}

// A DC body with variables renamed apart from the generated tid variables.
struct RuleBody {
    std::vector<std::string> relations;
    std::vector<std::vector<std::string>> args;  // per atom
    std::vector<std::string> builtins;
    std::vector<std::string> builtin_vars;
};

RuleBody rule_body(const DenialConstraint& dc) {
    std::map<std::string, std::string> rename;
    for (const auto& v : variables_of(dc.body)) rename.emplace(v, generic_var(rename.size()));
    auto text = [&](const Term& t) {
        if (const auto* v = std::get_if<Variable>(&t)) return rename.at(v->name);
        return constant_text(std::get<Constant>(t));
    };
    RuleBody rb;
    for (const auto& a : dc.body.atoms) {
        rb.relations.push_back(a.relation);
        std::vector<std::string> args;
        for (const auto& t : a.terms) args.push_back(text(t));
        rb.args.push_back(std::move(args));
    }
    for (const auto& b : dc.body.builtins) {
        rb.builtins.push_back(text(b.left) + " " + to_string(b.op) + " " + text(b.right));
        for (const Term* t : {&b.left, &b.right}) {
            if (const auto* v = std::get_if<Variable>(t)) {
                const auto& name = rename.at(v->name);
                if (std::find(rb.builtin_vars.begin(), rb.builtin_vars.end(), name) == rb.builtin_vars.end()) {
                    rb.builtin_vars.push_back(name);
                }
            }
        }
    }
    return rb;
}

// DC relations in order of first appearance, with their arities.
std::vector<std::pair<std::string, std::size_t>> dc_relations(const std::vector<DenialConstraint>& dcs) {
    std::vector<std::pair<std::string, std::size_t>> out;
    for (const auto& dc : dcs) {
        for (const auto& a : dc.body.atoms) {
            bool seen = false;
            for (const auto& [r, n] : out) seen = seen || r == a.relation;
            if (!seen) out.emplace_back(a.relation, a.terms.size());
        }
    }
    return out;
}

void emit_facts(std::ostream& os, const Instance& instance) {
    for (const Tuple* t : instance.canonical_order()) {
        std::vector<std::string> args;
        for (const auto& v : t->values) args.push_back(constant_text(v));
        os << atom(t->relation, std::to_string(t->tid), args) << ".\n";
    }
}

bool has(const EmitOptions& o, Extension e) { return o.include.count(e) != 0; }

} // namespace

void validate(const EmitOptions& options, const Instance& instance) {
    if (options.semantics == Semantics::null) {
        for (auto e : {Extension::cau_cont, Extension::contingency_sets, Extension::pre_rho,
                       Extension::weak_constraints}) {
            if (has(options, e)) {
                throw EmitError("null-based programs support only the causes extension");
            }
        }
        return;
    }
    for (auto e : {Extension::contingency_sets, Extension::pre_rho}) {
        if (has(options, e) && !(has(options, Extension::cau_cont) && has(options, Extension::causes))) {
            throw EmitError(std::string(e == Extension::pre_rho ? "pre_rho" : "contingency_sets") +
                            " requires the causes and cau_cont extensions");
        }
    }
    if (has(options, Extension::pre_rho) &&
        options.maxint < static_cast<long>(instance.size()) + 1) {
        throw EmitError("maxint " + std::to_string(options.maxint) + " is below the number of tuples + 1 (" +
                        std::to_string(instance.size() + 1) + ")");
    }
}

ProgramText emit_tuple_repair_program(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                      const EmitOptions& options) {
    EmitOptions o = options;
    o.semantics = Semantics::tuple;
    validate(o, instance);
    std::ostringstream os;
    emit_facts(os, instance);

    for (const auto& dc : dcs) {
        os << "\n";
        RuleBody rb = rule_body(dc);
        const std::size_t n = rb.relations.size();
        if (o.flavor == Flavor::disjunctive) {
            std::vector<std::string> head, body;
            for (std::size_t k = 0; k < n; ++k) {
                std::string tid = "T" + std::to_string(k + 1);
                head.push_back(atom(primed(rb.relations[k]), tid, rb.args[k], "d"));
                body.push_back(atom(rb.relations[k], tid, rb.args[k]));
            }
            body.insert(body.end(), rb.builtins.begin(), rb.builtins.end());
            os << rule(join(head, " v "), body) << "\n";
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> tids(n);
            std::size_t next = 2;
            for (std::size_t k = 0; k < n; ++k) tids[k] = k == i ? "T" : "T" + std::to_string(next++);
            std::vector<std::string> body{atom(rb.relations[i], tids[i], rb.args[i])};
            for (std::size_t k = 0; k < n; ++k) {
                if (k != i) body.push_back(atom(rb.relations[k], tids[k], rb.args[k]));
            }
            body.insert(body.end(), rb.builtins.begin(), rb.builtins.end());
            for (std::size_t k = 0; k < n; ++k) {
                if (k != i) body.push_back("not " + atom(primed(rb.relations[k]), tids[k], rb.args[k], "d"));
            }
            os << rule(atom(primed(rb.relations[i]), tids[i], rb.args[i], "d"), body) << "\n";
        }
    }

    const auto rels = dc_relations(dcs);
    os << "\n";
    for (const auto& [r, n] : rels) {
        auto args = generic_args(n);
        os << rule(atom(primed(r), "T", args, "s"), {atom(r, "T", args), "not " + atom(primed(r), "T", args, "d")})
           << "\n";
    }

    if (has(o, Extension::causes)) {
        os << "\n";
        for (const auto& [r, n] : rels) os << rule("cause(T)", {atom(primed(r), "T", generic_args(n), "d")}) << "\n";
    }
    if (has(o, Extension::cau_cont)) {
        os << "\n";
        for (const auto& [ri, ni] : rels) {
            for (const auto& [rj, nj] : rels) {
                std::vector<std::string> body{atom(primed(ri), "T", generic_args(ni), "d"),
                                              atom(primed(rj), "TC", companion_args(nj), "d")};
                if (ri == rj) body.push_back("T != TC");
                os << rule("cauCont(T,TC)", body) << "\n";
            }
        }
    }
    if (has(o, Extension::contingency_sets)) {
        os << "\n"
           << "preCont(T,{TC}) :- cauCont(T,TC).\n"
           << "preCont(T,#union(C,{TC})) :- cauCont(T,TC), preCont(T,C), not #member(TC,C).\n"
           << "cont(T,C) :- preCont(T,C), not HoleIn(T,C).\n"
           << "HoleIn(T,C) :- preCont(T,C), cauCont(T,TC), not #member(TC,C).\n"
           << "tmpCont(T) :- cont(T,C), not #card(C,0).\n"
           << "cont(T,{}) :- cause(T), not tmpCont(T).\n";
    }
    if (has(o, Extension::pre_rho)) {
        os << "\n"
           << "#maxint = " << o.maxint << ".\n"
           << "preRho(T,N + 1) :- cause(T), #int(N), #count{TC: cauCont(T,TC)} = N.\n";
    }
    if (has(o, Extension::weak_constraints)) {
        os << "\n";
        for (const auto& [r, n] : rels) os << ":~ " << atom(primed(r), "T", generic_args(n), "d") << ".\n";
    }

    ProgramText p;
    p.text = os.str();
    p.dialect = has(o, Extension::contingency_sets) || has(o, Extension::pre_rho) ? Dialect::set_extended_asp
                                                                                 : Dialect::core_asp;
    return p;
}

ProgramText emit_null_repair_program(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                                     const EmitOptions& options) {
    EmitOptions o = options;
    o.semantics = Semantics::null;
    validate(o, instance);
    std::ostringstream os;
    emit_facts(os, instance);
    const auto rels = dc_relations(dcs);

    os << "\n";
    for (const auto& [r, n] : rels) {
        auto args = generic_args(n);
        os << rule(atom(primed(r), "T", args, "t"), {atom(r, "T", args)}) << "\n";
        os << rule(atom(primed(r), "T", args, "t"), {atom(primed(r), "T", args, "u")}) << "\n";
    }

    for (const auto& dc : dcs) {
        os << "\n";
        RuleBody rb = rule_body(dc);
        const std::size_t n = rb.relations.size();
        auto crit = critical_term_positions(dc.body);  // (atom, 1-based position)
        auto nulled = [&](std::size_t k, std::size_t pos, const std::string& tid) {
            auto args = rb.args[k];
            args[pos - 1] = "null";
            return atom(primed(rb.relations[k]), tid, args, "u");
        };
        auto guard_for = [&](std::size_t k, std::size_t pos) -> std::optional<std::string> {
            const auto& a = rb.args[k][pos - 1];
            if (!a.empty() && std::isupper(static_cast<unsigned char>(a[0]))) return a + " != null";
            return std::nullopt;
        };
        std::vector<std::string> builtin_guards;
        for (const auto& v : rb.builtin_vars) builtin_guards.push_back(v + " != null");

        if (o.flavor == Flavor::disjunctive) {
            std::vector<std::string> tids(n), head, body;
            for (std::size_t k = 0; k < n; ++k) tids[k] = "T" + std::to_string(k + 1);
            for (const auto& [k, pos] : crit) head.push_back(nulled(k, pos, tids[k]));
            for (std::size_t k = 0; k < n; ++k) body.push_back(atom(primed(rb.relations[k]), tids[k], rb.args[k], "t"));
            body.insert(body.end(), rb.builtins.begin(), rb.builtins.end());
            std::vector<std::string> guards;
            for (const auto& [k, pos] : crit) {
                auto g = guard_for(k, pos);
                if (g && std::find(guards.begin(), guards.end(), *g) == guards.end()) guards.push_back(*g);
            }
            for (const auto& g : builtin_guards) {
                if (std::find(guards.begin(), guards.end(), g) == guards.end()) guards.push_back(g);
            }
            body.insert(body.end(), guards.begin(), guards.end());
            if (!head.empty()) os << rule(join(head, " v "), body) << "\n";
            continue;
        }
        for (const auto& [i, j] : crit) {
            std::vector<std::string> tids(n);
            std::size_t next = 2;
            for (std::size_t k = 0; k < n; ++k) tids[k] = k == i ? "T" : "T" + std::to_string(next++);
            std::vector<std::string> body{atom(primed(rb.relations[i]), tids[i], rb.args[i], "t")};
            for (std::size_t k = 0; k < n; ++k) {
                if (k != i) body.push_back(atom(primed(rb.relations[k]), tids[k], rb.args[k], "t"));
            }
            body.insert(body.end(), rb.builtins.begin(), rb.builtins.end());
            auto focus = guard_for(i, j);
            if (focus) body.push_back(*focus);
            for (const auto& g : builtin_guards) {
                if (!focus || g != *focus) body.push_back(g);
            }
            for (const auto& [k, l] : crit) {
                if (k == i && l == j) continue;
                body.push_back("not " + nulled(k, l, tids[k]));
            }
            os << rule(nulled(i, j, tids[i]), body) << "\n";
        }
    }

    for (const auto& [r, n] : rels) {
        os << "\n";
        auto args = generic_args(n);
        std::vector<std::string> body{atom(primed(r), "T", args, "u")};
        for (std::size_t j = 1; j <= n; ++j) body.push_back("not " + atom("aux" + r + std::to_string(j), "T", args));
        os << rule(atom(primed(r), "T", args, "fu"), body) << "\n";
        for (std::size_t j = 1; j <= n; ++j) {
            auto nulled = args;
            nulled[j - 1] = "null";
            os << rule(atom("aux" + r + std::to_string(j), "T", args),
                       {atom(r, "T", args), atom(primed(r), "T", nulled, "u"), args[j - 1] + " != null"})
               << "\n";
        }
    }

    for (const auto& [r, n] : rels) {
        os << "\n";
        auto args = generic_args(n);
        os << rule(atom(primed(r), "T", args, "s"), {atom(primed(r), "T", args, "fu")}) << "\n";
        os << rule(atom(primed(r), "T", args, "s"), {atom(r, "T", args), "not aux" + r + "(T)"}) << "\n";
        os << rule("aux" + r + "(T)", {atom(primed(r), "T", args, "u")}) << "\n";
    }

    if (has(o, Extension::causes)) {
        os << "\n";
        for (const auto& [r, n] : rels) {
            auto args = generic_args(n);
            for (std::size_t j = 1; j <= n; ++j) {
                auto nulled = args;
                nulled[j - 1] = "null";
                auto original = companion_args(n);
                original[j - 1] = args[j - 1];
                os << rule("cause(T," + std::to_string(j) + "," + args[j - 1] + ")",
                           {atom(primed(r), "T", nulled, "s"), atom(r, "T", original), args[j - 1] + " != null"})
                   << "\n";
            }
        }
    }

    return {os.str(), Dialect::core_asp};
}

ProgramText emit_program(const Instance& instance, const std::vector<DenialConstraint>& dcs,
                         const EmitOptions& options) {
    if (options.semantics == Semantics::null) return emit_null_repair_program(instance, dcs, options);
    return emit_tuple_repair_program(instance, dcs, options);
}

} // namespace repcause
