#include <algorithm>
#include <functional>
#include <optional>

#include "repcause/error.hpp"
#include "repcause/qlang.hpp"

namespace repcause {

namespace {

// A body after repeated-variable normalization. Every atom position is its own
// slot; a variable read at several slots becomes a chain of slot equalities,
// and a constant in an atom becomes a slot-vs-constant equality. Nulls can
// then only fail these checks, never satisfy them.
struct Operand {
    std::optional<std::size_t> slot;
    Constant constant;
};

struct Check {
    BuiltinOp op = BuiltinOp::eq;
    Operand left;
    Operand right;
    std::size_t ready_at = 0;  // atom index after which both operands are bound
};

struct CompiledBody {
    const ConjunctiveBody* body = nullptr;
    std::vector<std::size_t> slot_atom;
    std::vector<std::size_t> slot_pos;  // 0-based
    std::vector<std::size_t> atom_first_slot;
    std::map<std::string, std::vector<std::size_t>> var_slots;
    std::vector<std::vector<Check>> checks_at;  // indexed by ready_at
    std::vector<bool> critical;                 // per slot
};

std::string op_text(BuiltinOp op) {
    switch (op) {
    case BuiltinOp::eq: return "=";
    case BuiltinOp::ne: return "!=";
    case BuiltinOp::lt: return "<";
    case BuiltinOp::le: return "<=";
    case BuiltinOp::gt: return ">";
    case BuiltinOp::ge: return ">=";
    }
    return "?";
}

CompiledBody compile(const ConjunctiveBody& body) {
    if (body.atoms.empty()) throw EvalError("body without atoms");
    CompiledBody cb;
    cb.body = &body;
    cb.checks_at.resize(body.atoms.size());
    std::vector<Check> pending;
    for (std::size_t a = 0; a < body.atoms.size(); ++a) {
        cb.atom_first_slot.push_back(cb.slot_atom.size());
        const auto& atom = body.atoms[a];
        for (std::size_t p = 0; p < atom.terms.size(); ++p) {
            std::size_t slot = cb.slot_atom.size();
            cb.slot_atom.push_back(a);
            cb.slot_pos.push_back(p);
            cb.critical.push_back(false);
            if (const auto* v = std::get_if<Variable>(&atom.terms[p])) {
                auto& slots = cb.var_slots[v->name];
                if (!slots.empty()) {
                    pending.push_back({BuiltinOp::eq, {slots.back(), {}}, {slot, {}}, a});
                }
                slots.push_back(slot);
            } else {
                cb.critical[slot] = true;
                pending.push_back(
                    {BuiltinOp::eq, {slot, {}}, {std::nullopt, std::get<Constant>(atom.terms[p])}, a});
            }
        }
    }
    for (const auto& [name, slots] : cb.var_slots) {
        if (slots.size() > 1) {
            for (auto s : slots) cb.critical[s] = true;
        }
    }
    auto operand = [&](const Term& t, std::size_t& ready) -> Operand {
        if (const auto* v = std::get_if<Variable>(&t)) {
            auto it = cb.var_slots.find(v->name);
            if (it == cb.var_slots.end()) {
                throw EvalError("variable " + v->name + " occurs only in a builtin");
            }
            for (auto s : it->second) cb.critical[s] = true;
            ready = std::max(ready, cb.slot_atom[it->second.front()]);
            return {it->second.front(), {}};
        }
        return {std::nullopt, std::get<Constant>(t)};
    };
    for (const auto& b : body.builtins) {
        Check c;
        c.op = b.op;
        c.left = operand(b.left, c.ready_at);
        c.right = operand(b.right, c.ready_at);
        pending.push_back(c);
    }
    for (auto& c : pending) cb.checks_at[c.ready_at].push_back(std::move(c));
    return cb;
}

bool compare(BuiltinOp op, const Constant& a, const Constant& b) {
    if (a.is_null() || b.is_null()) return false;
    if (op == BuiltinOp::eq) return a == b;
    if (op == BuiltinOp::ne) return a != b;
    if (a.kind() != b.kind()) {
        throw EvalError("cannot order-compare " + a.to_string() + " and " + b.to_string());
    }
    auto c = a <=> b;
    switch (op) {
    case BuiltinOp::lt: return c < 0;
    case BuiltinOp::le: return c <= 0;
    case BuiltinOp::gt: return c > 0;
    case BuiltinOp::ge: return c >= 0;
    default: return false;
    }
}

using Assignment = std::vector<const Tuple*>;  // one tuple per atom

const Constant& slot_value(const CompiledBody& cb, const Assignment& asg, std::size_t slot) {
    return asg[cb.slot_atom[slot]]->values[cb.slot_pos[slot]];
}

const Constant& operand_value(const CompiledBody& cb, const Assignment& asg, const Operand& o) {
    return o.slot ? slot_value(cb, asg, *o.slot) : o.constant;
}

// Calls visit for each satisfying assignment until it returns false.
// Returns false when stopped early.
bool enumerate(const Instance& instance, const CompiledBody& cb,
               const std::function<bool(const Assignment&)>& visit) {
    const auto& atoms = cb.body->atoms;
    for (const auto& atom : atoms) {
        auto ar = instance.arity(atom.relation);
        if (ar && *ar != atom.terms.size()) {
            throw EvalError("atom " + atom.relation + " has " + std::to_string(atom.terms.size()) +
                            " terms, relation has arity " + std::to_string(*ar));
        }
    }
    Assignment asg(atoms.size(), nullptr);
    std::function<bool(std::size_t)> step = [&](std::size_t a) -> bool {
        if (a == atoms.size()) return visit(asg);
        for (Tid tid : instance.relation_tids(atoms[a].relation)) {
            asg[a] = &instance.at(tid);
            bool ok = true;
            for (const auto& c : cb.checks_at[a]) {
                if (!compare(c.op, operand_value(cb, asg, c.left), operand_value(cb, asg, c.right))) {
                    ok = false;
                    break;
                }
            }
            if (ok && !step(a + 1)) return false;
        }
        return true;
    };
    return step(0);
}

void require_boolean(const QuerySpec& q) {
    if (!q.is_boolean()) throw EvalError("query " + q.name + " is not Boolean");
}

Term substitute(const Term& t, const std::map<std::string, Constant>& sub) {
    if (const auto* v = std::get_if<Variable>(&t)) {
        auto it = sub.find(v->name);
        if (it != sub.end()) return it->second;
    }
    return t;
}

bool match_atom(const BodyAtom& atom, const Tuple& t, std::map<std::string, Constant>& binding) {
    if (t.values.size() != atom.terms.size()) return false;
    for (std::size_t p = 0; p < atom.terms.size(); ++p) {
        const auto& val = t.values[p];
        if (const auto* v = std::get_if<Variable>(&atom.terms[p])) {
            auto [it, fresh] = binding.emplace(v->name, val);
            if (!fresh && !compare(BuiltinOp::eq, it->second, val)) return false;
        } else if (!compare(BuiltinOp::eq, std::get<Constant>(atom.terms[p]), val)) {
            return false;
        }
    }
    return true;
}

} // namespace

std::set<std::string> InclusionDependency::shared_variables() const {
    std::set<std::string> left, out;
    for (const auto& t : premise.terms) {
        if (const auto* v = std::get_if<Variable>(&t)) left.insert(v->name);
    }
    for (const auto& t : conclusion.terms) {
        if (const auto* v = std::get_if<Variable>(&t); v && left.count(v->name)) out.insert(v->name);
    }
    return out;
}

const QuerySpec& Problem::query(std::string_view name) const {
    for (const auto& q : queries) {
        if (q.name == name) return q;
    }
    throw EvalError("no query named " + std::string(name));
}

std::string to_string(BuiltinOp op) { return op_text(op); }

std::vector<std::string> variables_of(const ConjunctiveBody& body) {
    std::vector<std::string> out;
    auto add = [&](const Term& t) {
        if (const auto* v = std::get_if<Variable>(&t)) {
            if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
        }
    };
    for (const auto& a : body.atoms) {
        for (const auto& t : a.terms) add(t);
    }
    for (const auto& b : body.builtins) {
        add(b.left);
        add(b.right);
    }
    return out;
}

std::set<std::pair<std::size_t, std::size_t>> critical_term_positions(const ConjunctiveBody& body) {
    auto cb = compile(body);
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t s = 0; s < cb.critical.size(); ++s) {
        if (cb.critical[s]) out.emplace(cb.slot_atom[s], cb.slot_pos[s] + 1);
    }
    return out;
}

bool eval_bcq(const Instance& instance, const QuerySpec& query) {
    require_boolean(query);
    for (const auto& d : query.disjuncts) {
        auto cb = compile(d);
        if (!enumerate(instance, cb, [](const Assignment&) { return false; })) return true;
    }
    return false;
}

std::set<std::vector<Constant>> eval_open(const Instance& instance, const QuerySpec& query) {
    std::set<std::vector<Constant>> out;
    for (const auto& d : query.disjuncts) {
        auto cb = compile(d);
        std::vector<std::size_t> head_slots;
        for (const auto& v : query.head) {
            auto it = cb.var_slots.find(v.name);
            if (it == cb.var_slots.end()) throw EvalError("unsafe head variable " + v.name);
            head_slots.push_back(it->second.front());
        }
        enumerate(instance, cb, [&](const Assignment& asg) {
            std::vector<Constant> row;
            for (auto s : head_slots) row.push_back(slot_value(cb, asg, s));
            out.insert(std::move(row));
            return true;
        });
    }
    return out;
}

QuerySpec bind_answer(const QuerySpec& query, const std::vector<Constant>& answer) {
    if (answer.size() != query.head.size()) {
        throw EvalError("query " + query.name + " has " + std::to_string(query.head.size()) +
                        " head variables, answer has " + std::to_string(answer.size()) + " values");
    }
    std::map<std::string, Constant> sub;
    for (std::size_t i = 0; i < answer.size(); ++i) {
        auto [it, fresh] = sub.emplace(query.head[i].name, answer[i]);
        if (!fresh && it->second != answer[i]) {
            throw EvalError("conflicting values for head variable " + query.head[i].name);
        }
    }
    QuerySpec out;
    out.name = query.name;
    for (const auto& d : query.disjuncts) {
        ConjunctiveBody b;
        for (const auto& a : d.atoms) {
            BodyAtom na{a.relation, {}};
            for (const auto& t : a.terms) na.terms.push_back(substitute(t, sub));
            b.atoms.push_back(std::move(na));
        }
        for (const auto& bi : d.builtins) {
            b.builtins.push_back({bi.op, substitute(bi.left, sub), substitute(bi.right, sub)});
        }
        out.disjuncts.push_back(std::move(b));
    }
    return out;
}

std::vector<DenialConstraint> negate_query_to_dc(const QuerySpec& query) {
    require_boolean(query);
    std::vector<DenialConstraint> out;
    for (const auto& d : query.disjuncts) out.push_back({d});
    return out;
}

std::vector<ViolationWitness> violations(const Instance& instance,
                                         const std::vector<DenialConstraint>& dcs) {
    std::vector<ViolationWitness> out;
    for (std::size_t i = 0; i < dcs.size(); ++i) {
        auto cb = compile(dcs[i].body);
        const auto& atoms = dcs[i].body.atoms;
        enumerate(instance, cb, [&](const Assignment& asg) {
            ViolationWitness w;
            w.dc_index = i;
            for (std::size_t a = 0; a < asg.size(); ++a) w.tids.insert(asg[a]->tid);
            for (std::size_t s = 0; s < cb.slot_atom.size(); ++s) {
                const Tuple* t = asg[cb.slot_atom[s]];
                PositionRef ref{atoms[cb.slot_atom[s]].relation, t->tid, cb.slot_pos[s] + 1};
                if (cb.critical[s]) w.critical_positions.insert(ref);
            }
            for (const auto& [name, slots] : cb.var_slots) {
                auto& b = w.binding[name];
                b.value = slot_value(cb, asg, slots.front());
                for (auto s : slots) {
                    const Tuple* t = asg[cb.slot_atom[s]];
                    b.positions.insert({atoms[cb.slot_atom[s]].relation, t->tid, cb.slot_pos[s] + 1});
                }
            }
            out.push_back(std::move(w));
            return true;
        });
    }
    return out;
}

bool is_consistent(const Instance& instance, const std::vector<DenialConstraint>& dcs) {
    for (const auto& dc : dcs) {
        auto cb = compile(dc.body);
        if (!enumerate(instance, cb, [](const Assignment&) { return false; })) return false;
    }
    return true;
}

TidSet unwitnessed_premises(const Instance& instance, const std::vector<InclusionDependency>& ids) {
    TidSet out;
    for (const auto& id : ids) {
        auto shared = id.shared_variables();
        for (Tid tid : instance.relation_tids(id.premise.relation)) {
            std::map<std::string, Constant> binding;
            if (!match_atom(id.premise, instance.at(tid), binding)) continue;
            std::map<std::string, Constant> fixed;
            bool null_shared = false;
            for (const auto& v : shared) {
                if (binding[v].is_null()) null_shared = true;
                fixed[v] = binding[v];
            }
            bool witnessed = false;
            if (!null_shared) {
                for (Tid c : instance.relation_tids(id.conclusion.relation)) {
                    auto b = fixed;
                    if (match_atom(id.conclusion, instance.at(c), b)) {
                        witnessed = true;
                        break;
                    }
                }
            }
            if (!witnessed) out.insert(tid);
        }
    }
    return out;
}

bool satisfies_ids(const Instance& instance, const std::vector<InclusionDependency>& ids) {
    return unwitnessed_premises(instance, ids).empty();
}

} // namespace repcause
