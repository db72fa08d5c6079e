#include "repcause/relmodel.hpp"

#include <algorithm>
#include <sstream>

#include "repcause/error.hpp"

namespace repcause {

std::string Constant::to_string() const {
    switch (kind()) {
    case Kind::null: return "null";
    case Kind::integer: return std::to_string(as_integer());
    case Kind::symbol: return as_symbol();
    }
    return {};
}

std::strong_ordering operator<=>(const Constant& a, const Constant& b) {
    if (auto c = a.value_.index() <=> b.value_.index(); c != 0) return c;
    switch (a.kind()) {
    case Constant::Kind::null: return std::strong_ordering::equal;
    case Constant::Kind::integer: return a.as_integer() <=> b.as_integer();
    case Constant::Kind::symbol: return a.as_symbol().compare(b.as_symbol()) <=> 0;
    }
    return std::strong_ordering::equal;
}

std::string PositionRef::to_string() const {
    return relation + "[" + std::to_string(tid) + ";" + std::to_string(position) + "]";
}

void Instance::declare(const std::string& relation, std::size_t arity) {
    auto [it, inserted] = schema_.emplace(relation, arity);
    if (!inserted && it->second != arity) {
        throw ModelError("relation " + relation + " declared with arity " +
                         std::to_string(it->second) + ", used with arity " +
                         std::to_string(arity));
    }
}

Tid Instance::add_fact(const std::string& relation, std::optional<Tid> tid,
                       std::vector<Constant> values, bool endogenous) {
    if (tid && *tid == 0) throw ModelError("tids must be positive");
    if (tid && tuples_.count(*tid)) {
        throw ModelError("duplicate tid " + std::to_string(*tid));
    }
    declare(relation, values.size());
    Tid id = 0;
    if (tid) {
        id = *tid;
    } else {
        while (tuples_.count(next_free_)) ++next_free_;
        id = next_free_;
    }
    tuples_.emplace(id, Tuple{relation, id, std::move(values), endogenous});
    auto& ids = by_relation_[relation];
    ids.insert(std::upper_bound(ids.begin(), ids.end(), id), id);
    return id;
}

const Tuple& Instance::at(Tid tid) const {
    auto it = tuples_.find(tid);
    if (it == tuples_.end()) throw ModelError("unknown tid " + std::to_string(tid));
    return it->second;
}

const Tuple* Instance::find(Tid tid) const {
    auto it = tuples_.find(tid);
    return it == tuples_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> Instance::arity(const std::string& relation) const {
    auto it = schema_.find(relation);
    if (it == schema_.end()) return std::nullopt;
    return it->second;
}

const std::vector<Tid>& Instance::relation_tids(const std::string& relation) const {
    static const std::vector<Tid> none;
    auto it = by_relation_.find(relation);
    return it == by_relation_.end() ? none : it->second;
}

TidSet Instance::tids() const {
    TidSet out;
    for (const auto& [tid, t] : tuples_) out.insert(out.end(), tid);
    return out;
}

TidSet Instance::endogenous_tids() const {
    TidSet out;
    for (const auto& [tid, t] : tuples_)
        if (t.endogenous) out.insert(out.end(), tid);
    return out;
}

std::vector<const Tuple*> Instance::canonical_order() const {
    std::vector<const Tuple*> out;
    out.reserve(tuples_.size());
    for (const auto& [rel, ids] : by_relation_)
        for (Tid id : ids) out.push_back(&tuples_.at(id));
    return out;
}

namespace {

Instance copy_schema(const Instance& instance) {
    Instance out;
    for (const auto& [rel, arity] : instance.schema()) out.declare(rel, arity);
    return out;
}

} // namespace

Instance delete_tuples(const Instance& instance, const TidSet& tids) {
    for (Tid t : tids) {
        if (!instance.contains(t)) throw ModelError("unknown tid " + std::to_string(t));
    }
    Instance out = copy_schema(instance);
    for (const auto& [tid, t] : instance.tuples()) {
        if (!tids.count(tid)) out.add_fact(t.relation, tid, t.values, t.endogenous);
    }
    return out;
}

Instance restrict_to(const Instance& instance, const TidSet& keep) {
    Instance out = copy_schema(instance);
    for (Tid tid : keep) {
        const Tuple& t = instance.at(tid);
        out.add_fact(t.relation, tid, t.values, t.endogenous);
    }
    return out;
}

Instance apply_update(const UpdateSet& update, const Instance& instance) {
    std::map<Tid, std::vector<std::size_t>> nulled;
    for (const auto& ref : update) {
        const Tuple* t = instance.find(ref.tid);
        if (!t) throw ModelError("update references unknown tid " + std::to_string(ref.tid));
        if (t->relation != ref.relation) {
            throw ModelError("update " + ref.to_string() + " does not match tuple relation " +
                             t->relation);
        }
        if (ref.position == 0 || ref.position > t->values.size()) {
            throw ModelError("position out of range in " + ref.to_string());
        }
        nulled[ref.tid].push_back(ref.position);
    }
    Instance out = copy_schema(instance);
    for (const auto& [tid, t] : instance.tuples()) {
        auto values = t.values;
        if (auto it = nulled.find(tid); it != nulled.end()) {
            for (std::size_t pos : it->second) values[pos - 1] = Constant::null();
        }
        out.add_fact(t.relation, tid, std::move(values), t.endogenous);
    }
    return out;
}

UpdateSet delta_null(const Instance& original, const Instance& updated) {
    if (original.size() != updated.size()) throw ModelError("instances have different tids");
    UpdateSet out;
    for (const auto& [tid, t] : original.tuples()) {
        const Tuple* u = updated.find(tid);
        if (!u) throw ModelError("tid " + std::to_string(tid) + " missing from updated instance");
        if (u->relation != t.relation || u->values.size() != t.values.size()) {
            throw ModelError("tid " + std::to_string(tid) + " changed relation or arity");
        }
        for (std::size_t j = 0; j < t.values.size(); ++j) {
            const Constant& before = t.values[j];
            const Constant& after = u->values[j];
            if (before == after) continue;
            if (!after.is_null()) {
                throw ModelError("position " + PositionRef{t.relation, tid, j + 1}.to_string() +
                                 " changed to a non-null value");
            }
            out.insert(PositionRef{t.relation, tid, j + 1});
        }
    }
    return out;
}

std::vector<PositionRef> non_null_positions(const Instance& instance) {
    std::vector<PositionRef> out;
    for (const Tuple* t : instance.canonical_order()) {
        for (std::size_t j = 0; j < t->values.size(); ++j) {
            if (!t->values[j].is_null()) out.push_back(PositionRef{t->relation, t->tid, j + 1});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const Constant& value_at(const Instance& instance, const PositionRef& ref) {
    const Tuple& t = instance.at(ref.tid);
    if (ref.position == 0 || ref.position > t.values.size()) {
        throw ModelError("position out of range in " + ref.to_string());
    }
    return t.values[ref.position - 1];
}

std::string to_string(const Tuple& tuple) {
    std::ostringstream os;
    os << tuple.relation << "(" << tuple.tid;
    for (std::size_t i = 0; i < tuple.values.size(); ++i) {
        os << (i == 0 ? ";" : ",") << tuple.values[i].to_string();
    }
    os << ")";
    return os.str();
}

std::string to_string(const TidSet& tids) {
    std::string out = "{";
    bool first = true;
    for (Tid t : tids) {
        if (!first) out += ",";
        out += std::to_string(t);
        first = false;
    }
    return out + "}";
}

std::string to_string(const UpdateSet& update) {
    std::string out;
    for (const auto& ref : update) {
        if (!out.empty()) out += ", ";
        out += ref.to_string();
    }
    return out;
}

} // namespace repcause
