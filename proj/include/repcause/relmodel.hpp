#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace repcause {

using Tid = std::uint64_t;
using TidSet = std::set<Tid>;

/// A database constant: a symbol, an integer, or the distinguished null.
///
/// Equality here is structural (null == null holds), which is what instance
/// comparison needs. Query evaluation never uses it to satisfy a join; see
/// qlang's comparison rules.
class Constant {
public:
    enum class Kind { null, integer, symbol };

    Constant() = default;  // null

    static Constant null() { return Constant(); }
    static Constant integer(std::int64_t v) { return Constant(Payload(v)); }
    static Constant symbol(std::string s) { return Constant(Payload(std::move(s))); }

    Kind kind() const { return static_cast<Kind>(value_.index()); }
    bool is_null() const { return kind() == Kind::null; }
    bool is_integer() const { return kind() == Kind::integer; }
    bool is_symbol() const { return kind() == Kind::symbol; }

    std::int64_t as_integer() const { return std::get<std::int64_t>(value_); }
    const std::string& as_symbol() const { return std::get<std::string>(value_); }

    /// "null", the decimal integer, or the symbol text.
    std::string to_string() const;

    friend bool operator==(const Constant&, const Constant&) = default;
    friend std::strong_ordering operator<=>(const Constant& a, const Constant& b);

private:
    using Payload = std::variant<std::monostate, std::int64_t, std::string>;
    explicit Constant(Payload p) : value_(std::move(p)) {}
    Payload value_;
};

struct Tuple {
    std::string relation;
    Tid tid = 0;
    std::vector<Constant> values;
    bool endogenous = true;

    friend bool operator==(const Tuple&, const Tuple&) = default;
};

/// The positioned value R[tid;position]; position 1 is the first non-tid attribute.
struct PositionRef {
    std::string relation;
    Tid tid = 0;
    std::size_t position = 1;

    friend bool operator==(const PositionRef&, const PositionRef&) = default;
    friend std::strong_ordering operator<=>(const PositionRef& a, const PositionRef& b) {
        if (auto c = a.relation <=> b.relation; c != 0) return c;
        if (auto c = a.tid <=> b.tid; c != 0) return c;
        return a.position <=> b.position;
    }

    /// "R[2;1]"
    std::string to_string() const;
};

using UpdateSet = std::set<PositionRef>;

/// A set of tid-keyed tuples over a schema of relation arities.
class Instance {
public:
    /// Declares a relation (or checks an existing declaration).
    /// Throws ModelError on arity conflict.
    void declare(const std::string& relation, std::size_t arity);

    /// Inserts a tuple. Without an explicit tid the smallest unused positive
    /// integer is assigned. The relation is declared implicitly on first use.
    Tid add_fact(const std::string& relation, std::optional<Tid> tid,
                 std::vector<Constant> values, bool endogenous = true);

    bool contains(Tid tid) const { return tuples_.count(tid) != 0; }
    const Tuple& at(Tid tid) const;
    const Tuple* find(Tid tid) const;

    const std::map<Tid, Tuple>& tuples() const { return tuples_; }
    const std::map<std::string, std::size_t>& schema() const { return schema_; }
    std::optional<std::size_t> arity(const std::string& relation) const;

    /// Tids of one relation in ascending order (empty for unknown relations).
    const std::vector<Tid>& relation_tids(const std::string& relation) const;

    std::size_t size() const { return tuples_.size(); }
    bool empty() const { return tuples_.empty(); }

    TidSet tids() const;
    TidSet endogenous_tids() const;

    /// Tuples in canonical output order: relation name, then tid.
    std::vector<const Tuple*> canonical_order() const;

    friend bool operator==(const Instance& a, const Instance& b) {
        return a.schema_ == b.schema_ && a.tuples_ == b.tuples_;
    }

private:
    std::map<std::string, std::size_t> schema_;
    std::map<Tid, Tuple> tuples_;
    std::map<std::string, std::vector<Tid>> by_relation_;
    Tid next_free_ = 1;
};

/// D \ Γ as a new instance. Throws ModelError for unknown tids.
Instance delete_tuples(const Instance& instance, const TidSet& tids);

/// The instance restricted to the given tids (complement of delete_tuples).
Instance restrict_to(const Instance& instance, const TidSet& keep);

/// U∘D: every referenced position becomes null, tids are preserved.
/// Throws ModelError for unknown tids, relation mismatch or out-of-range positions.
Instance apply_update(const UpdateSet& update, const Instance& instance);

/// Δ^null(D, D'): positions non-null in D and null in D'.
/// Throws ModelError when the tids differ or a value changed to something other than null.
UpdateSet delta_null(const Instance& original, const Instance& updated);

/// Every non-null positioned value of the instance, in canonical order.
std::vector<PositionRef> non_null_positions(const Instance& instance);

const Constant& value_at(const Instance& instance, const PositionRef& ref);

std::string to_string(const Tuple& tuple);       // "R(1;a,b)"
std::string to_string(const TidSet& tids);       // "{1,3}"
std::string to_string(const UpdateSet& update);  // "R[2;1], R[3;2]"

} // namespace repcause
