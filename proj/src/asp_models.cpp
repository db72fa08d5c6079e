#include <algorithm>
#include <cctype>
#include <map>
#include <tuple>

#include "repcause/asp_emit.hpp"
#include "repcause/error.hpp"
#include "repcause/null_repairs.hpp"
#include "repcause/tuple_repairs.hpp"

namespace repcause {

namespace {

// --- canonical statements --------------------------------------------------

std::vector<std::string> program_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < s.size()) {
        char c = s[i];
        if (c == '%') {
            while (i < s.size() && s[i] != '\n') ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (ident_char(c) || (c == '#' && i + 1 < s.size() && ident_char(s[i + 1]))) {
            std::size_t j = i + 1;
            while (j < s.size() && ident_char(s[j])) ++j;
            out.emplace_back(s.substr(i, j - i));
            i = j;
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"') j += s[j] == '\\' ? 2 : 1;
            j = std::min(j + 1, s.size());
            out.emplace_back(s.substr(i, j - i));
            i = j;
        } else {
            auto two = s.substr(i, 2);
            if (two == ":-" || two == ":~" || two == "!=" || two == "<=" || two == ">=" || two == "<>" ||
                two == "==") {
                out.emplace_back(two);
                i += 2;
            } else {
                out.emplace_back(1, c);
                ++i;
            }
        }
    }
    return out;
}

using Literal = std::vector<std::string>;

bool is_variable(const std::vector<std::string>& toks, std::size_t i) {
    const auto& t = toks[i];
    bool upper = std::isupper(static_cast<unsigned char>(t[0])) || t[0] == '_';
    return upper && !(i + 1 < toks.size() && toks[i + 1] == "(");
}

// Splits at top-level separators (tokens equal to one of `seps`).
std::vector<Literal> split_top(const std::vector<std::string>& toks, std::initializer_list<const char*> seps) {
    std::vector<Literal> out;
    Literal cur;
    int depth = 0;
    for (const auto& t : toks) {
        if (t == "(" || t == "{" || t == "[") ++depth;
        if (t == ")" || t == "}" || t == "]") --depth;
        bool sep = depth == 0 && std::any_of(seps.begin(), seps.end(), [&](const char* s) { return t == s; });
        if (sep) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(t);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string shape(const Literal& lit) {
    std::string out;
    for (std::size_t i = 0; i < lit.size(); ++i) {
        out += is_variable(lit, i) ? std::string("_") : lit[i];
        out += ' ';
    }
    return out;
}

// Sorts by shape and returns the tie groups as [begin, end) index pairs.
std::vector<std::pair<std::size_t, std::size_t>> order_by_shape(std::vector<Literal>& lits) {
    std::stable_sort(lits.begin(), lits.end(), [](const Literal& a, const Literal& b) { return shape(a) < shape(b); });
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    for (std::size_t i = 0; i < lits.size();) {
        std::size_t j = i + 1;
        while (j < lits.size() && shape(lits[j]) == shape(lits[i])) ++j;
        if (j - i > 1) groups.emplace_back(i, j);
        i = j;
    }
    return groups;
}

std::string render_statement(const std::string& kind, const std::vector<Literal>& head,
                             const std::vector<Literal>& body, const std::string& end) {
    std::map<std::string, std::string> rename;
    auto lit_text = [&](const Literal& l) {
        std::string out;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (i) out += ' ';
            if (is_variable(l, i)) {
                auto [it, fresh] = rename.emplace(l[i], "V" + std::to_string(rename.size()));
                out += it->second;
            } else {
                out += l[i];
            }
        }
        return out;
    };
    std::string out = kind;
    for (std::size_t i = 0; i < head.size(); ++i) out += (i ? " v " : "") + lit_text(head[i]);
    if (!body.empty()) {
        out += kind.empty() ? (head.empty() ? "" : " :- ") : " ";
        for (std::size_t i = 0; i < body.size(); ++i) out += (i ? " , " : "") + lit_text(body[i]);
    }
    return out + " " + end;
}

// All orderings that permute literals within tie groups; the smallest
// rendering is the canonical one.
std::string canonical(const std::string& kind, std::vector<Literal> head, std::vector<Literal> body,
                      const std::string& end) {
    auto hg = order_by_shape(head);
    auto bg = order_by_shape(body);
    std::vector<std::pair<std::vector<Literal>*, std::pair<std::size_t, std::size_t>>> groups;
    double combos = 1;
    for (auto g : hg) groups.push_back({&head, g});
    for (auto g : bg) groups.push_back({&body, g});
    for (const auto& [v, g] : groups) {
        for (std::size_t k = 2; k <= g.second - g.first; ++k) combos *= static_cast<double>(k);
    }
    std::string best = render_statement(kind, head, body, end);
    if (combos > 50000) return best;
    for (auto& [v, g] : groups) {
        std::sort(v->begin() + static_cast<long>(g.first), v->begin() + static_cast<long>(g.second));
    }
    auto advance = [&]() {
        for (auto& [v, g] : groups) {
            if (std::next_permutation(v->begin() + static_cast<long>(g.first), v->begin() + static_cast<long>(g.second))) {
                return true;
            }
        }
        return false;
    };
    do {
        best = std::min(best, render_statement(kind, head, body, end));
    } while (advance());
    return best;
}

// --- models ----------------------------------------------------------------

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Splits at commas outside parentheses and braces; offsets are absolute.
std::vector<std::pair<std::size_t, std::string_view>> split_commas(std::string_view s, std::size_t base) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            out.emplace_back(base + start, s.substr(start, i - start));
            start = i + 1;
        } else if (s[i] == '(' || s[i] == '{') {
            ++depth;
        } else if (s[i] == ')' || s[i] == '}') {
            --depth;
        }
    }
    return out;
}

ModelAtom parse_atom(std::string_view text, std::size_t offset, std::string_view whole) {
    auto fail = [&](const std::string& msg) -> ModelAtom {
        auto [l, c] = line_col(whole, offset);
        throw ParseError(msg, l, c);
    };
    std::string s = trim(text);
    if (s.empty()) return fail("empty atom in model");
    std::size_t p = 0;
    while (p < s.size() && (std::isalnum(static_cast<unsigned char>(s[p])) || s[p] == '_')) ++p;
    if (p == 0 || !std::isalpha(static_cast<unsigned char>(s[0]))) return fail("malformed atom '" + s + "'");
    ModelAtom a;
    a.predicate = s.substr(0, p);
    if (p == s.size()) return a;
    if (s[p] != '(' || s.back() != ')') return fail("malformed atom '" + s + "'");
    std::string_view inner(s);
    inner = inner.substr(p + 1, s.size() - p - 2);
    for (const auto& [off, arg] : split_commas(inner, 0)) {
        std::string t = trim(arg);
        if (t.empty()) return fail("empty argument in '" + s + "'");
        a.args.push_back(std::move(t));
        (void)off;
    }
    return a;
}

bool is_integer_text(const std::string& s) {
    std::size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Constant arg_constant(const std::string& s) {
    if (s == "null") return Constant::null();
    if (is_integer_text(s)) return Constant::integer(std::stoll(s));
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            if (s[i] == '\\' && i + 2 < s.size()) ++i;
            out += s[i];
        }
        return Constant::symbol(out);
    }
    return Constant::symbol(s);
}

using TupleKey = std::tuple<std::string, Tid, std::vector<Constant>>;
using RepairKey = std::set<TupleKey>;

RepairKey key_of(const Instance& inst, const std::set<std::string>& relations) {
    RepairKey k;
    for (const auto& [tid, t] : inst.tuples()) {
        if (relations.count(t.relation)) k.emplace(t.relation, tid, t.values);
    }
    return k;
}

} // namespace

std::vector<std::string> canonical_statements(std::string_view program) {
    auto toks = program_tokens(program);
    std::vector<std::string> out;
    std::vector<std::string> cur;
    int depth = 0;
    for (const auto& t : toks) {
        if (t == "(" || t == "{") ++depth;
        if (t == ")" || t == "}") --depth;
        if (depth == 0 && (t == "." || t == "?")) {
            std::string kind;
            std::vector<std::string> head_toks, body_toks;
            if (!cur.empty() && (cur[0] == ":~" || cur[0] == ":-")) {
                kind = cur[0];
                body_toks.assign(cur.begin() + 1, cur.end());
            } else {
                auto it = std::find(cur.begin(), cur.end(), ":-");
                head_toks.assign(cur.begin(), it);
                if (it != cur.end()) body_toks.assign(it + 1, cur.end());
            }
            out.push_back(canonical(kind, split_top(head_toks, {"v", "|"}), split_top(body_toks, {","}), t));
            cur.clear();
        } else {
            cur.push_back(t);
        }
    }
    if (!cur.empty()) out.push_back(canonical("", {cur}, {}, ""));
    std::sort(out.begin(), out.end());
    return out;
}

bool equivalent_programs(std::string_view a, std::string_view b) {
    return canonical_statements(a) == canonical_statements(b);
}

std::vector<StableModel> parse_models(std::string_view text) {
    std::vector<StableModel> out;
    std::size_t i = 0;
    std::size_t segment = 0;  // start of text since the previous model
    auto fail = [&](const std::string& msg, std::size_t at) {
        auto [l, c] = line_col(text, at);
        throw ParseError(msg, l, c);
    };
    auto check_between = [&](std::string_view between, std::size_t base, bool before_model) -> bool {
        bool best = false;
        std::size_t start = 0;
        while (start <= between.size()) {
            std::size_t nl = between.find('\n', start);
            if (nl == std::string_view::npos) nl = between.size();
            std::string line = trim(between.substr(start, nl - start));
            bool last = nl == between.size();
            if (!line.empty()) {
                if (line.rfind("Cost", 0) == 0 || line.rfind("DLV", 0) == 0) {
                    // solver trailer or banner
                } else if (before_model && last && line == "Best model:") {
                    best = true;
                } else {
                    fail("unexpected text '" + line + "' in solver output", base + start);
                }
            }
            start = nl + 1;
        }
        return best;
    };
    while (i < text.size()) {
        if (text[i] == '}') fail("unbalanced '}'", i);
        if (text[i] != '{') {
            ++i;
            continue;
        }
        StableModel m;
        m.best = check_between(text.substr(segment, i - segment), segment, true);
        std::size_t open = i;
        int depth = 0;
        std::size_t j = i;
        for (; j < text.size(); ++j) {
            if (text[j] == '{') ++depth;
            if (text[j] == '}' && --depth == 0) break;
        }
        if (j >= text.size()) fail("unterminated model", open);
        auto inner = text.substr(open + 1, j - open - 1);
        if (!trim(inner).empty()) {
            for (const auto& [off, a] : split_commas(inner, open + 1)) {
                m.atoms.push_back(parse_atom(a, off, text));
            }
        }
        out.push_back(std::move(m));
        i = j + 1;
        segment = i;
    }
    check_between(text.substr(segment), segment, false);
    return out;
}

CorrespondenceReport verify_model_correspondence(const Instance& instance,
                                                 const std::vector<DenialConstraint>& dcs,
                                                 std::string_view models_text, Semantics semantics) {
    auto models = parse_models(models_text);
    std::set<std::string> relations;
    for (const auto& dc : dcs) {
        for (const auto& a : dc.body.atoms) relations.insert(a.relation);
    }
    CorrespondenceReport report;
    report.compared_cardinality =
        !models.empty() && std::any_of(models.begin(), models.end(), [](const StableModel& m) { return m.best; });

    std::vector<RepairKey> repairs;
    if (semantics == Semantics::tuple) {
        auto recs = report.compared_cardinality ? c_repairs(instance, dcs) : s_repairs(instance, dcs);
        for (const auto& r : recs) repairs.push_back(key_of(r.repair, relations));
    } else {
        auto recs = report.compared_cardinality ? cardinality_null_repairs(instance, dcs) : null_repairs(instance, dcs);
        for (const auto& r : recs) repairs.push_back(key_of(r.repair, relations));
    }

    auto annotated = [&](const ModelAtom& a, const char* ann, TupleKey& key) {
        if (a.predicate.size() < 3 || a.predicate.compare(a.predicate.size() - 2, 2, "_a") != 0) return false;
        std::string rel = a.predicate.substr(0, a.predicate.size() - 2);
        if (!relations.count(rel) || a.args.size() < 2 || a.args.back() != ann) return false;
        Constant tid = arg_constant(a.args.front());
        if (!tid.is_integer() || tid.as_integer() <= 0) {
            throw ParseError("tid '" + a.args.front() + "' of " + a.predicate + " is not a positive integer", 0, 0);
        }
        std::vector<Constant> values;
        for (std::size_t k = 1; k + 1 < a.args.size(); ++k) values.push_back(arg_constant(a.args[k]));
        key = {rel, static_cast<Tid>(tid.as_integer()), std::move(values)};
        return true;
    };

    std::vector<bool> taken(repairs.size(), false);
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        RepairKey stays, deleted;
        for (const auto& a : models[mi].atoms) {
            TupleKey k;
            if (annotated(a, "s", k)) stays.insert(k);
            if (semantics == Semantics::tuple && annotated(a, "d", k)) deleted.insert(k);
        }
        if (stays.empty() && semantics == Semantics::tuple) {
            // filtered output listing only deletions
            for (const auto& k : key_of(instance, relations)) {
                if (!deleted.count(k)) stays.insert(k);
            }
        }
        bool matched = false;
        for (std::size_t ri = 0; ri < repairs.size(); ++ri) {
            if (!taken[ri] && repairs[ri] == stays) {
                taken[ri] = true;
                report.matched.emplace_back(mi, ri);
                matched = true;
                break;
            }
        }
        if (!matched) report.unmatched_models.push_back(mi);
    }
    for (std::size_t ri = 0; ri < repairs.size(); ++ri) {
        if (!taken[ri]) report.unmatched_repairs.push_back(ri);
    }
    report.models = models.size();
    report.repairs = repairs.size();
    report.bijection = report.unmatched_models.empty() && report.unmatched_repairs.empty();
    return report;
}

} // namespace repcause
