#include <cctype>
#include <optional>
#include <sstream>

#include "repcause/error.hpp"
#include "repcause/qlang.hpp"

namespace repcause {

namespace {

enum class Tok {
    ident, integer, string, lparen, rparen, comma, semicolon, dot, question,
    if_, arrow, op, end
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_blank();
            Token t;
            t.line = line_;
            t.column = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c))) {
                t.kind = Tok::ident;
                while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                              src_[pos_] == '_')) {
                    t.text += advance();
                }
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && pos_ + 1 < src_.size() &&
                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                t.kind = Tok::integer;
                t.text += advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    t.text += advance();
                }
            } else if (c == '"') {
                t.kind = Tok::string;
                advance();
                for (;;) {
                    if (pos_ >= src_.size() || src_[pos_] == '\n') {
                        throw ParseError("unterminated string", t.line, t.column);
                    }
                    char d = advance();
                    if (d == '"') break;
                    if (d == '\\') {
                        if (pos_ >= src_.size()) throw ParseError("unterminated string", t.line, t.column);
                        d = advance();
                        if (d == 'n') d = '\n';
                    }
                    t.text += d;
                }
            } else {
                t.text = std::string(1, c);
                auto two = src_.substr(pos_, 2);
                if (two == ":-") { t.kind = Tok::if_; t.text = ":-"; }
                else if (two == "->") { t.kind = Tok::arrow; t.text = "->"; }
                else if (two == "!=" || two == "<=" || two == ">=") { t.kind = Tok::op; t.text = std::string(two); }
                else if (two == "==" || two == "<>") {
                    throw ParseError("unknown builtin " + std::string(two), t.line, t.column);
                }
                else if (c == '=' || c == '<' || c == '>') t.kind = Tok::op;
                else if (c == '(') t.kind = Tok::lparen;
                else if (c == ')') t.kind = Tok::rparen;
                else if (c == ',') t.kind = Tok::comma;
                else if (c == ';') t.kind = Tok::semicolon;
                else if (c == '.') t.kind = Tok::dot;
                else if (c == '?') t.kind = Tok::question;
                else throw ParseError("unexpected character '" + t.text + "'", t.line, t.column);
                for (std::size_t i = 0; i < t.text.size(); ++i) advance();
            }
            out.push_back(std::move(t));
        }
    }

private:
    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_blank() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

bool is_variable_name(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

struct PendingFact {
    std::string relation;
    std::optional<Tid> tid;
    std::vector<Constant> values;
    Token at;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

    Problem run() {
        while (peek().kind != Tok::end) statement();
        // explicit tids are reserved first so auto tids never collide with later ones
        for (const auto& f : facts_) {
            if (!f.tid) continue;
            if (problem_.instance.contains(*f.tid)) {
                throw ParseError("duplicate tid " + std::to_string(*f.tid), f.at.line, f.at.column);
            }
            problem_.instance.add_fact(f.relation, f.tid, f.values);
        }
        for (const auto& f : facts_) {
            if (!f.tid) problem_.instance.add_fact(f.relation, std::nullopt, f.values);
        }
        for (const auto& [rel, ar] : arity_) problem_.instance.declare(rel, ar);
        return std::move(problem_);
    }

private:
    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const std::string& msg, const Token& t) const {
        throw ParseError(msg, t.line, t.column);
    }
    const Token& expect(Tok kind, const char* what) {
        if (peek().kind != kind) {
            fail(std::string("expected ") + what + (peek().kind == Tok::end ? " at end of input"
                                                                           : ", found '" + peek().text + "'"),
                 peek());
        }
        return next();
    }

    void check_arity(const std::string& rel, std::size_t n, const Token& at) {
        auto [it, fresh] = arity_.emplace(rel, n);
        if (!fresh && it->second != n) {
            fail("relation " + rel + " used with arity " + std::to_string(n) + ", earlier with arity " +
                     std::to_string(it->second),
                 at);
        }
    }

    Term term() {
        const Token& t = next();
        switch (t.kind) {
        case Tok::ident:
            if (is_variable_name(t.text)) return Variable{t.text};
            if (t.text == "null") return Constant::null();
            return Constant::symbol(t.text);
        case Tok::integer:
            try {
                return Constant::integer(std::stoll(t.text));
            } catch (const std::out_of_range&) {
                fail("integer out of range", t);
            }
        case Tok::string:
            return Constant::symbol(t.text);
        default:
            fail(t.kind == Tok::end ? "expected a term at end of input" : "expected a term, found '" + t.text + "'", t);
        }
    }

    std::vector<Term> term_list() {
        std::vector<Term> out;
        expect(Tok::lparen, "'('");
        out.push_back(term());
        while (peek().kind == Tok::comma) {
            next();
            out.push_back(term());
        }
        expect(Tok::rparen, "')'");
        return out;
    }

    BuiltinOp builtin_op(const Token& t) {
        if (t.text == "=") return BuiltinOp::eq;
        if (t.text == "!=") return BuiltinOp::ne;
        if (t.text == "<") return BuiltinOp::lt;
        if (t.text == "<=") return BuiltinOp::le;
        if (t.text == ">") return BuiltinOp::gt;
        if (t.text == ">=") return BuiltinOp::ge;
        fail("unknown builtin " + t.text, t);
    }

    // Parses literals up to (not including) the terminator; checks safety.
    ConjunctiveBody body(const Token& start) {
        ConjunctiveBody b;
        std::vector<std::pair<Token, BuiltinAtom>> builtins;
        for (;;) {
            const Token at = peek();
            if (at.kind == Tok::ident && peek(1).kind == Tok::lparen) {
                next();
                BodyAtom a{at.text, term_list()};
                check_arity(a.relation, a.terms.size(), at);
                b.atoms.push_back(std::move(a));
            } else {
                Term l = term();
                const Token& o = expect(Tok::op, "a comparison operator");
                BuiltinOp op = builtin_op(o);
                Term r = term();
                builtins.push_back({at, BuiltinAtom{op, std::move(l), std::move(r)}});
            }
            if (peek().kind != Tok::comma) break;
            next();
        }
        if (b.atoms.empty()) fail("rule body needs at least one atom", start);
        std::set<std::string> bound;
        for (const auto& a : b.atoms) {
            for (const auto& t : a.terms) {
                if (const auto* v = std::get_if<Variable>(&t)) bound.insert(v->name);
            }
        }
        for (auto& [tok, bi] : builtins) {
            for (const Term* t : {&bi.left, &bi.right}) {
                if (const auto* v = std::get_if<Variable>(t); v && !bound.count(v->name)) {
                    fail("unsafe variable " + v->name + " in comparison", tok);
                }
            }
            const auto* l = std::get_if<Constant>(&bi.left);
            const auto* r = std::get_if<Constant>(&bi.right);
            if (l && r && bi.op != BuiltinOp::eq && bi.op != BuiltinOp::ne && !l->is_null() &&
                !r->is_null() && l->kind() != r->kind()) {
                fail("cannot order-compare " + l->to_string() + " and " + r->to_string(), tok);
            }
            b.builtins.push_back(std::move(bi));
        }
        return b;
    }

    void statement() {
        const Token start = peek();
        if (start.kind == Tok::if_) {
            next();
            problem_.dcs.push_back({body(start)});
            expect(Tok::dot, "'.' after denial constraint");
            return;
        }
        if (start.kind != Tok::ident) fail("expected a statement, found '" + start.text + "'", start);
        next();
        if (peek().kind == Tok::if_) {
            query(start, {});
            return;
        }
        if (peek().kind != Tok::lparen) fail("expected '(' or ':-' after " + start.text, peek());
        next();
        std::optional<Tid> tid;
        if (peek().kind == Tok::integer && peek(1).kind == Tok::semicolon) {
            const Token& t = next();
            next();
            long long v = 0;
            try {
                v = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                fail("tid out of range", t);
            }
            if (v <= 0) fail("tids must be positive", t);
            tid = static_cast<Tid>(v);
        }
        std::vector<Term> terms;
        terms.push_back(term());
        while (peek().kind == Tok::comma) {
            next();
            terms.push_back(term());
        }
        expect(Tok::rparen, "')'");
        const Token& after = peek();
        if (after.kind == Tok::dot) {
            next();
            PendingFact f{start.text, tid, {}, start};
            for (const auto& t : terms) {
                if (const auto* v = std::get_if<Variable>(&t)) fail("variable " + v->name + " in a fact", start);
                f.values.push_back(std::get<Constant>(t));
            }
            check_arity(f.relation, f.values.size(), start);
            facts_.push_back(std::move(f));
            return;
        }
        if (tid) fail("a tid is only allowed in facts", start);
        if (after.kind == Tok::arrow) {
            next();
            InclusionDependency id;
            id.premise = {start.text, std::move(terms)};
            check_arity(id.premise.relation, id.premise.terms.size(), start);
            const Token& c = expect(Tok::ident, "a relation name");
            id.conclusion = {c.text, term_list()};
            check_arity(id.conclusion.relation, id.conclusion.terms.size(), c);
            expect(Tok::dot, "'.' after inclusion dependency");
            problem_.ids.push_back(std::move(id));
            return;
        }
        if (after.kind == Tok::if_) {
            std::vector<Variable> head;
            for (const auto& t : terms) {
                const auto* v = std::get_if<Variable>(&t);
                if (!v) fail("query head must list variables", start);
                head.push_back(*v);
            }
            query(start, std::move(head));
            return;
        }
        fail("expected '.', '->' or ':-', found '" + after.text + "'", after);
    }

    void query(const Token& name, std::vector<Variable> head) {
        expect(Tok::if_, "':-'");
        ConjunctiveBody b = body(name);
        expect(Tok::question, "'?' after query");
        auto vars = variables_of(b);
        for (const auto& v : head) {
            if (std::find(vars.begin(), vars.end(), v.name) == vars.end()) {
                fail("head variable " + v.name + " does not occur in the body", name);
            }
        }
        for (auto& q : problem_.queries) {
            if (q.name == name.text) {
                if (q.head != head) fail("disjuncts of query " + name.text + " must share the head", name);
                q.disjuncts.push_back(std::move(b));
                return;
            }
        }
        problem_.queries.push_back({name.text, std::move(head), {std::move(b)}});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Problem problem_;
    std::vector<PendingFact> facts_;
    std::map<std::string, std::size_t> arity_;
};

bool plain_symbol(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0])) || s == "null") return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    return true;
}

std::string render_constant(const Constant& c) {
    if (!c.is_symbol() || plain_symbol(c.as_symbol())) return c.to_string();
    std::string out = "\"";
    for (char ch : c.as_symbol()) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out + "\"";
}

std::string render_atom(const BodyAtom& a) {
    std::string out = a.relation + "(";
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        if (i) out += ",";
        out += to_string(a.terms[i]);
    }
    return out + ")";
}

} // namespace

std::string to_string(const Term& term) {
    if (const auto* v = std::get_if<Variable>(&term)) return v->name;
    return render_constant(std::get<Constant>(term));
}

Problem parse_problem(std::string_view text) { return Parser(text).run(); }

std::string render(const ConjunctiveBody& body) {
    std::string out;
    for (const auto& a : body.atoms) {
        if (!out.empty()) out += ", ";
        out += render_atom(a);
    }
    for (const auto& b : body.builtins) {
        out += ", " + to_string(b.left) + " " + to_string(b.op) + " " + to_string(b.right);
    }
    return out;
}

std::string render(const DenialConstraint& dc) { return ":- " + render(dc.body) + "."; }

std::string render(const QuerySpec& query) {
    std::string head = query.name;
    if (!query.head.empty()) {
        head += "(";
        for (std::size_t i = 0; i < query.head.size(); ++i) {
            if (i) head += ",";
            head += query.head[i].name;
        }
        head += ")";
    }
    std::string out;
    for (const auto& d : query.disjuncts) {
        if (!out.empty()) out += "\n";
        out += head + " :- " + render(d) + "?";
    }
    return out;
}

std::string render(const InclusionDependency& id) {
    return render_atom(id.premise) + " -> " + render_atom(id.conclusion) + ".";
}

std::string render_problem(const Problem& problem) {
    std::ostringstream os;
    for (const Tuple* t : problem.instance.canonical_order()) {
        os << t->relation << "(" << t->tid << ";";
        for (std::size_t i = 0; i < t->values.size(); ++i) {
            if (i) os << ",";
            os << render_constant(t->values[i]);
        }
        os << ").\n";
    }
    for (const auto& dc : problem.dcs) os << render(dc) << "\n";
    for (const auto& q : problem.queries) os << render(q) << "\n";
    for (const auto& id : problem.ids) os << render(id) << "\n";
    return os.str();
}

} // namespace repcause
