#include "parlog/formula.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace parlog {

// ---------------------------------------------------------------------------
// Interning pools

namespace {

struct AtomEntry {
    std::string name;
    Sort sort;
};

struct AtomTable {
    std::mutex mu;
    std::vector<AtomEntry> entries;
    std::unordered_map<std::string, AtomId> index; // key = name + '\1' + sort

    static AtomTable& instance() {
        static AtomTable t;
        return t;
    }
};

struct Node {
    Kind kind;
    std::uint32_t a = 0; // lhs id or AtomId
    std::uint32_t b = 0; // rhs id
};

struct NodeKeyHash {
    std::size_t operator()(const Node& n) const {
        std::size_t h = static_cast<std::size_t>(n.kind);
        h = h * 1000003u + n.a;
        h = h * 1000003u + n.b;
        return h;
    }
};

struct NodeKeyEq {
    bool operator()(const Node& x, const Node& y) const {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
};

struct NodeTable {
    std::mutex mu;
    std::vector<Node> nodes;
    std::unordered_map<Node, std::uint32_t, NodeKeyHash, NodeKeyEq> index;

    NodeTable() {
        nodes.push_back(Node{Kind::Bot, 0, 0}); // id 0 reserved for bottom
        index.emplace(nodes[0], 0u);
    }

    std::uint32_t intern(Node n) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = index.find(n);
        if (it != index.end())
            return it->second;
        std::uint32_t id = static_cast<std::uint32_t>(nodes.size());
        nodes.push_back(n);
        index.emplace(n, id);
        return id;
    }

    Node get(std::uint32_t id) const { return nodes[id]; }

    static NodeTable& instance() {
        static NodeTable t;
        return t;
    }
};

} // namespace

AtomId intern_atom(const std::string& name, Sort sort) {
    if (name.empty())
        throw ParseError("empty atom name");
    AtomTable& t = AtomTable::instance();
    std::lock_guard<std::mutex> lock(t.mu);
    std::string key = name + '\1' + (sort == Sort::Var ? 'v' : 'p');
    auto it = t.index.find(key);
    if (it != t.index.end())
        return it->second;
    AtomId id = static_cast<AtomId>(t.entries.size());
    t.entries.push_back(AtomEntry{name, sort});
    t.index.emplace(std::move(key), id);
    return id;
}

const std::string& atom_name(AtomId id) {
    return AtomTable::instance().entries[id].name;
}

Sort atom_sort(AtomId id) {
    return AtomTable::instance().entries[id].sort;
}

// ---------------------------------------------------------------------------
// Formula structure

Kind Formula::kind() const { return NodeTable::instance().get(id_).kind; }

Formula Formula::lhs() const { return Formula(NodeTable::instance().get(id_).a); }

Formula Formula::rhs() const { return Formula(NodeTable::instance().get(id_).b); }

AtomId Formula::atom() const { return NodeTable::instance().get(id_).a; }

Formula bot() { return Formula(0); }

Formula atom(AtomId id) {
    return Formula(NodeTable::instance().intern(Node{Kind::Atom, id, 0}));
}

Formula atom(const std::string& name, Sort sort) { return atom(intern_atom(name, sort)); }

Formula var(const std::string& name) { return atom(name, Sort::Var); }

Formula par(const std::string& name) { return atom(name, Sort::Par); }

Formula conj(Formula a, Formula b) {
    return Formula(NodeTable::instance().intern(Node{Kind::And, a.id(), b.id()}));
}

Formula disj(Formula a, Formula b) {
    return Formula(NodeTable::instance().intern(Node{Kind::Or, a.id(), b.id()}));
}

Formula imp(Formula a, Formula b) {
    return Formula(NodeTable::instance().intern(Node{Kind::Imp, a.id(), b.id()}));
}

Formula top() { return imp(bot(), bot()); }

Formula neg(Formula a) { return imp(a, bot()); }

Formula iff(Formula a, Formula b) { return conj(imp(a, b), imp(b, a)); }

Formula conj_all(const std::vector<Formula>& fs) {
    if (fs.empty())
        return top();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i)
        r = conj(r, fs[i]);
    return r;
}

Formula disj_all(const std::vector<Formula>& fs) {
    if (fs.empty())
        return bot();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i)
        r = disj(r, fs[i]);
    return r;
}

bool is_top(Formula f) {
    return f.kind() == Kind::Imp && f.lhs() == bot() && f.rhs() == bot();
}

bool is_neg(Formula f) {
    return f.kind() == Kind::Imp && f.rhs() == bot() && !is_top(f);
}

int complexity(Formula f) {
    // Iterative DAG walk; memo avoids exponential re-visits on shared nodes.
    std::unordered_map<std::uint32_t, int> memo;
    std::vector<std::uint32_t> stack{f.id()};
    while (!stack.empty()) {
        std::uint32_t id = stack.back();
        if (memo.count(id)) {
            stack.pop_back();
            continue;
        }
        Formula g(id);
        switch (g.kind()) {
        case Kind::Bot:
        case Kind::Atom:
            memo[id] = 0;
            stack.pop_back();
            break;
        default: {
            auto l = memo.find(g.lhs().id());
            auto r = memo.find(g.rhs().id());
            if (l == memo.end()) {
                stack.push_back(g.lhs().id());
                break;
            }
            if (r == memo.end()) {
                stack.push_back(g.rhs().id());
                break;
            }
            int m = std::max(l->second, r->second);
            memo[id] = (g.kind() == Kind::Imp) ? m + 1 : m;
            stack.pop_back();
        }
        }
    }
    return memo[f.id()];
}

namespace {

void collect_atoms(Formula f, std::unordered_set<std::uint32_t>& seen,
                   std::unordered_set<AtomId>& out) {
    if (!seen.insert(f.id()).second)
        return;
    switch (f.kind()) {
    case Kind::Bot:
        return;
    case Kind::Atom:
        out.insert(f.atom());
        return;
    default:
        collect_atoms(f.lhs(), seen, out);
        collect_atoms(f.rhs(), seen, out);
    }
}

std::vector<AtomId> sorted_atoms(const std::unordered_set<AtomId>& set) {
    std::vector<AtomId> v(set.begin(), set.end());
    std::sort(v.begin(), v.end(), [](AtomId a, AtomId b) {
        if (atom_name(a) != atom_name(b))
            return atom_name(a) < atom_name(b);
        return atom_sort(a) < atom_sort(b);
    });
    return v;
}

} // namespace

std::vector<AtomId> atoms_of(Formula f) {
    std::unordered_set<std::uint32_t> seen;
    std::unordered_set<AtomId> out;
    collect_atoms(f, seen, out);
    return sorted_atoms(out);
}

std::vector<AtomId> sort_atoms(std::vector<AtomId> v) {
    std::sort(v.begin(), v.end(), [](AtomId a, AtomId b) {
        if (atom_name(a) != atom_name(b))
            return atom_name(a) < atom_name(b);
        return atom_sort(a) < atom_sort(b);
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<AtomId> vars_of(Formula f) {
    std::vector<AtomId> out;
    for (AtomId a : atoms_of(f))
        if (is_var(a))
            out.push_back(a);
    return out;
}

std::vector<AtomId> pars_of(Formula f) {
    std::vector<AtomId> out;
    for (AtomId a : atoms_of(f))
        if (!is_var(a))
            out.push_back(a);
    return out;
}

bool is_par_only(Formula f) { return vars_of(f).empty(); }

std::size_t dag_size(Formula f) {
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> stack{f.id()};
    while (!stack.empty()) {
        std::uint32_t id = stack.back();
        stack.pop_back();
        if (!seen.insert(id).second)
            continue;
        Formula g(id);
        if (g.kind() == Kind::And || g.kind() == Kind::Or || g.kind() == Kind::Imp) {
            stack.push_back(g.lhs().id());
            stack.push_back(g.rhs().id());
        }
    }
    return seen.size();
}

// ---------------------------------------------------------------------------
// Signature and parser

Sort Signature::sort_of(const std::string& name) const {
    auto it = sorts.find(name);
    if (it != sorts.end())
        return it->second;
    if (!use_default)
        throw ParseError("unknown atom '" + name + "' (no sort assigned)");
    switch (name[0]) {
    case 'x': case 'y': case 'z': case 'u': case 'v': case 'w':
        return Sort::Var;
    default:
        return Sort::Par;
    }
}

void Signature::declare(const std::string& name, Sort sort) {
    auto it = sorts.find(name);
    if (it != sorts.end() && it->second != sort)
        throw ParseError("conflicting sort for atom '" + name + "'");
    sorts.emplace(name, sort);
}

namespace {

struct Token {
    enum Type { Ident, False, True, Not, And, Or, Arrow, Iff, LParen, RParen, End } type;
    std::string text;
    std::size_t pos;
};

struct Lexer {
    const std::string& src;
    std::size_t i = 0;

    explicit Lexer(const std::string& s) : src(s) {}

    Token next() {
        while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i])))
            ++i;
        std::size_t start = i;
        if (i >= src.size())
            return {Token::End, "", start};
        char c = src[i];
        if (c == '(') { ++i; return {Token::LParen, "(", start}; }
        if (c == ')') { ++i; return {Token::RParen, ")", start}; }
        if (c == '~') { ++i; return {Token::Not, "~", start}; }
        if (c == '&') { ++i; return {Token::And, "&", start}; }
        if (c == '|') { ++i; return {Token::Or, "|", start}; }
        if (c == '-') {
            if (i + 1 < src.size() && src[i + 1] == '>') {
                i += 2;
                return {Token::Arrow, "->", start};
            }
            throw ParseError("stray '-' at position " + std::to_string(start));
        }
        if (c == '<') {
            if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
                i += 3;
                return {Token::Iff, "<->", start};
            }
            throw ParseError("stray '<' at position " + std::to_string(start));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                    src[j] == '\''))
                ++j;
            std::string word = src.substr(i, j - i);
            i = j;
            if (word == "false")
                return {Token::False, word, start};
            if (word == "true")
                return {Token::True, word, start};
            return {Token::Ident, word, start};
        }
        throw ParseError(std::string("unexpected character '") + c + "' at position " +
                         std::to_string(start));
    }
};

struct Parser {
    Lexer lex;
    Token tok;
    const Signature& sig;

    Parser(const std::string& s, const Signature& sg) : lex(s), sig(sg) { tok = lex.next(); }

    void advance() { tok = lex.next(); }

    Formula parse_iff() {
        Formula f = parse_imp();
        while (tok.type == Token::Iff) {
            advance();
            Formula g = parse_imp();
            f = iff(f, g);
        }
        return f;
    }

    Formula parse_imp() {
        Formula f = parse_or();
        if (tok.type == Token::Arrow) {
            advance();
            return imp(f, parse_imp()); // right-associative
        }
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (tok.type == Token::Or) {
            advance();
            f = disj(f, parse_and());
        }
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (tok.type == Token::And) {
            advance();
            f = conj(f, parse_unary());
        }
        return f;
    }

    Formula parse_unary() {
        if (tok.type == Token::Not) {
            advance();
            return neg(parse_unary());
        }
        return parse_primary();
    }

    Formula parse_primary() {
        switch (tok.type) {
        case Token::False:
            advance();
            return bot();
        case Token::True:
            advance();
            return top();
        case Token::Ident: {
            std::string name = tok.text;
            advance();
            return atom(name, sig.sort_of(name));
        }
        case Token::LParen: {
            advance();
            Formula f = parse_iff();
            if (tok.type != Token::RParen)
                throw ParseError("expected ')' at position " + std::to_string(tok.pos));
            advance();
            return f;
        }
        default:
            throw ParseError("unexpected token '" + tok.text + "' at position " +
                             std::to_string(tok.pos));
        }
    }
};

} // namespace

Formula parse(const std::string& text, const Signature& sig) {
    Parser p(text, sig);
    Formula f = p.parse_iff();
    if (p.tok.type != Token::End)
        throw ParseError("trailing input at position " + std::to_string(p.tok.pos));
    return f;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Precedence: higher binds tighter.  Imp = 1 (right-assoc), Or = 2, And = 3,
// unary/atomic = 4.  <-> is never printed (it is parser sugar only).
void print_rec(Formula f, int min_prec, std::string& out) {
    if (is_top(f)) {
        out += "true";
        return;
    }
    switch (f.kind()) {
    case Kind::Bot:
        out += "false";
        return;
    case Kind::Atom:
        out += atom_name(f.atom());
        return;
    case Kind::Imp:
        if (is_neg(f)) {
            out += '~';
            print_rec(f.lhs(), 4, out);
            return;
        }
        if (min_prec > 1) {
            out += '(';
            print_rec(f, 1, out);
            out += ')';
            return;
        }
        print_rec(f.lhs(), 2, out);
        out += " -> ";
        print_rec(f.rhs(), 1, out);
        return;
    case Kind::Or:
        if (min_prec > 2) {
            out += '(';
            print_rec(f, 2, out);
            out += ')';
            return;
        }
        print_rec(f.lhs(), 2, out);
        out += " | ";
        print_rec(f.rhs(), 3, out);
        return;
    case Kind::And:
        if (min_prec > 3) {
            out += '(';
            print_rec(f, 3, out);
            out += ')';
            return;
        }
        print_rec(f.lhs(), 3, out);
        out += " & ";
        print_rec(f.rhs(), 4, out);
        return;
    }
}

} // namespace

std::string print(Formula f) {
    std::string out;
    print_rec(f, 1, out);
    return out;
}

// ---------------------------------------------------------------------------
// Simplifier

namespace {

// f appears in the And-flattening (glue == And) / Or-flattening of tree.
// Budgeted so heavily shared trees cannot blow the walk up.
bool flat_member(Formula tree, Formula f, Kind glue, int& budget) {
    if (tree == f)
        return true;
    if (--budget <= 0 || tree.kind() != glue)
        return false;
    return flat_member(tree.lhs(), f, glue, budget) ||
           flat_member(tree.rhs(), f, glue, budget);
}

bool flat_member(Formula tree, Formula f, Kind glue) {
    int budget = 64;
    return flat_member(tree, f, glue, budget);
}

Formula simp_node(Formula f) {
    // Children are already simplified.  Loop local rewrites to fixpoint.
    for (;;) {
        if (f.kind() == Kind::And) {
            Formula a = f.lhs(), b = f.rhs();
            if (a == bot() || b == bot())
                return bot();
            if (is_top(a))
                return b;
            if (is_top(b))
                return a;
            if (a == b)
                return a;
            if (b.kind() == Kind::Or && (b.lhs() == a || b.rhs() == a))
                return a; // A & (A | B)
            if (a.kind() == Kind::Or && (a.lhs() == b || a.rhs() == b))
                return b;
            return f;
        }
        if (f.kind() == Kind::Or) {
            Formula a = f.lhs(), b = f.rhs();
            if (is_top(a) || is_top(b))
                return top();
            if (a == bot())
                return b;
            if (b == bot())
                return a;
            if (a == b)
                return a;
            if (b.kind() == Kind::And && (b.lhs() == a || b.rhs() == a))
                return a; // A | (A & B)
            if (a.kind() == Kind::And && (a.lhs() == b || a.rhs() == b))
                return b;
            return f;
        }
        if (f.kind() == Kind::Imp) {
            Formula a = f.lhs(), b = f.rhs();
            if (a == bot())
                return top();
            if (is_top(b))
                return top();
            if (a == b)
                return top();
            if (flat_member(a, b, Kind::And))
                return top(); // conjunction implies each conjunct
            if (flat_member(b, a, Kind::Or))
                return top(); // disjunct implies the disjunction
            if (is_top(a)) {
                f = b;
                if (f.kind() == Kind::And || f.kind() == Kind::Or || f.kind() == Kind::Imp)
                    continue; // b is simplified already; just unwrap
                return f;
            }
            return f;
        }
        return f;
    }
}

Formula simplify_memo(Formula f, std::unordered_map<std::uint32_t, Formula>& memo) {
    auto it = memo.find(f.id());
    if (it != memo.end())
        return it->second;
    Formula r = f;
    switch (f.kind()) {
    case Kind::Bot:
    case Kind::Atom:
        break;
    default: {
        Formula a = simplify_memo(f.lhs(), memo);
        Formula b = simplify_memo(f.rhs(), memo);
        switch (f.kind()) {
        case Kind::And: r = conj(a, b); break;
        case Kind::Or:  r = disj(a, b); break;
        default:        r = imp(a, b); break;
        }
        r = simp_node(r);
    }
    }
    memo.emplace(f.id(), r);
    return r;
}

} // namespace

Formula simplify(Formula f) {
    std::unordered_map<std::uint32_t, Formula> memo;
    return simplify_memo(f, memo);
}

// ---------------------------------------------------------------------------
// Substitutions

namespace {

Formula rebuild(Formula f, const std::vector<std::pair<AtomId, Formula>>& bind,
                std::unordered_map<std::uint32_t, Formula>& memo) {
    auto it = memo.find(f.id());
    if (it != memo.end())
        return it->second;
    Formula r = f;
    switch (f.kind()) {
    case Kind::Bot:
        break;
    case Kind::Atom: {
        AtomId a = f.atom();
        auto pos = std::lower_bound(bind.begin(), bind.end(), a,
                                    [](const auto& p, AtomId x) { return p.first < x; });
        if (pos != bind.end() && pos->first == a)
            r = pos->second;
        break;
    }
    case Kind::And:
        r = conj(rebuild(f.lhs(), bind, memo), rebuild(f.rhs(), bind, memo));
        break;
    case Kind::Or:
        r = disj(rebuild(f.lhs(), bind, memo), rebuild(f.rhs(), bind, memo));
        break;
    case Kind::Imp:
        r = imp(rebuild(f.lhs(), bind, memo), rebuild(f.rhs(), bind, memo));
        break;
    }
    memo.emplace(f.id(), r);
    return r;
}

} // namespace

Formula replace_atom(Formula f, AtomId a, Formula by) {
    std::vector<std::pair<AtomId, Formula>> bind{{a, by}};
    std::unordered_map<std::uint32_t, Formula> memo;
    return rebuild(f, bind, memo);
}

void Substitution::set(AtomId v, Formula f) {
    if (!is_var(v))
        throw ParseError("substitution binds parameter '" + atom_name(v) + "'");
    auto pos = std::lower_bound(bind_.begin(), bind_.end(), v,
                                [](const auto& p, AtomId x) { return p.first < x; });
    if (pos != bind_.end() && pos->first == v)
        pos->second = f;
    else
        bind_.insert(pos, {v, f});
}

void Substitution::set(const std::string& var_name, Formula f) {
    set(intern_atom(var_name, Sort::Var), f);
}

Formula Substitution::get(AtomId a) const {
    auto pos = std::lower_bound(bind_.begin(), bind_.end(), a,
                                [](const auto& p, AtomId x) { return p.first < x; });
    if (pos != bind_.end() && pos->first == a)
        return pos->second;
    return atom(a);
}

bool Substitution::bound(AtomId a) const {
    auto pos = std::lower_bound(bind_.begin(), bind_.end(), a,
                                [](const auto& p, AtomId x) { return p.first < x; });
    return pos != bind_.end() && pos->first == a;
}

Formula Substitution::operator()(Formula f) const {
    if (bind_.empty())
        return f;
    std::unordered_map<std::uint32_t, Formula> memo;
    return rebuild(f, bind_, memo);
}

Substitution compose(const Substitution& f, const Substitution& g) {
    Substitution r;
    for (const auto& [v, t] : g.bindings())
        r.set(v, f(t));
    for (const auto& [v, t] : f.bindings())
        if (!r.bound(v))
            r.set(v, t);
    return r;
}

// ---------------------------------------------------------------------------
// FormulaSet

bool FormulaSet::insert(Formula f) {
    if (contains(f))
        return false;
    items_.push_back(f);
    return true;
}

bool FormulaSet::contains(Formula f) const {
    for (Formula g : items_)
        if (g == f)
            return true;
    return false;
}

} // namespace parlog
