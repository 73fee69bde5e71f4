#include "crs/words.hpp"

#include <cctype>
#include <sstream>

namespace crs {

Word free_reduce(const std::vector<Letter>& letters) { return Word(letters); }

Word::Word(std::vector<Letter> letters) {
    for (auto& x : letters) {
        if (x.exp != 1 && x.exp != -1) throw WordError("letter exponent must be +-1");
        if (!l_.empty() && l_.back().gen == x.gen && l_.back().exp == -x.exp)
            l_.pop_back();
        else
            l_.push_back(std::move(x));
    }
}

Word Word::inv() const {
    std::vector<Letter> r(l_.rbegin(), l_.rend());
    for (auto& x : r) x.exp = -x.exp;
    return Word(r);
}

Word Word::pow(int k) const {
    Word base = k < 0 ? inv() : *this;
    Word r;
    for (int i = 0; i < (k < 0 ? -k : k); ++i) r = r * base;
    return r;
}

Word Word::operator*(const Word& o) const {
    std::vector<Letter> r = l_;
    r.insert(r.end(), o.l_.begin(), o.l_.end());
    return Word(r);
}

std::string Word::str() const {
    if (l_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < l_.size(); ++i) {
        if (i) s += "*";
        s += l_[i].gen;
        if (l_[i].exp < 0) s += "^-1";
    }
    return s;
}

Word commutator(const Word& x, const Word& y) { return x * y * x.inv() * y.inv(); }

namespace {

struct Parser {
    const std::string& s;
    const Resolver& resolve;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    void expect(char c) {
        if (!peek(c)) throw WordError(std::string("expected '") + c + "' at position " + std::to_string(i) + " in '" + s + "'");
        ++i;
    }
    bool at_atom() {
        skip();
        if (i >= s.size()) return false;
        char c = s[i];
        return c == '(' || c == '[' || std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '1';
    }

    Word word() {
        Word w;
        bool first = true;
        while (true) {
            if (!first && peek('*')) {
                ++i;
            } else if (!first && !at_atom()) {
                break;
            }
            if (!at_atom()) {
                if (first) break;
                throw WordError("dangling '*' in '" + s + "'");
            }
            w = w * factor();
            first = false;
        }
        return w;
    }

    Word factor() {
        Word a = atom();
        if (peek('^')) {
            ++i;
            skip();
            std::size_t j = i;
            if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
            std::size_t k = j;
            while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
            if (k == j) throw WordError("bad exponent in '" + s + "'");
            int e = std::stoi(s.substr(i, k - i));
            i = k;
            a = a.pow(e);
        }
        return a;
    }

    Word atom() {
        skip();
        char c = s[i];
        if (c == '(') {
            ++i;
            Word w = word();
            expect(')');
            return w;
        }
        if (c == '[') {
            ++i;
            Word x = word();
            expect(',');
            Word y = word();
            expect(']');
            return commutator(x, y);
        }
        if (c == '1' && (i + 1 >= s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1])))) {
            ++i;
            return Word();
        }
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
        std::string name = s.substr(i, j - i);
        i = j;
        return resolve(name);
    }
};

}  // namespace

Word parse_word(const std::string& text, const Resolver& resolve) {
    Parser p{text, resolve};
    Word w = p.word();
    p.skip();
    if (p.i != text.size()) throw WordError("unexpected '" + std::string(1, text[p.i]) + "' in '" + text + "'");
    return w;
}

Word knot_symbol(const std::string& name) {
    const Word g1 = Word::gen("g1"), g3 = Word::gen("g3");
    if (name == "g1") return g1;
    if (name == "g3" || name == "t") return g3;
    if (name == "g2" || name == "a") return commutator(g3, g1.inv());
    if (name == "b") return commutator(commutator(g3, g1.inv()), g3.inv());
    throw WordError("unknown symbol '" + name + "' (use g1, g3, g2, a, b, t)");
}

Word parse_knot_word(const std::string& text) { return parse_word(text, knot_symbol); }

Representation::Representation(std::string n, long dd, std::map<std::string, ExactElem> im)
    : name(std::move(n)), d(dd), images(std::move(im)) {}

namespace {

using E = std::pair<BigRational, BigRational>;
E q(long a, long b = 1) { return {rat(a, b), 0}; }
E qi(long ra, long rb, long ia, long ib) { return {rat(ra, rb), rat(ia, ib)}; }

}  // namespace

Representation rho1() {
    const long d = 3;
    auto g1 = exact_elem(d, {q(1), q(1), qi(-1, 2, -1, 2), q(0), q(1), q(-1), q(0), q(0), q(1)});
    auto g3 = exact_elem(d, {q(1), q(0), q(0), q(1), q(1), q(0), qi(-1, 2, -1, 2), q(-1), q(1)});
    return Representation("rho1", d, {{"g1", g1}, {"g3", g3}});
}

Representation rho2() {
    const long d = 7;
    auto g1 = exact_elem(d, {q(1), q(1), qi(-1, 2, -1, 2), q(0), q(1), q(-1), q(0), q(0), q(1)});
    auto g3 = exact_elem(d, {q(1), q(0), q(0), q(-1), q(1), q(0), qi(-1, 2, 1, 2), q(1), q(1)});
    return Representation("rho2", d, {{"g1", g1}, {"g3", g3}});
}

Representation rho3() {
    const long d = 7;
    auto g1 = exact_elem(d, {q(1), q(1), q(-1, 2), q(0), q(1), q(-1), q(0), q(0), q(1)});
    auto g3 = exact_elem(d, {q(1), q(0), q(0), qi(5, 4, -1, 4), q(1), q(0), q(-1), qi(-5, 4, -1, 4), q(1)});
    return Representation("rho3", d, {{"g1", g1}, {"g3", g3}});
}

Representation trivial_rep(long d) {
    auto id = ExactElem::identity(QuadNum(d, 0));
    return Representation("trivial", d, {{"g1", id}, {"g3", id}});
}

Representation picard7_generators() {
    const long d = 7;
    // omega7 = (1 + i sqrt7)/2
    auto I = exact_elem(d, {q(0), q(0), q(1), q(0), q(-1), q(0), q(1), q(0), q(0)});
    auto R1 = exact_elem(d, {q(1), q(0), q(0), q(0), q(-1), q(0), q(0), q(0), q(1)});
    auto R2 = exact_elem(d, {q(1), q(1), qi(-1, 2, 1, 2), q(0), q(-1), q(1), q(0), q(0), q(1)});
    auto R3 = exact_elem(d, {q(1), qi(1, 2, -1, 2), q(-1), q(0), q(-1), qi(1, 2, 1, 2), q(0), q(0), q(1)});
    auto T = exact_elem(d, {q(1), q(0), qi(0, 1, 1, 1), q(0), q(1), q(0), q(0), q(0), q(1)});
    return Representation("picard7-stabilizer", d, {{"I", I}, {"R1", R1}, {"R2", R2}, {"R3", R3}, {"T", T}});
}

ExactElem stated_G2() {
    return exact_elem(7, {q(2), qi(3, 2, -1, 2), q(-1), qi(-3, 2, -1, 2), q(-1), q(0), q(-1), q(0), q(0)});
}

ExactElem eval(const Representation& rep, const Word& w) {
    ExactElem r = ExactElem::identity(QuadNum(rep.d, 0));
    for (const auto& x : w.letters()) {
        auto it = rep.images.find(x.gen);
        if (it == rep.images.end()) throw WordError("generator '" + x.gen + "' not in representation " + rep.name);
        r = r * (x.exp > 0 ? it->second : it->second.inv());
    }
    return r;
}

bool Report::all_pass() const {
    for (auto& i : items)
        if (!i.pass) return false;
    return true;
}

void Report::add(std::string name, bool pass, std::string detail) {
    items.push_back(CheckItem{std::move(name), pass, std::move(detail)});
}

Report check_group_relation(const Representation& rep) {
    Report r;
    r.title = "group relations for " + rep.name;
    auto ev = [&](const std::string& s) { return eval(rep, parse_knot_word(s)); };
    r.add("defining relation [g3,g1^-1] g3 = g1 [g3,g1^-1]", projective_eq(ev("[g3,g1^-1] g3"), ev("g1 [g3,g1^-1]")));
    r.add("fiber relation t a t^-1 = a b a", projective_eq(ev("t a t^-1"), ev("a b a")));
    r.add("fiber relation t b t^-1 = a b", projective_eq(ev("t b t^-1"), ev("a b")));
    r.add("g1 = g2 g3 g2^-1", projective_eq(ev("g1"), ev("g2 g3 g2^-1")));
    return r;
}

bool check_t3_commutator(const Representation& rep) {
    auto ev = [&](const std::string& s) { return eval(rep, parse_knot_word(s)); };
    return projective_eq(ev("t^3"), ev("[a^-1,b^-1]"));
}

Report check_lattice_membership(const Representation& rep) {
    Report r;
    r.title = "O_" + std::to_string(rep.d) + " membership for " + rep.name;
    for (const auto& [g, M] : rep.images) {
        std::string bad;
        for (int k = 0; k < 9; ++k)
            if (!is_in_Od(M.m().a[k])) {
                if (!bad.empty()) bad += "; ";
                bad += "[" + std::to_string(k / 3 + 1) + "," + std::to_string(k % 3 + 1) + "] = " + M.m().a[k].str();
            }
        r.add(g + " entries in O_" + std::to_string(rep.d), bad.empty(), bad.empty() ? "" : "not integral: " + bad);
    }
    return r;
}

Report check_picard_identities() {
    Report r;
    r.title = "PU(2,1;O_7) identity suite";
    Representation pic = picard7_generators();
    Representation rho = rho2();
    for (auto& [k, v] : rho.images) pic.images.emplace(k, v);
    pic.images.emplace("g2", eval(rho, knot_symbol("g2")));
    auto ev = [&](const std::string& s) {
        return eval(pic, parse_word(s, [](const std::string& n) { return Word::gen(n); }));
    };
    const ExactElem id = ExactElem::identity(QuadNum(7, 0));
    for (const char* s : {"R1^2", "R3^2", "[T,R1]", "[T,R3]", "T R2^-2", "(R1 R3 R2)^2", "I^2"})
        r.add(std::string(s) + " = Id", projective_eq(ev(s), id));
    r.add("G1 = R1 R2 T^-1", projective_eq(ev("g1"), ev("R1 R2 T^-1")));
    r.add("G1 = R1 R2^-1", projective_eq(ev("g1"), ev("R1 R2^-1")));
    r.add("-G2 = R2 R1 R3 I", projective_eq(-ev("g2"), ev("R2 R1 R3 I")));
    r.add("G3 = I R2 I R1", projective_eq(ev("g3"), ev("I R2 I R1")));
    r.add("G3 = I R2 R1 I", projective_eq(ev("g3"), ev("I R2 R1 I")));
    r.add("G3 = I G1^-1 I", projective_eq(ev("g3"), ev("I g1^-1 I")));
    r.add("R1 G1 R1 = T^-1 G1^-1", projective_eq(ev("R1 g1 R1"), ev("T^-1 g1^-1")));
    r.add("R1 I R1 = I", projective_eq(ev("R1 I R1"), ev("I")));
    r.add("R1 T R1 = T", projective_eq(ev("R1 T R1"), ev("T")));
    return r;
}

ConventionResult commutator_convention_check() {
    const Representation rho = rho2();
    ExactElem G1 = rho.images.at("g1"), G3 = rho.images.at("g3");
    ExactElem x = G3, y = G1.inv();
    ConventionResult c;
    c.xyXY = projective_eq(x * y * x.inv() * y.inv(), stated_G2());
    c.XYxy = projective_eq(x.inv() * y.inv() * x * y, stated_G2());
    return c;
}

std::string elem_str(const ExactElem& M) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < 3; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < 3; ++j) os << (j ? ", " : "") << M(i, j).str();
    }
    os << "]";
    return os.str();
}

}  // namespace crs
