#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "crs/chcore.hpp"

namespace crs {

struct WordError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Letter {
    std::string gen;
    int exp = 1;  // +1 or -1
    bool operator==(const Letter& o) const { return gen == o.gen && exp == o.exp; }
};

// Freely reduced word in named generators.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters);
    static Word gen(const std::string& g, int exp = 1) { return Word({Letter{g, exp}}); }

    const std::vector<Letter>& letters() const { return l_; }
    std::size_t size() const { return l_.size(); }
    bool empty() const { return l_.empty(); }

    Word inv() const;
    Word pow(int k) const;
    Word operator*(const Word& o) const;
    bool operator==(const Word& o) const { return l_ == o.l_; }
    std::string str() const;

private:
    std::vector<Letter> l_;
};

Word commutator(const Word& x, const Word& y);  // x y x^-1 y^-1
Word free_reduce(const std::vector<Letter>& letters);

// Grammar: word := factor ( ['*'] factor )* ; factor := atom ['^' int] ;
// atom := ident | '(' word ')' | '[' word ',' word ']'. The resolver turns an
// identifier into a word (and throws WordError for unknown names).
using Resolver = std::function<Word(const std::string&)>;
Word parse_word(const std::string& text, const Resolver& resolve);

// Knot-group words: g1, g3 and the derived names g2 = [g3,g1^-1], a = g2,
// b = [g2,g3^-1], t = g3 expanded at parse time.
Word knot_symbol(const std::string& name);
Word parse_knot_word(const std::string& text);

struct Representation {
    std::string name;
    long d = 7;
    std::map<std::string, ExactElem> images;

    Representation() = default;
    Representation(std::string n, long dd, std::map<std::string, ExactElem> im);
};

Representation rho1();
Representation rho2();
Representation rho3();
Representation trivial_rep(long d);
// I, R1, R2, R3, T generating PU(2,1; O_7).
Representation picard7_generators();

ExactElem eval(const Representation& rep, const Word& w);

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string title;
    std::vector<CheckItem> items;
    bool all_pass() const;
    void add(std::string name, bool pass, std::string detail = {});
};

// Defining relation, both fiber relations, g1 = g2 g3 g2^-1.
Report check_group_relation(const Representation& rep);
bool check_t3_commutator(const Representation& rep);
Report check_lattice_membership(const Representation& rep);
Report check_picard_identities();

// Which commutator convention makes [G3,G1^-1] equal the stated G2 matrix.
struct ConventionResult {
    bool xyXY = false;  // x y x^-1 y^-1
    bool XYxy = false;  // x^-1 y^-1 x y
};
ConventionResult commutator_convention_check();
ExactElem stated_G2();

std::string elem_str(const ExactElem& M);

}  // namespace crs
