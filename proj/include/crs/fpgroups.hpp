#pragma once

#include <string>
#include <vector>

#include "crs/exactnum.hpp"
#include "crs/words.hpp"

namespace crs {

struct GroupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Presentation {
    std::vector<std::string> gens;
    std::vector<Word> rels;

    int gen_index(const std::string& g) const;  // -1 if absent
    Word parse(const std::string& text) const;  // word in these generators
    std::string str() const;
};

// How "A = B = C" inside a relator list is read.
enum class ChainMode {
    AllTrivial,  // A, B, C are each relators
    Pairwise,    // A B^-1 and B C^-1 are relators
};

// "gens: P,Q,I; rels: I^2, (Q*P^-1)^6, ..." ; a relator may be a chain of '='.
Presentation parse_presentation(const std::string& text, ChainMode mode = ChainMode::AllTrivial);

struct IntMatrix {
    int rows = 0, cols = 0;
    std::vector<BigInt> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
    static IntMatrix identity(int n);
    BigInt& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const BigInt& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

BigInt int_det(const IntMatrix& M);  // square only, fraction-free elimination
IntMatrix relation_matrix(const Presentation& P);

struct SmithForm {
    IntMatrix D, U, V;  // D = U M V
};
SmithForm smith_normal_form(const IntMatrix& M);

struct AbelianInvariants {
    std::vector<BigInt> torsion;  // invariant factors > 1, each dividing the next
    int free_rank = 0;
    bool finite() const { return free_rank == 0; }
    BigInt order() const;  // 0 when infinite
    std::string str() const;
    bool operator==(const AbelianInvariants& o) const { return torsion == o.torsion && free_rank == o.free_rank; }
};

AbelianInvariants abelian_invariants(const SmithForm& S, int ngens);
AbelianInvariants abelianization(const Presentation& P);

// Columns 2g (generator g) and 2g+1 (its inverse); -1 = undefined.
struct CosetTable {
    int ngens = 0;
    std::vector<std::vector<int>> rows;
    int size() const { return static_cast<int>(rows.size()); }
    bool closed() const;
    bool consistent() const;  // entry(c,x) = d iff entry(d,x^-1) = c
};

enum class CosetMode { Subgroup, NormalClosure };

struct CosetResult {
    bool overflow = false;
    int index = 0;
    int max_defined = 0;
    CosetTable table;
};

CosetResult coset_enumeration(const Presentation& P, const std::vector<Word>& subgens, CosetMode mode,
                              int max_cosets = 100000);

enum class Transversal { BFS, ReverseBFS };

Presentation reidemeister_schreier(const Presentation& P, const CosetTable& table,
                                   Transversal strategy = Transversal::BFS);

struct SubgroupPreset {
    Presentation group;
    std::vector<Word> subgens;
    CosetMode mode = CosetMode::NormalClosure;
};

// p3, fig8, triangle236-quotient, triangle236, picard7-stab
Presentation preset(const std::string& name, ChainMode mode = ChainMode::AllTrivial);
std::string preset_text(const std::string& name);
SubgroupPreset subgroup_preset(const std::string& name, ChainMode mode = ChainMode::AllTrivial);  // p3-N
std::vector<std::string> preset_names();

}  // namespace crs
