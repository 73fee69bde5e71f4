#include "crs/fpgroups.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

namespace crs {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\n\r"), b = s.find_last_not_of(" \t\n\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

// split on a separator at bracket depth 0
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

}  // namespace

int Presentation::gen_index(const std::string& g) const {
    auto it = std::find(gens.begin(), gens.end(), g);
    return it == gens.end() ? -1 : static_cast<int>(it - gens.begin());
}

Word Presentation::parse(const std::string& text) const {
    return parse_word(text, [this](const std::string& n) {
        if (n == "Id") return Word();
        if (gen_index(n) < 0) throw WordError("unknown generator '" + n + "'");
        return Word::gen(n);
    });
}

std::string Presentation::str() const {
    std::ostringstream os;
    os << "gens: ";
    for (std::size_t i = 0; i < gens.size(); ++i) os << (i ? "," : "") << gens[i];
    os << "; rels: ";
    for (std::size_t i = 0; i < rels.size(); ++i) os << (i ? ", " : "") << rels[i].str();
    return os.str();
}

Presentation parse_presentation(const std::string& text, ChainMode mode) {
    Presentation P;
    std::string gpart, rpart;
    for (const auto& sec : split_top(text, ';')) {
        if (sec.empty()) continue;
        auto colon = sec.find(':');
        if (colon == std::string::npos) throw GroupError("expected 'gens:' or 'rels:' section, got '" + sec + "'");
        std::string key = trim(sec.substr(0, colon)), body = sec.substr(colon + 1);
        if (key == "gens")
            gpart = body;
        else if (key == "rels")
            rpart = body;
        else
            throw GroupError("unknown section '" + key + "'");
    }
    for (const auto& g : split_top(gpart, ',')) {
        if (g.empty()) continue;
        if (P.gen_index(g) >= 0) throw GroupError("duplicate generator '" + g + "'");
        P.gens.push_back(g);
    }
    if (P.gens.empty()) throw GroupError("presentation has no generators");
    for (const auto& r : split_top(rpart, ',')) {
        if (r.empty()) continue;
        std::vector<Word> terms;
        for (const auto& t : split_top(r, '=')) terms.push_back(P.parse(t));
        if (terms.size() == 1 || mode == ChainMode::AllTrivial) {
            for (auto& w : terms)
                if (!w.empty()) P.rels.push_back(w);
        } else {
            for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
                Word w = terms[i] * terms[i + 1].inv();
                if (!w.empty()) P.rels.push_back(w);
            }
        }
    }
    return P;
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols != o.rows) throw GroupError("matrix shape mismatch");
    IntMatrix R(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            if ((*this)(i, k) == 0) continue;
            for (int j = 0; j < o.cols; ++j) R(i, j) += (*this)(i, k) * o(k, j);
        }
    return R;
}

BigInt int_det(const IntMatrix& M) {
    if (M.rows != M.cols) throw GroupError("determinant of non-square matrix");
    const int n = M.rows;
    if (n == 0) return 1;
    IntMatrix A = M;
    BigInt prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (A(k, k) == 0) {
            int p = k + 1;
            while (p < n && A(p, k) == 0) ++p;
            if (p == n) return 0;
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                BigInt v = A(i, j) * A(k, k) - A(i, k) * A(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                A(i, j) = v;
            }
        prev = A(k, k);
    }
    return sign * A(n - 1, n - 1);
}

IntMatrix relation_matrix(const Presentation& P) {
    IntMatrix M(static_cast<int>(P.rels.size()), static_cast<int>(P.gens.size()));
    for (std::size_t r = 0; r < P.rels.size(); ++r)
        for (const auto& x : P.rels[r].letters()) M(static_cast<int>(r), P.gen_index(x.gen)) += x.exp;
    return M;
}

namespace {

void swap_rows(IntMatrix& A, int i, int j) {
    if (i != j)
        for (int k = 0; k < A.cols; ++k) std::swap(A(i, k), A(j, k));
}
void swap_cols(IntMatrix& A, int i, int j) {
    if (i != j)
        for (int k = 0; k < A.rows; ++k) std::swap(A(k, i), A(k, j));
}
// row_i -= q row_j
void row_axpy(IntMatrix& A, int i, int j, const BigInt& q) {
    for (int k = 0; k < A.cols; ++k) A(i, k) -= q * A(j, k);
}
void col_axpy(IntMatrix& A, int i, int j, const BigInt& q) {
    for (int k = 0; k < A.rows; ++k) A(k, i) -= q * A(k, j);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& M) {
    SmithForm S{M, IntMatrix::identity(M.rows), IntMatrix::identity(M.cols)};
    IntMatrix &D = S.D, &U = S.U, &V = S.V;
    const int n = std::min(D.rows, D.cols);
    for (int t = 0; t < n; ++t) {
        // smallest nonzero entry of the trailing block as pivot
        auto pick = [&](bool whole) {
            int bi = -1, bj = -1;
            for (int i = t; i < D.rows; ++i)
                for (int j = t; j < D.cols; ++j) {
                    if (!whole && i != t && j != t) continue;
                    if (D(i, j) == 0) continue;
                    if (bi < 0 || abs(D(i, j)) < abs(D(bi, bj))) bi = i, bj = j;
                }
            if (bi < 0) return false;
            swap_rows(D, t, bi);
            swap_rows(U, t, bi);
            swap_cols(D, t, bj);
            swap_cols(V, t, bj);
            return true;
        };
        if (!pick(true)) break;
        while (true) {
            bool clean = true;
            for (int i = t + 1; i < D.rows; ++i) {
                if (D(i, t) == 0) continue;
                BigInt q;
                mpz_tdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
                row_axpy(D, i, t, q);
                row_axpy(U, i, t, q);
                if (D(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < D.cols; ++j) {
                if (D(t, j) == 0) continue;
                BigInt q;
                mpz_tdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
                col_axpy(D, j, t, q);
                col_axpy(V, j, t, q);
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) {
                pick(false);
                continue;
            }
            int bad = -1;
            for (int i = t + 1; i < D.rows && bad < 0; ++i)
                for (int j = t + 1; j < D.cols; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            row_axpy(D, t, bad, -1);
            row_axpy(U, t, bad, -1);
        }
        if (D(t, t) < 0) {
            for (int k = 0; k < D.cols; ++k) D(t, k) = -D(t, k);
            for (int k = 0; k < U.cols; ++k) U(t, k) = -U(t, k);
        }
    }
    return S;
}

BigInt AbelianInvariants::order() const {
    if (free_rank > 0) return 0;
    BigInt o = 1;
    for (auto& d : torsion) o *= d;
    return o;
}

std::string AbelianInvariants::str() const {
    std::vector<std::string> parts;
    for (auto& d : torsion) parts.push_back("Z/" + d.get_str());
    if (free_rank == 1) parts.push_back("Z");
    if (free_rank > 1) parts.push_back("Z^" + std::to_string(free_rank));
    if (parts.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + parts[i];
    return s;
}

AbelianInvariants abelian_invariants(const SmithForm& S, int ngens) {
    AbelianInvariants A;
    int nonzero = 0;
    for (int i = 0; i < std::min(S.D.rows, S.D.cols); ++i) {
        const BigInt& d = S.D(i, i);
        if (d == 0) continue;
        ++nonzero;
        if (d != 1) A.torsion.push_back(d);
    }
    A.free_rank = ngens - nonzero;
    return A;
}

AbelianInvariants abelianization(const Presentation& P) {
    return abelian_invariants(smith_normal_form(relation_matrix(P)), static_cast<int>(P.gens.size()));
}

bool CosetTable::closed() const {
    for (auto& r : rows)
        for (int v : r)
            if (v < 0) return false;
    return true;
}

bool CosetTable::consistent() const {
    for (int c = 0; c < size(); ++c)
        for (int x = 0; x < 2 * ngens; ++x) {
            int d = rows[c][x];
            if (d < 0) continue;
            if (d >= size() || rows[d][x ^ 1] != c) return false;
        }
    return true;
}

namespace {

// HLT enumeration with coincidence processing.
class Enumerator {
public:
    Enumerator(int ngens, int max_cosets) : ncols_(2 * ngens), max_(max_cosets) { new_coset(); }

    bool overflow() const { return overflow_; }
    int defined() const { return static_cast<int>(table_.size()); }

    // word as column indices
    void scan_and_fill(int alpha, const std::vector<int>& w) {
        if (w.empty()) return;
        int f = alpha, b = alpha;
        int i = 0, j = static_cast<int>(w.size()) - 1;
        while (true) {
            while (i <= j && table_[f][w[i]] >= 0) f = table_[f][w[i++]];
            if (i > j) {
                if (f != b) coincidence(f, b);
                return;
            }
            while (j >= i && table_[b][w[j] ^ 1] >= 0) b = table_[b][w[j--] ^ 1];
            if (j < i) {
                coincidence(f, b);
                return;
            }
            if (i == j) {
                table_[f][w[i]] = b;
                table_[b][w[i] ^ 1] = f;
                return;
            }
            if (!define(f, w[i])) return;
        }
    }

    bool define(int c, int x) {
        if (live_ >= max_) {
            overflow_ = true;
            return false;
        }
        int d = new_coset();
        table_[c][x] = d;
        table_[d][x ^ 1] = c;
        return true;
    }

    bool alive(int c) const { return parent_[c] == c; }

    void run(const std::vector<std::vector<int>>& rels, const std::vector<std::vector<int>>& subgens) {
        for (auto& w : subgens) {
            scan_and_fill(0, w);
            if (overflow_) return;
        }
        for (int a = 0; a < defined(); ++a) {
            for (auto& r : rels) {
                if (!alive(a)) break;
                scan_and_fill(a, r);
                if (overflow_) return;
            }
            if (!alive(a)) continue;
            for (int x = 0; x < ncols_; ++x)
                if (table_[a][x] < 0 && !define(a, x)) return;
        }
    }

    CosetTable compact(int ngens) const {
        std::vector<int> id(table_.size(), -1);
        int n = 0;
        for (std::size_t c = 0; c < table_.size(); ++c)
            if (parent_[c] == static_cast<int>(c)) id[c] = n++;
        CosetTable T;
        T.ngens = ngens;
        T.rows.assign(n, std::vector<int>(ncols_, -1));
        for (std::size_t c = 0; c < table_.size(); ++c) {
            if (id[c] < 0) continue;
            for (int x = 0; x < ncols_; ++x) {
                int d = table_[c][x];
                T.rows[id[c]][x] = d < 0 ? -1 : id[d];
            }
        }
        return T;
    }

    int live() const { return live_; }

private:
    int new_coset() {
        table_.emplace_back(ncols_, -1);
        parent_.push_back(static_cast<int>(parent_.size()));
        ++live_;
        return static_cast<int>(table_.size()) - 1;
    }

    int rep(int k) {
        int r = k;
        while (parent_[r] != r) r = parent_[r];
        while (parent_[k] != r) {
            int n = parent_[k];
            parent_[k] = r;
            k = n;
        }
        return r;
    }

    void merge(int k, int l, std::deque<int>& q) {
        int a = rep(k), b = rep(l);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
        --live_;
        q.push_back(b);
    }

    void coincidence(int a, int b) {
        std::deque<int> q;
        merge(a, b, q);
        while (!q.empty()) {
            int g = q.front();
            q.pop_front();
            for (int x = 0; x < ncols_; ++x) {
                int d = table_[g][x];
                if (d < 0) continue;
                table_[d][x ^ 1] = -1;
                int m = rep(g), n = rep(d);
                if (table_[m][x] >= 0)
                    merge(n, table_[m][x], q);
                else if (table_[n][x ^ 1] >= 0)
                    merge(m, table_[n][x ^ 1], q);
                else {
                    table_[m][x] = n;
                    table_[n][x ^ 1] = m;
                }
            }
        }
    }

    int ncols_, max_;
    std::vector<std::vector<int>> table_;
    std::vector<int> parent_;
    int live_ = 0;
    bool overflow_ = false;
};

std::vector<int> columns(const Presentation& P, const Word& w) {
    std::vector<int> c;
    for (auto& x : w.letters()) {
        int g = P.gen_index(x.gen);
        if (g < 0) throw GroupError("word uses unknown generator '" + x.gen + "'");
        c.push_back(2 * g + (x.exp < 0 ? 1 : 0));
    }
    return c;
}

}  // namespace

CosetResult coset_enumeration(const Presentation& P, const std::vector<Word>& subgens, CosetMode mode,
                              int max_cosets) {
    const int ng = static_cast<int>(P.gens.size());
    std::vector<std::vector<int>> rels, subs;
    for (auto& r : P.rels) rels.push_back(columns(P, r));
    for (auto& w : subgens) (mode == CosetMode::NormalClosure ? rels : subs).push_back(columns(P, w));
    Enumerator E(ng, max_cosets);
    E.run(rels, subs);
    CosetResult R;
    R.max_defined = E.defined();
    R.overflow = E.overflow();
    R.table = E.compact(ng);
    R.index = R.overflow ? 0 : R.table.size();
    return R;
}

Presentation reidemeister_schreier(const Presentation& P, const CosetTable& T, Transversal strategy) {
    if (!T.closed() || !T.consistent()) throw GroupError("reidemeister_schreier needs a closed coset table");
    const int n = T.size(), ng = T.ngens;
    if (ng != static_cast<int>(P.gens.size())) throw GroupError("table does not match presentation");

    // spanning tree: parent edge (coset, column) per coset
    std::vector<int> pc(n, -1), px(n, -1);
    std::vector<char> seen(n, 0);
    std::deque<int> q{0};
    seen[0] = 1;
    while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        for (int k = 0; k < 2 * ng; ++k) {
            int x = strategy == Transversal::BFS ? k : 2 * ng - 1 - k;
            int d = T.rows[c][x];
            if (!seen[d]) {
                seen[d] = 1;
                pc[d] = c;
                px[d] = x;
                q.push_back(d);
            }
        }
    }

    // Schreier generator for (c, g): t_c g t_{cg}^-1, trivial on tree edges.
    auto trivial = [&](int c, int g) {
        int d = T.rows[c][2 * g];
        return (pc[d] == c && px[d] == 2 * g) || (pc[c] == d && px[c] == 2 * g + 1);
    };
    auto name = [&](int c, int g) { return "s" + std::to_string(c) + "_" + P.gens[g]; };

    Presentation H;
    for (int c = 0; c < n; ++c)
        for (int g = 0; g < ng; ++g)
            if (!trivial(c, g)) H.gens.push_back(name(c, g));

    for (int c = 0; c < n; ++c)
        for (const auto& r : P.rels) {
            std::vector<Letter> out;
            int k = c;
            for (auto& x : r.letters()) {
                int g = P.gen_index(x.gen);
                if (x.exp > 0) {
                    if (!trivial(k, g)) out.push_back({name(k, g), 1});
                    k = T.rows[k][2 * g];
                } else {
                    int k2 = T.rows[k][2 * g + 1];
                    if (!trivial(k2, g)) out.push_back({name(k2, g), -1});
                    k = k2;
                }
            }
            if (k != c) throw GroupError("relator does not close in the coset table");
            Word w(out);
            if (!w.empty()) H.rels.push_back(w);
        }
    return H;
}

namespace {

const std::map<std::string, std::string>& preset_table() {
    static const std::map<std::string, std::string> t = {
        {"p3", "gens: P,Q,I; rels: I^2=(Q*P^-1)^6=P*Q^-1*I*Q*P^-1*I=P^3*Q^-2=(I*P)^3"},
        {"fig8", "gens: g1,g3; rels: [g3,g1^-1]*g3*[g3,g1^-1]^-1*g1^-1"},
        {"triangle236-quotient", "gens: P,Q; rels: (Q*P^-1)^6, P^3, Q^2"},
        {"triangle236", "gens: x,y; rels: x^2, y^3, (x*y)^6"},
        {"picard7-stab", "gens: R1,R2,R3,T; rels: R1^2=R3^2=[T,R1]=[T,R3]=T*R2^-2=(R1*R3*R2)^2=Id"},
    };
    return t;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> v;
    for (auto& [k, _] : preset_table()) v.push_back(k);
    v.push_back("p3-N");
    return v;
}

std::string preset_text(const std::string& name) {
    auto it = preset_table().find(name);
    if (it == preset_table().end()) throw GroupError("unknown preset '" + name + "'");
    return it->second;
}

Presentation preset(const std::string& name, ChainMode mode) { return parse_presentation(preset_text(name), mode); }

SubgroupPreset subgroup_preset(const std::string& name, ChainMode mode) {
    if (name != "p3-N") throw GroupError("unknown subgroup preset '" + name + "'");
    SubgroupPreset S;
    S.group = preset("p3", mode);
    for (const char* w : {"[P,Q]", "I", "[Q,P^-1]"}) S.subgens.push_back(S.group.parse(w));
    S.mode = CosetMode::NormalClosure;
    return S;
}

}  // namespace crs
