#include "property_suites.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "crs/chcore.hpp"
#include "crs/exactnum.hpp"
#include "crs/fpgroups.hpp"
#include "crs/words.hpp"

using namespace crs;

namespace props {

namespace {

using Rng = std::mt19937_64;

long uniform(Rng& r, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(r); }
double uniform_real(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }

BigRational random_rat(Rng& r) { return rat(uniform(r, -40, 40), uniform(r, 1, 12)); }

long random_d(Rng& r) {
    static const long ds[] = {1, 2, 3, 5, 7, 11, 15};
    return ds[uniform(r, 0, 6)];
}

QuadNum random_quad(Rng& r, long d) { return QuadNum(d, random_rat(r), random_rat(r)); }

QuadNum random_Od(Rng& r, long d) {
    if (d % 4 == 3) {
        long a = uniform(r, -20, 20), b = uniform(r, -20, 20);
        if ((a - b) % 2 != 0) ++b;
        return QuadNum(d, rat(a, 2), rat(b, 2));
    }
    return QuadNum(d, uniform(r, -20, 20), uniform(r, -20, 20));
}

cplx random_cplx(Rng& r, double s = 3.0) { return {uniform_real(r, -s, s), uniform_real(r, -s, s)}; }

HeisPoint random_point(Rng& r) { return HeisPoint::at(random_cplx(r), uniform_real(r, -4, 4)); }

// Products of Heisenberg translations, dilations, rotations and the inversion.
FloatElem random_unitary(Rng& r) {
    FloatElem g = FloatElem::identity(cplx(1.0));
    Mat3<cplx> J{{0, 0, 1, 0, 1, 0, 1, 0, 0}};
    int n = static_cast<int>(uniform(r, 1, 4));
    for (int i = 0; i < n; ++i) {
        switch (uniform(r, 0, 3)) {
            case 0: g = g * heisenberg_translation(random_cplx(r, 1.5), uniform_real(r, -2, 2)); break;
            case 1: {
                double s = std::exp(uniform_real(r, -0.7, 0.7));
                g = g * FloatElem::unchecked(Mat3<cplx>{{s, 0, 0, 0, 1, 0, 0, 0, 1 / s}});
                break;
            }
            case 2: {
                cplx u = std::polar(1.0, uniform_real(r, 0, 2 * M_PI));
                g = g * FloatElem::unchecked(Mat3<cplx>{{1, 0, 0, 0, u, 0, 0, 0, 1}});
                break;
            }
            default: g = g * FloatElem::unchecked(J); break;
        }
    }
    return g;
}

// Random word in the d = 7 lattice generators together with G1, G3.
ExactElem random_exact(Rng& r, int len) {
    static const Representation P = picard7_generators();
    static const Representation R2 = rho2();
    std::vector<ExactElem> gens;
    for (auto& [k, v] : P.images) gens.push_back(v);
    gens.push_back(R2.images.at("g1"));
    gens.push_back(R2.images.at("g3"));
    ExactElem g = ExactElem::identity(QuadNum(7, 0));
    for (int i = 0; i < len; ++i) {
        const ExactElem& x = gens[uniform(r, 0, static_cast<long>(gens.size()) - 1)];
        g = g * (uniform(r, 0, 1) ? x : x.inv());
    }
    return g;
}

Word random_word(Rng& r, const std::vector<std::string>& alph, int maxlen) {
    std::vector<Letter> l;
    int n = static_cast<int>(uniform(r, 0, maxlen));
    for (int i = 0; i < n; ++i)
        l.push_back({alph[uniform(r, 0, static_cast<long>(alph.size()) - 1)], uniform(r, 0, 1) ? 1 : -1});
    return Word(l);
}

double vdist(const HermVector& a, const HermVector& b) {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

Result field_axioms(int n) {
    Rng r(101);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        long d = random_d(r);
        QuadNum a = random_quad(r, d), b = random_quad(r, d), c = random_quad(r, d);
        bool ok = (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) && a * (b + c) == a * b + a * c &&
                  a * b == b * a && a + b == b + a && a - a == QuadNum(d, 0);
        if (!a.is_zero()) ok = ok && a * (QuadNum(d, 1) / a) == QuadNum(d, 1) && (b / a) * a == b;
        if (!ok) res.fail("d=" + std::to_string(d) + " a=" + a.str() + " b=" + b.str() + " c=" + c.str());
    }
    return res;
}

Result conj_norm(int n) {
    Rng r(102);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        long d = random_d(r);
        QuadNum a = random_quad(r, d), b = random_quad(r, d);
        bool ok = (a * b).conj() == a.conj() * b.conj() && (a * b).normsq() == a.normsq() * b.normsq() &&
                  a * a.conj() == QuadNum(d, a.normsq());
        if (!ok) res.fail("a=" + a.str() + " b=" + b.str());
    }
    return res;
}

Result od_closure(int n) {
    Rng r(103);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        long d = random_d(r);
        QuadNum a = random_Od(r, d), b = random_Od(r, d);
        bool ok = is_in_Od(a) && is_in_Od(b) && is_in_Od(a + b) && is_in_Od(a * b) && is_in_Od(a - b);
        if (!ok) res.fail("d=" + std::to_string(d) + " a=" + a.str() + " b=" + b.str());
    }
    return res;
}

Result enclose_soundness(int n) {
    Rng r(104);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        long d = random_d(r);
        QuadNum x = random_quad(r, d);
        unsigned p = static_cast<unsigned>(uniform(r, 24, 200));
        FloatApprox lo = enclose(x, p), hi = enclose(x, 2 * p);
        if (!lo.contains(hi)) res.fail("x=" + x.str() + " at " + std::to_string(p) + " bits");
    }
    return res;
}

Result form_invariance(int n) {
    Rng r(201);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        // exact half: lattice words
        ExactElem E = random_exact(r, static_cast<int>(uniform(r, 1, 6)));
        ExactVector Z{random_quad(r, 7), random_quad(r, 7), random_quad(r, 7)};
        ExactVector W{random_quad(r, 7), random_quad(r, 7), random_quad(r, 7)};
        bool ok = herm_form(mat_apply(E.m(), Z), mat_apply(E.m(), W)) == herm_form(Z, W);

        FloatElem M = random_unitary(r);
        HermVector z{random_cplx(r), random_cplx(r), random_cplx(r)}, w{random_cplx(r), random_cplx(r), random_cplx(r)};
        cplx lhs = herm_form(mat_apply(M.m(), z), mat_apply(M.m(), w)), rhs = herm_form(z, w);
        double scale = 1.0;
        for (auto& x : M.m().a) scale = std::max(scale, std::abs(x));
        ok = ok && std::abs(lhs - rhs) <= 1e-12 * scale * scale * (1 + std::abs(rhs)) * 100;
        if (!ok) res.fail("residual " + std::to_string(std::abs(lhs - rhs)));
    }
    return res;
}

Result lift_roundtrip(int n) {
    Rng r(202);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        HeisPoint p = uniform(r, 0, 19) == 0 ? HeisPoint::infinity() : random_point(r);
        cplx s = random_cplx(r, 2.0) + cplx(0.1, 0);
        HermVector L = lift(p);
        for (auto& x : L) x *= s;
        bool ok = same_point(project(L), p, 1e-9) && std::abs(herm_form(lift(p), lift(p))) < 1e-12;
        ExactPoint e = ExactPoint::at(random_quad(r, 7), random_rat(r));
        ok = ok && project(lift(e)) == e && herm_form(lift(e), lift(e)).is_zero();
        if (!ok) res.fail(point_str(p));
    }
    return res;
}

Result chain_equivariance(int n) {
    Rng r(203);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        HeisPoint p = random_point(r), q = uniform(r, 0, 9) == 0 ? HeisPoint::infinity() : random_point(r);
        FloatElem M = random_unitary(r);
        HeisPoint Mp = act(M, p), Mq = act(M, q);
        if (heis_distance(Mp, Mq) < 1e-3 || (!Mp.inf && std::abs(Mp.z) > 1e3) || (!Mq.inf && std::abs(Mq.z) > 1e3)) {
            --res.cases;  // badly conditioned draw, redraw
            --i;
            continue;
        }
        CCircle C = ccircle_through(p, q), D = ccircle_through(Mp, Mq);
        // compare polar vectors projectively, plus a few sampled points
        HermVector a = mat_apply(M.m(), C.polar), b = D.polar;
        cplx lam = herm_form(a, a) == cplx(0) ? cplx(1) : cplx(0);
        int k = std::abs(b[0]) > std::abs(b[1]) ? (std::abs(b[0]) > std::abs(b[2]) ? 0 : 2)
                                                 : (std::abs(b[1]) > std::abs(b[2]) ? 1 : 2);
        lam = a[k] / b[k];
        for (auto& x : b) x *= lam;
        double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
        bool ok = vdist(a, b) <= 1e-8 * na;
        for (int s = 1; s < 8 && ok; ++s) {
            Arc arc = make_arc(p, q);
            HeisPoint x = act(M, arc.point(s / 8.0));
            if (x.inf) continue;
            double tol = 1e-8 * (1 + std::abs(x.z) * std::abs(x.z) + std::abs(x.t));
            ok = ccircle_contains(D, x, tol);
        }
        if (!ok) res.fail(point_str(p) + " " + point_str(q));
    }
    return res;
}

Result classify_conjugation(int n) {
    Rng r(204);
    Result res;
    static const Representation R2 = rho2();
    const ExactElem G1 = R2.images.at("g1"), G3 = R2.images.at("g3");
    const ExactElem G2 = eval(R2, parse_knot_word("g2"));
    const std::vector<ExactElem> base = {G1, G3, G2, G3 * G1.inv(), G1 * G3, random_exact(r, 3)};
    for (int i = 0; i < n; ++i, ++res.cases) {
        const ExactElem& M = base[i % base.size()];
        ExactElem N = random_exact(r, static_cast<int>(uniform(r, 1, 5)));
        bool ok = classify(N * M * N.inv()) == classify(M);
        ExactElem X = random_exact(r, 4);
        ok = ok && classify(N * X * N.inv()) == classify(X);
        if (!ok) res.fail(elem_str(M) + " conj by " + elem_str(N));
    }
    return res;
}

Result projective_equivalence(int n) {
    Rng r(205);
    Result res;
    // d = 3 carries the nontrivial cube roots of unity, so scalar classes are genuine
    static const Representation R1 = rho1();
    const ExactElem g1 = R1.images.at("g1"), g3 = R1.images.at("g3");
    const QuadNum w(3, rat(-1, 2), rat(1, 2));
    auto rnd = [&](int len) {
        ExactElem g = ExactElem::identity(QuadNum(3, 0));
        for (int k = 0; k < len; ++k) {
            const ExactElem& x = uniform(r, 0, 1) ? g1 : g3;
            g = g * (uniform(r, 0, 1) ? x : x.inv());
        }
        return g;
    };
    auto scaled = [&](const ExactElem& g) {
        QuadNum s = QuadNum(3, 1);
        for (long k = uniform(r, 0, 2); k > 0; --k) s = s * w;
        return ExactElem::unchecked(mat_scale(g.m(), s));
    };
    for (int i = 0; i < n; ++i, ++res.cases) {
        ExactElem A = rnd(static_cast<int>(uniform(r, 0, 4)));
        ExactElem B = uniform(r, 0, 1) ? scaled(A) : rnd(static_cast<int>(uniform(r, 0, 4)));
        ExactElem C = uniform(r, 0, 1) ? scaled(B) : rnd(static_cast<int>(uniform(r, 0, 4)));
        bool ab = projective_eq(A, B), bc = projective_eq(B, C), ac = projective_eq(A, C);
        bool ok = projective_eq(A, A) && ab == projective_eq(B, A) && (!(ab && bc) || ac);
        if (!ok) res.fail("triple " + elem_str(A) + " | " + elem_str(B) + " | " + elem_str(C));
    }
    return res;
}

Result eval_homomorphism(int n) {
    Rng r(301);
    Result res;
    const std::vector<Representation> reps = {rho1(), rho2(), rho3()};
    for (int i = 0; i < n; ++i, ++res.cases) {
        const Representation& R = reps[i % 3];
        Word u = random_word(r, {"g1", "g3"}, 8), v = random_word(r, {"g1", "g3"}, 8);
        bool ok = eval(R, u * v).m().a == (eval(R, u) * eval(R, v)).m().a &&
                  eval(R, u.inv()).m().a == eval(R, u).inv().m().a;
        if (!ok) res.fail(R.name + ": " + u.str() + " , " + v.str());
    }
    return res;
}

Result free_reduction_eval(int n) {
    Rng r(302);
    Result res;
    const Representation R = rho2();
    for (int i = 0; i < n; ++i, ++res.cases) {
        // unreduced letter list: random letters with cancelling pairs spliced in
        std::vector<Letter> raw;
        int len = static_cast<int>(uniform(r, 0, 10));
        for (int k = 0; k < len; ++k) {
            Letter x{uniform(r, 0, 1) ? "g1" : "g3", uniform(r, 0, 1) ? 1 : -1};
            raw.push_back(x);
            if (uniform(r, 0, 2) == 0) {
                raw.push_back({x.gen, -x.exp});
                raw.push_back(x);
            }
        }
        ExactElem direct = ExactElem::identity(QuadNum(7, 0));
        for (auto& x : raw) direct = direct * (x.exp > 0 ? R.images.at(x.gen) : R.images.at(x.gen).inv());
        bool ok = eval(R, free_reduce(raw)).m().a == direct.m().a;
        if (!ok) res.fail("word of length " + std::to_string(raw.size()));
    }
    return res;
}

namespace {

// gcd of all k x k minors, by enumeration (fine for 4 x 4)
BigInt minor_gcd(const IntMatrix& M, int k) {
    BigInt g = 0;
    std::vector<int> rs(k), cs(k);
    std::function<void(int, int, int, int)> rec = [&](int ri, int rstart, int ci, int cstart) {
        if (ri < k) {
            for (int i = rstart; i < M.rows; ++i) {
                rs[ri] = i;
                rec(ri + 1, i + 1, ci, cstart);
            }
            return;
        }
        if (ci < k) {
            for (int j = cstart; j < M.cols; ++j) {
                cs[ci] = j;
                rec(ri, rstart, ci + 1, j + 1);
            }
            return;
        }
        IntMatrix S(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) S(a, b) = M(rs[a], cs[b]);
        BigInt det = int_det(S);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), det.get_mpz_t());
    };
    rec(0, 0, 0, 0);
    return g;
}

bool unimodular(const IntMatrix& U) { return abs(int_det(U)) == 1; }

}  // namespace

Result snf_oracle(int n) {
    Rng r(401);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        IntMatrix M(4, 4);
        long span = uniform(r, 1, 3) == 1 ? 2 : 12;
        for (auto& x : M.a) x = uniform(r, 0, 3) == 0 ? 0 : uniform(r, -span, span);
        if (uniform(r, 0, 9) == 0)  // force rank deficiency sometimes
            for (int j = 0; j < 4; ++j) M(3, j) = M(0, j) * 2 - M(1, j);
        SmithForm S = smith_normal_form(M);
        std::ostringstream why;
        bool ok = S.U * M * S.V == S.D && unimodular(S.U) && unimodular(S.V);
        if (!ok) why << "D != U M V or non-unimodular; ";
        for (int a = 0; a < 4 && ok; ++a)
            for (int b = 0; b < 4; ++b)
                if (a != b && S.D(a, b) != 0) ok = false, why << "off-diagonal entry; ";
        // divisibility chain, nonnegativity, determinantal divisors
        BigInt prev = 1;
        for (int k = 0; k < 4 && ok; ++k) {
            const BigInt& d = S.D(k, k);
            if (d < 0) ok = false, why << "negative diagonal; ";
            if (k > 0 && S.D(k - 1, k - 1) == 0 && d != 0) ok = false, why << "zero before nonzero; ";
            if (k > 0 && S.D(k - 1, k - 1) != 0 && d % S.D(k - 1, k - 1) != 0) ok = false, why << "chain; ";
            BigInt dk = minor_gcd(M, k + 1);
            BigInt prod = prev * d;
            if (prod != dk) ok = false, why << "determinantal divisor " << k + 1 << "; ";
            prev = prod;
        }
        if (ok && abs(int_det(M)) != abs(int_det(S.D))) ok = false, why << "|det|; ";
        if (!ok) res.fail(why.str());
    }
    return res;
}

Result coset_vs_abelianization(int n) {
    Rng r(402);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        long m = uniform(r, 1, 9), k = uniform(r, 1, 9), ei = uniform(r, 0, 6), ej = uniform(r, 0, 6);
        std::ostringstream os;
        os << "gens: a,b; rels: a^" << m << ", b^" << k << ", [a,b]";
        if (ei || ej) os << ", a^" << ei << "*b^" << ej;
        Presentation P = parse_presentation(os.str());
        AbelianInvariants A = abelianization(P);
        CosetResult C = coset_enumeration(P, {}, CosetMode::Subgroup);
        bool ok = A.finite() && !C.overflow && C.index == A.order() && C.table.closed() && C.table.consistent();
        if (!ok) res.fail(os.str() + " : index " + std::to_string(C.index) + " vs " + A.order().get_str());
    }
    return res;
}

Result rs_transversal_invariance(int n) {
    Rng r(403);
    Result res;
    for (int i = 0; i < n; ++i, ++res.cases) {
        // finite abelian or dihedral-like group plus a random normal subgroup
        long m = uniform(r, 2, 8), k = uniform(r, 2, 6);
        std::ostringstream os;
        bool dihedral = uniform(r, 0, 1);
        if (dihedral)
            os << "gens: a,b; rels: a^" << m << ", b^2, (a*b)^2";
        else
            os << "gens: a,b; rels: a^" << m << ", b^" << k << ", [a,b]";
        Presentation P = parse_presentation(os.str());
        std::vector<Word> sub{random_word(r, {"a", "b"}, 4)};
        CosetResult C = coset_enumeration(P, sub, CosetMode::NormalClosure);
        if (C.overflow) {
            res.fail(os.str() + " overflow");
            continue;
        }
        Presentation H1 = reidemeister_schreier(P, C.table, Transversal::BFS);
        Presentation H2 = reidemeister_schreier(P, C.table, Transversal::ReverseBFS);
        AbelianInvariants A1 = abelianization(H1), A2 = abelianization(H2);
        if (!(A1 == A2)) res.fail(os.str() + " sub " + sub[0].str() + ": " + A1.str() + " vs " + A2.str());
    }
    return res;
}

}  // namespace props
