#pragma once

#include <string>

// Randomized property suites shared by the unit tests and the acceptance
// binary. Seeds are fixed, so each run sees the same cases.
namespace props {

struct Result {
    int cases = 0;
    int failures = 0;
    std::string first_failure;
    void fail(const std::string& why) {
        if (failures++ == 0) first_failure = why;
    }
};

Result field_axioms(int n);
Result conj_norm(int n);
Result od_closure(int n);
Result enclose_soundness(int n);

Result form_invariance(int n);
Result lift_roundtrip(int n);
Result chain_equivariance(int n);
Result classify_conjugation(int n);
Result projective_equivalence(int n);

Result eval_homomorphism(int n);
Result free_reduction_eval(int n);

Result snf_oracle(int n);             // random 4x4 integer matrices
Result coset_vs_abelianization(int n);
Result rs_transversal_invariance(int n);

}  // namespace props
