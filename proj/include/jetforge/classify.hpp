#pragma once

#include "jetforge/lie.hpp"

#include <optional>
#include <utility>

namespace jetforge {

// A multiplicative relation lambda^p = lambda_j among the eigenvalues,
// with |p| >= 2, or a repeated-eigenvalue relation lambda_i = lambda_j at
// |p| = 1.  target is the 1-based index j.
struct ResonanceViolation {
	Exponent p;
	int target = 0;

	bool operator==(const ResonanceViolation& o) const {
		return p == o.p && target == o.target;
	}
};

struct ResonanceReport {
	std::vector<ExactScalar> eigenvalues;
	int max_degree = 0;
	// Sorted by |p|, then lexicographically on p, then by target.
	std::vector<ResonanceViolation> violations;

	bool clear() const { return violations.empty(); }
};

// Exhaustive scan of exponent vectors with 2 <= |p| <= max_degree plus the
// |p| = 1 cross-relations lambda_i = lambda_j (i != j).  MathError on a
// zero eigenvalue, UsageError when max_degree < 2.
ResonanceReport resonance_check(const std::vector<ExactScalar>& eigs, int max_degree);

// phi tangent to the identity with f o phi = phi o A at the stored degree,
// where A is the (diagonal) linear part of f; the coefficient of x^p in
// component j of phi has denominator lambda^p - lambda_j, so only |p| >= 2
// relations obstruct (repeated eigenvalues are fine).  MathError when the
// linear part is not diagonal or a relation with 2 <= |p| <= K holds; the
// message cites the violating (p, j).
JetDiffeo poincare_linearize(const JetDiffeo& f);

// phi tangent to the identity with commutator(phi, A-as-jet) = h, obtained
// by linearizing h o A: if phi A phi^-1 = h o A then phi A phi^-1 A^-1 = h.
// Requires h tangent to the identity and A diagonal, non-resonant up to K.
JetDiffeo realize_commutator(const JetDiffeo& h, const LinearMap& A);

// Complete formal conjugacy data of a one-variable field of valuation
// k+1 >= 2: pushforward(conjugator, X) = a * X_{k, a*rho} exactly, where
// X_{k,lambda} = x^{k+1}/(1 + lambda x^k) d/dx.  rho is the residue ofdx/X
// and is invariant under every conjugation; a is invariant under tangent-
// to-identity conjugation and scales as a * mu^{-k} under x -> mu x.
struct NormalForm1D {
	int k = 0;
	ExactScalar a;
	ExactScalar rho;
	JetDiffeo conjugator;
};

// Residue rho via finite Laurent division (with X = a x^{k+1} w(x), w(0)=1:
// rho = [x^k] w^{-1} / a), then a degree-by-degree conjugation sweep killing
// every non-normal-form coefficient; degree 2k+1 is resonant for the sweep
// and carries the invariant.  Needs K >= 2k+1; MathError otherwise, and on
// n != 1 or valuation outside [2, K].
NormalForm1D normal_form_1d(const JetVectorField& X);

// Tangent-to-identity conjugacy holds iff the (k, a, rho) triples agree;
// with allow_linear a map x -> mu x rescales a by mu^{-k}, so conjugacy
// holds iff k and rho agree and mu^k = a_X / a_Y is solvable in the field.
// Returns a verified conjugator phi with phi_* X = Y, or nullopt.
std::optional<JetDiffeo> decide_conjugate_1d(const JetVectorField& X,
                                             const JetVectorField& Y,
                                             bool allow_linear);

// Membership of f in the centralizer of exp X_{k,lambda}: if f commutes at
// the stored degree, decompose f = (xi x) o exp_flow(X_{k,lambda}, t) with
// xi^k = 1 and return (t, xi); nullopt when f does not commute.  MathError
// when f commutes but no such decomposition exists over the field (the
// truncation is too small or the field lacks the needed roots of unity).
std::optional<std::pair<ExactScalar, ExactScalar>>
centralizer_membership(const JetDiffeo& f, int k, const ExactScalar& lambda);

// Average phi = (1/#H) sum_h (Dh(0))^-1 o h over a finite subgroup H of the
// jet group; then phi o h = (Dh(0)) o phi for every h, so phi H phi^-1 is
// linear.  Verifies that H is closed under composition and inverse and has
// no duplicates; MathError otherwise.
JetDiffeo linearize_finite_group(const std::vector<JetDiffeo>& H);

// The unique tangent-to-identity g with E o g = f o E, where E = (x_1^2)
// for n = 1 and E = (x_1^2, x_1 x_2, ..., x_1 x_n) for n > 1.  Since E
// doubles degrees the solve runs at internal truncation 2K and is exact at
// K.  f -> g is an injective homomorphism, and for n = 1 every image has
// odd terms only and so commutes with x -> -x.  MathError when f is not
// tangent to the identity.
JetDiffeo cohopf_embed(const JetDiffeo& f);

// Coefficient-wise field automorphism (identity, or generator negation
// where the minimal polynomial permits, e.g. i -> -i); a group automorphism
// commuting with compose, invert, exp and log.  MathError when the map is
// not an automorphism of the active field.
JetDiffeo coefficient_automorphism(const JetDiffeo& f, CoeffMap tau);

} // namespace jetforge
