#pragma once

#include "jetforge/jetgroup.hpp"
#include "jetforge/lie.hpp"

#include <random>

namespace jetforge {

// Deterministic source of random exact values for property checks.  A fixed
// seed reproduces the identical sample sequence on every run and platform
// (std::mt19937_64 is bit-exact by specification).  Coefficients are kept
// small so that exact arithmetic stays fast under composition.
class RandomSource {
public:
	explicit RandomSource(unsigned long long seed) : m_rng(seed) {}

	long integer(long lo, long hi);

	// Canonical rational with |numerator| <= 4 and denominator <= 3.
	mpq_class rational();
	mpq_class nonzero_rational();

	ExactScalar scalar(const FieldPtr& f);
	ExactScalar nonzero_scalar(const FieldPtr& f);

	// Random series with all stored degrees in [min_degree, K]; roughly
	// `tries` draws, so sparse in several variables.
	TruncatedSeries series(int nvars, int K, const FieldPtr& f, int min_degree, int tries = 12);

	// id + terms of degree >= order + 1.  When exact_order is set the
	// degree-(order+1) part is forced nonzero, so the tangency order is
	// exactly `order`.
	JetDiffeo tangent_jet(int nvars, int K, const FieldPtr& f, int order = 1,
	                      bool exact_order = false);

	// A + terms of degree >= 2.
	JetDiffeo jet_with_linear(const LinearMap& A, int K);

	// Jet with a random invertible (not necessarily tangent) linear part.
	JetDiffeo invertible_jet(int nvars, int K, const FieldPtr& f);

	// Components of valuation >= min_valuation; nonzero.
	JetVectorField vector_field(int nvars, int K, const FieldPtr& f, int min_valuation = 2);

	// One-variable field of exact valuation `val`.
	JetVectorField field_1d(int K, const FieldPtr& f, int val);

private:
	Exponent exponent(int nvars, int degree);

	std::mt19937_64 m_rng;
};

} // namespace jetforge
