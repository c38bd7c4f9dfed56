#pragma once

#include <map>
#include <optional>
#include <vector>

#include "jetforge/scalar.hpp"

namespace jetforge {

// Exponent vector of a monomial; one entry per variable, all >= 0.
using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) {
	int d = 0;
	for (int v : e) d += v;
	return d;
}

// Graded order: lower total degree first; within a degree the term with the
// larger exponent on the earliest variable comes first (x^2, x*y, y^2).
struct GradedLexLess {
	bool operator()(const Exponent& a, const Exponent& b) const {
		int da = total_degree(a), db = total_degree(b);
		if (da != db) return da < db;
		return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
	}
};

using TermMap = std::map<Exponent, ExactScalar, GradedLexLess>;

// Element of F[[x_1..x_n]] / m^{K+1}: monomials of total degree <= K are
// stored sparsely, everything above is discarded by every operation.
// Immutable; all binary operations require matching (nvars, K, field).
class TruncatedSeries {
public:
	TruncatedSeries(int nvars, int max_degree, FieldPtr field);
	TruncatedSeries(int nvars, int max_degree, FieldPtr field, TermMap terms);

	int nvars() const { return m_nvars; }
	int max_degree() const { return m_deg; }
	const FieldPtr& field() const { return m_field; }
	const TermMap& terms() const { return m_terms; }

	bool is_zero() const { return m_terms.empty(); }
	// Zero scalar if the monomial is absent.
	ExactScalar coefficient(const Exponent& e) const;
	ExactScalar constant_term() const;

	TruncatedSeries operator-() const;
	TruncatedSeries operator+(const TruncatedSeries& o) const;
	TruncatedSeries operator-(const TruncatedSeries& o) const;
	TruncatedSeries operator*(const TruncatedSeries& o) const;
	TruncatedSeries operator*(const ExactScalar& c) const;

	bool operator==(const TruncatedSeries& o) const;
	bool operator!=(const TruncatedSeries& o) const { return !(*this == o); }

private:
	int m_nvars;
	int m_deg;
	FieldPtr m_field;
	TermMap m_terms;
};

TruncatedSeries series_zero(int nvars, int max_degree, const FieldPtr& f);
TruncatedSeries series_constant(int nvars, int max_degree, const ExactScalar& c);
TruncatedSeries series_monomial(int nvars, int max_degree, Exponent e, ExactScalar c);
// The coordinate x_{i+1}, 0-based i.
TruncatedSeries series_coordinate(int nvars, int max_degree, const FieldPtr& f, int i);

// Smallest total degree with a nonzero term; nullopt (plus infinity) for zero.
std::optional<int> valuation(const TruncatedSeries& s);

// s(g_1, ..., g_n).  Requires g.size() == s.nvars(), every g_i with zero
// constant term, and all g_i of one shape sharing s's K and field (their
// variable count may differ from s's).  Horner evaluation, one variable at
// a time.
TruncatedSeries substitute(const TruncatedSeries& s, const std::vector<TruncatedSeries>& g);

// Forgets terms above new_degree; new_degree <= K.
TruncatedSeries retruncate(const TruncatedSeries& s, int new_degree);

// Reinterprets s at a higher truncation degree with zero new terms.  Only
// correct when the caller knows the hidden coefficients are irrelevant;
// internal helper, not a group operation.
TruncatedSeries lift_degree(const TruncatedSeries& s, int new_degree);

// s^e for rational e via the binomial series sum_m C(e,m) (s-1)^m.
// Requires constant term 1; then (result)^q = s^p holds exactly at K
// whenever e = p/q.
TruncatedSeries binomial_power(const TruncatedSeries& s, const mpq_class& e);

// d/dx_{i+1}.  The result is stored at the same K although its degree-K
// coefficients would need degree K+1 of s; callers only use derivatives in
// products against factors of valuation >= 1, which never consult that slot.
TruncatedSeries partial_derivative(const TruncatedSeries& s, int i);

TruncatedSeries homogeneous_part(const TruncatedSeries& s, int d);

// Exact division by the monomial x^e; MathError if some term is not
// divisible.  The quotient is only determined up to degree K - |e|, so the
// result is truncated there.
TruncatedSeries divide_by_monomial(const TruncatedSeries& s, const Exponent& e);

} // namespace jetforge
