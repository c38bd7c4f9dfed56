#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jetforge/error.hpp"

namespace jetforge {

enum class FieldKind { rationals, gaussian, extension };

// Coefficient field: Q, Q(i), or Q[t]/(m(t)) with m monic, deg m >= 2 and
// m(0) != 0.  Elements are coordinate vectors over Q in the power basis
// 1, g, ..., g^{d-1} where g is i resp. t.  Two descriptors are equal iff
// kind and minimal polynomial agree; Q(i) and Q[t]/(t^2+1) are distinct.
class FieldDescriptor {
public:
	static std::shared_ptr<const FieldDescriptor> rationals();
	static std::shared_ptr<const FieldDescriptor> gaussian();
	// minpoly = c0, c1, ..., c_d with c_d = 1; throws UsageError if not
	// monic, degree < 2, or c0 == 0.
	static std::shared_ptr<const FieldDescriptor> extension(std::vector<mpq_class> minpoly);

	FieldKind kind() const { return m_kind; }
	int degree() const { return m_degree; }
	// Reduction polynomial c0..c_d; t^2+1 for the gaussian field, empty for Q.
	const std::vector<mpq_class>& minpoly() const { return m_minpoly; }
	std::string generator_symbol() const; // "i", "t", or "" for Q
	std::string name() const;             // "Q", "Q(i)", "Q[t]/(t^2-2)"

	bool operator==(const FieldDescriptor& o) const;
	bool operator!=(const FieldDescriptor& o) const { return !(*this == o); }

private:
	FieldKind m_kind;
	int m_degree;
	std::vector<mpq_class> m_minpoly;
};

using FieldPtr = std::shared_ptr<const FieldDescriptor>;

inline bool same_field(const FieldPtr& a, const FieldPtr& b) {
	return a == b || (a && b && *a == *b);
}

// Immutable exact field element.  All arithmetic requires matching
// descriptors and throws UsageError otherwise.
class ExactScalar {
public:
	ExactScalar() = default; // invalid placeholder; field() is null
	ExactScalar(FieldPtr field, std::vector<mpq_class> coords);

	const FieldPtr& field() const { return m_field; }
	const std::vector<mpq_class>& coords() const { return m_coords; }

	bool is_zero() const;
	bool is_one() const;
	// True iff the element lies in the prime field Q (all higher coords zero).
	bool is_rational() const;
	// Requires is_rational().
	const mpq_class& rational_part() const;

	ExactScalar operator-() const;
	ExactScalar operator+(const ExactScalar& o) const;
	ExactScalar operator-(const ExactScalar& o) const;
	ExactScalar operator*(const ExactScalar& o) const;
	ExactScalar operator/(const ExactScalar& o) const; // MathError on zero divisor
	ExactScalar inverse() const;                        // MathError on zero
	ExactScalar pow_int(long e) const;                  // e < 0 inverts first

	bool operator==(const ExactScalar& o) const;
	bool operator!=(const ExactScalar& o) const { return !(*this == o); }

private:
	FieldPtr m_field;
	std::vector<mpq_class> m_coords;
};

ExactScalar scalar_zero(const FieldPtr& f);
ExactScalar scalar_one(const FieldPtr& f);
ExactScalar scalar_from_rational(const FieldPtr& f, const mpq_class& q);
// The distinguished generator (i resp. t); UsageError over Q.
ExactScalar scalar_generator(const FieldPtr& f);

// Canonical compact text: "3/4+1/2i", "-2", "i", "1-2t+t^2".  Round-trips
// through parse_scalar.
std::string render_scalar(const ExactScalar& s);

// Grammar: term (('+'|'-') term)*, term = rational [sym ['^' k]] | sym ['^' k],
// rational = ['-'] digits ['/' digits] (leading '-' on the first term only),
// sym = 'i' or 't' as dictated by the field.  Whitespace is insignificant.
// SyntaxError carries the byte offset; a zero denominator is a MathError.
ExactScalar parse_scalar(const FieldPtr& f, const std::string& text);

// Primitive k-th root of unity if the field contains one.  Exact for Q, Q(i)
// and quadratic extensions; for extensions of degree >= 3 only candidates of
// the form +-t^j are scanned, so exotic presentations may be missed.
std::optional<ExactScalar> root_of_unity(const FieldPtr& f, long k);

// Solves z^k = c exactly.  Supported over Q and Q(i); MathError over simple
// extensions (no factorization machinery).
std::optional<ExactScalar> kth_root(const ExactScalar& c, long k);

// Field automorphism acting on coefficients.  negate_generator is g -> -g,
// valid for Q(i) (complex conjugation) and for extensions whose minimal
// polynomial is supported on exponents of one parity.
enum class CoeffMap { identity, negate_generator };

bool coeff_map_valid(const FieldPtr& f, CoeffMap m);
// UsageError if the map is not valid for the field.
ExactScalar apply_coeff_map(const ExactScalar& s, CoeffMap m);

} // namespace jetforge
