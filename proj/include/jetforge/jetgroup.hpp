#pragma once

#include "jetforge/series.hpp"

namespace jetforge {

// n x n matrix over the coefficient field, row-major, immutable.
class LinearMap {
public:
	LinearMap(int n, FieldPtr field, std::vector<ExactScalar> entries);
	static LinearMap identity(int n, const FieldPtr& f);
	static LinearMap diagonal(const std::vector<ExactScalar>& eigenvalues);

	int dim() const { return m_n; }
	const FieldPtr& field() const { return m_field; }
	const ExactScalar& at(int r, int c) const { return m_entries[r * m_n + c]; }

	LinearMap operator*(const LinearMap& o) const;
	bool operator==(const LinearMap& o) const;
	bool operator!=(const LinearMap& o) const { return !(*this == o); }
	bool is_identity() const;
	bool is_diagonal() const;

	// Fraction-free (Bareiss) elimination; intermediate divisions are exact.
	ExactScalar det() const;
	// Gauss-Jordan with exact pivoting; MathError if singular.
	LinearMap inverse() const;

private:
	int m_n;
	FieldPtr m_field;
	std::vector<ExactScalar> m_entries;
};

// Jet of a formal diffeomorphism of (F^n, 0): n component series in n
// variables, zero constant terms, invertible linear part.  The jets of a
// fixed shape (n, K, field) form a group under truncated composition.
class JetDiffeo {
public:
	explicit JetDiffeo(std::vector<TruncatedSeries> components);
	static JetDiffeo identity(int n, int K, const FieldPtr& f);

	int nvars() const { return static_cast<int>(m_components.size()); }
	int max_degree() const { return m_components.front().max_degree(); }
	const FieldPtr& field() const { return m_components.front().field(); }
	const std::vector<TruncatedSeries>& components() const { return m_components; }
	const TruncatedSeries& component(int i) const { return m_components[i]; }

	bool is_identity() const;
	bool operator==(const JetDiffeo& o) const;
	bool operator!=(const JetDiffeo& o) const { return !(*this == o); }

private:
	std::vector<TruncatedSeries> m_components;
};

// f after g.
JetDiffeo compose(const JetDiffeo& f, const JetDiffeo& g);

// Compositional inverse: peels off the linear part, then solves
// u = -h(id + u) degree by degree.
JetDiffeo invert(const JetDiffeo& f);

// f g f^-1 g^-1 (f after g after ...).
JetDiffeo commutator(const JetDiffeo& f, const JetDiffeo& g);

// Truncation morphism p_k onto the degree-k quotient, 1 <= k <= K.
JetDiffeo project(const JetDiffeo& f, int k);

// Largest k with f = id up to degree k (order of tangency to the identity):
// 0 if the linear part differs from id, valuation(f - id) - 1 otherwise,
// nullopt (plus infinity) for the identity jet.
std::optional<int> tangency_order(const JetDiffeo& f);

LinearMap linear_part(const JetDiffeo& f);
ExactScalar det_linear(const JetDiffeo& f);

// m-fold composition power, m any integer; power(f, 0) = id.
JetDiffeo power(const JetDiffeo& f, long m);

// The linear map as a jet of the given truncation degree.
JetDiffeo linear_jet(const LinearMap& L, int K);

} // namespace jetforge
