#include "jetforge/randomgen.hpp"

namespace jetforge {

long RandomSource::integer(long lo, long hi) {
	return std::uniform_int_distribution<long>(lo, hi)(m_rng);
}

mpq_class RandomSource::rational() {
	mpq_class q(integer(-4, 4), integer(1, 3));
	q.canonicalize();
	return q;
}

mpq_class RandomSource::nonzero_rational() {
	for (;;) {
		mpq_class q = rational();
		if (q != 0) return q;
	}
}

ExactScalar RandomSource::scalar(const FieldPtr& f) {
	std::vector<mpq_class> coords;
	for (int j = 0; j < f->degree(); ++j) coords.push_back(rational());
	return ExactScalar(f, std::move(coords));
}

ExactScalar RandomSource::nonzero_scalar(const FieldPtr& f) {
	for (;;) {
		ExactScalar s = scalar(f);
		if (!s.is_zero()) return s;
	}
}

Exponent RandomSource::exponent(int nvars, int degree) {
	Exponent e(nvars, 0);
	for (int i = 0; i < nvars - 1; ++i) {
		e[i] = static_cast<int>(integer(0, degree));
		degree -= e[i];
	}
	e[nvars - 1] = degree;
	return e;
}

TruncatedSeries RandomSource::series(int nvars, int K, const FieldPtr& f, int min_degree,
                                     int tries) {
	TermMap terms;
	for (int it = 0; it < tries && min_degree <= K; ++it) {
		int d = static_cast<int>(integer(min_degree, K));
		ExactScalar c = scalar(f);
		if (c.is_zero()) continue;
		terms[exponent(nvars, d)] = c;
	}
	return TruncatedSeries(nvars, K, f, std::move(terms));
}

JetDiffeo RandomSource::tangent_jet(int nvars, int K, const FieldPtr& f, int order,
                                    bool exact_order) {
	std::vector<TruncatedSeries> comps;
	bool forced = false;
	for (int j = 0; j < nvars; ++j) {
		TruncatedSeries high = series(nvars, K, f, order + 1);
		if (exact_order && j == nvars - 1 && !forced && order + 1 <= K &&
		    homogeneous_part(high, order + 1).is_zero())
			high = high + series_monomial(nvars, K, exponent(nvars, order + 1),
			                              nonzero_scalar(f));
		if (!homogeneous_part(high, order + 1).is_zero()) forced = true;
		comps.push_back(series_coordinate(nvars, K, f, j) + high);
	}
	return JetDiffeo(std::move(comps));
}

JetDiffeo RandomSource::jet_with_linear(const LinearMap& A, int K) {
	int n = A.dim();
	const FieldPtr& f = A.field();
	std::vector<TruncatedSeries> comps;
	for (int j = 0; j < n; ++j) {
		TruncatedSeries s = series(n, K, f, 2);
		for (int c = 0; c < n; ++c) {
			Exponent e(n, 0);
			e[c] = 1;
			if (!A.at(j, c).is_zero()) s = s + series_monomial(n, K, e, A.at(j, c));
		}
		comps.push_back(std::move(s));
	}
	return JetDiffeo(std::move(comps));
}

JetDiffeo RandomSource::invertible_jet(int nvars, int K, const FieldPtr& f) {
	for (;;) {
		std::vector<ExactScalar> entries;
		for (int j = 0; j < nvars * nvars; ++j) entries.push_back(scalar(f));
		LinearMap A(nvars, f, std::move(entries));
		if (A.det().is_zero()) continue;
		return jet_with_linear(A, K);
	}
}

JetVectorField RandomSource::vector_field(int nvars, int K, const FieldPtr& f,
                                          int min_valuation) {
	for (;;) {
		std::vector<TruncatedSeries> comps;
		for (int j = 0; j < nvars; ++j) comps.push_back(series(nvars, K, f, min_valuation));
		JetVectorField X{std::move(comps)};
		if (!X.is_zero()) return X;
	}
}

JetVectorField RandomSource::field_1d(int K, const FieldPtr& f, int val) {
	TruncatedSeries s = series(1, K, f, val);
	if (s.coefficient({val}).is_zero())
		s = s + series_monomial(1, K, {val}, nonzero_scalar(f));
	return JetVectorField({std::move(s)});
}

} // namespace jetforge
