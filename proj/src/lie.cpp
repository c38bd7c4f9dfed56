#include "jetforge/lie.hpp"

namespace jetforge {

JetVectorField::JetVectorField(std::vector<TruncatedSeries> components)
	: m_components(std::move(components)) {
	if (m_components.empty()) throw UsageError("vector field needs at least one component");
	const TruncatedSeries& first = m_components.front();
	if (first.nvars() != static_cast<int>(m_components.size()))
		throw UsageError("vector field component count must match the variable count");
	for (const auto& c : m_components) {
		if (c.nvars() != first.nvars() || c.max_degree() != first.max_degree() ||
		    !same_field(c.field(), first.field()))
			throw UsageError("vector field components must share one shape");
		if (!c.constant_term().is_zero())
			throw UsageError("vector field components must vanish at the origin");
	}
}

JetVectorField JetVectorField::zero(int n, int K, const FieldPtr& f) {
	return JetVectorField(std::vector<TruncatedSeries>(n, series_zero(n, K, f)));
}

bool JetVectorField::is_zero() const {
	for (const auto& c : m_components)
		if (!c.is_zero()) return false;
	return true;
}

JetVectorField JetVectorField::operator-() const {
	std::vector<TruncatedSeries> r;
	for (const auto& c : m_components) r.push_back(-c);
	return JetVectorField(std::move(r));
}

JetVectorField JetVectorField::operator+(const JetVectorField& o) const {
	if (nvars() != o.nvars()) throw UsageError("vector field variable counts differ");
	std::vector<TruncatedSeries> r;
	for (int i = 0; i < nvars(); ++i) r.push_back(m_components[i] + o.m_components[i]);
	return JetVectorField(std::move(r));
}

JetVectorField JetVectorField::operator-(const JetVectorField& o) const {
	return *this + (-o);
}

JetVectorField JetVectorField::operator*(const ExactScalar& c) const {
	std::vector<TruncatedSeries> r;
	for (const auto& s : m_components) r.push_back(s * c);
	return JetVectorField(std::move(r));
}

bool JetVectorField::operator==(const JetVectorField& o) const {
	if (nvars() != o.nvars()) throw UsageError("vector field variable counts differ");
	for (int i = 0; i < nvars(); ++i)
		if (m_components[i] != o.m_components[i]) return false;
	return true;
}

std::optional<int> field_valuation(const JetVectorField& X) {
	std::optional<int> v;
	for (const auto& c : X.components()) {
		auto vc = valuation(c);
		if (vc && (!v || *vc < *v)) v = vc;
	}
	return v;
}

TruncatedSeries apply_derivation(const JetVectorField& X, const TruncatedSeries& s) {
	if (X.nvars() != s.nvars() || X.max_degree() != s.max_degree() ||
	    !same_field(X.field(), s.field()))
		throw UsageError("vector field and series shapes differ");
	TruncatedSeries r = series_zero(s.nvars(), s.max_degree(), s.field());
	for (int i = 0; i < s.nvars(); ++i)
		r = r + X.component(i) * partial_derivative(s, i);
	return r;
}

JetVectorField bracket(const JetVectorField& X, const JetVectorField& Y) {
	if (X.nvars() != Y.nvars() || X.max_degree() != Y.max_degree() ||
	    !same_field(X.field(), Y.field()))
		throw UsageError("vector field shapes differ");
	std::vector<TruncatedSeries> r;
	for (int j = 0; j < X.nvars(); ++j)
		r.push_back(apply_derivation(X, Y.component(j)) - apply_derivation(Y, X.component(j)));
	return JetVectorField(std::move(r));
}

JetDiffeo exp_flow(const JetVectorField& X, const ExactScalar& t) {
	if (!same_field(X.field(), t.field()))
		throw UsageError("flow time must lie in the field of the vector field");
	auto v = field_valuation(X);
	if (v && *v < 2)
		throw MathError("exp requires a vector field of valuation >= 2");
	const int n = X.nvars(), K = X.max_degree();
	std::vector<TruncatedSeries> comps;
	for (int j = 0; j < n; ++j) {
		TruncatedSeries term = series_coordinate(n, K, X.field(), j);
		TruncatedSeries acc = term;
		ExactScalar c = scalar_one(X.field());
		for (int m = 1; m <= K; ++m) {
			term = apply_derivation(X, term); // X^m(x_j), valuation >= m+1
			if (term.is_zero()) break;
			c = c * t / scalar_from_rational(X.field(), mpq_class(m));
			acc = acc + term * c;
		}
		comps.push_back(std::move(acc));
	}
	return JetDiffeo(std::move(comps));
}

JetVectorField log_jet(const JetDiffeo& f) {
	auto tang = tangency_order(f);
	if (tang && *tang < 1)
		throw MathError("log requires a jet tangent to the identity");
	const int n = f.nvars(), K = f.max_degree();
	const ExactScalar one = scalar_one(f.field());
	JetVectorField X = JetVectorField::zero(n, K, f.field());
	// Adding a homogeneous degree-d correction to X changes the flow jet by
	// exactly that correction in degree d and only above in higher degrees,
	// so the defect can be absorbed degree by degree.
	for (int d = 2; d <= K; ++d) {
		JetDiffeo g = exp_flow(X, one);
		std::vector<TruncatedSeries> corr;
		bool any = false;
		for (int j = 0; j < n; ++j) {
			TruncatedSeries delta = homogeneous_part(f.component(j) - g.component(j), d);
			any = any || !delta.is_zero();
			corr.push_back(X.component(j) + delta);
		}
		if (any) X = JetVectorField(std::move(corr));
	}
	return X;
}

JetVectorField bch(const JetVectorField& X, const JetVectorField& Y) {
	const ExactScalar one = scalar_one(X.field());
	return log_jet(compose(exp_flow(X, one), exp_flow(Y, one)));
}

JetVectorField pushforward(const JetDiffeo& phi, const JetVectorField& X) {
	if (phi.nvars() != X.nvars() || phi.max_degree() != X.max_degree() ||
	    !same_field(phi.field(), X.field()))
		throw UsageError("jet and vector field shapes differ");
	JetDiffeo inv = invert(phi);
	std::vector<TruncatedSeries> r;
	for (int j = 0; j < X.nvars(); ++j) {
		TruncatedSeries s = series_zero(X.nvars(), X.max_degree(), X.field());
		for (int i = 0; i < X.nvars(); ++i)
			s = s + partial_derivative(phi.component(j), i) * X.component(i);
		r.push_back(substitute(s, inv.components()));
	}
	return JetVectorField(std::move(r));
}

JetVectorField normal_field(int k, const ExactScalar& lambda, int K) {
	if (k < 1) throw UsageError("normal field index k must be >= 1");
	const FieldPtr& f = lambda.field();
	TruncatedSeries s = series_zero(1, K, f);
	ExactScalar c = scalar_one(f);
	for (int d = k + 1; d <= K; d += k) {
		s = s + series_monomial(1, K, {d}, c);
		c = c * (-lambda);
	}
	return JetVectorField({std::move(s)});
}

bool flows_commute(const JetVectorField& X, const JetVectorField& Y) {
	return bracket(X, Y).is_zero();
}

} // namespace jetforge
