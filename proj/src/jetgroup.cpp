#include "jetforge/jetgroup.hpp"

namespace jetforge {

LinearMap::LinearMap(int n, FieldPtr field, std::vector<ExactScalar> entries)
	: m_n(n), m_field(std::move(field)), m_entries(std::move(entries)) {
	if (m_n < 1) throw UsageError("matrix dimension must be >= 1");
	if (static_cast<int>(m_entries.size()) != m_n * m_n)
		throw UsageError("matrix entry count does not match dimension");
	for (const auto& e : m_entries)
		if (!same_field(e.field(), m_field))
			throw UsageError("matrix entry field differs from matrix field");
}

LinearMap LinearMap::identity(int n, const FieldPtr& f) {
	std::vector<ExactScalar> e(n * n, scalar_zero(f));
	for (int i = 0; i < n; ++i) e[i * n + i] = scalar_one(f);
	return LinearMap(n, f, std::move(e));
}

LinearMap LinearMap::diagonal(const std::vector<ExactScalar>& eigenvalues) {
	if (eigenvalues.empty()) throw UsageError("matrix dimension must be >= 1");
	const FieldPtr& f = eigenvalues.front().field();
	const int n = static_cast<int>(eigenvalues.size());
	std::vector<ExactScalar> e(n * n, scalar_zero(f));
	for (int i = 0; i < n; ++i) e[i * n + i] = eigenvalues[i];
	return LinearMap(n, f, std::move(e));
}

LinearMap LinearMap::operator*(const LinearMap& o) const {
	if (m_n != o.m_n || !same_field(m_field, o.m_field))
		throw UsageError("matrix shape or field mismatch");
	std::vector<ExactScalar> r(m_n * m_n, scalar_zero(m_field));
	for (int i = 0; i < m_n; ++i)
		for (int k = 0; k < m_n; ++k) {
			const ExactScalar& a = at(i, k);
			if (a.is_zero()) continue;
			for (int j = 0; j < m_n; ++j)
				r[i * m_n + j] = r[i * m_n + j] + a * o.at(k, j);
		}
	return LinearMap(m_n, m_field, std::move(r));
}

bool LinearMap::operator==(const LinearMap& o) const {
	if (m_n != o.m_n || !same_field(m_field, o.m_field))
		throw UsageError("matrix shape or field mismatch");
	return m_entries == o.m_entries;
}

bool LinearMap::is_identity() const { return *this == identity(m_n, m_field); }

bool LinearMap::is_diagonal() const {
	for (int i = 0; i < m_n; ++i)
		for (int j = 0; j < m_n; ++j)
			if (i != j && !at(i, j).is_zero()) return false;
	return true;
}

ExactScalar LinearMap::det() const {
	std::vector<ExactScalar> m = m_entries;
	auto e = [&](int r, int c) -> ExactScalar& { return m[r * m_n + c]; };
	bool negate = false;
	ExactScalar prev = scalar_one(m_field);
	for (int k = 0; k + 1 < m_n; ++k) {
		if (e(k, k).is_zero()) {
			int r = k + 1;
			while (r < m_n && e(r, k).is_zero()) ++r;
			if (r == m_n) return scalar_zero(m_field);
			for (int j = 0; j < m_n; ++j) std::swap(e(k, j), e(r, j));
			negate = !negate;
		}
		for (int i = k + 1; i < m_n; ++i) {
			for (int j = k + 1; j < m_n; ++j)
				e(i, j) = (e(i, j) * e(k, k) - e(i, k) * e(k, j)) / prev;
			e(i, k) = scalar_zero(m_field);
		}
		prev = e(k, k);
	}
	ExactScalar d = e(m_n - 1, m_n - 1);
	return negate ? -d : d;
}

LinearMap LinearMap::inverse() const {
	std::vector<ExactScalar> m = m_entries;
	std::vector<ExactScalar> inv = identity(m_n, m_field).m_entries;
	auto e = [&](int r, int c) -> ExactScalar& { return m[r * m_n + c]; };
	auto v = [&](int r, int c) -> ExactScalar& { return inv[r * m_n + c]; };
	for (int k = 0; k < m_n; ++k) {
		int r = k;
		while (r < m_n && e(r, k).is_zero()) ++r;
		if (r == m_n) throw MathError("linear map is singular");
		if (r != k)
			for (int j = 0; j < m_n; ++j) {
				std::swap(e(k, j), e(r, j));
				std::swap(v(k, j), v(r, j));
			}
		ExactScalar piv = e(k, k).inverse();
		for (int j = 0; j < m_n; ++j) {
			e(k, j) = e(k, j) * piv;
			v(k, j) = v(k, j) * piv;
		}
		for (int i = 0; i < m_n; ++i) {
			if (i == k || e(i, k).is_zero()) continue;
			ExactScalar c = e(i, k);
			for (int j = 0; j < m_n; ++j) {
				e(i, j) = e(i, j) - c * e(k, j);
				v(i, j) = v(i, j) - c * v(k, j);
			}
		}
	}
	return LinearMap(m_n, m_field, std::move(inv));
}

JetDiffeo::JetDiffeo(std::vector<TruncatedSeries> components)
	: m_components(std::move(components)) {
	if (m_components.empty()) throw UsageError("jet needs at least one component");
	const TruncatedSeries& first = m_components.front();
	if (first.nvars() != static_cast<int>(m_components.size()))
		throw UsageError("jet component count must match the variable count");
	if (first.max_degree() < 1)
		throw UsageError("jet truncation degree must be >= 1");
	for (const auto& c : m_components) {
		if (c.nvars() != first.nvars() || c.max_degree() != first.max_degree() ||
		    !same_field(c.field(), first.field()))
			throw UsageError("jet components must share one shape");
		if (!c.constant_term().is_zero())
			throw UsageError("jet components must vanish at the origin");
	}
	if (det_linear(*this).is_zero())
		throw MathError("jet linear part is singular");
}

JetDiffeo JetDiffeo::identity(int n, int K, const FieldPtr& f) {
	std::vector<TruncatedSeries> c;
	c.reserve(n);
	for (int i = 0; i < n; ++i) c.push_back(series_coordinate(n, K, f, i));
	return JetDiffeo(std::move(c));
}

bool JetDiffeo::is_identity() const {
	return *this == identity(nvars(), max_degree(), field());
}

bool JetDiffeo::operator==(const JetDiffeo& o) const {
	if (nvars() != o.nvars()) throw UsageError("jet variable counts differ");
	for (int i = 0; i < nvars(); ++i)
		if (m_components[i] != o.m_components[i]) return false;
	return true;
}

JetDiffeo compose(const JetDiffeo& f, const JetDiffeo& g) {
	if (f.nvars() != g.nvars() || f.max_degree() != g.max_degree() ||
	    !same_field(f.field(), g.field()))
		throw UsageError("jet shapes differ in composition");
	std::vector<TruncatedSeries> r;
	r.reserve(f.nvars());
	for (int i = 0; i < f.nvars(); ++i) r.push_back(substitute(f.component(i), g.components()));
	return JetDiffeo(std::move(r));
}

JetDiffeo linear_jet(const LinearMap& L, int K) {
	std::vector<TruncatedSeries> comps;
	for (int i = 0; i < L.dim(); ++i) {
		TruncatedSeries s = series_zero(L.dim(), K, L.field());
		for (int j = 0; j < L.dim(); ++j) {
			Exponent e(L.dim(), 0);
			e[j] = 1;
			s = s + series_monomial(L.dim(), K, std::move(e), L.at(i, j));
		}
		comps.push_back(std::move(s));
	}
	return JetDiffeo(std::move(comps));
}

JetDiffeo invert(const JetDiffeo& f) {
	const int n = f.nvars(), K = f.max_degree();
	LinearMap Linv = linear_part(f).inverse();
	JetDiffeo w = compose(linear_jet(Linv, K), f); // id + h, val h >= 2
	JetDiffeo id = JetDiffeo::identity(n, K, f.field());
	std::vector<TruncatedSeries> h;
	for (int i = 0; i < n; ++i) h.push_back(w.component(i) - id.component(i));
	// u = -h(id + u); each pass gains at least one degree of agreement
	std::vector<TruncatedSeries> u(n, series_zero(n, K, f.field()));
	for (int pass = 0; pass + 1 < K; ++pass) {
		std::vector<TruncatedSeries> arg;
		for (int i = 0; i < n; ++i) arg.push_back(id.component(i) + u[i]);
		std::vector<TruncatedSeries> next;
		for (int i = 0; i < n; ++i) next.push_back(-substitute(h[i], arg));
		if (next == u) break;
		u = std::move(next);
	}
	std::vector<TruncatedSeries> winv;
	for (int i = 0; i < n; ++i) winv.push_back(id.component(i) + u[i]);
	return compose(JetDiffeo(std::move(winv)), linear_jet(Linv, K));
}

JetDiffeo commutator(const JetDiffeo& f, const JetDiffeo& g) {
	return compose(compose(f, g), compose(invert(f), invert(g)));
}

JetDiffeo project(const JetDiffeo& f, int k) {
	if (k < 1) throw UsageError("projection degree must be >= 1");
	if (k > f.max_degree())
		throw UsageError("projection degree exceeds the stored truncation degree");
	std::vector<TruncatedSeries> r;
	for (const auto& c : f.components()) r.push_back(retruncate(c, k));
	return JetDiffeo(std::move(r));
}

std::optional<int> tangency_order(const JetDiffeo& f) {
	JetDiffeo id = JetDiffeo::identity(f.nvars(), f.max_degree(), f.field());
	std::optional<int> v;
	for (int i = 0; i < f.nvars(); ++i) {
		auto vi = valuation(f.component(i) - id.component(i));
		if (vi && (!v || *vi < *v)) v = vi;
	}
	if (!v) return std::nullopt;      // identity jet
	return *v == 1 ? 0 : *v - 1;
}

LinearMap linear_part(const JetDiffeo& f) {
	const int n = f.nvars();
	std::vector<ExactScalar> e;
	e.reserve(n * n);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j) {
			Exponent ex(n, 0);
			ex[j] = 1;
			e.push_back(f.component(i).coefficient(ex));
		}
	return LinearMap(n, f.field(), std::move(e));
}

ExactScalar det_linear(const JetDiffeo& f) {
	return linear_part(f).det();
}

JetDiffeo power(const JetDiffeo& f, long m) {
	if (m < 0) return power(invert(f), -m);
	JetDiffeo acc = JetDiffeo::identity(f.nvars(), f.max_degree(), f.field());
	JetDiffeo base = f;
	while (m > 0) {
		if (m & 1) acc = compose(acc, base);
		base = m > 1 ? compose(base, base) : base;
		m >>= 1;
	}
	return acc;
}

} // namespace jetforge
