#include "jetforge/series.hpp"

#include <algorithm>

namespace jetforge {

namespace {

void check_shape(const TruncatedSeries& a, const TruncatedSeries& b) {
	if (a.nvars() != b.nvars())
		throw UsageError("series variable counts differ");
	if (a.max_degree() != b.max_degree())
		throw UsageError("series truncation degrees differ");
	if (!same_field(a.field(), b.field()))
		throw UsageError("series field descriptors differ");
}

} // namespace

TruncatedSeries::TruncatedSeries(int nvars, int max_degree, FieldPtr field)
	: m_nvars(nvars), m_deg(max_degree), m_field(std::move(field)) {
	if (m_nvars < 1) throw UsageError("series needs at least one variable");
	if (m_deg < 0) throw UsageError("series truncation degree must be >= 0");
	if (!m_field) throw UsageError("series requires a field descriptor");
}

TruncatedSeries::TruncatedSeries(int nvars, int max_degree, FieldPtr field, TermMap terms)
	: TruncatedSeries(nvars, max_degree, std::move(field)) {
	for (auto it = terms.begin(); it != terms.end();) {
		const Exponent& e = it->first;
		if (static_cast<int>(e.size()) != m_nvars)
			throw UsageError("exponent vector length differs from variable count");
		for (int v : e)
			if (v < 0) throw UsageError("negative exponent in series term");
		if (total_degree(e) > m_deg)
			throw UsageError("series term exceeds the truncation degree");
		if (!same_field(it->second.field(), m_field))
			throw UsageError("series coefficient field differs from series field");
		if (it->second.is_zero()) {
			it = terms.erase(it);
		} else {
			++it;
		}
	}
	m_terms = std::move(terms);
}

ExactScalar TruncatedSeries::coefficient(const Exponent& e) const {
	auto it = m_terms.find(e);
	return it == m_terms.end() ? scalar_zero(m_field) : it->second;
}

ExactScalar TruncatedSeries::constant_term() const {
	return coefficient(Exponent(m_nvars, 0));
}

TruncatedSeries TruncatedSeries::operator-() const {
	TermMap r = m_terms;
	for (auto& [e, c] : r) c = -c;
	return TruncatedSeries(m_nvars, m_deg, m_field, std::move(r));
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
	check_shape(*this, o);
	TermMap r = m_terms;
	for (const auto& [e, c] : o.m_terms) {
		auto it = r.find(e);
		if (it == r.end()) {
			r.emplace(e, c);
		} else {
			it->second = it->second + c;
			if (it->second.is_zero()) r.erase(it);
		}
	}
	return TruncatedSeries(m_nvars, m_deg, m_field, std::move(r));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
	return *this + (-o);
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
	check_shape(*this, o);
	TermMap r;
	Exponent e(m_nvars);
	for (const auto& [ea, ca] : m_terms) {
		const int da = total_degree(ea);
		for (const auto& [eb, cb] : o.m_terms) {
			if (da + total_degree(eb) > m_deg) continue;
			for (int v = 0; v < m_nvars; ++v) e[v] = ea[v] + eb[v];
			ExactScalar p = ca * cb;
			auto it = r.find(e);
			if (it == r.end()) {
				r.emplace(e, std::move(p));
			} else {
				it->second = it->second + p;
			}
		}
	}
	return TruncatedSeries(m_nvars, m_deg, m_field, std::move(r));
}

TruncatedSeries TruncatedSeries::operator*(const ExactScalar& c) const {
	if (!same_field(m_field, c.field()))
		throw UsageError("series field descriptors differ");
	TermMap r = m_terms;
	for (auto& [e, v] : r) v = v * c;
	return TruncatedSeries(m_nvars, m_deg, m_field, std::move(r));
}

bool TruncatedSeries::operator==(const TruncatedSeries& o) const {
	check_shape(*this, o);
	return m_terms == o.m_terms;
}

TruncatedSeries series_zero(int nvars, int max_degree, const FieldPtr& f) {
	return TruncatedSeries(nvars, max_degree, f);
}

TruncatedSeries series_constant(int nvars, int max_degree, const ExactScalar& c) {
	TermMap t;
	if (!c.is_zero()) t.emplace(Exponent(nvars, 0), c);
	return TruncatedSeries(nvars, max_degree, c.field(), std::move(t));
}

TruncatedSeries series_monomial(int nvars, int max_degree, Exponent e, ExactScalar c) {
	FieldPtr f = c.field();
	TermMap t;
	if (!c.is_zero()) t.emplace(std::move(e), std::move(c));
	return TruncatedSeries(nvars, max_degree, std::move(f), std::move(t));
}

TruncatedSeries series_coordinate(int nvars, int max_degree, const FieldPtr& f, int i) {
	if (i < 0 || i >= nvars) throw UsageError("coordinate index out of range");
	Exponent e(nvars, 0);
	e[i] = 1;
	return series_monomial(nvars, max_degree, std::move(e), scalar_one(f));
}

std::optional<int> valuation(const TruncatedSeries& s) {
	if (s.is_zero()) return std::nullopt;
	return total_degree(s.terms().begin()->first); // map is graded
}

namespace {

using TermVec = std::vector<std::pair<Exponent, ExactScalar>>;

// Evaluates sum of terms at g, treating variables < v as already consumed
// (their exponents are zero in every term).  Horner in variable v.
TruncatedSeries eval_terms(int v, int nvars_src, const TermVec& terms,
                           const std::vector<TruncatedSeries>& g,
                           const TruncatedSeries& zero) {
	if (terms.empty()) return zero;
	if (v == nvars_src) {
		ExactScalar c = terms.front().second;
		for (std::size_t i = 1; i < terms.size(); ++i) c = c + terms[i].second;
		return series_constant(zero.nvars(), zero.max_degree(), c);
	}
	std::map<int, TermVec> groups;
	for (const auto& [e, c] : terms) {
		Exponent rest = e;
		int a = rest[v];
		rest[v] = 0;
		groups[a].emplace_back(std::move(rest), c);
	}
	int amax = groups.rbegin()->first;
	TruncatedSeries acc = zero;
	for (int a = amax; a >= 0; --a) {
		if (a != amax) acc = acc * g[v];
		auto it = groups.find(a);
		if (it != groups.end())
			acc = acc + eval_terms(v + 1, nvars_src, it->second, g, zero);
	}
	return acc;
}

} // namespace

TruncatedSeries substitute(const TruncatedSeries& s, const std::vector<TruncatedSeries>& g) {
	if (static_cast<int>(g.size()) != s.nvars())
		throw UsageError("substitution needs one series per variable of s");
	for (const auto& gi : g) {
		if (gi.max_degree() != s.max_degree())
			throw UsageError("series truncation degrees differ");
		if (!same_field(gi.field(), s.field()))
			throw UsageError("series field descriptors differ");
		if (gi.nvars() != g.front().nvars())
			throw UsageError("series variable counts differ");
		if (!gi.constant_term().is_zero())
			throw MathError("substitution requires zero constant terms");
	}
	TruncatedSeries zero = series_zero(g.front().nvars(), s.max_degree(), s.field());
	TermVec terms(s.terms().begin(), s.terms().end());
	return eval_terms(0, s.nvars(), terms, g, zero);
}

TruncatedSeries retruncate(const TruncatedSeries& s, int new_degree) {
	if (new_degree > s.max_degree())
		throw UsageError("retruncate cannot raise the truncation degree");
	TermMap r;
	for (const auto& [e, c] : s.terms()) {
		if (total_degree(e) > new_degree) break; // graded order
		r.emplace(e, c);
	}
	return TruncatedSeries(s.nvars(), new_degree, s.field(), std::move(r));
}

TruncatedSeries lift_degree(const TruncatedSeries& s, int new_degree) {
	if (new_degree < s.max_degree())
		throw UsageError("lift_degree cannot lower the truncation degree");
	return TruncatedSeries(s.nvars(), new_degree, s.field(), TermMap(s.terms()));
}

TruncatedSeries binomial_power(const TruncatedSeries& s, const mpq_class& e) {
	if (!s.constant_term().is_one())
		throw MathError("binomial power requires constant term 1");
	TruncatedSeries u = s - series_constant(s.nvars(), s.max_degree(), scalar_one(s.field()));
	TruncatedSeries acc = series_constant(s.nvars(), s.max_degree(), scalar_one(s.field()));
	TruncatedSeries upow = acc;
	mpq_class binom(1);
	for (int m = 1; m <= s.max_degree(); ++m) {
		binom *= (e - (m - 1));
		binom /= m;
		upow = upow * u;
		if (upow.is_zero()) break;
		acc = acc + upow * scalar_from_rational(s.field(), binom);
	}
	return acc;
}

TruncatedSeries partial_derivative(const TruncatedSeries& s, int i) {
	if (i < 0 || i >= s.nvars()) throw UsageError("coordinate index out of range");
	TermMap r;
	for (const auto& [e, c] : s.terms()) {
		if (e[i] == 0) continue;
		Exponent d = e;
		d[i] -= 1;
		r.emplace(std::move(d), c * scalar_from_rational(c.field(), mpq_class(e[i])));
	}
	return TruncatedSeries(s.nvars(), s.max_degree(), s.field(), std::move(r));
}

TruncatedSeries homogeneous_part(const TruncatedSeries& s, int d) {
	TermMap r;
	for (const auto& [e, c] : s.terms())
		if (total_degree(e) == d) r.emplace(e, c);
	return TruncatedSeries(s.nvars(), s.max_degree(), s.field(), std::move(r));
}

TruncatedSeries divide_by_monomial(const TruncatedSeries& s, const Exponent& e) {
	if (static_cast<int>(e.size()) != s.nvars())
		throw UsageError("exponent vector length differs from variable count");
	TermMap r;
	for (const auto& [a, c] : s.terms()) {
		Exponent d = a;
		for (int v = 0; v < s.nvars(); ++v) {
			d[v] -= e[v];
			if (d[v] < 0) throw MathError("series is not divisible by the monomial");
		}
		r.emplace(std::move(d), c);
	}
	return TruncatedSeries(s.nvars(), s.max_degree() - total_degree(e), s.field(), std::move(r));
}

} // namespace jetforge
