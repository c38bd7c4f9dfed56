#include "jetforge/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace jetforge {

namespace {

void trim_poly(std::vector<mpq_class>& p) {
	while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of p modulo monic m, in place; deg result < deg m.
void reduce_mod(std::vector<mpq_class>& p, const std::vector<mpq_class>& m) {
	const int d = static_cast<int>(m.size()) - 1;
	for (int i = static_cast<int>(p.size()) - 1; i >= d; --i) {
		mpq_class c = p[i];
		if (c == 0) continue;
		p[i] = 0;
		for (int j = 0; j < d; ++j) p[i - d + j] -= c * m[j];
	}
	p.resize(d);
}

std::vector<mpq_class> poly_mul(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
	if (a.empty() || b.empty()) return {};
	std::vector<mpq_class> r(a.size() + b.size() - 1, mpq_class(0));
	for (std::size_t i = 0; i < a.size(); ++i) {
		if (a[i] == 0) continue;
		for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
	}
	return r;
}

// Division with remainder in Q[t]; b nonzero and trimmed.
void poly_divmod(std::vector<mpq_class> a, const std::vector<mpq_class>& b,
                 std::vector<mpq_class>& quo, std::vector<mpq_class>& rem) {
	trim_poly(a);
	if (a.size() < b.size()) {
		quo.clear();
		rem = a;
		return;
	}
	quo.assign(a.size() - b.size() + 1, mpq_class(0));
	for (std::size_t shift = quo.size(); shift-- > 0;) {
		mpq_class c = a[shift + b.size() - 1] / b.back();
		if (c == 0) continue;
		quo[shift] = c;
		for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
	}
	trim_poly(a);
	rem = a;
	trim_poly(quo);
}

// Inverse of a modulo monic m via extended Euclid.  Detects reducible m
// (nonconstant gcd) and refuses.
std::vector<mpq_class> poly_inverse_mod(std::vector<mpq_class> a, const std::vector<mpq_class>& m) {
	trim_poly(a);
	if (a.empty()) throw MathError("division by zero");
	std::vector<mpq_class> r0 = m, r1 = a;
	std::vector<mpq_class> t0 = {mpq_class(0)}, t1 = {mpq_class(1)};
	while (!r1.empty()) {
		std::vector<mpq_class> q, rem;
		poly_divmod(r0, r1, q, rem);
		r0 = std::move(r1);
		r1 = std::move(rem);
		std::vector<mpq_class> t2 = poly_mul(q, t1);
		std::vector<mpq_class> tn(std::max(t0.size(), t2.size()), mpq_class(0));
		for (std::size_t i = 0; i < t0.size(); ++i) tn[i] += t0[i];
		for (std::size_t i = 0; i < t2.size(); ++i) tn[i] -= t2[i];
		trim_poly(tn);
		t0 = std::move(t1);
		t1 = std::move(tn);
	}
	if (r0.size() != 1)
		throw MathError("minimal polynomial is reducible; element is not invertible");
	for (auto& c : t0) c /= r0[0];
	t0.resize(m.size() - 1, mpq_class(0));
	return t0;
}

std::string rational_str(const mpq_class& q) { return q.get_str(); }

// One rendered term: coefficient q (nonzero) times generator^j.
std::string term_str(const mpq_class& q, int j, const std::string& sym) {
	std::string pow;
	if (j >= 1) {
		pow = sym;
		if (j >= 2) pow += "^" + std::to_string(j);
	}
	if (j == 0) return rational_str(q);
	mpq_class a = abs(q);
	std::string body = (a == 1) ? pow : rational_str(a) + pow;
	return (q < 0) ? "-" + body : body;
}

std::string poly_str_desc(const std::vector<mpq_class>& coeffs, const std::string& sym) {
	std::string out;
	for (int j = static_cast<int>(coeffs.size()) - 1; j >= 0; --j) {
		if (coeffs[j] == 0) continue;
		std::string t = term_str(coeffs[j], j, sym);
		if (out.empty()) {
			out = t;
		} else if (t[0] == '-') {
			out += "-" + t.substr(1);
		} else {
			out += "+" + t;
		}
	}
	return out.empty() ? "0" : out;
}

} // namespace

std::shared_ptr<const FieldDescriptor> FieldDescriptor::rationals() {
	static const auto f = [] {
		auto d = std::make_shared<FieldDescriptor>();
		d->m_kind = FieldKind::rationals;
		d->m_degree = 1;
		return d;
	}();
	return f;
}

std::shared_ptr<const FieldDescriptor> FieldDescriptor::gaussian() {
	static const auto f = [] {
		auto d = std::make_shared<FieldDescriptor>();
		d->m_kind = FieldKind::gaussian;
		d->m_degree = 2;
		d->m_minpoly = {mpq_class(1), mpq_class(0), mpq_class(1)};
		return d;
	}();
	return f;
}

std::shared_ptr<const FieldDescriptor> FieldDescriptor::extension(std::vector<mpq_class> minpoly) {
	for (auto& c : minpoly) c.canonicalize();
	trim_poly(minpoly);
	if (minpoly.size() < 3) throw UsageError("extension minimal polynomial must have degree >= 2");
	if (minpoly.back() != 1) throw UsageError("extension minimal polynomial must be monic");
	if (minpoly[0] == 0) throw UsageError("extension minimal polynomial must have nonzero constant term");
	auto d = std::make_shared<FieldDescriptor>();
	d->m_kind = FieldKind::extension;
	d->m_degree = static_cast<int>(minpoly.size()) - 1;
	d->m_minpoly = std::move(minpoly);
	return d;
}

std::string FieldDescriptor::generator_symbol() const {
	switch (m_kind) {
	case FieldKind::rationals: return "";
	case FieldKind::gaussian: return "i";
	case FieldKind::extension: return "t";
	}
	return "";
}

std::string FieldDescriptor::name() const {
	switch (m_kind) {
	case FieldKind::rationals: return "Q";
	case FieldKind::gaussian: return "Q(i)";
	case FieldKind::extension: return "Q[t]/(" + poly_str_desc(m_minpoly, "t") + ")";
	}
	return "";
}

bool FieldDescriptor::operator==(const FieldDescriptor& o) const {
	return m_kind == o.m_kind && m_minpoly == o.m_minpoly;
}

ExactScalar::ExactScalar(FieldPtr field, std::vector<mpq_class> coords)
	: m_field(std::move(field)), m_coords(std::move(coords)) {
	if (!m_field) throw UsageError("scalar requires a field descriptor");
	if (static_cast<int>(m_coords.size()) > m_field->degree())
		throw UsageError("scalar coordinate vector exceeds field degree");
	for (auto& c : m_coords) c.canonicalize();
	m_coords.resize(m_field->degree(), mpq_class(0));
}

bool ExactScalar::is_zero() const {
	return std::all_of(m_coords.begin(), m_coords.end(), [](const mpq_class& c) { return c == 0; });
}

bool ExactScalar::is_one() const {
	if (m_coords.empty() || m_coords[0] != 1) return false;
	return std::all_of(m_coords.begin() + 1, m_coords.end(), [](const mpq_class& c) { return c == 0; });
}

bool ExactScalar::is_rational() const {
	return std::all_of(m_coords.begin() + 1, m_coords.end(), [](const mpq_class& c) { return c == 0; });
}

const mpq_class& ExactScalar::rational_part() const {
	if (!is_rational()) throw UsageError("scalar is not rational");
	return m_coords[0];
}

static void check_same_field(const ExactScalar& a, const ExactScalar& b) {
	if (!same_field(a.field(), b.field()))
		throw UsageError("field descriptor mismatch between scalars");
}

ExactScalar ExactScalar::operator-() const {
	std::vector<mpq_class> r = m_coords;
	for (auto& c : r) c = -c;
	return ExactScalar(m_field, std::move(r));
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
	check_same_field(*this, o);
	std::vector<mpq_class> r = m_coords;
	for (std::size_t i = 0; i < r.size(); ++i) r[i] += o.m_coords[i];
	return ExactScalar(m_field, std::move(r));
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const {
	check_same_field(*this, o);
	std::vector<mpq_class> r = m_coords;
	for (std::size_t i = 0; i < r.size(); ++i) r[i] -= o.m_coords[i];
	return ExactScalar(m_field, std::move(r));
}

ExactScalar ExactScalar::operator*(const ExactScalar& o) const {
	check_same_field(*this, o);
	const int d = m_field->degree();
	if (d == 1) return ExactScalar(m_field, {m_coords[0] * o.m_coords[0]});
	if (m_field->kind() == FieldKind::gaussian) {
		const mpq_class &a = m_coords[0], &b = m_coords[1];
		const mpq_class &c = o.m_coords[0], &e = o.m_coords[1];
		return ExactScalar(m_field, {a * c - b * e, a * e + b * c});
	}
	std::vector<mpq_class> r = poly_mul(m_coords, o.m_coords);
	reduce_mod(r, m_field->minpoly());
	return ExactScalar(m_field, std::move(r));
}

ExactScalar ExactScalar::inverse() const {
	if (is_zero()) throw MathError("division by zero");
	const int d = m_field->degree();
	if (d == 1) return ExactScalar(m_field, {mpq_class(1) / m_coords[0]});
	if (m_field->kind() == FieldKind::gaussian) {
		mpq_class n = m_coords[0] * m_coords[0] + m_coords[1] * m_coords[1];
		return ExactScalar(m_field, {m_coords[0] / n, -m_coords[1] / n});
	}
	return ExactScalar(m_field, poly_inverse_mod(m_coords, m_field->minpoly()));
}

ExactScalar ExactScalar::operator/(const ExactScalar& o) const {
	check_same_field(*this, o);
	return *this * o.inverse();
}

ExactScalar ExactScalar::pow_int(long e) const {
	ExactScalar base = e < 0 ? inverse() : *this;
	unsigned long n = e < 0 ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
	ExactScalar acc = scalar_one(m_field);
	while (n > 0) {
		if (n & 1) acc = acc * base;
		base = base * base;
		n >>= 1;
	}
	return acc;
}

bool ExactScalar::operator==(const ExactScalar& o) const {
	check_same_field(*this, o);
	return m_coords == o.m_coords;
}

ExactScalar scalar_zero(const FieldPtr& f) { return ExactScalar(f, {}); }

ExactScalar scalar_one(const FieldPtr& f) { return ExactScalar(f, {mpq_class(1)}); }

ExactScalar scalar_from_rational(const FieldPtr& f, const mpq_class& q) {
	return ExactScalar(f, {q});
}

ExactScalar scalar_generator(const FieldPtr& f) {
	if (f->degree() < 2) throw UsageError("field Q has no generator symbol");
	return ExactScalar(f, {mpq_class(0), mpq_class(1)});
}

std::string render_scalar(const ExactScalar& s) {
	const std::string sym = s.field()->generator_symbol();
	std::string out;
	const auto& c = s.coords();
	for (std::size_t j = 0; j < c.size(); ++j) {
		if (c[j] == 0) continue;
		std::string t = term_str(c[j], static_cast<int>(j), sym);
		if (out.empty()) {
			out = t;
		} else if (t[0] == '-') {
			out += "-" + t.substr(1);
		} else {
			out += "+" + t;
		}
	}
	return out.empty() ? "0" : out;
}

namespace {

struct Scanner {
	const std::string& s;
	std::size_t pos = 0;

	void skip_ws() {
		while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
	}
	bool done() {
		skip_ws();
		return pos >= s.size();
	}
	char peek() {
		skip_ws();
		return pos < s.size() ? s[pos] : '\0';
	}
	bool accept(char c) {
		if (peek() == c) {
			++pos;
			return true;
		}
		return false;
	}
	mpz_class digits() {
		skip_ws();
		std::size_t start = pos;
		while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
		if (pos == start) throw SyntaxError("expected digits", start);
		return mpz_class(s.substr(start, pos - start), 10);
	}
};

mpq_class scan_rational(Scanner& sc) {
	mpz_class num = sc.digits();
	if (sc.accept('/')) {
		std::size_t at = sc.pos;
		mpz_class den = sc.digits();
		if (den == 0) throw MathError("zero denominator in scalar literal (at position " + std::to_string(at) + ")");
		mpq_class q(num, den);
		q.canonicalize();
		return q;
	}
	return mpq_class(num);
}

} // namespace

ExactScalar parse_scalar(const FieldPtr& f, const std::string& text) {
	Scanner sc{text};
	const std::string sym = f->generator_symbol();
	ExactScalar acc = scalar_zero(f);
	bool first = true;
	while (true) {
		bool neg = false;
		if (first) {
			neg = sc.accept('-');
		} else {
			if (sc.done()) break;
			if (sc.accept('+')) {
				neg = false;
			} else if (sc.accept('-')) {
				neg = true;
			} else {
				throw SyntaxError("expected '+' or '-' between scalar terms", sc.pos);
			}
		}
		first = false;
		char c = sc.peek();
		mpq_class coeff(1);
		bool have_coeff = false;
		if (std::isdigit(static_cast<unsigned char>(c))) {
			coeff = scan_rational(sc);
			have_coeff = true;
			c = sc.peek();
		}
		ExactScalar term = scalar_from_rational(f, coeff);
		if (c == 'i' || c == 't') {
			if (sym.empty() || c != sym[0])
				throw SyntaxError(std::string("symbol '") + c + "' is not available in field " + f->name(), sc.pos);
			++sc.pos;
			long e = 1;
			if (sc.accept('^')) {
				std::size_t at = sc.pos;
				mpz_class ez = sc.digits();
				if (!ez.fits_slong_p() || ez < 1)
					throw SyntaxError("generator exponent out of range", at);
				e = ez.get_si();
			}
			term = term * scalar_generator(f).pow_int(e);
		} else if (!have_coeff) {
			throw SyntaxError("expected a scalar term", sc.pos);
		}
		acc = neg ? acc - term : acc + term;
		if (sc.done()) break;
		char n = sc.peek();
		if (n != '+' && n != '-')
			throw SyntaxError("unexpected character in scalar", sc.pos);
	}
	if (first) throw SyntaxError("empty scalar", 0);
	return acc;
}

namespace {

std::vector<long> prime_factors(long k) {
	std::vector<long> ps;
	for (long p = 2; p * p <= k; ++p) {
		if (k % p == 0) {
			ps.push_back(p);
			while (k % p == 0) k /= p;
		}
	}
	if (k > 1) ps.push_back(k);
	return ps;
}

bool is_primitive_root_of_unity(const ExactScalar& z, long k) {
	if (!z.pow_int(k).is_one()) return false;
	for (long p : prime_factors(k))
		if (z.pow_int(k / p).is_one()) return false;
	return true;
}

std::optional<mpq_class> sqrt_rational(const mpq_class& q) {
	if (q < 0) return std::nullopt;
	const mpz_class num = q.get_num(), den = q.get_den();
	if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
		return std::nullopt;
	mpz_class rn, rd;
	mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
	mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
	mpq_class r(rn, rd);
	r.canonicalize();
	return r;
}

// Root of z^2 + c1 z + c0 (rational c's) in the quadratic field
// Q[t]/(t^2 + m1 t + m0).  A root with nonzero t-part exists iff
// (c1^2-4c0)/(m1^2-4m0) is a rational square.
std::optional<ExactScalar> quadratic_root(const FieldPtr& f, const mpq_class& c1, const mpq_class& c0) {
	const auto& m = f->minpoly();
	const mpq_class m0 = m[0], m1 = m[1];
	const mpq_class disc_z = c1 * c1 - 4 * c0;
	const mpq_class disc_t = m1 * m1 - 4 * m0;
	if (auto s = sqrt_rational(disc_z)) {
		mpq_class a = (-c1 + *s) / 2;
		return scalar_from_rational(f, a);
	}
	if (disc_t == 0) return std::nullopt;
	if (auto b = sqrt_rational(disc_z / disc_t)) {
		mpq_class a = (*b * m1 - c1) / 2;
		return ExactScalar(f, {a, *b});
	}
	return std::nullopt;
}

} // namespace

std::optional<ExactScalar> root_of_unity(const FieldPtr& f, long k) {
	if (k < 1) throw UsageError("root order must be >= 1");
	if (k == 1) return scalar_one(f);
	if (k == 2) return -scalar_one(f);
	switch (f->kind()) {
	case FieldKind::rationals:
		return std::nullopt;
	case FieldKind::gaussian:
		// The torsion units of Q(i) are the powers of i.
		if (k == 4) return scalar_generator(f);
		return std::nullopt;
	case FieldKind::extension: {
		if (f->degree() == 2) {
			// Primitive k-th roots of degree <= 2 over Q exist only for
			// k in {3,4,6}; solve the cyclotomic quadratic directly.
			std::optional<ExactScalar> z;
			if (k == 3) z = quadratic_root(f, mpq_class(1), mpq_class(1));
			else if (k == 4) z = quadratic_root(f, mpq_class(0), mpq_class(1));
			else if (k == 6) z = quadratic_root(f, mpq_class(-1), mpq_class(1));
			if (z && is_primitive_root_of_unity(*z, k)) return z;
			return std::nullopt;
		}
		// Degree >= 3: scan +-t^j only.  Presentations whose roots of unity
		// are not monomials in the generator are not detected.
		for (int j = 1; j < f->degree(); ++j) {
			ExactScalar z = scalar_generator(f).pow_int(j);
			if (is_primitive_root_of_unity(z, k)) return z;
			if (is_primitive_root_of_unity(-z, k)) return -z;
		}
		return std::nullopt;
	}
	}
	return std::nullopt;
}

namespace {

struct Zi {
	mpz_class a, b;
};

Zi zi_mul(const Zi& x, const Zi& y) {
	return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a};
}

Zi zi_pow(Zi base, long e) {
	Zi acc{1, 0};
	while (e > 0) {
		if (e & 1) acc = zi_mul(acc, base);
		base = zi_mul(base, base);
		e >>= 1;
	}
	return acc;
}

std::optional<mpz_class> exact_root(const mpz_class& n, long k) {
	if (n < 0) return std::nullopt;
	mpz_class r;
	if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(k)) != 0) return r;
	return std::nullopt;
}

} // namespace

std::optional<ExactScalar> kth_root(const ExactScalar& c, long k) {
	if (k < 1) throw UsageError("root order must be >= 1");
	if (k == 1) return c;
	if (c.is_zero()) return c;
	const FieldPtr& f = c.field();
	switch (f->kind()) {
	case FieldKind::rationals: {
		const mpq_class& q = c.coords()[0];
		mpz_class num = q.get_num(), den = q.get_den();
		bool neg = num < 0;
		if (neg && k % 2 == 0) return std::nullopt;
		auto rn = exact_root(abs(num), k);
		auto rd = exact_root(den, k);
		if (!rn || !rd) return std::nullopt;
		mpq_class r(neg ? -*rn : *rn, *rd);
		r.canonicalize();
		return scalar_from_rational(f, r);
	}
	case FieldKind::gaussian: {
		// z^k = c reduces to w^k = gamma in Z[i] with w = m z for a common
		// denominator m; Z[i] is integrally closed so w is an actual
		// Gaussian integer, found by enumerating norms.
		const mpq_class &ar = c.coords()[0], &br = c.coords()[1];
		mpz_class m;
		mpz_lcm(m.get_mpz_t(), ar.get_den().get_mpz_t(), br.get_den().get_mpz_t());
		mpz_class scale;
		mpz_pow_ui(scale.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(k - 1));
		Zi gamma{ar.get_num() * (m / ar.get_den()) * scale, br.get_num() * (m / br.get_den()) * scale};
		mpz_class norm = gamma.a * gamma.a + gamma.b * gamma.b;
		auto r = exact_root(norm, k);
		if (!r) return std::nullopt;
		for (mpz_class x = 0; x * x <= *r; ++x) {
			mpz_class y2 = *r - x * x;
			if (!mpz_perfect_square_p(y2.get_mpz_t())) continue;
			mpz_class y;
			mpz_sqrt(y.get_mpz_t(), y2.get_mpz_t());
			for (int sx = 0; sx < 2; ++sx) {
				for (int sy = 0; sy < 2; ++sy) {
					Zi w{sx ? -x : x, sy ? -y : y};
					Zi p = zi_pow(w, k);
					if (p.a == gamma.a && p.b == gamma.b) {
						mpq_class za(w.a, m), zb(w.b, m);
						za.canonicalize();
						zb.canonicalize();
						return ExactScalar(f, {za, zb});
					}
				}
			}
		}
		return std::nullopt;
	}
	case FieldKind::extension:
		throw MathError("k-th roots over simple extension fields are not supported");
	}
	return std::nullopt;
}

bool coeff_map_valid(const FieldPtr& f, CoeffMap m) {
	if (m == CoeffMap::identity) return true;
	switch (f->kind()) {
	case FieldKind::rationals:
		return false;
	case FieldKind::gaussian:
		return true;
	case FieldKind::extension: {
		// g -> -g is an automorphism iff m(-t) = +-m(t), i.e. the minimal
		// polynomial is supported on exponents of one parity.
		const auto& mp = f->minpoly();
		const int d = static_cast<int>(mp.size()) - 1;
		for (int j = 0; j <= d; ++j)
			if (mp[j] != 0 && (j % 2) != (d % 2)) return false;
		return true;
	}
	}
	return false;
}

ExactScalar apply_coeff_map(const ExactScalar& s, CoeffMap m) {
	if (m == CoeffMap::identity) return s;
	if (!coeff_map_valid(s.field(), m))
		throw UsageError("generator negation is not an automorphism of field " + s.field()->name());
	std::vector<mpq_class> r = s.coords();
	for (std::size_t j = 1; j < r.size(); j += 2) r[j] = -r[j];
	return ExactScalar(s.field(), std::move(r));
}

} // namespace jetforge
