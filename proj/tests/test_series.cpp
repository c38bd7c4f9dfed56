#include "doctest.h"
#include "jetforge/series.hpp"

#include <random>

using namespace jetforge;

namespace {

const FieldPtr QQ = FieldDescriptor::rationals();

TruncatedSeries from_coeffs_1d(int K, const FieldPtr& f, const std::vector<mpq_class>& coeffs) {
	TermMap t;
	for (std::size_t d = 0; d < coeffs.size(); ++d)
		if (coeffs[d] != 0) t.emplace(Exponent{static_cast<int>(d)}, scalar_from_rational(f, coeffs[d]));
	return TruncatedSeries(1, K, f, std::move(t));
}

TruncatedSeries rnd_series(int nvars, int K, const FieldPtr& f, std::mt19937_64& rng, int min_deg = 0) {
	std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
	TermMap t;
	std::vector<Exponent> all;
	Exponent e(nvars, 0);
	// enumerate all exponents of degree <= K
	while (true) {
		if (total_degree(e) <= K && total_degree(e) >= min_deg) all.push_back(e);
		int i = nvars - 1;
		while (i >= 0) {
			++e[i];
			if (total_degree(e) <= K) break;
			e[i] = 0;
			--i;
		}
		if (i < 0) break;
	}
	for (const auto& ex : all) {
		mpq_class q(num(rng), den(rng));
		q.canonicalize();
		if (q != 0) t.emplace(ex, scalar_from_rational(f, q));
	}
	return TruncatedSeries(nvars, K, f, std::move(t));
}

} // namespace

TEST_CASE("series construction and canonicalization") {
	TermMap t;
	t.emplace(Exponent{2}, scalar_from_rational(QQ, mpq_class(0)));
	t.emplace(Exponent{1}, scalar_from_rational(QQ, mpq_class(3)));
	TruncatedSeries s(1, 4, QQ, std::move(t));
	CHECK(s.terms().size() == 1); // zero coefficient dropped
	CHECK(s.coefficient({1}) == scalar_from_rational(QQ, mpq_class(3)));
	CHECK(s.coefficient({2}).is_zero());
	CHECK_THROWS_AS(TruncatedSeries(1, 2, QQ, TermMap{{Exponent{3}, scalar_one(QQ)}}), UsageError);
	CHECK_THROWS_AS(TruncatedSeries(1, 2, QQ, TermMap{{Exponent{1, 1}, scalar_one(QQ)}}), UsageError);
}

TEST_CASE("geometric series inverts 1+x") {
	// (1+x)(1-x+x^2-x^3) = 1 at K=3
	auto a = from_coeffs_1d(3, QQ, {1, 1});
	auto b = from_coeffs_1d(3, QQ, {1, -1, 1, -1});
	CHECK(a * b == series_constant(1, 3, scalar_one(QQ)));
}

TEST_CASE("multiplication truncates above K") {
	auto x = series_coordinate(1, 2, QQ, 0);
	CHECK((x * x * x).is_zero());
}

TEST_CASE("shape mismatches are rejected") {
	auto a = series_coordinate(1, 3, QQ, 0);
	auto b = series_coordinate(1, 4, QQ, 0);
	CHECK_THROWS_AS(a + b, UsageError);
	CHECK_THROWS_AS(a * b, UsageError);
	auto c = series_coordinate(2, 3, QQ, 0);
	CHECK_THROWS_AS(a + c, UsageError);
	auto d = series_coordinate(1, 3, FieldDescriptor::gaussian(), 0);
	CHECK_THROWS_AS(a + d, UsageError);
}

TEST_CASE("substitution") {
	// x^2 at (x+x^3): (x+x^3)^2 = x^2 + 2x^4 at K=4
	auto s = series_monomial(1, 4, {2}, scalar_one(QQ));
	auto g = from_coeffs_1d(4, QQ, {0, 1, 0, 1});
	CHECK(substitute(s, {g}) == from_coeffs_1d(4, QQ, {0, 0, 1, 0, 2}));

	// constant terms pass through: (1 + x)^ at g keeps the 1
	auto one_plus_x = from_coeffs_1d(4, QQ, {1, 1});
	auto r = substitute(one_plus_x, {g});
	CHECK(r.constant_term().is_one());

	// nonzero constant term in g refused
	auto bad = from_coeffs_1d(4, QQ, {1, 1});
	CHECK_THROWS_AS(substitute(s, {bad}), MathError);

	// multivariate: s = x*y at (x+y^2, y) -> x*y + y^3, K=3
	TermMap t;
	t.emplace(Exponent{1, 1}, scalar_one(QQ));
	TruncatedSeries xy(2, 3, QQ, std::move(t));
	auto gx = series_coordinate(2, 3, QQ, 0) + series_monomial(2, 3, {0, 2}, scalar_one(QQ));
	auto gy = series_coordinate(2, 3, QQ, 1);
	auto expect = series_monomial(2, 3, {1, 1}, scalar_one(QQ)) + series_monomial(2, 3, {0, 3}, scalar_one(QQ));
	CHECK(substitute(xy, {gx, gy}) == expect);
}

TEST_CASE("substitution is associative on random data") {
	std::mt19937_64 rng(101);
	for (int it = 0; it < 25; ++it) {
		auto s = rnd_series(1, 6, QQ, rng);
		auto g = rnd_series(1, 6, QQ, rng, 1);
		auto h = rnd_series(1, 6, QQ, rng, 1);
		auto lhs = substitute(substitute(s, {g}), {h});
		auto rhs = substitute(s, {substitute(g, {h})});
		CHECK(lhs == rhs);
	}
	for (int it = 0; it < 8; ++it) {
		auto s = rnd_series(2, 4, QQ, rng);
		std::vector<TruncatedSeries> g = {rnd_series(2, 4, QQ, rng, 1), rnd_series(2, 4, QQ, rng, 1)};
		std::vector<TruncatedSeries> h = {rnd_series(2, 4, QQ, rng, 1), rnd_series(2, 4, QQ, rng, 1)};
		auto lhs = substitute(substitute(s, g), h);
		std::vector<TruncatedSeries> gh = {substitute(g[0], h), substitute(g[1], h)};
		CHECK(lhs == substitute(s, gh));
	}
}

TEST_CASE("ring axioms on random series") {
	std::mt19937_64 rng(55);
	for (int it = 0; it < 30; ++it) {
		auto a = rnd_series(2, 4, QQ, rng);
		auto b = rnd_series(2, 4, QQ, rng);
		auto c = rnd_series(2, 4, QQ, rng);
		CHECK((a * b) * c == a * (b * c));
		CHECK(a * (b + c) == a * b + a * c);
		CHECK(a * b == b * a);
		CHECK(a - a == series_zero(2, 4, QQ));
	}
}

TEST_CASE("retruncation is a ring map") {
	std::mt19937_64 rng(77);
	for (int it = 0; it < 25; ++it) {
		auto a = rnd_series(1, 8, QQ, rng);
		auto b = rnd_series(1, 8, QQ, rng);
		CHECK(retruncate(a * b, 5) == retruncate(a, 5) * retruncate(b, 5));
		CHECK(retruncate(a + b, 5) == retruncate(a, 5) + retruncate(b, 5));
	}
	auto a = rnd_series(1, 4, QQ, rng);
	CHECK_THROWS_AS(retruncate(a, 5), UsageError);
	CHECK(lift_degree(retruncate(a, 2), 4).max_degree() == 4);
}

TEST_CASE("valuation") {
	CHECK(!valuation(series_zero(1, 5, QQ)));
	CHECK(*valuation(from_coeffs_1d(5, QQ, {0, 0, 1, 1})) == 2);
	CHECK(*valuation(series_constant(1, 5, scalar_one(QQ))) == 0);
	std::mt19937_64 rng(3);
	for (int it = 0; it < 20; ++it) {
		auto a = rnd_series(1, 6, QQ, rng, 1);
		auto b = rnd_series(1, 6, QQ, rng, 1);
		auto p = a * b;
		if (!a.is_zero() && !b.is_zero() && !p.is_zero())
			CHECK(*valuation(p) == *valuation(a) + *valuation(b));
	}
}

TEST_CASE("binomial powers") {
	// (1+x^3)^(-1/3) = 1 - x^3/3 + 2x^6/9 at K=6
	auto s = from_coeffs_1d(6, QQ, {1, 0, 0, 1});
	auto r = binomial_power(s, mpq_class(-1, 3));
	CHECK(r == from_coeffs_1d(6, QQ, {1, 0, 0, mpq_class(-1, 3), 0, 0, mpq_class(2, 9)}));

	// (1+x)^(1/2) = 1 + x/2 - x^2/8 at K=2
	auto h = binomial_power(from_coeffs_1d(2, QQ, {1, 1}), mpq_class(1, 2));
	CHECK(h == from_coeffs_1d(2, QQ, {1, mpq_class(1, 2), mpq_class(-1, 8)}));

	// result^q = s^p exactly at K
	std::mt19937_64 rng(31);
	for (int it = 0; it < 10; ++it) {
		auto u = rnd_series(1, 6, QQ, rng, 1);
		auto base = series_constant(1, 6, scalar_one(QQ)) + u;
		auto w = binomial_power(base, mpq_class(-2, 3));
		CHECK(w * w * w * base * base == series_constant(1, 6, scalar_one(QQ)));
	}

	CHECK_THROWS_AS(binomial_power(from_coeffs_1d(2, QQ, {2, 1}), mpq_class(1, 2)), MathError);
	// integer exponents agree with repeated multiplication
	auto b = from_coeffs_1d(5, QQ, {1, 2, -1});
	CHECK(binomial_power(b, mpq_class(3)) == b * b * b);
	CHECK(binomial_power(b, mpq_class(-1)) * b == series_constant(1, 5, scalar_one(QQ)));
}

TEST_CASE("derivative satisfies Leibniz up to the lost top degree") {
	std::mt19937_64 rng(41);
	for (int it = 0; it < 20; ++it) {
		auto a = rnd_series(2, 5, QQ, rng);
		auto b = rnd_series(2, 5, QQ, rng);
		for (int i = 0; i < 2; ++i) {
			auto lhs = retruncate(partial_derivative(a * b, i), 4);
			auto rhs = retruncate(partial_derivative(a, i) * b + a * partial_derivative(b, i), 4);
			CHECK(lhs == rhs);
		}
	}
	CHECK(partial_derivative(from_coeffs_1d(3, QQ, {0, 0, 0, 2}), 0) ==
	      from_coeffs_1d(3, QQ, {0, 0, 6}));
}

TEST_CASE("monomial division and homogeneous parts") {
	auto s = from_coeffs_1d(6, QQ, {0, 0, 3, 0, 1});
	auto q = divide_by_monomial(s, {2});
	CHECK(q.max_degree() == 4);
	CHECK(q == from_coeffs_1d(4, QQ, {3, 0, 1}));
	CHECK_THROWS_AS(divide_by_monomial(from_coeffs_1d(3, QQ, {0, 1}), {2}), MathError);
	CHECK(homogeneous_part(s, 2) == from_coeffs_1d(6, QQ, {0, 0, 3}));
	CHECK(homogeneous_part(s, 3).is_zero());
}

TEST_CASE("terms iterate in graded order") {
	TermMap t;
	t.emplace(Exponent{0, 2}, scalar_one(QQ));
	t.emplace(Exponent{2, 0}, scalar_one(QQ));
	t.emplace(Exponent{1, 0}, scalar_one(QQ));
	t.emplace(Exponent{1, 1}, scalar_one(QQ));
	TruncatedSeries s(2, 3, QQ, std::move(t));
	std::vector<Exponent> order;
	for (const auto& [e, c] : s.terms()) order.push_back(e);
	CHECK(order == std::vector<Exponent>{{1, 0}, {2, 0}, {1, 1}, {0, 2}});
}
