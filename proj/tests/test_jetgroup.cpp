#include "doctest.h"
#include "jetforge/jetgroup.hpp"

#include <functional>
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

JetDiffeo jet_1d(int K, const FieldPtr& f, const std::vector<mpq_class>& coeffs) {
	return JetDiffeo({from_coeffs_1d(K, f, coeffs)});
}

mpq_class rnd_rational(std::mt19937_64& rng) {
	std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
	mpq_class q(num(rng), den(rng));
	q.canonicalize();
	return q;
}

// Random invertible jet; tangency >= tang forces the part below that to be id.
JetDiffeo rnd_jet(int n, int K, const FieldPtr& f, std::mt19937_64& rng, int tang = 0) {
	while (true) {
		std::vector<TruncatedSeries> comps;
		for (int i = 0; i < n; ++i) {
			TruncatedSeries s = tang >= 1 ? series_coordinate(n, K, f, i) : series_zero(n, K, f);
			Exponent e(n, 0);
			// enumerate exponents of degree >= max(1, tang+1)
			std::function<void(int, int)> walk = [&](int v, int left) {
				if (v == n) {
					int d = total_degree(e);
					if (d >= std::max(1, tang + 1) && d <= K) {
						mpq_class q = rnd_rational(rng);
						if (q != 0) s = s + series_monomial(n, K, e, scalar_from_rational(f, q));
					}
					return;
				}
				for (int a = 0; a <= left; ++a) {
					e[v] = a;
					walk(v + 1, left - a);
				}
				e[v] = 0;
			};
			walk(0, K);
			comps.push_back(std::move(s));
		}
		try {
			JetDiffeo j(std::move(comps));
			if (tang >= 1 && tangency_order(j).value_or(K + 1) < tang) continue;
			return j;
		} catch (const MathError&) {
			// singular linear part; retry
		}
	}
}

} // namespace

TEST_CASE("linear maps: product, det, inverse") {
	auto f = QQ;
	std::mt19937_64 rng(9);
	for (int it = 0; it < 40; ++it) {
		std::vector<ExactScalar> ea, eb;
		for (int i = 0; i < 9; ++i) ea.push_back(scalar_from_rational(f, rnd_rational(rng)));
		for (int i = 0; i < 9; ++i) eb.push_back(scalar_from_rational(f, rnd_rational(rng)));
		LinearMap A(3, f, ea), B(3, f, eb);
		// det is multiplicative
		CHECK((A * B).det() == A.det() * B.det());
		// Laplace expansion along the first row as an independent oracle
		auto minor_det = [&](const LinearMap& M, int col) {
			std::vector<ExactScalar> m;
			for (int r = 1; r < 3; ++r)
				for (int c = 0; c < 3; ++c)
					if (c != col) m.push_back(M.at(r, c));
			LinearMap mm(2, f, m);
			return mm.at(0, 0) * mm.at(1, 1) - mm.at(0, 1) * mm.at(1, 0);
		};
		ExactScalar lap = A.at(0, 0) * minor_det(A, 0) - A.at(0, 1) * minor_det(A, 1) + A.at(0, 2) * minor_det(A, 2);
		CHECK(A.det() == lap);
		if (!A.det().is_zero()) {
			CHECK(A * A.inverse() == LinearMap::identity(3, f));
			CHECK(A.inverse() * A == LinearMap::identity(3, f));
		} else {
			CHECK_THROWS_AS(A.inverse(), MathError);
		}
	}
}

TEST_CASE("jet construction rejects bad input") {
	// zero linear part
	CHECK_THROWS_AS(jet_1d(3, QQ, {0, 0, 1}), MathError);
	// nonzero constant term
	CHECK_THROWS_AS(jet_1d(3, QQ, {1, 1}), UsageError);
	// component count != nvars
	CHECK_THROWS_AS(JetDiffeo({series_coordinate(2, 3, QQ, 0)}), UsageError);
}

TEST_CASE("composition") {
	// (x+x^2) after (x+x^3) = x + x^2 + x^3 + 2x^4 at K=4
	auto f = jet_1d(4, QQ, {0, 1, 1});
	auto g = jet_1d(4, QQ, {0, 1, 0, 1});
	CHECK(compose(f, g) == jet_1d(4, QQ, {0, 1, 1, 1, 2}));
	// and the other order differs in degree 4: x + x^2 + x^3 + 3x^4
	CHECK(compose(g, f) == jet_1d(4, QQ, {0, 1, 1, 1, 3}));
}

TEST_CASE("inversion") {
	// (x+x^2)^-1 = x - x^2 + 2x^3 - 5x^4 (signed Catalan numbers)
	auto f = jet_1d(4, QQ, {0, 1, 1});
	CHECK(invert(f) == jet_1d(4, QQ, {0, 1, -1, 2, -5}));
	CHECK(compose(f, invert(f)).is_identity());
	CHECK(compose(invert(f), f).is_identity());
}

TEST_CASE("group laws on random jets") {
	std::mt19937_64 rng(123);
	for (int it = 0; it < 30; ++it) {
		auto a = rnd_jet(1, 6, QQ, rng);
		auto b = rnd_jet(1, 6, QQ, rng);
		auto c = rnd_jet(1, 6, QQ, rng);
		CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
		CHECK(compose(a, invert(a)).is_identity());
		CHECK(compose(invert(a), a).is_identity());
		CHECK(compose(a, JetDiffeo::identity(1, 6, QQ)) == a);
	}
	for (int it = 0; it < 10; ++it) {
		auto a = rnd_jet(2, 4, QQ, rng);
		auto b = rnd_jet(2, 4, QQ, rng);
		auto c = rnd_jet(2, 4, QQ, rng);
		CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
		CHECK(compose(a, invert(a)).is_identity());
		CHECK(compose(invert(a), a).is_identity());
	}
}

TEST_CASE("commutator") {
	// [2x, x+x^2] at K=2: g^-1 = x-x^2, f^-1 = x/2,
	// f(g(f^-1(g^-1(x)))) = 2((x-x^2)/2 + ((x-x^2)/2)^2) = x - (1/2)x^2
	auto f = jet_1d(2, QQ, {0, 2});
	auto g = jet_1d(2, QQ, {0, 1, 1});
	CHECK(commutator(f, g) == jet_1d(2, QQ, {0, 1, mpq_class(-1, 2)}));
	// commuting pair
	auto h = jet_1d(2, QQ, {0, 3});
	CHECK(commutator(f, h).is_identity());
}

TEST_CASE("commutators respect the tangency filtration") {
	// tangency orders add: [G_k, G_l] lands in G_{k+l}
	std::mt19937_64 rng(321);
	for (int it = 0; it < 12; ++it) {
		auto a = rnd_jet(1, 8, QQ, rng, 1);
		auto b = rnd_jet(1, 8, QQ, rng, 2);
		auto c = commutator(a, b);
		auto t = tangency_order(c);
		if (t) CHECK(*t >= 3);
	}
}

TEST_CASE("projection is a group morphism") {
	std::mt19937_64 rng(17);
	for (int it = 0; it < 25; ++it) {
		auto a = rnd_jet(1, 7, QQ, rng);
		auto b = rnd_jet(1, 7, QQ, rng);
		CHECK(project(compose(a, b), 4) == compose(project(a, 4), project(b, 4)));
		CHECK(project(invert(a), 4) == invert(project(a, 4)));
	}
	for (int it = 0; it < 8; ++it) {
		auto a = rnd_jet(2, 4, QQ, rng);
		auto b = rnd_jet(2, 4, QQ, rng);
		CHECK(project(compose(a, b), 2) == compose(project(a, 2), project(b, 2)));
	}
	auto a = rnd_jet(1, 4, QQ, rng);
	CHECK_THROWS_AS(project(a, 5), UsageError);
	CHECK_THROWS_AS(project(a, 0), UsageError);
}

TEST_CASE("tangency order") {
	CHECK(!tangency_order(JetDiffeo::identity(1, 5, QQ)));
	CHECK(*tangency_order(jet_1d(5, QQ, {0, 2})) == 0);
	CHECK(*tangency_order(jet_1d(5, QQ, {0, 1, 0, 0, 0, 1})) == 4);
	CHECK(*tangency_order(jet_1d(5, QQ, {0, 1, 1})) == 1);
	// n=2: off-diagonal linear deviation is order 0
	auto id2 = JetDiffeo::identity(2, 3, QQ);
	auto c0 = id2.component(0) + series_monomial(2, 3, {0, 1}, scalar_one(QQ));
	CHECK(*tangency_order(JetDiffeo({c0, id2.component(1)})) == 0);
}

TEST_CASE("integer powers of a jet") {
	auto qi = FieldDescriptor::gaussian();
	// (ix)^4 = id
	JetDiffeo rot({series_coordinate(1, 3, qi, 0) * scalar_generator(qi)});
	CHECK(power(rot, 4).is_identity());
	CHECK(!power(rot, 2).is_identity());

	// x/(1-x) has m-th power x/(1-mx)
	auto a = jet_1d(5, QQ, {0, 1, 1, 1, 1, 1});
	for (long m = -3; m <= 3; ++m) {
		std::vector<mpq_class> want{0};
		for (int d = 1; d <= 5; ++d) {
			mpq_class c(m);
			mpz_class p;
			mpz_pow_ui(p.get_mpz_t(), mpq_class(m).get_num().get_mpz_t(), d - 1);
			want.push_back(mpq_class(p));
		}
		CHECK(power(a, m) == jet_1d(5, QQ, want));
	}
	CHECK(power(a, 0).is_identity());

	std::mt19937_64 rng(1);
	for (int it = 0; it < 10; ++it) {
		auto g = rnd_jet(1, 6, QQ, rng);
		CHECK(power(g, 3) == compose(g, compose(g, g)));
		CHECK(power(g, -2) == invert(compose(g, g)));
	}
}

TEST_CASE("det of the linear part is multiplicative under composition") {
	std::mt19937_64 rng(2024);
	for (int it = 0; it < 20; ++it) {
		auto a = rnd_jet(2, 3, QQ, rng);
		auto b = rnd_jet(2, 3, QQ, rng);
		CHECK(det_linear(compose(a, b)) == det_linear(a) * det_linear(b));
	}
}
