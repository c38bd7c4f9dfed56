#include "doctest.h"
#include "jetforge/lie.hpp"

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

JetVectorField field_1d(int K, const FieldPtr& f, const std::vector<mpq_class>& coeffs) {
	return JetVectorField({from_coeffs_1d(K, f, coeffs)});
}

mpq_class rnd_rational(std::mt19937_64& rng) {
	std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
	mpq_class q(num(rng), den(rng));
	q.canonicalize();
	return q;
}

TruncatedSeries rnd_series_minval(int n, int K, const FieldPtr& f, std::mt19937_64& rng, int min_deg) {
	TruncatedSeries s = series_zero(n, K, f);
	Exponent e(n, 0);
	std::function<void(int, int)> walk = [&](int v, int left) {
		if (v == n) {
			int d = total_degree(e);
			if (d >= min_deg && d <= K) {
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
	return s;
}

JetVectorField rnd_field(int n, int K, const FieldPtr& f, std::mt19937_64& rng, int min_val = 2) {
	std::vector<TruncatedSeries> c;
	for (int i = 0; i < n; ++i) c.push_back(rnd_series_minval(n, K, f, rng, min_val));
	return JetVectorField(std::move(c));
}

JetDiffeo rnd_tangent_jet(int n, int K, const FieldPtr& f, std::mt19937_64& rng) {
	std::vector<TruncatedSeries> c;
	for (int i = 0; i < n; ++i)
		c.push_back(series_coordinate(n, K, f, i) + rnd_series_minval(n, K, f, rng, 2));
	return JetDiffeo(std::move(c));
}

} // namespace

TEST_CASE("flow of x^2 d/dx is the jet of x/(1-tx)") {
	auto X = field_1d(5, QQ, {0, 0, 1});
	auto flow = exp_flow(X, scalar_one(QQ));
	CHECK(flow == JetDiffeo({from_coeffs_1d(5, QQ, {0, 1, 1, 1, 1, 1})}));

	// coefficient of x^{d} is t^{d-1}
	auto X6 = field_1d(6, QQ, {0, 0, 1});
	for (mpq_class t : {mpq_class(1), mpq_class(-1), mpq_class(1, 2)}) {
		auto ft = exp_flow(X6, scalar_from_rational(QQ, t));
		std::vector<mpq_class> want{0};
		mpq_class p = 1;
		for (int d = 1; d <= 6; ++d) {
			want.push_back(p);
			p *= t;
		}
		CHECK(ft == JetDiffeo({from_coeffs_1d(6, QQ, want)}));
	}
}

TEST_CASE("flow domain requires valuation >= 2") {
	CHECK_THROWS_AS(exp_flow(field_1d(4, QQ, {0, 1}), scalar_one(QQ)), MathError);
	CHECK(exp_flow(JetVectorField::zero(2, 3, QQ), scalar_one(QQ)).is_identity());
}

TEST_CASE("two-variable flow") {
	// X = x1 x2 d/dx1: X(x1) = x1 x2, X^2(x1) = x1 x2^2, X(x2) = 0
	TermMap t;
	t.emplace(Exponent{1, 1}, scalar_one(QQ));
	JetVectorField X({TruncatedSeries(2, 3, QQ, std::move(t)), series_zero(2, 3, QQ)});
	auto flow = exp_flow(X, scalar_one(QQ));
	auto want0 = series_coordinate(2, 3, QQ, 0) + series_monomial(2, 3, {1, 1}, scalar_one(QQ)) +
	             series_monomial(2, 3, {1, 2}, scalar_from_rational(QQ, mpq_class(1, 2)));
	CHECK(flow.component(0) == want0);
	CHECK(flow.component(1) == series_coordinate(2, 3, QQ, 1));
}

TEST_CASE("flows form one-parameter groups") {
	std::mt19937_64 rng(71);
	for (int it = 0; it < 10; ++it) {
		auto X = rnd_field(1, 8, QQ, rng);
		auto s = scalar_from_rational(QQ, rnd_rational(rng));
		auto t = scalar_from_rational(QQ, rnd_rational(rng));
		CHECK(exp_flow(X, s + t) == compose(exp_flow(X, s), exp_flow(X, t)));
		CHECK(compose(exp_flow(X, s), exp_flow(X, -s)).is_identity());
	}
	for (int it = 0; it < 4; ++it) {
		auto X = rnd_field(2, 5, QQ, rng);
		auto s = scalar_from_rational(QQ, rnd_rational(rng));
		auto t = scalar_from_rational(QQ, rnd_rational(rng));
		CHECK(exp_flow(X, s + t) == compose(exp_flow(X, s), exp_flow(X, t)));
	}
}

TEST_CASE("t-expansion of a flow has coefficient tuples of increasing valuation") {
	// exp(tX) = id + sum_i t^i A_i with val(A_i) >= i+1; extract the A_i by
	// exact Vandermonde interpolation over sample times t = 0..K-1.
	std::mt19937_64 rng(99);
	for (auto [n, K] : std::vector<std::pair<int, int>>{{1, 8}, {2, 5}}) {
		auto X = rnd_field(n, K, QQ, rng);
		const int M = K; // polynomial degree in t is < K
		std::vector<JetDiffeo> flows;
		for (int s = 0; s < M; ++s)
			flows.push_back(exp_flow(X, scalar_from_rational(QQ, mpq_class(s))));
		std::vector<ExactScalar> vand; // V[s][i] = s^i (0^0 = 1)
		for (int s = 0; s < M; ++s)
			for (int i = 0; i < M; ++i) {
				mpz_class p, base(s);
				mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), i);
				vand.push_back(scalar_from_rational(QQ, mpq_class(p)));
			}
		LinearMap Vinv = LinearMap(M, QQ, vand).inverse();
		JetDiffeo id = JetDiffeo::identity(n, K, QQ);
		for (int i = 1; i < M; ++i) {
			// A_i component j = sum_s Vinv[i][s] (flow_s - id)_j
			for (int j = 0; j < n; ++j) {
				TruncatedSeries Ai = series_zero(n, K, QQ);
				for (int s = 0; s < M; ++s)
					Ai = Ai + (flows[s].component(j) - id.component(j)) * Vinv.at(i, s);
				auto v = valuation(Ai);
				if (v) CHECK(*v >= i + 1);
			}
		}
	}
}

TEST_CASE("log recovers the field of the geometric flow") {
	auto f = JetDiffeo({from_coeffs_1d(6, QQ, {0, 1, 1, 1, 1, 1, 1})}); // x/(1-x)
	CHECK(log_jet(f) == field_1d(6, QQ, {0, 0, 1}));
	CHECK_THROWS_AS(log_jet(JetDiffeo({from_coeffs_1d(3, QQ, {0, 2})})), MathError);
	CHECK(log_jet(JetDiffeo::identity(1, 4, QQ)).is_zero());
}

TEST_CASE("exp and log are mutually inverse") {
	std::mt19937_64 rng(13);
	for (int it = 0; it < 15; ++it) {
		auto X = rnd_field(1, 8, QQ, rng);
		CHECK(log_jet(exp_flow(X, scalar_one(QQ))) == X);
		auto f = rnd_tangent_jet(1, 8, QQ, rng);
		CHECK(exp_flow(log_jet(f), scalar_one(QQ)) == f);
	}
	for (int it = 0; it < 5; ++it) {
		auto X = rnd_field(2, 4, QQ, rng);
		CHECK(log_jet(exp_flow(X, scalar_one(QQ))) == X);
		auto f = rnd_tangent_jet(2, 4, QQ, rng);
		CHECK(exp_flow(log_jet(f), scalar_one(QQ)) == f);
	}
}

TEST_CASE("bracket is antisymmetric and satisfies Jacobi") {
	std::mt19937_64 rng(37);
	for (int it = 0; it < 10; ++it) {
		auto X = rnd_field(2, 4, QQ, rng, 1);
		auto Y = rnd_field(2, 4, QQ, rng, 1);
		auto Z = rnd_field(2, 4, QQ, rng, 1);
		CHECK(bracket(X, Y) == -bracket(Y, X));
		auto jac = bracket(bracket(X, Y), Z) + bracket(bracket(Y, Z), X) + bracket(bracket(Z, X), Y);
		CHECK(jac.is_zero());
	}
	// 1d: [x^2 d, x^3 d] = x^4 d
	CHECK(bracket(field_1d(5, QQ, {0, 0, 1}), field_1d(5, QQ, {0, 0, 0, 1})) ==
	      field_1d(5, QQ, {0, 0, 0, 0, 1}));
}

TEST_CASE("bch on nilpotent-to-truncation data matches the series formula") {
	// With compose(f,g) = f(g(x)) the product order reverses relative to
	// left-to-right action, so log(exp X . exp Y) = X + Y - [X,Y]/2
	// + [X,[X,Y]]/12 - [Y,[X,Y]]/12 + ... (the classical series for the
	// negated bracket).  X = x^2 d, Y = x^3 d at K=5: [X,Y] = x^4 d,
	// [X,[X,Y]] = 2x^5 d, [Y,[X,Y]] truncates to 0, so
	// Z = (x^2 + x^3 - x^4/2 + x^5/6) d.  Cross-checked by hand against
	// f(g(x)) for the exact flows f = x/(1-x), g = x(1-2x^2)^{-1/2}.
	auto X = field_1d(5, QQ, {0, 0, 1});
	auto Y = field_1d(5, QQ, {0, 0, 0, 1});
	CHECK(bch(X, Y) == field_1d(5, QQ, {0, 0, 1, 1, mpq_class(-1, 2), mpq_class(1, 6)}));

	// X = x^3 d, Y = x^4 d at K=8: the [Y,[X,Y]] term has valuation 9,
	// so bch = X + Y - [X,Y]/2 + [X,[X,Y]]/12 exactly at this degree
	auto X8 = field_1d(8, QQ, {0, 0, 0, 1});
	auto Y8 = field_1d(8, QQ, {0, 0, 0, 0, 1});
	auto half = scalar_from_rational(QQ, mpq_class(1, 2));
	auto twelfth = scalar_from_rational(QQ, mpq_class(1, 12));
	auto series = X8 + Y8 - bracket(X8, Y8) * half + bracket(X8, bracket(X8, Y8)) * twelfth;
	CHECK(bch(X8, Y8) == series);

	// defining property: exp(bch(X,Y)) = exp X . exp Y
	std::mt19937_64 rng(5);
	for (int it = 0; it < 8; ++it) {
		auto A = rnd_field(1, 7, QQ, rng);
		auto B = rnd_field(1, 7, QQ, rng);
		auto one = scalar_one(QQ);
		CHECK(exp_flow(bch(A, B), one) == compose(exp_flow(A, one), exp_flow(B, one)));
	}
}

TEST_CASE("pushforward") {
	// (2x)_* (x^2 d) = (1/2) x^2 d
	JetDiffeo two_x({from_coeffs_1d(4, QQ, {0, 2})});
	auto X = field_1d(4, QQ, {0, 0, 1});
	CHECK(pushforward(two_x, X) == field_1d(4, QQ, {0, 0, mpq_class(1, 2)}));

	// (mu x)_* sum a_l x^l d = sum a_l mu^{1-l} x^l d
	std::mt19937_64 rng(43);
	for (int it = 0; it < 10; ++it) {
		auto Y = rnd_field(1, 6, QQ, rng, 1);
		mpq_class mu = rnd_rational(rng);
		if (mu == 0) continue;
		JetDiffeo scale({from_coeffs_1d(6, QQ, {0, mu})});
		auto pushed = pushforward(scale, Y);
		TruncatedSeries want = series_zero(1, 6, QQ);
		for (const auto& [e, c] : Y.component(0).terms()) {
			mpq_class factor = 1;
			for (int p = 0; p < e[0] - 1; ++p) factor /= mu;
			if (e[0] == 0) factor = mu;
			want = want + series_monomial(1, 6, e, c * scalar_from_rational(QQ, factor));
		}
		CHECK(pushed.component(0) == want);
	}
}

TEST_CASE("pushforward is functorial and intertwines flows") {
	std::mt19937_64 rng(29);
	for (int it = 0; it < 8; ++it) {
		auto X = rnd_field(1, 7, QQ, rng);
		auto phi = rnd_tangent_jet(1, 7, QQ, rng);
		auto psi = rnd_tangent_jet(1, 7, QQ, rng);
		CHECK(pushforward(compose(phi, psi), X) == pushforward(phi, pushforward(psi, X)));
		// exp(phi_* X) = phi . exp(X) . phi^-1
		auto one = scalar_one(QQ);
		CHECK(exp_flow(pushforward(phi, X), one) ==
		      compose(compose(phi, exp_flow(X, one)), invert(phi)));
	}
	for (int it = 0; it < 3; ++it) {
		auto X = rnd_field(2, 4, QQ, rng);
		auto phi = rnd_tangent_jet(2, 4, QQ, rng);
		auto one = scalar_one(QQ);
		CHECK(exp_flow(pushforward(phi, X), one) ==
		      compose(compose(phi, exp_flow(X, one)), invert(phi)));
	}
}

TEST_CASE("normal fields") {
	auto lam = scalar_from_rational(QQ, mpq_class(3));
	// x^2/(1+3x) d = (x^2 - 3x^3 + 9x^4 - 27x^5) d at K=5
	CHECK(normal_field(1, lam, 5) == field_1d(5, QQ, {0, 0, 1, -3, 9, -27}));
	CHECK(normal_field(2, scalar_zero(QQ), 6) == field_1d(6, QQ, {0, 0, 0, 1}));
	CHECK_THROWS_AS(normal_field(0, lam, 5), UsageError);
}

TEST_CASE("commuting flows") {
	auto X = field_1d(6, QQ, {0, 0, 1, 2});
	auto Y = X * scalar_from_rational(QQ, mpq_class(-2, 3));
	CHECK(flows_commute(X, Y));
	CHECK(commutator(exp_flow(X, scalar_one(QQ)), exp_flow(Y, scalar_one(QQ))).is_identity());

	auto Z = field_1d(6, QQ, {0, 0, 0, 1});
	CHECK(!flows_commute(X, Z));
	CHECK(!commutator(exp_flow(X, scalar_one(QQ)), exp_flow(Z, scalar_one(QQ))).is_identity());

	// equivalence on random pairs
	std::mt19937_64 rng(83);
	for (int it = 0; it < 10; ++it) {
		auto A = rnd_field(1, 6, QQ, rng);
		auto B = rnd_field(1, 6, QQ, rng);
		bool same = commutator(exp_flow(A, scalar_one(QQ)), exp_flow(B, scalar_one(QQ))).is_identity();
		CHECK(flows_commute(A, B) == same);
	}
}
