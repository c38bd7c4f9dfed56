#include "jetforge/selftest.hpp"

#include "jetforge/classify.hpp"
#include "jetforge/randomgen.hpp"
#include "jetforge/words.hpp"

#include <chrono>
#include <cstddef>

namespace jetforge {

namespace {

// A check failure that carries its own explanation; mathematical refusals
// (MathError) and shape errors escaping a check are reported the same way.
struct CheckFailure : std::runtime_error {
	using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
	if (!ok) throw CheckFailure(what);
}

const FieldPtr& QQ() {
	static FieldPtr f = FieldDescriptor::rationals();
	return f;
}
const FieldPtr& QI() {
	static FieldPtr f = FieldDescriptor::gaussian();
	return f;
}

ExactScalar rat(const FieldPtr& f, const mpq_class& q) { return scalar_from_rational(f, q); }

JetDiffeo jet_1d(int K, const FieldPtr& f, const std::vector<mpq_class>& coeffs) {
	TermMap t;
	for (std::size_t d = 0; d < coeffs.size(); ++d)
		if (coeffs[d] != 0) t.emplace(Exponent{static_cast<int>(d)}, rat(f, coeffs[d]));
	return JetDiffeo({TruncatedSeries(1, K, f, std::move(t))});
}

JetVectorField monomial_field(int K, const FieldPtr& f, int degree, const mpq_class& c) {
	return JetVectorField({series_monomial(1, K, Exponent{degree}, rat(f, c))});
}

JetDiffeo dilation(const ExactScalar& mu, int n, int K) {
	return linear_jet(LinearMap::diagonal(std::vector<ExactScalar>(n, mu)), K);
}

// --- 1: closed-form flow ----------------------------------------------------

void check_flow_closed_form() {
	const int K = 16;
	auto X = monomial_field(K, QQ(), 2, 1);
	for (mpq_class t : {mpq_class(1), mpq_class(-1), mpq_class(1, 2)}) {
		TermMap m;
		mpq_class p = 1; // t^i on x^{i+1}
		for (int i = 0; i + 1 <= K; ++i) {
			m[Exponent{i + 1}] = rat(QQ(), p);
			p *= t;
		}
		auto want = JetDiffeo({TruncatedSeries(1, K, QQ(), std::move(m))});
		require(exp_flow(X, rat(QQ(), t)) == want,
		        "flow of x^2 d/dx at t=" + t.get_str() + " is not the jet of x/(1-tx)");
	}
}

// --- 2: exp/log bijectivity ---------------------------------------------------

void check_exp_log_roundtrip() {
	RandomSource rng(2002);
	auto one_shape = [&](int n, int K, int count) {
		for (int it = 0; it < count; ++it) {
			const FieldPtr& f = it % 2 ? QI() : QQ();
			auto X = rng.vector_field(n, K, f, 2);
			require(log_jet(exp_flow(X, scalar_one(f))) == X,
			        "log(exp X) != X for a random field");
			auto g = rng.tangent_jet(n, K, f, 1);
			require(exp_flow(log_jet(g), scalar_one(f)) == g,
			        "exp(log f) != f for a random tangent jet");
		}
	};
	one_shape(1, 16, 200);
	one_shape(2, 8, 50);
}

// --- 3: BCH coefficients --------------------------------------------------------

void check_bch_coefficients() {
	const int K = 5;
	auto X = monomial_field(K, QQ(), 2, 1);
	auto Y = monomial_field(K, QQ(), 3, 1);
	auto Z = bch(X, Y);
	// With composition f(g(x)) the flow map reverses bracket order, so the
	// displayed 1/2 and 1/12 magnitudes appear as -1/2 [X,Y] and
	// +1/12 [X,[X,Y]] for this bracket orientation; both magnitudes are
	// orientation-free.
	auto half = rat(QQ(), mpq_class(1, 2));
	auto twelfth = rat(QQ(), mpq_class(1, 12));
	auto series = X + Y - bracket(X, Y) * half + bracket(X, bracket(X, Y)) * twelfth;
	require(Z == series, "bch(x^2 d/dx, x^3 d/dx) differs from the bracket series at K=5");
	// the same jet, written out: (x^2 + x^3 - 1/2 x^4 + 1/6 x^5) d/dx
	auto frozen = monomial_field(K, QQ(), 2, 1) + monomial_field(K, QQ(), 3, 1) +
	              monomial_field(K, QQ(), 4, mpq_class(-1, 2)) +
	              monomial_field(K, QQ(), 5, mpq_class(1, 6));
	require(Z == frozen, "bch(x^2 d/dx, x^3 d/dx) differs from its hand-computed jet");
	// defining property on random fields
	RandomSource rng(2003);
	for (int it = 0; it < 25; ++it) {
		const FieldPtr& f = it % 2 ? QI() : QQ();
		auto A = rng.vector_field(1, 8, f, 2);
		auto B = rng.vector_field(1, 8, f, 2);
		require(exp_flow(bch(A, B), scalar_one(f)) ==
		            compose(exp_flow(A, scalar_one(f)), exp_flow(B, scalar_one(f))),
		        "exp(bch(X,Y)) != exp X o exp Y");
	}
}

// --- 4: commutator leading term and remainder ------------------------------------

void check_commutator_depth() {
	const int K = 16;
	auto one = scalar_one(QQ());
	for (int k = 1; k <= 4; ++k) {
		for (int l = k + 1; l <= 4; ++l) {
			auto f = exp_flow(monomial_field(K, QQ(), k + 1, 1), one);
			auto g = exp_flow(monomial_field(K, QQ(), l + 1, 1), one);
			auto Z = log_jet(commutator(f, g));
			const TruncatedSeries& z = Z.component(0);
			int lead = k + l + 1;
			require(valuation(z) == lead, "commutator flow has the wrong valuation");
			// leading coefficient k-l for this composition order; magnitude l-k
			require(z.coefficient(Exponent{lead}) == rat(QQ(), k - l),
			        "commutator leading coefficient differs from k-l");
			TruncatedSeries chi = z - series_monomial(1, K, Exponent{lead}, rat(QQ(), k - l));
			auto v = valuation(chi);
			require(!v || *v >= k + l + 1 + (k < l ? k : l),
			        "commutator remainder is shallower than k+l+1+min(k,l)");
		}
	}
}

// --- 5: linearization ---------------------------------------------------------------

void check_linearization() {
	RandomSource rng(2005);
	auto run = [&](const std::vector<mpq_class>& eigs, int K, int count) {
		int n = static_cast<int>(eigs.size());
		std::vector<ExactScalar> diag;
		for (const mpq_class& e : eigs) diag.push_back(rat(QQ(), e));
		LinearMap A = LinearMap::diagonal(diag);
		auto Aj = linear_jet(A, K);
		for (int it = 0; it < count; ++it) {
			auto f = rng.jet_with_linear(A, K);
			auto phi = poincare_linearize(f);
			require(compose(f, phi) == compose(phi, Aj),
			        "linearizer left a nonzero conjugacy defect");
		}
		// refinement: f = A o h with h of exact tangency order k gives a
		// conjugator of the same tangency order
		for (int k = 1; k <= (n == 1 ? 3 : 2); ++k) {
			auto h = rng.tangent_jet(n, K, QQ(), k, true);
			auto phi = poincare_linearize(compose(Aj, h));
			require(tangency_order(phi) == tangency_order(h),
			        "conjugator does not inherit the tangency order of h");
		}
	};
	run({2}, 12, 100);
	run({2, 3}, 6, 30);
}

// --- 6: commutator realization ---------------------------------------------------------

void check_commutator_realization() {
	RandomSource rng(2006);
	auto run = [&](int n, int K, int count) {
		LinearMap A = LinearMap::diagonal(std::vector<ExactScalar>(n, rat(QQ(), 2)));
		auto Aj = linear_jet(A, K);
		for (int it = 0; it < count; ++it) {
			auto h = rng.tangent_jet(n, K, QQ(), 1);
			auto phi = realize_commutator(h, A);
			require(commutator(phi, Aj) == h, "commutator(phi, 2 id) differs from h");
		}
	};
	run(1, 12, 100);
	run(2, 6, 100);
}

// --- 7: normal-form invariants -----------------------------------------------------------

void check_normal_form_invariants() {
	RandomSource rng(2007);
	const int K = 12;
	for (int it = 0; it < 100; ++it) {
		const FieldPtr& f = it % 3 == 2 ? QI() : QQ();
		int val = it % 2 ? 2 : 3;
		auto X = rng.field_1d(K, f, val);
		auto nf = normal_form_1d(X);
		int k = val - 1;
		require(nf.k == k, "normal-form order differs from valuation - 1");
		require(nf.a == X.component(0).coefficient(Exponent{k + 1}),
		        "normal-form leading coefficient differs from the jet's");
		auto target = normal_field(k, nf.a * nf.rho, K) * nf.a;
		require(pushforward(nf.conjugator, X) == target,
		        "conjugator does not map X onto a X_{k, a rho}");
		auto psi = rng.tangent_jet(1, K, f, 1);
		auto nf2 = normal_form_1d(pushforward(psi, X));
		require(nf2.k == nf.k && nf2.a == nf.a && nf2.rho == nf.rho,
		        "(k, a, rho) moved under a tangent-to-identity pushforward");
	}
	// residue against brute-force conjugation sweeps
	const int K2 = 9;
	for (int it = 0; it < 10; ++it) {
		int val = it % 2 ? 2 : 3;
		auto X = rng.field_1d(K2, QQ(), val);
		int k = val - 1;
		ExactScalar a = X.component(0).coefficient(Exponent{k + 1});
		auto Y = X;
		auto one = scalar_one(QQ());
		for (int d = k + 2; d <= K2; ++d) {
			if (d == 2 * k + 1) continue;
			ExactScalar delta = Y.component(0).coefficient(Exponent{d});
			if (delta.is_zero()) continue;
			ExactScalar c = delta / (a * rat(QQ(), 2 * k + 1 - d));
			Y = pushforward(
			    exp_flow(JetVectorField({series_monomial(1, K2, Exponent{d - k}, c)}), one), Y);
		}
		ExactScalar c = Y.component(0).coefficient(Exponent{2 * k + 1});
		require(normal_form_1d(X).rho == -(c / (a * a)),
		        "residue differs from the swept resonant coefficient");
	}
}

// --- 8: averaging ------------------------------------------------------------------------------

void check_averaging() {
	RandomSource rng(2008);
	const int K = 8;
	for (long order : {2L, 4L}) {
		auto xi = root_of_unity(QI(), order);
		require(xi.has_value(), "Q(i) lacks a needed root of unity");
		for (int it = 0; it < 10; ++it) {
			auto psi = rng.tangent_jet(1, K, QI(), 1);
			auto gen = compose(invert(psi), compose(dilation(*xi, 1, K), psi));
			std::vector<JetDiffeo> H;
			for (long j = 0; j < order; ++j) H.push_back(power(gen, j));
			auto phi = linearize_finite_group(H);
			for (const JetDiffeo& h : H)
				require(compose(phi, h) == compose(linear_jet(linear_part(h), K), phi),
				        "average does not intertwine h with its linear part");
		}
	}
}

// --- 9: centralizer -----------------------------------------------------------------------------

void check_centralizer() {
	RandomSource rng(2009);
	const int K = 12;
	const std::vector<mpq_class> times{0, 1, -1, mpq_class(1, 2), 2};
	for (int k : {2, 4}) {
		auto lambda = rng.scalar(QI());
		auto X = normal_field(k, lambda, K);
		auto f0 = exp_flow(X, scalar_one(QI()));
		auto xi = root_of_unity(QI(), k);
		require(xi.has_value(), "Q(i) lacks a needed root of unity");
		for (const mpq_class& t : times) {
			for (int j = 0; j < k; ++j) {
				auto cand =
				    compose(dilation(xi->pow_int(j), 1, K), exp_flow(X, rat(QI(), t)));
				require(compose(cand, f0) == compose(f0, cand),
				        "claimed centralizer element fails to commute");
				auto res = centralizer_membership(cand, k, lambda);
				require(res.has_value(), "centralizer member was rejected");
				require(res->first == rat(QI(), t) && res->second == xi->pow_int(j),
				        "decomposition returned the wrong (t, xi)");
			}
		}
		// perturbed jets must be rejected
		int rejected = 0;
		int guard = 0;
		while (rejected < 10 && ++guard < 200) {
			auto t = rat(QI(), times[static_cast<std::size_t>(rng.integer(0, 4))]);
			auto cand = compose(dilation(xi->pow_int(rng.integer(0, k - 1)), 1, K),
			                    exp_flow(X, t));
			int d = static_cast<int>(rng.integer(2, K));
			auto pert = JetDiffeo({cand.component(0) +
			                       series_monomial(1, K, Exponent{d},
			                                       rng.nonzero_scalar(QI()))});
			if (compose(pert, f0) == compose(f0, pert)) continue;
			require(!centralizer_membership(pert, k, lambda).has_value(),
			        "a non-commuting perturbation was accepted");
			++rejected;
		}
		require(rejected == 10, "could not build enough non-commuting perturbations");
	}
}

// --- 10: free-subgroup certificate ---------------------------------------------------------------

void check_free_subgroup() {
	auto [g1, g2] = free_group_generators(24);
	auto rep = verify_no_relations({g1, g2}, 6, [](int K2) {
		auto [h1, h2] = free_group_generators(K2);
		return std::vector<JetDiffeo>{h1, h2};
	});
	require(rep.checked == 1456, "expected 1456 reduced words of length <= 6");
	require(rep.identity.empty(), "a reduced word evaluated to the identity at K=24");
	require(rep.undecided.empty(), "undecided words remain");
}

// --- 11: exact relation instance ------------------------------------------------------------------

void check_moebius_relation() {
	for (int K : {4, 8, 16}) {
		std::vector<mpq_class> c{0};
		for (int l = 1; l <= K; ++l) c.push_back(1);
		auto a = jet_1d(K, QQ(), c); // x/(1-x)
		auto b = dilation(rat(QQ(), mpq_class(1, 2)), 1, K);
		require(compose(b, compose(a, invert(b))) == power(a, 2),
		        "conjugating x/(1-x) by x/2 is not its square at K=" + std::to_string(K));
	}
}

// --- 12: separation oracle -------------------------------------------------------------------------

void check_separation_oracle() {
	RandomSource rng(2012);
	int done = 0;
	while (done < 200) {
		int n = done % 4 == 3 ? 2 : 1;
		int K = n == 1 ? 10 : 6;
		const FieldPtr& f = done % 2 ? QI() : QQ();
		JetDiffeo g = done % 3 == 0
		                  ? rng.tangent_jet(n, K, f, static_cast<int>(rng.integer(1, K - 1)),
		                                    true)
		                  : rng.invertible_jet(n, K, f);
		if (g.is_identity()) continue;
		int brute = 0;
		for (int k = 1; k <= K; ++k)
			if (project(g, k) != JetDiffeo::identity(n, k, f)) {
				brute = k;
				break;
			}
		require(brute != 0, "non-identity jet projects to the identity everywhere");
		require(separation_index(g) == brute,
		        "separation index differs from the projection scan");
		++done;
	}
}

// --- 13: square-root embedding ----------------------------------------------------------------------

void check_embedding() {
	RandomSource rng(2013);
	{
		const int K = 12;
		auto minus = dilation(rat(QQ(), -1), 1, K);
		auto minus_qi = dilation(rat(QI(), -1), 1, K);
		for (int it = 0; it < 100; ++it) {
			const FieldPtr& f = it % 2 ? QI() : QQ();
			auto u = rng.tangent_jet(1, K, f, 1);
			auto v = rng.tangent_jet(1, K, f, 1);
			require(cohopf_embed(compose(u, v)) ==
			            compose(cohopf_embed(u), cohopf_embed(v)),
			        "one-variable embedding is not a homomorphism");
			auto gu = cohopf_embed(u);
			const JetDiffeo& m = it % 2 ? minus_qi : minus;
			require(compose(gu, m) == compose(m, gu),
			        "embedded jet does not commute with x -> -x");
		}
	}
	{
		const int K = 6;
		auto E0 = series_monomial(2, K, Exponent{2, 0}, scalar_one(QQ()));
		auto E1 = series_monomial(2, K, Exponent{1, 1}, scalar_one(QQ()));
		for (int it = 0; it < 20; ++it) {
			auto u = rng.tangent_jet(2, K, QQ(), 1);
			auto v = rng.tangent_jet(2, K, QQ(), 1);
			require(cohopf_embed(compose(u, v)) ==
			            compose(cohopf_embed(u), cohopf_embed(v)),
			        "two-variable embedding is not a homomorphism");
			auto g = cohopf_embed(u);
			require(g.component(0) * g.component(0) == substitute(u.component(0), {E0, E1}) &&
			            g.component(0) * g.component(1) ==
			                substitute(u.component(1), {E0, E1}),
			        "E o g != f o E for the two-variable embedding");
		}
	}
}

// --- 14: plumbing laws ---------------------------------------------------------------------------------

void check_structure_laws() {
	RandomSource rng(2014);
	auto run = [&](const FieldPtr& fld, int count) {
		for (int it = 0; it < count; ++it) {
			int n = it % 3 == 2 ? 2 : 1;
			int K = n == 1 ? 8 : 5;
			auto f = rng.invertible_jet(n, K, fld);
			auto g = rng.invertible_jet(n, K, fld);
			auto h = rng.invertible_jet(n, K, fld);
			auto id = JetDiffeo::identity(n, K, fld);
			require(compose(compose(f, g), h) == compose(f, compose(g, h)),
			        "composition is not associative");
			require(compose(f, id) == f && compose(id, f) == f,
			        "identity law fails");
			require(compose(f, invert(f)).is_identity() &&
			            compose(invert(f), f).is_identity(),
			        "inverse law fails");
			int k = static_cast<int>(rng.integer(1, K));
			require(project(compose(f, g), k) == compose(project(f, k), project(g, k)),
			        "projection is not a homomorphism");
			require(det_linear(compose(f, g)) == det_linear(f) * det_linear(g),
			        "determinant is not multiplicative");
			if (fld->kind() == FieldKind::gaussian) {
				auto sf = coefficient_automorphism(f, CoeffMap::negate_generator);
				auto sg = coefficient_automorphism(g, CoeffMap::negate_generator);
				require(coefficient_automorphism(compose(f, g),
				                                 CoeffMap::negate_generator) ==
				            compose(sf, sg),
				        "coefficient conjugation is not a homomorphism");
				require(coefficient_automorphism(sf, CoeffMap::negate_generator) == f,
				        "coefficient conjugation is not an involution");
				require(coefficient_automorphism(invert(f),
				                                 CoeffMap::negate_generator) ==
				            invert(sf),
				        "coefficient conjugation does not respect inversion");
			}
		}
	};
	run(QI(), 200);
	run(QQ(), 40);
}

struct Check {
	const char* name;
	void (*run)();
};

const std::vector<Check>& checks() {
	static const std::vector<Check> table{
	    {"flow of x^2 d/dx matches x/(1-tx)", check_flow_closed_form},
	    {"exp and log invert each other at truncation", check_exp_log_roundtrip},
	    {"BCH series has the 1/2 and 1/12 bracket terms", check_bch_coefficients},
	    {"commutator flows: leading term and remainder depth", check_commutator_depth},
	    {"linearization solves the conjugacy equation exactly", check_linearization},
	    {"tangent jets are commutators with the dilation by 2", check_commutator_realization},
	    {"normal-form invariants and residue agree", check_normal_form_invariants},
	    {"finite cyclic groups average to their linear part", check_averaging},
	    {"centralizer members decompose into flow and torsion", check_centralizer},
	    {"no relations of length <= 6 among the free generators", check_free_subgroup},
	    {"conjugation by x/2 squares x/(1-x)", check_moebius_relation},
	    {"separation index matches the projection scan", check_separation_oracle},
	    {"square-root embedding is a homomorphism", check_embedding},
	    {"group, projection, determinant, conjugation laws", check_structure_laws},
	};
	return table;
}

} // namespace

int selftest_count() { return static_cast<int>(checks().size()); }

std::vector<std::string> selftest_names() {
	std::vector<std::string> out;
	for (const Check& c : checks()) out.emplace_back(c.name);
	return out;
}

CheckResult run_selftest(int number) {
	const auto& table = checks();
	if (number < 1 || number > static_cast<int>(table.size()))
		throw UsageError("check number out of range");
	const Check& c = table[static_cast<std::size_t>(number - 1)];
	CheckResult r{number, c.name, true, "", 0.0};
	auto t0 = std::chrono::steady_clock::now();
	try {
		c.run();
	} catch (const std::exception& e) {
		r.passed = false;
		r.detail = e.what();
	}
	r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	return r;
}

std::vector<CheckResult> run_selftests() {
	std::vector<CheckResult> out;
	for (int j = 1; j <= selftest_count(); ++j) out.push_back(run_selftest(j));
	return out;
}

} // namespace jetforge
