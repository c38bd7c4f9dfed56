#include "jetforge/classify.hpp"
#include "jetforge/error.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace jetforge {

namespace {

// All exponent vectors of total degree d in n variables, lexicographically
// ascending.
void each_exponent(int n, int d, Exponent& p, int pos, const std::function<void(const Exponent&)>& fn) {
	if (pos == n - 1) {
		p[pos] = d;
		fn(p);
		return;
	}
	for (int v = 0; v <= d; ++v) {
		p[pos] = v;
		each_exponent(n, d - v, p, pos + 1, fn);
	}
}

ExactScalar eigen_power(const std::vector<ExactScalar>& eigs, const Exponent& p) {
	ExactScalar r = scalar_one(eigs.front().field());
	for (std::size_t i = 0; i < eigs.size(); ++i)
		if (p[i] != 0) r = r * eigs[i].pow_int(p[i]);
	return r;
}

std::string violation_text(const ResonanceViolation& v) {
	std::ostringstream os;
	os << "p=(";
	for (std::size_t i = 0; i < v.p.size(); ++i) {
		if (i) os << ",";
		os << v.p[i];
	}
	os << "), j=" << v.target;
	return os.str();
}

std::vector<ExactScalar> diagonal_of(const LinearMap& L) {
	std::vector<ExactScalar> d;
	d.reserve(L.dim());
	for (int i = 0; i < L.dim(); ++i) d.push_back(L.at(i, i));
	return d;
}

// First relation lambda^p = lambda_j with 2 <= |p| <= max_degree, if any.
std::optional<ResonanceViolation> first_higher_violation(const std::vector<ExactScalar>& eigs,
                                                         int max_degree) {
	if (max_degree < 2) return std::nullopt;
	for (const auto& v : resonance_check(eigs, max_degree).violations)
		if (total_degree(v.p) >= 2) return v;
	return std::nullopt;
}

} // namespace

ResonanceReport resonance_check(const std::vector<ExactScalar>& eigs, int max_degree) {
	if (eigs.empty()) throw UsageError("at least one eigenvalue is required");
	if (max_degree < 2) throw UsageError("resonance scan needs max_degree >= 2");
	for (const auto& e : eigs)
		if (e.is_zero()) throw MathError("zero eigenvalue");

	const int n = static_cast<int>(eigs.size());
	ResonanceReport rep;
	rep.eigenvalues = eigs;
	rep.max_degree = max_degree;

	// |p| = 1: repeated eigenvalues lambda_i = lambda_j, i != j.
	for (int i = 0; i < n; ++i) {
		for (int j = 0; j < n; ++j) {
			if (i == j || !(eigs[i] == eigs[j])) continue;
			Exponent p(n, 0);
			p[i] = 1;
			rep.violations.push_back({p, j + 1});
		}
	}
	std::sort(rep.violations.begin(), rep.violations.end(),
	          [](const ResonanceViolation& a, const ResonanceViolation& b) {
		          if (a.p != b.p)
			          return std::lexicographical_compare(a.p.begin(), a.p.end(),
			                                              b.p.begin(), b.p.end());
		          return a.target < b.target;
	          });

	// Degree-ascending, lex-ascending scan is already in report order.
	for (int d = 2; d <= max_degree; ++d) {
		Exponent p(n, 0);
		each_exponent(n, d, p, 0, [&](const Exponent& q) {
			ExactScalar lp = eigen_power(eigs, q);
			for (int j = 0; j < n; ++j)
				if (lp == eigs[j]) rep.violations.push_back({q, j + 1});
		});
	}
	return rep;
}

JetDiffeo poincare_linearize(const JetDiffeo& f) {
	const int n = f.nvars();
	const int K = f.max_degree();
	LinearMap L = linear_part(f);
	if (!L.is_diagonal()) throw MathError("linear part is not diagonal");
	std::vector<ExactScalar> eigs = diagonal_of(L);

	// Only |p| >= 2 relations make a homological denominator vanish;
	// repeated eigenvalues are harmless.
	if (auto v = first_higher_violation(eigs, K))
		throw MathError("resonance violation: lambda^p = lambda_j at " + violation_text(*v));

	JetDiffeo A = linear_jet(L, K);
	JetDiffeo phi = JetDiffeo::identity(n, K, f.field());
	for (int d = 2; d <= K; ++d) {
		// With phi correct below degree d, adding c x^p to component j
		// changes the degree-d defect of f o phi - phi o A by
		// c (lambda_j - lambda^p) x^p.
		JetDiffeo lhs = compose(f, phi);
		JetDiffeo rhs = compose(phi, A);
		std::vector<TruncatedSeries> comps = phi.components();
		bool changed = false;
		for (int j = 0; j < n; ++j) {
			TruncatedSeries defect =
			    homogeneous_part(lhs.component(j) - rhs.component(j), d);
			for (const auto& [p, c] : defect.terms()) {
				ExactScalar denom = eigen_power(eigs, p) - eigs[j];
				comps[j] = comps[j] + series_monomial(n, K, p, c / denom);
				changed = true;
			}
		}
		if (changed) phi = JetDiffeo(std::move(comps));
	}
	return phi;
}

JetDiffeo realize_commutator(const JetDiffeo& h, const LinearMap& A) {
	auto tord = tangency_order(h);
	if (tord && *tord == 0)
		throw MathError("the jet must be tangent to the identity");
	if (!A.is_diagonal()) throw MathError("linear part is not diagonal");
	const int K = h.max_degree();
	// h o A has linear part A, and phi A phi^-1 = h o A gives
	// phi A phi^-1 A^-1 = h.
	JetDiffeo Aj = linear_jet(A, K);
	return poincare_linearize(compose(h, Aj));
}

NormalForm1D normal_form_1d(const JetVectorField& X) {
	if (X.nvars() != 1) throw MathError("normal form requires one variable");
	const int K = X.max_degree();
	auto val = field_valuation(X);
	if (!val || *val < 2 || *val > K)
		throw MathError("normal form requires a field of valuation >= 2");
	const int k = *val - 1;
	if (K < 2 * k + 1)
		throw MathError("truncation degree too small for the residue (needs K >= 2k+1)");
	const FieldPtr& F = X.field();
	const TruncatedSeries& s = X.component(0);
	ExactScalar a = s.coefficient(Exponent{k + 1});

	// X = a x^{k+1} w(x) with w(0) = 1, so 1/X = a^{-1} x^{-k-1} w^{-1}
	// and rho = [x^{-1}](1/X) = [x^k](w^{-1}) / a.  w^{-1} is exact to
	// degree K-k-1 >= k.
	TruncatedSeries w = divide_by_monomial(s, Exponent{k + 1}) * a.inverse();
	TruncatedSeries winv = binomial_power(w, mpq_class(-1));
	ExactScalar rho = winv.coefficient(Exponent{k}) / a;

	// Sweep away every coefficient the normal form does not carry.  A step
	// exp(c x^{d-k} d/dx) adds -c a (2k+1-d) x^d at degree d and touches
	// nothing below, so each non-resonant degree is killed once; degree
	// 2k+1 is the sweep's resonant slot and already agrees because rho is
	// preserved by every exact pushforward.
	JetVectorField target = normal_field(k, a * rho, K) * a;
	JetVectorField Y = X;
	JetDiffeo conj = JetDiffeo::identity(1, K, F);
	ExactScalar one = scalar_one(F);
	for (int d = k + 2; d <= K; ++d) {
		if (d == 2 * k + 1) continue;
		ExactScalar delta =
		    Y.component(0).coefficient(Exponent{d}) - target.component(0).coefficient(Exponent{d});
		if (delta.is_zero()) continue;
		ExactScalar c = delta / (a * scalar_from_rational(F, mpq_class(2 * k + 1 - d)));
		JetDiffeo step =
		    exp_flow(JetVectorField({series_monomial(1, K, Exponent{d - k}, c)}), one);
		Y = pushforward(step, Y);
		conj = compose(step, conj);
	}
	return {k, a, rho, conj};
}

std::optional<JetDiffeo> decide_conjugate_1d(const JetVectorField& X,
                                             const JetVectorField& Y,
                                             bool allow_linear) {
	NormalForm1D nx = normal_form_1d(X);
	NormalForm1D ny = normal_form_1d(Y);
	if (nx.k != ny.k || nx.rho != ny.rho) return std::nullopt;
	// phi_* X = a_X X_{k, a_X rho} = (after an optional homothety) the
	// normal form of Y, then pull back through Y's conjugator.
	if (nx.a == ny.a)
		return compose(invert(ny.conjugator), nx.conjugator);
	if (!allow_linear) return std::nullopt;
	// x -> mu x rescales the leading coefficient by mu^{-k}.
	auto mu = kth_root(nx.a / ny.a, nx.k);
	if (!mu) return std::nullopt;
	JetDiffeo lin = linear_jet(LinearMap::diagonal({*mu}), X.max_degree());
	return compose(invert(ny.conjugator), compose(lin, nx.conjugator));
}

std::optional<std::pair<ExactScalar, ExactScalar>>
centralizer_membership(const JetDiffeo& f, int k, const ExactScalar& lambda) {
	if (f.nvars() != 1) throw MathError("centralizer decomposition requires one variable");
	if (k < 1) throw UsageError("k must be positive");
	if (!same_field(f.field(), lambda.field()))
		throw UsageError("lambda lives in a different field");
	const int K = f.max_degree();
	const FieldPtr& F = f.field();
	ExactScalar one = scalar_one(F);

	JetVectorField X = normal_field(k, lambda, K);
	JetDiffeo g = exp_flow(X, one);
	if (compose(f, g) != compose(g, f)) return std::nullopt;

	// Membership forces f = (xi x) o exp(t X): conjugation preserves the
	// leading coefficient of X up to xi^{-k}, so xi^k = 1.
	ExactScalar xi = f.component(0).coefficient(Exponent{1});
	if (xi.pow_int(k) != one)
		throw MathError("commutes at this truncation but is not decomposable: "
		                "the linear coefficient is not a k-th root of unity");
	JetDiffeo h = compose(linear_jet(LinearMap::diagonal({xi.inverse()}), K), f);
	ExactScalar t = K >= k + 1 ? h.component(0).coefficient(Exponent{k + 1}) : scalar_zero(F);
	if (h != exp_flow(X, t))
		throw MathError("commutes at this truncation but is not decomposable: "
		                "not on the flow line (truncation too small?)");
	return std::make_pair(t, xi);
}

JetDiffeo linearize_finite_group(const std::vector<JetDiffeo>& H) {
	if (H.empty()) throw UsageError("the group must be nonempty");
	const int n = H.front().nvars();
	const int K = H.front().max_degree();
	const FieldPtr& F = H.front().field();
	const auto member = [&](const JetDiffeo& g) {
		for (const auto& h : H)
			if (h == g) return true;
		return false;
	};
	for (std::size_t i = 0; i < H.size(); ++i)
		for (std::size_t j = i + 1; j < H.size(); ++j)
			if (H[i] == H[j]) throw MathError("duplicate group elements");
	for (const auto& g : H) {
		if (!member(invert(g))) throw MathError("not a group at this truncation: missing an inverse");
		for (const auto& h : H)
			if (!member(compose(g, h)))
				throw MathError("not a group at this truncation: not closed under composition");
	}

	// phi = (1/#H) sum_h (Dh(0))^-1 o h; then phi o h = Dh(0) o phi for
	// every h (the sum is a bijection of H).
	std::vector<TruncatedSeries> acc(n, series_zero(n, K, F));
	for (const auto& h : H) {
		JetDiffeo u = compose(linear_jet(linear_part(h).inverse(), K), h);
		for (int j = 0; j < n; ++j) acc[j] = acc[j] + u.component(j);
	}
	ExactScalar scale = scalar_from_rational(F, mpq_class(1, static_cast<long>(H.size())));
	for (auto& sj : acc) sj = sj * scale;
	return JetDiffeo(std::move(acc));
}

JetDiffeo cohopf_embed(const JetDiffeo& f) {
	if (!linear_part(f).is_identity())
		throw MathError("the embedding is defined on jets tangent to the identity");
	if (f.is_identity()) return f;
	const int n = f.nvars();
	const int K = f.max_degree();
	const int K2 = 2 * K;
	const FieldPtr& F = f.field();
	ExactScalar one = scalar_one(F);

	// E doubles total degrees, so f o E is exact to degree 2K from f at K
	// and the degree-K solution of E o g = f o E needs nothing beyond.
	std::vector<TruncatedSeries> E;
	Exponent sq(n, 0);
	sq[0] = 2;
	E.push_back(series_monomial(n, K2, sq, one));
	for (int j = 1; j < n; ++j) {
		Exponent m(n, 0);
		m[0] = 1;
		m[j] = 1;
		E.push_back(series_monomial(n, K2, m, one));
	}
	std::vector<TruncatedSeries> fE;
	fE.reserve(n);
	for (int j = 0; j < n; ++j)
		fE.push_back(substitute(lift_degree(f.component(j), K2), E));

	// g_1 = x_1 u^{1/2} with u = (f o E)_1 / x_1^2, and
	// g_j = ((f o E)_j / x_1) u^{-1/2} for j >= 2.
	TruncatedSeries u = divide_by_monomial(fE[0], sq);
	TruncatedSeries root = binomial_power(u, mpq_class(1, 2));
	std::vector<TruncatedSeries> g;
	Exponent x1(n, 0);
	x1[0] = 1;
	g.push_back(retruncate(series_monomial(n, K2 - 2, x1, one) * root, K));
	if (n > 1) {
		TruncatedSeries invroot = binomial_power(u, mpq_class(-1, 2));
		for (int j = 1; j < n; ++j) {
			TruncatedSeries t = retruncate(divide_by_monomial(fE[j], x1), K2 - 2);
			g.push_back(retruncate(t * invroot, K));
		}
	}
	return JetDiffeo(std::move(g));
}

JetDiffeo coefficient_automorphism(const JetDiffeo& f, CoeffMap tau) {
	if (!coeff_map_valid(f.field(), tau))
		throw MathError("the map is not an automorphism of the active field");
	std::vector<TruncatedSeries> comps;
	comps.reserve(f.nvars());
	for (const auto& s : f.components()) {
		TermMap out;
		for (const auto& [p, c] : s.terms()) out.emplace(p, apply_coeff_map(c, tau));
		comps.emplace_back(s.nvars(), s.max_degree(), s.field(), std::move(out));
	}
	return JetDiffeo(std::move(comps));
}

} // namespace jetforge
