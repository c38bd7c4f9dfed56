#include "jetforge/cli.hpp"

#include "jetforge/expr.hpp"
#include "jetforge/io.hpp"
#include "jetforge/selftest.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <regex>

namespace jetforge {

namespace {

// "x^2 d/dx" and "(x2 d/dx1, ...)" are accepted wherever an expression is:
// the derivative markers carry no information beyond the component position.
std::string strip_derivative_markers(const std::string& text) {
	static const std::regex marker("\\bd/dx[0-9]*");
	return std::regex_replace(text, marker, "");
}

struct GlobalOpts {
	int K = 0; // 0: not given, use the per-dimension default
	std::string field_name = "Qi";
	std::string minpoly;
	bool json = false;
};

std::vector<mpq_class> parse_minpoly(const std::string& text) {
	std::vector<mpq_class> coeffs;
	std::size_t at = 0;
	while (at <= text.size()) {
		std::size_t comma = text.find(',', at);
		std::string tok = text.substr(at, comma == std::string::npos ? comma : comma - at);
		tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
		try {
			mpq_class q(tok);
			if (q.get_den() == 0) throw UsageError("--minpoly: zero denominator");
			q.canonicalize();
			coeffs.push_back(q);
		} catch (const std::invalid_argument&) {
			throw UsageError("--minpoly: '" + tok + "' is not a rational number");
		}
		if (comma == std::string::npos) break;
		at = comma + 1;
	}
	return coeffs;
}

FieldPtr make_field(const GlobalOpts& g) {
	if (!g.minpoly.empty()) return FieldDescriptor::extension(parse_minpoly(g.minpoly));
	if (g.field_name == "Q" || g.field_name == "rationals") return FieldDescriptor::rationals();
	if (g.field_name == "Qi" || g.field_name == "Q(i)" || g.field_name == "gaussian")
		return FieldDescriptor::gaussian();
	throw UsageError("--field: unknown field '" + g.field_name +
	                 "' (use Q, Qi, or --minpoly)");
}

// --K when given, else JETFORGE_DEFAULT_K, else 0 (per-dimension default).
int requested_degree(const GlobalOpts& g) {
	if (g.K > 0) return g.K;
	const char* env = std::getenv("JETFORGE_DEFAULT_K");
	if (!env || !*env) return 0;
	char* end = nullptr;
	long v = std::strtol(env, &end, 10);
	if (*end != '\0' || v < 1 || v > 1000)
		throw UsageError("JETFORGE_DEFAULT_K must be a positive integer");
	return static_cast<int>(v);
}

// The ambient dimension is the largest variable index mentioned by any
// expression argument; the truncation degree comes from --K (or the
// JETFORGE_DEFAULT_K environment variable), else 12 for one variable and 6
// otherwise.
Session make_session(const GlobalOpts& g, const std::vector<std::string>& texts) {
	int n = 1;
	for (const std::string& t : texts) n = std::max(n, scan_variable_count(t));
	int K = requested_degree(g);
	if (K == 0) K = n == 1 ? 12 : 6;
	return Session(make_field(g), n, K);
}

ExprValue eval_text(const std::string& text, Session& s) {
	return commit_value(run_script(strip_derivative_markers(text), s));
}

JetDiffeo eval_jet(const std::string& text, Session& s) { return eval_text(text, s).as_jet(); }

JetVectorField eval_field(const std::string& text, Session& s) {
	return eval_text(text, s).as_vector_field();
}

void print_line(std::ostream& out, const Json& j) { out << j.dump() << "\n"; }

void print_value(std::ostream& out, const ExprValue& v, bool json) {
	switch (v.kind()) {
	case ExprValue::Kind::scalar:
		if (json)
			print_line(out, Json(render_scalar(v.scalar())));
		else
			out << render_scalar(v.scalar()) << "\n";
		return;
	case ExprValue::Kind::jet:
		if (json)
			print_line(out, jet_to_json(v.jet()));
		else
			out << render_jet(v.jet()) << "\n";
		return;
	case ExprValue::Kind::vectorfield:
		if (json)
			print_line(out, vector_field_to_json(v.vector_field()));
		else
			out << render_vector_field(v.vector_field()) << "\n";
		return;
	default:
		throw UsageError("expression did not evaluate to a printable value");
	}
}

void print_jet(std::ostream& out, const JetDiffeo& f, bool json) {
	print_value(out, ExprValue(f), json);
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_eval(const GlobalOpts& g, const std::vector<std::string>& exprs, std::ostream& out) {
	Session s = make_session(g, exprs);
	std::string script;
	for (const std::string& e : exprs) {
		if (!script.empty()) script += "; ";
		script += e;
	}
	print_value(out, eval_text(script, s), g.json);
	return 0;
}

int cmd_linearize(const GlobalOpts& g, const std::string& expr, bool resonances,
                  std::ostream& out) {
	Session s = make_session(g, {expr});
	JetDiffeo f = eval_jet(expr, s);
	if (resonances) {
		LinearMap L = linear_part(f);
		if (!L.is_diagonal()) throw MathError("the linear part is not diagonal");
		std::vector<ExactScalar> eigs;
		for (int i = 0; i < L.dim(); ++i) eigs.push_back(L.at(i, i));
		ResonanceReport rep = resonance_check(eigs, f.max_degree());
		if (g.json) {
			print_line(out, resonance_report_to_json(rep));
			return 0;
		}
		out << "eigenvalues:";
		for (std::size_t i = 0; i < eigs.size(); ++i)
			out << (i ? ", " : " ") << render_scalar(eigs[i]);
		out << "\n";
		out << "max degree: " << rep.max_degree << "\n";
		out << "violations: " << rep.violations.size() << "\n";
		for (const ResonanceViolation& v : rep.violations) {
			out << "exp=(";
			for (std::size_t i = 0; i < v.p.size(); ++i) out << (i ? "," : "") << v.p[i];
			out << ") target=" << v.target << "\n";
		}
		return 0;
	}
	print_jet(out, poincare_linearize(f), g.json);
	return 0;
}

int cmd_normal_form(const GlobalOpts& g, const std::string& expr, std::ostream& out) {
	Session s = make_session(g, {expr});
	NormalForm1D nf = normal_form_1d(eval_field(expr, s));
	if (g.json) {
		print_line(out, normal_form_to_json(nf));
		return 0;
	}
	out << "k=" << nf.k << " a=" << render_scalar(nf.a) << " rho=" << render_scalar(nf.rho)
	    << "\n";
	out << "conjugator: " << render_jet(nf.conjugator) << "\n";
	return 0;
}

int cmd_conjugate(const GlobalOpts& g, const std::string& lhs, const std::string& rhs,
                  bool allow_linear, std::ostream& out) {
	Session s = make_session(g, {lhs, rhs});
	auto phi = decide_conjugate_1d(eval_field(lhs, s), eval_field(rhs, s), allow_linear);
	if (g.json) {
		Json j;
		j["conjugate"] = phi.has_value();
		if (phi) j["conjugator"] = jet_to_json(*phi);
		print_line(out, j);
		return 0;
	}
	if (!phi) {
		out << "not conjugate\n";
		return 0;
	}
	out << "conjugate\n";
	out << "conjugator: " << render_jet(*phi) << "\n";
	return 0;
}

int cmd_centralizer(const GlobalOpts& g, const std::string& expr, int k,
                    const std::string& lambda_text, std::ostream& out) {
	Session s = make_session(g, {expr});
	ExactScalar lambda = parse_scalar(s.field(), lambda_text);
	auto res = centralizer_membership(eval_jet(expr, s), k, lambda);
	if (g.json) {
		Json j;
		j["member"] = res.has_value();
		if (res) {
			j["t"] = render_scalar(res->first);
			j["xi"] = render_scalar(res->second);
		}
		print_line(out, j);
		return 0;
	}
	if (!res)
		out << "not in the centralizer\n";
	else
		out << "t=" << render_scalar(res->first) << " xi=" << render_scalar(res->second)
		    << "\n";
	return 0;
}

int cmd_average(const GlobalOpts& g, const std::vector<std::string>& exprs, std::ostream& out) {
	Session s = make_session(g, exprs);
	std::vector<JetDiffeo> H;
	auto add = [&H](const JetDiffeo& f) {
		if (std::find(H.begin(), H.end(), f) == H.end()) {
			if (H.size() >= 512)
				throw UsageError("the generated group has more than 512 elements");
			H.push_back(f);
			return true;
		}
		return false;
	};
	for (const std::string& e : exprs) add(eval_jet(e, s));
	add(JetDiffeo::identity(H.front().nvars(), H.front().max_degree(), H.front().field()));
	bool grew = true;
	while (grew) {
		grew = false;
		std::size_t sz = H.size();
		for (std::size_t i = 0; i < sz; ++i) {
			if (add(invert(H[i]))) grew = true;
			for (std::size_t j = 0; j < sz; ++j)
				if (add(compose(H[i], H[j]))) grew = true;
		}
	}
	print_jet(out, linearize_finite_group(H), g.json);
	return 0;
}

int cmd_embed(const GlobalOpts& g, const std::string& expr, std::ostream& out) {
	Session s = make_session(g, {expr});
	print_jet(out, cohopf_embed(eval_jet(expr, s)), g.json);
	return 0;
}

int cmd_separate(const GlobalOpts& g, const std::string& expr, std::ostream& out) {
	Session s = make_session(g, {expr});
	out << separation_index(eval_jet(expr, s)) << "\n";
	return 0;
}

int cmd_words_verify(const GlobalOpts& g, int max_len, bool free_gens,
                     const std::vector<std::string>& gen_exprs, std::ostream& out) {
	if (free_gens == !gen_exprs.empty())
		throw UsageError("give either --free-gens or explicit generator expressions");
	Session s = make_session(g, gen_exprs);
	int K = s.default_degree();
	WordReport rep;
	if (free_gens) {
		auto [g1, g2] = free_group_generators(K);
		rep = verify_no_relations({g1, g2}, max_len, [](int K2) {
			auto [h1, h2] = free_group_generators(K2);
			return std::vector<JetDiffeo>{h1, h2};
		});
	} else {
		std::vector<JetDiffeo> gens;
		for (const std::string& e : gen_exprs) gens.push_back(eval_jet(e, s));
		// the refine hook re-evaluates the same expressions at doubled degree
		auto refine = [&](int K2) {
			Session s2(s.field(), s.nvars(), K2);
			std::vector<JetDiffeo> fine;
			for (const std::string& e : gen_exprs) fine.push_back(eval_jet(e, s2));
			return fine;
		};
		rep = verify_no_relations(gens, max_len, refine);
	}
	if (g.json) {
		print_line(out, word_report_to_json(rep));
		return 0;
	}
	out << "checked=" << rep.checked << " identity=" << rep.identity.size()
	    << " undecided=" << rep.undecided.size() << "\n";
	for (const GroupWord& w : rep.identity) out << "identity: " << render_word(w) << "\n";
	for (const GroupWord& w : rep.undecided) out << "undecided: " << render_word(w) << "\n";
	return 0;
}

int cmd_relation(const GlobalOpts& g, const std::string& lhs, const std::string& rhs,
                 const std::vector<std::string>& gen_exprs, std::ostream& out) {
	Session s = make_session(g, gen_exprs);
	std::vector<JetDiffeo> gens;
	for (const std::string& e : gen_exprs) gens.push_back(eval_jet(e, s));
	bool holds = check_relation(gens, parse_word(lhs), parse_word(rhs));
	if (g.json) {
		Json j;
		j["holds"] = holds;
		print_line(out, j);
		return 0;
	}
	out << (holds ? "holds" : "fails") << "\n";
	return 0;
}

int cmd_selftest(const GlobalOpts& g, int only, std::ostream& out) {
	std::vector<int> numbers;
	if (only > 0) {
		if (only > selftest_count()) throw UsageError("--only: no such check");
		numbers.push_back(only);
	} else {
		for (int j = 1; j <= selftest_count(); ++j) numbers.push_back(j);
	}
	Json all = Json::array();
	int passed = 0;
	double total = 0.0;
	for (int j : numbers) {
		CheckResult r = run_selftest(j);
		total += r.seconds;
		if (r.passed) ++passed;
		if (g.json) {
			Json one;
			one["number"] = r.number;
			one["name"] = r.name;
			one["passed"] = r.passed;
			one["seconds"] = r.seconds;
			if (!r.passed) one["detail"] = r.detail;
			all.push_back(std::move(one));
			continue;
		}
		char line[160];
		std::snprintf(line, sizeof line, "[%s] %2d %-55s (%.2fs)",
		              r.passed ? "PASS" : "FAIL", r.number, r.name.c_str(), r.seconds);
		out << line << "\n";
		if (!r.passed) out << "         " << r.detail << "\n";
	}
	if (g.json) {
		print_line(out, all);
	} else {
		char line[96];
		std::snprintf(line, sizeof line, "%d/%zu checks passed (%.2fs total)", passed,
		              numbers.size(), total);
		out << line << "\n";
	}
	return passed == static_cast<int>(numbers.size()) ? 0 : 1;
}

} // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
	CLI::App app{"exact calculator for jet groups of formal diffeomorphisms", "jetforge"};
	app.fallthrough();
	app.require_subcommand(1);

	GlobalOpts g;
	app.add_option("--K", g.K,
	               "truncation degree (default: JETFORGE_DEFAULT_K if set, else 12 for "
	               "one variable, 6 otherwise)")
	    ->check(CLI::PositiveNumber);
	app.add_option("--field", g.field_name, "coefficient field: Q or Qi (default Qi)");
	app.add_option("--minpoly", g.minpoly,
	               "monic minimal polynomial c0,c1,...,1; selects the field Q[t]/(m)");
	app.add_flag("--json", g.json, "emit JSON instead of text");

	auto* c_eval = app.add_subcommand("eval", "evaluate expressions (';' separates statements)");
	std::vector<std::string> eval_exprs;
	c_eval->add_option("expr", eval_exprs, "expressions; 'name = expr' binds")->required();

	auto* c_lin = app.add_subcommand("linearize", "conjugate a jet to its linear part");
	std::string lin_expr;
	bool lin_res = false;
	c_lin->add_option("jet", lin_expr, "jet expression")->required();
	c_lin->add_flag("--resonances", lin_res, "report eigenvalue resonances instead");

	auto* c_nf = app.add_subcommand("normal-form",
	                                "orbital invariants (k, a, rho) of a one-variable field");
	std::string nf_expr;
	c_nf->add_option("field", nf_expr, "vector-field expression")->required();

	auto* c_conj = app.add_subcommand("conjugate", "decide conjugacy of two one-variable fields");
	std::string conj_lhs, conj_rhs;
	bool conj_linear = false;
	c_conj->add_option("lhs", conj_lhs, "vector-field expression")->required();
	c_conj->add_option("rhs", conj_rhs, "vector-field expression")->required();
	c_conj->add_flag("--allow-linear", conj_linear, "allow a linear rescaling x -> mu x");

	auto* c_cent = app.add_subcommand(
	    "centralizer", "decompose a centralizer member of exp X_{k,lambda} as (xi x) o flow");
	std::string cent_expr, cent_lambda = "0";
	int cent_k = 0;
	c_cent->add_option("jet", cent_expr, "jet expression")->required();
	c_cent->add_option("--k", cent_k, "order k of the normal field")
	    ->required()
	    ->check(CLI::PositiveNumber);
	c_cent->add_option("--lambda", cent_lambda, "residue parameter (scalar, default 0)");

	auto* c_avg = app.add_subcommand("average",
	                                 "linearize the finite group generated by the given jets");
	std::vector<std::string> avg_exprs;
	c_avg->add_option("jets", avg_exprs, "generator jet expressions")->required();

	auto* c_embed = app.add_subcommand("embed",
	                                   "square-root embedding g with E o g = f o E");
	std::string embed_expr;
	c_embed->add_option("jet", embed_expr, "tangent-to-identity jet expression")->required();

	auto* c_sep = app.add_subcommand("separate",
	                                 "smallest degree at which a jet differs from the identity");
	std::string sep_expr;
	c_sep->add_option("jet", sep_expr, "jet expression")->required();

	auto* c_words = app.add_subcommand("words", "free-group word checks");
	c_words->require_subcommand(1);
	auto* c_wv = c_words->add_subcommand(
	    "verify", "evaluate every reduced word up to a length bound");
	int wv_max_len = 0;
	bool wv_free = false;
	std::vector<std::string> wv_gens;
	c_wv->add_option("--max-len", wv_max_len, "maximum word length")
	    ->required()
	    ->check(CLI::PositiveNumber);
	c_wv->add_flag("--free-gens", wv_free, "use the built-in free generator pair");
	c_wv->add_option("gens", wv_gens, "generator jet expressions");

	auto* c_rel = app.add_subcommand("relation", "check one word relation between jets");
	std::string rel_lhs, rel_rhs;
	std::vector<std::string> rel_gens;
	c_rel->add_option("--lhs", rel_lhs, "left word, e.g. \"g0 g1^-1\"")->required();
	c_rel->add_option("--rhs", rel_rhs, "right word (default: the empty word)");
	c_rel->add_option("gens", rel_gens, "generator jet expressions")->required();

	auto* c_self = app.add_subcommand("selftest", "run the built-in verification suite");
	int self_only = 0;
	c_self->add_option("--only", self_only, "run a single check by number")
	    ->check(CLI::PositiveNumber);

	try {
		std::vector<std::string> rev(argv.rbegin(), argv.rend());
		app.parse(rev);
	} catch (const CLI::ParseError& e) {
		if (e.get_exit_code() == 0) return app.exit(e, out, err);
		err << "error: " << e.what() << "\n";
		return 2;
	}

	try {
		if (*c_eval) return cmd_eval(g, eval_exprs, out);
		if (*c_lin) return cmd_linearize(g, lin_expr, lin_res, out);
		if (*c_nf) return cmd_normal_form(g, nf_expr, out);
		if (*c_conj) return cmd_conjugate(g, conj_lhs, conj_rhs, conj_linear, out);
		if (*c_cent) return cmd_centralizer(g, cent_expr, cent_k, cent_lambda, out);
		if (*c_avg) return cmd_average(g, avg_exprs, out);
		if (*c_embed) return cmd_embed(g, embed_expr, out);
		if (*c_sep) return cmd_separate(g, sep_expr, out);
		if (*c_words) return cmd_words_verify(g, wv_max_len, wv_free, wv_gens, out);
		if (*c_rel) return cmd_relation(g, rel_lhs, rel_rhs, rel_gens, out);
		if (*c_self) return cmd_selftest(g, self_only, out);
	} catch (const UsageError& e) {
		err << "error: " << e.what() << "\n";
		return 2;
	} catch (const MathError& e) {
		err << "error: " << e.what() << "\n";
		return 1;
	}
	return 0;
}

} // namespace jetforge
