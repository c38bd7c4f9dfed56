#include "jetforge/io.hpp"

#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace jetforge {

namespace {

std::string var_name(int nvars, int i) {
	return nvars == 1 ? "x" : "x" + std::to_string(i + 1);
}

std::string monomial_text(const Exponent& e, int nvars) {
	std::string out;
	for (int i = 0; i < nvars; ++i) {
		if (e[i] == 0) continue;
		if (!out.empty()) out += "*";
		out += var_name(nvars, i);
		if (e[i] > 1) out += "^" + std::to_string(e[i]);
	}
	return out;
}

// True when the scalar's text is a sum and needs parentheses inside a term.
bool needs_parens(const std::string& s) {
	for (std::size_t i = 1; i < s.size(); ++i)
		if (s[i] == '+' || s[i] == '-') return true;
	return false;
}

std::string term_text(const Exponent& e, const ExactScalar& c, int nvars) {
	std::string mono = monomial_text(e, nvars);
	std::string coeff = render_scalar(c);
	if (mono.empty()) return coeff;
	if (c.is_one()) return mono;
	if ((-c).is_one()) return "-" + mono;
	if (needs_parens(coeff)) coeff = "(" + coeff + ")";
	return coeff + "*" + mono;
}

// ---- text parsing ---------------------------------------------------------

struct Scanner {
	const std::string& text;
	std::size_t pos = 0;

	void skip_ws() {
		while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
	}
	char peek() {
		skip_ws();
		return pos < text.size() ? text[pos] : '\0';
	}
	bool accept(char c) {
		if (peek() == c) {
			++pos;
			return true;
		}
		return false;
	}
	void expect(char c, const char* what) {
		if (!accept(c)) throw SyntaxError(std::string("expected ") + what, pos);
	}
	bool done() { return peek() == '\0'; }

	long digits(const char* what) {
		skip_ws();
		std::size_t start = pos;
		while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
		if (pos == start) throw SyntaxError(std::string("expected ") + what, start);
		long v = 0;
		for (std::size_t i = start; i < pos; ++i) {
			v = v * 10 + (text[i] - '0');
			if (v > 1000000) throw SyntaxError("number too large", start);
		}
		return v;
	}
};

bool is_var_start(char c) { return c == 'x' || c == 'y' || c == 'z'; }

// Variable factor: x, y, z, or xN.  Returns the 0-based index.
int parse_var(Scanner& sc, int nvars) {
	char c = sc.peek();
	std::size_t at = sc.pos;
	int index;
	if (c == 'y' || c == 'z') {
		if (nvars > 3) throw SyntaxError("alias variables need at most three variables", at);
		++sc.pos;
		index = c == 'y' ? 2 : 3;
	} else {
		sc.expect('x', "a variable");
		index = 1;
		if (sc.pos < sc.text.size() && std::isdigit(static_cast<unsigned char>(sc.text[sc.pos])))
			index = static_cast<int>(sc.digits("a variable index"));
	}
	if (index < 1 || index > nvars) throw SyntaxError("variable index out of range", at);
	return index - 1;
}

// Unparenthesized coefficient: a single signless scalar atom such as "3/4",
// "2i", "t^2", "i".  Sums must be parenthesized.
ExactScalar parse_coeff_atom(Scanner& sc, const FieldPtr& field) {
	std::size_t start = sc.pos;
	const std::string sym = field->generator_symbol();
	auto is_sym = [&](char c) { return !sym.empty() && c == sym[0]; };
	std::size_t p = sc.pos;
	bool after_sym = false;
	while (p < sc.text.size()) {
		char c = sc.text[p];
		if (std::isdigit(static_cast<unsigned char>(c)) || c == '/') {
			after_sym = false;
			++p;
		} else if (is_sym(c)) {
			after_sym = true;
			++p;
		} else if (c == '^' && after_sym) {
			++p;
			while (p < sc.text.size() && std::isdigit(static_cast<unsigned char>(sc.text[p]))) ++p;
			after_sym = false;
		} else {
			break;
		}
	}
	std::string atom = sc.text.substr(start, p - start);
	try {
		ExactScalar v = parse_scalar(field, atom);
		sc.pos = p;
		return v;
	} catch (const SyntaxError& e) {
		throw SyntaxError("bad coefficient", start + e.position());
	}
}

ExactScalar parse_coeff_parens(Scanner& sc, const FieldPtr& field) {
	std::size_t open = sc.pos;
	sc.expect('(', "'('");
	std::size_t start = sc.pos;
	std::size_t close = sc.text.find(')', start);
	if (close == std::string::npos) throw SyntaxError("unbalanced parenthesis", open);
	std::string inside = sc.text.substr(start, close - start);
	try {
		ExactScalar v = parse_scalar(field, inside);
		sc.pos = close + 1;
		return v;
	} catch (const SyntaxError& e) {
		throw SyntaxError("bad coefficient", start + e.position());
	}
}

// One series in place; stops before any character that cannot extend a sum
// of terms (',', ')', 'd' of a derivative marker, end of text).
TruncatedSeries parse_series_at(Scanner& sc, int nvars, int max_degree, const FieldPtr& field) {
	TermMap terms;
	bool negate = false;
	if (sc.accept('-')) negate = true;
	for (;;) {
		char c = sc.peek();
		std::size_t term_at = sc.pos;
		ExactScalar coeff = scalar_one(field);
		bool have_coeff = false;
		if (std::isdigit(static_cast<unsigned char>(c))) {
			coeff = parse_coeff_atom(sc, field);
			have_coeff = true;
		} else if (c == '(') {
			coeff = parse_coeff_parens(sc, field);
			have_coeff = true;
		} else if (!field->generator_symbol().empty() && c == field->generator_symbol()[0]) {
			coeff = parse_coeff_atom(sc, field);
			have_coeff = true;
		}
		Exponent e(nvars, 0);
		bool have_mono = false;
		bool star = have_coeff && sc.accept('*');
		if (star && !is_var_start(sc.peek()))
			throw SyntaxError("expected a monomial after '*'", sc.pos);
		if (is_var_start(sc.peek())) {
			have_mono = true;
			for (;;) {
				int idx = parse_var(sc, nvars);
				int power = 1;
				if (sc.accept('^')) power = static_cast<int>(sc.digits("an exponent"));
				e[idx] += power;
				if (sc.accept('*')) continue;
				if (is_var_start(sc.peek())) continue;
				break;
			}
		}
		if (!have_coeff && !have_mono) throw SyntaxError("expected a term", sc.pos);
		if (total_degree(e) > max_degree)
			throw SyntaxError("term degree exceeds the truncation degree", term_at);
		if (negate) coeff = -coeff;
		if (!coeff.is_zero()) {
			auto it = terms.find(e);
			if (it == terms.end()) {
				terms.emplace(std::move(e), coeff);
			} else {
				it->second = it->second + coeff;
				if (it->second.is_zero()) terms.erase(it);
			}
		}
		if (sc.accept('+')) {
			negate = false;
		} else if (sc.accept('-')) {
			negate = true;
		} else {
			break;
		}
	}
	return TruncatedSeries(nvars, max_degree, field, std::move(terms));
}

// Optional "d/dxN" marker; the index is ignored.
void skip_derivative_marker(Scanner& sc) {
	if (sc.peek() != 'd') return;
	std::size_t at = sc.pos;
	++sc.pos;
	sc.expect('/', "'/' in the derivative marker");
	if (sc.peek() != 'd') throw SyntaxError("expected a derivative marker", at);
	++sc.pos;
	char v = sc.peek();
	if (!is_var_start(v)) throw SyntaxError("expected a variable in the derivative marker", sc.pos);
	++sc.pos;
	while (sc.pos < sc.text.size() && std::isdigit(static_cast<unsigned char>(sc.text[sc.pos]))) ++sc.pos;
}

std::vector<TruncatedSeries> parse_components(const std::string& text, int nvars, int max_degree,
                                              const FieldPtr& field, bool derivative_markers) {
	if (nvars < 1) throw UsageError("at least one variable is required");
	Scanner sc{text};
	std::vector<TruncatedSeries> comps;
	auto one_component = [&] {
		comps.push_back(parse_series_at(sc, nvars, max_degree, field));
		if (derivative_markers) skip_derivative_marker(sc);
	};
	if (nvars == 1) {
		// Accept the bare expression; fall back to one layer of grouping
		// parentheses (a leading '(' is first tried as a coefficient).
		try {
			one_component();
			if (!sc.done()) throw SyntaxError("unexpected trailing text", sc.pos);
			return comps;
		} catch (const SyntaxError& first_error) {
			std::string trimmed = text;
			std::size_t a = trimmed.find_first_not_of(" \t\n");
			std::size_t b = trimmed.find_last_not_of(" \t\n");
			if (a == std::string::npos || trimmed[a] != '(' || trimmed[b] != ')') throw;
			try {
				return parse_components(trimmed.substr(a + 1, b - a - 1), nvars, max_degree,
				                        field, derivative_markers);
			} catch (const SyntaxError&) {
				throw first_error;
			}
		}
	}
	sc.expect('(', "'('");
	one_component();
	for (int i = 1; i < nvars; ++i) {
		sc.expect(',', "','");
		one_component();
	}
	sc.expect(')', "')'");
	if (!sc.done()) throw SyntaxError("unexpected trailing text", sc.pos);
	return comps;
}

std::string render_components(const std::vector<TruncatedSeries>& comps, bool derivative_markers) {
	int n = static_cast<int>(comps.size());
	std::string out;
	for (int j = 0; j < n; ++j) {
		if (j) out += ", ";
		out += render_series(comps[j]);
		if (derivative_markers) {
			out += " d/dx";
			if (n > 1) out += std::to_string(j + 1);
		}
	}
	return n == 1 ? out : "(" + out + ")";
}

// ---- JSON helpers ---------------------------------------------------------

int json_int(const Json& j, const char* key) {
	if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_integer())
		throw UsageError(std::string("expected integer field \"") + key + "\"");
	return j.at(key).get<int>();
}

std::string json_string(const Json& j, const char* key) {
	if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
		throw UsageError(std::string("expected string field \"") + key + "\"");
	return j.at(key).get<std::string>();
}

const Json& json_array(const Json& j, const char* key) {
	if (!j.is_object() || !j.contains(key) || !j.at(key).is_array())
		throw UsageError(std::string("expected array field \"") + key + "\"");
	return j.at(key);
}

Exponent json_exponent(const Json& t, int nvars) {
	const Json& exp = json_array(t, "exp");
	if (static_cast<int>(exp.size()) != nvars)
		throw UsageError("exponent vector length disagrees with \"nvars\"");
	Exponent e;
	for (const Json& v : exp) {
		if (!v.is_number_integer() || v.get<int>() < 0)
			throw UsageError("exponents must be non-negative integers");
		e.push_back(v.get<int>());
	}
	return e;
}

std::vector<TruncatedSeries> components_from_json(const Json& j, const FieldPtr& field) {
	int nvars = json_int(j, "nvars");
	int deg = json_int(j, "deg");
	const Json& comps = json_array(j, "components");
	if (static_cast<int>(comps.size()) != nvars)
		throw UsageError("component count disagrees with \"nvars\"");
	std::vector<TruncatedSeries> out;
	for (const Json& cj : comps) {
		TruncatedSeries s = series_from_json(cj, field);
		if (s.nvars() != nvars || s.max_degree() != deg)
			throw UsageError("component shape disagrees with the enclosing object");
		out.push_back(std::move(s));
	}
	return out;
}

} // namespace

// ---- series ---------------------------------------------------------------

std::string render_series(const TruncatedSeries& s) {
	std::string out;
	for (const auto& [e, c] : s.terms()) {
		std::string t = term_text(e, c, s.nvars());
		if (out.empty()) {
			out = t;
		} else if (t[0] == '-') {
			out += " - " + t.substr(1);
		} else {
			out += " + " + t;
		}
	}
	return out.empty() ? "0" : out;
}

TruncatedSeries parse_series(const std::string& text, int nvars, int max_degree,
                             const FieldPtr& field) {
	if (nvars < 1) throw UsageError("at least one variable is required");
	Scanner sc{text};
	TruncatedSeries s = parse_series_at(sc, nvars, max_degree, field);
	if (!sc.done()) throw SyntaxError("unexpected trailing text", sc.pos);
	return s;
}

Json series_to_json(const TruncatedSeries& s) {
	Json terms = Json::array();
	for (const auto& [e, c] : s.terms())
		terms.push_back(Json{{"exp", e}, {"coeff", render_scalar(c)}});
	return Json{{"nvars", s.nvars()}, {"deg", s.max_degree()}, {"terms", std::move(terms)}};
}

TruncatedSeries series_from_json(const Json& j, const FieldPtr& field) {
	int nvars = json_int(j, "nvars");
	int deg = json_int(j, "deg");
	if (nvars < 1 || deg < 0) throw UsageError("bad series shape");
	TermMap terms;
	for (const Json& t : json_array(j, "terms")) {
		Exponent e = json_exponent(t, nvars);
		if (total_degree(e) > deg)
			throw UsageError("term degree exceeds the truncation degree");
		ExactScalar c = parse_scalar(field, json_string(t, "coeff"));
		if (c.is_zero()) continue;
		if (!terms.emplace(std::move(e), std::move(c)).second)
			throw UsageError("duplicate exponent vector");
	}
	return TruncatedSeries(nvars, deg, field, std::move(terms));
}

// ---- jets -------------------------------------------------------------------

std::string render_jet(const JetDiffeo& f) {
	return render_components(f.components(), false);
}

JetDiffeo parse_jet(const std::string& text, int nvars, int max_degree, const FieldPtr& field) {
	return JetDiffeo(parse_components(text, nvars, max_degree, field, false));
}

Json jet_to_json(const JetDiffeo& f) {
	Json comps = Json::array();
	for (const TruncatedSeries& s : f.components()) comps.push_back(series_to_json(s));
	return Json{{"nvars", f.nvars()}, {"deg", f.max_degree()}, {"components", std::move(comps)}};
}

JetDiffeo jet_from_json(const Json& j, const FieldPtr& field) {
	if (j.is_object() && j.contains("role"))
		throw UsageError("unexpected \"role\" field on a jet");
	return JetDiffeo(components_from_json(j, field));
}

// ---- vector fields ----------------------------------------------------------

std::string render_vector_field(const JetVectorField& X) {
	return render_components(X.components(), true);
}

JetVectorField parse_vector_field(const std::string& text, int nvars, int max_degree,
                                  const FieldPtr& field) {
	return JetVectorField(parse_components(text, nvars, max_degree, field, true));
}

Json vector_field_to_json(const JetVectorField& X) {
	Json comps = Json::array();
	for (const TruncatedSeries& s : X.components()) comps.push_back(series_to_json(s));
	return Json{{"role", "vectorfield"},
	            {"nvars", X.nvars()},
	            {"deg", X.max_degree()},
	            {"components", std::move(comps)}};
}

JetVectorField vector_field_from_json(const Json& j, const FieldPtr& field) {
	if (json_string(j, "role") != "vectorfield")
		throw UsageError("expected \"role\": \"vectorfield\"");
	return JetVectorField(components_from_json(j, field));
}

// ---- reports ----------------------------------------------------------------

Json resonance_report_to_json(const ResonanceReport& r) {
	Json eigs = Json::array();
	for (const ExactScalar& l : r.eigenvalues) eigs.push_back(render_scalar(l));
	Json vio = Json::array();
	for (const ResonanceViolation& v : r.violations)
		vio.push_back(Json{{"exp", v.p}, {"target", v.target}});
	return Json{{"eigenvalues", std::move(eigs)},
	            {"max_degree", r.max_degree},
	            {"violations", std::move(vio)}};
}

ResonanceReport resonance_report_from_json(const Json& j, const FieldPtr& field) {
	ResonanceReport r;
	for (const Json& l : json_array(j, "eigenvalues")) {
		if (!l.is_string()) throw UsageError("eigenvalues must be scalar strings");
		r.eigenvalues.push_back(parse_scalar(field, l.get<std::string>()));
	}
	r.max_degree = json_int(j, "max_degree");
	int nvars = static_cast<int>(r.eigenvalues.size());
	for (const Json& v : json_array(j, "violations")) {
		ResonanceViolation item{json_exponent(v, nvars), json_int(v, "target")};
		if (item.target < 1 || item.target > nvars)
			throw UsageError("violation target out of range");
		r.violations.push_back(std::move(item));
	}
	return r;
}

Json normal_form_to_json(const NormalForm1D& nf) {
	return Json{{"k", nf.k},
	            {"a", render_scalar(nf.a)},
	            {"rho", render_scalar(nf.rho)},
	            {"conjugator", jet_to_json(nf.conjugator)}};
}

NormalForm1D normal_form_from_json(const Json& j, const FieldPtr& field) {
	if (!j.is_object() || !j.contains("conjugator"))
		throw UsageError("expected object field \"conjugator\"");
	return NormalForm1D{json_int(j, "k"),
	                    parse_scalar(field, json_string(j, "a")),
	                    parse_scalar(field, json_string(j, "rho")),
	                    jet_from_json(j.at("conjugator"), field)};
}

Json word_report_to_json(const WordReport& r) {
	Json id = Json::array();
	for (const GroupWord& w : r.identity) id.push_back(render_word(w));
	Json und = Json::array();
	for (const GroupWord& w : r.undecided) und.push_back(render_word(w));
	return Json{{"checked", r.checked}, {"identity", std::move(id)}, {"undecided", std::move(und)}};
}

WordReport word_report_from_json(const Json& j) {
	WordReport r;
	if (!j.is_object() || !j.contains("checked") || !j.at("checked").is_number_integer())
		throw UsageError("expected integer field \"checked\"");
	r.checked = j.at("checked").get<long>();
	for (const Json& w : json_array(j, "identity")) {
		if (!w.is_string()) throw UsageError("words must be strings");
		r.identity.push_back(parse_word(w.get<std::string>()));
	}
	for (const Json& w : json_array(j, "undecided")) {
		if (!w.is_string()) throw UsageError("words must be strings");
		r.undecided.push_back(parse_word(w.get<std::string>()));
	}
	return r;
}

} // namespace jetforge
