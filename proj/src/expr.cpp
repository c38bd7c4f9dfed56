#include "jetforge/expr.hpp"

#include <cctype>
#include <utility>

namespace jetforge {

// ---- values -----------------------------------------------------------------

const std::vector<TruncatedSeries>& ExprValue::series_list() const {
	switch (kind()) {
	case Kind::tuple: return std::get<std::vector<TruncatedSeries>>(m_v);
	case Kind::jet: return jet().components();
	case Kind::vectorfield: return vector_field().components();
	default: throw UsageError("expected a series value, got a scalar");
	}
}

JetDiffeo ExprValue::as_jet() const {
	switch (kind()) {
	case Kind::jet: return jet();
	case Kind::tuple: return JetDiffeo(std::get<std::vector<TruncatedSeries>>(m_v));
	case Kind::vectorfield:
		throw UsageError("expected a jet, got a vector field (apply exp first)");
	default: throw UsageError("expected a jet, got a scalar");
	}
}

JetVectorField ExprValue::as_vector_field() const {
	switch (kind()) {
	case Kind::vectorfield: return vector_field();
	case Kind::tuple: return JetVectorField(std::get<std::vector<TruncatedSeries>>(m_v));
	case Kind::jet:
		throw UsageError("expected a vector field, got a jet (apply log first)");
	default: throw UsageError("expected a vector field, got a scalar");
	}
}

const ExactScalar& ExprValue::as_scalar() const {
	if (!is_scalar()) throw UsageError("expected a scalar");
	return scalar();
}

const FieldPtr& ExprValue::field() const {
	return is_scalar() ? scalar().field() : series_list().front().field();
}

ExprValue commit_value(ExprValue v) {
	if (v.kind() != ExprValue::Kind::tuple) return v;
	try {
		return ExprValue(v.as_jet());
	} catch (const std::runtime_error&) {
	}
	try {
		return ExprValue(v.as_vector_field());
	} catch (const std::runtime_error&) {
	}
	throw UsageError("series tuple is neither a jet nor a vector field");
}

// ---- session ------------------------------------------------------------------

namespace {

bool identifier_shape(const std::string& s) {
	if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
	for (char c : s)
		if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
	return true;
}

// x -> 1, y -> 2, z -> 3, xN -> N; 0 when the name is not a variable.
int variable_index(const std::string& s) {
	if (s == "x") return 1;
	if (s == "y") return 2;
	if (s == "z") return 3;
	if (s.size() >= 2 && s[0] == 'x') {
		int v = 0;
		for (std::size_t i = 1; i < s.size(); ++i) {
			if (!std::isdigit(static_cast<unsigned char>(s[i]))) return 0;
			v = v * 10 + (s[i] - '0');
			if (v > 1000) return 0;
		}
		return v;
	}
	return 0;
}

bool function_name(const std::string& s) {
	return s == "exp" || s == "log" || s == "inv" || s == "comm" || s == "push" ||
	       s == "bch" || s == "bracket" || s == "Xfield" || s == "jet" || s == "field";
}

} // namespace

bool reserved_name(const std::string& name) {
	return function_name(name) || name == "i" || name == "t" || name == "d" ||
	       variable_index(name) != 0;
}

Session::Session(FieldPtr field, int nvars, int default_degree)
	: m_field(std::move(field)), m_nvars(nvars), m_deg(default_degree) {
	if (!m_field) throw UsageError("a session needs a coefficient field");
	if (m_nvars < 1) throw UsageError("a session needs at least one variable");
	if (m_deg < 1) throw UsageError("a session needs truncation degree at least 1");
}

const ExprValue* Session::lookup(const std::string& name) const {
	auto it = m_bindings.find(name);
	return it == m_bindings.end() ? nullptr : &it->second;
}

void Session::bind(const std::string& name, ExprValue v) {
	if (!identifier_shape(name)) throw UsageError("binding names must be identifiers");
	if (reserved_name(name)) throw UsageError("'" + name + "' is reserved");
	ExprValue c = commit_value(std::move(v));
	if (!same_field(c.field(), m_field))
		throw UsageError("bound values must live over the session field");
	m_bindings.insert_or_assign(name, std::move(c));
}

// ---- lexer --------------------------------------------------------------------

namespace {

enum class Tok {
	number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, equals, end
};

struct Token {
	Tok kind;
	std::string text;
	long num = 0;
	std::size_t pos = 0;
};

std::vector<Token> lex(const std::string& text) {
	std::vector<Token> out;
	std::size_t i = 0;
	while (i < text.size()) {
		char c = text[i];
		if (std::isspace(static_cast<unsigned char>(c))) {
			++i;
			continue;
		}
		std::size_t at = i;
		if (std::isdigit(static_cast<unsigned char>(c))) {
			long v = 0;
			while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
				v = v * 10 + (text[i] - '0');
				if (v > 1000000000L) throw SyntaxError("number too large", at);
				++i;
			}
			out.push_back({Tok::number, text.substr(at, i - at), v, at});
			// implicit product: a number directly against a letter or '('
			if (i < text.size() &&
			    (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '('))
				out.push_back({Tok::star, "*", 0, i});
			continue;
		}
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
			                           text[i] == '_'))
				++i;
			out.push_back({Tok::ident, text.substr(at, i - at), 0, at});
			continue;
		}
		Tok k;
		switch (c) {
		case '+': k = Tok::plus; break;
		case '-': k = Tok::minus; break;
		case '*': k = Tok::star; break;
		case '/': k = Tok::slash; break;
		case '^': k = Tok::caret; break;
		case '(': k = Tok::lparen; break;
		case ')': k = Tok::rparen; break;
		case ',': k = Tok::comma; break;
		case '=': k = Tok::equals; break;
		default: throw SyntaxError("unexpected character", at);
		}
		out.push_back({k, std::string(1, c), 0, at});
		++i;
	}
	out.push_back({Tok::end, "", 0, text.size()});
	return out;
}

// ---- value arithmetic -----------------------------------------------------------

ExprValue val_add(const ExprValue& a, const ExprValue& b, bool subtract) {
	using K = ExprValue::Kind;
	if (a.is_scalar() && b.is_scalar())
		return ExprValue(subtract ? a.scalar() - b.scalar() : a.scalar() + b.scalar());
	if (a.is_scalar() || b.is_scalar()) {
		const ExprValue& s = a.is_scalar() ? a : b;
		const ExprValue& v = a.is_scalar() ? b : a;
		if (v.series_list().size() != 1)
			throw UsageError("cannot add a scalar to a tuple");
		const TruncatedSeries& q = v.series_list().front();
		TruncatedSeries cst = series_constant(q.nvars(), q.max_degree(), s.scalar());
		TruncatedSeries r = a.is_scalar() ? (subtract ? cst - q : cst + q)
		                                  : (subtract ? q - cst : q + cst);
		return ExprValue(std::vector<TruncatedSeries>{std::move(r)});
	}
	if (a.kind() == K::vectorfield && b.kind() == K::vectorfield)
		return ExprValue(subtract ? a.vector_field() - b.vector_field()
		                          : a.vector_field() + b.vector_field());
	const auto& u = a.series_list();
	const auto& w = b.series_list();
	if (u.size() != w.size()) throw UsageError("tuple sizes disagree");
	std::vector<TruncatedSeries> r;
	for (std::size_t j = 0; j < u.size(); ++j) r.push_back(subtract ? u[j] - w[j] : u[j] + w[j]);
	return ExprValue(std::move(r));
}

ExprValue val_mul(const ExprValue& a, const ExprValue& b) {
	using K = ExprValue::Kind;
	if (a.is_scalar() && b.is_scalar()) return ExprValue(a.scalar() * b.scalar());
	if (a.is_scalar() || b.is_scalar()) {
		const ExactScalar& s = (a.is_scalar() ? a : b).scalar();
		const ExprValue& v = a.is_scalar() ? b : a;
		if (v.kind() == K::vectorfield) return ExprValue(v.vector_field() * s);
		std::vector<TruncatedSeries> r;
		for (const TruncatedSeries& q : v.series_list()) r.push_back(q * s);
		return ExprValue(std::move(r));
	}
	if (a.kind() == K::jet || b.kind() == K::jet)
		return ExprValue(compose(a.as_jet(), b.as_jet()));
	if (a.kind() == K::vectorfield || b.kind() == K::vectorfield)
		throw UsageError("vector fields have no product; use bracket or bch");
	const auto& u = a.series_list();
	const auto& w = b.series_list();
	if (u.size() != w.size()) throw UsageError("tuple sizes disagree");
	std::vector<TruncatedSeries> r;
	for (std::size_t j = 0; j < u.size(); ++j) r.push_back(u[j] * w[j]);
	return ExprValue(std::move(r));
}

ExprValue val_div(const ExprValue& a, const ExprValue& b) {
	if (b.is_scalar()) {
		if (a.is_scalar()) return ExprValue(a.scalar() / b.scalar());
		return val_mul(a, ExprValue(b.scalar().inverse()));
	}
	throw UsageError("division needs a scalar divisor");
}

ExprValue val_pow(const ExprValue& a, long e) {
	using K = ExprValue::Kind;
	switch (a.kind()) {
	case K::scalar: return ExprValue(a.scalar().pow_int(e));
	case K::jet: return ExprValue(power(a.jet(), e));
	case K::vectorfield:
		throw UsageError("vector fields have no powers; scale with '*'");
	default: break;
	}
	const auto& u = a.series_list();
	if (e < 0) {
		if (u.size() != 1 || !u.front().constant_term().is_one())
			throw UsageError("negative powers need a single series with constant term 1");
		return ExprValue(std::vector<TruncatedSeries>{binomial_power(u.front(), mpq_class(e))});
	}
	std::vector<TruncatedSeries> r;
	for (const TruncatedSeries& q : u) {
		TruncatedSeries p = series_constant(q.nvars(), q.max_degree(), scalar_one(q.field()));
		for (long m = 0; m < e; ++m) p = p * q;
		r.push_back(std::move(p));
	}
	return ExprValue(std::move(r));
}

ExprValue val_neg(const ExprValue& a) {
	if (a.is_scalar()) return ExprValue(-a.scalar());
	if (a.kind() == ExprValue::Kind::vectorfield) return ExprValue(-a.vector_field());
	std::vector<TruncatedSeries> r;
	for (const TruncatedSeries& q : a.series_list()) r.push_back(-q);
	return ExprValue(std::move(r));
}

// ---- parser -----------------------------------------------------------------------

struct Parser {
	const std::vector<Token>& toks;
	Session& session;
	std::size_t i = 0;

	const Token& peek() const { return toks[i]; }
	const Token& take() { return toks[i++]; }
	bool accept(Tok k) {
		if (peek().kind == k) {
			++i;
			return true;
		}
		return false;
	}
	void expect(Tok k, const char* what) {
		if (!accept(k)) throw SyntaxError(std::string("expected ") + what, peek().pos);
	}

	ExprValue expr() {
		bool neg = accept(Tok::minus);
		ExprValue v = term();
		if (neg) v = val_neg(v);
		for (;;) {
			if (accept(Tok::plus)) {
				v = val_add(v, term(), false);
			} else if (accept(Tok::minus)) {
				v = val_add(v, term(), true);
			} else {
				return v;
			}
		}
	}

	ExprValue term() {
		ExprValue v = factor();
		for (;;) {
			if (accept(Tok::star)) {
				v = val_mul(v, factor());
			} else if (accept(Tok::slash)) {
				v = val_div(v, factor());
			} else {
				return v;
			}
		}
	}

	ExprValue factor() {
		bool neg = accept(Tok::minus);
		ExprValue v = primary();
		if (accept(Tok::caret)) {
			bool eneg = accept(Tok::minus);
			const Token& t = peek();
			expect(Tok::number, "an integer exponent");
			long e = eneg ? -t.num : t.num;
			v = val_pow(v, e);
		}
		return neg ? val_neg(v) : v;
	}

	ExprValue primary() {
		const Token& t = peek();
		if (accept(Tok::number))
			return ExprValue(scalar_from_rational(session.field(), mpq_class(t.num)));
		if (accept(Tok::lparen)) {
			std::vector<ExprValue> items;
			items.push_back(expr());
			while (accept(Tok::comma)) items.push_back(expr());
			expect(Tok::rparen, "')'");
			if (items.size() == 1) return std::move(items.front());
			return tuple_of(items, t.pos);
		}
		if (t.kind == Tok::ident) {
			take();
			return name(t);
		}
		throw SyntaxError("expected an expression", t.pos);
	}

	ExprValue tuple_of(const std::vector<ExprValue>& items, std::size_t pos) {
		const TruncatedSeries* shape = nullptr;
		for (const ExprValue& v : items)
			if (!v.is_scalar()) {
				if (v.series_list().size() != 1)
					throw SyntaxError("tuple entries must be single series", pos);
				shape = &v.series_list().front();
			}
		if (!shape) throw SyntaxError("a tuple of constants has no series shape", pos);
		std::vector<TruncatedSeries> comps;
		for (const ExprValue& v : items) {
			if (v.is_scalar())
				comps.push_back(series_constant(shape->nvars(), shape->max_degree(), v.scalar()));
			else
				comps.push_back(v.series_list().front());
		}
		return ExprValue(std::move(comps));
	}

	ExprValue name(const Token& t) {
		const std::string& s = t.text;
		if (s == "i" || s == "t") {
			if (session.field()->generator_symbol() != s)
				throw UsageError("the field " + session.field()->name() + " has no generator '" +
				                 s + "'");
			return ExprValue(scalar_generator(session.field()));
		}
		if (int vi = variable_index(s); vi != 0) {
			if ((s == "y" || s == "z") && session.nvars() > 3)
				throw SyntaxError("alias variables need at most three variables", t.pos);
			if (vi > session.nvars()) throw SyntaxError("variable index out of range", t.pos);
			return ExprValue(std::vector<TruncatedSeries>{series_coordinate(
			    session.nvars(), session.default_degree(), session.field(), vi - 1)});
		}
		if (function_name(s)) return call(s, t.pos);
		if (const ExprValue* bound = session.lookup(s)) return *bound;
		throw SyntaxError("unknown name '" + s + "'", t.pos);
	}

	ExprValue call(const std::string& fn, std::size_t pos) {
		expect(Tok::lparen, "'(' after a function name");
		std::vector<ExprValue> args;
		args.push_back(expr());
		while (accept(Tok::comma)) args.push_back(expr());
		expect(Tok::rparen, "')'");
		auto arity = [&](std::size_t n) {
			if (args.size() != n)
				throw SyntaxError("'" + fn + "' takes " + std::to_string(n) + " argument" +
				                      (n == 1 ? "" : "s"),
				                  pos);
		};
		if (fn == "exp") {
			arity(1);
			return ExprValue(exp_flow(args[0].as_vector_field(), scalar_one(session.field())));
		}
		if (fn == "log") {
			arity(1);
			return ExprValue(log_jet(args[0].as_jet()));
		}
		if (fn == "inv") {
			arity(1);
			return ExprValue(invert(args[0].as_jet()));
		}
		if (fn == "comm") {
			arity(2);
			return ExprValue(commutator(args[0].as_jet(), args[1].as_jet()));
		}
		if (fn == "push") {
			arity(2);
			return ExprValue(pushforward(args[0].as_jet(), args[1].as_vector_field()));
		}
		if (fn == "bch") {
			arity(2);
			return ExprValue(bch(args[0].as_vector_field(), args[1].as_vector_field()));
		}
		if (fn == "bracket") {
			arity(2);
			return ExprValue(bracket(args[0].as_vector_field(), args[1].as_vector_field()));
		}
		if (fn == "jet") {
			arity(1);
			return ExprValue(args[0].as_jet());
		}
		if (fn == "field") {
			arity(1);
			return ExprValue(args[0].as_vector_field());
		}
		// Xfield(k, lambda)
		arity(2);
		const ExactScalar& ks = args[0].as_scalar();
		if (!ks.is_rational() || ks.rational_part().get_den() != 1 ||
		    ks.rational_part() < 1)
			throw UsageError("Xfield needs a positive integer order");
		if (session.nvars() != 1)
			throw UsageError("Xfield lives in one variable");
		long k = static_cast<long>(ks.rational_part().get_num().get_si());
		return ExprValue(
		    normal_field(static_cast<int>(k), args[1].as_scalar(), session.default_degree()));
	}
};

} // namespace

// ---- entry points --------------------------------------------------------------------

int scan_variable_count(const std::string& text) {
	int best = 0;
	std::size_t i = 0;
	while (i < text.size()) {
		char c = text[i];
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t at = i;
			while (i < text.size() &&
			       (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
				++i;
			int vi = variable_index(text.substr(at, i - at));
			if (vi > best) best = vi;
		} else {
			++i;
		}
	}
	return best;
}

ExprValue parse_expression(const std::string& text, Session& session) {
	std::vector<Token> toks = lex(text);
	Parser p{toks, session};
	std::string bind_name;
	if (toks.size() >= 2 && toks[0].kind == Tok::ident && toks[1].kind == Tok::equals) {
		bind_name = toks[0].text;
		p.i = 2;
	}
	ExprValue v = p.expr();
	if (p.peek().kind != Tok::end) throw SyntaxError("unexpected trailing text", p.peek().pos);
	if (!bind_name.empty()) {
		session.bind(bind_name, std::move(v));
		return *session.lookup(bind_name);
	}
	return v;
}

ExprValue run_script(const std::string& text, Session& session) {
	std::vector<ExprValue> results;
	std::size_t start = 0;
	while (start <= text.size()) {
		std::size_t stop = text.find(';', start);
		std::string piece = text.substr(start, stop == std::string::npos ? stop : stop - start);
		bool blank = piece.find_first_not_of(" \t\r\n") == std::string::npos;
		if (!blank) results.push_back(parse_expression(piece, session));
		if (stop == std::string::npos) break;
		start = stop + 1;
	}
	if (results.empty()) throw UsageError("empty input");
	return std::move(results.back());
}

} // namespace jetforge
