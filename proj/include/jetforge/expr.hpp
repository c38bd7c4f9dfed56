#pragma once

#include "jetforge/jetgroup.hpp"
#include "jetforge/lie.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace jetforge {

// Result of evaluating an expression.  A "tuple" is a list of series that has
// not yet committed to being a jet or a vector field; literals start out as
// tuples and commit at function boundaries ("exp" wants a vector field,
// "inv" wants a jet, ...) or when bound to a name.
class ExprValue {
public:
	enum class Kind { scalar, tuple, jet, vectorfield };

	explicit ExprValue(ExactScalar s) : m_v(std::move(s)) {}
	explicit ExprValue(std::vector<TruncatedSeries> t) : m_v(std::move(t)) {}
	explicit ExprValue(JetDiffeo f) : m_v(std::move(f)) {}
	explicit ExprValue(JetVectorField X) : m_v(std::move(X)) {}

	Kind kind() const { return static_cast<Kind>(m_v.index()); }
	bool is_scalar() const { return kind() == Kind::scalar; }

	// Requires the matching kind.
	const ExactScalar& scalar() const { return std::get<ExactScalar>(m_v); }
	const JetDiffeo& jet() const { return std::get<JetDiffeo>(m_v); }
	const JetVectorField& vector_field() const { return std::get<JetVectorField>(m_v); }

	// The underlying series list of any non-scalar value.
	const std::vector<TruncatedSeries>& series_list() const;

	// Coercions; UsageError when the value cannot be viewed as requested
	// (a committed vector field is never a jet and vice versa).
	JetDiffeo as_jet() const;
	JetVectorField as_vector_field() const;
	const ExactScalar& as_scalar() const;

	const FieldPtr& field() const;

private:
	std::variant<ExactScalar, std::vector<TruncatedSeries>, JetDiffeo, JetVectorField> m_v;
};

// Commits a tuple to a jet when its linear part is invertible, otherwise to
// a vector field; scalars and already-committed values pass through.
// UsageError when the tuple is neither (e.g. a nonzero constant term).
ExprValue commit_value(ExprValue v);

// Evaluation context: the coefficient field, the ambient variable count and
// truncation degree for literals, and named bindings.  Bound values share
// the session field; there is no truncation-degree mutation — build a new
// session to change K.
class Session {
public:
	Session(FieldPtr field, int nvars, int default_degree);

	const FieldPtr& field() const { return m_field; }
	int nvars() const { return m_nvars; }
	int default_degree() const { return m_deg; }

	const ExprValue* lookup(const std::string& name) const;
	// Commits the value first; rejects reserved names, names not of
	// identifier shape, and values over a different field.
	void bind(const std::string& name, ExprValue v);

private:
	FieldPtr m_field;
	int m_nvars;
	int m_deg;
	std::map<std::string, ExprValue> m_bindings;
};

// True for names with a fixed meaning in expressions: variables, the
// generator letters i and t, and the built-in function names.
bool reserved_name(const std::string& name);

// Largest variable index mentioned by the text (x -> 1, y -> 2, z -> 3,
// xN -> N); 0 when no variable occurs.  Used to choose the ambient
// dimension before building a session.
int scan_variable_count(const std::string& text);

// Evaluates one statement: an expression with an optional leading
// "name =" binding.  Grammar:
//
//   expr    :=  term  (('+' | '-') term)*
//   term    :=  factor (('*' | '/') factor)*
//   factor  :=  ['-'] primary ['^' ['-'] integer]
//   primary :=  integer | 'i' | 't' | variable | name
//             | function '(' expr (',' expr)* ')'
//             | '(' expr (',' expr)* ')'
//
// A parenthesized list of two or more expressions forms a tuple.  Implicit
// multiplication is recognized when a number directly abuts a letter or an
// opening parenthesis ("2x", "1/2i", "3(x+1)").  Functions: exp(X), log(f),
// inv(f), comm(f,g), push(f,X), bch(X,Y), bracket(X,Y), Xfield(k,lambda),
// and the explicit coercions jet(e) and field(e).  '*' composes when either
// operand is a committed jet and multiplies componentwise otherwise; '^' on
// a committed jet is composition power.
ExprValue parse_expression(const std::string& text, Session& session);

// Semicolon-separated statements; returns the last value.
ExprValue run_script(const std::string& text, Session& session);

} // namespace jetforge
