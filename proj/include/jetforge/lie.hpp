#pragma once

#include "jetforge/jetgroup.hpp"

namespace jetforge {

// Jet of a formal vector field sum_j a_j(x) d/dx_j with every a_j vanishing
// at the origin (valuation >= 1).  Fields of valuation >= 2 are the domain
// of exp_flow and correspond to jets tangent to the identity.
class JetVectorField {
public:
	explicit JetVectorField(std::vector<TruncatedSeries> components);
	static JetVectorField zero(int n, int K, const FieldPtr& f);

	int nvars() const { return static_cast<int>(m_components.size()); }
	int max_degree() const { return m_components.front().max_degree(); }
	const FieldPtr& field() const { return m_components.front().field(); }
	const std::vector<TruncatedSeries>& components() const { return m_components; }
	const TruncatedSeries& component(int i) const { return m_components[i]; }

	bool is_zero() const;

	JetVectorField operator-() const;
	JetVectorField operator+(const JetVectorField& o) const;
	JetVectorField operator-(const JetVectorField& o) const;
	JetVectorField operator*(const ExactScalar& c) const;
	bool operator==(const JetVectorField& o) const;
	bool operator!=(const JetVectorField& o) const { return !(*this == o); }

private:
	std::vector<TruncatedSeries> m_components;
};

// Minimal component valuation; nullopt (plus infinity) for the zero field.
std::optional<int> field_valuation(const JetVectorField& X);

// X applied to s as a derivation: sum_i X_i ds/dx_i.  Exact at the stored
// degree because every X_i has valuation >= 1.
TruncatedSeries apply_derivation(const JetVectorField& X, const TruncatedSeries& s);

// [X,Y]_j = sum_i X_i dY_j/dx_i - Y_i dX_j/dx_i.
JetVectorField bracket(const JetVectorField& X, const JetVectorField& Y);

// Time-t flow by the Lie series sum_m t^m/m! X^m(x_j); the series is finite
// on jets since X^m(x_j) has valuation >= 1 + m(val X - 1).  MathError when
// the valuation of X is < 2.
JetDiffeo exp_flow(const JetVectorField& X, const ExactScalar& t);

// Inverse of exp_flow at t=1, solved degree by degree; the degree-d
// correction to X is the degree-d defect of the current flow.  Requires a
// jet tangent to the identity (linear part = id).
JetVectorField log_jet(const JetDiffeo& f);

// log(exp X . exp Y); domain as exp_flow.
JetVectorField bch(const JetVectorField& X, const JetVectorField& Y);

// phi_* X = (Dphi . X) o phi^-1.  Exact at the stored degree: the lost
// top-degree slots of Dphi are only ever multiplied by positive-valuation
// components.
JetVectorField pushforward(const JetDiffeo& phi, const JetVectorField& X);

// x^{k+1}/(1 + lambda x^k) d/dx as a one-variable field jet:
// x^{k+1} sum_m (-lambda)^m x^{km}.
JetVectorField normal_field(int k, const ExactScalar& lambda, int K);

// Vanishing bracket; at the jet level this is equivalent to the flows
// commuting as group elements (all higher correction terms are iterated
// brackets).
bool flows_commute(const JetVectorField& X, const JetVectorField& Y);

} // namespace jetforge
