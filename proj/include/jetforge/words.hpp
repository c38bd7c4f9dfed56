#pragma once

#include "jetforge/jetgroup.hpp"

#include <functional>
#include <string>
#include <utility>

namespace jetforge {

// Letter g_i^e over an indexed generator alphabet.
struct WordLetter {
	int index = 0;
	int exponent = 0;

	bool operator==(const WordLetter& o) const {
		return index == o.index && exponent == o.exponent;
	}
};

class GroupWord {
public:
	GroupWord() = default;
	explicit GroupWord(std::vector<WordLetter> letters);

	const std::vector<WordLetter>& letters() const { return m_letters; }
	bool empty() const { return m_letters.empty(); }
	// symbol count: sum of |exponent|
	long length() const;
	// adjacent letters with equal index merged, zero exponents dropped
	GroupWord reduced() const;
	// reversed letters with negated exponents
	GroupWord inverse() const;
	GroupWord concat(const GroupWord& o) const;

	bool operator==(const GroupWord& o) const { return m_letters == o.m_letters; }
	bool operator!=(const GroupWord& o) const { return !(*this == o); }

private:
	std::vector<WordLetter> m_letters;
};

// Text syntax: whitespace-separated letters `g<index>` with an optional
// `^<integer>` exponent, e.g. "g0 g1^-1 g0^2".  SyntaxError carries the
// offending position.
GroupWord parse_word(const std::string& text);
std::string render_word(const GroupWord& w);

// Left-to-right product: the first letter is the outermost factor, so
// "g0 g1" evaluates to compose(gens[0], gens[1]).
JetDiffeo evaluate_word(const std::vector<JetDiffeo>& gens, const GroupWord& w);

// Smallest k with project(f, k) != identity: 1 when the linear part is not
// the identity, otherwise the valuation of f - id.  MathError when f is the
// identity jet (no witness below this precision).
int separation_index(const JetDiffeo& f);

// Exact equality of the two evaluations at the stored degree; false at any
// truncation refutes the relation in the full germ group.
bool check_relation(const std::vector<JetDiffeo>& gens, const GroupWord& lhs,
                    const GroupWord& rhs);

// The jets of x/(1+x) and x/(1+x^3)^{1/3}, which generate a free group.
std::pair<JetDiffeo, JetDiffeo> free_group_generators(int K);

struct WordReport {
	long checked = 0;
	// evaluated to the identity jet at the working degree
	std::vector<GroupWord> identity;
	// identity at the working degree and not refuted at doubled degree:
	// possibly a relation, truncation cannot tell
	std::vector<GroupWord> undecided;
};

// Enumerates every reduced word of length <= max_len over the generators
// and their inverses (no letter directly followed by its inverse) in
// canonical order (length, then lexicographic with g0 < g0^-1 < g1 < ...).
// A word evaluating to the identity is listed in `identity`; it is also
// listed in `undecided` unless re-evaluation against refine(2K) refutes it.
// An empty report certifies that no relation of length <= max_len holds in
// the germ group.  Generators must be pairwise distinct and != identity.
WordReport verify_no_relations(const std::vector<JetDiffeo>& gens, int max_len,
                               const std::function<std::vector<JetDiffeo>(int)>& refine = {});

} // namespace jetforge
