#include "jetforge/words.hpp"
#include "jetforge/error.hpp"

#include <cctype>
#include <sstream>

namespace jetforge {

GroupWord::GroupWord(std::vector<WordLetter> letters) : m_letters(std::move(letters)) {
	for (const auto& l : m_letters)
		if (l.index < 0) throw UsageError("generator index must be non-negative");
}

long GroupWord::length() const {
	long n = 0;
	for (const auto& l : m_letters) n += l.exponent < 0 ? -l.exponent : l.exponent;
	return n;
}

GroupWord GroupWord::reduced() const {
	std::vector<WordLetter> out;
	for (const auto& l : m_letters) {
		if (l.exponent == 0) continue;
		if (!out.empty() && out.back().index == l.index) {
			out.back().exponent += l.exponent;
			if (out.back().exponent == 0) out.pop_back();
		} else {
			out.push_back(l);
		}
	}
	return GroupWord(std::move(out));
}

GroupWord GroupWord::inverse() const {
	std::vector<WordLetter> out(m_letters.rbegin(), m_letters.rend());
	for (auto& l : out) l.exponent = -l.exponent;
	return GroupWord(std::move(out));
}

GroupWord GroupWord::concat(const GroupWord& o) const {
	std::vector<WordLetter> out = m_letters;
	out.insert(out.end(), o.m_letters.begin(), o.m_letters.end());
	return GroupWord(std::move(out));
}

GroupWord parse_word(const std::string& text) {
	std::vector<WordLetter> letters;
	std::size_t pos = 0;
	const auto digits = [&](bool allow_sign) -> long {
		std::size_t start = pos;
		bool neg = false;
		if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
			neg = text[pos] == '-';
			++pos;
		}
		if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
			throw SyntaxError("expected digits", start);
		long v = 0;
		while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
			v = v * 10 + (text[pos] - '0');
			if (v > 1000000) throw SyntaxError("number too large", start);
			++pos;
		}
		return neg ? -v : v;
	};
	while (pos < text.size()) {
		if (std::isspace(static_cast<unsigned char>(text[pos]))) {
			++pos;
			continue;
		}
		if (text[pos] != 'g') throw SyntaxError("expected a letter of the form g<index>", pos);
		++pos;
		WordLetter l;
		l.index = static_cast<int>(digits(false));
		l.exponent = 1;
		if (pos < text.size() && text[pos] == '^') {
			++pos;
			l.exponent = static_cast<int>(digits(true));
		}
		letters.push_back(l);
	}
	return GroupWord(std::move(letters));
}

std::string render_word(const GroupWord& w) {
	std::ostringstream os;
	bool first = true;
	for (const auto& l : w.letters()) {
		if (!first) os << ' ';
		first = false;
		os << 'g' << l.index;
		if (l.exponent != 1) os << '^' << l.exponent;
	}
	return os.str();
}

JetDiffeo evaluate_word(const std::vector<JetDiffeo>& gens, const GroupWord& w) {
	if (gens.empty()) throw UsageError("at least one generator is required");
	JetDiffeo acc = JetDiffeo::identity(gens.front().nvars(), gens.front().max_degree(),
	                                    gens.front().field());
	for (const auto& l : w.letters()) {
		if (l.index >= static_cast<int>(gens.size()))
			throw UsageError("generator index out of range");
		if (l.exponent == 0) continue;
		acc = compose(acc, power(gens[l.index], l.exponent));
	}
	return acc;
}

int separation_index(const JetDiffeo& f) {
	auto t = tangency_order(f);
	if (!t) throw MathError("identity jet: every projection is trivial at this precision");
	return *t == 0 ? 1 : *t + 1;
}

bool check_relation(const std::vector<JetDiffeo>& gens, const GroupWord& lhs,
                    const GroupWord& rhs) {
	return evaluate_word(gens, lhs) == evaluate_word(gens, rhs);
}

std::pair<JetDiffeo, JetDiffeo> free_group_generators(int K) {
	const FieldPtr F = FieldDescriptor::rationals();
	// x/(1+x) = x - x^2 + x^3 - ...
	TermMap geo;
	for (int l = 1; l <= K; ++l)
		geo.emplace(Exponent{l}, scalar_from_rational(F, mpq_class(l % 2 ? 1 : -1)));
	JetDiffeo f1({TruncatedSeries(1, K, F, std::move(geo))});

	// x (1+x^3)^{-1/3}
	TruncatedSeries base = series_constant(1, K, scalar_one(F));
	if (K >= 3) base = base + series_monomial(1, K, Exponent{3}, scalar_one(F));
	TruncatedSeries u = binomial_power(base, mpq_class(-1, 3));
	JetDiffeo f2({series_coordinate(1, K, F, 0) * u});
	return {std::move(f1), std::move(f2)};
}

WordReport verify_no_relations(const std::vector<JetDiffeo>& gens, int max_len,
                               const std::function<std::vector<JetDiffeo>(int)>& refine) {
	if (gens.empty()) throw UsageError("at least one generator is required");
	if (max_len < 1) throw UsageError("max_len must be positive");
	for (std::size_t i = 0; i < gens.size(); ++i) {
		if (gens[i].is_identity()) throw UsageError("a generator equals the identity");
		for (std::size_t j = i + 1; j < gens.size(); ++j)
			if (gens[i] == gens[j]) throw UsageError("generators are not pairwise distinct");
	}
	const int g = static_cast<int>(gens.size());
	const int K = gens.front().max_degree();
	const JetDiffeo id = JetDiffeo::identity(gens.front().nvars(), K, gens.front().field());

	// symbol 2i is g_i, symbol 2i+1 is g_i^-1
	std::vector<JetDiffeo> sym;
	sym.reserve(2 * g);
	for (const auto& h : gens) {
		sym.push_back(h);
		sym.push_back(invert(h));
	}

	std::optional<std::vector<JetDiffeo>> fine;
	const auto refined_gens = [&]() -> const std::vector<JetDiffeo>* {
		if (!refine) return nullptr;
		if (!fine) {
			fine = refine(2 * K);
			if (fine->size() != gens.size())
				throw UsageError("refinement returned a different number of generators");
			for (const auto& h : *fine)
				if (h.max_degree() != 2 * K || h.nvars() != id.nvars())
					throw UsageError("refinement returned jets of the wrong shape");
		}
		return &*fine;
	};

	const auto word_of = [](const std::vector<int>& syms) {
		std::vector<WordLetter> letters;
		for (int s : syms) {
			int idx = s / 2;
			int e = s % 2 ? -1 : 1;
			if (!letters.empty() && letters.back().index == idx)
				letters.back().exponent += e;
			else
				letters.push_back({idx, e});
		}
		return GroupWord(std::move(letters));
	};

	WordReport rep;
	// hits bucketed by length; depth-first descent visits symbols in
	// ascending order, so each bucket is already lexicographic
	std::vector<std::vector<GroupWord>> id_hits(max_len + 1), und_hits(max_len + 1);
	std::vector<int> syms;
	std::function<void(const JetDiffeo&)> grow = [&](const JetDiffeo& prefix) {
		for (int s = 0; s < 2 * g; ++s) {
			// reduced words only: never follow a symbol with its inverse
			if (!syms.empty() && (syms.back() ^ 1) == s) continue;
			syms.push_back(s);
			JetDiffeo value = compose(prefix, sym[s]);
			++rep.checked;
			if (value == id) {
				GroupWord w = word_of(syms);
				id_hits[syms.size()].push_back(w);
				const std::vector<JetDiffeo>* fg = refined_gens();
				if (!fg || evaluate_word(*fg, w).is_identity())
					und_hits[syms.size()].push_back(w);
			}
			if (static_cast<int>(syms.size()) < max_len) grow(value);
			syms.pop_back();
		}
	};
	grow(id);
	for (int len = 1; len <= max_len; ++len) {
		rep.identity.insert(rep.identity.end(), id_hits[len].begin(), id_hits[len].end());
		rep.undecided.insert(rep.undecided.end(), und_hits[len].begin(), und_hits[len].end());
	}
	return rep;
}

} // namespace jetforge
