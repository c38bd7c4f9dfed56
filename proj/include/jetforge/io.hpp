#pragma once

#include "jetforge/classify.hpp"
#include "jetforge/jetgroup.hpp"
#include "jetforge/lie.hpp"
#include "jetforge/words.hpp"

#include <json.hpp>

#include <string>

namespace jetforge {

// JSON object type used by every serializer; keys keep insertion order.
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Text forms
//
// A series renders as a sum of terms "coeff*monomial" in graded order, with
// variables named x for one variable and x1..xn otherwise.  Coefficients use
// the scalar grammar; a coefficient whose rendering is itself a sum is
// parenthesized.  The parser additionally accepts x, y, z as aliases for
// x1, x2, x3 when nvars <= 3, optional '*' between factors, and repeated
// variables (exponents add).  The zero series renders as "0".
// ---------------------------------------------------------------------------

std::string render_series(const TruncatedSeries& s);
TruncatedSeries parse_series(const std::string& text, int nvars, int max_degree,
                             const FieldPtr& field);

// One variable: the bare component expression.  Several variables: the
// components comma-separated in parentheses, "(x1 + x2^2, x2)".  The parser
// accepts optional parentheses in the one-variable case.
std::string render_jet(const JetDiffeo& f);
JetDiffeo parse_jet(const std::string& text, int nvars, int max_degree,
                    const FieldPtr& field);

// Same layout as jets with a " d/dxN" marker after each component; the
// parser accepts the marker with or without the variable index and ignores
// it (components are positional).
std::string render_vector_field(const JetVectorField& X);
JetVectorField parse_vector_field(const std::string& text, int nvars, int max_degree,
                                  const FieldPtr& field);

// ---------------------------------------------------------------------------
// JSON forms
//
//   series        {"nvars": n, "deg": K, "terms": [{"exp": [...], "coeff": "..."}]}
//   jet           {"nvars": n, "deg": K, "components": [<series>, ...]}
//   vector field  same as jet plus "role": "vectorfield"
//
// Terms are emitted in graded order with no zero coefficients; coefficients
// use the scalar text grammar.  The from_json readers validate the shape and
// throw UsageError on malformed input.
// ---------------------------------------------------------------------------

Json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const Json& j, const FieldPtr& field);

Json jet_to_json(const JetDiffeo& f);
JetDiffeo jet_from_json(const Json& j, const FieldPtr& field);

Json vector_field_to_json(const JetVectorField& X);
JetVectorField vector_field_from_json(const Json& j, const FieldPtr& field);

// {"eigenvalues": [...], "max_degree": K,
//  "violations": [{"exp": [...], "target": j}]}   (target is 1-based)
Json resonance_report_to_json(const ResonanceReport& r);
ResonanceReport resonance_report_from_json(const Json& j, const FieldPtr& field);

// {"k": k, "a": "...", "rho": "...", "conjugator": <jet>}
Json normal_form_to_json(const NormalForm1D& nf);
NormalForm1D normal_form_from_json(const Json& j, const FieldPtr& field);

// {"checked": n, "identity": ["g0 g1", ...], "undecided": [...]}
Json word_report_to_json(const WordReport& r);
WordReport word_report_from_json(const Json& j);

} // namespace jetforge
