#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hah/hopf.hpp"
#include "hah/primitivization.hpp"

namespace hah::io {

/// Element in canonical syntax, e.g. "2*x^2*y + 1/2*y^3" or "u.v (x) u".
/// Factors may be joined by '*' or '.'; "(x)" separates tensor factors.
/// Throws ParseError "source:line:col: ..." where line and col locate the
/// offending character (line 1 unless `line` is given).
Element parse_element(const AlgebraPtr& algebra, int arity, int degree, std::string_view text,
                      const std::string& source = "<expr>", int line = 1, int column_offset = 0);

/// JSON presentation file. ParseError for malformed input (with line and
/// column), ValidationError when verify_presentation rejects the result
/// (skipped with validate = false).
HahPresentation parse_presentation_text(const std::string& text, const std::string& source = "<input>",
                                        bool validate = true);
HahPresentation parse_presentation(const std::string& path, bool validate = true);

/// Canonical JSON form; parse ∘ render is the identity on it.
std::string render_presentation(const HahPresentation& h);

/// Same presentation on another algebra object with the same generators.
HahPresentation rebase_presentation(const HahPresentation& h, const AlgebraPtr& algebra);

std::string trivialization_certificate(const ExtensionProblem& problem, const ExtensionIso& iso);
std::string primitivization_certificate(const HahPresentation& source, const PrimitivizationResult& result);

struct CertificateCheck {
  std::string kind;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Whether the JSON text is a certificate rather than a presentation.
bool is_certificate(const std::string& text);
/// Replays a certificate from scratch.
CertificateCheck verify_certificate(const std::string& text, const std::string& source = "<certificate>");

std::string read_file(const std::string& path);

}  // namespace hah::io
