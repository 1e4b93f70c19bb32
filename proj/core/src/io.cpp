#include "hah/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "hah/errors.hpp"
#include "json.hpp"

namespace hah::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string at(const std::string& source, int line, int col) {
  return source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": ";
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class ExprParser {
 public:
  ExprParser(const AlgebraPtr& alg, int arity, int degree, std::string_view text, const std::string& source, int line,
             int column_offset)
      : alg_(alg), arity_(arity), degree_(degree), s_(text), source_(source), line_(line), offset_(column_offset) {}

  Element parse() {
    Element out = Element::zero(alg_, arity_, degree_);
    skip();
    if (i_ == s_.size()) error(i_, "empty expression");
    bool first = true;
    while (i_ < s_.size()) {
      Scalar sign = Scalar::one(alg_->ring());
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -sign;
        ++i_;
        skip();
      } else if (!first) {
        error(i_, "expected '+' or '-'");
      }
      first = false;
      const std::size_t start = i_;
      auto [coef, slots] = term();
      coef *= sign;
      if (coef.is_zero()) continue;
      if (static_cast<int>(slots.size()) != arity_)
        error(start, "expected " + std::to_string(arity_) + " tensor factor(s), found " + std::to_string(slots.size()));
      Element t = slots.front();
      for (std::size_t k = 1; k < slots.size(); ++k) t = tensor(t, slots[k]);
      if (t.is_zero()) continue;
      if (t.degree() != degree_)
        error(start, "term has degree " + std::to_string(t.degree()) + ", expected " + std::to_string(degree_));
      out += coef * t;
    }
    return out;
  }

 private:
  [[noreturn]] void error(std::size_t pos, const std::string& msg) const {
    fail(ErrorCode::ParseError, at(source_, line_, offset_ + static_cast<int>(pos) + 1) + msg);
  }
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool tensor_sign() const { return s_.substr(i_, 3) == "(x)"; }

  std::string digits() {
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) error(i_, "expected a number");
    return std::string(s_.substr(start, i_ - start));
  }

  std::pair<Scalar, std::vector<Element>> term() {
    Scalar coef = Scalar::one(alg_->ring());
    std::vector<Element> slots;
    for (;;) {
      slots.push_back(slot(coef));
      skip();
      if (!tensor_sign()) break;
      i_ += 3;
      skip();
    }
    return {coef, slots};
  }

  Element slot(Scalar& coef) {
    Element m = Element::unit(alg_);
    for (;;) {
      skip();
      const std::size_t start = i_;
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num = digits();
        if (peek() == '/') {
          ++i_;
          num += "/" + digits();
        }
        try {
          coef *= Scalar::parse(alg_->ring(), num);
        } catch (const Error& e) {
          error(start, std::string("coefficient ") + num + ": " + e.what());
        }
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        const std::string name(s_.substr(start, i_ - start));
        auto idx = alg_->generator_index(name);
        if (!idx) error(start, "unknown generator '" + name + "'");
        int power = 1;
        skip();
        if (peek() == '^') {
          ++i_;
          skip();
          const std::size_t ppos = i_;
          power = std::stoi(digits());
          if (power < 1) error(ppos, "exponent must be positive");
        }
        try {
          for (int k = 0; k < power && !m.is_zero(); ++k) m = multiply(m, Element::generator(alg_, *idx));
        } catch (const Error& e) {
          error(start, e.what());
        }
      } else {
        error(start, c == '\0' ? "unexpected end of expression" : std::string("unexpected '") + c + "'");
      }
      skip();
      if (peek() == '*' || peek() == '.') {
        ++i_;
        continue;
      }
      return m;
    }
  }

  AlgebraPtr alg_;
  int arity_;
  int degree_;
  std::string_view s_;
  std::string source_;
  int line_;
  int offset_;
  std::size_t i_ = 0;
};

// Reader over the raw text, for locating JSON values in diagnostics.
class Document {
 public:
  Document(std::string text, std::string source) : text_(std::move(text)), source_(std::move(source)) {}

  const std::string& source() const { return source_; }

  std::size_t find_after(const std::string& needle, std::size_t from) const {
    if (from == std::string::npos) return std::string::npos;
    return text_.find(needle, from);
  }

  [[noreturn]] void error_at(std::size_t byte, const std::string& msg) const {
    auto [l, c] = byte == std::string::npos ? std::pair<int, int>{1, 1} : line_col(text_, byte);
    fail(ErrorCode::ParseError, at(source_, l, c) + msg);
  }

  /// Position of the value literal for `key` inside the object named `section`.
  std::size_t value_position(const std::string& section, const std::string& key, const std::string& value) const {
    std::size_t s = find_after(json(section).dump(), 0);
    std::size_t k = find_after(json(key).dump(), s);
    return find_after(json(value).dump(), k == std::string::npos ? k : k + json(key).dump().size());
  }

  Element element(const AlgebraPtr& alg, int arity, int degree, const std::string& section, const std::string& key,
                  const json& value) const {
    const std::size_t pos = value_position(section, key, value.is_string() ? value.get<std::string>() : "");
    if (!value.is_string()) error_at(pos, section + "." + key + " must be a string expression");
    auto [l, c] = pos == std::string::npos ? std::pair<int, int>{1, 0} : line_col(text_, pos);
    return parse_element(alg, arity, degree, value.get<std::string>(), source_, l, c);
  }

 private:
  std::string text_;
  std::string source_;
};

template <class T>
T field(const Document& doc, const json& obj, const std::string& name, std::size_t where) {
  if (!obj.contains(name)) doc.error_at(where, "missing field '" + name + "'");
  try {
    return obj.at(name).get<T>();
  } catch (const json::exception&) {
    doc.error_at(doc.find_after(json(name).dump(), where), "field '" + name + "' has the wrong type");
  }
}

Ring parse_ring(const Document& doc, const json& j) {
  const std::size_t where = doc.find_after("\"ring\"", 0);
  if (!j.is_object()) doc.error_at(where, "ring must be an object");
  const std::string kind = field<std::string>(doc, j, "kind", where);
  try {
    if (kind == "rational") return Ring::rational();
    const int p = field<int>(doc, j, "p", where);
    if (kind == "modp") return Ring::mod_p(p);
    if (kind == "localized") return Ring::localized(p);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    doc.error_at(where, e.what());
  }
  doc.error_at(where, "unknown ring kind '" + kind + "' (modp, localized, rational)");
}

std::string ring_kind(const Ring& r) {
  switch (r.kind()) {
    case RingKind::ModP: return "modp";
    case RingKind::Localized: return "localized";
    default: return "rational";
  }
}

Flavor parse_flavor(const Document& doc, const std::string& f) {
  if (f == "free-associative" || f == "associative") return Flavor::FreeAssociative;
  if (f == "graded-commutative" || f == "commutative") return Flavor::GradedCommutative;
  doc.error_at(doc.find_after("\"flavor\"", 0), "unknown flavor '" + f + "'");
}

bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

json parse_json(const Document& doc, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    doc.error_at(e.byte > 0 ? e.byte - 1 : 0, "malformed JSON");
  }
}

HahPresentation build(const Document& doc, const json& j, bool validate = true) {
  if (!j.is_object()) doc.error_at(0, "presentation must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    static const std::vector<std::string> known{"ring", "flavor", "cap", "generators", "differential",
                                                "diagonal", "homotopies", "metadata"};
    if (std::find(known.begin(), known.end(), key) == known.end())
      doc.error_at(doc.find_after(json(key).dump(), 0), "unknown field '" + key + "'");
  }
  const Ring ring = parse_ring(doc, field<json>(doc, j, "ring", 0));
  const Flavor flavor = parse_flavor(doc, field<std::string>(doc, j, "flavor", 0));
  const int cap = field<int>(doc, j, "cap", 0);
  const std::size_t gpos = doc.find_after("\"generators\"", 0);
  const json gens = field<json>(doc, j, "generators", 0);
  if (!gens.is_array()) doc.error_at(gpos, "generators must be an array");
  std::vector<GeneratorSpec> specs;
  std::size_t cursor = gpos;
  for (const auto& g : gens) {
    if (!g.is_object()) doc.error_at(cursor, "generator entries must be objects");
    GeneratorSpec s;
    s.name = field<std::string>(doc, g, "name", cursor);
    const std::size_t here = doc.find_after(json(s.name).dump(), cursor);
    if (!valid_name(s.name)) doc.error_at(here, "invalid generator name '" + s.name + "'");
    for (const auto& prev : specs)
      if (prev.name == s.name) doc.error_at(here, "duplicate generator '" + s.name + "'");
    s.degree = field<int>(doc, g, "degree", here);
    s.truncation = g.contains("truncation") ? field<int>(doc, g, "truncation", here) : 0;
    specs.push_back(s);
    if (here != std::string::npos) cursor = here + 1;
  }

  AlgebraPtr alg;
  try {
    alg = AlgebraPresentation::make(ring, flavor, specs, cap);
  } catch (const Error& e) {
    fail(ErrorCode::ValidationError, doc.source() + ": " + e.what());
  }
  const std::size_t k = specs.size();
  auto index_of = [&](const std::string& section, const std::string& key) {
    auto idx = alg->generator_index(key);
    if (!idx) doc.error_at(doc.find_after(json(key).dump(), doc.find_after(json(section).dump(), 0)),
                           section + " names unknown generator '" + key + "'");
    return static_cast<std::size_t>(*idx);
  };

  std::vector<Element> d, diag;
  for (const auto& s : specs) {
    d.push_back(Element::zero(alg, 1, s.degree - 1));
    diag.push_back(Element::zero(alg, 2, s.degree));
  }
  std::vector<std::optional<Element>> coassoc(k), cocomm(k);
  auto each = [&](const json& obj, const std::string& section, auto&& fn) {
    if (obj.is_null()) return;
    if (!obj.is_object()) doc.error_at(doc.find_after(json(section).dump(), 0), section + " must be an object");
    for (const auto& [key, v] : obj.items()) fn(index_of(section, key), key, v);
  };
  each(j.value("differential", json()), "differential", [&](std::size_t i, const std::string& key, const json& v) {
    d[i] = doc.element(alg, 1, specs[i].degree - 1, "differential", key, v);
  });
  each(j.value("diagonal", json()), "diagonal", [&](std::size_t i, const std::string& key, const json& v) {
    diag[i] = doc.element(alg, 2, specs[i].degree, "diagonal", key, v);
  });
  const json hom = j.value("homotopies", json());
  if (!hom.is_null()) {
    if (!hom.is_object()) doc.error_at(doc.find_after("\"homotopies\"", 0), "homotopies must be an object");
    each(hom.value("coassociativity", json()), "coassociativity",
         [&](std::size_t i, const std::string& key, const json& v) {
           coassoc[i] = doc.element(alg, 3, specs[i].degree + 1, "coassociativity", key, v);
         });
    each(hom.value("cocommutativity", json()), "cocommutativity",
         [&](std::size_t i, const std::string& key, const json& v) {
           cocomm[i] = doc.element(alg, 2, specs[i].degree + 1, "cocommutativity", key, v);
         });
  }
  int q = 0, rho = 0;
  const json meta = j.value("metadata", json());
  if (!meta.is_null()) {
    const std::size_t mpos = doc.find_after("\"metadata\"", 0);
    if (!meta.is_object()) doc.error_at(mpos, "metadata must be an object");
    if (meta.contains("q")) q = field<int>(doc, meta, "q", mpos);
    if (meta.contains("rho")) rho = field<int>(doc, meta, "rho", mpos);
  }

  try {
    HahPresentation h(alg, Derivation(alg, d), diag, coassoc, cocomm, q, rho);
    if (!validate) return h;
    VerificationReport rep = verify_presentation(h);
    for (const auto& c : rep.checks)
      if (!c.passed) fail(ErrorCode::ValidationError, doc.source() + ": " + c.name + " fails: " + c.detail);
    return h;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ValidationError) throw;
    fail(ErrorCode::ValidationError, doc.source() + ": " + e.what());
  }
}

ordered_json to_json(const HahPresentation& h) {
  const auto& alg = h.algebra();
  ordered_json j;
  j["ring"] = ordered_json::object();
  j["ring"]["kind"] = ring_kind(h.ring());
  if (h.ring().kind() != RingKind::Rational) j["ring"]["p"] = h.ring().prime();
  j["flavor"] = flavor_name(alg->flavor());
  j["cap"] = h.cap();
  j["generators"] = ordered_json::array();
  ordered_json d = ordered_json::object(), diag = ordered_json::object();
  ordered_json coassoc = ordered_json::object(), cocomm = ordered_json::object();
  for (std::size_t i = 0; i < alg->generator_count(); ++i) {
    const auto& g = alg->generators()[i];
    j["generators"].push_back({{"name", g.name}, {"degree", g.degree}, {"truncation", g.truncation}});
    d[g.name] = h.differential().value(i).to_string();
    diag[g.name] = h.generator_diagonal(i).to_string();
    if (h.coassociativity_witness(i)) coassoc[g.name] = h.coassociativity_witness(i)->to_string();
    if (h.cocommutativity_witness(i)) cocomm[g.name] = h.cocommutativity_witness(i)->to_string();
  }
  j["differential"] = d;
  j["diagonal"] = diag;
  if (!coassoc.empty() || !cocomm.empty()) {
    j["homotopies"] = ordered_json::object();
    if (!coassoc.empty()) j["homotopies"]["coassociativity"] = coassoc;
    if (!cocomm.empty()) j["homotopies"]["cocommutativity"] = cocomm;
  }
  j["metadata"] = {{"q", h.q()}, {"rho", h.rho()}};
  return j;
}

}  // namespace

Element parse_element(const AlgebraPtr& algebra, int arity, int degree, std::string_view text, const std::string& source,
                      int line, int column_offset) {
  return ExprParser(algebra, arity, degree, text, source, line, column_offset).parse();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HahPresentation parse_presentation_text(const std::string& text, const std::string& source, bool validate) {
  Document doc(text, source);
  return build(doc, parse_json(doc, text), validate);
}

HahPresentation parse_presentation(const std::string& path, bool validate) {
  return parse_presentation_text(read_file(path), path, validate);
}

std::string render_presentation(const HahPresentation& h) { return to_json(h).dump(2) + "\n"; }

HahPresentation rebase_presentation(const HahPresentation& h, const AlgebraPtr& algebra) {
  if (!h.algebra()->same_structure(*algebra))
    fail(ErrorCode::MixedPresentation, "presentations have different generators");
  std::vector<Element> d, diag;
  std::vector<std::optional<Element>> coassoc, cocomm;
  for (std::size_t i = 0; i < algebra->generator_count(); ++i) {
    d.push_back(h.differential().value(i).rebased(algebra));
    diag.push_back(h.generator_diagonal(i).rebased(algebra));
    const auto& f = h.coassociativity_witness(i);
    const auto& g = h.cocommutativity_witness(i);
    coassoc.push_back(f ? std::optional<Element>(f->rebased(algebra)) : std::nullopt);
    cocomm.push_back(g ? std::optional<Element>(g->rebased(algebra)) : std::nullopt);
  }
  return HahPresentation(algebra, Derivation(algebra, d), diag, coassoc, cocomm, h.q(), h.rho());
}

std::string trivialization_certificate(const ExtensionProblem& problem, const ExtensionIso& iso) {
  ordered_json j;
  j["certificate"] = "trivialization";
  j["presentation"] = to_json(problem.extension());
  j["generator"] = problem.x.name;
  j["a"] = iso.a.to_string();
  j["psi"] = iso.psi.to_string();
  j["stop_page"] = iso.stop_page;
  j["torsion_exponent"] = iso.torsion_exponent;
  return j.dump(2) + "\n";
}

std::string primitivization_certificate(const HahPresentation& source, const PrimitivizationResult& result) {
  ordered_json j;
  j["certificate"] = "primitivization";
  j["source"] = to_json(source);
  j["output"] = to_json(result.output);
  ordered_json theta = ordered_json::object(), hom = ordered_json::object();
  const auto& alg = source.algebra();
  for (std::size_t i = 0; i < result.theta.size(); ++i) {
    theta[alg->generators()[i].name] = result.theta[i].to_string();
    hom[alg->generators()[i].name] = result.homotopy[i].to_string();
  }
  j["theta"] = theta;
  j["homotopy"] = hom;
  return j.dump(2) + "\n";
}

bool is_certificate(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  return j.is_object() && j.contains("certificate");
}

CertificateCheck verify_certificate(const std::string& text, const std::string& source) {
  Document doc(text, source);
  const json j = parse_json(doc, text);
  if (!j.is_object()) doc.error_at(0, "certificate must be a JSON object");
  CertificateCheck out;
  out.kind = field<std::string>(doc, j, "certificate", 0);
  if (out.kind == "trivialization") {
    const std::size_t ppos = doc.find_after("\"presentation\"", 0);
    const HahPresentation ext = build(doc, field<json>(doc, j, "presentation", ppos));
    const auto& alg = ext.algebra();
    const std::size_t k = alg->generator_count();
    const std::string name = field<std::string>(doc, j, "generator", 0);
    if (k == 0 || alg->generators()[k - 1].name != name) {
      out.failures.push_back("generator '" + name + "' is not the last generator");
      return out;
    }
    const HahPresentation base = ext.prefix(k - 1);
    const int n = alg->generators()[k - 1].degree;
    const Element a = doc.element(base.algebra(), 1, n, "certificate", "a", j.value("a", json()));
    const Element psi = doc.element(base.algebra(), 2, n + 1, "certificate", "psi", j.value("psi", json()));
    const Element phi = ext.generator_diagonal(k - 1).rebased(base.algebra());
    if (!base.is_primitively_generated()) out.failures.push_back("base is not primitively generated");
    const Element da = base.differential().apply(a);
    if (!da.is_zero()) out.failures.push_back("∂a = " + da.to_string());
    const Element res = base.reduced_diagonal(a) - phi - base.differential().apply(psi);
    if (!res.is_zero()) out.failures.push_back("Δ̄a − Φ − ∂Ψ = " + res.to_string());
    return out;
  }
  if (out.kind == "primitivization") {
    const HahPresentation src = build(doc, field<json>(doc, j, "source", 0));
    const HahPresentation tgt_raw = build(doc, field<json>(doc, j, "output", 0));
    if (!tgt_raw.algebra()->same_structure(*src.algebra())) {
      out.failures.push_back("output has different generators");
      return out;
    }
    const auto& alg = src.algebra();
    PrimitivizationResult result{rebase_presentation(tgt_raw, alg), {}, {}, {}};
    const json theta = field<json>(doc, j, "theta", 0), hom = field<json>(doc, j, "homotopy", 0);
    for (const auto& g : alg->generators()) {
      if (!theta.contains(g.name) || !hom.contains(g.name)) {
        out.failures.push_back("missing Θ or H for " + g.name);
        return out;
      }
      result.theta.push_back(doc.element(alg, 1, g.degree, "theta", g.name, theta.at(g.name)));
      result.homotopy.push_back(doc.element(alg, 2, g.degree + 1, "homotopy", g.name, hom.at(g.name)));
    }
    if (!result.output.is_primitively_generated()) out.failures.push_back("output is not primitively generated");
    for (auto& f : primitivization_failures(src, result)) out.failures.push_back(std::move(f));
    return out;
  }
  doc.error_at(doc.find_after("\"certificate\"", 0), "unknown certificate kind '" + out.kind + "'");
}

}  // namespace hah::io
