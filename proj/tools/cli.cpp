#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <random>

#include "CLI11.hpp"
#include "hah/bockstein.hpp"
#include "hah/cobar.hpp"
#include "hah/errors.hpp"
#include "hah/io.hpp"
#include "hah/primitivization.hpp"
#include "json.hpp"

namespace hah::cli {

namespace {

using nlohmann::ordered_json;

struct Options {
  std::string file;
  int prime = 0;
  int cap = 0;
  std::optional<int> degree;
  std::uint64_t seed = 1;
  int page_max = 0;
  std::string emit = "text";
  int count = 20;
  std::string certificate;
};

class Emitter {
 public:
  Emitter(std::ostream& out, bool records) : out_(out), records_(records) {}
  bool records() const { return records_; }
  void text(const std::string& line) {
    if (!records_) out_ << line << "\n";
  }
  void record(const ordered_json& j) {
    if (records_) out_ << j.dump() << "\n";
  }

 private:
  std::ostream& out_;
  bool records_;
};

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

HahPresentation load(const Options& o) {
  if (o.file.empty()) fail(ErrorCode::InvalidArgument, "a presentation file is required");
  HahPresentation h = io::parse_presentation(o.file);
  if (o.prime > 0 && o.prime != h.ring().prime()) {
    switch (h.ring().kind()) {
      case RingKind::ModP: h = h.with_ring(Ring::mod_p(o.prime)); break;
      case RingKind::Localized: h = h.with_ring(Ring::localized(o.prime)); break;
      default: fail(ErrorCode::InvalidArgument, "--prime does not apply to a rational presentation");
    }
  }
  if (o.cap > 0) h = h.with_cap(o.cap);
  return h;
}

std::pair<int, int> range(const Options& o, int lo, int hi) {
  if (o.degree) return {*o.degree, *o.degree};
  return {lo, hi};
}

void write_certificate(const Options& o, const std::string& text) {
  if (o.certificate.empty()) return;
  std::ofstream f(o.certificate, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + o.certificate);
  f << text;
}

int cmd_basis(const Options& o, Emitter& em) {
  HahPresentation h = load(o);
  const auto& alg = h.algebra();
  auto [lo, hi] = range(o, 0, h.cap());
  for (int n = lo; n <= hi; ++n) {
    std::vector<std::string> names;
    for (const auto& m : alg->basis(n)) names.push_back(alg->render(m));
    em.text("A_" + std::to_string(n) + " dim " + std::to_string(names.size()) + (names.empty() ? "" : ": ") +
            join(names, ", "));
    em.record({{"command", "basis"}, {"degree", n}, {"dimension", names.size()}, {"basis", names}});
  }
  return 0;
}

int cmd_homology(const Options& o, Emitter& em) {
  HahPresentation h = load(o);
  ChainComplex c = h.complex();
  auto [lo, hi] = range(o, 0, h.cap() - 1);
  for (int n = lo; n <= hi; ++n) {
    HomologySlice s = homology_at(c, n);
    std::string line = "H_" + std::to_string(n) + " free rank " + std::to_string(s.free_rank);
    if (!s.torsion_exponents.empty()) {
      std::vector<std::string> t;
      for (int e : s.torsion_exponents) t.push_back("Z/p^" + std::to_string(e));
      line += ", torsion " + join(t, " + ");
    }
    em.text(line);
    em.record({{"command", "homology"}, {"degree", n}, {"free_rank", s.free_rank}, {"torsion_exponents", s.torsion_exponents}});
  }
  return 0;
}

int cmd_primitives(const Options& o, Emitter& em) {
  HahPresentation h = load(o);
  auto [lo, hi] = range(o, 1, h.cap());
  for (int n = lo; n <= hi; ++n) {
    PrimitiveSlice s = primitives_at(h, n);
    std::vector<std::string> reps;
    for (const auto& e : s.basis) reps.push_back(e.to_string());
    if (!reps.empty() || o.degree)
      em.text("P_" + std::to_string(n) + " dim " + std::to_string(reps.size()) + (reps.empty() ? "" : ": ") +
              join(reps, "; "));
    em.record({{"command", "primitives"}, {"degree", n}, {"dimension", reps.size()}, {"basis", reps}});
  }
  return 0;
}

int cmd_jmap(const Options& o, Emitter& em) {
  HahPresentation h = load(o);
  auto [lo, hi] = range(o, 1, h.cap() - 1);
  for (int n = lo; n <= hi; ++n) {
    JMapSlice j;
    try {
      j = j_map_at(h, n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegreeOutOfCap || o.degree) throw;
      break;
    }
    em.text("j in degree " + std::to_string(n) + ": H(PA) dim " + std::to_string(j.dim_HPA) + ", PH(A) dim " +
            std::to_string(j.dim_PHA) + ", rank " + std::to_string(j.rank) + ", kernel dim " +
            std::to_string(j.kernel_dim) + ", cokernel dim " + std::to_string(j.cokernel_dim) +
            (j.is_isomorphism() ? " (isomorphism)" : ""));
    em.record({{"command", "jmap"},
               {"degree", n},
               {"dim_HPA", j.dim_HPA},
               {"dim_HA", j.dim_HA},
               {"dim_PHA", j.dim_PHA},
               {"rank", j.rank},
               {"kernel_dim", j.kernel_dim},
               {"cokernel_dim", j.cokernel_dim},
               {"matrix", matrix_json(j.matrix)}});
  }
  return 0;
}

int cmd_bockstein(const Options& o, Emitter& em) {
  HahPresentation h = load(o);
  if (h.ring().kind() != RingKind::Localized) fail(ErrorCode::InvalidArgument, "bockstein needs a Z_(p) presentation");
  Bockstein bss(h.complex());
  auto [lo, hi] = range(o, 0, h.cap() - 1);
  BocksteinResult res = bss.pages(lo, hi, o.page_max);
  for (int n = lo; n <= hi; ++n) {
    for (const auto& page : res.pages) {
      auto it = page.degrees.find(n);
      const std::size_t dim = page.dimension(n);
      Matrix beta = it == page.degrees.end() ? Matrix(h.ring().residue_field(), 0, 0) : it->second.beta;
      std::string line = "E^" + std::to_string(page.r) + "_" + std::to_string(n) + " dim " + std::to_string(dim);
      if (!beta.is_zero()) line += ", beta " + matrix_json(beta).dump();
      em.text(line);
      em.record({{"command", "bockstein"}, {"degree", n}, {"page", page.r}, {"dimension", dim}, {"beta", matrix_json(beta)}});
    }
  }
  return 0;
}

ExtensionProblem last_generator_problem(const HahPresentation& h) {
  const auto& alg = h.algebra();
  const std::size_t k = alg->generator_count();
  if (k == 0) fail(ErrorCode::InvalidArgument, "presentation has no generators");
  HahPresentation base = h.prefix(k - 1);
  const auto& b = base.algebra();
  auto rebased = [&b](const std::optional<Element>& e) {
    return e ? std::optional<Element>(e->rebased(b)) : std::nullopt;
  };
  return ExtensionProblem::make(base, alg->generators()[k - 1], h.differential().value(k - 1).rebased(b),
                                h.generator_diagonal(k - 1).rebased(b), rebased(h.coassociativity_witness(k - 1)),
                                rebased(h.cocommutativity_witness(k - 1)));
}

int cmd_trivialize(const Options& o, Emitter& em) {
  HahPresentation h = load(o);
  ExtensionProblem problem = last_generator_problem(h);
  const std::string x = problem.x.name;
  PrimitivizationConfig cfg = PrimitivizationConfig::for_presentation(h);
  std::optional<ExtensionIso> found;
  try {
    found = trivialize_extension(problem, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Obstructed) throw;
    em.text(std::string("obstructed: ") + e.what());
    em.record({{"command", "trivialize"}, {"field", "obstruction"}, {"value", e.what()}});
    return 1;
  }
  const ExtensionIso& iso = *found;
  const std::string cert = io::trivialization_certificate(problem, iso);
  io::CertificateCheck check = io::verify_certificate(cert);
  const std::string theta = iso.a.is_zero() ? x : x + " + " + iso.a.to_string();
  em.text("extension by " + x + " in degree " + std::to_string(problem.degree()) + " over " + h.ring().name());
  em.text(iso.stop_page > 0 ? "staged to page " + std::to_string(iso.stop_page) + " (torsion exponent " +
                                  std::to_string(iso.torsion_exponent) + ")"
                            : std::string("solved by the cobar oracle"));
  em.text(iso.a.is_zero() ? "theta = id" : "theta(" + x + ") = " + theta);
  em.text("psi = " + iso.psi.to_string());
  em.text(check.ok() ? "certificate verified" : "certificate FAILED: " + join(check.failures, "; "));
  em.record({{"command", "trivialize"}, {"field", "theta"}, {"generator", x}, {"value", theta}});
  em.record({{"command", "trivialize"}, {"field", "a"}, {"value", iso.a.to_string()}});
  em.record({{"command", "trivialize"}, {"field", "psi"}, {"value", iso.psi.to_string()}});
  em.record({{"command", "trivialize"}, {"field", "stop_page"}, {"value", iso.stop_page}});
  em.record({{"command", "trivialize"}, {"field", "torsion_exponent"}, {"value", iso.torsion_exponent}});
  em.record({{"command", "trivialize"}, {"field", "verified"}, {"value", check.ok()}});
  write_certificate(o, cert);
  return check.ok() ? 0 : 1;
}

int cmd_primitivize(const Options& o, Emitter& em) {
  HahPresentation h = load(o);
  PrimitivizationConfig cfg = PrimitivizationConfig::for_presentation(h);
  std::optional<PrimitivizationResult> found;
  try {
    found = primitivize(h, cfg);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Obstructed) throw;
    em.text(std::string("obstructed: ") + e.what());
    em.record({{"command", "primitivize"}, {"field", "obstruction"}, {"value", e.what()}});
    return 1;
  }
  const PrimitivizationResult& res = *found;
  const std::string cert = io::primitivization_certificate(h, res);
  io::CertificateCheck check = io::verify_certificate(cert);
  const auto& alg = h.algebra();
  for (std::size_t i = 0; i < res.theta.size(); ++i) {
    const std::string g = alg->generators()[i].name;
    em.text("theta(" + g + ") = " + res.theta[i].to_string());
    em.text("H(" + g + ") = " + res.homotopy[i].to_string());
    em.record({{"command", "primitivize"}, {"field", "theta"}, {"generator", g}, {"value", res.theta[i].to_string()}});
    em.record({{"command", "primitivize"}, {"field", "homotopy"}, {"generator", g}, {"value", res.homotopy[i].to_string()}});
  }
  em.text("output presentation:");
  const std::string rendered = io::render_presentation(res.output);
  em.text(rendered.substr(0, rendered.size() - 1));
  em.text(check.ok() ? "certificate verified" : "certificate FAILED: " + join(check.failures, "; "));
  em.record({{"command", "primitivize"}, {"field", "output"}, {"value", ordered_json::parse(rendered)}});
  em.record({{"command", "primitivize"}, {"field", "verified"}, {"value", check.ok()}});
  write_certificate(o, cert);
  return check.ok() ? 0 : 1;
}

int cmd_verify(const Options& o, Emitter& em) {
  if (o.file.empty()) fail(ErrorCode::InvalidArgument, "a presentation or certificate file is required");
  const std::string text = io::read_file(o.file);
  if (io::is_certificate(text)) {
    io::CertificateCheck c = io::verify_certificate(text, o.file);
    em.text("certificate " + c.kind + ": " + (c.ok() ? "verified" : "FAILED"));
    for (const auto& f : c.failures) em.text("  " + f);
    em.record({{"command", "verify"}, {"certificate", c.kind}, {"passed", c.ok()}, {"failures", c.failures}});
    return c.ok() ? 0 : 1;
  }
  HahPresentation h = io::parse_presentation_text(text, o.file, false);
  VerificationReport rep = verify_presentation(h);
  for (const auto& c : rep.checks) {
    em.text(std::string(c.passed ? "pass" : "FAIL") + "  " + c.name + (c.detail.empty() ? "" : "  (" + c.detail + ")"));
    em.record({{"command", "verify"}, {"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  return rep.ok() ? 0 : 1;
}

int cmd_oracle_check(const Options& o, Emitter& em) {
  const int p = o.prime > 0 ? o.prime : 3;
  const int cap = o.cap > 0 ? o.cap : 10;
  std::mt19937_64 rng(o.seed);
  ExtensionCorpusStats stats;
  int agree = 0;
  for (int i = 0; i < o.count; ++i) {
    ExtensionProblem pr = random_extension_problem(p, cap, rng, &stats);
    TruncatedCobar cobar = build_truncated_cobar(pr.base, pr.degree() + 1);
    const bool oracle_free = !oracle_trivialize(cobar, pr.phi).obstructed();
    bool staged_free = true;
    int stop = 0;
    try {
      ExtensionIso iso = trivialize_extension(pr, PrimitivizationConfig::for_presentation(pr.base));
      stop = iso.stop_page;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Obstructed) throw;
      staged_free = false;
    }
    const bool same = staged_free == oracle_free;
    agree += same;
    em.record({{"command", "oracle-check"},
               {"instance", i},
               {"degree", pr.degree()},
               {"stop_page", stop},
               {"staged", staged_free ? "trivialized" : "obstructed"},
               {"oracle", oracle_free ? "trivialized" : "obstructed"},
               {"agree", same}});
  }
  em.text("p = " + std::to_string(p) + ", cap = " + std::to_string(cap) + ", seed = " + std::to_string(o.seed) + ", " +
          std::to_string(stats.rejected) + " draws rejected");
  em.text("staged == oracle on " + std::to_string(agree) + "/" + std::to_string(o.count) + " instances");
  em.record({{"command", "oracle-check"}, {"agree", agree}, {"instances", o.count}, {"rejected", stats.rejected}});
  return agree == o.count ? 0 : 1;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Obstructed:
    case ErrorCode::TheoryViolation:
    case ErrorCode::IterationBoundExceeded:
    case ErrorCode::HypothesisFails: return 1;
    default: return 2;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hopf algebras up to homotopy: homology, Bockstein pages, and primitivization", "hahtool"};
  app.require_subcommand(1);
  Options o;
  using Handler = int (*)(const Options&, Emitter&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"basis", "monomial basis of A_n", cmd_basis},
      {"homology", "H_n(A) as free rank and torsion exponents", cmd_homology},
      {"primitives", "primitive elements P_n", cmd_primitives},
      {"jmap", "j : H(PA) -> PH(A)", cmd_jmap},
      {"bockstein", "Bockstein pages E^r_n with β^r", cmd_bockstein},
      {"trivialize", "straighten the diagonal of the last generator", cmd_trivialize},
      {"primitivize", "isomorphic primitively generated presentation", cmd_primitivize},
      {"verify", "check a presentation or replay a certificate", cmd_verify},
      {"oracle-check", "staged trivialization against the cobar oracle on a seeded corpus", cmd_oracle_check},
  };
  std::vector<std::pair<CLI::App*, Handler>> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (name != "oracle-check") sub->add_option("file", o.file, "presentation JSON file");
    sub->add_option("--prime", o.prime, "prime p");
    sub->add_option("--cap", o.cap, "degree cap");
    sub->add_option("--degree", o.degree, "single degree");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--page-max", o.page_max, "last Bockstein page");
    sub->add_option("--emit", o.emit, "text or records")->check(CLI::IsMember({"text", "records"}));
    if (name == "oracle-check") sub->add_option("--count", o.count, "number of instances");
    if (name == "trivialize" || name == "primitivize")
      sub->add_option("--certificate", o.certificate, "write the certificate JSON here");
    subs.emplace_back(sub, fn);
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "hahtool: " << e.what() << "\n";
    return 2;
  }
  Emitter em(out, o.emit == "records");
  for (const auto& [sub, fn] : subs) {
    if (!sub->parsed()) continue;
    try {
      return fn(o, em);
    } catch (const Error& e) {
      err << "hahtool " << sub->get_name() << ": " << e.what() << "\n";
      return exit_code(e.code());
    }
  }
  return 2;
}

}  // namespace hah::cli
