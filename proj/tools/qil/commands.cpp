#include "qil/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qil/classifier.hpp"
#include "qil/constructions.hpp"
#include "qil/decomposition.hpp"
#include "qil/document.hpp"
#include "qil/theorems.hpp"

namespace qil::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  double eps_rel = 1e-9;
  std::string format = "text";
  std::uint64_t seed = 42;

  bool json_output() const { return format == "json"; }
  ToleranceProfile tolerance() const {
    ToleranceProfile tol;
    tol.eps_rel = eps_rel;
    return tol;
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double default_eps_rel() {
  const char* env = std::getenv("QIL_EPS_REL");
  if (env == nullptr || *env == '\0') return 1e-9;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !std::isfinite(v) || v <= 0.0) {
    throw UsageError(std::string("QIL_EPS_REL is not a positive number: ") + env);
  }
  return v;
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open input file: " + path);
  return std::string(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
}

json new_report(const std::string& command, const std::string& digest) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"inputs_digest", digest},
              {"verdicts", json::array()},
              {"warnings", json::array()}};
}

void warn(json& report, std::ostream& err, const std::string& message) {
  report["warnings"].push_back(message);
  err << "warning: " << message << '\n';
}

/// Catalog entry a document name refers to ("product_pair.S" -> "product_pair").
std::optional<CatalogEntry> catalog_for(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  const std::string id = name->substr(0, name->find('.'));
  const auto ids = catalog_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) return std::nullopt;
  return catalog_example(id);
}

void warn_if_flagged(const std::optional<CatalogEntry>& entry, json& report, std::ostream& err) {
  if (entry && entry->flagged()) {
    warn(report, err, "catalog entry '" + entry->id + "' is flagged: " + entry->discrepancy);
  }
}

std::string display_name(const MatrixDocument& doc, std::size_t index) {
  return doc.name ? *doc.name : "matrix " + std::to_string(index + 1);
}

json staircase_json(const std::vector<std::optional<int>>& staircase) {
  json arr = json::array();
  for (const auto& s : staircase) arr.push_back(s ? json(*s) : json(nullptr));
  return arr;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(const std::string& input, int m_max, int n_max, const Settings& s, std::istream& in,
                 std::ostream& out, std::ostream& err) {
  const std::string text = read_input(input, in);
  const auto docs = parse_documents(text);
  const ToleranceProfile tol = s.tolerance();
  json report = new_report("classify", inputs_digest(text));
  std::ostringstream txt;

  for (std::size_t i = 0; i < docs.size(); ++i) {
    const MatrixDocument& doc = docs[i];
    warn_if_flagged(catalog_for(doc.name), report, err);
    const QuasiProfile p = minimal_profile(doc.matrix, m_max, n_max, tol);

    json strict = json::array();
    for (const auto& [m, n] : p.strict_pairs) strict.push_back({{"m", m}, {"n", n}});
    json violations = json::array();
    for (const auto& [m, n] : p.monotonicity_violations) violations.push_back({{"m", m}, {"n", n}});
    report["verdicts"].push_back({{"name", display_name(doc, i)},
                                  {"dim", doc.dim()},
                                  {"m_max", m_max},
                                  {"n_max", n_max},
                                  {"eps_rel", s.eps_rel},
                                  {"staircase", staircase_json(p.staircase)},
                                  {"strict_pairs", strict},
                                  {"residual_table", p.residual_table},
                                  {"monotonicity_violations", violations}});

    txt << "== " << display_name(doc, i) << " (" << doc.dim() << "x" << doc.dim() << ") ==\n";
    txt << "staircase (minimal m per n, m <= " << m_max << "):\n";
    for (int n = 0; n <= n_max; ++n) {
      const auto& st = p.staircase[static_cast<std::size_t>(n)];
      txt << "  n=" << n << ": " << (st ? "m=" + std::to_string(*st) : std::string("none")) << '\n';
    }
    const bool uniform = std::all_of(p.staircase.begin(), p.staircase.end(),
                                     [&](const auto& v) { return v && v == p.staircase.front(); });
    if (uniform && p.strict_pairs.size() == p.staircase.size()) {
      txt << "m(n)=" << *p.staircase.front() << " for all n, strict\n";
    }
    txt << "strict pairs:";
    if (p.strict_pairs.empty()) txt << " none";
    for (const auto& [m, n] : p.strict_pairs) txt << " (m=" << m << ", n=" << n << ")";
    txt << "\nnormalized residuals |beta_{m,n}| / scale (accept <= " << sci(s.eps_rel) << "):\n      ";
    for (int n = 0; n <= n_max; ++n) txt << "  n=" << n << "      ";
    txt << '\n';
    for (int m = 1; m <= m_max; ++m) {
      txt << "  m=" << m << ' ';
      for (int n = 0; n <= n_max; ++n) {
        txt << "  " << sci(p.residual_table[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(n)]);
      }
      txt << '\n';
    }
    if (!p.monotonicity_violations.empty()) {
      warn(report, err, display_name(doc, i) + ": accepted pairs violate monotonicity");
    }
  }
  if (s.json_output()) {
    out << report.dump(2) << '\n';
  } else {
    out << txt.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// decompose

int cmd_decompose(const std::string& input, int n, int m, std::optional<int> margin, const Settings& s,
                  std::istream& in, std::ostream& out, std::ostream& err) {
  const std::string text = read_input(input, in);
  const auto docs = parse_documents(text);
  const ToleranceProfile tol = s.tolerance();
  json report = new_report("decompose", inputs_digest(text));
  std::ostringstream txt;

  for (std::size_t i = 0; i < docs.size(); ++i) {
    const MatrixDocument& doc = docs[i];
    const auto entry = catalog_for(doc.name);
    warn_if_flagged(entry, report, err);

    std::optional<int> use_margin = margin;
    if (!use_margin && entry && entry->shift) use_margin = static_cast<int>(entry->shift->interior_margin);
    std::optional<DenseMatrix> window;
    const auto d = static_cast<Eigen::Index>(doc.dim());
    if (use_margin && *use_margin > 0) {
      const Eigen::Index w = std::max<Eigen::Index>(0, d - *use_margin);
      window = DenseMatrix::Identity(d, d).leftCols(w);
    }

    const BlockDecomposition dec = block_decompose(doc.matrix, n, tol);
    const BlockFormCheck check = verify_block_form(dec, m, tol, window);
    const SpectralReport spec = spectral_report(doc.matrix, n, tol);

    json v = {{"name", display_name(doc, i)},
              {"dim", doc.dim()},
              {"n", n},
              {"m", m},
              {"rank", dec.rank()},
              {"t1_m_isometric", check.t1_m_isometric},
              {"t1_normalized", check.t1_normalized},
              {"t3_nilpotent", check.t3_nilpotent_n},
              {"t3_normalized", check.t3_normalized},
              {"lower_residual", dec.lower_residual},
              {"spectral_union", spec.union_check},
              {"t1_unimodular", spec.t1_unimodular_check},
              {"t1_min_singular", spec.t1_min_singular},
              {"window", window ? json(window->cols()) : json(nullptr)}};

    txt << "== " << display_name(doc, i) << " (" << doc.dim() << "x" << doc.dim() << "), n=" << n << ", m=" << m
        << " ==\n";
    txt << "blocks: r = dim cl R(T^n) = " << dec.rank() << ", d - r = " << doc.dim() - dec.rank() << '\n';
    if (window) txt << "T1 condition restricted to the interior window e_1..e_" << window->cols() << '\n';
    txt << "T1 " << m << "-isometric: " << (check.t1_m_isometric ? "yes" : "no") << " (normalized "
        << sci(check.t1_normalized) << ")\n";
    txt << "T3^" << n << " = 0: " << (check.t3_nilpotent_n ? "yes" : "no") << " (normalized "
        << sci(check.t3_normalized) << ")\n";
    txt << "|V* T U| = " << sci(dec.lower_residual) << '\n';

    if (!window) {
      const DefectReport direct = check_nqmi(doc.matrix, m, n, tol);
      const bool consistent = direct.accepted == check.holds();
      v["direct_accepted"] = direct.accepted;
      v["direct_normalized"] = direct.normalized;
      v["consistent"] = consistent;
      txt << "direct membership at (m=" << m << ", n=" << n << "): " << (direct.accepted ? "accepted" : "rejected")
          << " (normalized " << sci(direct.normalized) << "), block form "
          << (consistent ? "agrees" : "DISAGREES") << '\n';
      if (!consistent) warn(report, err, display_name(doc, i) + ": block form disagrees with direct membership");
    }

    txt << "sigma(T) = sigma(T1) + {0}: " << (spec.union_check ? "yes" : "no") << '\n';
    txt << "sigma(T1) on the unit circle: " << (spec.t1_unimodular_check ? "yes" : "no")
        << ", min singular value of T1 " << sci(spec.t1_min_singular) << '\n';

    try {
      const SimilaritySplit split = similarity_split(doc.matrix, n, tol);
      const double bound = 1e-8 * (1.0 + op_norm(doc.matrix)) * split.condition;
      v["similarity"] = {{"residual", split.residual}, {"condition", split.condition}, {"bound", bound}};
      txt << "similarity split: |X T X^-1 - diag(T1, T3)| = " << sci(split.residual) << ", cond(X) = "
          << sci(split.condition) << '\n';
    } catch (const SingularBlockError& e) {
      v["similarity"] = {{"error", e.what()}};
      txt << "similarity split: not applicable (" << e.what() << ")\n";
    } catch (const SpectraOverlapError& e) {
      v["similarity"] = {{"error", e.what()}};
      txt << "similarity split: not applicable (" << e.what() << ")\n";
    }
    report["verdicts"].push_back(std::move(v));
  }
  if (s.json_output()) {
    out << report.dump(2) << '\n';
  } else {
    out << txt.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

json verdict_json(const TheoremVerdict& v) {
  return {{"theorem_id", v.theorem_id},
          {"instance_digest", v.instance_digest},
          {"claim", v.claim},
          {"status", std::string(to_string(v.status))},
          {"passed", v.passed()},
          {"worst_residual", v.worst_residual},
          {"threshold", v.threshold},
          {"notes", v.notes}};
}

void verdict_line(std::ostream& out, const TheoremVerdict& v, bool with_notes) {
  out << '[' << to_string(v.status) << "] " << v.theorem_id << ' ' << v.instance_digest << ": " << v.claim
      << " (worst " << sci(v.worst_residual) << ", threshold " << sci(v.threshold) << ")\n";
  if (with_notes && !v.notes.empty()) out << "    " << v.notes << '\n';
}

int cmd_verify(const std::string& theorem, const std::optional<std::string>& catalog, int k, int count, bool verbose,
               const Settings& s, std::ostream& out, std::ostream& err) {
  const auto ids = theorem_ids();
  const bool all = theorem == "all";
  if (!all && std::find(ids.begin(), ids.end(), theorem) == ids.end()) {
    throw UsageError("unknown theorem id: " + theorem);
  }
  std::optional<CatalogEntry> entry;
  if (catalog) {
    const auto cids = catalog_ids();
    if (std::find(cids.begin(), cids.end(), *catalog) == cids.end()) {
      throw UsageError("unknown catalog id: " + *catalog);
    }
    entry = catalog_example(*catalog);
  }
  const std::string digest_src = "verify;theorem=" + theorem + ";catalog=" + catalog.value_or("") +
                                 ";k=" + std::to_string(k) + ";count=" + std::to_string(count) +
                                 ";seed=" + std::to_string(s.seed) + ";eps_rel=" + sci(s.eps_rel);
  json report = new_report("verify", inputs_digest(digest_src));
  report["seed"] = s.seed;
  warn_if_flagged(entry, report, err);

  const ToleranceProfile tol = s.tolerance();
  const std::vector<std::string> selected = all ? ids : std::vector<std::string>{theorem};
  std::vector<TheoremVerdict> verdicts;
  std::ostringstream txt;
  for (const auto& id : selected) {
    if (catalog) {
      try {
        verdicts.push_back(verify_catalog(id, *catalog, k, s.seed, tol));
      } catch (const std::invalid_argument& e) {
        if (!all) throw UsageError(e.what());
        warn(report, err, e.what());
      }
      continue;
    }
    const auto batch = run_randomized(id, count, s.seed, tol);
    const auto pass = std::count_if(batch.begin(), batch.end(), [](const auto& v) { return v.passed(); });
    const auto fail = std::count_if(batch.begin(), batch.end(), [](const auto& v) { return v.failed(); });
    txt << id << ": " << pass << " pass, " << fail << " fail, "
        << static_cast<std::ptrdiff_t>(batch.size()) - pass - fail << " vacuous\n";
    verdicts.insert(verdicts.end(), batch.begin(), batch.end());
  }

  int failures = 0;
  for (const auto& v : verdicts) {
    report["verdicts"].push_back(verdict_json(v));
    if (v.failed()) ++failures;
    if (catalog || verbose || !v.passed()) verdict_line(txt, v, catalog || verbose || v.failed() || v.vacuous());
  }
  txt << (failures == 0 ? "all non-vacuous verdicts pass" : std::to_string(failures) + " verdict(s) failed") << '\n';
  report["failures"] = failures;

  if (s.json_output()) {
    out << report.dump(2) << '\n';
  } else {
    out << txt.str();
  }
  return failures == 0 ? kExitOk : kExitVerificationFailure;
}

// ---------------------------------------------------------------------------
// example

int cmd_example(const std::string& id, std::size_t dim, double a, std::ostream& out, std::ostream& err) {
  ExampleOptions options;
  options.dim = dim;
  options.a = a;
  CatalogEntry entry;
  try {
    entry = catalog_example(id, options);
  } catch (const UnknownExampleError& e) {
    throw UsageError(e.what());
  }
  if (entry.flagged()) err << "warning: catalog entry '" << entry.id << "' is flagged: " << entry.discrepancy << '\n';
  std::vector<MatrixDocument> docs;
  for (std::size_t i = 0; i < entry.matrices.size(); ++i) {
    MatrixDocument d;
    d.matrix = entry.matrices[i];
    d.name = entry.matrices.size() == 1 ? entry.id : entry.id + "." + entry.names[i];
    d.source = "catalog: " + entry.claim;
    docs.push_back(std::move(d));
  }
  out << serialize_documents(docs) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Settings settings;
  try {
    settings.eps_rel = default_eps_rel();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Classify matrices as n-quasi-m-isometries and verify structural theorems", "qil"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--eps-rel", settings.eps_rel, "Relative acceptance tolerance (env QIL_EPS_REL sets the default)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", settings.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", settings.seed, "Seed for randomized instances");

  std::string input;
  int m_max = 5;
  int n_max = 3;
  auto* classify = app.add_subcommand("classify", "Print the (m, n) lattice of each matrix");
  classify->add_option("input", input, "Matrix document path (stdin when omitted or '-')");
  classify->add_option("--m-max", m_max, "Largest m examined")->check(CLI::Range(1, 20));
  classify->add_option("--n-max", n_max, "Largest n examined")->check(CLI::Range(0, 20));

  int dec_n = 1;
  int dec_m = 1;
  std::optional<int> margin;
  auto* decompose = app.add_subcommand("decompose", "Block decomposition on cl R(T^n) + N(T*^n)");
  decompose->add_option("input", input, "Matrix document path (stdin when omitted or '-')");
  decompose->add_option("--n", dec_n, "Power n")->check(CLI::Range(0, 20));
  decompose->add_option("--m", dec_m, "Isometry order m for the T1 block")->check(CLI::Range(1, 20));
  decompose->add_option("--margin", margin, "Restrict the T1 check to e_1..e_{d-margin}")->check(CLI::Range(0, 1000));

  std::string theorem;
  std::optional<std::string> catalog;
  int k = 2;
  int count = 100;
  bool verbose = false;
  auto* verify = app.add_subcommand("verify", "Check a theorem on catalog or seeded random instances");
  verify->add_option("theorem", theorem, "Theorem id, or 'all'")->required();
  verify->add_option("--catalog", catalog, "Catalog id to use instead of random instances");
  verify->add_option("--k", k, "Power or expansion degree for catalog checks")->check(CLI::Range(0, 12));
  verify->add_option("--count", count, "Random instances per theorem")->check(CLI::Range(0, 100000));
  verify->add_flag("--verbose", verbose, "Print every verdict");

  std::string example_id;
  std::size_t dim = 8;
  double a = 1.0;
  auto* example = app.add_subcommand("example", "Emit catalog matrices as documents");
  example->add_option("id", example_id, "Catalog id")->required();
  example->add_option("--dim", dim, "Truncation size for shift examples")->check(CLI::Range(2, 512));
  example->add_option("--a", a, "First weight of the sqrt-ratio shift")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(input, m_max, n_max, settings, in, out, err);
    if (decompose->parsed()) return cmd_decompose(input, dec_n, dec_m, margin, settings, in, out, err);
    if (verify->parsed()) return cmd_verify(theorem, catalog, k, count, verbose, settings, out, err);
    if (example->parsed()) return cmd_example(example_id, dim, a, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DocumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qil::cli
