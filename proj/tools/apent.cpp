// apent: command-line front end for the annealed almost-periodic entropy
// library.  Subcommands:
//
//   apent entropy    --spec FILE [--method M] [--levels N] [--tol T]
//                    [--enum-order SEQ] [--out FILE] [--csv]
//   apent verblunsky --spec FILE [--levels N] [--enum-order SEQ]
//                    [--roundtrip | --inverse] [--out FILE] [--csv]
//   apent simulate   --suite NAME [--n N] [--samples S] [--seed SEED]
//                    [--dump] [--out FILE] [--csv]
//   apent mollify    --spec FILE --t-grid T1,T2,... [--method M] [--levels N]
//                    [--out FILE]
//
// Exit codes: 0 success; 1 invalid input or usage; 2 a valid but flagged
// result (a singular input with entropy -infinity, a singular coefficient
// prefix, or a failing simulation suite).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "apent/entropy.hpp"
#include "apent/io.hpp"
#include "apent/randrep.hpp"
#include "apent/verblunsky.hpp"

namespace {

using apent::io::json;
using apent::freegroup::Enumeration;
using apent::freegroup::LetterOrder;
using apent::freegroup::Word;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kFlagged = 2;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw apent::InvalidSpecError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw apent::InvalidSpecError(path + ": " + e.what());
  }
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) {
      throw apent::InvalidSpecError("not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

LetterOrder parse_order(const std::string& text, int rank) {
  if (text.empty()) return LetterOrder::standard(rank);
  std::vector<int> letters;
  std::string item;
  std::istringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size()) {
      throw apent::InvalidSpecError("not a letter index: '" + item + "'");
    }
    letters.push_back(v);
  }
  return LetterOrder::from_sequence(rank, letters);
}

std::string format_double(double x) {
  if (x == kNegInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Writes `doc` to `out` and prints the summary line, or prints `doc` itself
// when no output path was given.
void emit(const std::string& doc, const std::string& out,
          const std::string& summary) {
  if (out.empty()) {
    std::cout << doc;
    if (!doc.empty() && doc.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw apent::InvalidSpecError("cannot write " + out);
  file << doc;
  std::cout << summary << " -> " << out << "\n";
}

struct EntropyArgs {
  std::string spec, method = "all", enum_order, out;
  int levels = -1;
  double tol = apent::entropy::kStabilizeTol;
  bool csv = false;
};

int cmd_entropy(const EntropyArgs& args) {
  const apent::pdf::PdfSpec spec =
      apent::io::pdf_spec_from_json(load_json(args.spec));
  std::vector<apent::entropy::Method> methods;
  if (args.method == "all") {
    methods = {apent::entropy::Method::Formula1,
               apent::entropy::Method::Formula2,
               apent::entropy::Method::Verblunsky,
               apent::entropy::Method::Seward};
  } else {
    methods = {apent::entropy::method_from_name(args.method)};
  }
  const LetterOrder order = parse_order(args.enum_order, spec.rank());

  std::vector<apent::entropy::EntropyReport> reports;
  reports.reserve(methods.size());
  for (const auto method : methods) {
    reports.push_back(apent::entropy::estimate_hann(spec, method, args.levels,
                                                    args.tol, order));
  }
  bool flagged = false;
  std::string summary = "entropy:";
  for (const auto& rep : reports) {
    flagged = flagged || rep.estimate == kNegInf;
    summary += " " + apent::entropy::method_name(rep.method) + "=" +
               format_double(rep.estimate);
  }

  std::string doc;
  if (args.csv) {
    if (reports.size() != 1) {
      throw apent::InvalidSpecError("--csv needs a single --method");
    }
    doc = apent::io::entropy_report_to_csv(reports.front());
  } else if (reports.size() == 1) {
    doc = apent::io::entropy_report_to_json(reports.front()).dump(2) + "\n";
  } else {
    json list = json::array();
    for (const auto& rep : reports) {
      list.push_back(apent::io::entropy_report_to_json(rep));
    }
    doc = json{{"reports", std::move(list)}}.dump(2) + "\n";
  }
  emit(doc, args.out, summary);
  return flagged ? kFlagged : kOk;
}

struct VerblunskyArgs {
  std::string spec, enum_order, out;
  int levels = 2;
  bool inverse = false, roundtrip = false, csv = false;
};

int cmd_verblunsky(const VerblunskyArgs& args) {
  if (args.inverse) {
    // The input file holds a coefficient sequence; rebuild the partial
    // positive definite function it parametrizes.
    const auto [order, coeffs] =
        apent::io::coefficient_sequence_from_json(load_json(args.spec));
    const Enumeration en = Enumeration::length_lex(
        order.rank(), order, static_cast<int>(coeffs.size()) + 1);
    const apent::pdf::PartialPdf partial =
        apent::verblunsky::reconstruct(coeffs, en);
    json words = json::array();
    for (const Word& w : partial.set.elements()) {
      words.push_back(apent::io::word_to_json(w));
    }
    const json out{{"k", partial.k},
                   {"words", std::move(words)},
                   {"gram", apent::io::matrix_to_json(partial.q)}};
    emit(out.dump(2) + "\n", args.out,
         "verblunsky: reconstructed " + std::to_string(partial.set.size()) +
             " words");
    return kOk;
  }

  const apent::pdf::PdfSpec spec =
      apent::io::pdf_spec_from_json(load_json(args.spec));
  const LetterOrder order = parse_order(args.enum_order, spec.rank());
  if (args.levels < 0) {
    throw apent::InvalidSpecError("--levels must be non-negative");
  }
  const int count =
      apent::freegroup::ball(spec.rank(), args.levels, order).size();
  const Enumeration en = Enumeration::length_lex(spec.rank(), order, count);

  std::vector<apent::matent::Contraction> coeffs;
  try {
    coeffs = apent::verblunsky::coefficient_sequence(spec, en, count - 1);
  } catch (const apent::SingularPrefixError& e) {
    std::cerr << "singular prefix at step " << e.step << ": " << e.what()
              << "\n";
    return kFlagged;
  }

  json out = apent::io::coefficient_sequence_to_json(coeffs, order);
  std::string summary =
      "verblunsky: " + std::to_string(coeffs.size()) + " coefficients";
  if (args.roundtrip) {
    const apent::pdf::PartialPdf partial =
        apent::verblunsky::reconstruct(coeffs, en);
    const std::vector<apent::matent::Contraction> again =
        apent::verblunsky::coefficient_sequence_of(partial);
    double err = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      err = std::max(err, (coeffs[i].entries() - again[i].entries())
                              .cwiseAbs()
                              .maxCoeff());
    }
    out["roundtrip_max_error"] = err;
    summary += " roundtrip_max_error=" + format_double(err);
  }

  std::string doc;
  if (args.csv) {
    doc = "step,rows,cols,norm\n";
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      doc += std::to_string(i) + "," + std::to_string(coeffs[i].rows()) + "," +
             std::to_string(coeffs[i].cols()) + "," +
             format_double(coeffs[i].norm()) + "\n";
    }
  } else {
    doc = out.dump(2) + "\n";
  }
  emit(doc, args.out, summary);
  return kOk;
}

struct SimulateArgs {
  std::string suite, out;
  int n = -1, samples = -1;
  std::uint64_t seed = 0;
  bool seed_given = false, dump = false, csv = false;
};

std::string report_csv(const apent::randrep::SampleReport& rep) {
  std::string doc = "key,value\n";
  doc += "test," + rep.test + "\n";
  doc += "n," + std::to_string(rep.n) + "\n";
  doc += "samples," + std::to_string(rep.samples) + "\n";
  doc += "seed," + std::to_string(rep.seed) + "\n";
  doc += "threshold," + format_double(rep.threshold) + "\n";
  doc += std::string("pass,") + (rep.pass ? "true" : "false") + "\n";
  for (const auto& [key, value] : rep.statistics) {
    doc += key + "," + format_double(value) + "\n";
  }
  return doc;
}

int cmd_simulate(const SimulateArgs& args) {
  std::uint64_t seed = args.seed;
  if (!args.seed_given) {
    std::random_device entropy_source;
    seed = (static_cast<std::uint64_t>(entropy_source()) << 32) ^
           entropy_source();
  }
  const auto pick = [](int given, int fallback) {
    return given > 0 ? given : fallback;
  };

  apent::randrep::SampleReport rep;
  if (args.suite == "wishart") {
    rep = apent::randrep::test_wishart_k1(pick(args.n, 16),
                                          pick(args.samples, 20000), seed,
                                          0.015, args.dump);
  } else if (args.suite == "sigma") {
    rep = apent::randrep::test_sigma_radial(pick(args.n, 8),
                                            pick(args.samples, 20000), seed,
                                            0.015, args.dump);
  } else if (args.suite == "dildist") {
    const auto f =
        apent::freegroup::ball(2, 1, LetterOrder::standard(2));
    const Word g(2, std::vector<int>{1, 1});
    rep = apent::randrep::test_dil_dist(pick(args.n, 24), 1, f, g,
                                        pick(args.samples, 4000), seed, 0.04,
                                        args.dump);
  } else if (args.suite == "kilnen") {
    rep = apent::randrep::test_kilnen(pick(args.n, 32),
                                      pick(args.samples, 5000), seed, 0.05,
                                      args.dump);
  } else if (args.suite == "ldp") {
    // Analytic, no sampling: --n, --samples and --seed are unused.
    rep = apent::randrep::ldp_rate_check({50, 100, 200}, 0.5);
  } else if (args.suite == "trace") {
    const std::vector<Word> words = {Word(2, std::vector<int>{1}),
                                     Word(2, std::vector<int>{1, 2})};
    rep = apent::randrep::trace_convergence(2, words, {8, pick(args.n, 64)},
                                            pick(args.samples, 200), seed);
  } else {
    throw apent::InvalidSpecError("unknown suite '" + args.suite +
                                  "'; expected wishart, sigma, dildist, "
                                  "kilnen, ldp, or trace");
  }

  const std::string summary = "simulate " + rep.test + ": " +
                              (rep.pass ? "PASS" : "FAIL") +
                              " seed=" + std::to_string(rep.seed);
  std::string doc;
  if (args.csv) {
    doc = report_csv(rep);
  } else {
    doc = apent::io::sample_report_to_json(rep).dump(2) + "\n";
  }
  emit(doc, args.out, summary);
  if (args.dump) {
    // Raw sample columns ride in a sibling CSV so the report stays small.
    if (args.out.empty()) {
      throw apent::InvalidSpecError("--dump needs --out");
    }
    const std::string dump_path = args.out + ".samples.csv";
    std::ofstream file(dump_path, std::ios::binary);
    if (!file) throw apent::InvalidSpecError("cannot write " + dump_path);
    file << apent::io::sample_dump_to_csv(rep);
    std::cout << "samples -> " << dump_path << "\n";
  }
  return rep.pass ? kOk : kFlagged;
}

struct MollifyArgs {
  std::string spec, t_grid, method = "formula1", out;
  int levels = -1;
};

int cmd_mollify(const MollifyArgs& args) {
  const apent::pdf::PdfSpec spec =
      apent::io::pdf_spec_from_json(load_json(args.spec));
  const std::vector<double> grid = parse_doubles(args.t_grid);
  if (grid.empty()) {
    throw apent::InvalidSpecError("--t-grid must list at least one t");
  }
  for (double t : grid) {
    if (!(t > 0.0) || t > 1.0) {
      throw apent::InvalidSpecError("t must lie in (0, 1], got " +
                                    format_double(t));
    }
  }
  const auto profile = apent::entropy::mollified_profile(
      spec, grid, apent::entropy::method_from_name(args.method), args.levels);

  bool flagged = false;
  std::string doc = "t,h_ann\n";
  for (const auto& [t, h] : profile) {
    flagged = flagged || h == kNegInf;
    doc += format_double(t) + "," + format_double(h) + "\n";
  }
  emit(doc, args.out,
       "mollify: " + std::to_string(profile.size()) + " grid points");
  return flagged ? kFlagged : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annealed almost-periodic entropy of positive definite "
               "functions on free groups"};
  app.require_subcommand(1);

  EntropyArgs entropy_args;
  CLI::App* entropy_cmd = app.add_subcommand(
      "entropy", "estimate the annealed AP entropy of a spec");
  entropy_cmd->add_option("--spec", entropy_args.spec, "spec JSON file")
      ->required();
  entropy_cmd->add_option(
      "--method", entropy_args.method,
      "formula1|formula2|verblunsky|seward|seward_cmi|all (default all)");
  entropy_cmd->add_option("--levels", entropy_args.levels,
                          "levels/radius to compute (default per method)");
  entropy_cmd->add_option("--tol", entropy_args.tol,
                          "stabilization tolerance");
  entropy_cmd->add_option("--enum-order", entropy_args.enum_order,
                          "letter order, e.g. 2,-2,1,-1");
  entropy_cmd->add_option("--out", entropy_args.out, "output file");
  entropy_cmd->add_flag("--csv", entropy_args.csv, "emit CSV (one method)");

  VerblunskyArgs verblunsky_args;
  CLI::App* verblunsky_cmd = app.add_subcommand(
      "verblunsky", "extract or reconstruct Verblunsky coefficients");
  verblunsky_cmd
      ->add_option("--spec", verblunsky_args.spec,
                   "spec JSON file (coefficient JSON with --inverse)")
      ->required();
  verblunsky_cmd->add_option("--levels", verblunsky_args.levels,
                             "enumerate the ball of this radius (default 2)");
  verblunsky_cmd->add_option("--enum-order", verblunsky_args.enum_order,
                             "letter order, e.g. 2,-2,1,-1");
  verblunsky_cmd->add_flag("--inverse", verblunsky_args.inverse,
                           "rebuild the partial PDF from coefficients");
  verblunsky_cmd->add_flag("--roundtrip", verblunsky_args.roundtrip,
                           "reconstruct and re-extract, report max error");
  verblunsky_cmd->add_option("--out", verblunsky_args.out, "output file");
  verblunsky_cmd->add_flag("--csv", verblunsky_args.csv,
                           "emit step,rows,cols,norm CSV");

  SimulateArgs simulate_args;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "run a seeded statistical suite over random unitaries");
  simulate_cmd
      ->add_option("--suite", simulate_args.suite,
                   "wishart|sigma|dildist|kilnen|ldp|trace")
      ->required();
  simulate_cmd->add_option("--n", simulate_args.n, "matrix dimension");
  simulate_cmd->add_option("--samples", simulate_args.samples,
                           "sample count");
  CLI::Option* seed_opt =
      simulate_cmd->add_option("--seed", simulate_args.seed,
                               "RNG seed (default: OS entropy, recorded)");
  simulate_cmd->add_flag("--dump", simulate_args.dump,
                         "also write raw samples next to --out");
  simulate_cmd->add_option("--out", simulate_args.out, "output file");
  simulate_cmd->add_flag("--csv", simulate_args.csv, "emit key,value CSV");

  MollifyArgs mollify_args;
  CLI::App* mollify_cmd = app.add_subcommand(
      "mollify", "profile of h_ann along t*phi + (1-t)*regular");
  mollify_cmd->add_option("--spec", mollify_args.spec, "spec JSON file")
      ->required();
  mollify_cmd
      ->add_option("--t-grid", mollify_args.t_grid,
                   "comma-separated t values in (0, 1]")
      ->required();
  mollify_cmd->add_option("--method", mollify_args.method,
                          "entropy method (default formula1)");
  mollify_cmd->add_option("--levels", mollify_args.levels,
                          "levels/radius to compute");
  mollify_cmd->add_option("--out", mollify_args.out, "output CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (entropy_cmd->parsed()) return cmd_entropy(entropy_args);
    if (verblunsky_cmd->parsed()) return cmd_verblunsky(verblunsky_args);
    if (simulate_cmd->parsed()) {
      simulate_args.seed_given = seed_opt->count() > 0;
      return cmd_simulate(simulate_args);
    }
    if (mollify_cmd->parsed()) return cmd_mollify(mollify_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
