// drazin-lab: property suites, corpus export and one-off matrix queries.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 I/O error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "drazinlab/engine.hpp"
#include "drazinlab/errors.hpp"
#include "drazinlab/matrix_io.hpp"
#include "drazinlab/report.hpp"
#include "drazinlab/structure.hpp"
#include "drazinlab/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string suite;
  std::uint64_t seed = 1;
  std::optional<double> tol;
  int window = 128;
  int corpus = drazin::kDefaultCorpusSize;
  int count = 10;
  std::string out;
  std::string format = "json";
  std::string input;
};

drazin::RunConfig make_config(const Options& o, int corpus_size) {
  drazin::RunConfig c;
  c.seed = o.seed;
  c.tol = drazin::resolve_tol(o.tol);
  c.window = o.window;
  c.corpus_size = corpus_size;
  c.output = o.out;
  c.format = drazin::parse_format(o.format);
  c.validate();
  return c;
}

int cmd_run(const Options& o) {
  const drazin::RunConfig config = make_config(o, o.corpus);
  const drazin::SuiteReport report = drazin::run_suite(o.suite, config);
  if (config.output.empty()) {
    std::cout << report.render(config.format);
  } else {
    drazin::write_report(report, config.output, config.format);
    std::cout << report.suite << ": " << report.passed_count() << " passed, "
              << report.failed_count() << " failed\n";
  }
  return report.passed() ? kExitPass : kExitFail;
}

int cmd_gen(const Options& o) {
  const drazin::RunConfig config = make_config(o, o.count);
  const auto files = drazin::gen_corpus(config);
  std::cout << "wrote " << files.size() << " files to " << config.output.string() << "\n";
  return kExitPass;
}

int cmd_inverse(const Options& o) {
  const drazin::CMatrix a = drazin::read_matrix_file(o.input);
  drazin::DrazinOptions opts;
  opts.rank_tol = drazin::resolve_tol(o.tol);
  const drazin::DrazinResult d = drazin::drazin_inverse(a, opts);
  std::cout << "# index " << d.index << "  residual " << d.residuals.max() << "\n"
            << drazin::format_matrix(d.inverse);
  return d.residuals.passes() ? kExitPass : kExitFail;
}

int cmd_chain(const Options& o) {
  const drazin::CMatrix a = drazin::read_matrix_file(o.input);
  const drazin::ChainReport c = drazin::chain_report(a, drazin::resolve_tol(o.tol));
  std::cout << drazin::chain_to_json(c).dump(2) << "\n";
  return c.kaashoek_violations() == 0 ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drazin inverse laboratory"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run a property suite");
  run->add_option("--suite", o.suite, "drazin | operator | structure | all")->required();
  run->add_option("--seed", o.seed, "Corpus seed");
  run->add_option("--tol", o.tol, "Relative rank tolerance (overrides DRAZIN_LAB_TOL)");
  run->add_option("--window", o.window, "Basis window for operator checks");
  run->add_option("--corpus", o.corpus, "Number of corpus matrices");
  run->add_option("--out", o.out, "Report path (stdout when omitted)");
  run->add_option("--format", o.format, "json | text");

  auto* gen = app.add_subcommand("gen", "Write a seeded matrix corpus with metadata");
  gen->add_option("--count", o.count, "Number of matrices");
  gen->add_option("--seed", o.seed, "Corpus seed");
  gen->add_option("--out", o.out, "Output directory")->required();

  auto* inverse = app.add_subcommand("inverse", "Drazin inverse of a matrix file");
  inverse->add_option("--in", o.input, "Matrix text file")->required();
  inverse->add_option("--tol", o.tol, "Relative rank tolerance");

  auto* chain = app.add_subcommand("chain", "Kernel and range chain tables of a matrix file");
  chain->add_option("--in", o.input, "Matrix text file")->required();
  chain->add_option("--tol", o.tol, "Relative rank tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (run->parsed()) {
      return cmd_run(o);
    }
    if (gen->parsed()) {
      return cmd_gen(o);
    }
    if (inverse->parsed()) {
      return cmd_inverse(o);
    }
    return cmd_chain(o);
  } catch (const drazin::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const drazin::InputError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const drazin::ShapeError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
