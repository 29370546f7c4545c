// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance               all criteria
//   acceptance --criterion N only criterion N
//
// Exit status is 0 when every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <Eigen/SVD>

#include "drazinlab/corpus.hpp"
#include "drazinlab/engine.hpp"
#include "drazinlab/operator_lab.hpp"
#include "drazinlab/report.hpp"
#include "drazinlab/structure.hpp"

using namespace drazin;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20261016;
constexpr int kCorpusSize = 500;

struct Verdict {
  bool passed = true;
  std::string summary;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (failures.size() < 5) {
        failures.push_back(what);
      }
    }
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const std::vector<CorpusMatrix>& corpus() {
  static const std::vector<CorpusMatrix> c = generate_corpus(kSeed, kCorpusSize);
  return c;
}

double rel_dev(const CMatrix& x, const CMatrix& y) {
  return (x - y).norm() / std::max({x.norm(), y.norm(), 1.0});
}

// Truncated SVD pseudo-inverse keeping the `keep` largest singular values.
CMatrix pinv_keep(const CMatrix& m, Index keep) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CMatrix out = CMatrix::Zero(m.cols(), m.rows());
  for (Index i = 0; i < keep; ++i) {
    out += svd.matrixV().col(i) * (1.0 / svd.singularValues()(i)) *
           svd.matrixU().col(i).adjoint();
  }
  return out;
}

// Two-sided relations computed directly. X is measured against 1/|A| so
// that X = 0 for nilpotent A is scored on rounding, not on its own size.
double two_sided_residual(const CMatrix& a, const CMatrix& x, int j) {
  const double na = a.norm();
  if (na == 0.0) {
    return x.norm();
  }
  const double nx = std::max(x.norm(), 1.0 / na);
  const double r1 = (a * x - x * a).norm() / (na * nx);
  const double r2 = (x * x * a - x).norm() / (nx * nx * na);
  const CMatrix aj = matrix_power(a, j);
  const double r3 = (a * aj * x - aj).norm() / (std::pow(na, j + 1) * nx);
  return std::max({r1, r2, r3});
}

Verdict criterion_1() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const auto& mats = generate_corpus(kSeed, kCorpusSize);
  double worst = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const CorpusMatrix& m = mats[i];
    const DrazinResult d = drazin_inverse(m.a);
    const double two = two_sided_residual(m.a, d.inverse, d.index);
    const double left = check_left_drazin(m.a, d.inverse, d.index).max();
    const double right = check_right_drazin(m.a, d.inverse, d.index).max();
    const double r = std::max({two, d.residuals.max(), left, right});
    worst = std::max(worst, r);
    v.expect(m.a.rows() <= 12 && m.condition <= 100.0, "corpus bounds at " + std::to_string(i));
    v.expect(d.index == m.index, "index mismatch at " + std::to_string(i));
    v.expect(r <= 1e-8, "matrix " + std::to_string(i) + " residual " + sci(r));
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.expect(secs <= 30.0, "runtime " + std::to_string(secs) + " s");
  v.summary = std::to_string(mats.size()) + " matrices, worst residual " + sci(worst) +
              " (<= 1e-8), " + std::to_string(secs) + " s (<= 30 s)";
  return v;
}

Verdict criterion_2() {
  Verdict v;
  double worst = 0.0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const CorpusMatrix& m = corpus()[i];
    const int k = m.index;
    const CMatrix ak = matrix_power(m.a, k);
    const CMatrix oracle = ak * pinv_keep(matrix_power(m.a, 2 * k + 1), m.core_dim) * ak;
    const double dev = rel_dev(drazin_inverse(m.a).inverse, oracle);
    worst = std::max(worst, dev);
    v.expect(dev <= 1e-8, "matrix " + std::to_string(i) + " deviation " + sci(dev));
  }
  v.summary = "worst deviation " + sci(worst) + " (<= 1e-8)";
  return v;
}

Verdict criterion_3() {
  Verdict v;
  double round = 0.0, merge = 0.0, eq = 0.0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const CorpusMatrix& m = corpus()[i];
    const std::string at = " at " + std::to_string(i);
    try {
      const DrazinResult d = drazin_inverse(m.a);
      const CMatrix p = identity(m.a.rows()) - d.inverse * m.a;
      const double r = rel_dev(inverse_from_idempotent(m.a, p, Side::left), d.inverse);
      const CMatrix x = inverse_from_idempotent(m.a, p, Side::left);
      const CMatrix y = inverse_from_idempotent(m.a, p, Side::right);
      const CMatrix z = merge_two_sided(m.a, x, y, d.index);
      const double g = std::max(rel_dev(x, y), rel_dev(z, d.inverse));
      const double e = matrix_equation_equivalence(m.a).deviation;
      round = std::max(round, r);
      merge = std::max(merge, g);
      eq = std::max(eq, e);
      v.expect(r <= 1e-9, "round trip " + sci(r) + at);
      v.expect(g <= 1e-9, "merge " + sci(g) + at);
      v.expect(e <= 1e-9, "equations " + sci(e) + at);
    } catch (const std::exception& ex) {
      v.expect(false, std::string(ex.what()) + at);
    }
  }
  v.summary = "round trip " + sci(round) + ", merge " + sci(merge) + ", equations " + sci(eq) +
              " (all <= 1e-9)";
  return v;
}

Verdict criterion_4() {
  Verdict v;
  int violations = 0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const CorpusMatrix& m = corpus()[i];
    const int n = static_cast<int>(m.a.rows());
    const ChainReport c = chain_report(m.a);
    int bad = 0;
    bad += c.asc != m.index || c.dsc != m.index ? 1 : 0;
    bad += c.kaashoek_violations();
    for (int k = c.dis; k <= c.k_max(); ++k) {
      bad += bf_index(c, k) != 0 ? 1 : 0;
    }
    bad += quasinilpotent_part(m.a).dim() + analytic_core(m.a).dim() != n ? 1 : 0;
    violations += bad;
    v.expect(bad == 0, "matrix " + std::to_string(i) + ": " + std::to_string(bad) + " violations");
  }
  v.summary = std::to_string(violations) + " violations over " + std::to_string(corpus().size()) +
              " matrices";
  return v;
}

Verdict criterion_5() {
  Verdict v;
  const ShiftBundle b = make_shift_bundle(128);
  const int w = 128;
  const WindowAxioms ax = check_left_gd_window(b.t, b.s, w);
  const double p_dev = verify_on_basis(b.p_formula, b.p, w);
  const double comm = verify_on_basis(b.t * b.p, b.p * b.t, w);
  v.expect(ax.r_weak_commute == 0.0, "TST - ST^2 = " + sci(ax.r_weak_commute));
  v.expect(ax.r_inner == 0.0, "S^2T - S = " + sci(ax.r_inner));
  v.expect(p_dev == 0.0, "I - ST vs 0 (+) I = " + sci(p_dev));
  v.expect(comm == 0.0, "TP - PT = " + sci(comm));

  // |T_2^n e_1| against 1/(n-1)!, computed by applying T_2 directly.
  double worst = 0.0;
  double worst_factorial = 0.0;
  int first_bad = 0;
  SeqVector e = SeqVector::basis(0, 1);
  for (int n = 1; n <= 20; ++n) {
    e = b.weighted_shift.apply(e);
    const double target = 1.0 / std::exp(std::lgamma(static_cast<double>(n)));
    const double rel = std::abs(e.norm() - target) / target;
    worst = std::max(worst, rel);
    const double n_fact = 1.0 / std::exp(std::lgamma(n + 1.0));
    worst_factorial = std::max(worst_factorial, std::abs(e.norm() - n_fact) / n_fact);
    if (rel > 1e-12 && first_bad == 0) {
      first_bad = n;
    }
  }
  v.expect(worst <= 1e-12, "|T_2^n e_1| vs 1/(n-1)!: worst relative deviation " + sci(worst) +
                               ", first at n = " + std::to_string(first_bad) +
                               " (against 1/n! the worst deviation is " + sci(worst_factorial) +
                               ")");

  const double root = b.tp_certificate.samples.back().root;
  v.expect(b.tp_certificate.samples.back().n == 60, "qnil sample at n = 60 missing");
  v.expect(root < 0.05, "qnil root " + sci(root));
  v.expect(b.non_invertibility.proven, "T + P annihilator not proven");
  v.summary = "window deviations " + sci(std::max({ax.max(), p_dev, comm})) +
              ", |T_2^n e_1| vs 1/(n-1)! worst " + sci(worst) + ", root(60) " + sci(root) +
              ", annihilator " + (b.non_invertibility.proven ? "exact" : "missing");
  return v;
}

Verdict criterion_6() {
  Verdict v;
  const ResolventReport r =
      left_resolvent(make_shift(ShiftKind::right), BandedOp::zero(), 0.25, 64, 64);
  const double budget = std::pow(0.25, 65) / 0.75;
  v.expect(r.residual < budget, "T_1 residual " + sci(r.residual) + " vs " + sci(budget));
  const ShiftBundle b = make_shift_bundle(64);
  int ok = 0;
  try {
    for (const auto& s : left_resolvent_ring(b.t, b.p, 0.2, 8, 64, 64)) {
      ok += s.passed ? 1 : 0;
    }
  } catch (const std::exception& ex) {
    v.expect(false, ex.what());
  }
  v.expect(ok == 8, std::to_string(ok) + "/8 ring points");
  v.summary = "T_1 residual " + sci(r.residual) + " < " + sci(budget) + ", ring " +
              std::to_string(ok) + "/8";
  return v;
}

Verdict criterion_7() {
  Verdict v;
  const ShiftBundle b = make_shift_bundle(128);
  const BandedOp i2 = BandedOp::identity(2);
  const BandedOp t2 = b.t * b.t;
  const BandedOp poly = i2 - scale(Rational(2), b.t) + scale(Rational(3), t2);
  double worst = 0.0;
  for (const BandedOp& w : {i2, b.t, t2, poly}) {
    const CommutantReport r = commutant_invariance(b.t, b.s, w, 128);
    worst = std::max(worst, r.deviation);
  }
  v.expect(worst <= 1e-12, "deviation " + sci(worst));
  v.summary = "worst WP - PWP " + sci(worst) + " (<= 1e-12) over 4 operators";
  return v;
}

Verdict criterion_8() {
  Verdict v;
  const auto mats = generate_corpus(kSeed ^ 0x8ULL, 100);
  PortableRng rng(kSeed ^ 0x88ULL);
  double worst = 0.0;
  int unequal = 0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const CMatrix& t = mats[i].a;
    const Index n = t.rows();
    CMatrix u(n, 1), w(1, n);
    for (Index k = 0; k < n; ++k) {
      u(k, 0) = rng.complex_normal();
      w(0, k) = rng.complex_normal();
    }
    const CMatrix f = u * w / static_cast<double>(n);
    const int p = 1 + static_cast<int>(i % 3);
    const std::string at = " at " + std::to_string(i);
    try {
      const PerturbReport r = perturb_expand(t, f, p);
      worst = std::max(worst, r.expansion_residual);
      v.expect(r.expansion_residual <= 1e-12, "residual " + sci(r.expansion_residual) + at);
      v.expect(r.rank_f1 <= p * r.rank_f, "rank bound" + at);
      const IndexStability s = index_stability(t, f);
      unequal += s.equal ? 0 : 1;
      v.expect(s.equal, "index changed" + at);
    } catch (const std::exception& ex) {
      v.expect(false, std::string(ex.what()) + at);
    }
  }
  v.summary = "100 pairs, worst expansion residual " + sci(worst) + " (<= 1e-12), " +
              std::to_string(unequal) + " index changes";
  return v;
}

Verdict criterion_9() {
  Verdict v;
  double worst = 0.0;
  for (std::size_t i = 0; i < corpus().size(); ++i) {
    const CorpusMatrix& m = corpus()[i];
    const DrazinResult d = drazin_inverse(m.a);
    const AdjointDuality r = adjoint_duality(m.a, d.inverse, d.index);
    worst = std::max(worst, r.adjoint_right.max());
    v.expect(r.adjoint_right.max() <= 1e-10, "matrix " + std::to_string(i));
  }
  const ShiftBundle b = make_shift_bundle(128);
  const OperatorDualityReport op = operator_adjoint_duality(b.t, b.s, 128, b.tp);
  v.expect(op.left.max() == 0.0 && op.adjoint_right.max() == 0.0, "banded duality not exact");
  v.expect(op.adjoint_certificate && op.adjoint_certificate->verdict,
           "adjoint quasi-nilpotency not certified");
  v.summary = "matrix worst " + sci(worst) + " (<= 1e-10), banded " +
              sci(op.adjoint_right.max()) + " (exact)";
  return v;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DRAZIN_LAB_EXE + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string stripped(const fs::path& p) {
  std::ifstream in(p);
  return strip_timing(nlohmann::json::parse(in)).dump();
}

Verdict criterion_10() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "drazinlab_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  const std::string base = "run --suite all --seed 17 --corpus 20 --out ";
  const int c1 = run_cli(base + q(dir / "a.json"));
  const int c2 = run_cli(base + q(dir / "b.json"));
  v.expect(c1 == 0 && c2 == 0, "passing runs exit " + std::to_string(c1) + "/" + std::to_string(c2));
  bool same = false;
  try {
    same = stripped(dir / "a.json") == stripped(dir / "b.json");
  } catch (const std::exception& ex) {
    v.expect(false, ex.what());
  }
  v.expect(same, "reports differ");
  const int fail = run_cli("run --suite drazin --corpus 4 --tol 0.9");
  const int usage = run_cli("run --suite nope");
  const int io = run_cli("run --suite operator --out " + q(dir / "missing" / "r.json"));
  v.expect(fail == 1, "failing checks exit " + std::to_string(fail));
  v.expect(usage == 2, "usage error exit " + std::to_string(usage));
  v.expect(io == 3, "I/O error exit " + std::to_string(io));
  fs::remove_all(dir);
  v.summary = std::string("reports ") + (same ? "identical" : "differ") + ", exit codes " +
              std::to_string(c1) + "/" + std::to_string(fail) + "/" + std::to_string(usage) +
              "/" + std::to_string(io) + " (expected 0/1/2/3)";
  return v;
}

const std::vector<std::function<Verdict()>> kCriteria = {
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

bool report(int n) {
  Verdict v;
  try {
    v = kCriteria[n - 1]();
  } catch (const std::exception& ex) {
    v.passed = false;
    v.summary = std::string("exception: ") + ex.what();
  }
  std::cout << "criterion " << n << ": " << (v.passed ? "PASS" : "FAIL") << "  " << v.summary
            << "\n";
  for (const auto& f : v.failures) {
    std::cout << "    " << f << "\n";
  }
  return v.passed;
}

} // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      const int n = std::atoi(argv[++i]);
      if (n < 1 || n > static_cast<int>(kCriteria.size())) {
        std::cerr << "criterion must be 1.." << kCriteria.size() << "\n";
        return 2;
      }
      selected.push_back(n);
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) {
      selected.push_back(n);
    }
  }
  bool all = true;
  for (int n : selected) {
    all = report(n) && all;
  }
  return all ? 0 : 1;
}
