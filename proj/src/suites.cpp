#include "drazinlab/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "drazinlab/engine.hpp"
#include "drazinlab/errors.hpp"
#include "drazinlab/matrix_io.hpp"
#include "drazinlab/operator_lab.hpp"
#include "drazinlab/operator_spec.hpp"
#include "drazinlab/structure.hpp"

namespace drazin {

using nlohmann::json;

namespace {

inline constexpr double kRoundTripTol = 1e-9;
inline constexpr double kOracleTol = 1e-8;

// Accumulates one check: worst residual per name, first failure message.
struct Outcome {
  bool passed = true;
  int cases = 0;
  std::map<std::string, double> residuals;
  std::string detail;
  json data;

  void fail(const std::string& why) {
    if (passed) {
      detail = why;
    }
    passed = false;
  }
  void track(const std::string& name, double value, double limit) {
    auto [it, fresh] = residuals.emplace(name, value);
    if (!fresh && !(value <= it->second)) {
      it->second = value;
    }
    if (!(value <= limit)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s = %.3e exceeds %.1e at case %d", name.c_str(), value,
                    limit, cases);
      fail(buf);
    }
  }
  void require(bool ok, const std::string& why) {
    if (!ok) {
      fail(why + " at case " + std::to_string(cases));
    }
  }
};

class SuiteBuilder {
public:
  SuiteBuilder(std::string name, const RunConfig& config) {
    report_.suite = std::move(name);
    report_.config = config;
  }

  void check(const std::string& id, const std::string& anchor,
             const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(out);
    } catch (const std::exception& e) {
      out.fail(std::string("error at case ") + std::to_string(out.cases) + ": " + e.what());
    }
    const auto stop = std::chrono::steady_clock::now();
    CheckRecord rec;
    rec.id = report_.suite + "." + id;
    rec.anchor = anchor;
    rec.passed = out.passed;
    rec.cases = out.cases;
    rec.residuals = std::move(out.residuals);
    rec.detail = std::move(out.detail);
    rec.data = std::move(out.data);
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    report_.records.push_back(std::move(rec));
  }

  SuiteReport finish() { return std::move(report_); }

private:
  SuiteReport report_;
};

double rel_dev(const CMatrix& x, const CMatrix& y) {
  return relative((x - y).norm(), std::max({x.norm(), y.norm(), 1.0}));
}

CMatrix diag2(Complex a, Complex b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

struct CorpusEntry {
  CorpusMatrix m;
  DrazinResult d;
};

std::vector<CorpusEntry> solve_corpus(const RunConfig& config) {
  DrazinOptions opts;
  opts.rank_tol = config.tol;
  std::vector<CorpusEntry> out;
  for (auto& m : generate_corpus(config.seed, config.corpus_size)) {
    DrazinResult d = drazin_inverse(m.a, opts);
    out.push_back({std::move(m), std::move(d)});
  }
  return out;
}

void for_corpus(Outcome& out, const std::vector<CorpusEntry>& corpus,
                const std::function<void(const CorpusEntry&)>& body) {
  for (const auto& e : corpus) {
    body(e);
    ++out.cases;
  }
}

} // namespace

SuiteReport run_drazin_suite(const RunConfig& config) {
  config.validate();
  SuiteBuilder s("drazin", config);
  DrazinOptions opts;
  opts.rank_tol = config.tol;
  const auto corpus = solve_corpus(config);

  s.check("worked_examples", "x^2 a = x, a^{j+1} x = a^j", [&](Outcome& out) {
    struct Case {
      CMatrix a;
      CMatrix x;
      int index;
    };
    CMatrix idem(2, 2);
    idem << 1.0, 1.0, 0.0, 0.0;
    const std::vector<Case> cases = {
        {identity(3), identity(3), 0},
        {diag2(2.0, 0.0), diag2(0.5, 0.0), 1},
        {jordan_block(2), CMatrix::Zero(2, 2), 2},
        {jordan_block(3), CMatrix::Zero(3, 3), 3},
        {idem, idem, 1},
        {CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), 1},
    };
    for (const auto& c : cases) {
      const DrazinResult d = drazin_inverse(c.a, opts);
      out.require(d.index == c.index, "index " + std::to_string(d.index) + " expected " +
                                          std::to_string(c.index));
      out.track("deviation", rel_dev(d.inverse, c.x), kOracleTol);
      ++out.cases;
    }
  });

  s.check("index_ground_truth", "index = min k with rank A^k = rank A^{k+1}", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const int k = drazin_index(e.m.a, config.tol);
      out.require(k == e.m.index && e.d.index == k,
                  "index " + std::to_string(k) + " expected " + std::to_string(e.m.index));
    });
  });

  s.check("two_sided_relations", "AX = XA, X^2 A = X, A^{j+1} X = A^j", [&](Outcome& out) {
    for_corpus(out, corpus,
               [&](const CorpusEntry& e) { out.track("max", e.d.residuals.max(), kAxiomTol); });
  });

  s.check("left_axioms", "axa = xa^2, x^2 a = x, x a^{j+1} = a^j", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      out.track("max", check_left_drazin(e.m.a, e.d.inverse, e.d.index).max(), kAxiomTol);
    });
  });

  s.check("right_axioms", "aya = a^2 y, a y^2 = y, a^{j+1} y = a^j", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      out.track("max", check_right_drazin(e.m.a, e.d.inverse, e.d.index).max(), kAxiomTol);
    });
  });

  s.check("oracle_agreement", "A^D = A^k pinv(A^{2k+1}) A^k", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      out.track("deviation", rel_dev(e.d.inverse, drazin_oracle(e.m.a, e.d.index, config.tol)),
                kOracleTol);
    });
  });

  s.check("spectral_idempotent", "p = 1 - xa", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const CMatrix& p = e.d.idempotent;
      const CMatrix& a = e.m.a;
      out.track("idempotent", rel_dev(p * p, p), kAxiomTol);
      out.track("commute", relative((a * p - p * a).norm(), a.norm() * std::max(p.norm(), 1.0)),
                kAxiomTol);
      out.track("projector_agreement", rel_dev(spectral_projector(a, config.tol), p), kOracleTol);
      const auto order = idempotent_index(a, p);
      out.require(order && *order == e.m.index, "nilpotency order of AP differs from the index");
    });
  });

  s.check("residual_nilpotency", "(a - axa)^2 = a(a - axa), (a - axa)^j = 0", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const NilpotencyReport r = residual_nilpotency(e.m.a, e.d.inverse, e.d.index);
      out.track("r_square", r.r_square, kAxiomTol);
      out.track("r_power", r.r_power, kAxiomTol);
    });
  });

  s.check("idempotent_round_trip", "x = (a + p)^{-1} (1 - p)", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const CMatrix p = spectral_idempotent_left(e.m.a, e.d.inverse);
      const CMatrix x = inverse_from_idempotent(e.m.a, p, Side::left);
      out.track("deviation", rel_dev(x, e.d.inverse), kRoundTripTol);
    });
  });

  s.check("merge_two_sided", "left and right inverses of one index coincide", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const CMatrix& p = e.d.idempotent;
      const CMatrix x = inverse_from_idempotent(e.m.a, p, Side::left);
      const CMatrix y = inverse_from_idempotent(e.m.a, p, Side::right);
      out.track("left_right_gap", rel_dev(x, y), kRoundTripTol);
      const CMatrix z = merge_two_sided(e.m.a, x, y, e.d.index);
      out.track("commute", relative((e.m.a * z - z * e.m.a).norm(), e.m.a.norm() * z.norm()),
                kAxiomTol);
    });
  });

  s.check("power_lift", "x^n is a left Drazin inverse of a^n", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      for (int n = 1; n <= 3; ++n) {
        const CMatrix xn = power_lift(e.d.inverse, e.m.a, n, e.d.index);
        out.track("deviation", rel_dev(xn, matrix_power(e.d.inverse, n)), kRoundTripTol);
      }
    });
  });

  s.check("group_lift", "z = x a^{n-1}", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const int n = std::max(e.d.index, 1);
      // (A^D)^n is the group inverse of A^n and commutes with A.
      const CMatrix x = matrix_power(e.d.inverse, n);
      const CMatrix z = group_lift(e.m.a, x, n);
      out.track("deviation", rel_dev(z, e.d.inverse), kRoundTripTol);
    });
  });

  s.check("group_existence", "x a^2 = a", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const bool group = check_group(e.m.a, e.d.inverse, Side::left).passes();
      out.require(group == (e.d.index <= 1), "group axioms disagree with the index");
    });
    for (int n = 2; n <= 4; ++n) {
      const CMatrix j = jordan_block(n);
      out.require(!check_group(j, CMatrix::Zero(n, n), Side::left).passes(),
                  "nilpotent Jordan block passed the group axioms");
      ++out.cases;
    }
  });

  s.check("bc_witness", "b = c = a^j", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const BcWitness w = bc_witness(e.m.a, e.d.inverse, e.d.index);
      out.track("membership", w.r_membership, kAxiomTol);
      out.track("defining", w.r_defining, kAxiomTol);
    });
  });

  s.check("matrix_equation_equivalence", "ABA = BA^2, B^2 A = B, BA^{j+1} = A^j  <=>  A^D",
          [&](Outcome& out) {
            for_corpus(out, corpus, [&](const CorpusEntry& e) {
              out.track("deviation",
                        matrix_equation_equivalence(e.m.a, kRoundTripTol, opts).deviation,
                        kRoundTripTol);
            });
          });

  s.check("adjoint_duality", "T* right Drazin invertible", [&](Outcome& out) {
    for_corpus(out, corpus, [&](const CorpusEntry& e) {
      const AdjointDuality r = adjoint_duality(e.m.a, e.d.inverse, e.d.index);
      out.require(r.passed, "adjoint check failed");
      out.track("adjoint_right", r.adjoint_right.max(), kAxiomTol);
    });
  });

  s.check("idempotent_blocks", "a invertible <=> pap and (1-p)a(1-p) invertible",
          [&](Outcome& out) {
            for_corpus(out, corpus, [&](const CorpusEntry& e) {
              const CMatrix& p = e.d.idempotent;
              for (const CMatrix& q : {p, CMatrix(identity(p.rows()) - p)}) {
                const BlockInvertibility b = idempotent_block_invertibility(e.m.a, q, config.tol);
                out.require(b.whole == (b.range_block && b.kernel_block),
                            "block invertibility mismatch");
              }
              const CMatrix shifted = e.m.a + p;
              const BlockInvertibility b = idempotent_block_invertibility(shifted, p, config.tol);
              out.require(b.whole && b.range_block && b.kernel_block, "A + P not invertible");
            });
          });

  return s.finish();
}

SuiteReport run_operator_suite(const RunConfig& config) {
  config.validate();
  SuiteBuilder s("operator", config);
  const int window = config.window;
  const ShiftBundle b = make_shift_bundle(window);

  s.check("bundle_identities", "TS T = S T^2, S^2 T = S, P = 1 - ST = 0 (+) I, TP = PT",
          [&](Outcome& out) {
            for (const auto& a : b.assertions) {
              out.track(a.name, a.deviation, a.allowance);
              ++out.cases;
            }
            out.data = {{"window", window}, {"t", b.t.describe()}, {"s", b.s.describe()}};
          });

  s.check("weighted_shift_norms", "|T_2^n| = |T_2^n e_1| = 1/n!", [&](Outcome& out) {
    const BandedOp w = harmonic_weighted_shift();
    SeqVector v;
    v.add(BasisIndex{0, 1}, 1.0);
    for (int n = 1; n <= 20; ++n) {
      v = w.apply(v);
      const double exact = weighted_power_norm(w, n);
      out.track("direct", relative(std::abs(exact - v.norm()), exact), kCoefficientTol);
      out.track("factorial", relative(std::abs(exact - std::exp(-std::lgamma(n + 1.0))), exact),
                kCoefficientTol);
      ++out.cases;
    }
  });

  s.check("quasinilpotent_tp", "|(TP)^n|^{1/n} -> 0", [&](Outcome& out) {
    const QnilCertificate& c = b.tp_certificate;
    out.require(c.verdict, "certificate verdict negative");
    out.require(!c.samples.empty() && c.samples.back().n == kQnilSamples,
                "missing sample at n = 60");
    if (!c.samples.empty()) {
      out.track("root_at_n_max", c.samples.back().root, kQnilThreshold);
    }
    out.cases = static_cast<int>(c.samples.size());
  });

  s.check("t_plus_p_not_invertible", "e_1 annihilates R(T + P)", [&](Outcome& out) {
    const RangeAnnihilator& r = b.non_invertibility;
    out.require(r.proven, "range annihilator not proven");
    out.track("max_coefficient", r.max_coefficient, 0.0);
    out.cases = static_cast<int>(r.columns_checked);
  });

  s.check("quasipolar", "q = ST idempotent commuting, b = qSq", [&](Outcome& out) {
    const QuasipolarReport r = quasipolar_left_witness(b.t, b.s, window);
    out.require(r.passed, "quasi-polar round trip failed");
    out.track("q_idempotent", r.q_idempotent, kCoefficientTol);
    out.track("q_commutes", r.q_commutes, kCoefficientTol);
    out.track("b_recovers_q", r.b_recovers_q, kCoefficientTol);
    out.cases = 1;
  });

  s.check("resolvent_shift", "(l - a)^{-1}_left = [l - (a + p)]^{-1}_left (1 - p) + (l - ap)^{-1} p",
          [&](Outcome& out) {
            const BandedOp r = make_shift(ShiftKind::right);
            const ResolventReport rep = left_resolvent(r, BandedOp::zero(), 0.25, 64, 64);
            out.track("residual", rep.residual, std::pow(0.25, 65) / 0.75);
            out.cases = 1;
          });

  s.check("resolvent_ring", "left resolvent on 0 < |l| < |(a + p)^{-1}_left|^{-1}",
          [&](Outcome& out) {
            for (const auto& rep : left_resolvent_ring(b.t, b.p, 0.2, 8, kNeumannTerms, 64)) {
              out.require(rep.passed, "resolvent failed");
              out.track("residual", rep.residual, rep.remainder_bound + kCoefficientTol);
              out.track("contraction", rep.contraction, 1.0);
              ++out.cases;
            }
          });

  s.check("commutant_invariance", "WP = PWP for W commuting with T", [&](Outcome& out) {
    const std::vector<BandedOp> ws = {BandedOp::identity(2), b.t, b.t * b.t,
                                      polynomial(b.t, {1.0, -2.0, 3.0})};
    for (const auto& w : ws) {
      const CommutantReport r = commutant_invariance(b.t, b.s, w, window);
      out.track("deviation", r.deviation, kCoefficientTol);
      ++out.cases;
    }
  });

  s.check("adjoint_duality", "T* right Drazin invertible", [&](Outcome& out) {
    const OperatorDualityReport r = operator_adjoint_duality(b.t, b.s, window, b.tp);
    out.require(r.passed, "adjoint duality failed");
    out.track("left", r.left.max(), 0.0);
    out.track("adjoint_right", r.adjoint_right.max(), 0.0);
    out.cases = 1;
  });

  s.check("uniqueness", "left and right inverses coincide", [&](Outcome& out) {
    const BandedOp a = BandedOp::identity() + scale(Rational(1, 2), make_shift(ShiftKind::right));
    const BandedOp t = direct_sum({a, harmonic_weighted_shift()});
    const BandedOp sl = direct_sum({derive_left_inverse(a, 60).inverse, BandedOp::zero()});
    const BandedOp sr = direct_sum(
        {band_adjoint(derive_left_inverse(band_adjoint(a), 60).inverse), BandedOp::zero()});
    const UniquenessReport r = gd_uniqueness(t, sl, sr, window);
    out.track("gap", r.gap, kUniquenessTol);
    out.cases = 1;
  });

  s.check("operator_serialization", "plumbing", [&](Outcome& out) {
    for (const BandedOp& op : {b.t, b.s, b.t_plus_p, b.left_inverse.inverse}) {
      const BandedOp back = operator_from_json(json::parse(operator_to_json(op).dump()));
      out.track("deviation", verify_on_basis(op, back, window), 0.0);
      ++out.cases;
    }
  });

  return s.finish();
}

SuiteReport run_structure_suite(const RunConfig& config) {
  config.validate();
  SuiteBuilder s("structure", config);
  const RankTol tol = config.tol;
  const auto corpus = generate_corpus(config.seed, config.corpus_size);
  std::vector<ChainReport> chains;
  for (const auto& m : corpus) {
    chains.push_back(chain_report(m.a, tol));
  }

  s.check("ascent_descent", "asc(A) = dsc(A) = index", [&](Outcome& out) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const ChainReport& c = chains[i];
      out.require(c.asc == corpus[i].index && c.dsc == corpus[i].index,
                  "asc " + std::to_string(c.asc) + " dsc " + std::to_string(c.dsc) +
                      " expected " + std::to_string(corpus[i].index));
      ++out.cases;
    }
    out.data = chain_to_json(chains.front());
  });

  s.check("kaashoek_identities", "dim N(A^{k+1}) - dim N(A^k) = dim N(A) cap R(A^k)",
          [&](Outcome& out) {
            for (const auto& c : chains) {
              out.require(c.kaashoek_violations() == 0,
                          std::to_string(c.kaashoek_violations()) + " violations");
              ++out.cases;
            }
          });

  s.check("bf_index", "dim N(A) cap R(A^n) - codim R(A) + N(A^n) = 0", [&](Outcome& out) {
    for (const auto& c : chains) {
      for (int n = c.dis; n <= c.k_max(); ++n) {
        out.require(bf_index(c, n) == 0, "nonzero index");
      }
      ++out.cases;
    }
  });

  s.check("core_nil_dimensions", "dim H_0(A) + dim K(A) = n", [&](Outcome& out) {
    for (const auto& m : corpus) {
      const auto h0 = quasinilpotent_part(m.a, tol).dim();
      const auto k = analytic_core(m.a, tol).dim();
      out.require(h0 + k == m.a.rows() && h0 == m.nil_dim,
                  "dims " + std::to_string(h0) + " + " + std::to_string(k));
      ++out.cases;
    }
  });

  s.check("kato_decomposition", "X = M (+) N, A|M invertible, A|N nilpotent", [&](Outcome& out) {
    for (const auto& m : corpus) {
      const KatoDecomposition k = kato_decomposition(m.a, tol);
      out.require(k.passed(), "decomposition checks failed");
      out.track("core_invariance", k.core_invariance, kInvarianceTol);
      out.track("nil_invariance", k.nil_invariance, kInvarianceTol);
      ++out.cases;
    }
  });

  s.check("decomposition_index", "ind(A) = ind(A|K(A))", [&](Outcome& out) {
    for (const auto& m : corpus) {
      const DecompositionIndex d = decomposition_index_equality(m.a, tol);
      out.require(d.equal, "indices differ");
      ++out.cases;
    }
  });

  // Rank-one perturbations F = u v^* shared by the next two checks.
  PortableRng rng(config.seed ^ 0x5eedf00dULL);
  std::vector<CMatrix> perturbations;
  for (const auto& m : corpus) {
    CVector u(m.a.rows());
    CVector v(m.a.rows());
    for (Index i = 0; i < u.size(); ++i) {
      u(i) = rng.complex_normal();
      v(i) = rng.complex_normal();
    }
    perturbations.push_back(u * v.adjoint() / std::sqrt(static_cast<double>(u.size())));
  }

  s.check("perturbation_expansion", "(T + F)^n = T^n + F1, rank F1 <= n rank F",
          [&](Outcome& out) {
            for (std::size_t i = 0; i < corpus.size(); ++i) {
              const int n = 1 + static_cast<int>(i % 3);
              const PerturbReport r = perturb_expand(corpus[i].a, perturbations[i], n, tol);
              out.track("expansion_residual", r.expansion_residual, kExpansionTol);
              out.require(r.rank_f1 <= n * r.rank_f, "rank bound");
              out.require(r.correction_covers, "ranges differ beyond R(F1)");
              if (i == 0) {
                out.data = perturb_to_json(r);
              }
              ++out.cases;
            }
          });

  s.check("index_stability", "ind(T) = ind(T + F)", [&](Outcome& out) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (2 * rank(perturbations[i], tol) > corpus[i].a.rows()) {
        continue;
      }
      out.require(index_stability(corpus[i].a, perturbations[i], tol).equal, "indices differ");
      ++out.cases;
    }
  });

  s.check("drazin_spectrum_empty", "lambda I - A Drazin invertible for every lambda",
          [&](Outcome& out) {
            DrazinOptions opts;
            opts.rank_tol = tol;
            std::vector<CMatrix> mats = {
                direct_sum(std::vector<CMatrix>{diag2(2.0, 0.0), jordan_block(2)}),
                jordan_block(3, Complex(1.0, 0.0)), identity(2)};
            PortableRng mrng(config.seed ^ 0x5bec7ULL);
            const int extra = std::min(config.corpus_size, 10);
            for (int i = 0; i < extra; ++i) {
              const int n = mrng.uniform_int(2, 8);
              CMatrix a(n, n);
              for (Index r = 0; r < n; ++r) {
                for (Index c = 0; c < n; ++c) {
                  a(r, c) = mrng.complex_normal();
                }
              }
              mats.push_back(a);
            }
            std::vector<Complex> samples = {Complex(0.0, 0.0)};
            for (int k = 0; k < 4; ++k) {
              samples.push_back(std::polar(0.5, 2.0 * M_PI * k / 4.0 + 0.1));
            }
            for (const auto& a : mats) {
              const SpectraScan scan = spectra_scan(a, samples, kAxiomTol, opts);
              for (const auto& smp : scan.samples) {
                out.track("residual", smp.residuals.max(), kAxiomTol);
                out.track("adjoint_right", smp.adjoint_right.max(), kAxiomTol);
                ++out.cases;
              }
            }
          });

  return s.finish();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"drazin", "operator", "structure", "all"};
  return names;
}

SuiteReport run_suite(const std::string& name, const RunConfig& config) {
  if (name == "drazin") {
    return run_drazin_suite(config);
  }
  if (name == "operator") {
    return run_operator_suite(config);
  }
  if (name == "structure") {
    return run_structure_suite(config);
  }
  if (name == "all") {
    return merge_reports("all", {run_drazin_suite(config), run_operator_suite(config),
                                 run_structure_suite(config)});
  }
  throw InputError("unknown suite \"" + name + "\" (expected drazin, operator, structure or all)");
}

json corpus_metadata(const CorpusMatrix& m, std::uint64_t seed, int position) {
  return {{"seed", seed},
          {"position", position},
          {"n", m.a.rows()},
          {"index", m.index},
          {"core_dim", m.core_dim},
          {"nil_dim", m.nil_dim},
          {"nil_blocks", m.nil_blocks},
          {"condition", m.condition}};
}

std::vector<std::filesystem::path> gen_corpus(const RunConfig& config) {
  config.validate();
  if (config.output.empty()) {
    throw InputError("gen: output directory required");
  }
  std::error_code ec;
  std::filesystem::create_directories(config.output, ec);
  if (ec || !std::filesystem::is_directory(config.output)) {
    throw IoError("cannot create directory " + config.output.string());
  }
  std::vector<std::filesystem::path> written;
  const auto corpus = generate_corpus(config.seed, config.corpus_size);
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "matrix_%04d", i);
    const auto matrix_path = config.output / (std::string(stem) + ".txt");
    const auto meta_path = config.output / (std::string(stem) + ".json");
    write_matrix_file(matrix_path, corpus[static_cast<std::size_t>(i)].a);
    write_file_atomic(meta_path,
                      corpus_metadata(corpus[static_cast<std::size_t>(i)], config.seed, i).dump(2) +
                          "\n");
    written.push_back(matrix_path);
    written.push_back(meta_path);
  }
  return written;
}

} // namespace drazin
