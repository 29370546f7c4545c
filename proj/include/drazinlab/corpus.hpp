#pragma once

// Seeded generator for core-nilpotent test matrices A = S (C (+) N) S^{-1}.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Doubles are drawn as (x >> 11) * 2^-53 and normals by
// Box-Muller, both implemented here rather than through <random>
// distributions, which differ between standard libraries.

#include <cstdint>
#include <random>
#include <vector>

#include "drazinlab/linalg.hpp"

namespace drazin {

class PortableRng {
public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();
  Complex complex_normal();
  /// Uniform on the unit circle.
  Complex phase();

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct CorpusOptions {
  int min_dim = 2;
  int max_dim = 12;
  /// Largest nilpotent Jordan-type block, hence the largest index.
  int max_block = 4;
  /// Upper bound on cond_2(S).
  double max_condition = 100.0;
  /// Core eigenvalue moduli are drawn from [core_min, core_max].
  double core_min = 0.8;
  double core_max = 1.25;
};

struct CorpusMatrix {
  CMatrix a;
  CMatrix similarity;
  /// Nilpotency order of N, i.e. the exact Drazin index.
  int index = 0;
  int core_dim = 0;
  int nil_dim = 0;
  std::vector<int> nil_blocks;
  double condition = 1.0;
};

CMatrix random_unitary(PortableRng& rng, Index n);

/// Random strictly upper triangular block of nilpotency order exactly `size`.
CMatrix random_nilpotent_block(PortableRng& rng, Index size);

/// S B S^{-1} for a random S with cond_2(S) = condition.
CMatrix random_similarity_transform(PortableRng& rng, const CMatrix& b, double condition,
                                    CMatrix* s_out = nullptr);

CorpusMatrix generate_core_nilpotent(PortableRng& rng, const CorpusOptions& options = {});

std::vector<CorpusMatrix> generate_corpus(std::uint64_t seed, int count,
                                          const CorpusOptions& options = {});

/// Block diagonal matrix of the given blocks.
CMatrix direct_sum(const std::vector<CMatrix>& blocks);

/// Jordan block J_n(lambda).
CMatrix jordan_block(Index n, Complex lambda = {0.0, 0.0});

} // namespace drazin
