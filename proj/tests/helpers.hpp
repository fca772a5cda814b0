#pragma once

// Shared fixtures: a tiny deterministic corpus with known structure, random
// matrix generators, and a ready-made space bundle for feature-level tests.

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tuplesim/corpus.hpp"
#include "tuplesim/lexicon.hpp"
#include "tuplesim/linalg.hpp"
#include "tuplesim/spaces.hpp"
#include "tuplesim/util.hpp"

namespace testutil {

using namespace tuplesim;

// Eight nouns, two verbs, one adjective, one stray term and one
// pseudo-unigram; enough distinct terms to featurize 6-tuples.
inline Lexicon tiny_lexicon() {
  Lexicon lex;
  for (const char* t : {"ant", "bee", "cat", "dog", "eel", "fox", "gnu", "hen"}) {
    lex.add(t, Pos::Noun);
  }
  lex.add("stalks", Pos::Verb);
  lex.add("feeds", Pos::Verb);
  lex.add("sly", Pos::Adj);
  lex.add("often", Pos::Other);
  lex.add("ant_hill", Pos::Noun);
  return lex;
}

inline std::string tiny_corpus() {
  return "The cat stalks the bee and the dog feeds the hen.\n"
         "A sly fox stalks a gnu; the eel often feeds near the ant hill.\n"
         "Cat and dog, dog and cat: the fox feeds the hen while the ant\n"
         "stalks the bee. The gnu feeds, the eel stalks, and the ant hill\n"
         "shelters the sly ant. Dog stalks fox; bee feeds hen; cat near gnu.\n";
}

inline GridSpec tiny_grid() {
  GridSpec g;
  g.k_values = {2, 4};
  g.p_values = {0.0, 0.5, 1.0};
  return g;
}

inline SpaceBundle tiny_bundle() {
  BuildOptions options;
  options.grid = tiny_grid();
  options.verb_window = 3;
  return build_space_bundle(tiny_corpus(), tiny_lexicon(), options);
}

// Random sparse nonnegative count matrix with roughly the given density.
inline SparseMatrix random_counts(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                  double density = 0.5, double scale = 9.0) {
  std::vector<Triplet> triplets;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (rng.uniform() < density) {
        triplets.push_back({static_cast<std::uint32_t>(i),
                            static_cast<std::uint32_t>(j),
                            1.0 + scale * rng.uniform()});
      }
    }
  }
  return make_sparse(rows, cols, triplets);
}

inline Matrix to_dense(const SparseMatrix& m) { return Matrix(m); }

// Self-cleaning scratch directory for tests that touch the filesystem.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("tuplesim_test_" + hex64(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testutil
