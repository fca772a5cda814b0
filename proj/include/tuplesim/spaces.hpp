#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tuplesim/corpus.hpp"
#include "tuplesim/lexicon.hpp"
#include "tuplesim/linalg.hpp"

namespace tuplesim {

struct GridSpec {
  std::vector<int> k_values;
  std::vector<double> p_values;

  std::size_t n_k() const { return k_values.size(); }
  std::size_t n_p() const { return p_values.size(); }

  // k in {100..1000 step 100}, p in {0..1 step 0.1}.
  static GridSpec defaults();

  // When max k exceeds the retained rank, k values are remapped to n_k evenly
  // spaced ranks in [1, rank]; layout and counts are unchanged.
  GridSpec clamped_to(Eigen::Index rank) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Term x (unigram, hand) PPMI matrix. Columns come in left/right pairs, one
// pair per lexicon unigram.
class RawPpmiSpace {
 public:
  enum class Hand { Left, Right };

  RawPpmiSpace(SparseMatrix matrix, std::vector<std::int32_t> unigram_col_pair);

  // 0 whenever the row or column is absent, including OOV terms.
  double ppmi(const Lexicon& lexicon, std::string_view x, std::string_view context,
              Hand hand) const;
  double ppmi_rows(std::size_t target_row, std::size_t context_row, Hand hand) const;

  const SparseMatrix& matrix() const { return matrix_; }
  const std::vector<std::int32_t>& unigram_col_pair() const { return unigram_col_pair_; }

 private:
  SparseMatrix matrix_;
  // lexicon row -> first column of its (left, right) pair, or -1 for
  // multiword terms that own no columns.
  std::vector<std::int32_t> unigram_col_pair_;
};

enum class SpaceKind { Domain, Function };

// SVD factors of a PPMI-transformed count matrix plus a lazy (k, p)
// projection cache. Entries are deterministic, so concurrent fills are
// benign; the mutex just keeps the map itself consistent.
class LatentSpace {
 public:
  LatentSpace(SvdFactors factors, SpaceKind kind);

  // Movable despite the cache mutex; nobody else can hold a reference while
  // a move is legal, so taking the lock would be pointless.
  LatentSpace(LatentSpace&& other) noexcept
      : factors_(std::move(other.factors_)),
        kind_(other.kind_),
        cache_(std::move(other.cache_)) {}
  LatentSpace& operator=(LatentSpace&&) = delete;

  const Matrix& projection(int k, double p) const;
  double similarity(std::size_t row_x, std::size_t row_y, int k, double p) const;

  const SvdFactors& factors() const { return factors_; }
  SpaceKind kind() const { return kind_; }

 private:
  SvdFactors factors_;
  SpaceKind kind_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<int, long long>, std::unique_ptr<Matrix>> cache_;
};

RawPpmiSpace build_raw_ppmi_space(const std::vector<CoocEvent>& events,
                                  const Lexicon& lexicon);

LatentSpace build_latent_space(const std::vector<CoocEvent>& events,
                               const Lexicon& lexicon, Eigen::Index rank);

// Cosine in domain space at (k, p); 0 for unmapped terms.
double dom(const LatentSpace& space, const Lexicon& lexicon, std::string_view x,
           std::string_view y, int k, double p);

// Cosine in function space at (k, p); 0 for unmapped terms.
double fun(const LatentSpace& space, const Lexicon& lexicon, std::string_view x,
           std::string_view y, int k, double p);

// The full bundle the pipeline runs on.
struct SpaceBundle {
  Lexicon lexicon;
  FreqTable freqs;
  std::shared_ptr<RawPpmiSpace> raw;
  std::shared_ptr<LatentSpace> domain;
  std::shared_ptr<LatentSpace> function;
  GridSpec grid;
  std::string corpus_checksum;
};

struct BuildOptions {
  GridSpec grid = GridSpec::defaults();
  int verb_window = 5;
};

SpaceBundle build_space_bundle(std::string_view corpus_text, const Lexicon& lexicon,
                               const BuildOptions& options);

// Directory layout: raw_ppmi.bin, domain.factors, function.factors,
// lexicon.tsv, meta.json.
void save_space_bundle(const SpaceBundle& bundle, const std::string& dir,
                       const std::string& config_json = "{}");
SpaceBundle load_space_bundle(const std::string& dir);

}  // namespace tuplesim
