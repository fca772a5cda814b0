#include "tuplesim/spaces.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "tuplesim/errors.hpp"
#include "tuplesim/matrix_io.hpp"
#include "tuplesim/util.hpp"

namespace tuplesim {

using nlohmann::json;

GridSpec GridSpec::defaults() {
  GridSpec g;
  for (int k = 100; k <= 1000; k += 100) g.k_values.push_back(k);
  for (int i = 0; i <= 10; ++i) g.p_values.push_back(i / 10.0);
  return g;
}

GridSpec GridSpec::clamped_to(Eigen::Index rank) const {
  if (k_values.empty()) throw std::invalid_argument("GridSpec: empty k grid");
  if (rank < 1) throw std::invalid_argument("GridSpec: rank must be positive");
  if (k_values.back() <= rank) return *this;
  GridSpec g = *this;
  const auto count = static_cast<double>(k_values.size());
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 1.0;
    g.k_values[i] =
        static_cast<int>(std::lround(1.0 + t * (static_cast<double>(rank) - 1.0)));
  }
  return g;
}

RawPpmiSpace::RawPpmiSpace(SparseMatrix matrix,
                           std::vector<std::int32_t> unigram_col_pair)
    : matrix_(std::move(matrix)), unigram_col_pair_(std::move(unigram_col_pair)) {
  if (static_cast<Eigen::Index>(unigram_col_pair_.size()) != matrix_.rows()) {
    throw std::invalid_argument("RawPpmiSpace: column map size mismatch");
  }
}

double RawPpmiSpace::ppmi(const Lexicon& lexicon, std::string_view x,
                          std::string_view context, Hand hand) const {
  const auto target = lexicon.row_of(x);
  const auto ctx = lexicon.row_of(context);
  if (!target || !ctx) return 0.0;
  return ppmi_rows(*target, *ctx, hand);
}

double RawPpmiSpace::ppmi_rows(std::size_t target_row, std::size_t context_row,
                               Hand hand) const {
  if (target_row >= static_cast<std::size_t>(matrix_.rows()) ||
      context_row >= unigram_col_pair_.size()) {
    return 0.0;
  }
  const std::int32_t pair = unigram_col_pair_[context_row];
  if (pair < 0) return 0.0;  // multiword terms own no context columns
  const Eigen::Index col = pair + (hand == Hand::Right ? 1 : 0);
  return matrix_.coeff(static_cast<Eigen::Index>(target_row), col);
}

LatentSpace::LatentSpace(SvdFactors factors, SpaceKind kind)
    : factors_(std::move(factors)), kind_(kind) {}

const Matrix& LatentSpace::projection(int k, double p) const {
  const std::pair<int, long long> key{k, std::llround(p * 1e9)};
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (const auto it = cache_.find(key); it != cache_.end()) return *it->second;
  }
  auto fresh = std::make_unique<Matrix>(project_rows(factors_, k, p));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(key, std::move(fresh));
  return *it->second;  // losing the race is fine; entries are deterministic
}

double LatentSpace::similarity(std::size_t row_x, std::size_t row_y, int k,
                               double p) const {
  const Matrix& proj = projection(k, p);
  if (row_x >= static_cast<std::size_t>(proj.rows()) ||
      row_y >= static_cast<std::size_t>(proj.rows())) {
    return 0.0;
  }
  return cosine(proj.row(static_cast<Eigen::Index>(row_x)),
                proj.row(static_cast<Eigen::Index>(row_y)));
}

RawPpmiSpace build_raw_ppmi_space(const std::vector<CoocEvent>& events,
                                  const Lexicon& lexicon) {
  // No guard for empty input here: the all-zero count matrix makes
  // ppmi_transform throw "empty counts", which is the contractual message.

  // One (left, right) column pair per lexicon unigram, in row order.
  std::vector<std::int32_t> col_pair(lexicon.size(), -1);
  std::int32_t next = 0;
  for (std::size_t row = 0; row < lexicon.size(); ++row) {
    if (lexicon.is_unigram(row)) {
      col_pair[row] = next;
      next += 2;
    }
  }

  std::vector<Triplet> counts;
  counts.reserve(events.size());
  for (const auto& e : events) {
    if (e.kind != CoocKind::UnigramLeft && e.kind != CoocKind::UnigramRight) {
      throw std::invalid_argument("build_raw_ppmi_space: non-unigram event");
    }
    if (e.target >= lexicon.size() || e.context >= lexicon.size()) {
      throw data_error("build_raw_ppmi_space: event row out of range");
    }
    const std::int32_t pair = col_pair[e.context];
    if (pair < 0) throw data_error("build_raw_ppmi_space: context is not a unigram");
    const auto col =
        static_cast<std::uint32_t>(pair + (e.kind == CoocKind::UnigramRight ? 1 : 0));
    counts.push_back({e.target, col, 1.0});
  }
  const auto n_cols = static_cast<Eigen::Index>(next);
  SparseMatrix raw = make_sparse(static_cast<Eigen::Index>(lexicon.size()), n_cols,
                                 counts);
  return RawPpmiSpace(ppmi_transform(raw), std::move(col_pair));
}

LatentSpace build_latent_space(const std::vector<CoocEvent>& events,
                               const Lexicon& lexicon, Eigen::Index rank) {
  if (events.empty()) throw data_error("build_latent_space: empty counts");
  const CoocKind kind = events.front().kind;
  if (kind != CoocKind::Noun && kind != CoocKind::VerbPattern) {
    throw std::invalid_argument("build_latent_space: unsupported event kind");
  }
  // Noun contexts are lexicon rows; verb-pattern contexts are (verb, side) ids.
  const auto n_cols = static_cast<Eigen::Index>(
      kind == CoocKind::Noun ? lexicon.size() : 2 * lexicon.size());

  std::vector<Triplet> counts;
  counts.reserve(events.size());
  for (const auto& e : events) {
    if (e.kind != kind) {
      throw std::invalid_argument("build_latent_space: mixed event kinds");
    }
    if (e.target >= lexicon.size() ||
        e.context >= static_cast<std::uint32_t>(n_cols)) {
      throw data_error("build_latent_space: event out of range");
    }
    counts.push_back({e.target, e.context, 1.0});
  }
  SparseMatrix raw =
      make_sparse(static_cast<Eigen::Index>(lexicon.size()), n_cols, counts);
  const SparseMatrix ppmi = ppmi_transform(raw);
  const Eigen::Index max_rank = std::min(ppmi.rows(), ppmi.cols());
  const Eigen::Index r = std::min(rank, max_rank);
  return LatentSpace(truncated_svd(ppmi, r),
                     kind == CoocKind::Noun ? SpaceKind::Domain : SpaceKind::Function);
}

namespace {

double latent_similarity(const LatentSpace& space, const Lexicon& lexicon,
                         std::string_view x, std::string_view y, int k, double p) {
  const auto rx = lexicon.row_of(x);
  const auto ry = lexicon.row_of(y);
  if (!rx || !ry) return 0.0;
  return space.similarity(*rx, *ry, k, p);
}

}  // namespace

double dom(const LatentSpace& space, const Lexicon& lexicon, std::string_view x,
           std::string_view y, int k, double p) {
  if (space.kind() != SpaceKind::Domain) {
    throw std::invalid_argument("dom: space is not a domain space");
  }
  return latent_similarity(space, lexicon, x, y, k, p);
}

double fun(const LatentSpace& space, const Lexicon& lexicon, std::string_view x,
           std::string_view y, int k, double p) {
  if (space.kind() != SpaceKind::Function) {
    throw std::invalid_argument("fun: space is not a function space");
  }
  return latent_similarity(space, lexicon, x, y, k, p);
}

SpaceBundle build_space_bundle(std::string_view corpus_text, const Lexicon& lexicon,
                               const BuildOptions& options) {
  if (lexicon.empty()) throw data_error("build_space_bundle: empty lexicon");
  const std::vector<std::string> tokens = tokenize(corpus_text, lexicon);

  SpaceBundle bundle;
  bundle.lexicon = lexicon;
  bundle.freqs = count_frequencies(tokens, lexicon);
  bundle.corpus_checksum = hex64(fnv1a(corpus_text));

  const auto unigram_events = extract_unigram_contexts(tokens, lexicon);
  const auto noun_events = extract_noun_contexts(tokens, lexicon);
  const auto verb_events = extract_verb_patterns(tokens, lexicon, options.verb_window);

  bundle.raw = std::make_shared<RawPpmiSpace>(build_raw_ppmi_space(unigram_events, lexicon));

  if (options.grid.k_values.empty() || options.grid.p_values.empty()) {
    throw std::invalid_argument("build_space_bundle: empty grid");
  }
  const int max_k = options.grid.k_values.back();
  const auto lex_rows = static_cast<Eigen::Index>(lexicon.size());
  bundle.domain = std::make_shared<LatentSpace>(
      build_latent_space(noun_events, lexicon,
                         std::min<Eigen::Index>(max_k, lex_rows)));
  bundle.function = std::make_shared<LatentSpace>(
      build_latent_space(verb_events, lexicon,
                         std::min<Eigen::Index>(max_k, lex_rows)));

  // Both latent spaces share one grid, clamped to the smaller retained rank so
  // every k indexes valid columns in both.
  const Eigen::Index shared_rank = std::min(bundle.domain->factors().rank(),
                                            bundle.function->factors().rank());
  bundle.grid = options.grid.clamped_to(shared_rank);
  return bundle;
}

void save_space_bundle(const SpaceBundle& bundle, const std::string& dir,
                       const std::string& config_json) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw data_error("cannot create directory: " + dir);

  write_sparse(dir + "/raw_ppmi.bin", bundle.raw->matrix());
  write_factors(dir + "/domain.factors", bundle.domain->factors());
  write_factors(dir + "/function.factors", bundle.function->factors());
  bundle.lexicon.save_tsv(dir + "/lexicon.tsv");

  json meta;
  meta["ranks"] = {{"domain", bundle.domain->factors().rank()},
                   {"function", bundle.function->factors().rank()}};
  meta["grid"] = {{"k_values", bundle.grid.k_values},
                  {"p_values", bundle.grid.p_values}};
  meta["corpus_checksum"] = bundle.corpus_checksum;
  meta["term_frequencies"] = bundle.freqs.counts;
  meta["total_tokens"] = bundle.freqs.total;
  meta["config"] = json::parse(config_json);
  std::ofstream out(dir + "/meta.json");
  if (!out) throw data_error("cannot write file: " + dir + "/meta.json");
  out << meta.dump(2) << "\n";
}

SpaceBundle load_space_bundle(const std::string& dir) {
  SpaceBundle bundle;
  bundle.lexicon = Lexicon::load_tsv(dir + "/lexicon.tsv");

  std::ifstream in(dir + "/meta.json");
  if (!in) throw data_error("cannot open file: " + dir + "/meta.json");
  json meta;
  try {
    in >> meta;
  } catch (const json::exception& e) {
    throw data_error("bad meta.json: " + std::string(e.what()));
  }
  try {
    bundle.grid.k_values = meta.at("grid").at("k_values").get<std::vector<int>>();
    bundle.grid.p_values = meta.at("grid").at("p_values").get<std::vector<double>>();
    bundle.corpus_checksum = meta.at("corpus_checksum").get<std::string>();
    bundle.freqs.counts =
        meta.at("term_frequencies").get<std::vector<std::int64_t>>();
    bundle.freqs.total = meta.at("total_tokens").get<std::int64_t>();
  } catch (const json::exception& e) {
    throw data_error("bad meta.json: " + std::string(e.what()));
  }
  if (bundle.freqs.counts.size() != bundle.lexicon.size()) {
    throw data_error("meta.json frequency table does not match lexicon");
  }

  SparseMatrix raw = read_sparse(dir + "/raw_ppmi.bin");
  std::vector<std::int32_t> col_pair(bundle.lexicon.size(), -1);
  std::int32_t next = 0;
  for (std::size_t row = 0; row < bundle.lexicon.size(); ++row) {
    if (bundle.lexicon.is_unigram(row)) {
      col_pair[row] = next;
      next += 2;
    }
  }
  if (raw.cols() != static_cast<Eigen::Index>(next) ||
      raw.rows() != static_cast<Eigen::Index>(bundle.lexicon.size())) {
    throw data_error("raw_ppmi.bin shape does not match lexicon");
  }
  bundle.raw = std::make_shared<RawPpmiSpace>(std::move(raw), std::move(col_pair));
  bundle.domain = std::make_shared<LatentSpace>(
      read_factors(dir + "/domain.factors"), SpaceKind::Domain);
  bundle.function = std::make_shared<LatentSpace>(
      read_factors(dir + "/function.factors"), SpaceKind::Function);
  return bundle;
}

}  // namespace tuplesim
