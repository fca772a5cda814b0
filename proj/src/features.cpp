#include "tuplesim/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tuplesim/errors.hpp"
#include "tuplesim/util.hpp"

namespace tuplesim {

namespace {

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string csv_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FeatureSpec FeatureSpec::make(int n, GridSpec grid) {
  if (n < 1) throw std::invalid_argument("FeatureSpec: tuple size must be >= 1");
  FeatureSpec spec;
  spec.n = n;
  spec.grid = std::move(grid);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) spec.ppmi_pairs.emplace_back(i, j);
  }
  return spec;
}

bool FeatureSpec::ppmi_pair_enabled(int i, int j) const {
  const PairIndex key{std::min(i, j), std::max(i, j)};
  return std::find(ppmi_pairs.begin(), ppmi_pairs.end(), key) != ppmi_pairs.end();
}

std::size_t FeatureSpec::lf_length() const {
  return block_enabled(Block::LF) ? static_cast<std::size_t>(n) : 0;
}

std::size_t FeatureSpec::ppmi_length() const {
  if (!block_enabled(Block::PPMI)) return 0;
  std::size_t enabled = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (ppmi_pair_enabled(i, j)) ++enabled;
    }
  }
  return 4 * enabled;  // two orders x two hands per unordered pair
}

std::size_t FeatureSpec::pair_grid_length() const {
  const auto pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  return pairs * grid.n_k() * grid.n_p();
}

std::size_t FeatureSpec::total_length() const {
  std::size_t total = lf_length() + ppmi_length();
  if (block_enabled(Block::Dom)) total += pair_grid_length();
  if (block_enabled(Block::Fun)) total += pair_grid_length();
  return total;
}

std::vector<std::string> FeatureSpec::feature_names() const {
  std::vector<std::string> names;
  names.reserve(total_length());
  if (block_enabled(Block::LF)) {
    for (int i = 0; i < n; ++i) names.push_back("LF[" + std::to_string(i) + "]");
  }
  if (block_enabled(Block::PPMI)) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || !ppmi_pair_enabled(i, j)) continue;
        const std::string base =
            "PPMI[" + std::to_string(i) + "," + std::to_string(j) + ",";
        names.push_back(base + "left]");
        names.push_back(base + "right]");
      }
    }
  }
  for (const Block b : {Block::Dom, Block::Fun}) {
    if (!block_enabled(b)) continue;
    const std::string tag = b == Block::Dom ? "DOM[" : "FUN[";
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        for (const int k : grid.k_values) {
          for (const double p : grid.p_values) {
            names.push_back(tag + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + "," + short_real(p) + "]");
          }
        }
      }
    }
  }
  return names;
}

std::uint64_t FeatureSpec::fingerprint() const {
  std::ostringstream canon;
  canon << "n=" << n << ";k=";
  for (const int k : grid.k_values) canon << k << ",";
  canon << ";p=";
  for (const double p : grid.p_values) canon << csv_real(p) << ",";
  canon << ";blocks=";
  for (const bool b : blocks) canon << (b ? '1' : '0');
  canon << ";pairs=";
  for (const auto& [i, j] : ppmi_pairs) canon << i << "-" << j << ",";
  return fnv1a(canon.str());
}

FeatureSpec ppmi_pair_subset_mask(FeatureSpec spec,
                                  const std::vector<PairIndex>& subsets) {
  for (const auto& [i, j] : subsets) {
    const bool valid = (i == 0 && j == 1) || (i == 0 && j == 2) || (i == 1 && j == 2);
    if (!valid) {
      throw std::invalid_argument("ppmi_pair_subset_mask: invalid pair index");
    }
    if (j >= spec.n) {
      throw std::invalid_argument("ppmi_pair_subset_mask: pair exceeds tuple size");
    }
  }
  spec.ppmi_pairs = subsets;
  std::sort(spec.ppmi_pairs.begin(), spec.ppmi_pairs.end());
  spec.ppmi_pairs.erase(
      std::unique(spec.ppmi_pairs.begin(), spec.ppmi_pairs.end()),
      spec.ppmi_pairs.end());
  return spec;
}

double lf(const FreqTable& freqs, const Lexicon& lexicon, std::string_view term) {
  const auto row = lexicon.row_of(term);
  if (!row) return 0.0;  // OOV terms have frequency zero
  return std::log(static_cast<double>(freqs.count(*row)) + 1.0);
}

Vector featurize(const std::vector<std::string>& tuple, const SpaceBundle& spaces,
                 const FeatureSpec& spec) {
  if (tuple.size() != static_cast<std::size_t>(spec.n)) {
    throw std::invalid_argument("featurize: tuple length mismatch");
  }
  Vector out(static_cast<Eigen::Index>(spec.total_length()));
  Eigen::Index at = 0;

  if (spec.block_enabled(Block::LF)) {
    for (const auto& term : tuple) {
      out(at++) = lf(spaces.freqs, spaces.lexicon, term);
    }
  }
  if (spec.block_enabled(Block::PPMI)) {
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.n; ++j) {
        if (i == j || !spec.ppmi_pair_enabled(i, j)) continue;
        out(at++) = spaces.raw->ppmi(spaces.lexicon, tuple[static_cast<std::size_t>(i)],
                                     tuple[static_cast<std::size_t>(j)],
                                     RawPpmiSpace::Hand::Left);
        out(at++) = spaces.raw->ppmi(spaces.lexicon, tuple[static_cast<std::size_t>(i)],
                                     tuple[static_cast<std::size_t>(j)],
                                     RawPpmiSpace::Hand::Right);
      }
    }
  }
  for (const Block b : {Block::Dom, Block::Fun}) {
    if (!spec.block_enabled(b)) continue;
    const LatentSpace& space = b == Block::Dom ? *spaces.domain : *spaces.function;
    for (int i = 0; i < spec.n; ++i) {
      for (int j = i + 1; j < spec.n; ++j) {
        const auto& x = tuple[static_cast<std::size_t>(i)];
        const auto& y = tuple[static_cast<std::size_t>(j)];
        for (const int k : spec.grid.k_values) {
          for (const double p : spec.grid.p_values) {
            out(at++) = b == Block::Dom ? dom(space, spaces.lexicon, x, y, k, p)
                                        : fun(space, spaces.lexicon, x, y, k, p);
          }
        }
      }
    }
  }
  return out;
}

std::string feature_matrix_csv(const std::vector<std::vector<std::string>>& tuples,
                               const SpaceBundle& spaces, const FeatureSpec& spec) {
  std::ostringstream out;
  const auto names = spec.feature_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out << ',';
    // Grid feature names contain commas, so quote them CSV-style.
    if (names[i].find_first_of(",\"") != std::string::npos) {
      out << '"';
      for (const char c : names[i]) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << names[i];
    }
  }
  out << '\n';
  for (const auto& tuple : tuples) {
    const Vector v = featurize(tuple, spaces, spec);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_real(v(i));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace tuplesim
