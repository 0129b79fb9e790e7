#include "textlier/corpus/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "textlier/error.hpp"
#include "textlier/random.hpp"

namespace textlier::corpus {

std::vector<RawDocument> inject_outliers(std::span<const RawDocument> normal,
                                         std::span<const RawDocument> outlier_pool,
                                         std::size_t n_inject, std::uint64_t seed) {
  if (n_inject > outlier_pool.size())
    throw ArgumentError("cannot inject " + std::to_string(n_inject) + " outliers from a pool of " +
                        std::to_string(outlier_pool.size()));
  Rng rng(seed);
  std::vector<std::size_t> picks(outlier_pool.size());
  std::iota(picks.begin(), picks.end(), 0);
  std::shuffle(picks.begin(), picks.end(), rng);

  std::vector<RawDocument> out(normal.begin(), normal.end());
  for (std::size_t i = 0; i < n_inject; ++i) out.push_back(outlier_pool[picks[i]]);

  std::unordered_set<std::string> ids;
  for (const auto& d : out)
    if (!ids.insert(d.id).second)
      throw ArgumentError("duplicate document id '" + d.id + "' in injected corpus");

  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

namespace {

std::array<std::size_t, 3> allocate(std::size_t n, const std::array<double, 3>& fractions) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    const double exact = fractions[p] * static_cast<double>(n);
    counts[p] = static_cast<std::size_t>(std::floor(exact));
    remainder[p] = exact - static_cast<double>(counts[p]);
    assigned += counts[p];
  }
  while (assigned < n) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < 3; ++p)
      if (remainder[p] > remainder[best]) best = p;
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  while (assigned > n) {  // floating slop when fractions sum a hair above 1
    std::size_t big = 0;
    for (std::size_t p = 1; p < 3; ++p)
      if (counts[p] > counts[big]) big = p;
    --counts[big];
    --assigned;
  }
  for (std::size_t p = 0; p < 3; ++p) {
    if (fractions[p] <= 0.0 || counts[p] > 0) continue;
    std::size_t big = 0;
    for (std::size_t q = 1; q < 3; ++q)
      if (counts[q] > counts[big]) big = q;
    --counts[big];
    ++counts[p];
  }
  return counts;
}

}  // namespace

DatasetSplit stratified_split(std::span<const EmbeddedDocument> docs,
                              const std::array<double, 3>& fractions, std::uint64_t seed) {
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ArgumentError("split fractions must lie in [0, 1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("split fractions must sum to 1");
  const auto non_empty =
      static_cast<std::size_t>(std::count_if(fractions.begin(), fractions.end(),
                                             [](double f) { return f > 0.0; }));

  std::unordered_set<std::string> ids;
  for (const auto& d : docs)
    if (!ids.insert(d.id).second) throw ArgumentError("duplicate document id '" + d.id + "'");

  Rng rng(seed);
  std::vector<int> assignment(docs.size(), 0);
  for (int label : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < docs.size(); ++i)
      if (docs[i].label == label) members.push_back(i);
    if (members.empty()) continue;
    if (members.size() < non_empty)
      throw StratificationError("class " + std::to_string(label) + " has " +
                                std::to_string(members.size()) + " documents but " +
                                std::to_string(non_empty) + " partitions are requested");
    std::shuffle(members.begin(), members.end(), rng);
    const auto counts = allocate(members.size(), fractions);
    std::size_t cursor = 0;
    for (int p = 0; p < 3; ++p)
      for (std::size_t k = 0; k < counts[static_cast<std::size_t>(p)]; ++k)
        assignment[members[cursor++]] = p;
  }

  DatasetSplit split;
  split.seed = seed;
  split.fractions = fractions;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    switch (assignment[i]) {
      case 0: split.train.push_back(docs[i]); break;
      case 1: split.validation.push_back(docs[i]); break;
      default: split.test.push_back(docs[i]); break;
    }
  }
  return split;
}

std::vector<LabeledFeature> oversample(std::span<const LabeledFeature> items, std::uint64_t seed) {
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < items.size(); ++i) {
    const int label = items[i].label;
    if (label != 0 && label != 1)
      throw ArgumentError("oversample: label " + std::to_string(label) + " is not 0 or 1");
    by_class[label].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty())
    throw ArgumentError("oversample needs both classes present");

  const std::size_t minority = by_class[0].size() < by_class[1].size() ? 0 : 1;
  const std::size_t deficit = by_class[1 - minority].size() - by_class[minority].size();

  Rng rng(seed);
  std::vector<LabeledFeature> out(items.begin(), items.end());
  std::uniform_int_distribution<std::size_t> pick(0, by_class[minority].size() - 1);
  for (std::size_t k = 0; k < deficit; ++k) out.push_back(items[by_class[minority][pick(rng)]]);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace textlier::corpus
