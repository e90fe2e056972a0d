#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "a11yrev/corpus.hpp"

namespace a11yrev {

struct SyntheticOptions {
  std::size_t per_class = 500;
  /// Probability that a theme word is drawn from the other class's vocabulary.
  double noise = 0.02;
  std::size_t theme_words = 3;
  std::size_t filler_words = 6;
  std::uint64_t seed = 2021;
};

/// Theme vocabulary of a class. Phrases may span several words.
const std::vector<std::string>& synthetic_vocabulary(Label label);
const std::vector<std::string>& synthetic_filler();

/// Balanced, near-separable corpus: per_class reviews of each label, each
/// mixing theme phrases with shared filler words. Rows alternate by class.
LabeledCorpus generate_synthetic_corpus(const SyntheticOptions& options = {});

}  // namespace a11yrev
