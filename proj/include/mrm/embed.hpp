#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mrm/corpus_io.hpp"

namespace mrm {

enum class EmbedAlgorithm { Cbow, SkipGram, CWindow, StructuredSkipGram };

std::optional<EmbedAlgorithm> parse_embed_algorithm(std::string_view name);
std::string_view to_string(EmbedAlgorithm algorithm);
bool is_position_aware(EmbedAlgorithm algorithm);

struct EmbedConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  EmbedAlgorithm algorithm = EmbedAlgorithm::StructuredSkipGram;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  double final_learning_rate = 0.0001;
  std::size_t negatives = 5;
  std::uint64_t min_count = 1;
  std::uint64_t seed = 0;
  // Share one output block across all offsets (reduces the position-aware
  // variants to their plain counterparts).
  bool tie_blocks = false;

  void validate() const;  // throws ConfigError
  std::size_t blocks() const;
  // Output block for a non-zero window offset in [-window, window].
  std::size_t block_for_offset(int offset) const;
};

// Input vectors (one per token) and output vectors (one per token per block).
struct EmbeddingParams {
  std::size_t vocab = 0;
  std::size_t dim = 0;
  std::size_t blocks = 1;
  std::vector<double> input;   // vocab x dim
  std::vector<double> output;  // blocks x vocab x dim

  EmbeddingParams() = default;
  EmbeddingParams(std::size_t vocab, std::size_t dim, std::size_t blocks);

  std::span<double> in(std::size_t token) { return {input.data() + token * dim, dim}; }
  std::span<const double> in(std::size_t token) const { return {input.data() + token * dim, dim}; }
  std::span<double> out(std::size_t block, std::size_t token) {
    return {output.data() + (block * vocab + token) * dim, dim};
  }
  std::span<const double> out(std::size_t block, std::size_t token) const {
    return {output.data() + (block * vocab + token) * dim, dim};
  }
};

// Inputs (token, output block) jointly score a candidate t as
//   s(t) = sum over inputs x of out[block_x][t] . in[x]
// and the loss is -log sig(s(target)) - sum over negatives of log sig(-s(n)).
// Skip-gram: one input (the centre). CBOW/cwindow: one input per context
// position, so CBOW uses the sum of context vectors.
struct TrainingExample {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> inputs;
  std::uint32_t target = 0;
  std::vector<std::uint32_t> negatives;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> input;   // same layout as EmbeddingParams::input
  std::vector<double> output;  // same layout as EmbeddingParams::output
};

LossGradient loss_and_gradient(const TrainingExample& example, const EmbeddingParams& params);
double example_loss(const TrainingExample& example, const EmbeddingParams& params);

// In-place SGD update with the gradient of loss_and_gradient; returns the
// loss before the update.
double sgd_step(const TrainingExample& example, EmbeddingParams& params, double learning_rate);

struct EmbedResult {
  EmbeddingTable table;
  EmbeddingParams params;
  std::vector<double> epoch_losses;  // mean loss per example, per epoch
};

// Tokens below min_count are dropped; rows follow first appearance in the
// corpus. Throws EmptyVocabulary when nothing survives pruning.
EmbedResult train_embeddings(const WalkCorpus& corpus, const EmbedConfig& config);

}  // namespace mrm
