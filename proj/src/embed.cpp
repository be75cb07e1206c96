#include "mrm/embed.hpp"

#include <algorithm>
#include <cmath>

#include "mrm/error.hpp"
#include "mrm/rng.hpp"

namespace mrm {

std::optional<EmbedAlgorithm> parse_embed_algorithm(std::string_view name) {
  if (name == "cbow" || name == "CBOW") return EmbedAlgorithm::Cbow;
  if (name == "skip-gram" || name == "skipgram" || name == "SG") return EmbedAlgorithm::SkipGram;
  if (name == "cwindow" || name == "CWINDOW") return EmbedAlgorithm::CWindow;
  if (name == "structured-skip-gram" || name == "structured" || name == "SSG") {
    return EmbedAlgorithm::StructuredSkipGram;
  }
  return std::nullopt;
}

std::string_view to_string(EmbedAlgorithm algorithm) {
  switch (algorithm) {
    case EmbedAlgorithm::Cbow: return "cbow";
    case EmbedAlgorithm::SkipGram: return "skip-gram";
    case EmbedAlgorithm::CWindow: return "cwindow";
    case EmbedAlgorithm::StructuredSkipGram: return "structured-skip-gram";
  }
  return "?";
}

bool is_position_aware(EmbedAlgorithm algorithm) {
  return algorithm == EmbedAlgorithm::CWindow || algorithm == EmbedAlgorithm::StructuredSkipGram;
}

void EmbedConfig::validate() const {
  if (dim < 1) throw ConfigError("embedding dimension must be at least 1");
  if (window < 1) throw ConfigError("window must be at least 1");
  if (negatives < 1) throw ConfigError("negative samples must be at least 1");
  if (!(learning_rate > 0.0) || !(final_learning_rate >= 0.0)) {
    throw ConfigError("learning rates must be positive");
  }
}

std::size_t EmbedConfig::blocks() const {
  return is_position_aware(algorithm) && !tie_blocks ? 2 * window : 1;
}

std::size_t EmbedConfig::block_for_offset(int offset) const {
  if (blocks() == 1) return 0;
  auto w = static_cast<int>(window);
  return static_cast<std::size_t>(offset < 0 ? offset + w : offset + w - 1);
}

EmbeddingParams::EmbeddingParams(std::size_t vocab_size, std::size_t dimension,
                                 std::size_t block_count)
    : vocab(vocab_size),
      dim(dimension),
      blocks(block_count),
      input(vocab_size * dimension, 0.0),
      output(block_count * vocab_size * dimension, 0.0) {}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double candidate_score(const TrainingExample& example, const EmbeddingParams& params,
                       std::uint32_t candidate) {
  double s = 0.0;
  for (auto [token, block] : example.inputs) s += dot(params.out(block, candidate), params.in(token));
  return s;
}

// (candidate, label) pairs: target first, then negatives.
template <typename F>
void for_each_candidate(const TrainingExample& example, F&& f) {
  f(example.target, 1.0);
  for (auto n : example.negatives) f(n, 0.0);
}

}  // namespace

double example_loss(const TrainingExample& example, const EmbeddingParams& params) {
  double loss = 0.0;
  for_each_candidate(example, [&](std::uint32_t t, double label) {
    double s = candidate_score(example, params, t);
    loss -= label > 0.5 ? log_sigmoid(s) : log_sigmoid(-s);
  });
  return loss;
}

LossGradient loss_and_gradient(const TrainingExample& example, const EmbeddingParams& params) {
  LossGradient result;
  result.input.assign(params.input.size(), 0.0);
  result.output.assign(params.output.size(), 0.0);
  const std::size_t dim = params.dim;
  for_each_candidate(example, [&](std::uint32_t t, double label) {
    double s = candidate_score(example, params, t);
    result.loss -= label > 0.5 ? log_sigmoid(s) : log_sigmoid(-s);
    double g = sigmoid(s) - label;
    for (auto [token, block] : example.inputs) {
      auto in = params.in(token);
      auto out = params.out(block, t);
      double* gin = result.input.data() + token * dim;
      double* gout = result.output.data() + (block * params.vocab + t) * dim;
      for (std::size_t k = 0; k < dim; ++k) {
        gin[k] += g * out[k];
        gout[k] += g * in[k];
      }
    }
  });
  return result;
}

double sgd_step(const TrainingExample& example, EmbeddingParams& params, double learning_rate) {
  const std::size_t dim = params.dim;
  // Input updates are accumulated and applied after all candidates, so the
  // step equals -lr times the full gradient at the current point.
  std::vector<double> input_delta(example.inputs.size() * dim, 0.0);
  std::vector<double> coefficients;
  double loss = 0.0;
  for_each_candidate(example, [&](std::uint32_t t, double label) {
    double s = candidate_score(example, params, t);
    loss -= label > 0.5 ? log_sigmoid(s) : log_sigmoid(-s);
    coefficients.push_back(sigmoid(s) - label);
  });
  std::size_t c = 0;
  // Output rows may repeat (e.g. a negative equal to another); gradients
  // are computed from the pre-update inputs so repeats simply add up.
  for_each_candidate(example, [&](std::uint32_t t, double) {
    double g = coefficients[c++];
    for (std::size_t x = 0; x < example.inputs.size(); ++x) {
      auto [token, block] = example.inputs[x];
      auto out = params.out(block, t);
      for (std::size_t k = 0; k < dim; ++k) input_delta[x * dim + k] += g * out[k];
    }
  });
  c = 0;
  for_each_candidate(example, [&](std::uint32_t t, double) {
    double g = coefficients[c++];
    for (auto [token, block] : example.inputs) {
      auto in = params.in(token);
      auto out = params.out(block, t);
      for (std::size_t k = 0; k < dim; ++k) out[k] -= learning_rate * g * in[k];
    }
  });
  for (std::size_t x = 0; x < example.inputs.size(); ++x) {
    auto in = params.in(example.inputs[x].first);
    for (std::size_t k = 0; k < dim; ++k) in[k] -= learning_rate * input_delta[x * dim + k];
  }
  return loss;
}

namespace {

class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<std::uint64_t>& counts) {
    double total = 0.0;
    for (auto c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(total);
    }
    for (auto& c : cumulative_) c /= total;
  }

  std::uint32_t sample(Rng& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

EmbedResult train_embeddings(const WalkCorpus& corpus, const EmbedConfig& config) {
  config.validate();

  // Corpus token id -> row, in order of first appearance.
  std::vector<std::uint64_t> corpus_counts(corpus.vocabulary().size(), 0);
  std::vector<WalkCorpus::TokenId> first_seen;
  for (const auto& seq : corpus.sequences()) {
    for (auto t : seq) {
      if (corpus_counts[t]++ == 0) first_seen.push_back(t);
    }
  }
  constexpr auto kDropped = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> row_of(corpus_counts.size(), kDropped);
  std::vector<std::uint64_t> counts;
  for (auto t : first_seen) {
    if (corpus_counts[t] < config.min_count) continue;
    row_of[t] = static_cast<std::uint32_t>(counts.size());
    counts.push_back(corpus_counts[t]);
  }
  if (counts.empty()) throw EmptyVocabulary("no token reaches the minimum count");

  std::vector<std::vector<std::uint32_t>> sentences;
  std::uint64_t tokens_per_epoch = 0;
  for (const auto& seq : corpus.sequences()) {
    std::vector<std::uint32_t> s;
    for (auto t : seq) {
      if (row_of[t] != kDropped) s.push_back(row_of[t]);
    }
    tokens_per_epoch += s.size();
    if (!s.empty()) sentences.push_back(std::move(s));
  }

  Rng rng(config.seed);
  EmbedResult result;
  result.params = EmbeddingParams(counts.size(), config.dim, config.blocks());
  double bound = 0.5 / static_cast<double>(config.dim);
  for (auto& v : result.params.input) v = rng.uniform(-bound, bound);

  NoiseSampler noise(counts);
  const auto total = static_cast<double>(tokens_per_epoch * config.epochs);
  std::uint64_t processed = 0;
  const auto w = static_cast<int>(config.window);
  bool per_context = config.algorithm == EmbedAlgorithm::SkipGram ||
                     config.algorithm == EmbedAlgorithm::StructuredSkipGram;

  TrainingExample example;
  auto draw_negatives = [&](std::uint32_t target) {
    example.negatives.clear();
    while (example.negatives.size() < config.negatives) {
      auto n = noise.sample(rng);
      if (n == target && counts.size() > 1) continue;
      example.negatives.push_back(n);
    }
  };

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t examples = 0;
    for (const auto& sentence : sentences) {
      const auto len = static_cast<int>(sentence.size());
      for (int i = 0; i < len; ++i) {
        double progress = total > 0 ? static_cast<double>(processed) / total : 0.0;
        double lr = config.learning_rate -
                    (config.learning_rate - config.final_learning_rate) * progress;
        ++processed;
        int reach = w - static_cast<int>(rng.index(config.window));
        std::uint32_t centre = sentence[i];
        if (per_context) {
          for (int j = -reach; j <= reach; ++j) {
            if (j == 0 || i + j < 0 || i + j >= len) continue;
            example.inputs.assign(
                {{centre, static_cast<std::uint32_t>(config.block_for_offset(j))}});
            example.target = sentence[i + j];
            draw_negatives(example.target);
            epoch_loss += sgd_step(example, result.params, lr);
            ++examples;
          }
        } else {
          example.inputs.clear();
          for (int j = -reach; j <= reach; ++j) {
            if (j == 0 || i + j < 0 || i + j >= len) continue;
            example.inputs.emplace_back(sentence[i + j],
                                        static_cast<std::uint32_t>(config.block_for_offset(j)));
          }
          if (example.inputs.empty()) continue;
          example.target = centre;
          draw_negatives(centre);
          epoch_loss += sgd_step(example, result.params, lr);
          ++examples;
        }
      }
    }
    result.epoch_losses.push_back(examples ? epoch_loss / static_cast<double>(examples) : 0.0);
  }

  result.table = EmbeddingTable(config.dim);
  for (std::size_t r = 0; r < first_seen.size(); ++r) {
    auto t = first_seen[r];
    if (row_of[t] == kDropped) continue;
    result.table.add(corpus.token(t), result.params.in(row_of[t]), counts[row_of[t]]);
  }
  return result;
}

}  // namespace mrm
