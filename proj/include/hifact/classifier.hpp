#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hifact/labels.hpp"
#include "hifact/types.hpp"

namespace hifact {

using Probabilities = std::array<double, kNumLabels>;

/// Parameters of the input -> hidden (ReLU) -> 4-way softmax classifier.
/// Matrices are row-major: w1 is hidden x input_dim, w2 is 4 x hidden.
struct MLPParams {
  std::size_t input_dim = Embedding::kDim;
  std::size_t hidden = 256;
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  std::vector<double> b2;

  static MLPParams zeros(std::size_t input_dim, std::size_t hidden);

  // Shapes consistent and all values finite; throws Error(Format) otherwise.
  void validate() const;

  bool operator==(const MLPParams&) const = default;
};

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 50;
  std::size_t patience = 5;
  std::uint64_t seed = 42;
  std::size_t hidden_width = 256;

  void validate() const;
};

nlohmann::ordered_json to_json(const TrainConfig& config);

struct TrainReport {
  std::size_t epochs_run = 0;
  std::vector<double> train_loss;    // mean per-example loss, one per epoch
  std::vector<double> val_macro_f1;  // one per epoch
  std::size_t best_epoch = 0;        // 1-based
  double final_val_macro_f1 = 0.0;   // score of the returned parameters

  bool operator==(const TrainReport&) const = default;
};

nlohmann::ordered_json to_json(const TrainReport& report);

struct TrainingExample {
  std::vector<double> features;
  VeracityLabel label = VeracityLabel::Unverified;
};

struct Prediction {
  VeracityLabel label = VeracityLabel::True;
  double confidence = 0.0;
  Probabilities probabilities{};
};

// Glorot-uniform weights drawn from SplitMix64(seed), w1 then w2 in row-major
// order; biases zero.
MLPParams init_params(std::size_t hidden_width, std::uint64_t seed,
                      std::size_t input_dim = Embedding::kDim);

// Numerically stable softmax (max subtracted first).
Probabilities softmax(const Probabilities& logits);

Probabilities logits(const MLPParams& params, std::span<const double> x);

// Class probabilities in label-code order. Throws Error(NonFiniteInput) or
// Error(DimensionMismatch).
Probabilities forward(const MLPParams& params, std::span<const double> x);

// Argmax with ties to the lowest label code.
Prediction predict_from_probabilities(const Probabilities& probs);
Prediction predict(const MLPParams& params, std::span<const double> x);

struct LossAndGrad {
  double loss = 0.0;
  MLPParams grad;
};

// Mean cross-entropy over the batch and its gradient (same shape as params).
LossAndGrad loss_and_grad(const MLPParams& params,
                          std::span<const TrainingExample> batch);

void sgd_step(MLPParams& params, const MLPParams& grad, double learning_rate);

struct TrainResult {
  MLPParams params;
  TrainReport report;
};

/// Mini-batch SGD with a seeded shuffle each epoch and early stopping on
/// validation macro-F1. Returns the best-scoring parameters.
TrainResult train(std::span<const TrainingExample> train_set,
                  std::span<const TrainingExample> val_set, const TrainConfig& config);

/// Checkpoint: one JSON header line
///   {"format":"hifact-mlp","version":1,"hidden_width":H,"input_dim":D,
///    "label_order":[...],"dtype":"f64le","blocks":["w1","b1","w2","b2"]}
/// followed by the raw little-endian doubles of w1, b1, w2, b2 (row-major),
/// with nothing after them.
void write_checkpoint(const MLPParams& params, std::ostream& out);
MLPParams read_checkpoint(std::istream& in);
void checkpoint_save(const MLPParams& params, const std::string& path);
MLPParams checkpoint_load(const std::string& path);

}  // namespace hifact
