#include "hifact/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "hifact/error.hpp"
#include "hifact/metrics.hpp"
#include "hifact/rng.hpp"

namespace hifact {

namespace {

constexpr std::size_t kOut = kNumLabels;

void check_input(const MLPParams& params, std::span<const double> x) {
  if (x.size() != params.input_dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "input dimension " + std::to_string(x.size()) + " != " +
                    std::to_string(params.input_dim));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "non-finite input");
  }
}

// Hidden pre-activations; relu applied by callers as needed.
void hidden_layer(const MLPParams& p, std::span<const double> x,
                  std::vector<double>& pre) {
  pre.assign(p.hidden, 0.0);
  for (std::size_t j = 0; j < p.hidden; ++j) {
    const double* row = p.w1.data() + j * p.input_dim;
    double acc = p.b1[j];
    for (std::size_t i = 0; i < p.input_dim; ++i) acc += row[i] * x[i];
    pre[j] = acc;
  }
}

Probabilities output_layer(const MLPParams& p, const std::vector<double>& h) {
  Probabilities z{};
  for (std::size_t c = 0; c < kOut; ++c) {
    const double* row = p.w2.data() + c * p.hidden;
    double acc = p.b2[c];
    for (std::size_t j = 0; j < p.hidden; ++j) acc += row[j] * h[j];
    z[c] = acc;
  }
  return z;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

MLPParams MLPParams::zeros(std::size_t input_dim, std::size_t hidden) {
  MLPParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  p.w1.assign(hidden * input_dim, 0.0);
  p.b1.assign(hidden, 0.0);
  p.w2.assign(kOut * hidden, 0.0);
  p.b2.assign(kOut, 0.0);
  return p;
}

void MLPParams::validate() const {
  if (input_dim == 0 || hidden == 0) {
    throw Error(ErrorCode::Format, "classifier dimensions must be >= 1");
  }
  if (w1.size() != hidden * input_dim || b1.size() != hidden ||
      w2.size() != kOut * hidden || b2.size() != kOut) {
    throw Error(ErrorCode::Format, "classifier parameter shapes are inconsistent");
  }
  if (!all_finite(w1) || !all_finite(b1) || !all_finite(w2) || !all_finite(b2)) {
    throw Error(ErrorCode::Format, "classifier parameters contain non-finite values");
  }
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::InvalidArgument, "learning_rate must be > 0");
  }
  if (batch_size < 1 || max_epochs < 1 || patience < 1 || hidden_width < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "batch_size, max_epochs, patience, hidden_width must be >= 1");
  }
}

nlohmann::ordered_json to_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["learning_rate"] = c.learning_rate;
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["seed"] = c.seed;
  j["hidden_width"] = c.hidden_width;
  return j;
}

nlohmann::ordered_json to_json(const TrainReport& r) {
  nlohmann::ordered_json j;
  j["epochs_run"] = r.epochs_run;
  j["best_epoch"] = r.best_epoch;
  j["final_val_macro_f1"] = r.final_val_macro_f1;
  j["train_loss"] = r.train_loss;
  j["val_macro_f1"] = r.val_macro_f1;
  return j;
}

MLPParams init_params(std::size_t hidden_width, std::uint64_t seed,
                      std::size_t input_dim) {
  if (hidden_width < 1 || input_dim < 1) {
    throw Error(ErrorCode::InvalidArgument, "hidden_width and input_dim must be >= 1");
  }
  MLPParams p = MLPParams::zeros(input_dim, hidden_width);
  SplitMix64 rng(seed);
  const double bound1 = std::sqrt(6.0 / static_cast<double>(input_dim + hidden_width));
  for (double& w : p.w1) w = rng.uniform(-bound1, bound1);
  const double bound2 = std::sqrt(6.0 / static_cast<double>(hidden_width + kOut));
  for (double& w : p.w2) w = rng.uniform(-bound2, bound2);
  return p;
}

Probabilities softmax(const Probabilities& z) {
  const double m = *std::max_element(z.begin(), z.end());
  Probabilities p{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kOut; ++c) {
    p[c] = std::exp(z[c] - m);
    sum += p[c];
  }
  for (double& v : p) v /= sum;
  return p;
}

Probabilities logits(const MLPParams& params, std::span<const double> x) {
  check_input(params, x);
  std::vector<double> h;
  hidden_layer(params, x, h);
  for (double& v : h) v = std::max(v, 0.0);
  return output_layer(params, h);
}

Probabilities forward(const MLPParams& params, std::span<const double> x) {
  return softmax(logits(params, x));
}

Prediction predict_from_probabilities(const Probabilities& probs) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kOut; ++c) {
    if (probs[c] > probs[best]) best = c;
  }
  return {kAllLabels[best], probs[best], probs};
}

Prediction predict(const MLPParams& params, std::span<const double> x) {
  return predict_from_probabilities(forward(params, x));
}

LossAndGrad loss_and_grad(const MLPParams& params,
                          std::span<const TrainingExample> batch) {
  if (batch.empty()) throw Error(ErrorCode::EmptyBatch, "batch has no examples");
  LossAndGrad out{0.0, MLPParams::zeros(params.input_dim, params.hidden)};
  MLPParams& g = out.grad;
  std::vector<double> pre, h, delta_h(params.hidden);

  for (const auto& ex : batch) {
    check_input(params, ex.features);
    const auto& x = ex.features;
    hidden_layer(params, x, pre);
    h = pre;
    for (double& v : h) v = std::max(v, 0.0);
    const Probabilities p = softmax(output_layer(params, h));
    const std::size_t gold = static_cast<std::size_t>(label_code(ex.label));
    out.loss -= std::log(p[gold]);

    // Softmax + cross-entropy: dL/dz = p - onehot(gold).
    Probabilities dz = p;
    dz[gold] -= 1.0;
    std::fill(delta_h.begin(), delta_h.end(), 0.0);
    for (std::size_t c = 0; c < kOut; ++c) {
      g.b2[c] += dz[c];
      double* grow = g.w2.data() + c * params.hidden;
      const double* wrow = params.w2.data() + c * params.hidden;
      for (std::size_t j = 0; j < params.hidden; ++j) {
        grow[j] += dz[c] * h[j];
        delta_h[j] += dz[c] * wrow[j];
      }
    }
    for (std::size_t j = 0; j < params.hidden; ++j) {
      if (pre[j] <= 0.0) continue;  // ReLU gate
      const double d = delta_h[j];
      g.b1[j] += d;
      double* grow = g.w1.data() + j * params.input_dim;
      for (std::size_t i = 0; i < params.input_dim; ++i) grow[i] += d * x[i];
    }
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss *= inv;
  for (auto* v : {&g.w1, &g.b1, &g.w2, &g.b2}) {
    for (double& x : *v) x *= inv;
  }
  return out;
}

void sgd_step(MLPParams& params, const MLPParams& grad, double learning_rate) {
  const auto step = [learning_rate](std::vector<double>& w, const std::vector<double>& dw) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * dw[i];
  };
  step(params.w1, grad.w1);
  step(params.b1, grad.b1);
  step(params.w2, grad.w2);
  step(params.b2, grad.b2);
}

namespace {

double validation_macro_f1(const MLPParams& params,
                           std::span<const TrainingExample> val_set) {
  std::vector<VeracityLabel> gold, pred;
  gold.reserve(val_set.size());
  pred.reserve(val_set.size());
  for (const auto& ex : val_set) {
    gold.push_back(ex.label);
    pred.push_back(predict(params, ex.features).label);
  }
  return macro_f1(gold, pred).macro;
}

}  // namespace

TrainResult train(std::span<const TrainingExample> train_set,
                  std::span<const TrainingExample> val_set, const TrainConfig& config) {
  config.validate();
  if (train_set.empty()) throw Error(ErrorCode::EmptySet, "training set is empty");
  if (val_set.empty()) throw Error(ErrorCode::EmptySet, "validation set is empty");
  const std::size_t input_dim = train_set.front().features.size();

  MLPParams params = init_params(config.hidden_width, config.seed, input_dim);
  // Epoch shuffles use their own stream so changing max_epochs never
  // perturbs the initial weights.
  SplitMix64 shuffle_rng(config.seed ^ 0xA5A5A5A5A5A5A5A5ULL);

  TrainResult result{params, {}};
  TrainReport& report = result.report;
  double best_score = -1.0;
  std::size_t since_best = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<TrainingExample> batch;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(train_set[order[k]]);
      LossAndGrad lg = loss_and_grad(params, batch);
      if (!std::isfinite(lg.loss)) {
        throw Error(ErrorCode::Divergence,
                    "loss became non-finite in epoch " + std::to_string(epoch));
      }
      loss_sum += lg.loss * static_cast<double>(batch.size());
      sgd_step(params, lg.grad, config.learning_rate);
    }
    const double score = validation_macro_f1(params, val_set);
    report.epochs_run = epoch;
    report.train_loss.push_back(loss_sum / static_cast<double>(order.size()));
    report.val_macro_f1.push_back(score);

    if (score > best_score) {
      best_score = score;
      report.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  report.final_val_macro_f1 = best_score;
  return result;
}

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

void write_checkpoint(const MLPParams& params, std::ostream& out) {
  params.validate();
  nlohmann::ordered_json header;
  header["format"] = "hifact-mlp";
  header["version"] = 1;
  header["hidden_width"] = params.hidden;
  header["input_dim"] = params.input_dim;
  header["label_order"] = nlohmann::json::array();
  for (VeracityLabel l : kAllLabels) {
    header["label_order"].push_back(std::string(render_label(l)));
  }
  header["dtype"] = "f64le";
  header["blocks"] = {"w1", "b1", "w2", "b2"};
  out << header.dump() << '\n';
  for (const auto* block : {&params.w1, &params.b1, &params.w2, &params.b2}) {
    out.write(reinterpret_cast<const char*>(block->data()),
              static_cast<std::streamsize>(block->size() * sizeof(double)));
  }
}

MLPParams read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::Format, "missing checkpoint header", 0);
  }
  std::uint64_t offset = line.size() + 1;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, std::string("bad checkpoint header: ") + e.what(), 0);
  }
  try {
    if (header.at("format") != "hifact-mlp") {
      throw Error(ErrorCode::Format, "not a hifact-mlp checkpoint", 0);
    }
    if (header.at("version") != 1) {
      throw Error(ErrorCode::Format, "unsupported checkpoint version", 0);
    }
    if (header.value("dtype", std::string("f64le")) != "f64le") {
      throw Error(ErrorCode::Format, "unsupported dtype", 0);
    }
    const auto& order = header.at("label_order");
    if (!order.is_array() || order.size() != kNumLabels) {
      throw Error(ErrorCode::Format, "label_order must list 4 labels", 0);
    }
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      if (order[c] != render_label(kAllLabels[c])) {
        throw Error(ErrorCode::Format, "label_order does not match label codes", 0);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, std::string("bad checkpoint header: ") + e.what(), 0);
  }

  std::size_t hidden = 0, input_dim = 0;
  try {
    hidden = header.at("hidden_width").get<std::size_t>();
    input_dim = header.at("input_dim").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Format, std::string("bad checkpoint shape: ") + e.what(), 0);
  }
  if (hidden == 0 || input_dim == 0 || hidden > (1u << 16) || input_dim > (1u << 16)) {
    throw Error(ErrorCode::Format, "implausible checkpoint shape", 0);
  }

  MLPParams p = MLPParams::zeros(input_dim, hidden);
  for (auto* block : {&p.w1, &p.b1, &p.w2, &p.b2}) {
    const std::size_t bytes = block->size() * sizeof(double);
    in.read(reinterpret_cast<char*>(block->data()), static_cast<std::streamsize>(bytes));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got != bytes) {
      throw Error(ErrorCode::Format,
                  "truncated checkpoint at byte " + std::to_string(offset + got),
                  offset + got);
    }
    offset += bytes;
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::Format,
                "checkpoint has trailing bytes at byte " + std::to_string(offset) +
                    " (shape does not match header)",
                offset);
  }
  p.validate();
  return p;
}

void checkpoint_save(const MLPParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write checkpoint '" + path + "'");
  write_checkpoint(params, out);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

MLPParams checkpoint_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read checkpoint '" + path + "'");
  return read_checkpoint(in);
}

}  // namespace hifact
