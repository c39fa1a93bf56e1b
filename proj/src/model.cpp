#include "closek/model.hpp"

#include <algorithm>
#include <cmath>

#include "closek/errors.hpp"
#include "closek/random.hpp"

namespace closek {

std::string_view to_string(ModelFamily family) {
  return family == ModelFamily::Linear ? "linear" : "residual_mlp";
}

ModelFamily parse_model_family(std::string_view name) {
  if (name == "linear") return ModelFamily::Linear;
  if (name == "residual_mlp" || name == "mlp" || name == "nn") return ModelFamily::ResidualMlp;
  throw ArgumentError("unknown model family '" + std::string(name) + "'");
}

Model::Model(ModelFamily family, std::size_t dim) : family_(family), dim_(dim) {
  if (dim == 0) throw ArgumentError("model input dimension must be positive");
  const auto add = [this](std::string name, std::size_t size, bool is_bias) {
    const std::size_t offset = blocks_.empty() ? 0 : blocks_.back().offset + blocks_.back().size;
    blocks_.push_back({std::move(name), offset, size, is_bias});
  };
  if (family == ModelFamily::Linear) {
    add("weights", dim, false);
    add("bias", 1, true);
  } else {
    add("W1", dim * dim, false);
    add("b1", dim, true);
    add("W2", dim * dim, false);
    add("b2", dim, true);
    add("w_out", dim, false);
    add("b_out", 1, true);
  }
  params_.assign(blocks_.back().offset + blocks_.back().size, 0.0);
}

Model Model::linear(std::size_t dim) { return Model(ModelFamily::Linear, dim); }

Model Model::zero_residual_mlp(std::size_t dim) { return Model(ModelFamily::ResidualMlp, dim); }

Model Model::residual_mlp(std::size_t dim, std::uint64_t seed) {
  Model model(ModelFamily::ResidualMlp, dim);
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  for (const auto& b : model.blocks_) {
    if (b.is_bias) continue;
    for (std::size_t i = 0; i < b.size; ++i) {
      model.params_[b.offset + i] = uniform(rng, -bound, bound);
    }
  }
  return model;
}

Model Model::initial(ModelFamily family, std::size_t dim, std::uint64_t seed) {
  return family == ModelFamily::Linear ? linear(dim) : residual_mlp(dim, seed);
}

std::span<const double> Model::block(std::string_view name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return {params_.data() + b.offset, b.size};
  }
  throw ArgumentError("model has no parameter block '" + std::string(name) + "'");
}

std::span<double> Model::block(std::string_view name) {
  for (const auto& b : blocks_) {
    if (b.name == name) return {params_.data() + b.offset, b.size};
  }
  throw ArgumentError("model has no parameter block '" + std::string(name) + "'");
}

void Model::check_input(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw ArgumentError("feature length " + std::to_string(x.size()) +
                        " does not match model dimension " + std::to_string(dim_));
  }
}

namespace {

// Activations of the residual MLP for one input.
struct MlpPass {
  std::vector<double> z1, h1, z2, h2;
  double score = 0.0;
};

MlpPass mlp_forward(const double* p, std::size_t d, std::span<const double> x) {
  const double* w1 = p;
  const double* b1 = w1 + d * d;
  const double* w2 = b1 + d;
  const double* b2 = w2 + d * d;
  const double* w_out = b2 + d;
  const double b_out = w_out[d];

  MlpPass pass;
  pass.z1.resize(d);
  pass.h1.resize(d);
  pass.z2.resize(d);
  pass.h2.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = b1[i];
    for (std::size_t j = 0; j < d; ++j) acc += w1[i * d + j] * x[j];
    pass.z1[i] = acc;
    pass.h1[i] = acc > 0.0 ? acc : 0.0;
  }
  for (std::size_t i = 0; i < d; ++i) {
    double acc = b2[i];
    for (std::size_t j = 0; j < d; ++j) acc += w2[i * d + j] * pass.h1[j];
    pass.z2[i] = acc;
    pass.h2[i] = acc > 0.0 ? acc : 0.0;
  }
  double score = b_out;
  for (std::size_t i = 0; i < d; ++i) score += w_out[i] * (pass.h2[i] + x[i]);
  pass.score = score;
  return pass;
}

}  // namespace

double Model::forward(std::span<const double> x) const {
  check_input(x);
  if (family_ == ModelFamily::Linear) {
    double score = params_[dim_];
    for (std::size_t j = 0; j < dim_; ++j) score += params_[j] * x[j];
    return score;
  }
  return mlp_forward(params_.data(), dim_, x).score;
}

void Model::backward(std::span<const double> x, double upstream, GradientBuffer& grads) const {
  check_input(x);
  if (!grads.congruent_with(*this)) throw ArgumentError("gradient buffer shape mismatch");
  double* g = grads.values().data();
  const std::size_t d = dim_;

  if (family_ == ModelFamily::Linear) {
    for (std::size_t j = 0; j < d; ++j) g[j] += upstream * x[j];
    g[d] += upstream;
    return;
  }

  const MlpPass pass = mlp_forward(params_.data(), d, x);
  const double* w2 = params_.data() + d * d + d;
  const double* w_out = w2 + d * d + d;
  double* g_w1 = g;
  double* g_b1 = g_w1 + d * d;
  double* g_w2 = g_b1 + d;
  double* g_b2 = g_w2 + d * d;
  double* g_wout = g_b2 + d;
  double* g_bout = g_wout + d;

  *g_bout += upstream;
  std::vector<double> dz2(d);
  for (std::size_t i = 0; i < d; ++i) {
    g_wout[i] += upstream * (pass.h2[i] + x[i]);
    dz2[i] = pass.z2[i] > 0.0 ? upstream * w_out[i] : 0.0;
  }
  std::vector<double> dh1(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    if (dz2[i] == 0.0) continue;
    g_b2[i] += dz2[i];
    for (std::size_t j = 0; j < d; ++j) {
      g_w2[i * d + j] += dz2[i] * pass.h1[j];
      dh1[j] += w2[i * d + j] * dz2[i];
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (pass.z1[i] <= 0.0 || dh1[i] == 0.0) continue;
    g_b1[i] += dh1[i];
    for (std::size_t j = 0; j < d; ++j) g_w1[i * d + j] += dh1[i] * x[j];
  }
}

GradientBuffer Model::backward(std::span<const double> x, double upstream) const {
  GradientBuffer grads(*this);
  backward(x, upstream, grads);
  return grads;
}

double Model::weight_norm_sq() const {
  double total = 0.0;
  for (const auto& b : blocks_) {
    if (b.is_bias) continue;
    for (std::size_t i = 0; i < b.size; ++i) total += params_[b.offset + i] * params_[b.offset + i];
  }
  return total;
}

nlohmann::json Model::to_json() const {
  nlohmann::json doc;
  doc["family"] = std::string(to_string(family_));
  doc["input_dim"] = dim_;
  for (const auto& b : blocks_) {
    if (b.size == 1 && b.is_bias) {
      doc[b.name] = params_[b.offset];
    } else {
      doc[b.name] = std::vector<double>(params_.begin() + static_cast<std::ptrdiff_t>(b.offset),
                                        params_.begin() + static_cast<std::ptrdiff_t>(b.offset + b.size));
    }
  }
  return doc;
}

Model Model::from_json(const nlohmann::json& doc) {
  try {
    Model model(parse_model_family(doc.at("family").get<std::string>()),
                doc.at("input_dim").get<std::size_t>());
    for (const auto& b : model.blocks_) {
      const auto& entry = doc.at(b.name);
      std::vector<double> values =
          entry.is_array() ? entry.get<std::vector<double>>() : std::vector<double>{entry.get<double>()};
      if (values.size() != b.size) {
        throw ArgumentError("parameter block '" + b.name + "' has the wrong length");
      }
      std::copy(values.begin(), values.end(), model.params_.begin() + static_cast<std::ptrdiff_t>(b.offset));
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed model document: ") + e.what());
  }
}

void GradientBuffer::zero() { std::fill(values_.begin(), values_.end(), 0.0); }

void GradientBuffer::add_scaled(const GradientBuffer& other, double scale) {
  if (other.values_.size() != values_.size()) throw ArgumentError("gradient buffer shape mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += scale * other.values_[i];
}

void GradientBuffer::scale(double factor) {
  for (double& v : values_) v *= factor;
}

void apply_update(Model& model, const GradientBuffer& grads, double step, double lambda) {
  if (!grads.congruent_with(model)) throw ArgumentError("gradient buffer shape mismatch");
  if (lambda < 0.0) throw ArgumentError("regularization strength must be non-negative");
  std::vector<double> next(model.parameters().begin(), model.parameters().end());
  const auto g = grads.values();
  for (const auto& b : model.blocks()) {
    const double decay = b.is_bias ? 0.0 : 2.0 * lambda;
    for (std::size_t i = b.offset; i < b.offset + b.size; ++i) {
      next[i] -= step * (g[i] + decay * next[i]);
      if (!std::isfinite(next[i])) {
        throw DivergenceError("parameter '" + b.name + "' became non-finite");
      }
    }
  }
  std::copy(next.begin(), next.end(), model.parameters().begin());
}

}  // namespace closek
