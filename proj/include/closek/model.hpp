#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace closek {

enum class ModelFamily { Linear, ResidualMlp };

std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view name);

/// A named contiguous slice of the flat parameter vector.
struct ParameterBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t size = 0;
  bool is_bias = false;
};

class GradientBuffer;

/// Scoring model with all parameters held in one flat vector.
///
/// Linear:       score = <weights, x> + bias
/// ResidualMlp:  h1 = relu(W1 x + b1), h2 = relu(W2 h1 + b2),
///               score = <w_out, h2 + x> + b_out
/// Both hidden layers have width equal to the input dimension.
class Model {
 public:
  /// Zero-initialized linear model.
  static Model linear(std::size_t dim);
  /// Residual MLP with weights uniform in [-1/sqrt(d), 1/sqrt(d)], biases 0.
  static Model residual_mlp(std::size_t dim, std::uint64_t seed);
  /// Residual MLP with every parameter zero.
  static Model zero_residual_mlp(std::size_t dim);
  /// Family-dispatching constructor; the seed only affects the MLP.
  static Model initial(ModelFamily family, std::size_t dim, std::uint64_t seed);

  ModelFamily family() const noexcept { return family_; }
  std::size_t input_dim() const noexcept { return dim_; }

  std::span<const double> parameters() const noexcept { return params_; }
  std::span<double> parameters() noexcept { return params_; }

  const std::vector<ParameterBlock>& blocks() const noexcept { return blocks_; }
  std::span<const double> block(std::string_view name) const;
  std::span<double> block(std::string_view name);

  double forward(std::span<const double> x) const;

  /// Adds upstream * d(score)/d(theta) into `grads`.
  void backward(std::span<const double> x, double upstream, GradientBuffer& grads) const;
  /// Fresh buffer holding upstream * d(score)/d(theta).
  GradientBuffer backward(std::span<const double> x, double upstream) const;

  /// Sum of squared non-bias parameters.
  double weight_norm_sq() const;

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& doc);

  bool operator==(const Model& other) const {
    return family_ == other.family_ && dim_ == other.dim_ && params_ == other.params_;
  }

 private:
  Model(ModelFamily family, std::size_t dim);
  void check_input(std::span<const double> x) const;

  ModelFamily family_;
  std::size_t dim_;
  std::vector<double> params_;
  std::vector<ParameterBlock> blocks_;
};

/// Gradient with respect to a model's parameters; same flat layout.
class GradientBuffer {
 public:
  explicit GradientBuffer(const Model& model)
      : family_(model.family()), dim_(model.input_dim()),
        values_(model.parameters().size(), 0.0) {}

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  bool congruent_with(const Model& model) const noexcept {
    return family_ == model.family() && dim_ == model.input_dim() &&
           values_.size() == model.parameters().size();
  }

  void zero();
  /// this += scale * other
  void add_scaled(const GradientBuffer& other, double scale);
  void scale(double factor);

 private:
  ModelFamily family_;
  std::size_t dim_;
  std::vector<double> values_;
};

/// theta <- theta - step * (grads + 2 * lambda * theta), with biases exempt
/// from the lambda term. Throws DivergenceError if any parameter becomes
/// non-finite (the model is left unchanged in that case).
void apply_update(Model& model, const GradientBuffer& grads, double step, double lambda);

}  // namespace closek
