#include "skycell/ml.hpp"

#include "skycell/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace skycell::ml {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

} // namespace

LossAndGradient logistic_objective(std::span<const LabeledSample> samples,
                                   const std::array<double, kFeatureCount>& w, double b,
                                   double l2) {
  LossAndGradient out;
  for (const auto& s : samples) {
    const double y = s.label == Label::Drone ? 1.0 : 0.0;
    double z = b;
    for (std::size_t k = 0; k < kFeatureCount; ++k) z += w[k] * s.features[k];
    out.loss += softplus(z) - y * z;
    const double r = sigmoid(z) - y;
    for (std::size_t k = 0; k < kFeatureCount; ++k) out.grad_w[k] += r * s.features[k];
    out.grad_b += r;
  }
  const double n = static_cast<double>(samples.size());
  out.loss /= n;
  out.grad_b /= n;
  double w2 = 0.0;
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    out.grad_w[k] = out.grad_w[k] / n + l2 * w[k];
    w2 += w[k] * w[k];
  }
  out.loss += 0.5 * l2 * w2;
  return out;
}

LogisticModel train_logistic(const Dataset& train, const LogisticConfig& config,
                             TrainingTrace* trace) {
  if (train.empty()) throw Error(ErrorKind::InvalidArgument, "training set is empty");
  if (!train.standardization)
    throw Error(ErrorKind::InvalidArgument, "logistic training requires a standardized dataset");
  if (!train.has_both_labels())
    throw Error(ErrorKind::Degenerate, "training set holds a single class; both labels are required");
  if (!(config.learning_rate > 0.0) || config.max_iters < 0 || !(config.tolerance >= 0.0) ||
      !(config.l2 >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "invalid logistic configuration");

  LogisticModel model;
  model.config = config;
  model.standardization = train.standardization;

  TrainingTrace local;
  TrainingTrace& t = trace ? *trace : local;
  t = TrainingTrace{};

  auto check = [&](double loss) {
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "logistic training diverged (non-finite loss) with learning_rate=" << config.learning_rate;
      throw Error(ErrorKind::Diverged, msg.str());
    }
  };

  for (int it = 0; it < config.max_iters; ++it) {
    const auto og = logistic_objective(train.samples, model.weights, model.bias, config.l2);
    check(og.loss);
    t.loss.push_back(og.loss);
    double gmax = std::abs(og.grad_b);
    for (double g : og.grad_w) gmax = std::max(gmax, std::abs(g));
    if (gmax < config.tolerance) {
      t.converged = true;
      return model;
    }
    for (std::size_t k = 0; k < kFeatureCount; ++k) model.weights[k] -= config.learning_rate * og.grad_w[k];
    model.bias -= config.learning_rate * og.grad_b;
    ++t.iterations;
  }
  const auto final_loss = logistic_objective(train.samples, model.weights, model.bias, config.l2);
  check(final_loss.loss);
  t.loss.push_back(final_loss.loss);
  return model;
}

double predict_proba(const LogisticModel& model, const FeatureVector& raw) {
  if (!std::isfinite(raw.rssi_dbm) || !std::isfinite(raw.rsrp_std_db))
    throw Error(ErrorKind::InvalidArgument, "features must be finite");
  const FeatureVector z = model.standardization ? model.standardization->apply(raw) : raw;
  double s = model.bias;
  for (std::size_t k = 0; k < kFeatureCount; ++k) s += model.weights[k] * z[k];
  return sigmoid(s);
}

} // namespace skycell::ml
