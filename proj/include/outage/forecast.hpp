#pragma once

#include "outage/network.hpp"

namespace outage {

// Day-ahead coefficient of variation of an aggregate with mean load W, as a
// fraction: sqrt(3562 / W + 41.9) percent. Throws InvalidInput for W <= 0.
double kappa_of_load(double mean_load);

struct ForecastModel {
  enum class Mode { fixed_kappa, scaling_law };
  Mode mode = Mode::fixed_kappa;
  double kappa = 0.02;  // used in fixed_kappa mode

  static ForecastModel fixed(double kappa) { return {Mode::fixed_kappa, kappa}; }
  static ForecastModel scaling_law() { return {Mode::scaling_law, 0.0}; }

  // Standard deviation of the forecast error for a load with this mean.
  double sigma(double mean) const;
};

// Copy of the tree with variances set from the model.
Tree apply_forecast_model(const Tree& tree, const ForecastModel& model);

}  // namespace outage
