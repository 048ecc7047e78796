#include "outage/forecast.hpp"

#include <cmath>

#include "outage/error.hpp"

namespace outage {

double kappa_of_load(double mean_load) {
  if (!(mean_load > 0.0)) throw InvalidInput("forecast scaling law needs a positive mean load");
  return std::sqrt(3562.0 / mean_load + 41.9) / 100.0;
}

double ForecastModel::sigma(double mean) const {
  if (mean == 0.0) return 0.0;
  if (mode == Mode::fixed_kappa) return kappa * std::abs(mean);
  return kappa_of_load(std::abs(mean)) * std::abs(mean);
}

Tree apply_forecast_model(const Tree& tree, const ForecastModel& model) {
  if (model.mode == ForecastModel::Mode::fixed_kappa && model.kappa < 0.0)
    throw InvalidInput("kappa must be non-negative");
  std::vector<Load> loads(tree.vertex_count());
  for (std::size_t v = 1; v < loads.size(); ++v) {
    const double m = tree.load(static_cast<int>(v)).mean;
    const double s = model.sigma(m);
    loads[v] = {m, s * s};
  }
  return tree.with_loads(std::move(loads));
}

}  // namespace outage
