#pragma once
// Least-squares extraction of decay rates and oscillation amplitudes.

#include <optional>
#include <string>
#include <vector>

#include "twinwell/core_types.hpp"

namespace twinwell {

enum class FitModel {
  Exponential,                 // y = A exp(-rate t)
  Sinusoid,                    // y = A cos(w t + phi)
  DampedSinusoidPlusSinusoid,  // y = A cos(w t + phi) + exp(-rate t)(B cos w t + C sin w t)
};

struct FitOptions {
  std::optional<double> frequency;  // fixed w; estimated from the data if absent
  std::optional<double> rate;       // fixed damping for the damped model
};

struct FitResult {
  FitModel model = FitModel::Exponential;
  double amplitude = 0.0;
  double phase = 0.0;
  double frequency = 0.0;
  double rate = 0.0;
  double damped_amplitude = 0.0;
  double residual_rms = 0.0;
  double data_rms = 0.0;
};

class FitError : public RuntimeError {
 public:
  FitError(const std::string& what, double residual_rms)
      : RuntimeError(what), residual_rms_(residual_rms) {}
  double residual_rms() const { return residual_rms_; }

 private:
  double residual_rms_;
};

FitResult fit_decay_and_amplitude(const std::vector<double>& t, const std::vector<double>& y,
                                  FitModel model, const FitOptions& opt = {});

}  // namespace twinwell
