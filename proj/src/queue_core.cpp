#include "queue_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace arqg {

QueueParams::QueueParams(double lambda, double mu) : arrival_rate(lambda), service_rate(mu) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParamDomainError("arrival rate must be positive and finite");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParamDomainError("service rate must be positive and finite");
  }
  if (!(lambda < mu)) {
    throw ParamDomainError("arrival rate must be < service rate");
  }
}

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ParamDomainError(std::string(name) + " must lie in [0, 1]");
  }
}

double wait_ar(const QueueParams& params, double tau) {
  require_unit_interval(tau, "tau");
  // Evaluated via y = mu - lambda (1 - tau), which stays well conditioned
  // as tau -> 1. The literal two-term form is kept as a test oracle.
  if (tau == 1.0) return 0.0;  // exact: the top-priority customer never waits
  const double mu = params.service_rate;
  const double y = mu - params.arrival_rate * (1.0 - tau);
  return (y + mu) / (2.0 * y * y) - 1.0 / mu;
}

double wait_noar(const QueueParams& params, double tau) {
  require_unit_interval(tau, "tau");
  const double mu = params.service_rate;
  const double lambda = params.arrival_rate;
  const double y = mu - lambda * (1.0 - tau);
  return (mu - 0.5 * lambda) / (y * (mu - lambda)) - 1.0 / mu;
}

double believed_wait_ar(const QueueParams& params, double belief, double p) {
  require_unit_interval(belief, "belief");
  require_unit_interval(p, "p");
  return wait_ar(params, std::max(p, belief));
}

}  // namespace arqg
