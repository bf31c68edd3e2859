#ifndef ARQG_QUEUE_CORE_HPP
#define ARQG_QUEUE_CORE_HPP

#include <stdexcept>

namespace arqg {

// Violation of a parameter precondition (rates, thresholds, costs).
class ParamDomainError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operation called outside the utilization regime where it is defined.
class RegimeError : public std::domain_error {
  using std::domain_error::domain_error;
};

// M/D/1 parameterization. Service time is deterministic 1/service_rate.
// Utilization is always derived, never stored.
struct QueueParams {
  double arrival_rate;  // lambda
  double service_rate;  // mu

  QueueParams(double lambda, double mu);

  double utilization() const { return arrival_rate / service_rate; }
  double service_time() const { return 1.0 / service_rate; }
};

// Throws ParamDomainError unless value is a probability in [0, 1].
void require_unit_interval(double value, const char* name);

// Expected waiting time of the threshold customer when reserving,
// given that everyone follows the threshold tau. Strictly decreasing
// in tau, zero at tau = 1.
double wait_ar(const QueueParams& params, double tau);

// Expected waiting time of the threshold customer when not reserving.
// At tau = 1 this is the single-class M/D/1 Pollaczek-Khinchine value
// lambda / (2 mu (mu - lambda)).
double wait_noar(const QueueParams& params, double tau);

// Believed waiting time of a customer with potential priority p who
// reserves while everyone else is assumed to follow the threshold
// `belief`: wait_ar at max(p, belief).
double believed_wait_ar(const QueueParams& params, double belief, double p);

}  // namespace arqg

#endif
