#pragma once

#include <optional>
#include <vector>

#include "patrol/errors.hpp"

namespace patrol {

// Event process rates at one vertex: Poisson arrivals with rate `lambda`,
// exponentially distributed activity with rate `mu` (both per unit time).
struct VertexParams {
  double lambda = 0.0;
  double mu = 0.0;
};

// Relative tolerance applied wherever a "T is a multiple of tau" test occurs;
// periods derived from tour lengths and speeds never hit multiples exactly.
inline constexpr double kMultipleRelTol = 1e-9;

// The integer nearest q when q is within kMultipleRelTol of an integer >= 1,
// nullopt otherwise.
std::optional<long long> nearly_integer(double q);

// The number of whole visit periods that fit strictly below the critical
// time: n*tau < T <= (n+1)*tau.  When T is an (approximate) integer multiple
// of tau the multiple branch T/tau - 1 wins.
long long n_of(double T, double tau);

// Probability that a true event (active for at least T) is confirmed by a
// single robot visiting its vertex every tau time units:
//   e^{-mu[(n+2)tau - T]} (e^{mu tau} - 1) / (mu tau).
// Evaluated in log space when mu*tau > 30 to avoid overflow.
double confirm_prob_single(double tau, double mu, double T);

// Arrival-weighted confirmation probability over a set of vertices with
// per-vertex visit periods:  sum_v P(confirm|v) lambda_v / sum_v lambda_v.
double confirm_prob_tour(const std::vector<VertexParams>& params,
                         const std::vector<double>& taus, double T);

// Two robots on a common tour of period tau, the second t_lag behind the
// first.  Piecewise exponential in t_lag; at branch boundaries the maximum of
// the adjacent branch values is returned, which is also the pointwise value
// of the underlying visit-grid model.
double confirm_prob_two_robots(double tau, double mu, double T, double t_lag);

// Lags at which the two-robot probability can attain its maximum:
// {tau/2, T - n*tau, (n+1)tau - T} clipped to (0, tau), plus (n+2)tau - T
// wrapped modulo tau when it lands inside; duplicates removed.
std::vector<double> optimal_lag_candidates(double tau, double T);

struct PolicyCandidate {
  double tau = 0.0;
  std::optional<double> lag;
  double probability = 0.0;
};

// Outcome of a policy search.  `candidate_log` records every configuration
// that was evaluated.
struct PolicyResult {
  double tau = 0.0;
  double speed = 0.0;
  std::optional<double> lag;
  double probability = 0.0;
  std::vector<PolicyCandidate> candidate_log;
};

// Single robot: compare the fastest tour (tau_min = tsp_length / v_max)
// against slowing down to the smallest period >= tau_min that divides T.
PolicyResult optimize_single_robot(double tsp_length, double v_max, double mu, double T);

// Two robots on one tour: best lag candidate at tau_min versus equal spacing
// at the smallest period >= tau_min that divides 2T.
PolicyResult optimize_two_robots(double tsp_length, double v_max, double mu, double T);

// Spacing rule for m >= 2 robots sharing one tour.  Returns the (possibly
// adjusted) period and the m successive time gaps between consecutive robots;
// the gaps close the cycle, summing to the period.
struct SpacingResult {
  double tau = 0.0;
  std::vector<double> lags;
};

SpacingResult m_robot_spacing(double tau, double T, int m);

}  // namespace patrol
