#include "patrol/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace patrol {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw ValidationError(std::string(name) + " must be positive and finite");
}

// Closed forms are strictly inside (0, 1); keep results there even when the
// exponent under- or overflows double range.
double clamp_prob(double p) {
  p = std::max(p, std::numeric_limits<double>::denorm_min());
  return std::min(p, std::nextafter(1.0, 0.0));
}

constexpr double kLogSpaceCutoff = 30.0;  // switch to log space past e^30

}  // namespace

std::optional<long long> nearly_integer(double q) {
  const double r = std::round(q);
  if (r >= 1.0 && std::abs(q - r) <= kMultipleRelTol * std::max(1.0, std::abs(q)))
    return static_cast<long long>(r);
  return std::nullopt;
}

long long n_of(double T, double tau) {
  require_positive(T, "T");
  require_positive(tau, "tau");
  const double q = T / tau;
  if (auto k = nearly_integer(q)) return *k - 1;
  return static_cast<long long>(std::floor(q));
}

double confirm_prob_single(double tau, double mu, double T) {
  require_positive(tau, "tau");
  require_positive(mu, "mu");
  require_positive(T, "T");
  const long long n = n_of(T, tau);
  const double x = mu * tau;
  // decay over the stretch between becoming true and the confirming visit
  const double a = mu * (static_cast<double>(n + 2) * tau - T);
  double p;
  if (x > kLogSpaceCutoff) {
    p = std::exp(x - a + std::log1p(-std::exp(-x)) - std::log(x));
  } else {
    p = std::exp(-a) * std::expm1(x) / x;
  }
  return clamp_prob(p);
}

double confirm_prob_tour(const std::vector<VertexParams>& params,
                         const std::vector<double>& taus, double T) {
  if (params.empty()) throw ValidationError("params must not be empty");
  if (params.size() != taus.size())
    throw ValidationError("params and taus must have the same length");
  require_positive(T, "T");
  double weight = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& vp = params[i];
    if (!(vp.lambda >= 0.0) || !std::isfinite(vp.lambda))
      throw ValidationError("lambda must be non-negative and finite");
    if (vp.lambda == 0.0) continue;
    acc += vp.lambda * confirm_prob_single(taus[i], vp.mu, T);
    weight += vp.lambda;
  }
  if (!(weight > 0.0)) throw ValidationError("total arrival rate must be positive");
  return acc / weight;
}

double confirm_prob_two_robots(double tau, double mu, double T, double t_lag) {
  require_positive(tau, "tau");
  require_positive(mu, "mu");
  require_positive(T, "T");
  if (!(t_lag > 0.0) || !(t_lag < tau))
    throw ValidationError("t_lag must lie strictly inside (0, tau)");

  const long long n = n_of(T, tau);
  const double edge_a = T - static_cast<double>(n) * tau;        // in (0, tau]
  const double edge_b = static_cast<double>(n + 1) * tau - T;    // in [0, tau)
  const double lo = std::min(edge_a, edge_b);
  const double hi = std::max(edge_a, edge_b);
  const bool narrow_gap = edge_a <= edge_b;  // selects the middle-branch form
  const double x = mu * tau;
  const bool logspace = x > kLogSpaceCutoff;

  // Branch values; each expression stays <= 1 on the domain it is applied to.
  auto low_branch = [&](double lag) {
    if (logspace)
      return std::exp(mu * (lag - edge_b) + std::log1p(-std::exp(-x)) - std::log(x));
    return std::exp(mu * (lag - edge_b)) * -std::expm1(-x) / x;
  };
  auto high_branch = [&](double lag) {
    if (logspace)
      return std::exp(mu * (tau - edge_b - lag) + std::log1p(-std::exp(-x)) - std::log(x));
    return std::exp(-mu * (edge_b + lag)) * std::expm1(x) / x;
  };
  auto mid_branch = [&](double lag) {
    if (narrow_gap) {
      // e^{-mu B} (e^{mu lag} + e^{mu(tau-lag)} - 2) / (mu tau)
      if (logspace) {
        const double big = mu * std::max(lag, tau - lag);
        const double small = mu * std::min(lag, tau - lag);
        return std::exp(big - mu * edge_b - std::log(x) +
                        std::log1p(std::exp(small - big) - 2.0 * std::exp(-big)));
      }
      return std::exp(-mu * edge_b) * (std::expm1(mu * lag) + std::expm1(mu * (tau - lag))) / x;
    }
    // e^{-mu B} (2 - e^{-mu lag} - e^{-mu(tau-lag)}) / (mu tau)
    return std::exp(-mu * edge_b) *
           (-std::expm1(-mu * lag) - std::expm1(-mu * (tau - lag))) / x;
  };

  const double tol = 1e-9 * tau;
  double best = -1.0;
  if (t_lag <= lo + tol) best = std::max(best, low_branch(t_lag));
  if (t_lag >= lo - tol && t_lag <= hi + tol) best = std::max(best, mid_branch(t_lag));
  if (t_lag >= hi - tol) best = std::max(best, high_branch(t_lag));
  return clamp_prob(best);
}

std::vector<double> optimal_lag_candidates(double tau, double T) {
  require_positive(tau, "tau");
  require_positive(T, "T");
  const long long n = n_of(T, tau);
  const double edge_a = T - static_cast<double>(n) * tau;
  const double edge_b = static_cast<double>(n + 1) * tau - T;
  double wrapped = std::fmod(static_cast<double>(n + 2) * tau - T, tau);
  if (wrapped < 0.0) wrapped += tau;

  const double tol = 1e-9 * tau;
  std::vector<double> out;
  for (double c : {tau / 2.0, edge_a, edge_b, wrapped}) {
    if (!(c > tol) || !(c < tau - tol)) continue;
    bool dup = false;
    for (double o : out) dup = dup || std::abs(c - o) <= tol;
    if (!dup) out.push_back(c);
  }
  return out;
}

PolicyResult optimize_single_robot(double tsp_length, double v_max, double mu, double T) {
  require_positive(tsp_length, "tsp_length");
  require_positive(v_max, "v_max");
  require_positive(mu, "mu");
  require_positive(T, "T");

  const double tau_min = tsp_length / v_max;
  std::vector<double> taus{tau_min};
  const double q = T / tau_min;
  const long long k = nearly_integer(q).value_or(static_cast<long long>(std::floor(q)));
  if (k >= 1) {
    const double tau_peak = T / static_cast<double>(k);
    if (std::abs(tau_peak - tau_min) > 1e-12 * tau_min) taus.push_back(tau_peak);
  }

  PolicyResult result;
  for (double tau : taus) {
    const double p = confirm_prob_single(tau, mu, T);
    result.candidate_log.push_back({tau, std::nullopt, p});
    if (result.candidate_log.size() == 1 || p > result.probability) {
      result.tau = tau;
      result.probability = p;
    }
  }
  result.speed = tsp_length / result.tau;
  return result;
}

PolicyResult optimize_two_robots(double tsp_length, double v_max, double mu, double T) {
  require_positive(tsp_length, "tsp_length");
  require_positive(v_max, "v_max");
  require_positive(mu, "mu");
  require_positive(T, "T");

  const double tau_min = tsp_length / v_max;
  PolicyResult result;
  for (double lag : optimal_lag_candidates(tau_min, T)) {
    const double p = confirm_prob_two_robots(tau_min, mu, T, lag);
    result.candidate_log.push_back({tau_min, lag, p});
    if (result.candidate_log.size() == 1 || p > result.probability) {
      result.tau = tau_min;
      result.lag = lag;
      result.probability = p;
    }
  }

  // Slow down until the period divides 2T, then space the robots evenly.
  const double q = 2.0 * T / tau_min;
  const long long k = nearly_integer(q).value_or(static_cast<long long>(std::floor(q)));
  if (k >= 1) {
    const double tau_n = 2.0 * T / static_cast<double>(k);
    const double p = confirm_prob_two_robots(tau_n, mu, T, tau_n / 2.0);
    result.candidate_log.push_back({tau_n, tau_n / 2.0, p});
    if (result.candidate_log.size() == 1 || p > result.probability) {
      result.tau = tau_n;
      result.lag = tau_n / 2.0;
      result.probability = p;
    }
  }

  result.speed = tsp_length / result.tau;
  return result;
}

SpacingResult m_robot_spacing(double tau, double T, int m) {
  require_positive(tau, "tau");
  require_positive(T, "T");
  if (m < 2) throw ValidationError("m must be at least 2");

  const double per_robot = tau / static_cast<double>(m);
  if (nearly_integer(per_robot / T))
    return {tau, std::vector<double>(m, per_robot)};

  if (tau < static_cast<double>(m) * T) {
    const double q = static_cast<double>(m) * T / tau;
    const long long k = nearly_integer(q).value_or(static_cast<long long>(std::floor(q)));
    const double tau2 = static_cast<double>(m) * T / static_cast<double>(k);
    return {tau2, std::vector<double>(m, tau2 / static_cast<double>(m))};
  }

  // tau > m T: follow-the-leader gaps of exactly T, remainder closes the cycle
  std::vector<double> lags(m - 1, T);
  lags.push_back(tau - static_cast<double>(m - 1) * T);
  return {tau, std::move(lags)};
}

}  // namespace patrol
