#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace reldelay {

inline constexpr double kDefaultKappa = 1.7;
inline constexpr double kDefaultLambdaL = 1.44;

/// Wang-style cluster-size approximation has a pole at this density.
inline constexpr double kWangPole = 2.4886;
inline constexpr double kWangSlope = 1.2841;

struct ModelParams {
    double lambda = 0.0;  // node density
    double g = 0.25;      // link probability; activation probability is sqrt(g)
    double r0 = 1.0;      // communication range and lattice edge length
    double lambda_L = kDefaultLambdaL;
    std::optional<double> lambda_I;
    double kappa = kDefaultKappa;

    double q() const;
    void validate() const;
};

enum class DivergencePolicy { Error, WarnAndTruncate };

struct SeriesControl {
    std::size_t n_max = 840;
    double tail_tol = 1e-9;
    DivergencePolicy policy = DivergencePolicy::WarnAndTruncate;

    void validate() const;
};

/// Partial sum of one of the infinite bound series.
struct SeriesResult {
    double value = 0.0;
    std::size_t terms = 0;       // last index summed
    bool converged = false;      // the infinite series converges (closed-form exponent test)
    bool tail_met = false;       // last term fell below tail_tol * partial sum
    double decay_exponent = 0.0; // p_bar_n ~ n^-exponent
};

struct BoundsReport {
    ModelParams params;
    SeriesControl control;
    double p = 0.0;
    std::vector<double> p_bar;  // p_bar[n - 2] for n = 2 .. n_max
    SeriesResult expected_size_upper;
    SeriesResult expected_diameter_upper;
    double gamma_lower = 0.0;
    double expected_link_delay = 0.0;
    double gamma_upper = 0.0;
    std::optional<double> wang_size_approx;
    std::optional<double> wang_gamma_upper;
    bool converged = false;
    std::vector<std::string> notes;
};

/// p = 1 - exp(-lambda sqrt(g) pi r0^2 / 4).
double occupation_probability(const ModelParams& params);

/// Exponent a with p_bar_n ~ n^-a, a = (p + 1) / (2p). Infinite for p = 0.
double size_decay_exponent(double p);

/// Both bound series converge iff the decay exponent exceeds 2, i.e. p < 1/3.
bool series_converges(double p);

/// p_bar_n = p * prod_{k=3}^{n} 2kp / (2kp + p + 1).
double size_prob_upper(std::size_t n, double p);

/// p_bar_2 .. p_bar_{n_max} via the product recurrence.
std::vector<double> size_prob_upper_table(double p, std::size_t n_max);

/// sum_{n=1}^{n_max} n p_bar_n with p_bar_1 = 1.
SeriesResult expected_size_upper(double p, const SeriesControl& ctrl);

/// sum_{a=k}^{n-1} C(n-1, a) 2^-(n-1) k^-(a-k).
double diameter_prob_upper(std::size_t n, std::size_t k);

/// sum_{k=1}^{n-1} k * diameter_prob_upper(n, k); zero for n = 1.
double expected_diameter_upper(std::size_t n);

/// expected_diameter_upper(n) for n = 0 .. n_max (entries 0 and 1 are zero).
std::vector<double> expected_diameter_upper_table(std::size_t n_max);

/// sum_{n=2}^{n_max} p_bar_n * expected_diameter_upper(n).
SeriesResult expected_global_diameter_upper(double p, const SeriesControl& ctrl);

/// 1 / ((E[D] + 1) r0).
double gamma_lower_from_diameter(double expected_diameter, double r0);
double gamma_lower(const ModelParams& params, const SeriesControl& ctrl);

/// Pr{T(e) = z} = (1 - g)^z g.
double link_delay_pmf(long z, double g);

/// E[T(e)] = 1/g - 1.
double expected_link_delay(double g);

/// kappa * E[T(e)].
double gamma_upper(const ModelParams& params);

/// 1.2841 lambda / (2.4886 - lambda).
double wang_size_approx(double lambda);

/// kappa * sqrt(lambda / lambda_L) * E[T(e)].
double wang_gamma_upper(const ModelParams& params);

/// Everything above for one parameter set.
BoundsReport evaluate_bounds(const ModelParams& params, const SeriesControl& ctrl);

}  // namespace reldelay
