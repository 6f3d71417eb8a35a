#include "reldelay/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include "reldelay/errors.hpp"
#include "reldelay/numeric.hpp"

namespace reldelay {

namespace {

void require_link_probability(double g)
{
    if (!(g > 0.0 && g <= 1.0)) {
        throw ParameterError("link probability g must lie in (0, 1], got " + std::to_string(g));
    }
}

void require_occupation(double p)
{
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("occupation probability must lie in [0, 1]");
}

std::string describe_divergence(double p)
{
    std::ostringstream os;
    os.precision(6);
    os << "bound series diverge for p = " << p << " (p_bar_n decays like n^-" << size_decay_exponent(p)
       << ", exponent <= 2)";
    return os.str();
}

// Binomial(n - 1, 1/2) probabilities b[a] = C(n-1, a) 2^-(n-1), a = 0 .. n-1.
// While 2^-(n-1) is a normal double the row starts from that exact end value;
// beyond that it is anchored at the mode. Either way the lower half is built
// by the ratio recurrence and mirrored, so the row is exactly symmetric and
// far tails underflow to zero.
std::vector<double> half_binomial_row(std::size_t n)
{
    const std::size_t m = n - 1;
    std::vector<double> b(n, 0.0);
    const std::size_t mode = m / 2;
    if (m <= 1000) {
        b[0] = std::ldexp(1.0, -static_cast<int>(m));
        for (std::size_t a = 0; a < mode; ++a) {
            b[a + 1] = b[a] * static_cast<double>(m - a) / static_cast<double>(a + 1);
        }
    } else {
        const double md = static_cast<double>(m);
        const double log_mode = std::lgamma(md + 1.0) - std::lgamma(static_cast<double>(mode) + 1.0) -
                                std::lgamma(static_cast<double>(m - mode) + 1.0) - md * std::numbers::ln2;
        b[mode] = std::exp(log_mode);
        for (std::size_t a = mode; a > 0; --a) {
            b[a - 1] = b[a] * static_cast<double>(a) / static_cast<double>(m - a + 1);
        }
    }
    for (std::size_t a = 0; a <= mode; ++a) b[m - a] = b[a];
    return b;
}

// sum_{k=1}^{n-1} k sum_{a=k}^{n-1} b[a] k^-(a-k), truncating each inner sum
// once the remaining terms cannot matter at double precision.
double expected_diameter_from_row(const std::vector<double>& b)
{
    const std::size_t n = b.size();
    if (n < 2) return 0.0;
    const double b_max = *std::max_element(b.begin(), b.end());

    CompensatedSum total;
    {
        CompensatedSum s1;  // k = 1: the factor is identically one
        for (std::size_t a = 1; a < n; ++a) s1.add(b[a]);
        total.add(s1.value());
    }
    for (std::size_t k = 2; k < n; ++k) {
        const double kd = static_cast<double>(k);
        CompensatedSum s;
        double factor = 1.0;
        for (std::size_t a = k; a < n; ++a) {
            s.add(b[a] * factor);
            factor /= kd;
            // Remaining terms are bounded by a geometric series in 1/k.
            if (2.0 * kd * b_max * factor < 1e-18 * total.value()) break;
        }
        total.add(kd * s.value());
    }
    return total.value();
}

SeriesResult series_header(double p)
{
    SeriesResult r;
    r.decay_exponent = size_decay_exponent(p);
    r.converged = series_converges(p);
    return r;
}

}  // namespace

double ModelParams::q() const
{
    return std::sqrt(g);
}

void ModelParams::validate() const
{
    if (!std::isfinite(lambda) || lambda < 0.0) throw ParameterError("lambda must be finite and non-negative");
    if (!(g >= 0.0 && g <= 1.0)) throw ParameterError("g must lie in [0, 1]");
    if (!(r0 > 0.0) || !std::isfinite(r0)) throw ParameterError("r0 must be positive");
    if (!(lambda_L > 0.0) || !std::isfinite(lambda_L)) throw ParameterError("lambda_L must be positive");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ParameterError("kappa must be positive");
    if (lambda_I && !(*lambda_I > 0.0)) throw ParameterError("lambda_I must be positive when given");
}

void SeriesControl::validate() const
{
    if (n_max < 2) throw ParameterError("series truncation n_max must be at least 2");
    if (!(tail_tol > 0.0)) throw ParameterError("series tail tolerance must be positive");
}

double occupation_probability(const ModelParams& params)
{
    params.validate();
    const double mean = params.lambda * std::sqrt(params.g) * std::numbers::pi * params.r0 * params.r0 / 4.0;
    return -std::expm1(-mean);
}

double size_decay_exponent(double p)
{
    require_occupation(p);
    if (p == 0.0) return std::numeric_limits<double>::infinity();
    return (p + 1.0) / (2.0 * p);
}

bool series_converges(double p)
{
    return size_decay_exponent(p) > 2.0;
}

double size_prob_upper(std::size_t n, double p)
{
    if (n < 2) throw ParameterError("size_prob_upper: n must be at least 2");
    require_occupation(p);
    double value = p;
    for (std::size_t k = 3; k <= n && value > 0.0; ++k) {
        const double kp2 = 2.0 * static_cast<double>(k) * p;
        value *= kp2 / (kp2 + p + 1.0);
    }
    return value;
}

std::vector<double> size_prob_upper_table(double p, std::size_t n_max)
{
    require_occupation(p);
    std::vector<double> table;
    if (n_max < 2) return table;
    table.reserve(n_max - 1);
    double value = p;
    table.push_back(value);
    for (std::size_t k = 3; k <= n_max; ++k) {
        const double kp2 = 2.0 * static_cast<double>(k) * p;
        value *= kp2 / (kp2 + p + 1.0);
        table.push_back(value);
    }
    return table;
}

SeriesResult expected_size_upper(double p, const SeriesControl& ctrl)
{
    ctrl.validate();
    SeriesResult r = series_header(p);
    if (!r.converged && ctrl.policy == DivergencePolicy::Error) throw DivergentSeriesError(describe_divergence(p));

    CompensatedSum sum;
    sum.add(1.0);  // n = 1 term, p_bar_1 := 1
    double term = 1.0;
    double p_bar = p;
    r.terms = 1;
    for (std::size_t n = 2; n <= ctrl.n_max; ++n) {
        if (n >= 3) {
            const double kp2 = 2.0 * static_cast<double>(n) * p;
            p_bar *= kp2 / (kp2 + p + 1.0);
        }
        term = static_cast<double>(n) * p_bar;
        r.terms = n;
        if (term == 0.0) break;
        sum.add(term);
    }
    r.value = sum.value();
    r.tail_met = std::fabs(term) < ctrl.tail_tol * r.value;
    return r;
}

double diameter_prob_upper(std::size_t n, std::size_t k)
{
    if (n < 2) throw ParameterError("diameter_prob_upper: n must be at least 2");
    if (k < 1 || k > n - 1) throw ParameterError("diameter_prob_upper: k must lie in [1, n-1]");
    if (k == n - 1) return std::ldexp(1.0, -static_cast<int>(n - 1));  // single term a = n - 1
    const auto b = half_binomial_row(n);
    const double kd = static_cast<double>(k);
    CompensatedSum s;
    double factor = 1.0;
    for (std::size_t a = k; a < n; ++a) {
        s.add(b[a] * factor);
        factor /= kd;
        if (factor == 0.0) break;
    }
    return s.value();
}

double expected_diameter_upper(std::size_t n)
{
    if (n < 1) throw ParameterError("expected_diameter_upper: n must be at least 1");
    if (n == 1) return 0.0;
    return expected_diameter_from_row(half_binomial_row(n));
}

std::vector<double> expected_diameter_upper_table(std::size_t n_max)
{
    std::vector<double> table(n_max + 1, 0.0);
    for (std::size_t n = 2; n <= n_max; ++n) table[n] = expected_diameter_upper(n);
    return table;
}

namespace {

// E_D(n) does not depend on p, so one shared table serves every sweep.
std::vector<double> shared_diameter_table(std::size_t n_max)
{
    static std::mutex lock;
    static std::vector<double> table{0.0, 0.0};
    std::lock_guard<std::mutex> guard(lock);
    for (std::size_t n = table.size(); n <= n_max; ++n) table.push_back(expected_diameter_upper(n));
    return {table.begin(), table.begin() + static_cast<std::ptrdiff_t>(n_max + 1)};
}

}  // namespace

SeriesResult expected_global_diameter_upper(double p, const SeriesControl& ctrl)
{
    ctrl.validate();
    SeriesResult r = series_header(p);
    if (!r.converged && ctrl.policy == DivergencePolicy::Error) throw DivergentSeriesError(describe_divergence(p));

    const auto diameters = shared_diameter_table(ctrl.n_max);
    CompensatedSum sum;
    double p_bar = p;
    double term = 0.0;
    for (std::size_t n = 2; n <= ctrl.n_max; ++n) {
        if (n >= 3) {
            const double kp2 = 2.0 * static_cast<double>(n) * p;
            p_bar *= kp2 / (kp2 + p + 1.0);
        }
        r.terms = n;
        if (p_bar == 0.0) {
            term = 0.0;
            break;
        }
        term = p_bar * diameters[n];
        sum.add(term);
    }
    r.value = sum.value();
    r.tail_met = std::fabs(term) <= ctrl.tail_tol * r.value;
    return r;
}

double gamma_lower_from_diameter(double expected_diameter, double r0)
{
    if (!(r0 > 0.0)) throw ParameterError("r0 must be positive");
    if (!(expected_diameter >= 0.0)) throw ParameterError("expected diameter must be non-negative");
    return 1.0 / ((expected_diameter + 1.0) * r0);
}

double gamma_lower(const ModelParams& params, const SeriesControl& ctrl)
{
    const double p = occupation_probability(params);
    return gamma_lower_from_diameter(expected_global_diameter_upper(p, ctrl).value, params.r0);
}

double link_delay_pmf(long z, double g)
{
    require_link_probability(g);
    if (z < 0) throw ParameterError("link delay must be non-negative");
    return std::pow(1.0 - g, static_cast<double>(z)) * g;
}

double expected_link_delay(double g)
{
    require_link_probability(g);
    return 1.0 / g - 1.0;
}

double gamma_upper(const ModelParams& params)
{
    params.validate();
    return params.kappa * expected_link_delay(params.g);
}

double wang_size_approx(double lambda)
{
    if (!std::isfinite(lambda) || lambda < 0.0) throw ParameterError("lambda must be finite and non-negative");
    if (lambda >= kWangPole) throw DomainError("cluster-size approximation undefined for lambda >= 2.4886");
    return kWangSlope * lambda / (kWangPole - lambda);
}

double wang_gamma_upper(const ModelParams& params)
{
    params.validate();
    if (params.lambda < params.lambda_L) throw DomainError("baseline upper bound needs lambda >= lambda_L");
    return params.kappa * std::sqrt(params.lambda / params.lambda_L) * expected_link_delay(params.g);
}

BoundsReport evaluate_bounds(const ModelParams& params, const SeriesControl& ctrl)
{
    params.validate();
    ctrl.validate();

    BoundsReport rep;
    rep.params = params;
    rep.control = ctrl;
    rep.p = occupation_probability(params);
    rep.p_bar = size_prob_upper_table(rep.p, ctrl.n_max);
    rep.expected_size_upper = expected_size_upper(rep.p, ctrl);
    rep.expected_diameter_upper = expected_global_diameter_upper(rep.p, ctrl);
    rep.converged = rep.expected_size_upper.converged && rep.expected_diameter_upper.converged;
    rep.gamma_lower = gamma_lower_from_diameter(rep.expected_diameter_upper.value, params.r0);
    rep.expected_link_delay = expected_link_delay(params.g);
    rep.gamma_upper = gamma_upper(params);
    if (params.lambda < kWangPole) rep.wang_size_approx = wang_size_approx(params.lambda);
    if (params.lambda >= params.lambda_L) rep.wang_gamma_upper = wang_gamma_upper(params);

    if (!rep.converged) {
        rep.notes.push_back(describe_divergence(rep.p) + "; values are partial sums to n = " +
                            std::to_string(ctrl.n_max));
    }
    if (params.lambda <= params.lambda_L) {
        rep.notes.push_back("lambda <= lambda_L: outside the regime where the bounds apply");
    }
    if (params.lambda_I && params.lambda >= *params.lambda_I) {
        rep.notes.push_back("lambda >= lambda_I: outside the regime where the bounds apply");
    }
    return rep;
}

}  // namespace reldelay
