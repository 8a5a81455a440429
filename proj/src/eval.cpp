#include "qcorr/eval.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "qcorr/data.hpp"

namespace qcorr::eval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Regularized lower incomplete gamma P(a, x) by series expansion.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int k = 1; k < 10000; ++k) {
        const double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

}  // namespace

void Distribution::validate(double tol) const {
    double sum = 0.0;
    for (double v : p) {
        if (v < 0.0) throw std::invalid_argument("Distribution: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("Distribution: not normalized");
}

StochasticKl stochastic_kl(const std::function<double(const std::vector<int>&)>& loglik,
                           const data::Dataset& dataset) {
    if (dataset.sequences.empty()) throw std::invalid_argument("stochastic_kl: empty dataset");
    StochasticKl out;
    double total = 0.0;
    for (std::size_t i = 0; i < dataset.sequences.size(); ++i) {
        const double ll = loglik(dataset.sequences[i]);
        if (!(ll > -kInf)) {
            out.infinite = true;
            out.flagged_index = i;
            out.total_nats = kInf;
            out.per_symbol_nats = kInf;
            return out;
        }
        total -= ll;
    }
    out.total_nats = total / static_cast<double>(dataset.sequences.size());
    out.per_symbol_nats = out.total_nats / static_cast<double>(dataset.n);
    return out;
}

double kl_exact(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_exact: support size mismatch");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.p[i] == 0.0) continue;
        if (q.p[i] == 0.0) return kInf;
        kl += p.p[i] * std::log(p.p[i] / q.p[i]);
    }
    return kl;
}

double l1_distance(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("l1_distance: support size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p.p[i] - q.p[i]);
    return sum;
}

double multiplicative_gamma(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("multiplicative_gamma: support size mismatch");
    double gamma = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (q.p[i] == 0.0) {
            if (p.p[i] > 0.0) return kInf;
            continue;
        }
        gamma = std::max(gamma, std::abs(p.p[i] - q.p[i]) / q.p[i]);
    }
    return gamma;
}

std::optional<bool> mult_error_implies_kl(const Distribution& p, const Distribution& q) {
    const double g_pq = multiplicative_gamma(p, q);
    const double g_qp = multiplicative_gamma(q, p);
    const double gamma = std::max(g_pq, g_qp);
    if (!(gamma < 0.5)) return std::nullopt;  // precondition fails; inapplicable
    for (std::size_t i = 0; i < p.size(); ++i) {
        if ((p.p[i] == 0.0) != (q.p[i] == 0.0)) return false;
    }
    return kl_exact(p, q) <= gamma && kl_exact(q, p) <= gamma;
}

double chi2_sf(double x, int df) {
    if (df < 1) throw std::invalid_argument("chi2_sf: df must be >= 1");
    if (x < 0.0) throw std::invalid_argument("chi2_sf: x must be nonnegative");
    return gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile_upper(int df, double p) {
    if (df < 1) throw std::invalid_argument("chi2_quantile_upper: df must be >= 1");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("chi2_quantile_upper: p must be in (0, 1]");
    if (p == 1.0) return 0.0;
    double lo = 0.0;
    double hi = df + 10.0;
    while (chi2_sf(hi, df) > p) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_sf(mid, df) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-13 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

double normal_sf(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

double normal_sf_inv(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("normal_sf_inv: p must be in (0, 1]");
    if (p >= 0.5) return 0.0;  // one-sided convention: sigma clamps at 0
    // initial guess (Abramowitz-Stegun 26.2.23), then Newton on the exact tail
    const double t = std::sqrt(-2.0 * std::log(p));
    double x = t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t);
    for (int it = 0; it < 60; ++it) {
        const double err = normal_sf(x) - p;
        const double pdf = 0.3989422804014326779 * std::exp(-0.5 * x * x);
        if (pdf == 0.0) break;
        const double step = err / pdf;
        x += step;
        if (std::abs(step) < 1e-12 * (1.0 + std::abs(x))) break;
    }
    return x;
}

int dof_hmm(int h, int M) {
    if (h < 1 || M < 1) throw std::invalid_argument("dof_hmm: sizes must be positive");
    return (h - 1) + h * (h - 1) + h * (M - 1);
}

int dof_bbqc(int k, int M, DofConvention convention) {
    if (k < 1 || M < 1) throw std::invalid_argument("dof_bbqc: sizes must be positive");
    // real dimension of the kM x k complex Stiefel slice, plus the unit
    // prior column modulo global phase
    int dof = (2 * k * M * k - k * k) + (2 * k - 2);
    if (convention == DofConvention::GaugeFixed) dof -= k * k;
    return dof;
}

std::string LrTestResult::to_json() const {
    nlohmann::json j;
    j["lr_statistic"] = statistic;
    j["df"] = df;
    j["p_value"] = p_value;
    j["sigma"] = sigma;
    return j.dump();
}

LrTestResult lr_test(double loglik_alt, double loglik_null, int df_alt, int df_null) {
    if (df_alt <= df_null) throw std::invalid_argument("lr_test: df_alt must exceed df_null");
    LrTestResult r;
    r.statistic = std::max(0.0, 2.0 * (loglik_alt - loglik_null));
    r.df = df_alt - df_null;
    r.p_value = chi2_sf(r.statistic, r.df);
    r.sigma = normal_sf_inv(r.p_value);
    return r;
}

double kl_threshold_for_sigma(int df, double sigma_target, std::size_t K, int n) {
    if (df < 1 || K < 1 || n < 1) throw std::invalid_argument("kl_threshold_for_sigma: bad sizes");
    if (sigma_target <= 0.0) return 0.0;
    const double p = normal_sf(sigma_target);
    const double x = chi2_quantile_upper(df, p);
    return x / (2.0 * static_cast<double>(K) * static_cast<double>(n));
}

}  // namespace qcorr::eval
