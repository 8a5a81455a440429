#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qcorr::data {
struct Dataset;
}

namespace qcorr::eval {

/// Explicit finite distribution for exact small-instance metrics.
struct Distribution {
    std::vector<double> p;

    void validate(double tol = 1e-12) const;
    std::size_t size() const { return p.size(); }
};

/// Result of the stochastic KL estimate D(theta) = -(1/N) sum log p(seq),
/// the theta-dependent part of the forward KL (data entropy omitted).
struct StochasticKl {
    double total_nats = 0.0;       // per sequence
    double per_symbol_nats = 0.0;  // divided by the sequence length
    bool infinite = false;
    std::size_t flagged_index = 0;  // offending sequence when infinite
};

StochasticKl stochastic_kl(const std::function<double(const std::vector<int>&)>& loglik,
                           const data::Dataset& dataset);

double kl_exact(const Distribution& p, const Distribution& q);
double l1_distance(const Distribution& p, const Distribution& q);
/// max over the support of |p - q| / q; infinity when q = 0 < p.
double multiplicative_gamma(const Distribution& p, const Distribution& q);

/// Checks the two-sided multiplicative-error bound: when gamma < 1/2 in
/// both directions, both KL divergences must not exceed gamma and the
/// supports must coincide. Returns nullopt when the precondition fails
/// (e.g. disjoint supports), in which case the claim is inapplicable.
std::optional<bool> mult_error_implies_kl(const Distribution& p, const Distribution& q);

/// Upper-tail chi-squared probability via the regularized incomplete gamma
/// function (series / continued fraction).
double chi2_sf(double x, int df);
/// Inverse of chi2_sf in x: the point with upper-tail probability p.
double chi2_quantile_upper(int df, double p);

/// One-sided normal tail and its inverse (the sigma scale).
double normal_sf(double x);
double normal_sf_inv(double p);

int dof_hmm(int h, int M);

enum class DofConvention { Stiefel, GaugeFixed };
int dof_bbqc(int k, int M, DofConvention convention = DofConvention::Stiefel);

struct LrTestResult {
    double statistic = 0.0;  // 2 * delta log-likelihood, clamped at 0
    int df = 0;
    double p_value = 1.0;
    double sigma = 0.0;

    std::string to_json() const;
};

/// Wilks likelihood-ratio test of the nested null against the alternative.
LrTestResult lr_test(double loglik_alt, double loglik_null, int df_alt, int df_null);

/// Per-symbol KL improvement needed to reject the null at sigma_target,
/// with K training sequences of length n.
double kl_threshold_for_sigma(int df, double sigma_target, std::size_t K, int n);

}  // namespace qcorr::eval
