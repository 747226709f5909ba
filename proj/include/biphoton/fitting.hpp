/// Nonlinear least-squares interferogram fitting.
///
/// Two model kinds:
///   sinusoid:       y(d) = c + (A/2) cos(2 pi d / P + phi0)
///   classical_pure: y(d) = s (1 + cos(2 pi d / P + phi0))^2 / 4
///
/// Sinusoid fitting has abundant local minima in P, so a coarse global
/// period search (linear least squares in the remaining parameters at each
/// trial period) precedes damped Gauss-Newton refinement of all parameters.
/// Parameter standard errors come from the inverse normal matrix at the
/// optimum, scaled by the reduced residual variance.
#pragma once

#include "biphoton/counting_fwd.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace biphoton {

enum class FitModelKind { sinusoid, classical_pure };
enum class WeightMode { uniform, inverse_sigma };
enum class FitStatus { ok, degenerate, no_converge };

struct FitModel {
    FitModelKind kind = FitModelKind::sinusoid;
    double offset = 0.0;     // c (sinusoid only)
    double amplitude = 0.0;  // A, peak-to-trough (sinusoid only)
    double scale = 0.0;      // s (classical_pure only)
    double period_nm = 0.0;  // P
    double phase_rad = 0.0;  // phi0, reported in (-pi, pi]

    double evaluate(double d) const {
        const double theta = 2.0 * std::numbers::pi * d / period_nm + phase_rad;
        if (kind == FitModelKind::sinusoid) {
            return offset + 0.5 * amplitude * std::cos(theta);
        }
        const double base = 1.0 + std::cos(theta);
        return scale * base * base / 4.0;
    }
};

struct FitResult {
    FitModel model;
    double sigma_offset = std::numeric_limits<double>::quiet_NaN();
    double sigma_amplitude = std::numeric_limits<double>::quiet_NaN();
    double sigma_scale = std::numeric_limits<double>::quiet_NaN();
    double sigma_period = std::numeric_limits<double>::quiet_NaN();
    double sigma_phase = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();  // NaN when undefined
    int n_used = 0;
    FitStatus status = FitStatus::ok;
    int iterations = 0;
};

namespace fit_detail {

inline constexpr int kPeriodGridSize = 2000;
inline constexpr int kPhaseGridSize = 72;
inline constexpr int kMaxIterations = 200;
inline constexpr double kStepTol = 1e-10;
inline constexpr double kDegenerateAmplitude = 1e-8;

struct FitData {
    std::vector<double> d;
    std::vector<double> y;
    std::vector<double> w;
};

inline FitData gather(const SweepResult& sweep, WeightMode weight) {
    FitData data;
    for (const SweepRow& row : sweep.rows) {
        if (!row.intensity_norm) {
            continue;
        }
        data.d.push_back(row.retardation_nm);
        data.y.push_back(*row.intensity_norm);
        double sigma = 0.0;
        if (row.intensity_sigma) {
            sigma = *row.intensity_sigma;
        }
        data.w.push_back(sigma);  // raw sigma for now
    }
    if (weight == WeightMode::uniform) {
        std::fill(data.w.begin(), data.w.end(), 1.0);
        return data;
    }
    // inverse-sigma weights; zero or missing sigmas take the smallest
    // positive sigma in the dataset, uniform fallback if there is none
    double min_sigma = std::numeric_limits<double>::infinity();
    for (double s : data.w) {
        if (s > 0.0) {
            min_sigma = std::min(min_sigma, s);
        }
    }
    if (!std::isfinite(min_sigma)) {
        std::fill(data.w.begin(), data.w.end(), 1.0);
        return data;
    }
    for (double& s : data.w) {
        const double sigma = s > 0.0 ? s : min_sigma;
        s = 1.0 / (sigma * sigma);
    }
    return data;
}

inline double weighted_ssr(const FitData& data, const FitModel& model) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < data.d.size(); ++i) {
        const double r = data.y[i] - model.evaluate(data.d[i]);
        ssr += data.w[i] * r * r;
    }
    return ssr;
}

// Linear least squares in (c, alpha, beta) for y = c + alpha cos(2 pi d/P)
// + beta sin(2 pi d/P) at fixed period.
struct SinusoidLinear {
    double c = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double ssr = std::numeric_limits<double>::infinity();
};

inline SinusoidLinear solve_sinusoid_linear(const FitData& data, double period) {
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d aty = Eigen::Vector3d::Zero();
    const double omega = 2.0 * std::numbers::pi / period;
    for (std::size_t i = 0; i < data.d.size(); ++i) {
        const double theta = omega * data.d[i];
        const Eigen::Vector3d row(1.0, std::cos(theta), std::sin(theta));
        ata += data.w[i] * row * row.transpose();
        aty += data.w[i] * data.y[i] * row;
    }
    const Eigen::Vector3d sol = ata.ldlt().solve(aty);
    SinusoidLinear out;
    if (!sol.allFinite()) {
        return out;
    }
    out.c = sol(0);
    out.alpha = sol(1);
    out.beta = sol(2);
    out.ssr = 0.0;
    for (std::size_t i = 0; i < data.d.size(); ++i) {
        const double theta = omega * data.d[i];
        const double r = data.y[i] - out.c - out.alpha * std::cos(theta) - out.beta * std::sin(theta);
        out.ssr += data.w[i] * r * r;
    }
    return out;
}

inline double span_of(const FitData& data) {
    const auto [lo, hi] = std::minmax_element(data.d.begin(), data.d.end());
    return *hi - *lo;
}

/// Levenberg-damped Gauss-Newton. `eval` fills residual vector and Jacobian
/// at the given parameters; `admissible` rejects out-of-domain steps.
template <int N, typename Eval, typename Admissible>
inline std::pair<Eigen::Matrix<double, N, 1>, std::pair<FitStatus, int>> refine(
    Eigen::Matrix<double, N, 1> params, const FitData& data, Eval eval, Admissible admissible) {
    using Vec = Eigen::Matrix<double, N, 1>;
    using Mat = Eigen::Matrix<double, N, N>;

    const std::size_t n = data.d.size();
    Eigen::VectorXd residual(n);
    Eigen::MatrixXd jacobian(n, N);

    eval(params, residual, jacobian);
    double ssr = (residual.array().square() * Eigen::Map<const Eigen::ArrayXd>(data.w.data(), n))
                     .sum();
    double damping = 1e-3;
    int iter = 0;
    for (; iter < kMaxIterations; ++iter) {
        const Eigen::MatrixXd jw =
            jacobian.array().colwise() * Eigen::Map<const Eigen::ArrayXd>(data.w.data(), n);
        const Mat normal = jacobian.transpose() * jw;
        const Vec gradient = jw.transpose() * residual;

        Vec step = Vec::Zero();
        bool accepted = false;
        double ssr_try = ssr;
        Vec params_try = params;
        for (int inner = 0; inner < 60; ++inner) {
            Mat damped = normal;
            for (int j = 0; j < N; ++j) {
                damped(j, j) += damping * std::max(normal(j, j), 1e-30);
            }
            step = damped.ldlt().solve(gradient);
            if (!step.allFinite()) {
                damping *= 10.0;
                continue;
            }
            params_try = params + step;
            if (!admissible(params_try)) {
                damping *= 10.0;
                continue;
            }
            Eigen::VectorXd res_try(n);
            Eigen::MatrixXd jac_try(n, N);
            eval(params_try, res_try, jac_try);
            ssr_try = (res_try.array().square() *
                       Eigen::Map<const Eigen::ArrayXd>(data.w.data(), n))
                          .sum();
            if (std::isfinite(ssr_try) && ssr_try <= ssr) {
                residual.swap(res_try);
                jacobian.swap(jac_try);
                accepted = true;
                break;
            }
            damping *= 10.0;
        }
        if (!accepted) {
            // no admissible improving step at any damping: stationary
            return {params, {FitStatus::ok, iter + 1}};
        }
        double step_rel = 0.0;
        for (int j = 0; j < N; ++j) {
            step_rel = std::max(step_rel, std::abs(step(j)) / (std::abs(params(j)) + 1e-8));
        }
        params = params_try;
        ssr = ssr_try;
        damping = std::max(damping * 0.3, 1e-14);
        if (step_rel < kStepTol) {
            return {params, {FitStatus::ok, iter + 1}};
        }
    }
    return {params, {FitStatus::no_converge, iter}};
}

inline double wrap_phase(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi <= -std::numbers::pi) {
        phi += two_pi;
    } else if (phi > std::numbers::pi) {
        phi -= two_pi;
    }
    return phi;
}

inline double weighted_r_squared(const FitData& data, double ssr) {
    double wsum = 0.0;
    double ymean = 0.0;
    for (std::size_t i = 0; i < data.d.size(); ++i) {
        wsum += data.w[i];
        ymean += data.w[i] * data.y[i];
    }
    ymean /= wsum;
    double sstot = 0.0;
    for (std::size_t i = 0; i < data.d.size(); ++i) {
        const double dy = data.y[i] - ymean;
        sstot += data.w[i] * dy * dy;
    }
    if (sstot <= 1e-20) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return 1.0 - ssr / sstot;
}

}  // namespace fit_detail

inline FitResult fit(const SweepResult& sweep, FitModelKind kind, WeightMode weight) {
    using namespace fit_detail;

    FitData data = gather(sweep, weight);
    const std::size_t n = data.d.size();
    if (n < 6) {
        throw std::invalid_argument("fit: need at least 6 non-missing points");
    }
    const double span = span_of(data);
    if (!(span > 0.0)) {
        throw std::invalid_argument("fit: zero retardation span");
    }

    FitResult result;
    result.n_used = static_cast<int>(n);
    result.model.kind = kind;

    const double period_min = span / 20.0;
    const double period_max = 2.0 * span;
    const double freq_min = 1.0 / period_max;
    const double freq_max = 1.0 / period_min;

    if (kind == FitModelKind::sinusoid) {
        // global stage: scan trial periods, linear-solve the rest
        double best_ssr = std::numeric_limits<double>::infinity();
        double best_period = period_max;
        SinusoidLinear best_lin;
        for (int k = 0; k < kPeriodGridSize; ++k) {
            const double f = freq_min + (freq_max - freq_min) * k / (kPeriodGridSize - 1);
            const double period = 1.0 / f;
            const SinusoidLinear lin = solve_sinusoid_linear(data, period);
            if (lin.ssr < best_ssr) {
                best_ssr = lin.ssr;
                best_period = period;
                best_lin = lin;
            }
        }
        const double coarse_amp = 2.0 * std::hypot(best_lin.alpha, best_lin.beta);
        if (coarse_amp <= kDegenerateAmplitude) {
            result.status = FitStatus::degenerate;
            result.model.offset = best_lin.c;
            result.model.amplitude = 0.0;
            result.model.period_nm = best_period;
            result.model.phase_rad = 0.0;
            result.r_squared = weighted_r_squared(data, best_ssr);
            return result;
        }
        if (best_period > span) {
            throw std::invalid_argument(
                "fit: retardation span covers less than one period of the initial estimate");
        }

        // refine (c, alpha, beta, P)
        Eigen::Vector4d params(best_lin.c, best_lin.alpha, best_lin.beta, best_period);
        auto eval = [&](const Eigen::Vector4d& p, Eigen::VectorXd& res, Eigen::MatrixXd& jac) {
            const double omega = 2.0 * std::numbers::pi / p(3);
            for (std::size_t i = 0; i < n; ++i) {
                const double theta = omega * data.d[i];
                const double ct = std::cos(theta);
                const double st = std::sin(theta);
                res(i) = data.y[i] - p(0) - p(1) * ct - p(2) * st;
                jac(i, 0) = 1.0;
                jac(i, 1) = ct;
                jac(i, 2) = st;
                jac(i, 3) = (p(1) * st - p(2) * ct) * omega * data.d[i] / p(3);
            }
        };
        auto admissible = [&](const Eigen::Vector4d& p) {
            return p(3) > 0.0 && std::isfinite(p(3));
        };
        auto [opt, status] = refine<4>(params, data, eval, admissible);
        result.status = status.first;
        result.iterations = status.second;

        const double c = opt(0);
        const double alpha = opt(1);
        const double beta = opt(2);
        const double period = opt(3);
        const double half_amp = std::hypot(alpha, beta);
        result.model.offset = c;
        result.model.amplitude = 2.0 * half_amp;
        result.model.period_nm = period;
        result.model.phase_rad = wrap_phase(std::atan2(-beta, alpha));
        const double ssr = weighted_ssr(data, result.model);
        result.r_squared = weighted_r_squared(data, ssr);

        if (half_amp <= kDegenerateAmplitude) {
            result.status = FitStatus::degenerate;
            return result;
        }

        // covariance of (c, alpha, beta, P), then delta method to (c, A, P, phi0)
        Eigen::VectorXd res(n);
        Eigen::MatrixXd jac(n, 4);
        eval(opt, res, jac);
        const Eigen::MatrixXd jw =
            jac.array().colwise() * Eigen::Map<const Eigen::ArrayXd>(data.w.data(), n);
        const Eigen::Matrix4d normal = jac.transpose() * jw;
        const double variance = ssr / static_cast<double>(n - 4);
        const Eigen::Matrix4d cov = normal.inverse() * variance;
        if (cov.allFinite()) {
            Eigen::Vector4d g_c(1, 0, 0, 0);
            Eigen::Vector4d g_a(0, 2.0 * alpha / half_amp, 2.0 * beta / half_amp, 0);
            Eigen::Vector4d g_p(0, 0, 0, 1);
            Eigen::Vector4d g_phi(0, beta / (half_amp * half_amp),
                                  -alpha / (half_amp * half_amp), 0);
            result.sigma_offset = std::sqrt(std::max(0.0, double(g_c.transpose() * cov * g_c)));
            result.sigma_amplitude = std::sqrt(std::max(0.0, double(g_a.transpose() * cov * g_a)));
            result.sigma_period = std::sqrt(std::max(0.0, double(g_p.transpose() * cov * g_p)));
            result.sigma_phase = std::sqrt(std::max(0.0, double(g_phi.transpose() * cov * g_phi)));
        }
        return result;
    }

    // classical_pure: y = s (1 + cos(2 pi d / P + phi0))^2 / 4
    double best_ssr = std::numeric_limits<double>::infinity();
    double best_period = period_max;
    double best_phase = 0.0;
    double best_scale = 0.0;
    for (int k = 0; k < kPeriodGridSize / 2; ++k) {
        const double f = freq_min + (freq_max - freq_min) * k / (kPeriodGridSize / 2 - 1);
        const double period = 1.0 / f;
        const double omega = 2.0 * std::numbers::pi / period;
        for (int m = 0; m < kPhaseGridSize; ++m) {
            const double phase = -std::numbers::pi + 2.0 * std::numbers::pi * m / kPhaseGridSize;
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double base = 1.0 + std::cos(omega * data.d[i] + phase);
                const double g = base * base / 4.0;
                num += data.w[i] * data.y[i] * g;
                den += data.w[i] * g * g;
            }
            if (den <= 0.0) {
                continue;
            }
            const double s = std::max(0.0, num / den);
            double ssr = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double base = 1.0 + std::cos(omega * data.d[i] + phase);
                const double r = data.y[i] - s * base * base / 4.0;
                ssr += data.w[i] * r * r;
            }
            if (ssr < best_ssr) {
                best_ssr = ssr;
                best_period = period;
                best_phase = phase;
                best_scale = s;
            }
        }
    }
    if (best_scale <= kDegenerateAmplitude) {
        result.status = FitStatus::degenerate;
        result.model.scale = best_scale;
        result.model.period_nm = best_period;
        result.model.phase_rad = wrap_phase(best_phase);
        result.r_squared = weighted_r_squared(data, best_ssr);
        return result;
    }
    if (best_period > span) {
        throw std::invalid_argument(
            "fit: retardation span covers less than one period of the initial estimate");
    }

    Eigen::Vector3d params(best_scale, best_period, best_phase);
    auto eval = [&](const Eigen::Vector3d& p, Eigen::VectorXd& res, Eigen::MatrixXd& jac) {
        const double omega = 2.0 * std::numbers::pi / p(1);
        for (std::size_t i = 0; i < n; ++i) {
            const double theta = omega * data.d[i] + p(2);
            const double base = 1.0 + std::cos(theta);
            const double st = std::sin(theta);
            res(i) = data.y[i] - p(0) * base * base / 4.0;
            jac(i, 0) = base * base / 4.0;
            jac(i, 1) = p(0) * base * st * omega * data.d[i] / (2.0 * p(1));
            jac(i, 2) = -p(0) * base * st / 2.0;
        }
    };
    auto admissible = [&](const Eigen::Vector3d& p) {
        return p(0) >= 0.0 && p(1) > 0.0 && std::isfinite(p(1));
    };
    auto [opt, status] = refine<3>(params, data, eval, admissible);
    result.status = status.first;
    result.iterations = status.second;
    result.model.scale = opt(0);
    result.model.period_nm = opt(1);
    result.model.phase_rad = wrap_phase(opt(2));
    const double ssr = weighted_ssr(data, result.model);
    result.r_squared = weighted_r_squared(data, ssr);

    Eigen::VectorXd res(n);
    Eigen::MatrixXd jac(n, 3);
    eval(opt, res, jac);
    const Eigen::MatrixXd jw =
        jac.array().colwise() * Eigen::Map<const Eigen::ArrayXd>(data.w.data(), n);
    const Eigen::Matrix3d normal = jac.transpose() * jw;
    const double variance = ssr / static_cast<double>(n - 3);
    const Eigen::Matrix3d cov = normal.inverse() * variance;
    if (cov.allFinite()) {
        result.sigma_scale = std::sqrt(std::max(0.0, cov(0, 0)));
        result.sigma_period = std::sqrt(std::max(0.0, cov(1, 1)));
        result.sigma_phase = std::sqrt(std::max(0.0, cov(2, 2)));
    }
    return result;
}

/// The fitted period in retardation units is the de Broglie wavelength.
inline double de_broglie_wavelength(const FitResult& fit) {
    if (fit.model.kind != FitModelKind::sinusoid || fit.status != FitStatus::ok) {
        throw std::invalid_argument("de_broglie_wavelength: needs a successful sinusoid fit");
    }
    return fit.model.period_nm;
}

/// Retardation shift of the fringe pattern in units of lambda_bar:
/// offset = phi0 * P / (2 pi lambda_bar).
inline double phase_offset_lambda(const FitResult& fit, double lambda_bar_nm) {
    if (fit.model.kind != FitModelKind::sinusoid || fit.status != FitStatus::ok) {
        throw std::invalid_argument("phase_offset_lambda: needs a successful sinusoid fit");
    }
    if (!(lambda_bar_nm > 0.0)) {
        throw std::invalid_argument("phase_offset_lambda: lambda_bar_nm must be > 0");
    }
    return fit.model.phase_rad * fit.model.period_nm /
           (2.0 * std::numbers::pi * lambda_bar_nm);
}

/// Standard error of phase_offset_lambda from the phase and period errors.
inline double phase_offset_lambda_sigma(const FitResult& fit, double lambda_bar_nm) {
    const double two_pi_lambda = 2.0 * std::numbers::pi * lambda_bar_nm;
    const double from_phase = fit.model.period_nm / two_pi_lambda * fit.sigma_phase;
    const double from_period = fit.model.phase_rad / two_pi_lambda * fit.sigma_period;
    return std::hypot(from_phase, from_period);
}

/// Peak-to-trough amplitude of the fitted normalized intensity.
inline double fringe_amplitude(const FitResult& fit) {
    if (fit.status != FitStatus::ok) {
        throw std::invalid_argument("fringe_amplitude: fit did not succeed");
    }
    return fit.model.kind == FitModelKind::sinusoid ? fit.model.amplitude : fit.model.scale;
}

/// Inverts the mixed-state amplitude law a = (1 - b)/2.
inline double background_from_mixed_amplitude(double a_mixed) {
    if (!(a_mixed >= 0.0 && a_mixed <= 0.5)) {
        throw std::invalid_argument(
            "background_from_mixed_amplitude: amplitude must be in [0, 0.5]");
    }
    return 1.0 - 2.0 * a_mixed;
}

struct EntanglementBounds {
    double f_max = 1.0;  // 1 - 3b/4
    double a_max = 1.0;  // 1 - b
};

inline EntanglementBounds entanglement_bounds(double b) {
    if (!(b >= 0.0 && b <= 1.0)) {
        throw std::invalid_argument("entanglement_bounds: b must be in [0, 1]");
    }
    return {1.0 - 0.75 * b, 1.0 - b};
}

/// 1 - SS_res/SS_tot with SS_tot about the data mean; NaN for zero-variance
/// data (undefined).
inline double r_squared(const std::vector<double>& data, const std::vector<double>& fitted) {
    if (data.size() != fitted.size() || data.size() < 2) {
        throw std::invalid_argument("r_squared: need >= 2 matching points");
    }
    double mean = 0.0;
    for (double y : data) {
        mean += y;
    }
    mean /= static_cast<double>(data.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        ss_res += (data[i] - fitted[i]) * (data[i] - fitted[i]);
        ss_tot += (data[i] - mean) * (data[i] - mean);
    }
    if (ss_tot <= 1e-20) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return 1.0 - ss_res / ss_tot;
}

enum class ClassicalityVerdict { classical_compatible, nonclassical };

/// Two-sigma exceedance of the 50% classical bound on the fringe amplitude.
/// Requires a biphoton-period sinusoid fit (P within 10% of lambda_bar/2).
inline ClassicalityVerdict classicality_witness(const FitResult& fit, double lambda_bar_nm) {
    if (fit.model.kind != FitModelKind::sinusoid || fit.status != FitStatus::ok) {
        throw std::invalid_argument("classicality_witness: needs a successful sinusoid fit");
    }
    const double biphoton_period = lambda_bar_nm / 2.0;
    if (std::abs(fit.model.period_nm - biphoton_period) > 0.1 * biphoton_period) {
        throw std::invalid_argument(
            "classicality_witness: fitted period is not within 10% of lambda_bar/2");
    }
    const double amplitude = fit.model.amplitude;
    const double sigma = std::isfinite(fit.sigma_amplitude) ? fit.sigma_amplitude : 0.0;
    return amplitude - 2.0 * sigma > 0.5 ? ClassicalityVerdict::nonclassical
                                         : ClassicalityVerdict::classical_compatible;
}

/// Dense samples of a fitted curve, for plot-ready output.
inline std::vector<std::pair<double, double>> sample_model_curve(const FitModel& model,
                                                                double d_start, double d_end,
                                                                int n_samples) {
    if (n_samples < 2 || !(d_end > d_start)) {
        throw std::invalid_argument("sample_model_curve: bad sampling range");
    }
    std::vector<std::pair<double, double>> samples;
    samples.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double d = d_start + (d_end - d_start) * i / (n_samples - 1);
        samples.emplace_back(d, model.evaluate(d));
    }
    return samples;
}

}  // namespace biphoton
