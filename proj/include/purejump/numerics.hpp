#pragma once

#include <functional>
#include <optional>

#include "purejump/extended_real.hpp"

namespace purejump::numerics {

/// Neumaier compensated accumulator; order of accumulation changes the result
/// only at the level of a few ulps of the total.
class CompensatedSum {
public:
    void add(double x) noexcept;
    CompensatedSum& operator+=(double x) noexcept { add(x); return *this; }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) on a finite interval with global bisection of
/// the worst subinterval. Throws QuadratureFailure if the budget runs out.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Integral of h over (0, b] where h(x) behaves like x^s near 0 with s > -1.
/// Uses the substitution x = u^m, m = 1/(s+1), which removes the endpoint
/// singularity before handing the smooth integrand to `integrate`.
QuadratureResult integrate_power_singular(const std::function<double(double)>& h, double b,
                                          double s, const QuadratureOptions& opts = {});

/// Fixed-order Gauss-Legendre rule (8 points) on [a, b].
double gauss_legendre8(const std::function<double(double)>& f, double a, double b);

struct ShellOptions {
    int max_shells = 600;
    int window = 20;
    double cap = 1e12;
    double growth_tol = 1e-9;   // "non-decreasing" slack, relative
    double converge_tol = 1e-16;
    int converge_run = 8;
};

/// Sum of nonnegative contributions of geometric shells approaching a
/// singular point (shell k is the k-th dyadic band). Infinite is returned
/// only with a certificate; otherwise QuadratureFailure when neither
/// convergence nor divergence is established within max_shells.
ExtendedReal accumulate_shells(const std::function<double(int)>& shell_value,
                               const ShellOptions& opts = {});

struct SeriesOptions {
    long direct_terms = 16384;
    long max_terms = 20'000'000;
    double cap = 1e12;
    int window = 20;
};

/// Sum of nonnegative terms term(k), k = first..last (last empty: infinite).
/// Long tails are classified by probing the local power exponent
/// q = log2(term(2k)/term(k)): q >= -1 certifies divergence by the integral
/// test, a stable q < -1 is summed with an Euler-Maclaurin tail, and faster
/// decay is summed until negligible.
ExtendedReal sum_series(const std::function<double(long)>& term, long first,
                        std::optional<long> last, const SeriesOptions& opts = {});

struct RootOptions {
    double xtol = 1e-15;
    double ftol = 0.0;
    int max_iter = 300;
};

/// Brent's method on a bracketing interval [a, b]. Throws RootFindFailure if
/// f(a) and f(b) have the same strict sign or the iteration budget runs out.
double brent(const std::function<double(double)>& f, double a, double b,
             const RootOptions& opts = {});

/// Euler-Maclaurin estimate of sum_{k>=m} c k^q for q < -1.
double power_tail(double c, double q, long m);

}  // namespace purejump::numerics
