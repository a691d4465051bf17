#include "purejump/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "purejump/error.hpp"

namespace purejump::numerics {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        carry_ += (sum_ - t) + x;
    } else {
        carry_ += (x - t) + sum_;
    }
    sum_ = t;
}

namespace {

// QUADPACK qk15 abscissae / weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double value = resk * h;
    const double err = std::abs((resk - resg) * h);
    return {a, b, value, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
    if (a == b) return {};
    if (!(std::isfinite(a) && std::isfinite(b))) {
        fail(ErrorCode::QuadratureFailure, "integrate: infinite interval");
    }
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    heap.push(first);
    double total = first.value;
    double total_err = first.error;
    int intervals = 1;
    while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (intervals >= opts.max_intervals) {
            std::ostringstream os;
            os << "integrate on [" << a << ", " << b << "]: error " << total_err
               << " after " << intervals << " intervals";
            fail(ErrorCode::QuadratureFailure, os.str());
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            fail(ErrorCode::QuadratureFailure, "integrate: interval cannot be subdivided");
        }
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum from the pieces to shed the drift of incremental updates.
    CompensatedSum v, e;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    if (!std::isfinite(v.value())) fail(ErrorCode::QuadratureFailure, "integrate: non-finite value");
    return {sign * v.value(), e.value(), intervals};
}

QuadratureResult integrate_power_singular(const std::function<double(double)>& h, double b,
                                          double s, const QuadratureOptions& opts) {
    if (!(s > -1.0)) fail(ErrorCode::QuadratureFailure, "integrate_power_singular: exponent <= -1");
    if (b <= 0.0) return {};
    const double m = std::max(1.0, 1.0 / (s + 1.0));
    const double ub = std::pow(b, 1.0 / m);
    auto g = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double x = std::pow(u, m);
        return h(x) * m * std::pow(u, m - 1.0);
    };
    return integrate(g, 0.0, ub, opts);
}

double gauss_legendre8(const std::function<double(double)>& f, double a, double b) {
    static constexpr std::array<double, 4> x = {0.1834346424956498, 0.5255324099163290,
                                                0.7966664774136267, 0.9602898564975363};
    static constexpr std::array<double, 4> w = {0.3626837833783620, 0.3137066458778873,
                                                0.2223810344533745, 0.1012285362903763};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += w[i] * (f(c - h * x[i]) + f(c + h * x[i]));
    return acc * h;
}

ExtendedReal accumulate_shells(const std::function<double(int)>& shell_value,
                               const ShellOptions& opts) {
    CompensatedSum sum;
    std::deque<double> recent;
    int small_run = 0;
    for (int k = 0; k < opts.max_shells; ++k) {
        const double v = shell_value(k);
        if (!(v >= 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "shell " << k << " returned invalid contribution " << v;
            fail(ErrorCode::QuadratureFailure, os.str());
        }
        sum += v;
        recent.push_back(v);
        if (static_cast<int>(recent.size()) > opts.window) recent.pop_front();

        if (static_cast<int>(recent.size()) == opts.window) {
            bool nondecreasing = recent.front() > 0.0;
            double lo = recent.front(), hi = recent.front();
            for (std::size_t i = 1; i < recent.size(); ++i) {
                if (recent[i] < recent[i - 1] * (1.0 - opts.growth_tol)) nondecreasing = false;
                lo = std::min(lo, recent[i]);
                hi = std::max(hi, recent[i]);
            }
            if (nondecreasing) {
                DivergenceCertificate cert;
                cert.kind = DivergenceCertificate::Kind::ShellGrowth;
                cert.index = k;
                cert.partial_sum = sum.value();
                cert.detail = "trailing shell increments non-decreasing";
                return ExtendedReal::infinite(cert);
            }
            if (sum.value() > opts.cap && lo > 0.5 * hi) {
                DivergenceCertificate cert;
                cert.kind = DivergenceCertificate::Kind::CapExceeded;
                cert.index = k;
                cert.partial_sum = sum.value();
                cert.detail = "partial sum above cap with increments bounded below";
                return ExtendedReal::infinite(cert);
            }
        }
        if (v <= opts.converge_tol * sum.value() || (v == 0.0 && sum.value() == 0.0)) {
            if (++small_run >= opts.converge_run) return ExtendedReal::finite(sum.value());
        } else {
            small_run = 0;
        }
    }
    std::ostringstream os;
    os << "shell accumulation undecided after " << opts.max_shells << " shells (partial "
       << sum.value() << ")";
    fail(ErrorCode::QuadratureFailure, os.str());
}

double power_tail(double c, double q, long m) {
    // sum_{k>=m} f(k) = int_m^inf f + f(m)/2 - f'(m)/12 + f'''(m)/720 - ...
    const double md = static_cast<double>(m);
    const double f = c * std::pow(md, q);
    const double integral = -c * std::pow(md, q + 1.0) / (q + 1.0);
    const double f1 = c * q * std::pow(md, q - 1.0);
    const double f3 = c * q * (q - 1.0) * (q - 2.0) * std::pow(md, q - 3.0);
    const double f5 = c * q * (q - 1.0) * (q - 2.0) * (q - 3.0) * (q - 4.0) * std::pow(md, q - 5.0);
    return integral + 0.5 * f - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0;
}

ExtendedReal sum_series(const std::function<double(long)>& term, long first,
                        std::optional<long> last, const SeriesOptions& opts) {
    CompensatedSum sum;
    auto check_term = [](long k, double v) {
        if (!(v >= 0.0) || std::isnan(v)) {
            std::ostringstream os;
            os << "series term " << k << " invalid: " << v;
            fail(ErrorCode::QuadratureFailure, os.str());
        }
    };
    if (last && *last < first) return ExtendedReal::finite(0.0);
    if (last && *last - first + 1 <= opts.max_terms) {
        for (long k = first; k <= *last; ++k) {
            const double v = term(k);
            check_term(k, v);
            sum += v;
        }
        if (!std::isfinite(sum.value())) {
            DivergenceCertificate cert{DivergenceCertificate::Kind::CapExceeded, *last, sum.value(),
                                       "finite sum overflowed"};
            return ExtendedReal::infinite(cert);
        }
        return ExtendedReal::finite(sum.value());
    }

    // Direct phase.
    std::deque<double> recent;
    long k = first;
    const long direct_end = first + opts.direct_terms;
    for (; k < direct_end; ++k) {
        const double v = term(k);
        check_term(k, v);
        sum += v;
        recent.push_back(v);
        if (static_cast<int>(recent.size()) > opts.window) recent.pop_front();
        if (sum.value() > opts.cap && static_cast<int>(recent.size()) == opts.window) {
            bool nondecreasing = true;
            for (std::size_t i = 1; i < recent.size(); ++i) {
                if (recent[i] < recent[i - 1]) nondecreasing = false;
            }
            if (nondecreasing) {
                DivergenceCertificate cert{DivergenceCertificate::Kind::CapExceeded, k, sum.value(),
                                           "monotone partial sums exceeded cap"};
                return ExtendedReal::infinite(cert);
            }
        }
    }

    // Probe the tail exponent at geometric indices.
    const long m = k;
    std::vector<double> q;
    std::vector<double> probe_val;
    long idx = m;
    bool all_zero = true;
    for (int j = 0; j < 8; ++j) {
        const double v = term(idx);
        check_term(idx, v);
        probe_val.push_back(v);
        if (v > 0.0) all_zero = false;
        if (last && idx > *last / 2) break;
        idx *= 2;
    }
    if (all_zero) {
        // Finite support ending before the probes (generator exhausted): continue directly
        // until a long run of zeros.
        long zeros = 0;
        for (; zeros < 100000 && k < opts.max_terms + first; ++k) {
            const double v = term(k);
            check_term(k, v);
            if (v == 0.0) ++zeros; else { zeros = 0; sum += v; }
        }
        return ExtendedReal::finite(sum.value());
    }
    if (probe_val.front() == 0.0) {
        // Support starts further out: sum up to the first live probe and start over there.
        long stop = m;
        for (std::size_t j = 0; j < probe_val.size(); ++j, stop *= 2) {
            if (probe_val[j] > 0.0) break;
        }
        for (; k < stop; ++k) {
            const double v = term(k);
            check_term(k, v);
            sum += v;
        }
        ExtendedReal rest = sum_series(term, stop, last, opts);
        if (rest.is_infinite()) return rest;
        return ExtendedReal::finite(sum.value() + rest.value());
    }
    for (std::size_t j = 1; j < probe_val.size(); ++j) {
        if (probe_val[j - 1] > 0.0 && probe_val[j] > 0.0) {
            q.push_back(std::log2(probe_val[j] / probe_val[j - 1]));
        } else if (probe_val[j - 1] > 0.0) {
            q.push_back(-std::numeric_limits<double>::infinity());
        }
    }
    if (q.size() >= 3) {
        const double q1 = q[q.size() - 1], q2 = q[q.size() - 2], q3 = q[q.size() - 3];
        if (q1 >= -1.0 - 1e-9 && q2 >= -1.0 - 1e-9 && q3 >= -1.0 - 1e-9) {
            std::ostringstream os;
            os << "term exponent " << q1 << " >= -1";
            DivergenceCertificate cert{DivergenceCertificate::Kind::PowerTail, m, sum.value(), os.str()};
            return ExtendedReal::infinite(cert);
        }
        // Exponents of rational terms settle like 1/k; accept a converging sequence.
        const bool stable = std::abs(q1 - q2) < 1e-3 && std::abs(q1 - q2) <= std::abs(q2 - q3) + 1e-12;
        if (stable && q1 < -1.0 - 1e-3 && !last) {
            const double mlast = static_cast<double>(m) * std::ldexp(1.0, static_cast<int>(probe_val.size()) - 1);
            const double c = probe_val.back() / std::pow(mlast, q1);
            sum += power_tail(c, q1, m);
            return ExtendedReal::finite(sum.value());
        }
    }
    // Fast (super-polynomial) decay, or a finite but long range: sum on.
    int small_run = 0;
    const long hard_end = last ? std::min(*last, first + opts.max_terms) : first + opts.max_terms;
    for (; k <= hard_end; ++k) {
        const double v = term(k);
        check_term(k, v);
        sum += v;
        if (v <= 1e-18 * sum.value()) {
            if (++small_run > 64) return ExtendedReal::finite(sum.value());
        } else {
            small_run = 0;
        }
    }
    if (last && hard_end == *last) return ExtendedReal::finite(sum.value());
    std::ostringstream os;
    os << "series undecided after " << opts.max_terms << " terms";
    fail(ErrorCode::QuadratureFailure, os.str());
}

double brent(const std::function<double(double)>& f, double a, double b, const RootOptions& opts) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream os;
        os << "brent: root not bracketed on [" << a << ", " << b << "]";
        fail(ErrorCode::RootFindFailure, os.str());
    }
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * opts.xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= opts.ftol) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    fail(ErrorCode::RootFindFailure, "brent: iteration budget exhausted");
}

}  // namespace purejump::numerics
