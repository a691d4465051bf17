#include "purejump/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "purejump/config.hpp"
#include "purejump/error.hpp"
#include "purejump/numerics.hpp"
#include "purejump/presets.hpp"

namespace purejump {

namespace {

using kernel::uniform01;

std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct BitSource {
    std::uint64_t word = 0;
    int left = 0;
    bool next(std::mt19937_64& rng) {
        if (left == 0) {
            word = rng();
            left = 64;
        }
        const bool b = word & 1ULL;
        word >>= 1;
        --left;
        return b;
    }
};

CompensatorSpec effective(const CompensatorSpec& comp, const SimOptions& o) {
    CompensatorSpec c = comp;
    if (o.horizon) c.horizon = *o.horizon;
    if (o.drift) c.drift = *o.drift;
    if (o.levels >= 0) c.scheme.levels = o.levels;
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) fail(ErrorCode::InvalidSpec, "horizon must be finite and positive");
    if (c.scheme.levels < 0) fail(ErrorCode::InvalidScheme, "negative level count");
    return c;
}

bool is_fixed(const Component& c) { return kernel::clock_is_atomic(c.clock); }

long atom_cap(const FixedTimes& f) { return f.generated ? f.n_max : LONG_MAX; }

}  // namespace

std::vector<double> simulation_knots(const CompensatorSpec& comp, const SimOptions& o) {
    const double T = comp.horizon;
    std::vector<double> k;
    const int g = std::max(o.grid, 1);
    for (int i = 0; i <= g; ++i) k.push_back(T * i / g);
    for (const auto& c : comp.components) {
        if (is_fixed(c)) continue;
        auto b = kernel::breakpoints(c.kernel, 0.0, T);
        if (b.size() > 200000) b.resize(200000);
        k.insert(k.end(), b.begin(), b.end());
    }
    for (double x : o.extra_knots) {
        if (x > 0.0 && x < T) k.push_back(x);
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
}

namespace {

// int_0^t beta dA for continuous clocks.
double beta_integral(const ClockSpec& c, const TimeLinear& b, double t) {
    if (const auto* lb = std::get_if<Lebesgue>(&c.v)) {
        const double c0 = lb->rate.c0, c1 = lb->rate.c1;
        return b.c0 * c0 * t + (b.c0 * c1 + b.c1 * c0) * t * t / 2.0 + b.c1 * c1 * t * t * t / 3.0;
    }
    const auto& tc = std::get<TanChange>(c.v);
    if (t >= kHalfPi) return kInf;
    return tc.rate * (b(t) * std::tan(t) + b.c1 * std::log(std::cos(t)));
}

double signed_small_mean(const KernelSpec& k, const Slice& s, const Region& r) {
    const auto m = kernel::moment(k, s, 1.0, r.intersect(Region::small_jumps()));
    if (!m.absolute.is_finite()) {
        fail(ErrorCode::InvalidSpec, "truncated mean is not absolutely convergent; compensator undefined");
    }
    return m.signed_value;
}

// Cumulative int_0^t g dA at the knots, g given per slice.
std::vector<double> cumulative(const Component& c, const std::vector<double>& knots,
                               const std::function<double(const Slice&)>& g) {
    std::vector<double> v(knots.size(), 0.0);
    if (kernel::time_independent(c.kernel)) {
        const double gv = g(Slice{0.0, -1});
        if (gv == 0.0) return v;
        for (std::size_t i = 0; i < knots.size(); ++i) v[i] = gv * kernel::clock_mass(c.clock, 0.0, knots[i]);
        return v;
    }
    kernel::ClockIntegralOptions opts;
    opts.constant_in_time = true;
    numerics::CompensatedSum s;
    bool any = false;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        const double mid = 0.5 * (knots[i - 1] + knots[i]);
        if (g(kernel::slice_at(c, mid)) == 0.0 && g(kernel::slice_at(c, knots[i - 1])) == 0.0 &&
            g(kernel::slice_at(c, knots[i])) == 0.0) {
            v[i] = s.value();
            continue;
        }
        s += kernel::clock_integral_signed(c, g, knots[i - 1], knots[i], opts);
        v[i] = s.value();
        any = true;
    }
    if (!any) std::fill(v.begin(), v.end(), 0.0);
    return v;
}

struct CurveBuilder {
    std::vector<double> values;
    std::vector<std::pair<double, double>> atoms;

    void add_values(const std::vector<double>& v) {
        if (values.empty()) values.assign(v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) values[i] += v[i];
    }
    FvCurve build(const std::vector<double>& knots) {
        if (values.empty()) return FvCurve({}, {}, std::move(atoms));
        return FvCurve(knots, std::move(values), std::move(atoms));
    }
};

double safe_qv(const Component& c, const Region& r, double t0, double t1) {
    if (r.is_empty() || !(t1 > t0)) return 0.0;
    try {
        const auto v = kernel::clock_integral(
            c, [&](const Slice& s) { return kernel::moment(c.kernel, s, 2.0, r).absolute; }, t0, t1);
        return v.is_finite() ? v.value() : kInf;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::QuadratureFailure || e.code() == ErrorCode::UnknownAsymptotics) {
            return std::nan("");
        }
        throw;
    }
}

// Clock window holding the generated atoms beyond n_max.
std::pair<double, double> omitted_window(const FixedTimes& f, double T) {
    if (!f.generated) return {0.0, 0.0};
    const long n = f.n_max;
    if (f.step < 0.0) return {kernel::atom_time(f, n), T};
    return {f.base, std::min(T, kernel::atom_time(f, n + 1))};
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index, int component) {
    std::uint64_t x = seed;
    std::uint64_t h = splitmix64(x);
    x = h ^ (index * 0xd1b54a32d192ed03ULL);
    h = splitmix64(x);
    x = h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(component)) * 0x8cb92ba72f3d8dd7ULL);
    return splitmix64(x);
}

std::shared_ptr<const LevelTable> build_level_table(const CompensatorSpec& spec, const SimOptions& o) {
    const CompensatorSpec comp = effective(spec, o);
    const double T = comp.horizon;
    const int K = comp.scheme.levels;
    auto table = std::make_shared<LevelTable>();
    table->levels = K;
    table->grid = kernel::level_grid(comp, K);
    const auto& grid = table->grid;
    const std::vector<double> knots = simulation_knots(comp, o);
    const bool matching = comp.drift.mode == DriftSpec::Mode::Matching;
    const bool alternating = comp.scheme.level_drift == TruncationScheme::LevelDrift::Alternating;
    const double amp = comp.scheme.alt_amplitude;

    CurveBuilder base;
    std::vector<CurveBuilder> comp_k(static_cast<std::size_t>(K)), drift_k(static_cast<std::size_t>(K));
    numerics::CompensatedSum qv;

    for (const auto& c : comp.components) {
        if (!is_fixed(c)) {
            if (std::holds_alternative<SliceAtoms>(c.kernel.v)) {
                fail(ErrorCode::InvalidSpec, "slice atoms need a fixed-time clock");
            }
            if (matching) {
                base.add_values(cumulative(c, knots, [&](const Slice& s) {
                    return signed_small_mean(c.kernel, s, Region::all());
                }));
            } else if (comp.drift.beta.c0 != 0.0 || comp.drift.beta.c1 != 0.0) {
                std::vector<double> v(knots.size());
                for (std::size_t i = 0; i < knots.size(); ++i) v[i] = beta_integral(c.clock, comp.drift.beta, knots[i]);
                base.add_values(v);
            }
            std::vector<double> A(knots.size());
            for (std::size_t i = 0; i < knots.size(); ++i) A[i] = kernel::clock_mass(c.clock, 0.0, knots[i]);
            for (int k = 0; k < K; ++k) {
                const auto ku = static_cast<std::size_t>(k);
                const Region r = grid.region(k);
                if (!r.is_empty()) {
                    auto v = cumulative(c, knots, [&](const Slice& s) { return signed_small_mean(c.kernel, s, r); });
                    if (std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; })) comp_k[ku].add_values(v);
                }
                if (alternating && amp != 0.0) {
                    std::vector<double> d(A);
                    const double sgn = (k % 2 == 0) ? amp : -amp;
                    for (double& x : d) x *= sgn;
                    drift_k[ku].add_values(d);
                }
            }
            qv += safe_qv(c, grid.untruncated(K), 0.0, T);
            continue;
        }
        const auto& f = std::get<FixedTimes>(c.clock.v);
        const auto atoms = kernel::clock_atoms(f, 0.0, T, atom_cap(f));
        const auto* sa = std::get_if<SliceAtoms>(&c.kernel.v);
        const bool atomic = kernel::is_atomic(c.kernel);
        for (const auto& [s, w] : atoms) {
            if (w == 0.0) continue;
            if (!matching && (comp.drift.beta.c0 != 0.0 || comp.drift.beta.c1 != 0.0)) {
                base.atoms.push_back({s.t, w * comp.drift.beta(s.t)});
            }
            if (alternating && amp != 0.0) {
                for (int k = 0; k < K; ++k) {
                    drift_k[static_cast<std::size_t>(k)].atoms.push_back({s.t, (k % 2 == 0 ? amp : -amp) * w});
                }
            }
            if (sa) {
                const double x = sa->x_scale * std::pow(static_cast<double>(s.atom), -sa->x_pow);
                if (sa->sides == Sides::Both || x > 1.0) continue;
                const double m = w * sa->prob * x;
                if (matching) base.atoms.push_back({s.t, m});
                const int lv = grid.level_of(x);
                if (lv < K) comp_k[static_cast<std::size_t>(lv)].atoms.push_back({s.t, m});
            } else if (atomic) {
                for (const auto& [x, m] : kernel::atoms_in(c.kernel, s, Region::small_jumps())) {
                    const double v = w * m * x;
                    if (v == 0.0) continue;
                    if (matching) base.atoms.push_back({s.t, v});
                    const int lv = grid.level_of(x);
                    if (lv < K) comp_k[static_cast<std::size_t>(lv)].atoms.push_back({s.t, v});
                }
            } else {
                if (matching) base.atoms.push_back({s.t, w * signed_small_mean(c.kernel, s, Region::all())});
                for (int k = 0; k < K; ++k) {
                    const Region r = grid.region(k);
                    if (r.is_empty()) continue;
                    const double v = w * signed_small_mean(c.kernel, s, r);
                    if (v != 0.0) comp_k[static_cast<std::size_t>(k)].atoms.push_back({s.t, v});
                }
            }
        }
        qv += safe_qv(c, grid.untruncated(K), 0.0, T);
        const auto [w0, w1] = omitted_window(f, T);
        if (w1 > w0) {
            const Region un = grid.untruncated(K);
            const Region kept = un.is_empty() ? Region::all() : un.complement();
            Component tail = c;
            auto& tf = std::get<FixedTimes>(tail.clock.v);
            tf.n_max = LONG_MAX;
            qv += safe_qv(tail, kept, w0, w1);
        }
    }

    table->base = base.build(knots);
    table->compensator.reserve(static_cast<std::size_t>(K));
    table->level_drift.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        table->compensator.push_back(comp_k[static_cast<std::size_t>(k)].build(knots));
        table->level_drift.push_back(drift_k[static_cast<std::size_t>(k)].build(knots));
    }
    table->qv_tail = qv.value();
    table->fv_all = std::make_shared<FvCurve>(table->fv_upto(K));
    table->drift_all = std::make_shared<FvCurve>(table->drift_upto(K));
    return table;
}

namespace {

void check_budget(double expected, double budget, int level) {
    if (!(expected <= budget)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "level %d expects %.3g events, budget %.3g", level, expected, budget);
        fail(ErrorCode::ShellOverflow, buf);
    }
}

long poisson(double mean, std::mt19937_64& rng) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<long> d(mean);
    return d(rng);
}

void simulate_continuous(const Component& c, const CompensatorSpec& comp, const LevelTable& table,
                         const std::vector<double>& knots, const SimOptions& o, std::mt19937_64& rng,
                         std::vector<Event>& out) {
    const double T = comp.horizon;
    const int K = table.levels;
    const auto* lb = std::get_if<Lebesgue>(&c.clock.v);
    const auto* tc = std::get_if<TanChange>(&c.clock.v);
    const bool indep = kernel::time_independent(c.kernel);
    const auto* st = std::get_if<StepAtom>(&c.kernel.v);
    if (tc && !indep && !(st && st->time_changed)) {
        fail(ErrorCode::InvalidSpec, "time change needs a time-independent kernel");
    }
    if (tc && T >= kHalfPi) fail(ErrorCode::ShellOverflow, "clock mass is infinite on the horizon");
    for (int k = 0; k < K; ++k) {
        const Region r = table.grid.region(k);
        if (r.is_empty()) continue;
        auto emit = [&](double t) {
            const double x = kernel::sample(c.kernel, kernel::slice_at(c, t), r, rng);
            out.push_back(Event{t, x, k, c.id});
        };
        if (indep) {
            const double m = kernel::mass(c.kernel, Slice{0.0, -1}, r);
            if (m == 0.0) continue;
            if (lb && lb->rate.is_constant()) {
                const double L = m * lb->rate.c0 * T;
                check_budget(L, o.shell_budget, k);
                const long n = poisson(L, rng);
                for (long i = 0; i < n; ++i) emit(T * uniform01(rng));
                continue;
            }
            if (tc) {
                const double U = std::tan(T);
                const double L = m * tc->rate * U;
                check_budget(L, o.shell_budget, k);
                const long n = poisson(L, rng);
                for (long i = 0; i < n; ++i) emit(std::atan(U * uniform01(rng)));
                continue;
            }
        }
        if (tc) {
            // piecewise constant in u = tan t on unit cells
            const double U = std::tan(T);
            const long cells = static_cast<long>(std::ceil(U));
            double expected = 0.0;
            std::vector<std::pair<double, double>> live;  // (cell start, mean)
            for (long j = 0; j < cells; ++j) {
                const double u0 = static_cast<double>(j), u1 = std::min(U, u0 + 1.0);
                const double m = kernel::mass(c.kernel, Slice{std::atan(0.5 * (u0 + u1)), -1}, r);
                if (m == 0.0) continue;
                const double L = tc->rate * m * (u1 - u0);
                expected += L;
                live.push_back({u0, L});
            }
            check_budget(expected, o.shell_budget, k);
            for (const auto& [u0, L] : live) {
                const double len = std::min(U, u0 + 1.0) - u0;
                const long n = poisson(L, rng);
                for (long i = 0; i < n; ++i) emit(std::atan(u0 + len * uniform01(rng)));
            }
            continue;
        }
        // thinning on knot cells
        auto h = [&](double t) { return kernel::mass(c.kernel, kernel::slice_at(c, t), r) * kernel::clock_density(c.clock, t); };
        std::vector<double> bound(knots.size(), 0.0);
        double expected = 0.0;
        for (std::size_t i = 1; i < knots.size(); ++i) {
            const double a = knots[i - 1], b = knots[i];
            const double M = std::max({h(a), h(0.5 * (a + b)), h(b)}) * (1.0 + 1e-9);
            bound[i] = M;
            expected += M * (b - a);
        }
        check_budget(expected, o.shell_budget, k);
        for (std::size_t i = 1; i < knots.size(); ++i) {
            const double M = bound[i];
            if (M == 0.0) continue;
            const double a = knots[i - 1], b = knots[i];
            const long n = poisson(M * (b - a), rng);
            for (long j = 0; j < n; ++j) {
                const double t = a + (b - a) * uniform01(rng);
                const double acc = uniform01(rng) * M;
                if (acc < h(t)) emit(t);
            }
        }
    }
}

void simulate_fixed(const Component& c, const CompensatorSpec& comp, const LevelTable& table,
                    std::mt19937_64& rng, std::vector<Event>& out) {
    const auto& f = std::get<FixedTimes>(c.clock.v);
    const auto atoms = kernel::clock_atoms(f, 0.0, comp.horizon, atom_cap(f));
    const auto* sa = std::get_if<SliceAtoms>(&c.kernel.v);
    const bool atomic = kernel::is_atomic(c.kernel);
    const int K = table.levels;
    BitSource bits;
    for (const auto& [s, w] : atoms) {
        if (w == 0.0) continue;
        double x = 0.0;
        if (sa) {
            const double a = sa->x_scale * std::pow(static_cast<double>(s.atom), -sa->x_pow);
            const double p = sa->prob * w;
            if (p > 1.0 + 1e-12) fail(ErrorCode::InvalidSpec, "jump probability at a clock atom exceeds 1");
            if (sa->sides == Sides::Both) {
                if (p >= 1.0) {
                    x = bits.next(rng) ? a : -a;
                } else {
                    const double u = uniform01(rng);
                    x = u < 0.5 * p ? -a : (u < p ? a : 0.0);
                }
            } else if (p >= 1.0) {
                x = a;
            } else {
                x = uniform01(rng) < p ? a : 0.0;
            }
        } else if (atomic) {
            const auto list = kernel::atoms_in(c.kernel, s, Region::all());
            double total = 0.0;
            for (const auto& a : list) total += w * a.second;
            if (total > 1.0 + 1e-12) fail(ErrorCode::InvalidSpec, "jump probability at a clock atom exceeds 1");
            const double u = uniform01(rng);
            double cum = 0.0;
            for (const auto& [y, m] : list) {
                cum += w * m;
                if (u < cum) {
                    x = y;
                    break;
                }
            }
        } else {
            const double m = w * kernel::mass(c.kernel, s, Region::all());
            if (m > 1.0 + 1e-12) fail(ErrorCode::InvalidSpec, "jump probability at a clock atom exceeds 1");
            if (uniform01(rng) < m) x = kernel::sample(c.kernel, s, Region::all(), rng);
        }
        if (x == 0.0) continue;
        const int lv = table.grid.level_of(x);
        if (lv < K) out.push_back(Event{s.t, x, lv, c.id});
    }
}

}  // namespace

SamplePath sample_path(const CompensatorSpec& spec, const std::shared_ptr<const LevelTable>& table,
                       std::uint64_t seed, std::uint64_t index, const SimOptions& o) {
    const CompensatorSpec comp = effective(spec, o);
    if (!table || table->levels != comp.scheme.levels) {
        fail(ErrorCode::SchemeMismatch, "level table does not match the spec");
    }
    const std::vector<double> knots = simulation_knots(comp, o);
    SamplePath p;
    p.horizon = comp.horizon;
    p.seed = seed;
    p.index = index;
    p.levels = table->levels;
    p.table = table;
    p.fv = table->fv_all;
    p.drift = table->drift_all;
    p.qv_tail = table->qv_tail;
    p.omitted = table->grid.untruncated(table->levels);
    p.knots = std::make_shared<std::vector<double>>(knots);
    for (const auto& c : comp.components) {
        std::mt19937_64 rng(stream_seed(seed, index, c.id));
        if (is_fixed(c)) {
            simulate_fixed(c, comp, *table, rng, p.events);
        } else {
            simulate_continuous(c, comp, *table, knots, o, rng, p.events);
        }
    }
    p.finalize();
    return p;
}

SamplePath sample_path(const CompensatorSpec& comp, std::uint64_t seed, std::uint64_t index,
                       const SimOptions& o) {
    return sample_path(comp, build_level_table(comp, o), seed, index, o);
}

Ensemble simulate_ensemble(const CompensatorSpec& comp, std::size_t n, std::uint64_t seed,
                           const SimOptions& o) {
    const auto table = build_level_table(comp, o);
    Ensemble e;
    e.seed = seed;
    e.levels = table->levels;
    e.spec_digest = digest(config::to_json(comp, -1));
    e.paths.resize(n);
    unsigned threads = o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next++;
            if (i >= n) return;
            try {
                e.paths[i] = sample_path(comp, table, seed, i, o);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!err) err = std::current_exception();
                next = n;
                return;
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
    return e;
}

SamplePath partial_sum_path(const SamplePath& path, int n) {
    if (!path.table || path.levels < 0) fail(ErrorCode::SchemeMismatch, "path has no level structure");
    if (n < 0 || n > path.levels) {
        fail(ErrorCode::SchemeMismatch, "requested more levels than the path holds");
    }
    if (n == path.levels) return path;
    SamplePath p;
    p.x0 = path.x0;
    p.horizon = path.horizon;
    p.seed = path.seed;
    p.index = path.index;
    p.levels = n;
    p.table = path.table;
    p.omitted = path.table->grid.untruncated(n);
    p.knots = path.knots;
    for (const auto& e : path.events) {
        if (e.level < n) p.events.push_back(e);
    }
    p.fv = std::make_shared<FvCurve>(path.table->fv_upto(n));
    p.drift = std::make_shared<FvCurve>(path.table->drift_upto(n));
    p.finalize();
    return p;
}

SamplePath intro_process(std::uint64_t seed, long n_max) {
    return sample_path(presets::intro(n_max), seed, 0);
}

std::vector<double> intro_terminal_values(std::size_t n, std::uint64_t seed, long n_max, unsigned threads) {
    if (n_max < 1) fail(ErrorCode::InvalidArgument, "n_max must be positive");
    std::vector<double> inv(static_cast<std::size_t>(n_max));
    for (long k = 1; k <= n_max; ++k) inv[static_cast<std::size_t>(k - 1)] = 1.0 / static_cast<double>(k);
    std::vector<double> out(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next++;
            if (i >= n) return;
            std::mt19937_64 rng(stream_seed(seed, i, 0));
            BitSource bits;
            numerics::CompensatedSum s;
            for (double a : inv) s += bits.next(rng) ? a : -a;
            out[i] = s.value();
        }
    };
    threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n < 2) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads && t < n; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return out;
}

SamplePath poisson_phi_process(int power, double T, std::uint64_t seed, bool time_changed) {
    CompensatorSpec comp = presets::ex313(power);
    if (!time_changed) {
        comp.components[0].kernel = KernelSpec{StepAtom{power, false}};
        comp.components[0].clock = ClockSpec{Lebesgue{}};
    } else if (!(T < kHalfPi)) {
        fail(ErrorCode::InvalidArgument, "horizon must be below pi/2");
    }
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    comp.horizon = T;
    // keep every atom phi^power >= (k_max)^-power
    const double u = time_changed ? std::tan(T) : T;
    const int need = static_cast<int>(std::ceil(power * std::log2(u + 2.0))) + 2;
    comp.scheme.levels = std::max(comp.scheme.levels, need);
    return sample_path(comp, seed, 0);
}

std::string path_csv(const SamplePath& p, int grid) {
    std::ostringstream os;
    os.precision(17);
    os << "t,value,jump\n";
    std::vector<double> ts = p.sup_times(p.horizon, grid);
    for (double t : ts) {
        const double v = p.value(t);
        const double j = t > 0.0 ? v - p.left(t) : 0.0;
        os << t << ',' << v << ',' << j << '\n';
    }
    return os.str();
}

}  // namespace purejump
