#include "purejump/presets.hpp"

#include <cmath>
#include <memory>

#include "purejump/error.hpp"

namespace purejump::presets {

namespace {

CompensatorSpec single(std::string name, KernelSpec k, ClockSpec c, double horizon) {
    CompensatorSpec s;
    s.name = std::move(name);
    s.horizon = horizon;
    s.components.push_back(Component{0, std::move(k), std::move(c)});
    return s;
}

ClockSpec lebesgue(double rate = 1.0) { return ClockSpec{Lebesgue{{rate, 0.0}}}; }

}  // namespace

CompensatorSpec intro(long n_max) {
    FixedTimes f;
    f.generated = true;
    f.base = 2.0;
    f.step = -1.0;
    f.tpow = 1.0;
    f.weight = 1.0;
    f.n_max = n_max;
    SliceAtoms k{1.0, 1.0, 1.0, Sides::Both};
    auto s = single("intro", KernelSpec{k}, ClockSpec{f}, 2.0);
    s.scheme.levels = static_cast<int>(n_max);
    return s;
}

CompensatorSpec ex38(double horizon) {
    PowerLaw k;
    k.alpha = {1.0, -1.0};
    k.cutoff = 1.0;
    return single("ex-3.8", KernelSpec{k}, lebesgue(), horizon);
}

CompensatorSpec ex313(int power) {
    if (power != 1 && power != 2) fail(ErrorCode::InvalidArgument, "power must be 1 or 2");
    auto s = single("ex-3.13", KernelSpec{StepAtom{power, true}}, ClockSpec{TanChange{1.0}}, kHalfPi);
    s.drift.mode = DriftSpec::Mode::Matching;
    s.scheme.kind = TruncationScheme::Kind::Dyadic;
    return s;
}

CompensatorSpec alpha_stable(double alpha, double beta, double horizon) {
    PowerLaw k;
    k.alpha = {alpha, 0.0};
    k.cutoff = kInf;
    auto s = single("alpha-stable", KernelSpec{k}, lebesgue(), horizon);
    s.drift.beta = {beta, 0.0};
    return s;
}

CompensatorSpec ex516() {
    AtomFamily k{1.0, 2.0, 3.0, 1.0, 2.0, 9.0, Sides::Both, 0};
    return single("ex-5.16", KernelSpec{k}, lebesgue(), 1.0);
}

CompensatorSpec inverse_square(double horizon) {
    PowerLaw k;
    k.alpha = {1.0, 0.0};
    k.cutoff = 1.0;
    return single("inverse-square", KernelSpec{k}, lebesgue(), horizon);
}

CompensatorSpec sec54() {
    FixedTimes f;
    f.generated = true;
    f.base = 0.0;
    f.step = 1.0;
    f.tpow = 1.0;
    f.weight = 1.0;
    f.n_max = 100000;
    SliceAtoms k{1.0, 2.0, 1.0, Sides::Positive};
    auto s = single("sec-5.4", KernelSpec{k}, ClockSpec{f}, 1.0);
    s.drift.mode = DriftSpec::Mode::Matching;
    return s;
}

CompensatorSpec one_sided(double alpha) {
    PowerLaw k;
    k.alpha = {alpha, 0.0};
    k.cutoff = 1.0;
    k.symmetric = false;
    auto s = single("one-sided", KernelSpec{k}, lebesgue(), 1.0);
    s.drift.mode = DriftSpec::Mode::Matching;
    return s;
}

CompensatorSpec poisson_atom(double a, double lambda, double horizon) {
    AtomList k;
    k.atoms.push_back({a, lambda});
    auto s = single("poisson", KernelSpec{k}, lebesgue(), horizon);
    s.drift.mode = DriftSpec::Mode::Matching;
    return s;
}

CompensatorSpec qc_dp_mixture() {
    PowerLaw pl;
    pl.alpha = {0.5, 0.0};
    pl.cutoff = 1.0;
    FixedTimes f;
    f.times = {0.25, 0.5, 0.75};
    f.weights = {1.0, 1.0, 1.0};
    AtomList jumps;
    jumps.atoms = {{-0.5, 0.5}, {0.5, 0.5}};
    CompensatorSpec s;
    s.name = "qc-dp-mixture";
    s.horizon = 1.0;
    s.components.push_back(Component{0, KernelSpec{pl}, lebesgue()});
    s.components.push_back(Component{1, KernelSpec{jumps}, ClockSpec{f}});
    s.drift.mode = DriftSpec::Mode::Matching;
    return s;
}

CompensatorSpec alternating_drift() {
    auto s = inverse_square(1.0);
    s.name = "alternating-drift";
    PowerLaw k;
    k.alpha = {0.5, 0.0};
    k.cutoff = 1.0;
    s.components[0].kernel = KernelSpec{k};
    s.scheme.kind = TruncationScheme::Kind::Dyadic;
    s.scheme.level_drift = TruncationScheme::LevelDrift::Alternating;
    s.scheme.alt_amplitude = 1.0;
    return s;
}

std::vector<std::string> names() {
    return {"intro", "ex-3.8", "ex-3.13", "alpha-stable", "ex-5.16", "inverse-square",
            "sec-5.4", "one-sided", "poisson", "qc-dp-mixture", "alternating-drift"};
}

CompensatorSpec by_name(const std::string& name) {
    if (name == "intro") return intro();
    if (name == "ex-3.8") return ex38();
    if (name == "ex-3.13") return ex313();
    if (name == "alpha-stable") return alpha_stable(1.5, 0.0);
    if (name == "ex-5.16") return ex516();
    if (name == "inverse-square") return inverse_square();
    if (name == "sec-5.4") return sec54();
    if (name == "one-sided") return one_sided();
    if (name == "poisson") return poisson_atom();
    if (name == "qc-dp-mixture") return qc_dp_mixture();
    if (name == "alternating-drift") return alternating_drift();
    fail(ErrorCode::InvalidArgument, "no preset named '" + name + "'");
}

}  // namespace purejump::presets
