#include "purejump/classify.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "purejump/error.hpp"

namespace purejump {

using nlohmann::json;

const char* membership_name(Membership m) noexcept {
    switch (m) {
        case Membership::Member: return "member";
        case Membership::NonMember: return "non-member";
        case Membership::Undecided: return "undecided";
    }
    return "undecided";
}

namespace {

FlagResult make(Membership m, std::string cond, std::string detail,
                std::optional<ExtendedReal> v = std::nullopt) {
    return FlagResult{m, Witness{std::move(cond), std::move(detail), std::move(v)}};
}

double horizon_of(const CompensatorSpec& comp, const Component& c) {
    if (std::holds_alternative<TanChange>(c.clock.v)) return std::min(comp.horizon, kHalfPi);
    return comp.horizon;
}

// Slices where slice-wise conditions are probed.
std::vector<Slice> probe_slices(const CompensatorSpec& comp, const Component& c) {
    std::vector<Slice> out;
    const double T = horizon_of(comp, c);
    if (const auto* f = std::get_if<FixedTimes>(&c.clock.v)) {
        auto [lo, hi] = kernel::atom_index_range(*f, 0.0, comp.horizon);
        if (hi >= 0 && hi < lo) return out;
        const long last = hi < 0 ? lo + 1000000 : hi;
        for (long n = lo; n <= std::min(last, lo + 63); ++n) out.push_back({kernel::atom_time(*f, n), n});
        for (long n = lo + 128; n <= last; n *= 2) out.push_back({kernel::atom_time(*f, n), n});
        return out;
    }
    for (int i = 0; i < 64; ++i) out.push_back({T * (i + 0.5) / 64.0, -1});
    return out;
}

MomentResult small_moment(const Component& c, const Slice& s) {
    return kernel::moment(c.kernel, s, 1.0, Region::small_jumps());
}

// Sum over components of the clock integral of g.
template <class G>
ExtendedReal over_components(const CompensatorSpec& comp, const G& g, const kernel::ClockIntegralOptions& opts = {}) {
    ExtendedReal total = ExtendedReal::finite(0.0);
    for (const auto& c : comp.components) {
        total += kernel::clock_integral(c, [&](const Slice& s) { return g(c, s); }, 0.0, horizon_of(comp, c), opts);
        if (total.is_infinite()) return total;
    }
    return total;
}

kernel::ClockIntegralOptions eta_options(const Integrand& eta, double T) {
    kernel::ClockIntegralOptions o;
    o.constant_in_time = eta.zeta.is_constant();
    o.extra_breaks = eta.zeta.breakpoints(0.0, T);
    return o;
}

bool slice_divergent(const ExtendedReal& v) {
    return v.is_infinite() && v.certificate().kind == DivergenceCertificate::Kind::SliceDivergent;
}

template <class F>
FlagResult guarded(const std::string& cond, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::QuadratureFailure || e.code() == ErrorCode::UnknownAsymptotics) {
            return make(Membership::Undecided, cond, e.what());
        }
        throw;
    }
}

struct TwoSided {
    std::optional<bool> both;
    std::string witness;
};

TwoSided two_sided_divergence(const CompensatorSpec& comp) {
    TwoSided r;
    for (const auto& c : comp.components) {
        for (const auto& s : probe_slices(comp, c)) {
            if (small_moment(c, s).absolute.is_finite()) continue;
            const auto pos = kernel::moment(c.kernel, s, 1.0, Region::positive(0.0, 1.0));
            const auto neg = kernel::moment(c.kernel, s, 1.0, Region::negative(0.0, 1.0));
            std::ostringstream os;
            os.precision(10);
            os << "t=" << s.t << ": int x+ 1F " << pos.absolute.describe() << ", int x- 1F "
               << neg.absolute.describe();
            if (pos.absolute.is_finite() || neg.absolute.is_finite()) {
                r.both = false;
                r.witness = os.str();
                return r;
            }
            if (!r.both) {
                r.both = true;
                r.witness = os.str();
            }
        }
    }
    return r;
}

struct Pinning {
    bool pinned = false;
    std::string witness;
};

// Geometric atom growth x_k m_k >= 2 sum_{j<k} x_j m_j on both sides.
Pinning drift_pinning(const CompensatorSpec& comp) {
    Pinning p;
    if (comp.components.empty()) return p;
    for (const auto& c : comp.components) {
        const auto* af = std::get_if<AtomFamily>(&c.kernel.v);
        if (!af || af->sides != Sides::Both || af->max_index != 0) return Pinning{};
        const double q = af->m_pow - af->x_pow;
        const double r = af->m_base / af->x_base;
        if (!(q >= 0.0 && r >= 3.0)) return Pinning{};
        std::ostringstream os;
        os.precision(10);
        os << "x_k m_k = " << af->x_scale * af->m_scale << " k^" << q << " " << r
           << "^k >= 2 sum_{j<k} x_j m_j";
        p.witness = os.str();
    }
    p.pinned = true;
    return p;
}

bool zero_drift(const DriftSpec& d) {
    return d.mode == DriftSpec::Mode::Explicit && d.beta.c0 == 0.0 && d.beta.c1 == 0.0;
}

void propagate(ClassReport& r) {
    for (int i = 6; i >= 1; --i) {
        const auto& f = r.flags[static_cast<std::size_t>(i - 1)];
        if (f.flag == Membership::Member) {
            for (int j = i - 1; j >= 1; --j) {
                auto& g = r.flags[static_cast<std::size_t>(j - 1)];
                if (g.flag == Membership::Undecided) {
                    g = make(Membership::Member, "inclusion", "implied by J" + std::to_string(i) + " membership");
                }
            }
        }
    }
    for (int i = 1; i <= 6; ++i) {
        const auto& f = r.flags[static_cast<std::size_t>(i - 1)];
        if (f.flag == Membership::NonMember) {
            for (int j = i + 1; j <= 6; ++j) {
                auto& g = r.flags[static_cast<std::size_t>(j - 1)];
                if (g.flag == Membership::Undecided) {
                    g = make(Membership::NonMember, "inclusion", "implied by J" + std::to_string(i) + " non-membership");
                }
            }
        }
    }
}

std::string alpha_stable_annotation(const CompensatorSpec& comp, const DriftSpec& d, const ClassReport& r) {
    if (comp.components.size() != 1) return {};
    const auto& c = comp.components[0];
    const auto* pl = std::get_if<PowerLaw>(&c.kernel.v);
    const auto* lb = std::get_if<Lebesgue>(&c.clock.v);
    if (!pl || !lb || !pl->symmetric || !std::isinf(pl->cutoff) || pl->lower != 0.0 ||
        !pl->alpha.is_constant() || !lb->rate.is_constant()) {
        return {};
    }
    std::ostringstream os;
    os.precision(6);
    const double a = pl->alpha.c0;
    os << "alpha-stable, alpha=" << a << ", ";
    if (d.mode == DriftSpec::Mode::Matching) os << "beta matching";
    else os << "beta=" << d.beta.c0;
    os << ": " << r.summary();
    return os.str();
}

}  // namespace

bool ClassReport::chain_consistent() const {
    for (int i = 1; i <= 6; ++i) {
        for (int k = i + 1; k <= 6; ++k) {
            if (j(k).member() && j(i).non_member()) return false;
        }
    }
    return true;
}

std::string ClassReport::summary() const {
    int m = 0, n = 7;
    for (int i = 1; i <= 6; ++i) {
        if (j(i).member()) m = i;
        if (j(i).non_member() && n == 7) n = i;
    }
    if (m == 6) return "J6";
    if (n == m + 1) return "J" + std::to_string(m) + "\\J" + std::to_string(n);
    std::string s = "undecided";
    if (m > 0) s += ", member of J" + std::to_string(m);
    if (n < 7) s += ", not in J" + std::to_string(n);
    return s;
}

std::string ClassReport::to_text() const {
    std::ostringstream os;
    if (!name.empty()) os << name << "\n";
    for (int i = 1; i <= 6; ++i) {
        const auto& f = j(i);
        os << "  J" << i << ": " << membership_name(f.flag) << "  [" << f.witness.condition << "] "
           << f.witness.detail;
        if (f.witness.value) os << " (" << f.witness.value->describe() << ")";
        os << "\n";
    }
    os << "  class: " << summary() << "\n";
    if (!annotation.empty()) os << "  " << annotation << "\n";
    return os.str();
}

std::string ClassReport::to_json(int indent) const {
    json j;
    j["name"] = name;
    j["summary"] = summary();
    json flags_out = json::array();
    for (int i = 1; i <= 6; ++i) {
        const auto& f = this->j(i);
        json e;
        e["class"] = "J" + std::to_string(i);
        e["flag"] = membership_name(f.flag);
        e["condition"] = f.witness.condition;
        e["detail"] = f.witness.detail;
        if (f.witness.value) {
            if (f.witness.value->is_finite()) {
                e["value"] = f.witness.value->value();
            } else {
                e["value"] = "inf";
                e["certificate"] = certificate_kind_name(f.witness.value->certificate().kind);
            }
        }
        flags_out.push_back(e);
    }
    j["flags"] = flags_out;
    if (!annotation.empty()) j["annotation"] = annotation;
    return j.dump(indent);
}

FlagResult in_J6(const CompensatorSpec& comp) {
    const std::string cond = "total activity int F_t(R) dA_t";
    return guarded(cond, [&] {
        const ExtendedReal v = over_components(comp, [](const Component& c, const Slice& s) {
            return kernel::moment(c.kernel, s, 0.0, Region::all()).absolute;
        }, {1e-12, 1e-14, 16384, true, {}});
        if (v.is_finite()) return make(Membership::Member, cond, "finitely many jumps on the horizon", v);
        return make(Membership::NonMember, cond, "infinite activity", v);
    });
}

FlagResult in_J5(const CompensatorSpec& comp) {
    const std::string cond = "int int |x| 1_{|x|<=1} F_t(dx) dA_t";
    return guarded(cond, [&] {
        const ExtendedReal v = over_components(comp, [](const Component& c, const Slice& s) {
            return small_moment(c, s).absolute;
        }, {1e-12, 1e-14, 16384, true, {}});
        if (v.is_finite()) return make(Membership::Member, cond, "small jumps absolutely summable", v);
        return make(Membership::NonMember, cond, "jumps not absolutely summable", v);
    });
}

FlagResult in_J4(const CompensatorSpec& comp) {
    const std::string cond = "int |x| 1_{|x|<=1} F_t(dx) < inf dA-a.e.";
    return guarded(cond, [&] {
        const ExtendedReal v = over_components(comp, [](const Component& c, const Slice& s) {
            const MomentResult m = small_moment(c, s);
            if (m.absolute.is_infinite()) return m.absolute;
            return ExtendedReal::finite(std::fabs(m.signed_value));
        }, {1e-12, 1e-14, 16384, true, {}});
        if (v.is_finite()) {
            return make(Membership::Member, cond, "slice integral finite, int |mean| dA finite", v);
        }
        if (slice_divergent(v)) return make(Membership::NonMember, cond, "slice integral infinite", v);
        return make(Membership::NonMember, cond, "truncated mean not dA-integrable", v);
    });
}

ObstructionResult j3_obstruction(const CompensatorSpec& comp) {
    ObstructionResult r;
    for (std::size_t i = 0; i < comp.components.size(); ++i) {
        const auto above = kernel::atom_limsup_vanishes(comp, kernel::Side::FromAbove, static_cast<int>(i));
        const auto below = kernel::atom_limsup_vanishes(comp, kernel::Side::FromBelow, static_cast<int>(i));
        if (!above.vanishes && !below.vanishes) {
            r.holds = false;
            r.witness = "limsup x F({x}) > 0 from both sides: " + above.witness;
            return r;
        }
    }
    r.witness = "limsup |x| F({x}) vanishes on at least one side";
    return r;
}

FlagResult drift_matches(const CompensatorSpec& comp, const DriftSpec& drift) {
    const std::string cond = "beta = int x 1_{|x|<=1} F_t(dx)";
    if (drift.mode == DriftSpec::Mode::Matching) {
        return make(Membership::Member, cond, "drift declared matching");
    }
    int compared = 0;
    for (const auto& c : comp.components) {
        for (const auto& s : probe_slices(comp, c)) {
            const MomentResult m = small_moment(c, s);
            if (m.absolute.is_infinite()) continue;
            const double b = drift.beta(s.t);
            ++compared;
            if (std::fabs(b - m.signed_value) > 1e-9 * (1.0 + std::fabs(b))) {
                std::ostringstream os;
                os.precision(12);
                os << "at t=" << s.t << " beta=" << b << " but truncated mean=" << m.signed_value;
                return make(Membership::NonMember, cond, os.str());
            }
        }
    }
    if (compared == 0) return make(Membership::Undecided, cond, "truncated mean undefined on the grid");
    return make(Membership::Member, cond, "matches on " + std::to_string(compared) + " grid slices");
}

void validate_drift(const CompensatorSpec& comp, const DriftSpec& drift) {
    if (drift.mode == DriftSpec::Mode::Matching) return;
    if (drift.beta.c0 == 0.0 && drift.beta.c1 == 0.0) return;
    const ExtendedReal v = over_components(comp, [&](const Component&, const Slice& s) {
        return ExtendedReal::finite(std::fabs(drift.beta(s.t)));
    });
    if (v.is_infinite()) fail(ErrorCode::InvalidSpec, "drift rate not dA-integrable: " + v.describe());
}

ClassReport classify(const CompensatorSpec& comp, const std::optional<DriftSpec>& drift_in) {
    const DriftSpec drift = drift_in ? *drift_in : comp.drift;
    validate_drift(comp, drift);
    ClassReport r;
    r.name = comp.name;
    r.flags[0] = make(Membership::Member, "no continuous martingale part", "compensator-only specification");

    const FlagResult j4 = in_J4(comp);
    if (j4.member()) {
        const FlagResult dm = drift_matches(comp, drift);
        if (dm.member()) {
            r.flags[3] = make(Membership::Member, j4.witness.condition,
                              j4.witness.detail + "; " + dm.witness.detail, j4.witness.value);
            r.flags[4] = in_J5(comp);
            r.flags[5] = r.flags[4].member() ? in_J6(comp) : make(Membership::NonMember, "inclusion", "not in J5");
        } else if (dm.non_member()) {
            r.flags[1] = make(Membership::NonMember, dm.witness.condition,
                              "slice mean finite but drift differs: " + dm.witness.detail);
        } else {
            r.flags[1] = make(Membership::Undecided, dm.witness.condition, dm.witness.detail);
        }
    } else if (j4.non_member()) {
        r.flags[3] = j4;
        const FlagResult dm = drift_matches(comp, drift);
        if (dm.non_member()) {
            r.flags[1] = make(Membership::NonMember, dm.witness.condition,
                              "drift differs from the truncated mean where it exists: " + dm.witness.detail);
        } else if (!slice_divergent(*j4.witness.value)) {
            r.flags[1] = make(Membership::Undecided, "undecided-by-criterion", j4.witness.detail);
        } else {
            const ObstructionResult ob = j3_obstruction(comp);
            if (ob.holds) {
                const TwoSided ts = two_sided_divergence(comp);
                if (!ts.both) {
                    r.flags[1] = make(Membership::Undecided, "two-sided divergence", "no divergent probe slice");
                } else if (*ts.both) {
                    r.flags[1] = make(Membership::Member, "atom condition and two-sided divergence",
                                      "drift steerable: " + ts.witness);
                    r.flags[2] = make(Membership::NonMember, "atom condition holds and not J4", ob.witness);
                } else {
                    r.flags[1] = make(Membership::NonMember, "one-sided divergence", ts.witness);
                }
            } else {
                const Pinning pin = drift_pinning(comp);
                if (pin.pinned && zero_drift(drift)) {
                    r.flags[2] = make(Membership::Member, "drift pinning (known case)", pin.witness);
                } else if (pin.pinned) {
                    r.flags[1] = make(Membership::NonMember, "drift pinning (known case)",
                                      "every pure-jump process with this jump measure has zero drift; " +
                                          pin.witness);
                } else {
                    r.flags[1] = make(Membership::Undecided, "undecided-by-criterion", ob.witness);
                    r.flags[2] = make(Membership::Undecided, "undecided-by-criterion", ob.witness);
                }
            }
        }
    } else {
        r.flags[3] = j4;
    }
    propagate(r);
    r.annotation = alpha_stable_annotation(comp, drift, r);
    return r;
}

FlagResult l_sigma_nu_member(const Integrand& eta, const CompensatorSpec& comp) {
    const std::string cond = "int |eta| F < inf a.e. and int |int eta F| dA < inf";
    if (eta.is_zero()) return make(Membership::Member, cond, "zero integrand", ExtendedReal::finite(0.0));
    return guarded(cond, [&] {
        const ExtendedReal v = over_components(comp, [&](const Component& c, const Slice& s) {
            const SliceIntegral si = slice_integral(c.kernel, s, eta, EtaPart::All);
            if (si.absolute.is_infinite()) return si.absolute;
            return ExtendedReal::finite(std::fabs(si.signed_value));
        }, eta_options(eta, comp.horizon));
        if (v.is_finite()) return make(Membership::Member, cond, "conditions (a) and (b) hold", v);
        if (slice_divergent(v)) return make(Membership::NonMember, cond, "condition (a) fails", v);
        return make(Membership::NonMember, cond, "condition (b) fails", v);
    });
}

FlagResult l_sigma_mu_member(const Integrand& eta, const CompensatorSpec& comp) {
    const std::string cond = "(|eta|^2 ^ 1) * nu < inf and eta 1_{|eta|<=1} in L_sigma(nu)";
    if (eta.is_zero()) return make(Membership::Member, cond, "zero integrand", ExtendedReal::finite(0.0));
    return guarded(cond, [&] {
        const auto opts = eta_options(eta, comp.horizon);
        const ExtendedReal q = over_components(comp, [&](const Component& c, const Slice& s) {
            return slice_square_capped(c.kernel, s, eta);
        }, opts);
        if (q.is_infinite()) return make(Membership::Undecided, cond, "quadratic certificate fails", q);
        const ExtendedReal v = over_components(comp, [&](const Component& c, const Slice& s) {
            const SliceIntegral si = slice_integral(c.kernel, s, eta, EtaPart::Small);
            if (si.absolute.is_infinite()) return si.absolute;
            return ExtendedReal::finite(std::fabs(si.signed_value));
        }, opts);
        if (v.is_finite()) {
            std::ostringstream os;
            os.precision(12);
            os << "quadratic part " << q.value() << ", small part in L_sigma(nu)";
            return make(Membership::Member, cond, os.str(), v);
        }
        if (slice_divergent(v)) return make(Membership::NonMember, cond, "small part: condition (a) fails", v);
        return make(Membership::NonMember, cond, "small part: condition (b) fails", v);
    });
}

FlagResult l_mu_member(const Integrand& eta, const CompensatorSpec& comp) {
    const std::string cond = "|eta| * nu < inf";
    if (eta.is_zero()) return make(Membership::Member, cond, "zero integrand", ExtendedReal::finite(0.0));
    return guarded(cond, [&] {
        const ExtendedReal v = over_components(comp, [&](const Component& c, const Slice& s) {
            return slice_integral(c.kernel, s, eta, EtaPart::All).absolute;
        }, eta_options(eta, comp.horizon));
        if (v.is_finite()) return make(Membership::Member, cond, "absolutely integrable", v);
        return make(Membership::NonMember, cond, "|eta| * nu diverges", v);
    });
}

namespace {

KernelSpec restrict_kernel(const KernelSpec& k, double a, double b) {
    return std::visit(
        [&](const auto& ker) -> KernelSpec {
            using T = std::decay_t<decltype(ker)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                PowerLaw out = ker;
                out.lower = std::max(ker.lower, a);
                out.cutoff = std::min(ker.cutoff, b);
                if (!(out.lower < out.cutoff)) return KernelSpec{AtomList{}};
                return KernelSpec{out};
            } else if constexpr (std::is_same_v<T, AtomFamily> || std::is_same_v<T, AtomList>) {
                AtomList out;
                out.atoms = kernel::atoms_in(k, Slice{0.0, -1}, Region::abs_band(a, b, false, true));
                return KernelSpec{out};
            } else if constexpr (std::is_same_v<T, Mixture>) {
                Mixture out;
                for (const auto& p : ker.parts) {
                    out.parts.push_back({p.weight, std::make_shared<KernelSpec>(restrict_kernel(*p.kernel, a, b))});
                }
                return KernelSpec{out};
            } else {
                fail(ErrorCode::InvalidArgument, "band restriction not available for " + kernel::describe(k));
            }
        },
        k.v);
}

}  // namespace

CompensatorSpec restrict_band(const CompensatorSpec& comp, double a, double b) {
    if (!(a > 0.0 && b > a)) fail(ErrorCode::InvalidArgument, "band needs 0 < a < b");
    CompensatorSpec out = comp;
    out.name = comp.name + " restricted";
    for (auto& c : out.components) c.kernel = restrict_kernel(c.kernel, a, b);
    out.drift.mode = DriftSpec::Mode::Matching;
    return out;
}

}  // namespace purejump
