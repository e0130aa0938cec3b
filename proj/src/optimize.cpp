#include "entrev/optimize.hpp"

#include <cmath>
#include <limits>

namespace entrev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit_interval(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ArgumentError(std::string(name) + " must lie in [0, 1]");
    }
}

double cost_from(double p, double b) {
    const double denom = p * b;
    return denom > 0.0 ? 1.0 / denom : kInf;
}

}  // namespace

double bell_reversal_success(double d, double r) {
    return 1.0 - 0.5 * r * (1.0 + d);
}

double single_pair_concurrence_unrecovered(double d) { return std::sqrt(1.0 - d); }

double single_pair_concurrence(double d, double r) {
    const double p = bell_reversal_success(d, r);
    if (p <= 0.0) return 0.0;
    return std::sqrt((1.0 - d) * (1.0 - r)) / p;
}

double single_pair_fidelity(double d, double r) {
    const double denom = 2.0 - r * (1.0 + d);
    if (denom <= 0.0) return 0.0;
    return (0.5 * (2.0 - r - d) + std::sqrt((1.0 - d) * (1.0 - r))) / denom;
}

double twoway_phi_concurrence(double d, double r) {
    const double db = 1.0 - d, rb = 1.0 - r;
    const double denom = rb * rb * (1.0 + d) * (1.0 + d) + db * db;
    if (denom <= 0.0) return 0.0;
    return std::max(0.0, 2.0 * rb * (db - d * rb) / denom);
}

double twoway_phi_branch_prob(double d, double r) {
    const double db = 1.0 - d, rb = 1.0 - r;
    const double p = bell_reversal_success(d, r);
    if (p <= 0.0) return 0.0;
    return (rb * rb * (1.0 + d) * (1.0 + d) + db * db) / (8.0 * p * p);
}

double twoway_psi_concurrence(double d) { return 1.0 / (1.0 + d); }

double twoway_psi_branch_prob(double d, double r) {
    const double db = 1.0 - d, rb = 1.0 - r;
    const double p = bell_reversal_success(d, r);
    if (p <= 0.0) return 0.0;
    return db * rb * (1.0 + d) / (4.0 * p * p);
}

double oneway_phi_concurrence(double d, double r) {
    const double db = 1.0 - d, rb = 1.0 - r;
    const double denom = rb * rb * (1.0 + d) + d * db * rb + db * db;
    if (denom <= 0.0) return 0.0;
    return 2.0 * db * rb / denom;
}

double oneway_phi_branch_prob(double d, double r) {
    const double db = 1.0 - d, rb = 1.0 - r;
    const double p = bell_reversal_success(d, r);
    if (p <= 0.0) return 0.0;
    return (rb * rb * (1.0 + d) + d * db * rb + db * db) / (8.0 * p * p);
}

double oneway_psi_concurrence(double d, double r) {
    const double db = 1.0 - d, rb = 1.0 - r;
    const double denom = d * (1.0 + d) * rb + db * (2.0 + d);
    if (denom <= 0.0) return 0.0;
    return 2.0 * std::max(0.0, (db - d * std::sqrt(db * rb)) / denom);
}

double oneway_psi_branch_prob(double d, double r) {
    const double db = 1.0 - d, rb = 1.0 - r;
    const double p = bell_reversal_success(d, r);
    if (p <= 0.0) return 0.0;
    return (d * (1.0 + d) * rb * rb + db * rb * (2.0 + d)) / (8.0 * p * p);
}

SinglePairOptimum optimal_r_single(double d) {
    require_unit_interval(d, "damping strength");
    return SinglePairOptimum{2.0 * d / (1.0 + d), 1.0 / std::sqrt(1.0 + d), 1.0 - d};
}

double fidelity_optimal_r(double d) {
    require_unit_interval(d, "damping strength");
    return d * (3.0 + d) / ((1.0 + d) * (1.0 + d));
}

RepeaterOptimum optimal_r_twoway_phi(double d) {
    require_unit_interval(d, "damping strength");
    if (d == 1.0) {
        // Limit values; the reversal never succeeds so the cost diverges.
        const double s5 = std::sqrt(5.0);
        return RepeaterOptimum{1.0, (s5 - 1.0) / 4.0, 0.0, (5.0 - 2.0 * s5) / 2.0, kInf};
    }
    const double root = std::sqrt(1.0 + 2.0 * d + 2.0 * d * d);
    const double one_plus_sq = (1.0 + d) * (1.0 + d);
    const double rb = (1.0 - d) / one_plus_sq * (root - d);
    const double c = (root - d) / one_plus_sq;
    const double p = (1.0 - d) / (2.0 * (1.0 + d)) * (1.0 + root);
    const double b = (one_plus_sq * rb * rb + (1.0 - d) * (1.0 - d)) / (8.0 * p * p);
    return RepeaterOptimum{1.0 - rb, c, p, b, cost_from(p, b)};
}

RepeaterOptimum optimal_r_oneway_phi(double d) {
    require_unit_interval(d, "damping strength");
    if (d == 1.0) {
        const double s2 = std::sqrt(2.0);
        return RepeaterOptimum{1.0, 2.0 / (1.0 + 2.0 * s2), 0.0, (8.0 - 5.0 * s2) / 4.0,
                               kInf};
    }
    const double rb = (1.0 - d) / std::sqrt(1.0 + d);
    const double c = 2.0 / (d + 2.0 * std::sqrt(1.0 + d));
    const double p = 0.5 * (1.0 - d) * (1.0 + std::sqrt(1.0 + d));
    const double b = ((1.0 + d) * rb * rb + d * (1.0 - d) * rb + (1.0 - d) * (1.0 - d)) /
                     (8.0 * p * p);
    return RepeaterOptimum{1.0 - rb, c, p, b, cost_from(p, b)};
}

RecoveryReport oneway_psi_report(double d, double r) {
    require_unit_interval(d, "damping strength");
    require_unit_interval(r, "reversing strength");
    const double p = bell_reversal_success(d, r);
    const double b = oneway_psi_branch_prob(d, r);
    return RecoveryReport{Scenario::OneWay, OutcomePolicy::PsiOnly, d, r,
                          oneway_psi_concurrence(d, r), p, b, cost_from(p, b)};
}

RecoveryReport average_yield(RepeaterModel model, double d, std::optional<double> r) {
    require_unit_interval(d, "damping strength");
    const bool twoway = model == RepeaterModel::TwoWay;
    const double r_used = r.value_or(
        twoway ? optimal_r_twoway_phi(d).r_opt : optimal_r_oneway_phi(d).r_opt);
    require_unit_interval(r_used, "reversing strength");

    const double p = bell_reversal_success(d, r_used);
    double c_ave;
    if (twoway) {
        const double b_phi = twoway_phi_branch_prob(d, r_used);
        c_ave = 2.0 * b_phi * twoway_phi_concurrence(d, r_used) +
                (1.0 - 2.0 * b_phi) * twoway_psi_concurrence(d);
    } else {
        c_ave = 2.0 * oneway_phi_branch_prob(d, r_used) * oneway_phi_concurrence(d, r_used) +
                2.0 * oneway_psi_branch_prob(d, r_used) * oneway_psi_concurrence(d, r_used);
    }
    // No postselection: every heralded-success trial is kept, which matches
    // Q = 1/(P*B) with an accounting branch weight of one half.
    const double b = 0.5;
    return RecoveryReport{twoway ? Scenario::TwoWay : Scenario::OneWay,
                          OutcomePolicy::KeepAll, d, r_used, c_ave, p, b, cost_from(p, b)};
}

RecoveryReport recovery_report(Scenario model, OutcomePolicy policy, double d,
                               std::optional<double> r) {
    require_unit_interval(d, "damping strength");
    if (model == Scenario::SinglePair) {
        if (!r) {
            // Closed-form optimum; also covers D = 1 where the curve itself
            // degenerates to 0/0.
            const SinglePairOptimum opt = optimal_r_single(d);
            return RecoveryReport{model, policy, d, opt.r_opt, opt.c_max,
                                  opt.p_opt, 1.0, cost_from(opt.p_opt, 1.0)};
        }
        require_unit_interval(*r, "reversing strength");
        const double p = bell_reversal_success(d, *r);
        return RecoveryReport{model, policy, d, *r, single_pair_concurrence(d, *r),
                              p, 1.0, cost_from(p, 1.0)};
    }
    if (policy == OutcomePolicy::KeepAll) {
        return average_yield(
            model == Scenario::TwoWay ? RepeaterModel::TwoWay : RepeaterModel::OneWay, d, r);
    }
    if (model == Scenario::TwoWay) {
        if (policy == OutcomePolicy::PhiOnly) {
            if (!r) {
                const RepeaterOptimum opt = optimal_r_twoway_phi(d);
                return RecoveryReport{model, policy, d, opt.r_opt, opt.c_max,
                                      opt.p_opt, opt.b_opt, opt.q_opt};
            }
            require_unit_interval(*r, "reversing strength");
            const double p = bell_reversal_success(d, *r);
            const double b = twoway_phi_branch_prob(d, *r);
            return RecoveryReport{model, policy, d, *r, twoway_phi_concurrence(d, *r),
                                  p, b, cost_from(p, b)};
        }
        // Psi branch: R-independent concurrence, so reversal is pointless;
        // default to R = 0 where the trial succeeds unconditionally.
        const double r_used = r.value_or(0.0);
        require_unit_interval(r_used, "reversing strength");
        const double p = bell_reversal_success(d, r_used);
        const double b = twoway_psi_branch_prob(d, r_used);
        return RecoveryReport{model, policy, d, r_used, twoway_psi_concurrence(d),
                              p, b, cost_from(p, b)};
    }
    // One-way model.
    if (policy == OutcomePolicy::PhiOnly) {
        if (!r) {
            const RepeaterOptimum opt = optimal_r_oneway_phi(d);
            return RecoveryReport{model, policy, d, opt.r_opt, opt.c_max,
                                  opt.p_opt, opt.b_opt, opt.q_opt};
        }
        require_unit_interval(*r, "reversing strength");
        const double p = bell_reversal_success(d, *r);
        const double b = oneway_phi_branch_prob(d, *r);
        return RecoveryReport{model, policy, d, *r, oneway_phi_concurrence(d, *r),
                              p, b, cost_from(p, b)};
    }
    // Psi branch: the supremum sits at R = 1 with divergent cost, so an
    // omitted strength resolves to that limit.
    if (!r) {
        return RecoveryReport{model, policy, d, 1.0, 2.0 / (2.0 + d),
                              bell_reversal_success(d, 1.0), 0.0, kInf};
    }
    return oneway_psi_report(d, *r);
}

double unrecovered_concurrence(Scenario model, OutcomePolicy policy, double d) {
    require_unit_interval(d, "damping strength");
    switch (model) {
        case Scenario::SinglePair:
            return single_pair_concurrence_unrecovered(d);
        case Scenario::TwoWay:
            if (policy == OutcomePolicy::PhiOnly) return twoway_phi_concurrence(d, 0.0);
            if (policy == OutcomePolicy::PsiOnly) return twoway_psi_concurrence(d);
            return 2.0 * twoway_phi_branch_prob(d, 0.0) * twoway_phi_concurrence(d, 0.0) +
                   2.0 * twoway_psi_branch_prob(d, 0.0) * twoway_psi_concurrence(d);
        case Scenario::OneWay:
            if (policy == OutcomePolicy::PhiOnly) return oneway_phi_concurrence(d, 0.0);
            if (policy == OutcomePolicy::PsiOnly) return oneway_psi_concurrence(d, 0.0);
            return 2.0 * oneway_phi_branch_prob(d, 0.0) * oneway_phi_concurrence(d, 0.0) +
                   2.0 * oneway_psi_branch_prob(d, 0.0) * oneway_psi_concurrence(d, 0.0);
    }
    throw ArgumentError("unrecovered_concurrence: unknown model");
}

MaximumPoint maximize_concurrence_numeric(const std::function<double(double)>& curve) {
    auto eval = [&](double x) {
        const double y = curve(x);
        if (!std::isfinite(y)) {
            throw ArgumentError("maximize_concurrence_numeric: non-finite curve value");
        }
        return y;
    };

    // Coarse scan locates the bracket; clamped regions are flat at zero, so
    // the scan also skips past any shoulder before refinement starts.
    constexpr int kScan = 64;
    double best_x = 0.0, best_y = eval(0.0);
    for (int i = 1; i <= kScan; ++i) {
        const double x = static_cast<double>(i) / kScan;
        const double y = eval(x);
        if (y > best_y) {
            best_y = y;
            best_x = x;
        }
    }
    double lo = std::max(0.0, best_x - 1.0 / kScan);
    double hi = std::min(1.0, best_x + 1.0 / kScan);

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (hi - lo > 1e-9) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = eval(x1);
        }
    }
    const double x_star = 0.5 * (lo + hi);
    return MaximumPoint{x_star, eval(x_star)};
}

}  // namespace entrev
