#pragma once

// Bell-input closed forms for recovered concurrence, branch probabilities,
// optimal reversing strengths and Bell-pair cost accounting, plus an
// independent derivative-free maximizer used to cross-check every optimum.
//
// Cost bookkeeping: a heralded-success trial consumes two pairs, each
// retried until its reversal succeeds (expected 1/P pairs per reversed
// pair), and a +/- outcome pair counts as one usable result after a local
// phase correction.  That makes Q = 1/(P*B) with B the probability of a
// single BSM outcome.  Divergent costs are reported as +infinity, never as
// an error, so parameter sweeps stay rectangular.

#include <functional>
#include <optional>

#include "entrev/swap.hpp"

namespace entrev {

enum class Scenario { SinglePair, TwoWay, OneWay };
enum class OutcomePolicy { PhiOnly, PsiOnly, KeepAll };

// ---- Bell-input closed forms (all strengths dimensionless in [0, 1]) ----

// Per-pair reversal success probability 1 - R(1+D)/2.
double bell_reversal_success(double d, double r);

double single_pair_concurrence_unrecovered(double d);       // sqrt(1-D)
double single_pair_concurrence(double d, double r);
double single_pair_fidelity(double d, double r);

double twoway_phi_concurrence(double d, double r);           // clamped at 0
double twoway_phi_branch_prob(double d, double r);
double twoway_psi_concurrence(double d);                     // R-independent
double twoway_psi_branch_prob(double d, double r);

double oneway_phi_concurrence(double d, double r);
double oneway_phi_branch_prob(double d, double r);
double oneway_psi_concurrence(double d, double r);           // clamped at 0
double oneway_psi_branch_prob(double d, double r);

// ---- Optima ----

struct SinglePairOptimum {
    double r_opt;   // 2D/(1+D)
    double c_max;   // 1/sqrt(1+D)
    double p_opt;   // 1-D
};
SinglePairOptimum optimal_r_single(double d);

// Reversing strength maximizing the Bell fidelity, D(3+D)/(1+D)^2; always
// at least the concurrence-optimal strength.
double fidelity_optimal_r(double d);

struct RepeaterOptimum {
    double r_opt;
    double c_max;
    double p_opt;   // per-pair reversal success at r_opt
    double b_opt;   // single-outcome BSM probability at r_opt
    double q_opt;   // 1/(p_opt*b_opt); +infinity at D = 1
};
RepeaterOptimum optimal_r_twoway_phi(double d);
RepeaterOptimum optimal_r_oneway_phi(double d);

// ---- Reports ----

struct RecoveryReport {
    Scenario model;
    OutcomePolicy policy;
    double damping;
    double reversing;
    double concurrence;
    double reversal_success_prob;  // P, per pair
    double branch_prob;            // B, per heralded-success trial
    double bell_pair_cost;         // Q; +infinity when divergent
};

// One-way Psi-branch report at explicit strength; cost diverges at R = 1
// where the recovered concurrence tops out at 2/(2+D).
RecoveryReport oneway_psi_report(double d, double r);

// Keep-all strategy: no postselection on the BSM outcome; concurrence is the
// branch-probability-weighted average and the cost is 2/P.  Omitting r picks
// the model's Phi-optimal strength.
RecoveryReport average_yield(RepeaterModel model, double d,
                             std::optional<double> r = std::nullopt);

// Unified entry point used by the CLI: report for (scenario, policy) at a
// given strength, or at the scenario's optimal strength when r is omitted.
RecoveryReport recovery_report(Scenario model, OutcomePolicy policy, double d,
                               std::optional<double> r = std::nullopt);

// Unrecovered (R = 0) concurrence for the same selection.
double unrecovered_concurrence(Scenario model, OutcomePolicy policy, double d);

// ---- Numeric maximizer ----

struct MaximumPoint {
    double r_star;
    double c_star;
};

// Coarse bracket scan followed by golden-section refinement to interval
// width 1e-9; assumes the curve is unimodal up to flat clamped-at-zero
// shoulders.  Non-finite curve values raise ArgumentError.
MaximumPoint maximize_concurrence_numeric(const std::function<double(double)>& curve);

}  // namespace entrev
