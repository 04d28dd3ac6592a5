#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "viscoshock/lagrangian_solver.hpp"

namespace viscoshock {

/// Perturbation of a solver state around the translated profile and its antiderivatives.
/// phi lives on cells, psi / Phi / Psi on interfaces; Phi(0) = Psi(0) = 0.
struct PerturbationFields {
    Eigen::VectorXd phi;
    Eigen::VectorXd psi;
    Eigen::VectorXd Phi;
    Eigen::VectorXd Psi;
    double tau = 0.0;
    double dy = 0.0;
};

PerturbationFields perturbation(const SolverState& state, const ViscousProfile& profile);

/// Discrete L2, H1, H2 norms (not squared) of a uniformly sampled field.
struct SobolevNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

/// Trapezoidal quadrature, centered differences inside, second-order one-sided stencils at the ends.
SobolevNorms sobolev_norms(const Eigen::VectorXd& f, double dy);
Eigen::VectorXd first_difference(const Eigen::VectorXd& f, double dy);
Eigen::VectorXd second_difference(const Eigen::VectorXd& f, double dy);
double trapezoid(const Eigen::VectorXd& f, double dy);

struct PairNorms {
    SobolevNorms Phi;
    SobolevNorms Psi;
};

PairNorms sobolev_norms(const PerturbationFields& fields);

/// Nonlinear remainder of the linearized antiderivative system and its pointwise majorant
/// Phi_y^2 + |Phi_y Psi_yy| + |Phi_y U~_y|, on interior interfaces.
struct QField {
    Eigen::VectorXd Q;
    Eigen::VectorXd majorant;
    double q_max = 0.0;
    double ratio_max = 0.0; // sup |Q| / majorant, the observed constant
    double margin = 0.0;    // max (|Q| - majorant)
};

QField q_field(const SolverState& state, const ViscousProfile& profile);

struct EnergyRow {
    double tau = 0.0;
    double N = 0.0;             // running max of ||(Phi, Psi)||_{H2}^2
    double l2 = 0.0;            // ||(Phi, Psi)||^2
    double h1 = 0.0;            // ||(Phi, Psi)||_{H1}^2
    double h2 = 0.0;            // ||(Phi, Psi)||_{H2}^2
    double diss_weighted = 0.0; // int_0^tau int |U~_y| Psi^2
    double diss_phi = 0.0;      // int_0^tau ||Phi_y||_{H1}^2
    double diss_psi = 0.0;      // int_0^tau ||Psi_y||_{H2}^2
    double grad_norm = 0.0;     // ||(Phi_y, Psi_y)||^2
    double q_max = 0.0;
    double q_margin = 0.0;
    double sup_grad = 0.0;      // sup_y |(Phi_y, Psi_y)|
};

/// Time-integration state for the dissipation integrals (trapezoidal in tau).
struct EnergyAccumulators {
    bool started = false;
    double tau = 0.0;
    double N = 0.0;
    double weighted = 0.0, phi = 0.0, psi = 0.0;
    double last_weighted = 0.0, last_phi = 0.0, last_psi = 0.0;
};

EnergyRow energy_snapshot(const SolverState& state, const ViscousProfile& profile, EnergyAccumulators& acc);

struct EnergyReport {
    std::vector<EnergyRow> rows;
    double q_ratio_max = 0.0;

    static const std::vector<std::string>& columns();
    std::vector<std::vector<double>> table() const;
};

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct DecayOptions {
    double tau_min = 1.0;   // minimum time span covered by the report
    double fraction = 0.1;  // final gradient norm relative to its maximum
};

struct DecayVerdict {
    Verdict verdict = Verdict::inconclusive;
    bool eventually_decreasing = false;
    double final_ratio = 0.0;     // grad_norm(end) / max grad_norm
    double sup_final_ratio = 0.0; // sup_grad(end) / max sup_grad
    std::string detail;
};

/// Gradient norm must be non-increasing over the second half of the span, end below
/// fraction * max, and the sup norm must follow at sqrt(fraction).
DecayVerdict longtime_decay_check(const EnergyReport& report, const DecayOptions& opt = {});

/// sup |f| / (||f||^(1/2) ||f_y||^(1/2)); at most 1 for smooth decaying f on the line.
double interpolation_ratio(const Eigen::VectorXd& f, double dy);

} // namespace viscoshock
