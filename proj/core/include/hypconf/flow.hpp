#pragma once

// Prescribing vertex curvature by a conformal factor: the curvature map with
// surgery, its Hessian, Newton's method and the Yamabe flow.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hypconf/metric.hpp"
#include "hypconf/teich.hpp"

namespace hypconf {

// Throws InvalidTarget unless every entry is below 2 pi and the sum exceeds
// 2 pi chi.
void validate_target(const Triangulation& t, const std::vector<double>& target);

// State of a conformal deformation of a fixed Delaunay base: the factor u,
// the current decorated Delaunay triangulation and its lambda-lengths, and
// every flip performed since the base.
struct ConformalState {
    std::vector<double> u;
    LambdaMetric lambda;
    std::vector<FlipMove> flips;

    PolyhedralMetric metric() const { return theta_inv(lambda); }
};

ConformalState initial_state(const PolyhedralMetric& delaunay_base);
// The state at `u`, reached from `from` by scaling and Ptolemy surgery.
ConformalState advance(const ConformalState& from, const std::vector<double>& u,
                       double eps = kDelaunayEpsilon);

struct CurvatureMapResult {
    std::vector<double> curvature;
    PolyhedralMetric metric;
    std::vector<FlipMove> flips;
};

// F(u): curvature of the conformal image of `base` under u.
CurvatureMapResult curvature_map(const PolyhedralMetric& base, const std::vector<double>& u,
                                 double eps = kDelaunayEpsilon);

// dK_i / du_j on the metric's own triangulation.
Eigen::MatrixXd curvature_jacobian(const PolyhedralMetric& m);

struct HessianResult {
    Eigen::MatrixXd matrix;
    // The state actually differentiated; it differs from the input only by
    // switches of near-cyclic edges.
    ConformalState state;
    int nudges = 0;
};

// Hessian of the energy at a state; near-cyclic edges are first flipped to
// whichever side is more strictly Delaunay.
HessianResult hessian(const ConformalState& state, double eps = kDelaunayEpsilon);
Eigen::MatrixXd hessian(const PolyhedralMetric& base, const std::vector<double>& u,
                        double eps = kDelaunayEpsilon);

struct NewtonConfig {
    double tol = 1e-10;
    int max_iter = 100;
    double eps = kDelaunayEpsilon;
    double max_step = 1.0;
    std::optional<std::vector<double>> initial_u;
};

struct SolveReport {
    bool converged = false;
    PolyhedralMetric metric;
    std::vector<double> u{};
    int iterations = 0;
    std::vector<double> residual_history{};
    // Per accepted step, parallel to residual_history.
    std::vector<int> flips_per_step{};
    std::vector<double> area_history{};
    std::vector<FlipMove> flips{};
    // Newton: max r_{k+1} / r_k^2 over the terminal iterations.
    double quadratic_constant = 0.0;
    // Flow: slope and quality of the fit of log residual against time.
    double decay_rate = 0.0;
    double decay_r2 = 0.0;
    std::string diagnostic{};
    // Vertices whose curvature approaches 2 pi and edges whose length
    // collapses when the solve fails.
    std::vector<int> degenerating_vertices{};
    std::vector<int> collapsing_edges{};
};

SolveReport newton_solve(const PolyhedralMetric& base, const std::vector<double>& target,
                         const NewtonConfig& cfg = {});

struct FlowConfig {
    double tol = 1e-10;
    double t_max = 1e3;
    double dt0 = 0.01;
    double rtol = 0.05;
    double min_dt = 1e-12;
    int max_steps = 200000;
    double eps = kDelaunayEpsilon;
    std::optional<std::vector<double>> initial_u;
};

struct SurgeryEvent {
    int step = 0;
    double t = 0.0;
    int flips = 0;
    // |F| difference between the two charts at the first wall crossed.
    double residual_jump = 0.0;
};

struct FlowTraceRow {
    int step = 0;
    double t = 0.0;
    double residual_inf = 0.0;
    int flips_this_step = 0;
    double area = 0.0;
};

struct FlowTrace {
    std::vector<FlowTraceRow> rows;
    std::vector<SurgeryEvent> surgeries;
    // W* along the path, by trapezoidal quadrature.
    std::vector<double> energy;
    bool energy_monotone = true;
};

struct FlowResult {
    SolveReport report;
    FlowTrace trace;
};

FlowResult yamabe_flow(const PolyhedralMetric& base, const std::vector<double>& target,
                       const FlowConfig& cfg = {});

// Newton with a zero target; requires negative Euler characteristic.
SolveReport uniformize(const PolyhedralMetric& base, const NewtonConfig& cfg = {});

}  // namespace hypconf
