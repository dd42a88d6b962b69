#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "plate/common.hpp"
#include "plate/fem.hpp"

namespace plate::scattering {

/// Normalized propagating mode w_p^±(x,y) = (2η_p)^{-1/2} e^{±iη_p x} θ_p(y).
struct IncidentMode {
    int p;
    int direction;  // +1 rightgoing, -1 leftgoing
    double k;
};

/// Mode value with derivatives (dx, dy arbitrary orders).
Complex incident_value(const IncidentMode& mode, double x, double y,
                       int dx = 0, int dy = 0);

/// x-only cut-off ζ: 0 on [-x0, x0], C⁴ ramps on ±[x0, x0+w], 1 beyond.
struct CutoffSpec {
    double x0;
    double w;
};

/// ζ and derivatives up to order 4.
double cutoff_zeta(const CutoffSpec& z, double x, int deriv = 0);

/// Lifted volume source f = -(Δ²-k⁴)(ζ u_i); supported in the ζ bands only.
/// Throws CutoffOverlapsHole if the band intersects the hole bounding box,
/// ValidationError if the band does not fit inside (-L, L).
fem::ScalarField2D lifted_source(const IncidentMode& mode, const CutoffSpec& z,
                                 double k, const fem::StripMesh& mesh);

/// Outgoing propagating amplitudes a_p (local frame e^{±iη_p(x∓L)}θ_p) from
/// the traces of an outgoing field on Σ_{±L}.
std::vector<Complex> extract_outgoing(const fem::PlateField& field,
                                      dtn::Side side, double k, int n);

struct ScatteringMatrix {
    int n = 0;                 // propagating modes per direction
    Eigen::MatrixXcd S;        // 2n x 2n, rows: incidences w_p^- then w_p^+
    double unitarity_defect() const;
    double symmetry_defect() const;
    std::vector<double> solve_residuals;  // per incidence
};

struct ScatterOptions {
    double nu = 0.3;
    int p_max = 20;        // DtN truncation
    CutoffSpec zeta{0.0, 0.0};  // zeros: choose automatically
};

/// Assembles the truncated problem once, factorizes once, and solves the 2n
/// lifted-source right-hand sides.
ScatteringMatrix scattering_matrix(double k, const fem::StripMesh& mesh,
                                   const ScatterOptions& opt = {});

}  // namespace plate::scattering
