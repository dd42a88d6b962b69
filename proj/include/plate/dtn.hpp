#pragma once

#include <Eigen/Dense>
#include <vector>

#include "plate/common.hpp"

namespace plate::dtn {

/// One 2x2 block T_p of the simply supported Dirichlet-to-Neumann map,
/// acting on per-mode trace coefficients (g_p, h_p) = (u, ∂_n u) projections.
struct DtnBlock {
    int p;
    double mu;      // π²p²
    Complex eta;    // √(k²-π²p²), iβ_p above cutoff
    double gamma;   // √(k²+π²p²)
    Eigen::Matrix2cd T;
};

/// Exact block entries
///   T = [ iγη(γ-iη)   iγη-νμ ]
///       [ iγη-νμ      -(γ-iη) ].
/// Throws ThresholdWavenumber when k ∈ Nπ.
DtnBlock dtn_block(int p, double k, double nu);

/// All blocks p = 1..P_max, precomputed once per (k, ν, P_max).
std::vector<DtnBlock> dtn_blocks(double k, double nu, int p_max);

enum class Side { Left, Right };

struct TraceCoefficients {
    Side side = Side::Right;
    std::vector<Complex> g, h;  // indexed p = 1..P_max
    int p_max() const { return static_cast<int>(g.size()); }
};

/// Per-mode products (N_p, M_p) = T_p (g_p, h_p); both sides use the same
/// blocks.
std::pair<std::vector<Complex>, std::vector<Complex>> apply_dtn(
    const TraceCoefficients& tc, double k, double nu);

/// t(u,u) for a two-sided trace; sum of Σ_p T_p(g_p,h_p)·(conj g_p, conj h_p).
Complex form_t(const TraceCoefficients& left, const TraceCoefficients& right,
               double k, double nu);

/// Decomposition of -Re t(u,u) into propagating terms u_p and evanescent
/// terms v_p for one side (diagnostics for the coercivity estimate).
struct RealPartSplit {
    std::vector<double> u_p;  // p = 1..n (propagating)
    std::vector<double> v_p;  // p = n+1..P_max (evanescent)
};
RealPartSplit split_re_t(const TraceCoefficients& tc, double k, double nu);

/// Number of propagating transverse modes n = ⌊k/π⌋.
int propagating_count(double k);

/// Modal outgoing/decaying amplitudes from traces:
/// (a_p, b_p) = (γ_p + iη_p)^{-1} [[γ_p, 1], [iη_p, -1]] (g_p, h_p).
std::pair<Complex, Complex> invert_trace(int p, double k, Complex g, Complex h);

}  // namespace plate::dtn
