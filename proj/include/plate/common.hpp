#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace plate {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Edge condition on the strip boundary y ∈ {0,1}.
enum class Bc { SimplySupported, Clamped };

inline const char* to_string(Bc bc) {
    return bc == Bc::SimplySupported ? "simply" : "clamped";
}

// ---------------------------------------------------------------------------
// Error types. Numerical failures are surfaced, never silently regularized.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ThresholdWavenumber : Error {
    explicit ThresholdWavenumber(double k)
        : Error("wavenumber k=" + std::to_string(k) +
                " is within tolerance of a threshold") {}
};
struct NotAnEigenvalue : Error { using Error::Error; };
struct NearSingularSymbol : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct BracketFailure : Error { using Error::Error; };
struct ContourThroughZero : Error { using Error::Error; };
struct Inconclusive : Error { using Error::Error; };
struct EigenvalueNearContour : Error { using Error::Error; };
struct MultiplicityTwo : Error { using Error::Error; };
struct CutoffOverlapsHole : Error { using Error::Error; };
struct NotPropagating : Error { using Error::Error; };
struct ContinuationLost : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Complex square root on the fixed branch: z = ρe^{iν}, ν ∈ [0,2π),
// √z = √ρ e^{iν/2}, so Im √z ≥ 0 always.
// ---------------------------------------------------------------------------
Complex branch_sqrt(Complex z);

/// sin(z)/z, entire; series for small |z|.
Complex sinc(Complex z);

/// (1-cos z)/z^2, entire; series for small |z|.
Complex cosm1_over_z2(Complex z);

// ---------------------------------------------------------------------------
// Smoothstep with n vanishing derivatives at both ends (degree 2n+1).
// n = 4 gives the degree-9 polynomial used for the cut-off families ζ, χ^±.
// ---------------------------------------------------------------------------
double smoothstep(int n, double t, int deriv = 0);

/// C^4 degree-9 smoothstep.
inline double smoothstep9(double t, int deriv = 0) {
    return smoothstep(4, t, deriv);
}

/// Ramp r(x) = smoothstep((x-x0)/w): 0 for x<=x0, 1 for x>=x0+w.
double ramp(double x, double x0, double w, int deriv = 0, int order = 4);

/// Worker cap for parallel loops: hardware concurrency clipped by the
/// PLATE_THREADS environment variable.
int worker_count();

}  // namespace plate
