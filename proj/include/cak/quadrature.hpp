#ifndef CAK_QUADRATURE_HPP
#define CAK_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace cak {

inline constexpr int kMaxGridDim = 8;

struct Quadrature1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Weight e^{-t^2} on the real line; weights sum to sqrt(pi).
Quadrature1D gaussHermite(int n);
/// [-1, 1], weights sum to 2.
Quadrature1D gaussLegendre(int n);
/// Weight u^alpha e^{-u} on the half line, alpha > -1; weights sum to Gamma(alpha+1).
Quadrature1D gaussLaguerre(int n, double alpha);

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
Quadrature1D legendrePanels(double a, double b, int panels, int pointsPerPanel);
/// Same with panel boundaries graded quadratically toward `a` (integrands
/// vanishing like (t-a)^p at the left end).
Quadrature1D legendrePanelsGraded(double a, double b, int panels, int pointsPerPanel);

enum class GridScheme { GaussHermiteTensor, GaussLegendrePanels, HalfLineGeneralizedLaguerre };

/// N-dimensional quadrature grid; nodes stored flat with stride n.
struct QuadratureGrid {
    GridScheme scheme = GridScheme::GaussHermiteTensor;
    int n = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    bool wedgeFiltered = false;  // nodes satisfy x_1 < ... < x_N
    double truncationRadius = 0.0;

    std::size_t size() const { return weights.size(); }
    const double* node(std::size_t k) const { return nodes.data() + k * n; }
};

/// Full-space tensor rule for the weight e^{-rate [x^2]}. Per-dimension node
/// counts are consecutive Hermite orders, whose roots interlace, so no two
/// dimensions share a node and tensor points never tie (wedge filtering is
/// then unambiguous). Weights include the Gaussian factor.
QuadratureGrid gaussHermiteTensor(int n, int basePoints, double rate, bool wedgeFilter);

/// Wedge-adapted panel rule: base coordinate u in [-R, R] and positive gaps,
/// mapped by the unit-Jacobian shear x_k = u + g_2 + ... + g_k. Every node
/// satisfies the wedge ordering strictly. Weights do NOT include the Gaussian.
QuadratureGrid wedgePanelGrid(int n, double baseRadius, int basePanels, int pointsPerPanel,
                              double gapRadius, int gapPanels);

/// Number of worker threads (CAK_THREADS env var, else hardware concurrency).
int workerThreadCount();

/// Deterministic parallel reduction: fixed-size chunks summed independently,
/// then combined in a fixed pairwise tree; the result is bit-identical for
/// every thread count.
std::complex<double> reduceSum(std::size_t count,
                               const std::function<std::complex<double>(std::size_t)>& term);

struct WedgeIntegralResult {
    std::complex<double> value;     // wedge-adapted estimate (strategy A)
    std::complex<double> valueA;    // wedge-coordinate panels
    std::complex<double> valueB;    // full-space symmetrized / N!
    double agreement = 0.0;         // |A - B| / max(|A|, |B|)
    bool pass = false;              // agreement within 10 x tol
    std::size_t nodesA = 0, nodesB = 0;
    bool retried = false;
};

struct WedgeOptions {
    double tol = 1e-8;
    int ghPoints = 40;        // base Hermite order for strategy B
    double boxRadius = 7.0;   // base-coordinate half width for strategy A
    int basePanels = 14;
    int panelPoints = 10;
    double gapRadius = 8.0;
    int gapPanels = 8;
    bool allowRetry = true;   // one retry at doubled resolution on disagreement
};

/// Integral over the wedge x_1 < ... < x_N of smooth(x) e^{-rate [x^2]} where
/// the full integrand (smooth included) is exchange-symmetric. Two independent
/// strategies evaluated and compared; strategy A is the returned value.
WedgeIntegralResult wedgeIntegrate(int n, double rate,
                                   const std::function<std::complex<double>(const double*)>& smooth,
                                   const WedgeOptions& opts = {});

}  // namespace cak

#endif
