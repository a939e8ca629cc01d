#include "cak/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace cak {

namespace {

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
/// mu0 times the squared first eigenvector components. Implicit-shift QL on
/// the symmetric tridiagonal (d, e) carrying the first-row vector z.
void tridiagEigen(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    int n = static_cast<int>(d.size());
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-15 * dd) break;
            }
            if (m == l) break;
            if (++iter > 60) throw std::runtime_error("tridiagEigen: no convergence");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (r == 0.0 && m - 1 >= l) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    // sort ascending, carrying z
    std::vector<int> idx(n);
    for (int k = 0; k < n; ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&d](int a, int b) { return d[a] < d[b]; });
    std::vector<double> ds(n), zs(n);
    for (int k = 0; k < n; ++k) {
        ds[k] = d[idx[k]];
        zs[k] = z[idx[k]];
    }
    d = std::move(ds);
    z = std::move(zs);
}

Quadrature1D golubWelsch(std::vector<double> diag, std::vector<double> off, double mu0) {
    int n = static_cast<int>(diag.size());
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    tridiagEigen(diag, off, z);
    Quadrature1D q;
    q.nodes = std::move(diag);
    q.weights.resize(n);
    for (int k = 0; k < n; ++k) q.weights[k] = mu0 * z[k] * z[k];
    return q;
}

}  // namespace

Quadrature1D gaussHermite(int n) {
    if (n < 1) throw std::invalid_argument("gaussHermite: n >= 1");
    std::vector<double> d(n, 0.0), e(n - 1);
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(0.5 * k);
    return golubWelsch(std::move(d), std::move(e), std::sqrt(M_PI));
}

Quadrature1D gaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("gaussLegendre: n >= 1");
    std::vector<double> d(n, 0.0), e(n - 1);
    for (int k = 1; k < n; ++k) e[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return golubWelsch(std::move(d), std::move(e), 2.0);
}

Quadrature1D gaussLaguerre(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("gaussLaguerre: n >= 1");
    if (alpha <= -1.0) throw std::invalid_argument("gaussLaguerre: alpha > -1 required");
    std::vector<double> d(n), e(n - 1);
    for (int k = 0; k < n; ++k) d[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k * (k + alpha));
    return golubWelsch(std::move(d), std::move(e), std::tgamma(alpha + 1.0));
}

namespace {

Quadrature1D panelsFromBoundaries(const std::vector<double>& bounds, int pointsPerPanel) {
    Quadrature1D base = gaussLegendre(pointsPerPanel);
    Quadrature1D out;
    for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
        double a = bounds[p], b = bounds[p + 1];
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int k = 0; k < pointsPerPanel; ++k) {
            out.nodes.push_back(mid + half * base.nodes[k]);
            out.weights.push_back(half * base.weights[k]);
        }
    }
    return out;
}

}  // namespace

Quadrature1D legendrePanels(double a, double b, int panels, int pointsPerPanel) {
    std::vector<double> bounds;
    for (int p = 0; p <= panels; ++p) bounds.push_back(a + (b - a) * p / panels);
    return panelsFromBoundaries(bounds, pointsPerPanel);
}

Quadrature1D legendrePanelsGraded(double a, double b, int panels, int pointsPerPanel) {
    std::vector<double> bounds;
    for (int p = 0; p <= panels; ++p) {
        double t = static_cast<double>(p) / panels;
        bounds.push_back(a + (b - a) * t * t);
    }
    return panelsFromBoundaries(bounds, pointsPerPanel);
}

QuadratureGrid gaussHermiteTensor(int n, int basePoints, double rate, bool wedgeFilter) {
    if (rate <= 0) throw std::invalid_argument("gaussHermiteTensor: rate > 0");
    std::vector<Quadrature1D> rules;
    double scale = 1.0 / std::sqrt(rate);
    for (int dim = 0; dim < n; ++dim) {
        Quadrature1D q = gaussHermite(basePoints + dim);  // consecutive orders: roots interlace
        for (auto& t : q.nodes) t *= scale;
        for (auto& w : q.weights) w *= scale;
        rules.push_back(std::move(q));
    }
    QuadratureGrid grid;
    grid.scheme = GridScheme::GaussHermiteTensor;
    grid.n = n;
    grid.wedgeFiltered = wedgeFilter;
    grid.truncationRadius = rules.back().nodes.back();

    std::vector<std::size_t> counter(n, 0);
    std::vector<double> point(n);
    while (true) {
        double w = 1.0;
        for (int d = 0; d < n; ++d) {
            point[d] = rules[d].nodes[counter[d]];
            w *= rules[d].weights[counter[d]];
        }
        bool keep = true;
        if (wedgeFilter) {
            for (int d = 0; d + 1 < n; ++d)
                if (!(point[d] < point[d + 1])) keep = false;
        }
        if (keep) {
            grid.nodes.insert(grid.nodes.end(), point.begin(), point.end());
            grid.weights.push_back(w);
        }
        int d = 0;
        for (; d < n; ++d) {
            if (++counter[d] < rules[d].nodes.size()) break;
            counter[d] = 0;
        }
        if (d == n) break;
    }
    return grid;
}

QuadratureGrid wedgePanelGrid(int n, double baseRadius, int basePanels, int pointsPerPanel,
                              double gapRadius, int gapPanels) {
    Quadrature1D base = legendrePanels(-baseRadius, baseRadius, basePanels, pointsPerPanel);
    Quadrature1D gap = legendrePanelsGraded(0.0, gapRadius, gapPanels, pointsPerPanel);

    QuadratureGrid grid;
    grid.scheme = GridScheme::GaussLegendrePanels;
    grid.n = n;
    grid.wedgeFiltered = true;
    grid.truncationRadius = baseRadius;

    std::vector<std::size_t> counter(n, 0);
    std::vector<double> point(n);
    while (true) {
        double w = base.weights[counter[0]];
        point[0] = base.nodes[counter[0]];
        for (int d = 1; d < n; ++d) {
            point[d] = point[d - 1] + gap.nodes[counter[d]];
            w *= gap.weights[counter[d]];
        }
        grid.nodes.insert(grid.nodes.end(), point.begin(), point.end());
        grid.weights.push_back(w);
        int d = 0;
        for (; d < n; ++d) {
            std::size_t limit = (d == 0) ? base.nodes.size() : gap.nodes.size();
            if (++counter[d] < limit) break;
            counter[d] = 0;
        }
        if (d == n) break;
    }
    return grid;
}

int workerThreadCount() {
    if (const char* env = std::getenv("CAK_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

std::complex<double> reduceSum(std::size_t count,
                               const std::function<std::complex<double>(std::size_t)>& term) {
    constexpr std::size_t kChunk = 2048;
    std::size_t chunks = (count + kChunk - 1) / kChunk;
    if (chunks == 0) return 0.0;
    std::vector<std::complex<double>> partial(chunks, 0.0);

    int threads = std::min<int>(workerThreadCount(), static_cast<int>(chunks));
    auto work = [&](std::size_t chunkBegin, std::size_t chunkEnd) {
        for (std::size_t c = chunkBegin; c < chunkEnd; ++c) {
            std::complex<double> acc = 0.0;
            std::size_t lo = c * kChunk, hi = std::min(count, lo + kChunk);
            for (std::size_t k = lo; k < hi; ++k) acc += term(k);
            partial[c] = acc;
        }
    };
    if (threads <= 1) {
        work(0, chunks);
    } else {
        std::vector<std::thread> pool;
        std::size_t per = (chunks + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = t * per, hi = std::min(chunks, lo + per);
            if (lo >= hi) break;
            pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    // fixed pairwise tree: result independent of the thread partition
    std::vector<std::complex<double>> level = std::move(partial);
    while (level.size() > 1) {
        std::vector<std::complex<double>> next;
        next.reserve(level.size() / 2 + 1);
        for (std::size_t k = 0; k + 1 < level.size(); k += 2) next.push_back(level[k] + level[k + 1]);
        if (level.size() % 2) next.push_back(level.back());
        level = std::move(next);
    }
    return level[0];
}

namespace {

std::complex<double> integrateGrid(const QuadratureGrid& grid, double rate, bool gaussianInWeight,
                                   const std::function<std::complex<double>(const double*)>& smooth) {
    return reduceSum(grid.size(), [&](std::size_t k) {
        const double* x = grid.node(k);
        std::complex<double> v = smooth(x) * grid.weights[k];
        if (!gaussianInWeight) {
            double s2 = 0.0;
            for (int d = 0; d < grid.n; ++d) s2 += x[d] * x[d];
            v *= std::exp(-rate * s2);
        }
        return v;
    });
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

WedgeIntegralResult wedgeIntegrate(int n, double rate,
                                   const std::function<std::complex<double>(const double*)>& smooth,
                                   const WedgeOptions& opts) {
    // Strategy B integrates the symmetric extension (coordinates sorted into
    // the wedge before evaluation) over the full space and divides by N!.
    // For exchange-symmetric integrands the sort is a mathematical no-op.
    auto symmetrized = [n, &smooth](const double* x) {
        double sorted[kMaxGridDim];
        for (int d = 0; d < n; ++d) sorted[d] = x[d];
        std::sort(sorted, sorted + n);
        return smooth(sorted);
    };

    WedgeIntegralResult r;
    int basePanels = opts.basePanels, panelPoints = opts.panelPoints, gapPanels = opts.gapPanels;
    int ghPoints = opts.ghPoints;
    for (int attempt = 0;; ++attempt) {
        QuadratureGrid a = wedgePanelGrid(n, opts.boxRadius, basePanels, panelPoints, opts.gapRadius,
                                          gapPanels);
        QuadratureGrid b = gaussHermiteTensor(n, ghPoints, rate, /*wedgeFilter=*/false);
        r.valueA = integrateGrid(a, rate, /*gaussianInWeight=*/false, smooth);
        r.valueB = reduceSum(b.size(),
                             [&](std::size_t k) {
                                 return symmetrized(b.node(k)) * b.weights[k];
                             }) /
                   factorial(n);
        r.nodesA = a.size();
        r.nodesB = b.size();
        double scale = std::max({std::abs(r.valueA), std::abs(r.valueB), 1e-300});
        r.agreement = std::abs(r.valueA - r.valueB) / scale;
        r.pass = r.agreement <= 10.0 * opts.tol;
        if (r.pass || !opts.allowRetry || attempt >= 1) break;
        r.retried = true;
        basePanels *= 2;
        gapPanels *= 2;
        ghPoints = ghPoints * 3 / 2;
    }
    r.value = r.valueA;
    return r;
}

}  // namespace cak
