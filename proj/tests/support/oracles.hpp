// Independent reference implementations used as test oracles. They favour
// obviousness over speed and share no code with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "kld/stream.hpp"

namespace kld::oracle {

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            sum += static_cast<long double>(p[i]) *
                   (std::log(static_cast<long double>(p[i])) - std::log(static_cast<long double>(q[i])));
        }
    }
    return static_cast<double>(sum);
}

inline std::vector<double> smooth(std::vector<double> p, double eps) {
    double total = 0.0;
    for (auto& x : p) {
        if (x == 0.0) {
            x = eps;
        }
        total += x;
    }
    for (auto& x : p) {
        x /= total;
    }
    return p;
}

// Cell of x along one axis by scanning the cell edge list.
inline std::size_t edge_scan(double x, double lower, double upper, std::size_t bins) {
    std::vector<double> edges;
    for (std::size_t i = 0; i <= bins; ++i) {
        edges.push_back(lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(bins));
    }
    std::size_t cell = 0;
    for (std::size_t i = 1; i < bins; ++i) {
        if (x >= edges[i]) {
            cell = i;
        }
    }
    return cell;
}

struct Counts {
    // counts[bin][label] and total memberships.
    std::vector<std::vector<std::size_t>> counts;
    std::size_t total = 0;
};

// Double loop over bins x points. Slab bins enumerate axis 0's cells first,
// then axis 1's, and so on; product bins are row-major with the last axis fastest.
inline Counts brute_counts(const Chunk& chunk, const std::vector<Interval>& axes_bounds,
                           const std::vector<std::size_t>& bins, bool product, std::size_t classes) {
    const std::size_t p = axes_bounds.size();
    Counts c;
    if (product) {
        std::size_t J = 1;
        for (auto b : bins) {
            J *= b;
        }
        c.counts.assign(J, std::vector<std::size_t>(classes, 0));
        for (std::size_t j = 0; j < J; ++j) {
            // Decode j into per-axis cells.
            std::vector<std::size_t> cell(p);
            std::size_t rest = j;
            for (std::size_t d = p; d-- > 0;) {
                cell[d] = rest % bins[d];
                rest /= bins[d];
            }
            for (std::size_t k = 0; k < chunk.size(); ++k) {
                const auto pt = chunk.point(k);
                bool inside = true;
                for (std::size_t d = 0; d < p; ++d) {
                    inside = inside && edge_scan(pt.input[d], axes_bounds[d].lower, axes_bounds[d].upper, bins[d]) ==
                                           cell[d];
                }
                if (inside) {
                    ++c.counts[j][pt.label];
                    ++c.total;
                }
            }
        }
        return c;
    }
    for (std::size_t d = 0; d < p; ++d) {
        for (std::size_t b = 0; b < bins[d]; ++b) {
            std::vector<std::size_t> row(classes, 0);
            for (std::size_t k = 0; k < chunk.size(); ++k) {
                const auto pt = chunk.point(k);
                if (edge_scan(pt.input[d], axes_bounds[d].lower, axes_bounds[d].upper, bins[d]) == b) {
                    ++row[pt.label];
                    ++c.total;
                }
            }
            c.counts.push_back(row);
        }
    }
    return c;
}

// Maximum number of (truth, detection) pairs with |t - d| <= tol, each used once.
inline std::size_t optimal_matches(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& det,
                                   std::size_t tol) {
    std::vector<bool> used(truth.size(), false);
    std::function<std::size_t(std::size_t)> go = [&](std::size_t i) -> std::size_t {
        if (i == det.size()) {
            return 0;
        }
        std::size_t best = go(i + 1);
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const auto gap = truth[t] > det[i] ? truth[t] - det[i] : det[i] - truth[t];
            if (!used[t] && gap <= tol) {
                used[t] = true;
                best = std::max(best, 1 + go(i + 1));
                used[t] = false;
            }
        }
        return best;
    };
    return go(0);
}

// Straight transcription of the CUSUM recursion, storing the whole g path.
inline std::vector<std::size_t> cusum(const std::vector<double>& x, double kappa, double h, std::size_t warmup) {
    const double mean0 = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(warmup), 0.0) /
                         static_cast<double>(warmup);
    std::vector<double> g(x.size() + 1, 0.0);
    std::vector<std::size_t> alarms;
    for (std::size_t k = warmup; k < x.size(); ++k) {
        g[k + 1] = std::max(0.0, g[k] + x[k] - mean0 - kappa);
        if (g[k + 1] > h) {
            alarms.push_back(k);
            g[k + 1] = 0.0;
        }
    }
    return alarms;
}

inline std::vector<std::size_t> ewma(const std::vector<double>& x, double lambda, double c, std::size_t warmup) {
    const auto n = static_cast<double>(warmup);
    double mean0 = 0.0;
    for (std::size_t k = 0; k < warmup; ++k) {
        mean0 += x[k] / n;
    }
    double var = 0.0;
    for (std::size_t k = 0; k < warmup; ++k) {
        var += (x[k] - mean0) * (x[k] - mean0) / (n - 1.0);
    }
    const double limit = std::max(c * std::sqrt(var) * std::sqrt(lambda / (2.0 - lambda)), 1e-12);
    std::vector<double> z(x.size(), mean0);
    std::vector<bool> out(x.size(), false);
    std::vector<std::size_t> alarms;
    for (std::size_t k = warmup; k < x.size(); ++k) {
        z[k] = lambda * x[k] + (1.0 - lambda) * z[k - 1];
        out[k] = std::fabs(z[k] - mean0) > limit;
        if (out[k] && !out[k - 1]) {
            alarms.push_back(k);
        }
    }
    return alarms;
}

// LOWESS by definition: sort all neighbours by distance, take the nearest
// `span`, solve the 2x2 weighted normal equations.
inline std::vector<double> lowess(const std::vector<double>& y, double frac, std::size_t iterations) {
    const std::size_t n = y.size();
    std::size_t span = static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n)));
    span = std::min(std::max<std::size_t>(span, 2), n);
    std::vector<double> robust(n, 1.0);
    std::vector<double> fit(n);
    auto pass = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            auto dist = [&](std::size_t j) { return j > i ? j - i : i - j; };
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
            idx.resize(span);
            double h = 0.0;
            for (auto j : idx) {
                h = std::max(h, static_cast<double>(dist(j)));
            }
            long double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
            for (auto j : idx) {
                const double u = static_cast<double>(dist(j)) / h;
                const double w = (u < 1.0 ? std::pow(1.0 - u * u * u, 3) : 0.0) * robust[j];
                const double xj = static_cast<double>(j);
                s0 += w;
                s1 += w * xj;
                s2 += w * xj * xj;
                t0 += w * y[j];
                t1 += w * xj * y[j];
            }
            const long double det = s0 * s2 - s1 * s1;
            const auto xi = static_cast<long double>(i);
            if (std::fabs(static_cast<double>(det)) > 1e-12 * static_cast<double>(s0 * s0) * h * h) {
                const long double b = (s0 * t1 - s1 * t0) / det;
                const long double a = (t0 - b * s1) / s0;
                fit[i] = static_cast<double>(a + b * xi);
            } else {
                fit[i] = static_cast<double>(t0 / s0);
            }
        }
    };
    pass();
    for (std::size_t it = 0; it < iterations; ++it) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = std::fabs(y[i] - fit[i]);
        }
        auto sorted = r;
        std::sort(sorted.begin(), sorted.end());
        const double med = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        if (!(med > 0.0)) {
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double u = r[i] / (6.0 * med);
            robust[i] = u < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
        }
        pass();
    }
    return fit;
}

// Random chunk with features in [-range, range].
inline Chunk random_chunk(std::mt19937_64& rng, std::size_t index, std::size_t K, std::size_t p,
                          std::size_t classes, double range = 5.0) {
    std::uniform_real_distribution<double> x(-range, range);
    std::uniform_int_distribution<Label> y(0, static_cast<Label>(classes - 1));
    std::vector<double> f(K * p);
    std::vector<Label> l(K);
    for (auto& v : f) {
        v = x(rng);
    }
    for (auto& v : l) {
        v = y(rng);
    }
    return Chunk(index, p, std::move(f), std::move(l));
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t L, bool allow_zeros) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(L);
    double total = 0.0;
    for (auto& v : p) {
        v = (allow_zeros && u(rng) < 0.2) ? 0.0 : u(rng);
        total += v;
    }
    if (total == 0.0) {
        p[0] = total = 1.0;
    }
    for (auto& v : p) {
        v /= total;
    }
    return p;
}

}  // namespace kld::oracle
