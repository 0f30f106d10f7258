#include "monotest/lpe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace monotest {

namespace {

// Grid points are snapped to their exact index so that windows and kernel
// arguments are computed from integer offsets.
double centre_in_index_units(std::size_t n, double x) {
    const double c = static_cast<double>(n) * x;
    const double r = std::round(c);
    return std::fabs(c - r) < 1e-9 ? r : c;
}

SupportWindow window_for_centre(std::size_t n, double c, double radius) {
    const double lo = std::floor(c - radius) + 1.0;
    const double hi = std::ceil(c + radius) - 1.0;
    SupportWindow w;
    w.lo = lo < 1.0 ? 1 : static_cast<std::size_t>(lo);
    w.hi = hi > static_cast<double>(n) ? n : (hi < 0.0 ? 0 : static_cast<std::size_t>(hi));
    return w;
}

struct Moments {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;  // sums of K, uK, u^2 K
    double t0 = 0.0, t1 = 0.0;            // sums of K y, uK y
};

Moments moments(std::span<const double> y, std::size_t n, double c, double radius,
                const KernelSpec& kernel, SupportWindow win) {
    Moments m;
    for (std::size_t k = win.lo; k <= win.hi && win.size() > 0; ++k) {
        const double u = (static_cast<double>(k) - c) / radius;
        const double kv = eval_kernel(kernel, u);
        const double uk = u * kv;
        m.s0 += kv;
        m.s1 += uk;
        m.s2 += u * uk;
        if (!y.empty()) {
            m.t0 += kv * y[k - 1];
            m.t1 += uk * y[k - 1];
        }
    }
    (void)n;
    return m;
}

double smallest_eigenvalue(double a, double b, double d) {
    const double mean = 0.5 * (a + d);
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
    return mean - half_gap;
}

[[noreturn]] void throw_degenerate(double x, double h, int order) {
    throw DegenerateDesign("degenerate design: order " + std::to_string(order) + " fit at x=" +
                           std::to_string(x) + " with h=" + std::to_string(h));
}

// Intercept from the moments. Applies the same identifiability rules as
// weights().
double intercept(const Moments& m, double radius, int order, double x, double h) {
    if (m.s0 <= 0.0) throw_degenerate(x, h, order);
    if (order == 0) {
        if (m.s0 / radius < kGramFloor) throw_degenerate(x, h, order);
        return m.t0 / m.s0;
    }
    if (m.s2 == 0.0) return m.t0 / m.s0;
    const double lmin = smallest_eigenvalue(m.s0, m.s1, m.s2) / radius;
    if (!(lmin >= kGramFloor)) throw_degenerate(x, h, order);
    const double det = m.s0 * m.s2 - m.s1 * m.s1;
    return (m.s2 * m.t0 - m.s1 * m.t1) / det;
}

void check_order(int order) {
    if (order != 0 && order != 1) throw std::invalid_argument("order must be 0 or 1");
}

}  // namespace

void validate_bandwidth(std::size_t n, double h) {
    if (n == 0) throw std::invalid_argument("empty design");
    const double lower = 0.5 / static_cast<double>(n);
    if (!(h >= lower * (1.0 - 1e-12) && h <= 0.5 * (1.0 + 1e-12))) {
        throw std::invalid_argument("bandwidth " + std::to_string(h) + " outside [1/(2n), 0.5]");
    }
}

double GramMatrix::min_eigenvalue() const {
    if (order == 0) return b00;
    return smallest_eigenvalue(b00, b01, b11);
}

SupportWindow support_window(std::size_t n, double h, double x) {
    const double radius = static_cast<double>(n) * h;
    return window_for_centre(n, centre_in_index_units(n, x), radius);
}

GramMatrix gram(std::size_t n, double h, int order, const KernelSpec& kernel, double x) {
    check_order(order);
    validate_bandwidth(n, h);
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x outside [0,1]");
    const double radius = static_cast<double>(n) * h;
    const double c = centre_in_index_units(n, x);
    const Moments m = moments({}, n, c, radius, kernel, window_for_centre(n, c, radius));
    GramMatrix g;
    g.order = order;
    g.b00 = m.s0 / radius;
    if (order == 1) {
        g.b01 = m.s1 / radius;
        g.b11 = m.s2 / radius;
    }
    if (!(g.min_eigenvalue() >= kGramFloor)) throw_degenerate(x, h, order);
    return g;
}

WeightVector weights(std::size_t n, double h, int order, const KernelSpec& kernel, double x) {
    check_order(order);
    validate_bandwidth(n, h);
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x outside [0,1]");
    const double radius = static_cast<double>(n) * h;
    const double c = centre_in_index_units(n, x);
    const SupportWindow win = window_for_centre(n, c, radius);
    const Moments m = moments({}, n, c, radius, kernel, win);

    WeightVector out;
    out.x = x;
    out.h = h;
    out.order = order;
    out.first = win.lo;
    out.w.resize(win.size());

    if (m.s0 <= 0.0 || m.s0 / radius < kGramFloor) throw_degenerate(x, h, order);
    const bool intercept_only = order == 0 || m.s2 == 0.0;
    double det = 0.0;
    if (!intercept_only) {
        if (!(smallest_eigenvalue(m.s0, m.s1, m.s2) / radius >= kGramFloor)) {
            throw_degenerate(x, h, order);
        }
        det = m.s0 * m.s2 - m.s1 * m.s1;
    }
    for (std::size_t k = win.lo; k <= win.hi && win.size() > 0; ++k) {
        const double u = (static_cast<double>(k) - c) / radius;
        const double kv = eval_kernel(kernel, u);
        out.w[k - win.lo] = intercept_only ? kv / m.s0 : (m.s2 - m.s1 * u) * kv / det;
    }
    return out;
}

WeightVector weights_at_index(std::size_t n, double h, int order, const KernelSpec& kernel,
                              std::size_t i) {
    if (i < 1 || i > n) throw std::invalid_argument("index outside [1, n]");
    return weights(n, h, order, kernel, static_cast<double>(i) / static_cast<double>(n));
}

double estimate(std::span<const double> y, double h, int order, const KernelSpec& kernel,
                double x, std::uint64_t* kernel_evals) {
    check_order(order);
    const std::size_t n = y.size();
    validate_bandwidth(n, h);
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x outside [0,1]");
    const double radius = static_cast<double>(n) * h;
    const double c = centre_in_index_units(n, x);
    const SupportWindow win = window_for_centre(n, c, radius);
    if (kernel_evals) *kernel_evals += win.size();
    return intercept(moments(y, n, c, radius, kernel, win), radius, order, x, h);
}

double estimate_at_index(std::span<const double> y, double h, int order, const KernelSpec& kernel,
                         std::size_t i, std::uint64_t* kernel_evals) {
    if (i < 1 || i > y.size()) throw std::invalid_argument("index outside [1, n]");
    return estimate(y, h, order, kernel, static_cast<double>(i) / static_cast<double>(y.size()),
                    kernel_evals);
}

std::vector<double> estimate_indices(std::span<const double> y, double h, int order,
                                     const KernelSpec& kernel,
                                     std::span<const std::size_t> indices, Execution exec,
                                     std::uint64_t* kernel_evals) {
    std::vector<double> out(indices.size());
    std::uint64_t evals = 0;
    const auto count = static_cast<std::ptrdiff_t>(indices.size());
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t a = 0; a < count; ++a) {
            out[a] = estimate_at_index(y, h, order, kernel, indices[a], &evals);
        }
    } else {
        // Exceptions cannot cross the parallel region; the first one is rethrown.
        std::exception_ptr failure;
#pragma omp parallel for schedule(static) reduction(+ : evals)
        for (std::ptrdiff_t a = 0; a < count; ++a) {
            try {
                out[a] = estimate_at_index(y, h, order, kernel, indices[a], &evals);
            } catch (...) {
#pragma omp critical(monotest_estimate_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }
    if (kernel_evals) *kernel_evals += evals;
    return out;
}

double weight_gap_norm(std::size_t n, double h, int order, const KernelSpec& kernel, double a,
                       double b) {
    const WeightVector wa = weights(n, h, order, kernel, a);
    const WeightVector wb = weights(n, h, order, kernel, b);
    const std::size_t lo = std::min(wa.first, wb.first);
    const std::size_t hi = std::max(wa.w.empty() ? 0 : wa.last(), wb.w.empty() ? 0 : wb.last());
    double sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
        const double d = wa.at(k) - wb.at(k);
        sum += d * d;
    }
    return sum;
}

EstimateCache::EstimateCache(std::span<const double> y, double h, int order,
                             const KernelSpec& kernel)
    : y_(y), h_(h), order_(order), kernel_(kernel), values_(y.size() + 1, 0.0),
      known_(y.size() + 1, 0) {
    check_order(order);
    validate_bandwidth(y.size(), h);
}

double EstimateCache::get(std::size_t i) {
    if (i < 1 || i > y_.size()) throw std::invalid_argument("index outside [1, n]");
    if (!known_[i]) {
        values_[i] = estimate_at_index(y_, h_, order_, kernel_, i, &kernel_evals_);
        known_[i] = 1;
        ++estimator_evals_;
    }
    return values_[i];
}

void EstimateCache::clear() {
    std::fill(known_.begin(), known_.end(), 0);
    estimator_evals_ = 0;
    kernel_evals_ = 0;
}

}  // namespace monotest
