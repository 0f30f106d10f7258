#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "monotest/kernels.hpp"

namespace monotest {

// Local polynomial estimation on the design x_i = i/n, i = 1..n. Indices are
// 1-based throughout to match that design.

class DegenerateDesign : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kGramFloor = 1e-12;

enum class Execution { Serial, Parallel };

struct GramMatrix {
    int order = 0;
    double b00 = 0.0;
    double b01 = 0.0;  // zero for order 0
    double b11 = 0.0;
    double min_eigenvalue() const;
};

struct WeightVector {
    double x = 0.0;
    double h = 0.0;
    int order = 0;
    std::size_t first = 1;  // index of w[0]
    std::vector<double> w;

    std::size_t last() const { return first + w.size() - 1; }
    // Zero outside the support window.
    double at(std::size_t k) const {
        return (k >= first && k < first + w.size()) ? w[k - first] : 0.0;
    }
};

// Indices k with |x_k - x| < h, clipped to [1, n]. Empty when lo > hi.
struct SupportWindow {
    std::size_t lo = 1;
    std::size_t hi = 0;
    std::size_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

SupportWindow support_window(std::size_t n, double h, double x);

// Throws DegenerateDesign when the smallest eigenvalue is below kGramFloor.
GramMatrix gram(std::size_t n, double h, int order, const KernelSpec& kernel, double x);

// Order-1 fits whose window holds only the centre point still identify the
// intercept, and get the single weight 1 instead of a degenerate-design error.
WeightVector weights(std::size_t n, double h, int order, const KernelSpec& kernel, double x);
WeightVector weights_at_index(std::size_t n, double h, int order, const KernelSpec& kernel,
                              std::size_t i);

// Single pass over the window. kernel_evals, if given, is incremented by the
// window size.
double estimate(std::span<const double> y, double h, int order, const KernelSpec& kernel,
                double x, std::uint64_t* kernel_evals = nullptr);
double estimate_at_index(std::span<const double> y, double h, int order, const KernelSpec& kernel,
                         std::size_t i, std::uint64_t* kernel_evals = nullptr);

// Estimates at each listed index. Parallel splits the indices over OpenMP
// threads; results are identical to Serial.
std::vector<double> estimate_indices(std::span<const double> y, double h, int order,
                                     const KernelSpec& kernel,
                                     std::span<const std::size_t> indices,
                                     Execution exec = Execution::Parallel,
                                     std::uint64_t* kernel_evals = nullptr);

// Sum over k of (W_nk(a) - W_nk(b))^2.
double weight_gap_norm(std::size_t n, double h, int order, const KernelSpec& kernel, double a,
                       double b);

// Memoized grid estimates for one (sample, h, order). Confined to one run.
class EstimateCache {
public:
    EstimateCache(std::span<const double> y, double h, int order, const KernelSpec& kernel);

    double get(std::size_t i);
    void clear();

    std::size_t n() const { return y_.size(); }
    double bandwidth() const { return h_; }
    int order() const { return order_; }
    std::uint64_t estimator_evals() const { return estimator_evals_; }
    std::uint64_t kernel_evals() const { return kernel_evals_; }

private:
    std::span<const double> y_;
    double h_;
    int order_;
    KernelSpec kernel_;
    std::vector<double> values_;
    std::vector<unsigned char> known_;
    std::uint64_t estimator_evals_ = 0;
    std::uint64_t kernel_evals_ = 0;
};

void validate_bandwidth(std::size_t n, double h);

}  // namespace monotest
