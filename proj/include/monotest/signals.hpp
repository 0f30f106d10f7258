#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace monotest {

// f0 = 0, f1 = 1 + x - 0.45 exp(-50(x-0.5)^2), f2 = -0.2 exp(-50(x-0.5)^2),
// f3 = -0.3x, f4 = x(1-x). Custom signals are tabulated.
enum class SignalId { F0, F1, F2, F3, F4, Custom };

SignalId parse_signal(std::string_view name);
std::string signal_name(SignalId id);

double signal_eval(SignalId id, double x);
double signal_derivative(SignalId id, double x);

class Signal {
public:
    explicit Signal(SignalId id);

    // Values at the nodes j/m, j = 1..m, joined linearly and held constant
    // left of 1/m. A table of length n reproduces itself on the design i/n.
    static Signal tabulated(std::vector<double> values);

    SignalId id() const { return id_; }
    std::string name() const;
    double value(double x) const;
    double derivative(double x) const;

private:
    SignalId id_;
    std::vector<double> table_;
};

struct Sample {
    std::size_t n = 0;
    std::vector<double> y;
    double sigma_true = 0.0;
    std::uint64_t seed = 0;
};

// Y_i = f(i/n) + sigma Z_i, Z_i from RandomStream::standard_normal.
Sample generate_sample(const Signal& signal, std::size_t n, double sigma, std::uint64_t seed);

}  // namespace monotest
