#include "monotest/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "monotest/rng.hpp"

namespace monotest {

namespace {
double bump(double x) {
    const double d = x - 0.5;
    return std::exp(-50.0 * d * d);
}
}  // namespace

SignalId parse_signal(std::string_view name) {
    if (name == "f0") return SignalId::F0;
    if (name == "f1") return SignalId::F1;
    if (name == "f2") return SignalId::F2;
    if (name == "f3") return SignalId::F3;
    if (name == "f4") return SignalId::F4;
    if (name == "custom") return SignalId::Custom;
    throw std::invalid_argument("unknown signal: " + std::string(name));
}

std::string signal_name(SignalId id) {
    switch (id) {
        case SignalId::F0: return "f0";
        case SignalId::F1: return "f1";
        case SignalId::F2: return "f2";
        case SignalId::F3: return "f3";
        case SignalId::F4: return "f4";
        case SignalId::Custom: return "custom";
    }
    throw std::invalid_argument("unknown signal id");
}

double signal_eval(SignalId id, double x) {
    switch (id) {
        case SignalId::F0: return 0.0;
        case SignalId::F1: return 1.0 + x - 0.45 * bump(x);
        case SignalId::F2: return -0.2 * bump(x);
        case SignalId::F3: return -0.3 * x;
        case SignalId::F4: return x * (1.0 - x);
        case SignalId::Custom: break;
    }
    throw std::invalid_argument("signal has no closed form");
}

double signal_derivative(SignalId id, double x) {
    const double d = x - 0.5;
    switch (id) {
        case SignalId::F0: return 0.0;
        case SignalId::F1: return 1.0 + 45.0 * d * bump(x);
        case SignalId::F2: return 20.0 * d * bump(x);
        case SignalId::F3: return -0.3;
        case SignalId::F4: return 1.0 - 2.0 * x;
        case SignalId::Custom: break;
    }
    throw std::invalid_argument("signal has no closed form");
}

Signal::Signal(SignalId id) : id_(id) {
    if (id == SignalId::Custom) throw std::invalid_argument("custom signals need a table");
}

Signal Signal::tabulated(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("empty signal table");
    Signal s(SignalId::F0);
    s.id_ = SignalId::Custom;
    s.table_ = std::move(values);
    return s;
}

std::string Signal::name() const { return signal_name(id_); }

double Signal::value(double x) const {
    if (id_ != SignalId::Custom) return signal_eval(id_, x);
    const double m = static_cast<double>(table_.size());
    double pos = x * m;  // node j sits at pos = j
    if (std::fabs(pos - std::round(pos)) < 1e-9) pos = std::round(pos);
    if (pos <= 1.0) return table_.front();
    if (pos >= m) return table_.back();
    const double j = std::floor(pos);
    const auto lo = static_cast<std::size_t>(j);
    const double frac = pos - j;
    if (frac == 0.0) return table_[lo - 1];
    return table_[lo - 1] + frac * (table_[lo] - table_[lo - 1]);
}

double Signal::derivative(double x) const {
    if (id_ != SignalId::Custom) return signal_derivative(id_, x);
    const double m = static_cast<double>(table_.size());
    if (table_.size() < 2) return 0.0;
    const double pos = x * m;
    if (pos < 1.0) return 0.0;
    const auto lo = std::min(static_cast<std::size_t>(std::floor(pos)), table_.size() - 1);
    return (table_[lo] - table_[lo - 1]) * m;
}

Sample generate_sample(const Signal& signal, std::size_t n, double sigma, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_sample needs n >= 2");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
    Sample s;
    s.n = n;
    s.sigma_true = sigma;
    s.seed = seed;
    s.y.resize(n);
    RandomStream rng(seed);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const double f = signal.value(static_cast<double>(i) / nd);
        s.y[i - 1] = sigma == 0.0 ? f : f + sigma * rng.standard_normal();
    }
    return s;
}

}  // namespace monotest
