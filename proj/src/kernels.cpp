#include "monotest/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace monotest {

double eval_kernel(KernelId id, double u) {
    const double a = std::fabs(u);
    if (a >= 1.0) return 0.0;
    switch (id) {
        case KernelId::Epanechnikov:
            return 0.75 * (1.0 - a * a);
        case KernelId::Triangular:
            return 1.0 - a;
        case KernelId::Quartic: {
            const double t = 1.0 - a * a;
            return 0.9375 * t * t;
        }
        case KernelId::Cosine:
            return 0.25 * std::numbers::pi * std::cos(0.5 * std::numbers::pi * a);
    }
    return 0.0;
}

KernelSpec kernel_constants(KernelId id, Lambda0Source source) {
    constexpr double pi = std::numbers::pi;
    KernelSpec s;
    s.id = id;
    // Lipschitz constants are sup|K'| of the closed forms.
    switch (id) {
        case KernelId::Epanechnikov:
            s.k_max = 0.75;
            s.lipschitz = 1.5;
            s.mu2 = 0.6;
            s.lambda0_order0 = 0.5184;
            s.lambda0_order1 = 0.0283;
            break;
        case KernelId::Triangular:
            s.k_max = 1.0;
            s.lipschitz = 1.0;
            s.mu2 = 2.0 / 3.0;
            s.lambda0_order0 = 0.5250;
            s.lambda0_order1 = 0.0276;
            break;
        case KernelId::Quartic:
            s.k_max = 0.9375;
            s.lipschitz = 5.0 * std::sqrt(3.0) / 6.0;
            s.mu2 = 5.0 / 7.0;
            s.lambda0_order0 = 0.5234;
            s.lambda0_order1 = 0.0228;
            break;
        case KernelId::Cosine:
            s.k_max = pi / 4.0;
            s.lipschitz = pi * pi / 8.0;
            s.mu2 = pi * pi / 16.0;
            s.lambda0_order0 = 0.5194;
            s.lambda0_order1 = 0.0276;
            break;
        default:
            throw std::invalid_argument("unknown kernel id");
    }
    if (source == Lambda0Source::Conservative) {
        s.lambda0_order0 = 0.5;
        s.lambda0_order1 = 0.0228;
    }
    return s;
}

KernelId parse_kernel(std::string_view name) {
    if (name == "epanechnikov") return KernelId::Epanechnikov;
    if (name == "triangular") return KernelId::Triangular;
    if (name == "quartic") return KernelId::Quartic;
    if (name == "cosine") return KernelId::Cosine;
    throw std::invalid_argument("unknown kernel: " + std::string(name));
}

std::string kernel_name(KernelId id) {
    switch (id) {
        case KernelId::Epanechnikov: return "epanechnikov";
        case KernelId::Triangular: return "triangular";
        case KernelId::Quartic: return "quartic";
        case KernelId::Cosine: return "cosine";
    }
    throw std::invalid_argument("unknown kernel id");
}

}  // namespace monotest
