#pragma once

#include <string>
#include <string_view>

namespace monotest {

enum class KernelId { Epanechnikov, Triangular, Quartic, Cosine };

// Where the minimal Gram eigenvalue bound comes from. Conservative is the
// kernel-independent pair (0.5, 0.0228); Tabulated uses per-kernel values.
enum class Lambda0Source { Conservative, Tabulated };

struct KernelSpec {
    KernelId id = KernelId::Epanechnikov;
    double k_max = 0.0;
    double lipschitz = 0.0;
    double lambda0_order0 = 0.0;
    double lambda0_order1 = 0.0;
    double mu2 = 0.0;  // integral of K^2

    double lambda0(int order) const { return order == 0 ? lambda0_order0 : lambda0_order1; }
};

double eval_kernel(KernelId id, double u);
inline double eval_kernel(const KernelSpec& spec, double u) { return eval_kernel(spec.id, u); }

KernelSpec kernel_constants(KernelId id, Lambda0Source source = Lambda0Source::Conservative);

// Accepts lower-case names; throws std::invalid_argument otherwise.
KernelId parse_kernel(std::string_view name);
std::string kernel_name(KernelId id);

}  // namespace monotest
