#include "monotest/report.hpp"

namespace monotest {

nlohmann::json to_json(const TestReport& r) {
    nlohmann::json j;
    j["method"] = r.method;
    j["decision"] = decision_name(r.decision);
    if (r.witness) {
        j["witness"] = {r.witness->first, r.witness->second};
    } else {
        j["witness"] = nullptr;
    }
    j["statistic"] = r.statistic;
    j["critical"] = r.critical;
    j["local_tests_run"] = r.local_tests_run;
    j["estimator_evals"] = r.estimator_evals;
    j["kernel_evals"] = r.kernel_evals;
    j["outer_iterations"] = r.outer_iterations;
    j["c_n"] = r.c_n;
    j["n_max"] = r.n_max;
    j["bandwidth"] = r.bandwidth;
    if (r.witness_bandwidth) {
        j["witness_bandwidth"] = *r.witness_bandwidth;
    } else {
        j["witness_bandwidth"] = nullptr;
    }
    j["sigma"] = r.sigma_used;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["elapsed_s"] = r.elapsed_s;
    return j;
}

nlohmann::json to_json(const ConstantSet& cs) {
    return {
        {"beta", cs.beta},
        {"L", cs.L},
        {"sigma", cs.sigma},
        {"regime", regime_name(cs.regime)},
        {"kernel", kernel_name(cs.kernel.id)},
        {"order", cs.order},
        {"lambda0", cs.lambda0},
        {"K_max", cs.kernel.k_max},
        {"L_K", cs.kernel.lipschitz},
        {"mu2", cs.kernel.mu2},
        {"C_star", cs.c_star},
        {"L1", cs.l1},
        {"L2", cs.l2},
        {"C_star_tilde", cs.c_star_tilde},
        {"W_full", cs.w_full},
        {"W", cs.w},
        {"q1", cs.q1},
        {"q2", cs.q2},
        {"C_h", cs.c_h},
        {"C_beta", cs.c_beta},
        {"C_rho_full", cs.c_rho_full},
        {"C_rho", cs.c_rho},
        {"boundary_factor", cs.boundary_factor},
    };
}

nlohmann::json to_json(const CalmFit& fit) {
    nlohmann::json est = nlohmann::json::array();
    for (std::size_t t = 0; t < fit.indices.size(); ++t) {
        est.push_back({{"index", fit.indices[t]}, {"fhat", fit.estimates[t]}});
    }
    nlohmann::json j{
        {"m_bar", fit.m_bar},
        {"M", fit.M()},
        {"h", fit.h_selected},
        {"kappa", fit.kappa},
        {"grid", fit.grid},
        {"estimates", est},
        {"degenerate_stop", fit.degenerate_stop},
        {"distance_evals", fit.distance_evals},
        {"estimator_evals", fit.estimator_evals},
    };
    if (fit.certificate) {
        j["certificate"] = {{"k", fit.certificate->k},
                            {"m", fit.certificate->m},
                            {"distance", fit.certificate->distance},
                            {"threshold", fit.certificate->threshold}};
    } else {
        j["certificate"] = nullptr;
    }
    return j;
}

nlohmann::json to_json(const ResultRow& row) {
    return {
        {"method", row.method},
        {"signal", row.signal},
        {"n", row.n},
        {"rejection_rate", row.rejection_rate},
        {"median_s", row.median_s},
        {"q25_s", row.q25_s},
        {"q75_s", row.q75_s},
        {"local_tests_median", row.local_tests_median},
        {"estimator_evals_median", row.estimator_evals_median},
        {"errors", row.errors},
    };
}

}  // namespace monotest
