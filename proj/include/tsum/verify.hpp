#ifndef TSUM_VERIFY_HPP
#define TSUM_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace tsum {

struct RunConfig {
    std::uint64_t seed = 20240617;
    int trials = 0;      // 0 = per-identity default
    double tol = 0.0;    // 0 = per-identity default
    int genus = 1;
    int n_max = 0;       // 0 = per-identity default
    double theta_tol = 1e-13;
    int quadrature_nodes = 64;
};

struct FailureRecord {
    std::uint64_t seed;
    std::string inputs;
    double residual;
};

struct VerificationReport {
    std::string identity;
    int genus = 1;
    std::uint64_t seed = 0;
    int trials = 0;
    double tol = 0.0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    std::vector<FailureRecord> failures; // nonempty iff max_residual > tol
    double wall_time_s = 0.0;

    bool passed() const { return failures.empty(); }
    nlohmann::json to_json() const;
};

// All identity ids accepted by run_verify, in the order `all` runs them.
const std::vector<std::string>& verify_identities();

// Runs one identity suite. Trials are reproducible from (seed, trial index);
// configurations that land on theta zeros are redrawn deterministically.
VerificationReport run_verify(const std::string& identity, const RunConfig& cfg);

// Every suite applicable at cfg.genus.
std::vector<VerificationReport> run_verify_all(const RunConfig& cfg);

} // namespace tsum

#endif
