#pragma once

#include "newtonosc_cli/serialize.hpp"

#include "newtonosc/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace newtonosc::cli {

struct PhaseInput {
    std::string text;
    bool mixed = false;  // text is F = S_xy; S is its mixed antiderivative
    double rho = 1.0;
};

struct ResolvedPhase {
    BivarPoly S;
    BivarPoly F;
};

ResolvedPhase resolve_phase(const PhaseInput& in);
json input_json(const PhaseInput& in, const ResolvedPhase& r);

json run_analyze(const PhaseInput& in, const std::optional<std::string>& order, const Provenance& prov);

struct NormRun {
    json doc;
    std::vector<NormSample> samples;
};
NormRun run_norm(const PhaseInput& in, const std::vector<double>& lambdas, const NormOptions& opts,
                 const Provenance& prov);

struct SweepRun {
    json doc;
    ScalingReport report;
};
SweepRun run_sweep(const PhaseInput& in, const SweepConfig& cfg, const Provenance& prov);

struct BlocksRun {
    json doc;
    BlockReport report;
};
BlocksRun run_blocks(const PhaseInput& in, double lambda, const BlockOptions& opts, const Provenance& prov);

struct DyadpolRun {
    json doc;
    bool pass = false;
};
DyadpolRun run_dyadpol(const ExponentProfile& profile, int trials, int density, const Provenance& prov);

struct SelftestOptions {
    /// Deliberately corrupts one constant so the suite can be seen to fail.
    /// Only "theta" is recognised.
    std::string mutate;
};
struct SelftestRun {
    json doc;
    bool pass = false;
    std::string first_failure;
};
SelftestRun run_selftest(const SelftestOptions& opts, const Provenance& prov);

/// 2 for parse errors, 3 for an empty polygon, 1 otherwise.
int exit_code_for(const Error& e);
json error_json(const Error& e);

}  // namespace newtonosc::cli
