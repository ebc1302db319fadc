#pragma once

#include "parab/analysis.hpp"
#include "parab/fatou.hpp"
#include "parab/fibers.hpp"

#include <memory>
#include <string>
#include <vector>

namespace parab::verify {

struct SubCheck {
    std::string name;
    bool pass;
    std::string detail;
};

struct CriterionResult {
    int id;
    std::string name;
    bool pass;
    double runtime_s;
    std::vector<SubCheck> checks;
};

/// Shared fixtures: the chain, certified parameters, solved curve and machine.
struct Context {
    MapChain chain;
    RegionParams params;
    CurveSeries curve;
    std::unique_ptr<FatouMachine> machine;

    static Context standard(double eps = 0.05, double R = 100.0);
};

CriterionResult criterion_germ_exactness(const Context& cx);       // 1
CriterionResult criterion_axis_and_inverse(const Context& cx);     // 2
CriterionResult criterion_directions(const Context& cx);           // 3
CriterionResult criterion_curve(const Context& cx);                // 4
CriterionResult criterion_domain_invariance(const Context& cx);    // 5
CriterionResult criterion_asymptotics(const Context& cx);          // 6
CriterionResult criterion_fatou(const Context& cx);                // 7
CriterionResult criterion_fibers_global(const Context& cx);        // 8
CriterionResult criterion_boundary(const Context& cx);             // 9
CriterionResult criterion_raster(const Context& cx);               // 10

std::vector<CriterionResult> run_all(const Context& cx);
std::string report_json(const std::vector<CriterionResult>& results);

} // namespace parab::verify
