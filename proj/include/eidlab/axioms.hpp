#pragma once

#include <string>
#include <vector>

#include "eidlab/energy_form.hpp"
#include "eidlab/rng.hpp"

namespace eidlab {

// One row per axiom. Rows whose identity is exact in floating point
// (homogeneity on the doubling set, total mass, both locality subtests) pass
// only at worst_slack == 0; inequality rows allow 1e-9 relative slack from
// pow and root evaluation.
struct AxiomRow {
    std::string axiom;
    long trials = 0;
    double worst_slack = 0.0;
    bool pass = false;
};

struct AxiomReport {
    std::vector<AxiomRow> rows;
    bool all_pass = false;
};

// The seven-row battery on one form: homogeneity, total-mass, sublinearity,
// chain-rule, contraction (max-min and linear), locality, lower
// semicontinuity. Each row runs `trials` random draws.
AxiomReport check_axioms(const PEnergyForm& form, long trials, CounterRng& rng);

// Pool rows across forms: trials add, slacks take the max, pass must hold
// everywhere.
AxiomReport merge_reports(const std::vector<AxiomReport>& parts);

}  // namespace eidlab
