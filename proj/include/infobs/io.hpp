#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "infobs/contact.hpp"
#include "infobs/game.hpp"
#include "infobs/problem.hpp"
#include "infobs/solver.hpp"

namespace infobs {

/// `x,[y,]u,psi,residual,contact` with one row per node in node order.
void write_field_csv(std::ostream& os, const ProblemSpec& spec, const ScalarField& u, const ContactSet& contact);

/// `x[,y]` rows for the contact nodes.
void write_contact_csv(std::ostream& os, const GridDomain& grid, const ContactSet& contact);

nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const MonteCarloEstimate& estimate);
nlohmann::json to_json(const LewyStampacchia& ls);
nlohmann::json to_json(const FixedPointDiagnostics& d);

/// Sweep summary. Infinite Hausdorff distances (one contact set empty) are
/// written as null.
nlohmann::json to_json(const SweepReport& report);

}  // namespace infobs
