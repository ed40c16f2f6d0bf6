#include "infobs/field.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "infobs/errors.hpp"

namespace infobs {

std::string_view to_string(Support s) {
    switch (s) {
        case Support::all: return "all";
        case Support::interior: return "interior";
        case Support::strip: return "strip";
    }
    return "?";
}

namespace {

bool on_support(const GridDomain& g, Support s, NodeIndex i) {
    switch (s) {
        case Support::all: return true;
        case Support::interior: return g.is_interior(i);
        case Support::strip: return g.is_strip(i);
    }
    return false;
}

}  // namespace

ScalarField::ScalarField(GridPtr grid, Support support, std::vector<double> values)
    : grid_(std::move(grid)), support_(support), values_(std::move(values)) {
    if (!grid_) throw ContractError("ScalarField needs a grid");
    if (values_.size() != grid_->size()) {
        throw ContractError("ScalarField has " + std::to_string(values_.size()) + " values for a grid of " +
                            std::to_string(grid_->size()) + " nodes");
    }
    for (NodeIndex i = 0; i < values_.size(); ++i) {
        if (on_support(*grid_, support_, i)) {
            if (!std::isfinite(values_[i])) {
                throw ContractError("non-finite field value at node " + std::to_string(i));
            }
        } else {
            values_[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
}

ScalarField::ScalarField(GridPtr grid, Support support, double value)
    : ScalarField(grid, support, std::vector<double>(grid ? grid->size() : 0, value)) {}

bool ScalarField::defined_at(NodeIndex i) const { return on_support(*grid_, support_, i); }

double ScalarField::at(NodeIndex i) const {
    if (i >= values_.size()) throw ContractError("node index " + std::to_string(i) + " out of range");
    if (!defined_at(i)) {
        throw ContractError("read of " + std::string(to_string(support_)) + " field at node " + std::to_string(i) +
                            " outside its support");
    }
    return values_[i];
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
    if (a.size() != b.size()) throw ContractError("sup_distance: fields live on different grids");
    double d = 0.0;
    for (NodeIndex i = 0; i < a.size(); ++i) {
        if (a.defined_at(i) && b.defined_at(i)) d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

}  // namespace infobs
