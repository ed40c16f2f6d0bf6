#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "infobs/grid.hpp"

namespace infobs {

/// Which nodes a field is defined on.
enum class Support { all, interior, strip };

std::string_view to_string(Support s);

/// One value per grid node. Values off the support are stored as NaN and
/// checked reads there throw.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(GridPtr grid, Support support, std::vector<double> values);
    /// Constant field on the given support.
    ScalarField(GridPtr grid, Support support, double value);

    const GridPtr& grid() const noexcept { return grid_; }
    Support support() const noexcept { return support_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool defined_at(NodeIndex i) const;
    /// Checked read; throws ContractError off the support.
    double at(NodeIndex i) const;
    /// Unchecked read.
    double operator[](NodeIndex i) const noexcept { return values_[i]; }
    double& operator[](NodeIndex i) noexcept { return values_[i]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

private:
    GridPtr grid_;
    Support support_ = Support::all;
    std::vector<double> values_;
};

/// max over nodes of |a - b|, restricted to nodes where both are defined.
double sup_distance(const ScalarField& a, const ScalarField& b);

}  // namespace infobs
