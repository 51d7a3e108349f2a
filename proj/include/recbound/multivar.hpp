#pragma once

#include <string>
#include <vector>

#include "recbound/coeffvec.hpp"

namespace recbound {

// Largest dense tensor the analysis will materialize.
inline constexpr long kTensorDimCap = 4096;

// Tensor basis with `arity` identical axes.
BasisId tensor_power(const BasisId& axis_basis, int arity);

// Shift along one coordinate of a tensor basis, exact per generator.
GenSet tf_pop_axis(const GenSet& s, int axis);

// Minimal bounds q with q >= boundary on the hyperplane where the pushed
// coordinate is zero and q shifted along that coordinate >= body elsewhere.
// Candidates are cross-checked by sampling before being returned.
GenSet tf_push_axis(const BasisId& basis, int axis, const Rat& boundary,
                    const GenSet& body,
                    std::vector<std::string>* warnings = nullptr);

}  // namespace recbound
