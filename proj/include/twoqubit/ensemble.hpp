#pragma once

#include <vector>

#include "twoqubit/matrix.hpp"
#include "twoqubit/states.hpp"

namespace twoqubit {

/// Pure-state decomposition sum_i p_i |psi_i><psi_i|.
struct Ensemble {
    std::vector<double> probabilities;
    std::vector<PureState> states;

    /// The mixed state in the standard basis.
    ComplexMatrix4 mixture() const;
};

/// sum_i p_i S(Tr_B |psi_i><psi_i|), computed from reduced-state entropies.
double average_entanglement(const Ensemble& e);

}  // namespace twoqubit
