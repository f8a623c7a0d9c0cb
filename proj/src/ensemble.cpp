#include "twoqubit/ensemble.hpp"

#include "twoqubit/entanglement.hpp"

namespace twoqubit {

ComplexMatrix4 Ensemble::mixture() const {
    ComplexMatrix4 m;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto v = in_basis(states[i], Basis::standard).amplitudes();
        m += outer(v, v) * probabilities[i];
    }
    return m;
}

double average_entanglement(const Ensemble& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < e.states.size(); ++i) s += e.probabilities[i] * pure_entanglement_entropy(e.states[i]);
    return s;
}

}  // namespace twoqubit
