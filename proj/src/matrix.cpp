#include "twoqubit/matrix.hpp"

namespace twoqubit {

ComplexMatrix4 kron(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    ComplexMatrix4 r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

CVector<4> kron(const CVector<2>& a, const CVector<2>& b) {
    return {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

ComplexMatrix2 partial_trace(const ComplexMatrix4& rho, Subsystem traced) {
    ComplexMatrix2 r;
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t k = 0; k < 2; ++k) {
                if (traced == Subsystem::B)
                    r(x, y) += rho(2 * x + k, 2 * y + k);
                else
                    r(x, y) += rho(2 * k + x, 2 * k + y);
            }
    return r;
}

ComplexMatrix4 partial_transpose(const ComplexMatrix4& rho, Subsystem transposed) {
    ComplexMatrix4 r;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c)
                for (std::size_t d = 0; d < 2; ++d) {
                    // <a b| rho |c d>
                    const Complex v = rho(2 * a + b, 2 * c + d);
                    if (transposed == Subsystem::B)
                        r(2 * a + d, 2 * c + b) = v;
                    else
                        r(2 * c + b, 2 * a + d) = v;
                }
    return r;
}

const std::array<ComplexMatrix2, 3>& pauli() {
    static const std::array<ComplexMatrix2, 3> sigma = {
        ComplexMatrix2{{0.0, 1.0}, {1.0, 0.0}},
        ComplexMatrix2{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}},
        ComplexMatrix2{{1.0, 0.0}, {0.0, -1.0}},
    };
    return sigma;
}

}  // namespace twoqubit
