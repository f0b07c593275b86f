#pragma once

// Exact recovery of supernumber-coefficient polynomials in one real
// parameter from point samples. Used wherever a derivative or integral
// along a line is needed symbolically: the composed map is sampled at
// distinct nodes and the Vandermonde system is solved in the carrier's
// real field.

#include <functional>
#include <stdexcept>
#include <vector>

#include "sga/supernumber.hpp"

namespace sga {

template <class S>
struct LinePoly {
    using Sn = Supernumber<S>;
    using Real = typename ScalarOps<S>::Real;

    std::vector<Sn> coeffs;  // c_0 + c_1 t + ... + c_N t^N

    Sn eval(const Real& t) const {
        if (coeffs.empty()) throw std::domain_error("LinePoly: empty");
        Sn acc = coeffs.back();
        for (std::size_t k = coeffs.size() - 1; k-- > 0;)
            acc = acc * ScalarOps<S>::from_real(t) + coeffs[k];
        return acc;
    }

    Sn derivative_at_zero() const {
        if (coeffs.size() < 2) return Sn::zero(coeffs.at(0).skeleton(), coeffs.at(0).cutoff());
        return coeffs[1];
    }

    // Componentwise integral over [a, b].
    Sn integral(const Real& a, const Real& b) const {
        if (coeffs.empty()) throw std::domain_error("LinePoly: empty");
        Sn acc = Sn::zero(coeffs[0].skeleton(), coeffs[0].cutoff());
        Real pa = a, pb = b;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            Real w = (pb - pa) / Real(static_cast<long>(k + 1));
            acc = acc + coeffs[k] * ScalarOps<S>::from_real(w);
            pa *= a;
            pb *= b;
        }
        return acc;
    }
};

// Solve for the coefficients from values at distinct nodes.
template <class S>
LinePoly<S> line_poly_from_samples(std::vector<Supernumber<S>> values,
                                   std::vector<typename ScalarOps<S>::Real> nodes) {
    using Real = typename ScalarOps<S>::Real;
    const std::size_t n = values.size();
    if (n == 0 || nodes.size() != n)
        throw std::domain_error("line_poly_from_samples: need one value per node");

    std::vector<std::vector<Real>> m(n, std::vector<Real>(n));
    for (std::size_t i = 0; i < n; ++i) {
        Real p{1};
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = p;
            p *= nodes[i];
        }
    }
    // Gaussian elimination with partial pivoting; the right side carries
    // supernumber values.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        Real best = m[col][col] < Real(0) ? -m[col][col] : m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            Real mag = m[r][col] < Real(0) ? -m[r][col] : m[r][col];
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (m[pivot][col] == Real(0))
            throw std::domain_error("line_poly_from_samples: nodes not distinct");
        std::swap(m[col], m[pivot]);
        std::swap(values[col], values[pivot]);
        Real inv = Real(1) / m[col][col];
        for (std::size_t j = col; j < n; ++j) m[col][j] *= inv;
        values[col] = values[col] * ScalarOps<S>::from_real(inv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == Real(0)) continue;
            Real f = m[r][col];
            for (std::size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
            values[r] = values[r] - values[col] * ScalarOps<S>::from_real(f);
        }
    }
    return LinePoly<S>{std::move(values)};
}

// Sample phi at t = 0, 1, ..., degree and interpolate. phi must be a
// polynomial in t of at most that degree for the result to be exact.
template <class S>
LinePoly<S> sample_line_poly(
    const std::function<Supernumber<S>(const typename ScalarOps<S>::Real&)>& phi, int degree) {
    using Real = typename ScalarOps<S>::Real;
    if (degree < 0) throw std::domain_error("sample_line_poly: negative degree");
    std::vector<Supernumber<S>> values;
    std::vector<Real> nodes;
    for (int t = 0; t <= degree; ++t) {
        nodes.push_back(Real(static_cast<long>(t)));
        values.push_back(phi(nodes.back()));
    }
    return line_poly_from_samples<S>(std::move(values), std::move(nodes));
}

}  // namespace sga
