// Small builders shared by the test binaries.
#pragma once

#include <random>
#include <vector>

#include "shearkit/polymap.hpp"

namespace testing_support {

using namespace shearkit;

struct T {
    std::vector<int> e;
    long num;
    long den = 1;
};

inline Poly P(std::size_t n, const std::vector<T>& terms, Backend b = Backend::exact) {
    Poly p(n, b);
    for (const auto& t : terms) p.add_term(Monomial::from(t.e), Scalar::ratio(t.num, t.den, b));
    return p;
}

inline Poly Z(std::size_t n, std::size_t i, Backend b = Backend::exact) { return Poly::variable(n, i, b); }
inline Scalar Q(long p, long q = 1, Backend b = Backend::exact) { return Scalar::ratio(p, q, b); }
inline Scalar C(double re, double im = 0) { return Scalar::approx({re, im}); }

/// Random exact polynomial with small rational coefficients.
inline Poly random_poly(std::mt19937& rng, std::size_t n, int max_deg, int terms, int height = 5,
                        int min_deg = 0) {
    std::uniform_int_distribution<int> deg(min_deg, max_deg), coef(-height, height), den(1, 3);
    Poly p(n, Backend::exact);
    for (int k = 0; k < terms; ++k) {
        int d = deg(rng);
        std::vector<int> e(n, 0);
        for (int s = 0; s < d; ++s) e[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]++;
        p.add_term(Monomial::from(e), Scalar::ratio(coef(rng), den(rng), Backend::exact));
    }
    return p;
}

inline Point random_point(std::mt19937& rng, std::size_t n, double radius = 1.0) {
    std::uniform_real_distribution<double> u(-radius, radius);
    Point z;
    for (std::size_t i = 0; i < n; ++i) z.emplace_back(u(rng), u(rng));
    return z;
}

inline double dist(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace testing_support
