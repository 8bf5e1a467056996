#include "simplexslice/families.hpp"

#include <cmath>

#include "simplexslice/errors.hpp"

namespace sslice {

Direction near_direction_sigma(double delta_value, int n) {
    if (n < 3) throw DimensionTooSmall("sigma family needs n >= 3");
    if (!(delta_value > 0.0) || delta_value > 0.5)
        throw DomainError("delta out of range for the sigma family");
    const double uv = (2.0 - delta_value) / (2.0 * std::sqrt(2.0));
    const double sigma2 = delta_value * (1.0 - delta_value / 4.0);
    std::vector<double> c(n + 1, 0.0);
    c[0] = uv;
    c[n] = -uv;
    const double mu = std::sqrt(sigma2 / 2.0);
    c[1] = mu;
    c[2] = -mu;
    return Direction::from_unit(c);
}

Direction near_direction_flat(double delta_value, int mids) {
    if (mids < 3) throw DomainError("flat family needs mids >= 3 to stay in near-2");
    if (!(delta_value > 0.0) || delta_value > 1.0 / 2000.0)
        throw DomainError("delta out of range for the flat family");
    const double r = 1.0 / std::sqrt(2.0);
    const double g = delta_value / std::sqrt(2.0);
    // solve for e: (2e + g)^2 / mids = sqrt2 g - e^2 - (e + g)^2
    auto mismatch = [&](double e) {
        const double u = r + e, v = r - e - g;
        const double smid = v - u;
        return smid * smid / mids - (1.0 - u * u - v * v);
    };
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 300; ++it) {
        double mid = 0.5 * (lo + hi);
        (mismatch(mid) <= 0.0 ? lo : hi) = mid;
    }
    const double e = 0.5 * (lo + hi);
    const double u = r + e, v = r - e - g;
    std::vector<double> c;
    c.push_back(u);
    const double mu = (v - u) / mids;
    for (int i = 0; i < mids; ++i) c.push_back(mu);
    c.push_back(-v);
    return Direction::normalized(c);
}

Direction far_pairing_direction(int mids) {
    if (mids < 12000) throw DomainError("the pairing branch is unreachable below ~12000");
    const double u0 = std::sqrt(0.5 + 5e-5) - 1e-7;
    const double a2 = 0.70694;
    const double q = u0 + a2;
    const double budget = 1.0 - u0 * u0 - a2 * a2;
    if (budget <= q * q / mids)
        throw DomainError("mids too small for the norm budget of the pairing family");
    // mids middles mu = -alpha q / mids plus one sink z = -(1 - alpha) q
    double alpha = 1.0;
    for (int it = 0; it < 60; ++it)
        alpha = 1.0 - std::sqrt(std::max(0.0, budget - alpha * alpha * q * q / mids)) / q;
    const double mu = -alpha * q / mids;
    const double z = -(1.0 - alpha) * q;
    std::vector<double> c;
    c.push_back(u0);
    c.push_back(a2);
    // 2e-9 ramp keeps middles distinct above the ill-conditioning threshold
    for (int i = 0; i < mids; ++i) c.push_back(mu + (i - (mids - 1) / 2.0) * 2e-9);
    c.push_back(z);
    return Direction::normalized(c);
}

}  // namespace sslice
