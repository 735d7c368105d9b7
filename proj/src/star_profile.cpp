#include "dstar/star_profile.hpp"

namespace dstar {

const char* to_string(Side s) {
    switch (s) {
        case Side::PR: return "PR";
        case Side::PT: return "PT";
        case Side::SR: return "SR";
        case Side::ST: return "ST";
    }
    return "?";
}

StarProfile StarProfile::uniform(int m_elems, double beta_pr, double beta_sr) {
    StarProfile p;
    p.b(Side::PR) = RVec::Constant(m_elems, beta_pr);
    p.b(Side::PT) = RVec::Constant(m_elems, std::sqrt(std::max(0.0, 1.0 - beta_pr * beta_pr)));
    p.b(Side::SR) = RVec::Constant(m_elems, beta_sr);
    p.b(Side::ST) = RVec::Constant(m_elems, std::sqrt(std::max(0.0, 1.0 - beta_sr * beta_sr)));
    for (auto s : kSides) p.t(s) = CVec::Ones(m_elems);
    return p;
}

StarProfile StarProfile::random(int m_elems, std::mt19937_64& rng) {
    StarProfile p = uniform(m_elems);
    // Phases uniform on (0, 2pi]; same portable uniform as the channel draws.
    auto uniform01 = [&rng] { return (rng() >> 11) * 0x1.0p-53; };
    for (auto s : kSides) {
        for (int m = 0; m < m_elems; ++m) {
            const double ang = 2.0 * M_PI * (1.0 - uniform01());
            p.t(s)(m) = Complex(std::cos(ang), std::sin(ang));
        }
    }
    return p;
}

double StarProfile::delta_sq(const StarProfile& other) const {
    return amp_delta_sq(other) + phase_delta_sq(other);
}

double StarProfile::amp_delta_sq(const StarProfile& other) const {
    double d = 0.0;
    for (auto s : kSides) d += (b(s) - other.b(s)).squaredNorm();
    return d;
}

double StarProfile::phase_delta_sq(const StarProfile& other) const {
    double d = 0.0;
    for (auto s : kSides) d += (t(s) - other.t(s)).squaredNorm();
    return d;
}

} // namespace dstar
