#include "polyloc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "polyloc/errors.hpp"

namespace polyloc {

std::string Site::str() const {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << coords[i];
    os << ")";
    return os.str();
}

static void check_same_dim(const Site& a, const Site& b, const char* who) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch " +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

Site operator+(const Site& a, const Site& b) {
    check_same_dim(a, b, "Site+");
    Site r = a;
    for (int i = 0; i < r.dim(); ++i) r[i] += b[i];
    return r;
}

Site operator-(const Site& a, const Site& b) {
    check_same_dim(a, b, "Site-");
    Site r = a;
    for (int i = 0; i < r.dim(); ++i) r[i] -= b[i];
    return r;
}

int sup_norm(const Site& n) {
    int m = 0;
    for (int i = 0; i < n.dim(); ++i) m = std::max(m, std::abs(n[i]));
    return m;
}

int sup_distance(const Site& m, const Site& n) {
    check_same_dim(m, n, "sup_distance");
    int d = 0;
    for (int i = 0; i < m.dim(); ++i) d = std::max(d, std::abs(m[i] - n[i]));
    return d;
}

Cube::Cube(Site center, int radius) : center_(std::move(center)), radius_(radius) {
    if (center_.dim() < 1) throw std::invalid_argument("Cube: dimension must be >= 1");
    if (radius_ < 0) throw std::invalid_argument("Cube: radius must be >= 0");
    const int d = center_.dim();
    const long long side = 2LL * radius_ + 1;
    long long n = 1;
    for (int i = 0; i < d; ++i) {
        n *= side;
        if (n > (1LL << 24)) throw std::invalid_argument("Cube: too many sites");
    }
    sites_.reserve(static_cast<size_t>(n));
    Site s = center_;
    for (int i = 0; i < d; ++i) s[i] -= radius_;
    // odometer over [center-L, center+L]^d, last coordinate fastest
    for (long long i = 0; i < n; ++i) {
        sites_.push_back(s);
        for (int j = d - 1; j >= 0; --j) {
            if (s[j] < center_[j] + radius_) {
                ++s[j];
                break;
            }
            s[j] = center_[j] - radius_;
        }
    }
}

bool Cube::contains(const Site& s) const {
    if (s.dim() != dim()) return false;
    return sup_distance(s, center_) <= radius_;
}

int Cube::index_of(const Site& s) const {
    if (!contains(s)) return -1;
    const int side = 2 * radius_ + 1;
    long long idx = 0;
    for (int i = 0; i < dim(); ++i) idx = idx * side + (s[i] - (center_[i] - radius_));
    return static_cast<int>(idx);
}

std::string Cube::id() const {
    std::ostringstream os;
    os << "L=" << radius_ << ";c=";
    for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << center_[i];
    return os.str();
}

std::vector<Site> cube_sites(const Site& center, int radius) {
    return Cube(center, radius).sites();
}

Annulus make_annulus(const Site& center, int outer_radius, int inner_radius) {
    if (inner_radius > outer_radius)
        throw std::invalid_argument("make_annulus: inner radius exceeds outer radius");
    Cube outer(center, outer_radius);
    Cube inner(center, inner_radius);
    std::vector<Site> ring;
    for (const Site& s : outer.sites())
        if (sup_distance(s, center) > inner_radius) ring.push_back(s);
    return Annulus{std::move(outer), std::move(inner), std::move(ring)};
}

AnnulusRadii annulus_radii(AnnulusVariant v, long long Lk, long long Lk1) {
    if (Lk < 0 || Lk1 < Lk) throw std::invalid_argument("annulus_radii: need 0 <= Lk <= Lk1");
    long long inner, outer;
    if (v == AnnulusVariant::msa) {
        inner = Lk;
        outer = 2 * Lk1;
    } else {
        inner = (4 * Lk) / 3;
        outer = (8 * Lk1) / 5;
    }
    if (outer > std::numeric_limits<int>::max())
        throw std::invalid_argument("annulus_radii: radius exceeds int range");
    return AnnulusRadii{static_cast<int>(inner), static_cast<int>(outer)};
}

double shell_count(int d, long long m) {
    if (m == 0) return 1.0;
    double a = 1.0, b = 1.0;
    for (int i = 0; i < d; ++i) {
        a *= static_cast<double>(2 * m + 1);
        b *= static_cast<double>(2 * m - 1);
    }
    return a - b;
}

namespace {

// sum_{m=M+1}^inf m^-beta with a certified remainder bound, beta > 1
struct TailPiece {
    double value;
    double err;
};

TailPiece zeta_tail(double beta, double M) {
    const double a = M + 1.0;
    const double ia = 1.0 / a;
    const double f = std::pow(a, -beta);
    double v = std::pow(a, 1.0 - beta) / (beta - 1.0);
    v += 0.5 * f;
    v += beta * f * ia / 12.0;
    v -= beta * (beta + 1.0) * (beta + 2.0) * f * ia * ia * ia / 720.0;
    // remainder of the endpoint expansion is dominated by the first omitted term
    const double err =
        beta * (beta + 1.0) * (beta + 2.0) * (beta + 3.0) * (beta + 4.0) * f * std::pow(ia, 5) / 30240.0;
    return {v, err};
}

}  // namespace

TailSum shell_power_tail(double theta, int d, long long L) {
    if (d < 1) throw std::invalid_argument("shell_power_tail: d must be >= 1");
    if (L < 1) throw std::invalid_argument("shell_power_tail: L must be >= 1");
    if (!(theta > d))
        throw DivergentSumError("shell_power_tail: sum diverges unless theta > d");

    long long M = std::max(L - 1, 4096LL);
    for (;;) {
        // exact shells L..M, compensated summation
        double sum = 0.0, comp = 0.0;
        for (long long m = L; m <= M; ++m) {
            const double term = shell_count(d, m) * std::pow(static_cast<double>(m), -theta);
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        // remainder via the odd-power expansion of the shell counts:
        // (2m+1)^d - (2m-1)^d = sum_{j odd} 2 C(d,j) (2m)^(d-j)
        double rem = 0.0, err = 0.0;
        double binom = 1.0;  // C(d, j)
        for (int j = 1; j <= d; ++j) {
            binom = binom * (d - j + 1) / j;
            if (j % 2 == 0) continue;
            const double coeff = 2.0 * binom * std::pow(2.0, d - j);
            const TailPiece z = zeta_tail(theta - d + j, static_cast<double>(M));
            rem += coeff * z.value;
            err += coeff * z.err;
        }
        const double value = sum + rem;
        err += 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(sum) + std::abs(rem));
        if (err <= 1e-10 * std::max(value, std::numeric_limits<double>::min()) || M >= (1LL << 26))
            return {value, err};
        M *= 4;
    }
}

TailSum tail_sum(double theta, int d, long long L) {
    if (d < 1) throw std::invalid_argument("tail_sum: d must be >= 1");
    if (L <= 2) throw std::invalid_argument("tail_sum: L must be > 2");
    if (!(theta - d > 1.0))
        throw DivergentSumError("tail_sum: requires theta - d > 1");
    return shell_power_tail(theta, d, L);
}

}  // namespace polyloc
