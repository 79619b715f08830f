#pragma once

#include <string>
#include <vector>

namespace polyloc {

// Site of Z^d. All geometry below is sup-norm geometry.
struct Site {
    std::vector<int> coords;

    Site() = default;
    explicit Site(std::vector<int> c) : coords(std::move(c)) {}
    static Site origin(int d) { return Site(std::vector<int>(d, 0)); }

    int dim() const { return static_cast<int>(coords.size()); }
    int operator[](int i) const { return coords[i]; }
    int& operator[](int i) { return coords[i]; }

    bool operator==(const Site& o) const { return coords == o.coords; }
    bool operator!=(const Site& o) const { return coords != o.coords; }
    // lexicographic; doubles as the canonical enumeration order
    bool operator<(const Site& o) const { return coords < o.coords; }

    std::string str() const;
};

Site operator+(const Site& a, const Site& b);
Site operator-(const Site& a, const Site& b);

// |n| = max_i |n_i|
int sup_norm(const Site& n);
// throws std::invalid_argument on dimension mismatch
int sup_distance(const Site& m, const Site& n);

// Cube of radius L about a center, sites enumerated lexicographically.
class Cube {
public:
    Cube(Site center, int radius);

    const Site& center() const { return center_; }
    int radius() const { return radius_; }
    int dim() const { return center_.dim(); }
    int size() const { return static_cast<int>(sites_.size()); }
    const std::vector<Site>& sites() const { return sites_; }

    bool contains(const Site& s) const;
    // position in the enumeration, -1 if outside
    int index_of(const Site& s) const;
    const Site& site(int i) const { return sites_[i]; }

    bool operator==(const Cube& o) const { return center_ == o.center_ && radius_ == o.radius_; }

    std::string id() const;

private:
    Site center_;
    int radius_;
    std::vector<Site> sites_;
};

std::vector<Site> cube_sites(const Site& center, int radius);

struct Annulus {
    Cube outer;
    Cube inner;               // same center, inner.radius <= outer.radius
    std::vector<Site> sites;  // outer minus closed inner cube, enumeration order
};

Annulus make_annulus(const Site& center, int outer_radius, int inner_radius);

// Inner/outer radii of the two annulus conventions used by the multiscale
// and eigenfunction-decay arguments, given consecutive scales (Lk, Lk1):
//   msa:  strictly outside radius Lk, inside radius 2*Lk1
//   sule: strictly outside floor(4/3*Lk), inside floor(8/5*Lk1)
enum class AnnulusVariant { msa, sule };
struct AnnulusRadii {
    int inner;
    int outer;
};
AnnulusRadii annulus_radii(AnnulusVariant v, long long Lk, long long Lk1);

struct TailSum {
    double value;
    double error_bound;  // certified absolute truncation bound
};

// sum over |n| >= L of |n|^-theta, n in Z^d; requires theta - d > 1, L > 2
TailSum tail_sum(double theta, int d, long long L);

// same sum from L >= 1 on, requires only theta > d (internal engine, used for
// kernel norms); certified like tail_sum
TailSum shell_power_tail(double theta, int d, long long L);

// number of sites with |n| = m exactly: (2m+1)^d - (2m-1)^d for m >= 1, 1 for m = 0
double shell_count(int d, long long m);

}  // namespace polyloc
