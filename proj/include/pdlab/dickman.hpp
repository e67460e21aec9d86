#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace pdlab {

// Tabulated Dickman function rho on (0, u_max].
//
// rho = 1 on (0, 1]. Beyond 1 the table solves the integrated form of
// u rho'(u) = -rho(u - 1),
//   u rho(u) = \int_{u-1}^{u} rho(t) dt,
// one subpanel of width `step` at a time, left to right. On each subpanel rho
// is held at Chebyshev points of the second kind (degree `order`) and the
// relation is collocated at those points; the right side only involves
// integrals of positive values, so relative accuracy survives even where
// rho is tiny. Subpanels tile every unit exactly, so no interpolant spans an
// integer, where rho has its derivative kinks. Queries use barycentric
// interpolation.
class RhoTable {
public:
    struct Options {
        double u_max = 20.0;
        int panels_per_unit = 8;
        int order = 16;
    };

    RhoTable() : RhoTable(Options{}) {}
    explicit RhoTable(Options opts);

    // rho(u) for 0 < u <= u_max. ValidationError for u <= 0 or u > u_max.
    double operator()(double u) const;

    double u_max() const { return u_max_; }
    double step() const { return 1.0 / panels_per_unit_; }
    int order() const { return order_; }

    // Node values of one subpanel, for inspection and tests.
    std::size_t subpanel_count() const { return values_.size() / (order_ + 1); }

    // Writes "u,rho" rows on a uniform grid of the given spacing, starting
    // at `spacing` and ending at u_max.
    void write_csv(std::ostream& out, double spacing) const;

private:
    double eval_subpanel(std::size_t panel, double u) const;

    double u_max_;
    int units_;
    int panels_per_unit_;
    int order_;
    std::vector<double> nodes_;    // Chebyshev points on [-1, 1], descending
    std::vector<double> bary_;     // barycentric weights
    std::vector<double> values_;   // (order + 1) values per subpanel, from u = 0 onward
};

// P(L_1 <= c) = rho(1/c) for the first Poisson-Dirichlet coordinate.
// Requires 0 < c <= 1 and 1/c <= table.u_max().
double cdf_largest(const RhoTable& table, double c);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace pdlab
