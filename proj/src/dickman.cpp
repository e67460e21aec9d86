#include "pdlab/dickman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "pdlab/common.hpp"

namespace pdlab {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

namespace {

// Solves a small dense system in place (Gaussian elimination, partial pivoting).
void solve_dense(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(b[col], b[piv]);
        }
        const double d = a[col * n + col];
        PDLAB_ASSERT(d != 0.0, "singular collocation matrix");
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r * n + c] * b[c];
        b[r] = acc / a[r * n + r];
    }
}

}  // namespace

RhoTable::RhoTable(Options opts)
    : u_max_(opts.u_max), panels_per_unit_(opts.panels_per_unit), order_(opts.order) {
    if (!(opts.u_max >= 1.0)) throw ValidationError("u_max", "must be at least 1");
    if (opts.panels_per_unit < 1) throw ValidationError("panels_per_unit", "must be positive");
    if (opts.order < 2) throw ValidationError("order", "must be at least 2");
    units_ = static_cast<int>(std::ceil(u_max_ - 1.0));

    const int n = order_ + 1;
    nodes_.resize(n);
    bary_.resize(n);
    for (int j = 0; j < n; ++j) {
        nodes_[j] = std::cos(std::numbers::pi * j / order_);
        bary_[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == order_) ? 0.5 : 1.0);
    }

    // Lagrange basis on the reference nodes.
    auto basis = [&](int i, double x) {
        double num = 0.0, den = 0.0, hit = -1.0;
        for (int j = 0; j < n; ++j) {
            const double diff = x - nodes_[j];
            if (diff == 0.0) {
                hit = (i == j) ? 1.0 : 0.0;
                break;
            }
            const double w = bary_[j] / diff;
            if (j == i) num = w;
            den += w;
        }
        return hit >= 0.0 ? hit : num / den;
    };

    // right[j][i] = \int_{x_j}^{1} l_i,  left[j][i] = \int_{-1}^{x_j} l_i.
    std::vector<double> gl_x, gl_w;
    gauss_legendre(n + 2, gl_x, gl_w);
    std::vector<double> right(n * n), left(n * n);
    auto integrate = [&](int i, double lo, double hi) {
        double acc = 0.0;
        for (std::size_t q = 0; q < gl_x.size(); ++q)
            acc += gl_w[q] * basis(i, lo + 0.5 * (hi - lo) * (gl_x[q] + 1.0));
        return 0.5 * (hi - lo) * acc;
    };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            right[j * n + i] = integrate(i, nodes_[j], 1.0);
            left[j * n + i] = integrate(i, -1.0, nodes_[j]);
        }

    // Subpanel p covers [p h, (p + 1) h]; the first unit, (0, 1], is rho = 1.
    // Node j of a subpanel sits at a + h (1 - x_j) / 2, so j = 0 is its left end.
    const double h = step();
    const std::size_t per = static_cast<std::size_t>(n);
    const std::size_t panels = static_cast<std::size_t>(units_ + 1) * panels_per_unit_;
    values_.assign(panels * per, 1.0);
    std::vector<double> full(panels, h);  // \int rho over each subpanel

    std::vector<double> mat(n * n), rhs(n);
    for (std::size_t p = panels_per_unit_; p < panels; ++p) {
        const double a = static_cast<double>(p) * h;
        const std::size_t back = p - panels_per_unit_;
        // Collocation of  t rho(t) - \int_a^t rho = \int_{t-1}^a rho  at every node t.
        double between = 0.0;  // subpanels strictly between back and p
        for (std::size_t s = back + 1; s < p; ++s) between += full[s];
        const double* vb = values_.data() + back * per;
        for (int j = 0; j < n; ++j) {
            const double t = a + 0.5 * h * (1.0 - nodes_[j]);
            double tail = 0.0;  // \int from node j of subpanel `back` to its right end
            for (int i = 0; i < n; ++i) tail += left[j * n + i] * vb[i];
            rhs[j] = 0.5 * h * tail + between;
            for (int i = 0; i < n; ++i) mat[j * n + i] = -0.5 * h * right[j * n + i];
            mat[j * n + j] += t;
        }
        // The left end is shared with the previous subpanel.
        for (int i = 0; i < n; ++i) mat[i] = (i == 0) ? 1.0 : 0.0;
        rhs[0] = values_[(p - 1) * per + order_];
        solve_dense(mat, rhs, n);
        std::copy(rhs.begin(), rhs.end(), values_.begin() + static_cast<std::ptrdiff_t>(p * per));
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += right[order_ * n + i] * rhs[i];
        full[p] = 0.5 * h * total;
    }
}

double RhoTable::eval_subpanel(std::size_t panel, double u) const {
    const double h = step();
    const int unit = static_cast<int>(panel / panels_per_unit_);
    const int sp = static_cast<int>(panel % panels_per_unit_);
    const double a = (static_cast<double>(unit) * panels_per_unit_ + sp) * h;
    // Map u in [a, a + h] onto x in [-1, 1] with x = 1 at the left end.
    const double x = 1.0 - 2.0 * (u - a) / h;
    const double* v = values_.data() + panel * (order_ + 1);
    double num = 0.0, den = 0.0;
    for (int j = 0; j <= order_; ++j) {
        const double diff = x - nodes_[j];
        if (diff == 0.0) return v[j];
        const double w = bary_[j] / diff;
        num += w * v[j];
        den += w;
    }
    return num / den;
}

double RhoTable::operator()(double u) const {
    if (!(u > 0.0)) throw ValidationError("u", "rho is defined for u > 0");
    if (u > u_max_) throw ValidationError("u", "out of table (u_max = " + std::to_string(u_max_) + ")");
    if (u <= 1.0) return 1.0;
    const double offset = u * panels_per_unit_;
    auto panel = static_cast<std::size_t>(offset);
    if (panel >= subpanel_count()) panel = subpanel_count() - 1;
    return eval_subpanel(panel, u);
}

void RhoTable::write_csv(std::ostream& out, double spacing) const {
    if (!(spacing > 0.0)) throw ValidationError("spacing", "must be positive");
    out << "u,rho\n";
    const auto steps = static_cast<long>(std::floor(u_max_ / spacing + 1e-9));
    out.precision(17);
    for (long i = 1; i <= steps; ++i) {
        const double u = std::min(u_max_, i * spacing);
        out << u << ',' << (*this)(u) << '\n';
    }
}

double cdf_largest(const RhoTable& table, double c) {
    if (!(c > 0.0 && c <= 1.0)) throw ValidationError("c", "threshold must lie in (0, 1]");
    return table(1.0 / c);
}

}  // namespace pdlab
