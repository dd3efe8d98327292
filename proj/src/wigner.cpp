#include <obspace/wigner.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace obspace {

namespace {

using cplx = std::complex<double>;

constexpr double kTwoPi = 2.0 * M_PI;

void check_grid(const PhaseSpaceGrid& g) {
    if (g.n_x < 2 || g.n_p < 2) throw WignerError("grid needs at least 2 points per axis");
    if (!(g.x_hi > g.x_lo) || !(g.p_hi > g.p_lo))
        throw WignerError("grid bounds must be increasing");
}

void check_line_grid(const LineGrid& g) {
    if (g.n < 2) throw WignerError("line grid needs at least 2 points");
    if (!(g.hi > g.lo)) throw WignerError("line grid bounds must be increasing");
}

void check_state(const WaveFunction& psi) {
    if (!psi.evaluator) throw WignerError("state has no evaluator");
    if (!(psi.hbar > 0.0)) throw WignerError("hbar must be positive");
    if (!(psi.support_hi > psi.support_lo)) throw WignerError("state support is empty");
    // Fine enough that even piecewise-linear sampled states are measured
    // well below the acceptance tolerance.
    const std::size_t n = 262144;
    const double h = (psi.support_hi - psi.support_lo) / double(n);
    double total = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        total += w * std::norm(psi.evaluator(psi.support_lo + double(i) * h));
    }
    total *= h;
    if (std::abs(total - 1.0) > 1e-8) {
        std::ostringstream msg;
        msg << "state is not normalized: integral of |psi|^2 is " << total;
        throw WignerError(msg.str());
    }
}

double support_radius(const WaveFunction& psi) {
    return std::max(std::abs(psi.support_lo), std::abs(psi.support_hi));
}

// <psi| e^{-i(alpha X + beta P)} |psi> without re-validating the state.
cplx weyl_core(const WaveFunction& psi, double alpha, double beta) {
    const double shift = beta * psi.hbar;
    const double lo = std::max(psi.support_lo, psi.support_lo + shift);
    const double hi = std::min(psi.support_hi, psi.support_hi + shift);
    if (!(hi > lo)) return cplx(0.0, 0.0);
    const double step = std::min(0.02, M_PI / (4.0 * (std::abs(alpha) + 1.0)));
    const std::size_t n = std::max<std::size_t>(64, std::size_t((hi - lo) / step) + 1);
    const double h = (hi - lo) / double(n);
    cplx sum(0.0, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double y = lo + double(i) * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        sum += w * std::conj(psi.evaluator(y)) * std::polar(1.0, -alpha * y) *
               psi.evaluator(y - shift);
    }
    return std::polar(1.0, alpha * beta * psi.hbar / 2.0) * sum * h;
}

}  // namespace

WaveFunction gaussian_state(double hbar) {
    WaveFunction psi;
    const double norm = std::pow(M_PI, -0.25);
    psi.evaluator = [norm](double x) { return cplx(norm * std::exp(-x * x / 2.0), 0.0); };
    psi.support_lo = -9.0;
    psi.support_hi = 9.0;
    psi.family = "gaussian";
    psi.hbar = hbar;
    return psi;
}

WaveFunction hermite_state(unsigned n, double hbar) {
    if (n > 8) throw WignerError("hermite states are supported up to n = 8");
    double fact = 1.0;
    for (unsigned k = 2; k <= n; ++k) fact *= double(k);
    const double norm = 1.0 / std::sqrt(std::pow(2.0, double(n)) * fact * std::sqrt(M_PI));
    WaveFunction psi;
    psi.evaluator = [n, norm](double x) {
        double h_prev = 1.0, h = 2.0 * x;
        if (n == 0) h = 1.0;
        for (unsigned k = 2; k <= n; ++k) {
            double next = 2.0 * x * h - 2.0 * double(k - 1) * h_prev;
            h_prev = h;
            h = next;
        }
        return cplx(norm * h * std::exp(-x * x / 2.0), 0.0);
    };
    psi.support_lo = -(9.0 + double(n));
    psi.support_hi = 9.0 + double(n);
    psi.family = "hermite:" + std::to_string(n);
    psi.hbar = hbar;
    check_state(psi);
    return psi;
}

WaveFunction sampled_state(const std::string& path, double hbar) {
    std::ifstream in(path);
    if (!in) throw WignerError("cannot open state file '" + path + "'");
    std::vector<double> xs, res, ims;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream row(line);
        double x, re, im = 0.0;
        if (!(row >> x >> re))
            throw WignerError("state file rows must be 'x re [im]', got: " + line);
        row >> im;
        if (!xs.empty() && x <= xs.back())
            throw WignerError("state file x values must be strictly increasing");
        xs.push_back(x);
        res.push_back(re);
        ims.push_back(im);
    }
    if (xs.size() < 2) throw WignerError("state file needs at least two samples");
    WaveFunction psi;
    psi.evaluator = [xs, res, ims](double x) {
        if (x <= xs.front() || x >= xs.back()) return cplx(0.0, 0.0);
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t k = std::size_t(it - xs.begin()) - 1;
        double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
        return cplx(res[k] + t * (res[k + 1] - res[k]), ims[k] + t * (ims[k + 1] - ims[k]));
    };
    psi.support_lo = xs.front();
    psi.support_hi = xs.back();
    psi.family = "sampled";
    psi.hbar = hbar;
    check_state(psi);
    return psi;
}

WaveFunction state_from_spec(const std::string& spec, double hbar) {
    if (spec == "gaussian") return gaussian_state(hbar);
    if (spec.rfind("hermite:", 0) == 0) {
        const std::string tail = spec.substr(8);
        std::size_t used = 0;
        int n = -1;
        try {
            n = std::stoi(tail, &used);
        } catch (const std::exception&) {
            throw WignerError("bad hermite index in state spec '" + spec + "'");
        }
        if (used != tail.size() || n < 0)
            throw WignerError("bad hermite index in state spec '" + spec + "'");
        return hermite_state(unsigned(n), hbar);
    }
    if (spec.rfind("sampled:", 0) == 0) return sampled_state(spec.substr(8), hbar);
    throw WignerError("unknown state spec '" + spec +
                      "' (expected gaussian, hermite:<n>, or sampled:<file>)");
}

double PhaseSpaceField::integral() const {
    double total = 0.0;
    for (std::size_t i = 0; i < grid.n_x; ++i) {
        const double wi = (i == 0 || i + 1 == grid.n_x) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < grid.n_p; ++j) {
            const double wj = (j == 0 || j + 1 == grid.n_p) ? 0.5 : 1.0;
            total += wi * wj * at(i, j);
        }
    }
    return total * dx() * dp();
}

double LineDensity::integral() const {
    double total = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i)
        total += ((i == 0 || i + 1 == grid.n) ? 0.5 : 1.0) * values[i];
    return total * grid.dz();
}

double interval_probability(const LineDensity& g, double u, double v) {
    u = std::max(u, g.grid.lo);
    v = std::min(v, g.grid.hi);
    if (!(v > u)) return 0.0;
    auto value_at = [&](double z) {
        double f = (z - g.grid.lo) / g.grid.dz();
        std::size_t k = std::min(std::size_t(f), g.grid.n - 2);
        double t = f - double(k);
        return g.values[k] + t * (g.values[k + 1] - g.values[k]);
    };
    // Piecewise-linear integrand: trapezoid over interior nodes plus the
    // exact integral of the linear pieces at each partial end.
    std::size_t first = std::size_t(std::ceil((u - g.grid.lo) / g.grid.dz() - 1e-12));
    std::size_t last = std::size_t(std::floor((v - g.grid.lo) / g.grid.dz() + 1e-12));
    last = std::min(last, g.grid.n - 1);
    if (first > last) {
        // Both ends inside one cell.
        return (v - u) * (value_at(u) + value_at(v)) / 2.0;
    }
    double total = 0.0;
    for (std::size_t k = first; k + 1 <= last; ++k)
        total += (g.values[k] + g.values[k + 1]) / 2.0 * g.grid.dz();
    double zf = g.grid.z(first);
    if (u < zf) total += (zf - u) * (value_at(u) + g.values[first]) / 2.0;
    double zl = g.grid.z(last);
    if (v > zl) total += (v - zl) * (g.values[last] + value_at(v)) / 2.0;
    return total;
}

std::complex<double> density_transform(const LineDensity& g, double zeta) {
    cplx sum(0.0, 0.0);
    for (std::size_t i = 0; i < g.grid.n; ++i) {
        const double w = (i == 0 || i + 1 == g.grid.n) ? 0.5 : 1.0;
        sum += w * g.values[i] * std::polar(1.0, -zeta * g.grid.z(i));
    }
    return sum * g.grid.dz();
}

PhaseSpaceField wigner_density(const WaveFunction& psi, const PhaseSpaceGrid& grid) {
    check_state(psi);
    check_grid(grid);
    PhaseSpaceField field{grid, psi.hbar, {}, 0.0};
    const double radius = support_radius(psi);
    const double band = 2.0 * radius / psi.hbar;
    if (field.dp() > M_PI / band) {
        std::ostringstream msg;
        msg << "p grid too coarse: spacing " << field.dp()
            << " cannot resolve the state's bandwidth (need <= " << M_PI / band << ")";
        throw WignerError(msg.str());
    }
    const double p_absmax = std::max(std::abs(grid.p_lo), std::abs(grid.p_hi));
    const double dbeta = kTwoPi / (p_absmax + std::max(10.0 * psi.hbar, 10.0));
    const long half = long(std::ceil(band / dbeta));
    const long n_b = 2 * half + 1;

    Eigen::MatrixXcd corr(grid.n_x, n_b);
    for (std::size_t i = 0; i < grid.n_x; ++i) {
        const double x = field.x(i);
        for (long k = -half; k <= half; ++k) {
            const double beta = double(k) * dbeta;
            const double w = (k == -half || k == half) ? 0.5 : 1.0;
            corr(i, k + half) = w * std::conj(psi.evaluator(x + beta * psi.hbar / 2.0)) *
                                psi.evaluator(x - beta * psi.hbar / 2.0) * dbeta / kTwoPi;
        }
    }
    Eigen::MatrixXcd kernel(n_b, grid.n_p);
    for (long k = -half; k <= half; ++k)
        for (std::size_t j = 0; j < grid.n_p; ++j)
            kernel(k + half, j) = std::polar(1.0, double(k) * dbeta * field.p(j));
    Eigen::MatrixXcd w = corr * kernel;

    field.values.resize(grid.n_x * grid.n_p);
    for (std::size_t i = 0; i < grid.n_x; ++i)
        for (std::size_t j = 0; j < grid.n_p; ++j) {
            field.at(i, j) = w(i, j).real();
            field.imag_residue = std::max(field.imag_residue, std::abs(w(i, j).imag()));
        }
    if (field.imag_residue >= 1e-10)
        throw WignerError("phase-space density failed to come out real");
    return field;
}

LineDensity marginal_density(const PhaseSpaceField& f, double a, double b,
                             const LineGrid& zgrid) {
    if (a == 0.0 && b == 0.0) throw WignerError("coefficients (0, 0) define no direction");
    check_line_grid(zgrid);
    LineDensity g{zgrid, a, b, std::vector<double>(zgrid.n, 0.0)};
    const bool via_p = std::abs(b) >= std::abs(a);
    const std::size_t along = via_p ? f.grid.n_x : f.grid.n_p;
    const double step = via_p ? f.dx() : f.dp();
    const double cross_lo = via_p ? f.grid.p_lo : f.grid.x_lo;
    const double cross_step = via_p ? f.dp() : f.dx();
    const std::size_t cross_n = via_p ? f.grid.n_p : f.grid.n_x;
    for (std::size_t zi = 0; zi < zgrid.n; ++zi) {
        const double z = zgrid.z(zi);
        double total = 0.0;
        for (std::size_t i = 0; i < along; ++i) {
            const double s = via_p ? f.x(i) : f.p(i);
            const double t = via_p ? (z - a * s) / b : (z - b * s) / a;
            const double pos = (t - cross_lo) / cross_step;
            if (pos < 0.0 || pos > double(cross_n - 1)) continue;
            std::size_t k = std::min(std::size_t(pos), cross_n - 2);
            const double frac = pos - double(k);
            const double lo = via_p ? f.at(i, k) : f.at(k, i);
            const double hi = via_p ? f.at(i, k + 1) : f.at(k + 1, i);
            const double w = (i == 0 || i + 1 == along) ? 0.5 : 1.0;
            total += w * (lo + frac * (hi - lo));
        }
        g.values[zi] = total * step / std::abs(via_p ? b : a);
    }
    return g;
}

LineDensity qm_line_density(const WaveFunction& psi, double a, double b,
                            const LineGrid& zgrid) {
    if (a == 0.0 && b == 0.0) throw WignerError("coefficients (0, 0) define no direction");
    check_line_grid(zgrid);
    check_state(psi);
    LineDensity g{zgrid, a, b, std::vector<double>(zgrid.n, 0.0)};
    if (b == 0.0) {
        for (std::size_t i = 0; i < zgrid.n; ++i)
            g.values[i] = std::norm(psi.evaluator(zgrid.z(i) / a)) / std::abs(a);
        return g;
    }
    const double chirp = -a / (b * psi.hbar);
    const double radius = support_radius(psi);
    const double freq_max =
        std::abs(chirp) * radius +
        std::max(std::abs(zgrid.lo), std::abs(zgrid.hi)) / std::abs(b * psi.hbar);
    const double step = std::min(0.02, M_PI / (4.0 * (freq_max + 1.0)));
    const std::size_t n = std::size_t((psi.support_hi - psi.support_lo) / step) + 1;
    const double h = (psi.support_hi - psi.support_lo) / double(n);
    std::vector<cplx> chirped(n + 1);
    std::vector<double> xs(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        const double x = psi.support_lo + double(m) * h;
        const double w = (m == 0 || m == n) ? 0.5 : 1.0;
        xs[m] = x;
        chirped[m] = w * psi.evaluator(x) * std::polar(1.0, -chirp * x * x / 2.0);
    }
    for (std::size_t i = 0; i < zgrid.n; ++i) {
        const double kappa = zgrid.z(i) / (b * psi.hbar);
        cplx amp(0.0, 0.0);
        for (std::size_t m = 0; m <= n; ++m)
            amp += chirped[m] * std::polar(1.0, -kappa * xs[m]);
        amp *= h;
        g.values[i] = std::norm(amp) / (kTwoPi * psi.hbar * std::abs(b));
    }
    return g;
}

std::complex<double> weyl_characteristic(const WaveFunction& psi, double alpha,
                                         double beta) {
    check_state(psi);
    return weyl_core(psi, alpha, beta);
}

double characteristic_consistency(const WaveFunction& psi, double a, double b,
                                  double zeta) {
    if (a == 0.0 && b == 0.0) throw WignerError("coefficients (0, 0) define no direction");
    const double radius = support_radius(psi);
    const double extent = std::abs(a) * radius + std::abs(b) * radius * psi.hbar + 2.0;
    LineGrid zgrid{-extent, extent, 4001};
    LineDensity g = qm_line_density(psi, a, b, zgrid);
    cplx lhs = density_transform(g, zeta);
    cplx rhs = weyl_core(psi, a * zeta, b * zeta);
    return std::abs(lhs - rhs);
}

PhaseSpaceField reconstruct_from_marginals(const WaveFunction& psi,
                                           std::size_t ray_count,
                                           const PhaseSpaceGrid& grid) {
    check_state(psi);
    check_grid(grid);
    if (ray_count < 8) throw WignerError("reconstruction needs at least 8 rays");
    PhaseSpaceField field{grid, psi.hbar, {}, 0.0};

    // Radial extent: grow until the characteristic function has decayed.
    double zeta_max = 4.0;
    while (zeta_max < 30.0) {
        double peak = 0.0;
        for (double t : {0.0, M_PI / 4.0, M_PI / 2.0, 3.0 * M_PI / 4.0})
            peak = std::max(peak,
                            std::abs(weyl_core(psi, zeta_max * std::cos(t),
                                               zeta_max * std::sin(t))));
        if (peak < 1e-9) break;
        zeta_max += 0.5;
    }
    zeta_max += 1.0;

    const double reach = std::max(std::max(std::abs(grid.x_lo), std::abs(grid.x_hi)),
                                  std::max(std::abs(grid.p_lo), std::abs(grid.p_hi)));
    const std::size_t needed = std::size_t(std::ceil(2.0 * zeta_max * reach / M_PI));
    if (ray_count < needed) {
        std::ostringstream msg;
        msg << "ray count " << ray_count << " cannot resolve the grid (need >= " << needed
            << " for frequencies up to " << zeta_max << ")";
        throw WignerError(msg.str());
    }

    // Polar samples of the transform (1/2pi) weyl(zeta cos t, zeta sin t);
    // negative radii come from Hermitian symmetry.
    const double dzeta = 0.05;
    const long rhalf = long(std::ceil(zeta_max / dzeta));
    const long n_r = 2 * rhalf + 1;
    const double dtheta = M_PI / double(ray_count);
    Eigen::MatrixXcd polar(ray_count, n_r);
    for (std::size_t j = 0; j < ray_count; ++j) {
        const double th = double(j) * dtheta;
        for (long k = 0; k <= rhalf; ++k) {
            const double zeta = double(k) * dzeta;
            const cplx v =
                weyl_core(psi, zeta * std::cos(th), zeta * std::sin(th)) / kTwoPi;
            polar(j, rhalf + k) = v;
            polar(j, rhalf - k) = std::conj(v);
        }
    }

    // Cartesian frequency grid, spaced so the periodic images of the
    // inverse transform land far outside the requested window.
    const double dfreq = kTwoPi / (reach + support_radius(psi) * (1.0 + psi.hbar) + 6.0);
    const long fhalf = long(std::ceil(zeta_max / dfreq));
    const long n_f = 2 * fhalf + 1;
    Eigen::MatrixXcd cart = Eigen::MatrixXcd::Zero(n_f, n_f);
    for (long mi = -fhalf; mi <= fhalf; ++mi)
        for (long ni = -fhalf; ni <= fhalf; ++ni) {
            const double alpha = double(mi) * dfreq;
            const double beta = double(ni) * dfreq;
            const double r = std::hypot(alpha, beta);
            if (r > zeta_max) continue;
            double th = std::atan2(beta, alpha);
            double rr = r;
            if (th < 0.0) {
                th += M_PI;
                rr = -r;
            }
            double tpos = th / dtheta;
            std::size_t t0 = std::min(std::size_t(tpos), ray_count - 1);
            const double tfrac = tpos - double(t0);
            const double rpos = rr / dzeta + double(rhalf);
            long r0 = std::min(long(rpos), n_r - 2);
            const double rfrac = rpos - double(r0);
            const cplx v00 = polar(t0, r0);
            const cplx v01 = polar(t0, r0 + 1);
            cplx v10, v11;
            if (t0 + 1 == ray_count) {
                // Wrap: the ray at angle pi is the first ray radially flipped.
                v10 = polar(0, n_r - 1 - r0);
                v11 = polar(0, n_r - 1 - (r0 + 1));
            } else {
                v10 = polar(t0 + 1, r0);
                v11 = polar(t0 + 1, r0 + 1);
            }
            cart(mi + fhalf, ni + fhalf) = (1.0 - tfrac) * ((1.0 - rfrac) * v00 + rfrac * v01) +
                                           tfrac * ((1.0 - rfrac) * v10 + rfrac * v11);
        }

    // Separable inverse transform onto the requested grid.
    Eigen::MatrixXcd row_kernel(grid.n_x, n_f), col_kernel(n_f, grid.n_p);
    for (std::size_t i = 0; i < grid.n_x; ++i)
        for (long m = -fhalf; m <= fhalf; ++m)
            row_kernel(i, m + fhalf) = std::polar(1.0, double(m) * dfreq * field.x(i)) * dfreq;
    for (long m = -fhalf; m <= fhalf; ++m)
        for (std::size_t j = 0; j < grid.n_p; ++j)
            col_kernel(m + fhalf, j) = std::polar(1.0, double(m) * dfreq * field.p(j)) * dfreq;
    Eigen::MatrixXcd w = row_kernel * cart * col_kernel / kTwoPi;

    field.values.resize(grid.n_x * grid.n_p);
    for (std::size_t i = 0; i < grid.n_x; ++i)
        for (std::size_t j = 0; j < grid.n_p; ++j) {
            field.at(i, j) = w(i, j).real();
            field.imag_residue = std::max(field.imag_residue, std::abs(w(i, j).imag()));
        }
    return field;
}

void write_field(std::ostream& out, const PhaseSpaceField& f) {
    char buf[64];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << sep;
    };
    put(f.grid.x_lo, ' ');
    put(f.grid.x_hi, ' ');
    out << f.grid.n_x << ' ';
    put(f.grid.p_lo, ' ');
    put(f.grid.p_hi, ' ');
    out << f.grid.n_p << ' ';
    put(f.hbar, '\n');
    for (std::size_t i = 0; i < f.grid.n_x; ++i)
        for (std::size_t j = 0; j < f.grid.n_p; ++j)
            put(f.at(i, j), j + 1 == f.grid.n_p ? '\n' : ' ');
}

PhaseSpaceField read_field(std::istream& in) {
    PhaseSpaceGrid grid{};
    double hbar = 0.0;
    if (!(in >> grid.x_lo >> grid.x_hi >> grid.n_x >> grid.p_lo >> grid.p_hi >> grid.n_p >>
          hbar))
        throw WignerError("bad field header (expected: x_lo x_hi n_x p_lo p_hi n_p hbar)");
    check_grid(grid);
    if (!(hbar > 0.0)) throw WignerError("bad field header: hbar must be positive");
    PhaseSpaceField f{grid, hbar, std::vector<double>(grid.n_x * grid.n_p, 0.0), 0.0};
    for (double& v : f.values)
        if (!(in >> v)) throw WignerError("field body ended early");
    return f;
}

}  // namespace obspace
