#pragma once

#include <obspace/scalar.hpp>

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace obspace {

struct WignerError : Error {
    using Error::Error;
};

// A pure state of one particle on the line. The evaluator must decay to
// negligible magnitude (< 1e-12) outside [support_lo, support_hi], and
// |psi|^2 must integrate to 1 within 1e-8 on the working grid; operations
// verify the normalization before using the state.
struct WaveFunction {
    std::function<std::complex<double>(double)> evaluator;
    double support_lo = 0.0;
    double support_hi = 0.0;
    std::string family;  // "gaussian", "hermite:<n>", "sampled", or custom
    double hbar = 1.0;
};

// Ground state pi^{-1/4} e^{-x^2/2}.
WaveFunction gaussian_state(double hbar = 1.0);

// n-th harmonic oscillator eigenstate (unit frequency, unit mass scale).
WaveFunction hermite_state(unsigned n, double hbar = 1.0);

// State from plain-text samples: rows "x re [im]" with strictly increasing
// x, linearly interpolated between samples and zero outside.
WaveFunction sampled_state(const std::string& path, double hbar = 1.0);

// Dispatch on a state specifier: "gaussian", "hermite:<n>", "sampled:<file>".
WaveFunction state_from_spec(const std::string& spec, double hbar = 1.0);

struct PhaseSpaceGrid {
    double x_lo, x_hi;
    std::size_t n_x;
    double p_lo, p_hi;
    std::size_t n_p;
};

// Real-valued function sampled on a uniform rectangular phase-space grid,
// stored row-major with x as the row index.
struct PhaseSpaceField {
    PhaseSpaceGrid grid;
    double hbar = 1.0;
    std::vector<double> values;
    double imag_residue = 0.0;  // largest |Im| discarded while computing

    double& at(std::size_t i, std::size_t j) { return values[i * grid.n_p + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * grid.n_p + j]; }
    double dx() const { return (grid.x_hi - grid.x_lo) / double(grid.n_x - 1); }
    double dp() const { return (grid.p_hi - grid.p_lo) / double(grid.n_p - 1); }
    double x(std::size_t i) const { return grid.x_lo + double(i) * dx(); }
    double p(std::size_t j) const { return grid.p_lo + double(j) * dp(); }
    double integral() const;  // 2D trapezoid over the grid
};

struct LineGrid {
    double lo, hi;
    std::size_t n;

    double dz() const { return (hi - lo) / double(n - 1); }
    double z(std::size_t i) const { return lo + double(i) * dz(); }
};

// Density of one real random variable z = a x + b p on a uniform grid.
struct LineDensity {
    LineGrid grid;
    double a = 0.0, b = 0.0;
    std::vector<double> values;

    double integral() const;  // trapezoid
};

// Integral of the density over [u, v] with linear interpolation at the
// interval ends.
double interval_probability(const LineDensity& g, double u, double v);

// The density integrated against e^{-i zeta z}.
std::complex<double> density_transform(const LineDensity& g, double zeta);

// Wigner's phase-space density
//   w(x,p) = (1/2pi) Integral psi*(x + b hbar/2) psi(x - b hbar/2) e^{ibp} db,
// computed as a discrete transform over a symmetric window in b chosen so
// the integrand has decayed below 1e-12 at the edges. Throws when the
// requested p spacing cannot resolve the state's bandwidth in b.
PhaseSpaceField wigner_density(const WaveFunction& psi, const PhaseSpaceGrid& grid);

// Marginal density of z = a x + b p for a sampled field: integrates along
// the lines a x + b p = z, dispatching on |b| >= |a| so the division is by
// the larger coefficient, with linear interpolation between grid rows.
LineDensity marginal_density(const PhaseSpaceField& f, double a, double b,
                             const LineGrid& zgrid);

// The quantum-mechanical density of a X + b P in the given state: for
// b != 0 multiply by the chirp e^{-i c x^2 / 2} with c = -a/(b hbar), Fourier
// transform to the momentum density, and rescale z by b; for b = 0 it is
// |psi(z/a)|^2 / |a|.
LineDensity qm_line_density(const WaveFunction& psi, double a, double b,
                            const LineGrid& zgrid);

// <psi| e^{-i(alpha X + beta P)} |psi>, evaluated as
//   e^{i alpha beta hbar / 2} Integral psi*(y) e^{-i alpha y} psi(y - beta hbar) dy.
std::complex<double> weyl_characteristic(const WaveFunction& psi, double alpha,
                                         double beta);

// | Integral qm_line_density e^{-i zeta z} dz  -  weyl(a zeta, b zeta) |:
// the two routes to the characteristic function of z must agree.
double characteristic_consistency(const WaveFunction& psi, double a, double b,
                                  double zeta);

// Tomographic reconstruction: sample (1/2pi) weyl(zeta cos t, zeta sin t)
// along ray_count directions, interpolate the polar samples onto a
// Cartesian frequency grid, and invert the two-dimensional transform onto
// the requested grid. Throws when the ray count cannot resolve the grid.
PhaseSpaceField reconstruct_from_marginals(const WaveFunction& psi,
                                           std::size_t ray_count,
                                           const PhaseSpaceGrid& grid);

// Plain-text matrix exchange format with the header line
// "x_lo x_hi n_x p_lo p_hi n_p hbar".
void write_field(std::ostream& out, const PhaseSpaceField& f);
PhaseSpaceField read_field(std::istream& in);

}  // namespace obspace
