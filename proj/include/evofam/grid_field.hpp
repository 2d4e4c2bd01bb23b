#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "evofam/multi_index.hpp"

namespace evofam {

// Periodic grid on [0, L)^d with n points per axis and N field components.
struct GridGeometry {
    int dim = 1;         // d
    int points_per_axis = 16;  // n (power of two)
    double length = 2.0 * M_PI;  // L
    int components = 1;  // N

    int total_points() const;
    double cell_volume() const;
    bool operator==(const GridGeometry&) const = default;
};

// N-component complex field sampled on the grid.  Values are stored point by
// point with the N components contiguous; the spatial index is row-major
// with the last axis fastest (FFTW layout).
class GridField {
public:
    explicit GridField(GridGeometry geometry);

    const GridGeometry& geometry() const { return geometry_; }

    std::complex<double>& at(int point, int component);
    const std::complex<double>& at(int point, int component) const;

    std::vector<std::complex<double>>& values() { return values_; }
    const std::vector<std::complex<double>>& values() const { return values_; }

    // Component vector at a grid point.
    Eigen::VectorXcd point_vector(int point) const;
    void set_point_vector(int point, const Eigen::VectorXcd& value);

    // Physical coordinates of a grid point.
    Eigen::VectorXd coordinates(int point) const;

    // Discrete L^2 norm with the cell volume: sqrt(sum_x |u(x)|^2 vol).
    double l2_norm() const;

    bool all_finite() const;

    GridField& operator+=(const GridField& other);
    GridField& operator-=(const GridField& other);
    GridField& operator*=(std::complex<double> scalar);

private:
    GridGeometry geometry_;
    std::vector<std::complex<double>> values_;
};

GridField operator-(GridField a, const GridField& b);
GridField operator+(GridField a, const GridField& b);
GridField operator*(std::complex<double> scalar, GridField a);

// Forward/inverse DFT between the physical and frequency representation.
// The forward transform is the unnormalized FFTW sum; the inverse divides by
// the point count, so inverse(forward(u)) == u.  Frequencies are
// xi_k = 2 pi k / L with integer k in [-n/2, n/2] per axis.
class SpectralTransform {
public:
    explicit SpectralTransform(GridGeometry geometry);
    ~SpectralTransform();

    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    const GridGeometry& geometry() const { return geometry_; }

    GridField forward(const GridField& physical) const;
    GridField inverse(const GridField& spectral) const;

    // Signed integer frequency multi-index of a flat spatial index.
    std::vector<int> wavenumber(int flat_index) const;
    // xi_k = 2 pi k / L.
    Eigen::VectorXd frequency(int flat_index) const;
    // max_j |k_j| of the flat index.
    int wavenumber_max_abs(int flat_index) const;

private:
    struct Plans;
    GridGeometry geometry_;
    std::unique_ptr<Plans> plans_;
};

// u with spectral data multiplied by the scalar symbol fn(xi) per frequency.
GridField apply_scalar_multiplier(const SpectralTransform& transform, const GridField& u,
                                  const std::function<std::complex<double>(const Eigen::VectorXd&)>& fn);

// Spectral derivative D^alpha (symbol xi^alpha with D = -i d/dx).
GridField spectral_derivative(const SpectralTransform& transform, const GridField& u,
                              const MultiIndex& alpha);

// Single Fourier mode e^{i <xi_k, x>} in one component, for integer
// wavenumber k.
GridField fourier_mode(const GridGeometry& geometry, const std::vector<int>& wavenumber,
                       int component, std::complex<double> amplitude = 1.0);

// Random field with spectrum supported in |k|_inf <= band_limit, normalized
// to unit L^2 norm.  Deterministic in the seed.
GridField random_band_limited(const GridGeometry& geometry, int band_limit, unsigned seed);

// Flat binary export: float32 little-endian (re, im) pairs in storage order,
// with a JSON sidecar (d, n, L, N) at path + ".json".
void save_grid_field(const GridField& field, const std::string& path);
GridField load_grid_field(const std::string& path);

// Uniform cells over a time window; field data lives at cell midpoints.
struct TimeGrid {
    double t_begin = 0.0;
    double t_end = 1.0;
    int cells = 1;

    double dt() const { return (t_end - t_begin) / cells; }
    double midpoint(int i) const { return t_begin + (i + 0.5) * dt(); }
    double edge(int i) const { return t_begin + i * dt(); }
};

}  // namespace evofam
