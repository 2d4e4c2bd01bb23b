#include "evofam/grid_field.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <random>
#include <stdexcept>

#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "evofam/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "grid field binary format assumes a little-endian host");

namespace evofam {

int GridGeometry::total_points() const {
    int total = 1;
    for (int i = 0; i < dim; ++i) total *= points_per_axis;
    return total;
}

double GridGeometry::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= length / points_per_axis;
    return v;
}

namespace {

void validate_geometry(const GridGeometry& g) {
    if (g.dim < 1 || g.dim > 3) throw std::invalid_argument("GridGeometry: dim must be 1..3");
    if (g.points_per_axis < 2 || (g.points_per_axis & (g.points_per_axis - 1)) != 0)
        throw std::invalid_argument("GridGeometry: points per axis must be a power of two");
    if (!(g.length > 0.0)) throw std::invalid_argument("GridGeometry: length must be positive");
    if (g.components < 1) throw std::invalid_argument("GridGeometry: components must be >= 1");
}

}  // namespace

GridField::GridField(GridGeometry geometry) : geometry_(geometry) {
    validate_geometry(geometry_);
    values_.assign(static_cast<std::size_t>(geometry_.total_points()) *
                       static_cast<std::size_t>(geometry_.components),
                   {0.0, 0.0});
}

std::complex<double>& GridField::at(int point, int component) {
    return values_[static_cast<std::size_t>(point) * geometry_.components +
                   static_cast<std::size_t>(component)];
}

const std::complex<double>& GridField::at(int point, int component) const {
    return values_[static_cast<std::size_t>(point) * geometry_.components +
                   static_cast<std::size_t>(component)];
}

Eigen::VectorXcd GridField::point_vector(int point) const {
    Eigen::VectorXcd v(geometry_.components);
    for (int c = 0; c < geometry_.components; ++c) v[c] = at(point, c);
    return v;
}

void GridField::set_point_vector(int point, const Eigen::VectorXcd& value) {
    for (int c = 0; c < geometry_.components; ++c) at(point, c) = value[c];
}

Eigen::VectorXd GridField::coordinates(int point) const {
    Eigen::VectorXd x(geometry_.dim);
    const double h = geometry_.length / geometry_.points_per_axis;
    for (int axis = geometry_.dim - 1; axis >= 0; --axis) {
        x[axis] = (point % geometry_.points_per_axis) * h;
        point /= geometry_.points_per_axis;
    }
    return x;
}

double GridField::l2_norm() const {
    double sum = 0.0;
    for (const auto& v : values_) sum += std::norm(v);
    return std::sqrt(sum * geometry_.cell_volume());
}

bool GridField::all_finite() const {
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

GridField& GridField::operator+=(const GridField& other) {
    if (!(geometry_ == other.geometry_))
        throw std::invalid_argument("GridField: geometry mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridField& GridField::operator-=(const GridField& other) {
    if (!(geometry_ == other.geometry_))
        throw std::invalid_argument("GridField: geometry mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridField& GridField::operator*=(std::complex<double> scalar) {
    for (auto& v : values_) v *= scalar;
    return *this;
}

GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator*(std::complex<double> scalar, GridField a) { return a *= scalar; }

struct SpectralTransform::Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
    fftw_complex* buffer = nullptr;
    std::size_t buffer_size = 0;
    mutable std::mutex mutex;
};

namespace {
// FFTW planning is not thread-safe; all plan creation/destruction is
// serialized globally.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SpectralTransform::SpectralTransform(GridGeometry geometry)
    : geometry_(geometry), plans_(std::make_unique<Plans>()) {
    validate_geometry(geometry_);
    const int points = geometry_.total_points();
    plans_->buffer_size = static_cast<std::size_t>(points);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plans_->buffer = fftw_alloc_complex(plans_->buffer_size);
    std::vector<int> shape(static_cast<std::size_t>(geometry_.dim), geometry_.points_per_axis);
    plans_->forward = fftw_plan_dft(geometry_.dim, shape.data(), plans_->buffer, plans_->buffer,
                                    FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->inverse = fftw_plan_dft(geometry_.dim, shape.data(), plans_->buffer, plans_->buffer,
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plans_->forward || !plans_->inverse)
        throw numeric_error("SpectralTransform: FFTW plan creation failed");
}

SpectralTransform::~SpectralTransform() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (plans_->forward) fftw_destroy_plan(plans_->forward);
    if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
    if (plans_->buffer) fftw_free(plans_->buffer);
}

namespace {

GridField transform_components(const GridField& field, const GridGeometry& geometry,
                               fftw_plan plan, fftw_complex* buffer, std::mutex& mutex,
                               double scale) {
    GridField out(geometry);
    const int points = geometry.total_points();
    std::lock_guard<std::mutex> lock(mutex);
    for (int c = 0; c < geometry.components; ++c) {
        for (int p = 0; p < points; ++p) {
            const auto v = field.at(p, c);
            buffer[p][0] = v.real();
            buffer[p][1] = v.imag();
        }
        fftw_execute(plan);
        for (int p = 0; p < points; ++p)
            out.at(p, c) = std::complex<double>(buffer[p][0], buffer[p][1]) * scale;
    }
    return out;
}

}  // namespace

GridField SpectralTransform::forward(const GridField& physical) const {
    if (!(physical.geometry() == geometry_))
        throw std::invalid_argument("SpectralTransform: geometry mismatch");
    return transform_components(physical, geometry_, plans_->forward, plans_->buffer,
                                plans_->mutex, 1.0);
}

GridField SpectralTransform::inverse(const GridField& spectral) const {
    if (!(spectral.geometry() == geometry_))
        throw std::invalid_argument("SpectralTransform: geometry mismatch");
    return transform_components(spectral, geometry_, plans_->inverse, plans_->buffer,
                                plans_->mutex, 1.0 / geometry_.total_points());
}

std::vector<int> SpectralTransform::wavenumber(int flat_index) const {
    std::vector<int> k(static_cast<std::size_t>(geometry_.dim));
    const int n = geometry_.points_per_axis;
    for (int axis = geometry_.dim - 1; axis >= 0; --axis) {
        int idx = flat_index % n;
        flat_index /= n;
        k[static_cast<std::size_t>(axis)] = idx <= n / 2 ? idx : idx - n;
    }
    return k;
}

Eigen::VectorXd SpectralTransform::frequency(int flat_index) const {
    const auto k = wavenumber(flat_index);
    Eigen::VectorXd xi(geometry_.dim);
    for (int axis = 0; axis < geometry_.dim; ++axis)
        xi[axis] = 2.0 * M_PI * k[static_cast<std::size_t>(axis)] / geometry_.length;
    return xi;
}

int SpectralTransform::wavenumber_max_abs(int flat_index) const {
    const auto k = wavenumber(flat_index);
    int maxabs = 0;
    for (int v : k) maxabs = std::max(maxabs, std::abs(v));
    return maxabs;
}

GridField apply_scalar_multiplier(
    const SpectralTransform& transform, const GridField& u,
    const std::function<std::complex<double>(const Eigen::VectorXd&)>& fn) {
    GridField spectral = transform.forward(u);
    const int points = transform.geometry().total_points();
    for (int p = 0; p < points; ++p) {
        const std::complex<double> factor = fn(transform.frequency(p));
        for (int c = 0; c < transform.geometry().components; ++c) spectral.at(p, c) *= factor;
    }
    return transform.inverse(spectral);
}

GridField spectral_derivative(const SpectralTransform& transform, const GridField& u,
                              const MultiIndex& alpha) {
    if (static_cast<int>(alpha.size()) != transform.geometry().dim)
        throw std::invalid_argument("spectral_derivative: multi-index dimension mismatch");
    return apply_scalar_multiplier(
        transform, u, [&](const Eigen::VectorXd& xi) { return monomial(xi, alpha); });
}

GridField fourier_mode(const GridGeometry& geometry, const std::vector<int>& wavenumber,
                       int component, std::complex<double> amplitude) {
    if (static_cast<int>(wavenumber.size()) != geometry.dim)
        throw std::invalid_argument("fourier_mode: wavenumber dimension mismatch");
    if (component < 0 || component >= geometry.components)
        throw std::invalid_argument("fourier_mode: component out of range");
    GridField field(geometry);
    const int points = geometry.total_points();
    for (int p = 0; p < points; ++p) {
        const Eigen::VectorXd x = field.coordinates(p);
        double phase = 0.0;
        for (int axis = 0; axis < geometry.dim; ++axis)
            phase += 2.0 * M_PI * wavenumber[static_cast<std::size_t>(axis)] / geometry.length *
                     x[axis];
        field.at(p, component) = amplitude * std::polar(1.0, phase);
    }
    return field;
}

GridField random_band_limited(const GridGeometry& geometry, int band_limit, unsigned seed) {
    if (band_limit < 0 || band_limit > geometry.points_per_axis / 2)
        throw std::invalid_argument("random_band_limited: band limit out of range");
    SpectralTransform transform(geometry);
    GridField spectral(geometry);
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int points = geometry.total_points();
    for (int p = 0; p < points; ++p) {
        if (transform.wavenumber_max_abs(p) > band_limit) continue;
        for (int c = 0; c < geometry.components; ++c)
            spectral.at(p, c) = std::complex<double>(gauss(rng), gauss(rng));
    }
    GridField field = transform.inverse(spectral);
    const double norm = field.l2_norm();
    if (norm > 0.0) field *= 1.0 / norm;
    return field;
}

void save_grid_field(const GridField& field, const std::string& path) {
    {
        std::ofstream bin(path, std::ios::binary);
        if (!bin) throw std::runtime_error("save_grid_field: cannot open " + path);
        for (const auto& v : field.values()) {
            const float re = static_cast<float>(v.real());
            const float im = static_cast<float>(v.imag());
            bin.write(reinterpret_cast<const char*>(&re), sizeof(float));
            bin.write(reinterpret_cast<const char*>(&im), sizeof(float));
        }
    }
    nlohmann::json sidecar = {{"d", field.geometry().dim},
                              {"n", field.geometry().points_per_axis},
                              {"L", field.geometry().length},
                              {"N", field.geometry().components},
                              {"dtype", "complex64"},
                              {"byte_order", "little"}};
    std::ofstream meta(path + ".json");
    if (!meta) throw std::runtime_error("save_grid_field: cannot open " + path + ".json");
    meta << sidecar.dump(2) << "\n";
}

GridField load_grid_field(const std::string& path) {
    std::ifstream meta(path + ".json");
    if (!meta) throw std::runtime_error("load_grid_field: missing sidecar " + path + ".json");
    nlohmann::json sidecar = nlohmann::json::parse(meta);
    GridGeometry geometry;
    geometry.dim = sidecar.at("d").get<int>();
    geometry.points_per_axis = sidecar.at("n").get<int>();
    geometry.length = sidecar.at("L").get<double>();
    geometry.components = sidecar.at("N").get<int>();
    GridField field(geometry);

    std::ifstream bin(path, std::ios::binary);
    if (!bin) throw std::runtime_error("load_grid_field: cannot open " + path);
    for (auto& v : field.values()) {
        float re = 0.0f, im = 0.0f;
        bin.read(reinterpret_cast<char*>(&re), sizeof(float));
        bin.read(reinterpret_cast<char*>(&im), sizeof(float));
        if (!bin) throw std::runtime_error("load_grid_field: truncated data in " + path);
        v = std::complex<double>(re, im);
    }
    return field;
}

}  // namespace evofam
