#include "evofam/multi_index.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace evofam {

int order(const MultiIndex& alpha) {
    int s = 0;
    for (int a : alpha) {
        if (a < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
        s += a;
    }
    return s;
}

double monomial(const Eigen::VectorXd& xi, const MultiIndex& alpha) {
    if (xi.size() != static_cast<Eigen::Index>(alpha.size()))
        throw std::invalid_argument("monomial: dimension mismatch");
    double p = 1.0;
    for (Eigen::Index i = 0; i < xi.size(); ++i)
        for (int k = 0; k < alpha[static_cast<std::size_t>(i)]; ++k) p *= xi[i];
    return p;
}

bool component_le(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multi-index add: dimension mismatch");
    MultiIndex c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

MultiIndex subtract(const MultiIndex& a, const MultiIndex& b) {
    if (!component_le(b, a)) throw std::invalid_argument("multi-index subtract: b must be <= a");
    MultiIndex c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

namespace {
double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}
}  // namespace

double multinomial(const MultiIndex& gamma, const MultiIndex& eta) {
    if (gamma.size() != eta.size()) throw std::invalid_argument("multinomial: dimension mismatch");
    double c = 1.0;
    for (std::size_t i = 0; i < gamma.size(); ++i) c *= binomial(gamma[i], eta[i]);
    return c;
}

double falling_factorial(const MultiIndex& nu, const MultiIndex& eta) {
    if (nu.size() != eta.size()) throw std::invalid_argument("falling_factorial: dimension mismatch");
    if (!component_le(eta, nu)) return 0.0;
    double c = 1.0;
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (int k = 0; k < eta[i]; ++k) c *= static_cast<double>(nu[i] - k);
    return c;
}

namespace {
void enumerate(int dim, int total, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
    if (pos == dim - 1) {
        cur[static_cast<std::size_t>(pos)] = total;
        out.push_back(cur);
        return;
    }
    for (int k = total; k >= 0; --k) {
        cur[static_cast<std::size_t>(pos)] = k;
        enumerate(dim, total - k, cur, pos + 1, out);
    }
}
}  // namespace

std::vector<MultiIndex> indices_of_order(int dim, int total) {
    if (dim <= 0 || total < 0) throw std::invalid_argument("indices_of_order: bad arguments");
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<std::size_t>(dim), 0);
    enumerate(dim, total, cur, 0, out);
    return out;
}

std::vector<MultiIndex> indices_up_to(int dim, int total) {
    std::vector<MultiIndex> out;
    for (int k = 0; k <= total; ++k) {
        auto level = indices_of_order(dim, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

std::vector<MultiIndex> sub_indices(const MultiIndex& gamma) {
    std::vector<MultiIndex> out;
    MultiIndex cur(gamma.size(), 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = 0;
        while (i < gamma.size()) {
            if (cur[i] < gamma[i]) {
                ++cur[i];
                break;
            }
            cur[i] = 0;
            ++i;
        }
        if (i == gamma.size()) break;
    }
    return out;
}

std::string to_string(const MultiIndex& alpha) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) os << ",";
        os << alpha[i];
    }
    os << ")";
    return os.str();
}

}  // namespace evofam
