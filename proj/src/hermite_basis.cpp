#include "hermspec/hermite_basis.hpp"

#include "hermspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

namespace hermspec {

namespace {

constexpr double kRescaleThreshold = 1e100;
const double kLogRescale = std::log(kRescaleThreshold);
// Beyond this the Gaussian factor is applied in log form to avoid underflowing
// before the polynomial part has been multiplied in.
constexpr double kDirectExpLimit = 1400.0;

double pi_quarter() {
    static const double value = std::pow(std::numbers::pi, -0.25);
    return value;
}

bool is_finite(double t) { return std::isfinite(t); }
bool is_finite(std::complex<double> t) { return std::isfinite(t.real()) && std::isfinite(t.imag()); }

double gaussian_scaled(double psi, double log_scale, double t) {
    const double exponent = -0.5 * t * t;
    if (log_scale == 0.0 && -exponent < kDirectExpLimit) return psi * std::exp(exponent);
    if (psi == 0.0) return 0.0;
    return std::copysign(std::exp(std::log(std::abs(psi)) + log_scale + exponent), psi);
}

std::complex<double> gaussian_scaled(std::complex<double> psi, double log_scale, std::complex<double> t) {
    const std::complex<double> exponent = -0.5 * t * t;
    if (log_scale == 0.0 && std::abs(exponent.real()) < kDirectExpLimit) return psi * std::exp(exponent);
    if (psi == 0.0) return 0.0;
    return std::exp(std::log(psi) + log_scale + exponent);
}

template <class T>
void hermite_recurrence(int max_k, T t, std::span<T> out) {
    if (max_k < 0) throw InputError("hermite_functions: negative degree");
    if (!is_finite(t)) throw InputError("hermite_functions: non-finite argument");
    if (out.size() < static_cast<std::size_t>(max_k) + 1)
        throw InputError("hermite_functions: output buffer too small");

    T prev = 0.0;
    T cur = pi_quarter();
    double log_scale = 0.0;
    out[0] = gaussian_scaled(cur, log_scale, t);
    for (int k = 0; k < max_k; ++k) {
        const double kk = k;
        T next = std::sqrt(2.0 / (kk + 1.0)) * t * cur - std::sqrt(kk / (kk + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescaleThreshold) {
            cur /= kRescaleThreshold;
            prev /= kRescaleThreshold;
            log_scale += kLogRescale;
        }
        out[k + 1] = gaussian_scaled(cur, log_scale, t);
    }
}

template <class T>
T tensor_eval(const MultiIndex& alpha, std::span<const T> x) {
    if (x.size() != alpha.dim())
        throw InputError("tensor_hermite: point has dimension " + std::to_string(x.size()) +
                         ", multi-index has " + std::to_string(alpha.dim()));
    T value = 1.0;
    for (std::size_t j = 0; j < alpha.dim(); ++j) value *= hermite_function(alpha[j], x[j]);
    return value;
}

template <class T>
T expansion_eval(const BasisIndexSet& basis, const Eigen::VectorXd& coeffs, std::span<const T> x) {
    const auto d = static_cast<std::size_t>(basis.dim());
    if (x.size() != d)
        throw InputError("HermiteVector: point has dimension " + std::to_string(x.size()) +
                         ", expected " + std::to_string(d));
    const int n = basis.max_degree();
    std::vector<T> table(d * static_cast<std::size_t>(n + 1));
    for (std::size_t j = 0; j < d; ++j)
        hermite_recurrence<T>(n, x[j], std::span<T>(table).subspan(j * (n + 1), n + 1));
    T sum = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (coeffs[static_cast<Eigen::Index>(i)] == 0.0) continue;
        const MultiIndex& alpha = basis.index_of(i);
        T term = coeffs[static_cast<Eigen::Index>(i)];
        for (std::size_t j = 0; j < d; ++j) term *= table[j * (n + 1) + alpha[j]];
        sum += term;
    }
    return sum;
}

void enumerate(int dim, int remaining, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
    if (static_cast<int>(prefix.size()) == dim) {
        out.emplace_back(prefix);
        return;
    }
    for (int a = 0; a <= remaining; ++a) {
        prefix.push_back(a);
        enumerate(dim, remaining - a, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> components) : components_(std::move(components)) {
    for (int c : components_)
        if (c < 0) throw InputError("MultiIndex: negative component");
}

int MultiIndex::degree() const noexcept {
    return std::accumulate(components_.begin(), components_.end(), 0);
}

double MultiIndex::factorial() const {
    double value = 1.0;
    for (int c : components_) value *= std::tgamma(c + 1.0);
    return value;
}

MultiIndex MultiIndex::shifted(std::size_t axis, int delta) const {
    auto copy = components_;
    copy.at(axis) += delta;
    return MultiIndex(std::move(copy));
}

struct BasisIndexSet::Storage {
    int dim;
    int max_degree;
    std::vector<MultiIndex> indices;
    std::map<MultiIndex, std::size_t> positions;
    std::vector<std::size_t> prefix_sizes;
};

BasisIndexSet::BasisIndexSet(int dim, int max_degree) {
    if (dim < 1) throw InputError("BasisIndexSet: dimension must be at least 1");
    if (max_degree < 0) throw InputError("BasisIndexSet: max_degree must be non-negative");
    auto storage = std::make_shared<Storage>();
    storage->dim = dim;
    storage->max_degree = max_degree;
    std::vector<int> prefix;
    enumerate(dim, max_degree, prefix, storage->indices);
    std::stable_sort(storage->indices.begin(), storage->indices.end(),
                     [](const MultiIndex& a, const MultiIndex& b) {
                         if (a.degree() != b.degree()) return a.degree() < b.degree();
                         return a < b;
                     });
    for (std::size_t i = 0; i < storage->indices.size(); ++i) storage->positions.emplace(storage->indices[i], i);
    storage->prefix_sizes.assign(static_cast<std::size_t>(max_degree) + 1, 0);
    for (const auto& alpha : storage->indices) ++storage->prefix_sizes[alpha.degree()];
    std::partial_sum(storage->prefix_sizes.begin(), storage->prefix_sizes.end(), storage->prefix_sizes.begin());
    storage_ = std::move(storage);
}

int BasisIndexSet::dim() const noexcept { return storage_->dim; }
int BasisIndexSet::max_degree() const noexcept { return storage_->max_degree; }
std::size_t BasisIndexSet::size() const noexcept { return storage_->indices.size(); }

const MultiIndex& BasisIndexSet::index_of(std::size_t position) const { return storage_->indices.at(position); }

std::size_t BasisIndexSet::position_of(const MultiIndex& alpha) const {
    auto found = find(alpha);
    if (!found) throw InputError("BasisIndexSet: multi-index not in basis");
    return *found;
}

std::optional<std::size_t> BasisIndexSet::find(const MultiIndex& alpha) const {
    auto it = storage_->positions.find(alpha);
    if (it == storage_->positions.end()) return std::nullopt;
    return it->second;
}

std::size_t BasisIndexSet::prefix_size(int degree) const {
    if (degree < 0) return 0;
    if (degree >= max_degree()) return size();
    return storage_->prefix_sizes[static_cast<std::size_t>(degree)];
}

std::vector<MultiIndex>::const_iterator BasisIndexSet::begin() const { return storage_->indices.begin(); }
std::vector<MultiIndex>::const_iterator BasisIndexSet::end() const { return storage_->indices.end(); }

std::size_t basis_size(int dim, int max_degree) {
    // binomial(N + d, d) by the multiplicative formula; exact for desk-scale sizes
    std::size_t value = 1;
    for (int i = 1; i <= dim; ++i) value = value * static_cast<std::size_t>(max_degree + i) / static_cast<std::size_t>(i);
    return value;
}

HermiteVector::HermiteVector(BasisIndexSet basis, Eigen::VectorXd coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (static_cast<std::size_t>(coeffs_.size()) != basis_.size())
        throw InputError("HermiteVector: coefficient count does not match basis size");
}

HermiteVector HermiteVector::zero(BasisIndexSet basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    return HermiteVector(std::move(basis), Eigen::VectorXd::Zero(n));
}

HermiteVector HermiteVector::basis_function(BasisIndexSet basis, const MultiIndex& alpha) {
    auto f = zero(std::move(basis));
    f.coeffs_[static_cast<Eigen::Index>(f.basis_.position_of(alpha))] = 1.0;
    return f;
}

HermiteVector HermiteVector::embedded(const BasisIndexSet& larger) const {
    if (larger.dim() != dim() || larger.max_degree() < basis_.max_degree())
        throw InputError("HermiteVector::embedded: target basis must have the same dimension and larger degree");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(larger.size()));
    out.head(coeffs_.size()) = coeffs_;
    return HermiteVector(larger, std::move(out));
}

double HermiteVector::operator()(std::span<const double> x) const { return expansion_eval<double>(basis_, coeffs_, x); }

std::complex<double> HermiteVector::operator()(std::span<const std::complex<double>> z) const {
    return expansion_eval<std::complex<double>>(basis_, coeffs_, z);
}

double hermite_function(int k, double t) {
    std::vector<double> buf(static_cast<std::size_t>(std::max(k, 0)) + 1);
    hermite_recurrence<double>(k, t, buf);
    return buf.back();
}

std::complex<double> hermite_function(int k, std::complex<double> t) {
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(std::max(k, 0)) + 1);
    hermite_recurrence<std::complex<double>>(k, t, buf);
    return buf.back();
}

void hermite_functions(int max_k, double t, std::span<double> out) { hermite_recurrence<double>(max_k, t, out); }

void hermite_functions(int max_k, std::complex<double> t, std::span<std::complex<double>> out) {
    hermite_recurrence<std::complex<double>>(max_k, t, out);
}

double tensor_hermite(const MultiIndex& alpha, std::span<const double> x) { return tensor_eval<double>(alpha, x); }

std::complex<double> tensor_hermite(const MultiIndex& alpha, std::span<const std::complex<double>> z) {
    return tensor_eval<std::complex<double>>(alpha, z);
}

HermiteVector derivative(const HermiteVector& f, int axis) {
    const int d = f.dim();
    if (axis < 0 || axis >= d)
        throw InputError("derivative: axis " + std::to_string(axis) + " outside 0.." + std::to_string(d - 1));
    BasisIndexSet out_basis(d, f.basis().max_degree() + 1);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(out_basis.size()));
    const auto j = static_cast<std::size_t>(axis);
    for (std::size_t i = 0; i < f.basis().size(); ++i) {
        const double c = f.coeffs()[static_cast<Eigen::Index>(i)];
        if (c == 0.0) continue;
        const MultiIndex& alpha = f.basis().index_of(i);
        const double k = alpha[j];
        if (alpha[j] > 0)
            out[static_cast<Eigen::Index>(out_basis.position_of(alpha.shifted(j, -1)))] += c * std::sqrt(k / 2.0);
        out[static_cast<Eigen::Index>(out_basis.position_of(alpha.shifted(j, +1)))] -= c * std::sqrt((k + 1.0) / 2.0);
    }
    return HermiteVector(std::move(out_basis), std::move(out));
}

HermiteVector partial_derivative(const HermiteVector& f, const MultiIndex& alpha) {
    if (static_cast<int>(alpha.dim()) != f.dim()) throw InputError("partial_derivative: dimension mismatch");
    HermiteVector g = f;
    for (std::size_t j = 0; j < alpha.dim(); ++j)
        for (int r = 0; r < alpha[j]; ++r) g = derivative(g, static_cast<int>(j));
    return g;
}

double semigroup_eigenvalue(const MultiIndex& alpha) {
    return 2.0 * alpha.degree() + static_cast<double>(alpha.dim());
}

}  // namespace hermspec
