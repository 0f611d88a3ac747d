#include "bq/gp.hpp"

#include <cmath>
#include <sstream>

namespace bq {

void NuggetPolicy::validate() const {
    if (!(fixed_a >= 0.0) || !(fixed_b >= 0.0))
        throw std::invalid_argument("nugget: fixed terms must be nonnegative");
    if (dynamic_multipliers.empty())
        throw std::invalid_argument("nugget: ladder must have at least one rung");
    for (std::size_t i = 0; i < dynamic_multipliers.size(); ++i) {
        if (!(dynamic_multipliers[i] >= 0.0))
            throw std::invalid_argument("nugget: ladder entries must be nonnegative");
        if (i > 0 && !(dynamic_multipliers[i] > dynamic_multipliers[i - 1]))
            throw std::invalid_argument("nugget: ladder must be strictly increasing");
    }
}

FactoredSystem::FactoredSystem(Eigen::LLT<Matrix> llt, double lambda_used)
    : llt_(std::move(llt)), lambda_(lambda_used), n_(llt_.rows()) {}

Vector FactoredSystem::solve(const Vector& b) const {
    if (n_ == 0) return Vector();
    return llt_.solve(b);
}

Vector FactoredSystem::solve_lower(const Vector& b) const {
    if (n_ == 0) return Vector();
    return llt_.matrixL().solve(b);
}

double FactoredSystem::log_det() const {
    double s = 0.0;
    const Matrix& m = llt_.matrixLLT();
    for (Eigen::Index i = 0; i < n_; ++i) s += std::log(m(i, i));
    return 2.0 * s;
}

FactoredSystem cholesky_with_nugget(const Matrix& K, const NuggetPolicy& policy) {
    policy.validate();
    const Eigen::Index n = K.rows();
    if (n == 0 || K.cols() != n) throw std::invalid_argument("cholesky: matrix must be square");
    if (!K.allFinite()) throw std::invalid_argument("cholesky: non-finite entries");
    const double base = policy.fixed_a + policy.fixed_b;
    const double abar = K.diagonal().mean() + base;
    for (double m : policy.dynamic_multipliers) {
        const double lambda = base + abar * m;
        Matrix A = K;
        A.diagonal().array() += lambda;
        Eigen::LLT<Matrix> llt(A);
        if (llt.info() == Eigen::Success) return FactoredSystem(std::move(llt), lambda);
    }
    std::ostringstream os;
    os << "cholesky: factorization failed on all " << policy.dynamic_multipliers.size()
       << " nugget rungs (n=" << n << ", mean diagonal " << abar << ", largest nugget "
       << base + abar * policy.dynamic_multipliers.back() << ")";
    throw FactorizationError(os.str());
}

PriorMean PriorMean::constant(double c) {
    return {[c](Point) { return c; }, c};
}

void Dataset::validate() const {
    if (X.rows() != f.size()) throw std::invalid_argument("dataset: |X| != |f|");
    if (!f.allFinite()) throw std::invalid_argument("dataset: non-finite evaluations");
}

void Dataset::append(Point x, double fx) {
    const Eigen::Index n = X.rows();
    if (n > 0 && static_cast<Eigen::Index>(x.size()) != X.cols())
        throw std::invalid_argument("dataset: point dimension mismatch");
    NodeSet Y(n + 1, static_cast<Eigen::Index>(x.size()));
    if (n > 0) Y.topRows(n) = X;
    for (std::size_t j = 0; j < x.size(); ++j) Y(n, static_cast<Eigen::Index>(j)) = x[j];
    X = std::move(Y);
    Vector g(n + 1);
    g.head(n) = f;
    g(n) = fx;
    f = std::move(g);
}

double clamp_variance(double var, double scale, const char* where) {
    if (var >= 0.0) return var;
    if (var >= -1e-8 * std::max(1.0, std::abs(scale))) return 0.0;
    std::ostringstream os;
    os << where << ": variance " << var << " is negative beyond round-off";
    throw Error(os.str());
}

GpMoments gp_posterior_at(const KernelSpec& spec, const PriorMean& prior_mean, const Dataset& data,
                          const FactoredSystem& sys, Point x) {
    const double kxx = kernel_eval(spec, x, x);
    if (data.size() == 0) return {prior_mean(x), kxx};
    if (sys.n() != data.size()) throw std::invalid_argument("gp: factor does not match data");
    const Vector kx = cross_kernel(spec, data.X, x);
    Vector r(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) r(i) = data.f(i) - prior_mean(node(data.X, i));
    const double mean = prior_mean(x) + kx.dot(sys.solve(r));
    const Vector v = sys.solve_lower(kx);
    return {mean, clamp_variance(kxx - v.squaredNorm(), kxx, "gp_posterior_at")};
}

}  // namespace bq
