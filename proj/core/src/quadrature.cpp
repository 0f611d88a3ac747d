#include "bq/quadrature.hpp"

#include <cmath>

namespace bq {

namespace {

std::vector<Eigen::Index> active_rows(const KernelSpec& spec, const NodeSet& X) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        if (spec.family != KernelFamily::BrownianMotion || X(i, 0) != 0.0) rows.push_back(i);
    return rows;
}

NodeSet take_rows(const NodeSet& X, const std::vector<Eigen::Index>& rows) {
    NodeSet Y(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) Y.row(static_cast<Eigen::Index>(k)) = X.row(rows[k]);
    return Y;
}

}  // namespace

Vector ConditionedSystem::full_weights() const {
    Vector out = Vector::Zero(n_total);
    for (std::size_t k = 0; k < active.size(); ++k) out(active[k]) = w(static_cast<Eigen::Index>(k));
    return out;
}

ConditionedSystem condition(const KernelSpec& spec, const Measure& P, const NodeSet& X,
                            const NuggetPolicy& policy) {
    if (X.cols() != spec.dim && X.rows() > 0)
        throw std::invalid_argument("bq: node dimension does not match kernel");
    ConditionedSystem cs;
    cs.spec = spec;
    cs.P = P;
    cs.n_total = X.rows();
    cs.active = active_rows(spec, X);
    cs.X = take_rows(X, cs.active);
    cs.emb = embed(spec, P, cs.X);
    if (cs.X.rows() == 0) {
        cs.X.resize(0, spec.dim);
        cs.w = Vector();
        cs.sigma2 = cs.emb.k_PP;
        cs.sys = FactoredSystem();
        return cs;
    }
    cs.sys = cholesky_with_nugget(gram(spec, cs.X), policy);
    cs.w = cs.sys.solve(cs.emb.k_PX);
    cs.sigma2 = clamp_variance(cs.emb.k_PP - cs.w.dot(cs.emb.k_PX), cs.emb.k_PP, "bq");
    return cs;
}

WeightSolution bq_weights(const KernelSpec& spec, const Measure& P, const NodeSet& X,
                          const NuggetPolicy& policy) {
    if (X.rows() == 0) throw std::invalid_argument("bq_weights: empty node set");
    const ConditionedSystem cs = condition(spec, P, X, policy);
    return {cs.full_weights(), cs.sys.lambda_used()};
}

BQPosterior bq_posterior(const ConditionedSystem& cs, const Dataset& data,
                         const PriorMean& prior_mean) {
    if (data.size() != cs.n_total) throw std::invalid_argument("bq: data does not match system");
    BQPosterior post;
    post.weights = cs.full_weights();
    Vector r(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) r(i) = data.f(i) - prior_mean(node(data.X, i));
    post.mu = prior_mean.integral + post.weights.dot(r);
    post.sigma2 = cs.sigma2;
    post.lambda_used = cs.sys.lambda_used();
    return post;
}

BQPosterior bq_infer(const KernelSpec& spec, const Measure& P, const Dataset& data,
                     const NuggetPolicy& policy, const PriorMean& prior_mean) {
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("bq_infer: empty dataset");
    return bq_posterior(condition(spec, P, data.X, policy), data, prior_mean);
}

Vector normalized_weights(const KernelSpec& spec, const Measure& P, const NodeSet& X,
                          const NuggetPolicy& policy) {
    if (X.rows() == 0) throw std::invalid_argument("normalized_weights: empty node set");
    const ConditionedSystem cs = condition(spec, P, X, policy);
    if (cs.X.rows() == 0) throw std::invalid_argument("normalized_weights: no informative nodes");
    const Vector ones = Vector::Ones(cs.X.rows());
    const Vector a1 = cs.sys.solve(ones);
    const double s = ones.dot(a1);
    Vector w1 = cs.w - a1 * (ones.dot(cs.w) / s) + a1 / s;
    ConditionedSystem tmp = cs;
    tmp.w = w1;
    return tmp.full_weights();
}

double worst_case_error(const KernelSpec& spec, const Measure& P, const Vector& v,
                        const NodeSet& X) {
    if (v.size() != X.rows()) throw std::invalid_argument("worst_case_error: length mismatch");
    const double kpp = initial_variance(spec, P);
    if (X.rows() == 0) return std::sqrt(kpp);
    const EmbeddingVector e = embed(spec, P, X);
    // Brownian nodes at the origin have zero kernel rows; gram() handles them.
    const Matrix K = gram(spec, X);
    const double e2 = kpp - 2.0 * v.dot(e.k_PX) + v.dot(K * v);
    return std::sqrt(std::max(0.0, e2));
}

}  // namespace bq
