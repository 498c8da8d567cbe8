#include "crossq/models/linear.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "crossq/error.hpp"

namespace crossq::linear {

double LinearModel::predict(std::span<const double> x) const {
    if (static_cast<Eigen::Index>(x.size()) != weights.size()) {
        throw UsageError("input has " + std::to_string(x.size()) + " features, model has " +
                         std::to_string(weights.size()));
    }
    double total = intercept;
    for (std::size_t j = 0; j < x.size(); ++j) {
        total += weights(static_cast<Eigen::Index>(j)) * x[j];
    }
    return total;
}

nlohmann::ordered_json LinearModel::to_json() const {
    nlohmann::ordered_json doc;
    doc["weights"] = std::vector<double>(weights.data(), weights.data() + weights.size());
    doc["intercept"] = intercept;
    return doc;
}

LinearModel LinearModel::from_json(const nlohmann::ordered_json &doc) {
    const auto w = doc.at("weights").get<std::vector<double>>();
    LinearModel m;
    m.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    m.intercept = doc.at("intercept").get<double>();
    return m;
}

LinearModel ols_fit(const FeatureMatrix &x, std::span<const double> y, bool fit_intercept) {
    const Eigen::Index samples = x.rows();
    const Eigen::Index n = x.cols();
    if (static_cast<Eigen::Index>(y.size()) != samples) {
        throw UsageError("target length " + std::to_string(y.size()) + " != sample count " +
                         std::to_string(samples));
    }
    if (samples <= n + 1) {
        throw UsageError("least squares needs more than " + std::to_string(n + 1) + " samples, got " +
                         std::to_string(samples));
    }
    if (!x.allFinite()) {
        throw DataError("non-finite feature value in regression design");
    }

    const Eigen::Index cols = fit_intercept ? n + 1 : n;
    Eigen::MatrixXd design(samples, cols);
    design.leftCols(n) = x;
    if (fit_intercept) {
        design.col(n).setOnes();
    }
    const Eigen::Map<const Eigen::VectorXd> target(y.data(), samples);
    if (!target.allFinite()) {
        throw DataError("non-finite target value in regression");
    }

    Eigen::MatrixXd gram = design.transpose() * design;
    const Eigen::VectorXd rhs = design.transpose() * target;

    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    double rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
    if (llt.info() != Eigen::Success || rcond < 1e-14) {
        gram.diagonal().array() += kRidgeFallback;
        llt.compute(gram);
        rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
        if (llt.info() != Eigen::Success || rcond <= 0.0) {
            throw NumericalError("singular least-squares system, condition estimate " +
                                 (rcond > 0.0 ? std::to_string(1.0 / rcond) : std::string("inf")));
        }
    }
    const Eigen::VectorXd theta = llt.solve(rhs);
    if (!theta.allFinite()) {
        throw NumericalError("least-squares solution is not finite, condition estimate " +
                             std::to_string(1.0 / rcond));
    }

    LinearModel model;
    model.weights = theta.head(n);
    model.intercept = fit_intercept ? theta(n) : 0.0;
    return model;
}

} // namespace crossq::linear
