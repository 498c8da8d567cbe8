#include "crossq/models/predictor.hpp"

namespace crossq {

std::vector<double> Predictor::score(const FeatureMatrix &x, YearMonth) const {
    std::vector<double> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = predict(row_span(x, i));
    }
    return out;
}

} // namespace crossq
