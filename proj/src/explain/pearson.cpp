#include "hybridtherm/explain/pearson.hpp"

#include <cmath>
#include <stdexcept>

namespace hybridtherm {

DistanceMatrix pearson_distance(const Eigen::MatrixXd& X,
                                const std::vector<std::string>& feature_names) {
    if (X.rows() < 2) throw std::invalid_argument("pearson_distance: needs at least 2 rows");
    if (static_cast<std::size_t>(X.cols()) != feature_names.size())
        throw std::invalid_argument("pearson_distance: name count mismatch");

    const Eigen::Index d = X.cols();
    const Eigen::RowVectorXd mean = X.colwise().mean();
    const Eigen::MatrixXd centered = X.rowwise() - mean;
    Eigen::VectorXd sigma(d);
    for (Eigen::Index j = 0; j < d; ++j)
        sigma[j] = std::sqrt(centered.col(j).squaredNorm() / static_cast<double>(X.rows()));

    DistanceMatrix out;
    out.feature_names = feature_names;
    out.d.setZero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            double dist;
            if (sigma[i] <= 0.0 || sigma[j] <= 0.0) {
                dist = 1.0;  // constant column: maximally distant from everything
            } else {
                const double cov =
                    centered.col(i).dot(centered.col(j)) / static_cast<double>(X.rows());
                const double corr = std::abs(cov / (sigma[i] * sigma[j]));
                dist = std::clamp(1.0 - std::min(corr, 1.0), 0.0, 1.0);
            }
            out.d(i, j) = dist;
            out.d(j, i) = dist;
        }
    }
    return out;
}

}  // namespace hybridtherm
