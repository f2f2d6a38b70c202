#include "estent/matrix_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "estent/errors.hpp"

namespace estent {

namespace {

void require_square(const Mat& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw ConfigError(std::string(what) + ": matrix must be square and non-empty");
    }
}

}  // namespace

double matrix_measure_inf(const Mat& a) {
    require_square(a, "matrix_measure_inf");
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double row = a(i, i);
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j != i) {
                row += std::abs(a(i, j));
            }
        }
        best = std::max(best, row);
    }
    return best;
}

double induced_norm_inf(const Mat& a) {
    require_square(a, "induced_norm_inf");
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace estent
