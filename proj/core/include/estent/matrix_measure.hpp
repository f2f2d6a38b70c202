#pragma once

#include "estent/box.hpp"

namespace estent {

/// Matrix measure (logarithmic norm) induced by the infinity norm:
/// max_i (a_ii + sum_{j != i} |a_ij|). May be negative.
double matrix_measure_inf(const Mat& a);

/// Induced infinity norm: max absolute row sum.
double induced_norm_inf(const Mat& a);

}  // namespace estent
