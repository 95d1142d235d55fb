#pragma once

#include "troptrack/rational.hpp"

namespace troptrack {

Mat mat_identity(std::size_t n);
Mat mat_zero(std::size_t rows, std::size_t cols);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& a, const Vec& v);
Mat mat_transpose(const Mat& a);
bool mat_eq(const Mat& a, const Mat& b);

std::size_t mat_rank(Mat a);

// Basis of {x : a x = 0}, one vector per free column of the row echelon form.
std::vector<Vec> kernel_basis(Mat a);

// Unique solution of a x = b for square invertible a; nullopt if singular.
std::optional<Vec> solve_square(Mat a, Vec b);

// Particular solution of a x = b for any shape (free variables set to zero);
// nullopt when the system is inconsistent.
std::optional<Vec> solve_general(Mat a, Vec b);

// Inverse of a square matrix; nullopt if singular.
std::optional<Mat> mat_inverse(const Mat& a);

Rat mat_det(Mat a);

// Rescale by a positive factor to a primitive integer vector (clears
// denominators, divides by the content). Direction is preserved; zero stays
// zero.
Vec primitive(const Vec& v);

}  // namespace troptrack
