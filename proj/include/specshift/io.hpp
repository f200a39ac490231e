#ifndef SPECSHIFT_IO_HPP
#define SPECSHIFT_IO_HPP

#include <string>
#include <vector>

#include "specshift/operator_core.hpp"
#include "specshift/piecewise.hpp"

namespace specshift {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

// JSON object {"dim": n, "re": [[...]], "im": [[...]]}; "im" optional.
HermitianOperator parse_matrix_json(const std::string& text);
HermitianOperator load_matrix(const std::string& path);
std::string matrix_to_json(const Matrix& m);

// JSON description of a piecewise polynomial: breakpoints, per-interval
// ascending coefficients in (t - b_k), tail values.
std::string piecewise_to_json(const PiecewisePolynomial& P);
PiecewisePolynomial parse_piecewise_json(const std::string& text);

// CSV with header "t,<name_1>,...": one row per grid point.
std::string sample_csv(const std::vector<double>& grid,
                       const std::vector<std::string>& names,
                       const std::vector<const PiecewisePolynomial*>& funcs);

std::vector<double> make_grid(double min, double max, int count);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace specshift

#endif
