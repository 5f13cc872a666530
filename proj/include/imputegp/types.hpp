#ifndef IMPUTEGP_TYPES_HPP
#define IMPUTEGP_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace imputegp {

// Feature cells are doubles; a missing cell is a quiet NaN.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = Eigen::VectorXi;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

template <typename Derived>
bool has_missing(const Eigen::DenseBase<Derived>& m)
{
    return m.hasNaN();
}

template <typename Derived>
Index count_missing(const Eigen::DenseBase<Derived>& m)
{
    return m.derived().unaryExpr([](double v) { return is_missing(v) ? 1 : 0; }).template cast<Index>().sum();
}

// Rows selected by an index list, in list order.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime>
take_rows(const Eigen::MatrixBase<Derived>& m, const IndexList& rows)
{
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Derived::ColsAtCompileTime> out(
        static_cast<Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Index>(i)) = m.row(rows[i]);
    }
    return out;
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input files or arguments.
class DataError : public Error {
public:
    using Error::Error;
};

// A non-imputing operator received MISSING cells.
class IncompleteInputError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace imputegp

#endif // IMPUTEGP_TYPES_HPP
