#include "cndisc/series.hpp"

#include <cmath>
#include <string>

#include "cndisc/error.hpp"

namespace cndisc {

SampleSeries::SampleSeries(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) {
        throw DimensionMismatch("sample series: x has " + std::to_string(x_.size()) +
                                " entries but y has " + std::to_string(y_.size()));
    }
    if (x_.size() < 2) {
        throw InvalidArgument("sample series: at least two samples are required");
    }
    for (std::size_t i = 0; i < x_.size(); ++i) {
        if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
            throw InvalidArgument("sample series: non-finite value at index " + std::to_string(i));
        }
        if (i > 0 && !(x_[i] > x_[i - 1])) {
            throw InvalidArgument("sample series: abscissae must be strictly increasing (index " +
                                  std::to_string(i) + ")");
        }
    }
}

SampleSeries SampleSeries::with_y(std::vector<double> y) const {
    return SampleSeries(x_, std::move(y));
}

}  // namespace cndisc
