#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cndisc {

/// Sorted (x, y) observations. The abscissae are strictly increasing and
/// there are at least two samples; both are checked on construction.
class SampleSeries {
public:
    SampleSeries(std::vector<double> x, std::vector<double> y);

    std::span<const double> x() const noexcept { return x_; }
    std::span<const double> y() const noexcept { return y_; }
    std::size_t size() const noexcept { return x_.size(); }

    /// Copy with the ordinates replaced; abscissae are shared verbatim.
    SampleSeries with_y(std::vector<double> y) const;

private:
    std::vector<double> x_;
    std::vector<double> y_;
};

}  // namespace cndisc
